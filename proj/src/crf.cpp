#include "trollgraph/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trollgraph/parallel.hpp"

namespace trollgraph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot_row(const double* row, const SparseVector& x) {
  double s = 0.0;
  for (const auto& [j, v] : x.entries) s += row[j] * v;
  return s;
}

double log_sum_exp(const double* v, std::size_t n) {
  double m = kNegInf;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

SnippetGraph build_graph_impl(const SnippetFeatures& features, CrfTasks tasks, int dim_ctx,
                              int dim_resp, const double* theta) {
  if (features.responses.empty()) {
    throw std::invalid_argument("snippet has no responses");
  }
  if (features.context.dimension != dim_ctx) {
    throw std::invalid_argument("context dimension mismatch");
  }
  for (const auto& r : features.responses) {
    if (r.dimension != dim_resp) throw std::invalid_argument("response dimension mismatch");
  }

  CrfParams shape;
  shape.tasks = tasks;
  shape.dim_ctx = dim_ctx;
  shape.dim_resp = dim_resp;

  SnippetGraph g;
  g.snippet_id = features.snippet_id;
  g.has_strategy = shape.has_strategy();
  for (int a = 0; a < 3; ++a) {
    g.u_i[a] = theta[shape.offset_b_i() + a] +
               dot_row(theta + shape.offset_w_i() + static_cast<std::size_t>(a) * dim_ctx,
                       features.context);
    g.u_d[a] = theta[shape.offset_b_d() + a] +
               dot_row(theta + shape.offset_w_d() + static_cast<std::size_t>(a) * dim_ctx,
                       features.context);
  }
  const std::size_t R = features.responses.size();
  g.u_r.resize(R);
  if (g.has_strategy) g.u_b.resize(R);
  for (std::size_t k = 0; k < R; ++k) {
    const SparseVector& x = features.responses[k];
    for (int a = 0; a < 3; ++a) {
      g.u_r[k][a] = theta[shape.offset_b_r() + a] +
                    dot_row(theta + shape.offset_w_r() + static_cast<std::size_t>(a) * dim_resp,
                            x);
    }
    if (g.has_strategy) {
      for (int b = 0; b < 14; ++b) {
        g.u_b[k][b] =
            theta[shape.offset_b_b() + b] +
            dot_row(theta + shape.offset_w_b() + static_cast<std::size_t>(b) * dim_resp, x);
      }
    }
  }
  for (int t = 0; t < 9; ++t) {
    g.t_ir[t] = theta[shape.offset_t_ir() + t];
    g.t_dr[t] = theta[shape.offset_t_dr() + t];
  }
  if (g.has_strategy) {
    for (int t = 0; t < 42; ++t) g.t_rb[t] = theta[shape.offset_t_rb() + t];
  }
  return g;
}

void check_example(const CrfExample& ex, bool strategy) {
  const std::size_t R = ex.features.responses.size();
  if (R == 0) throw std::invalid_argument("snippet has no responses");
  if (ex.gold_r.size() != R) throw std::invalid_argument("gold interpretation arity mismatch");
  if (strategy && ex.gold_b.size() != R) {
    throw std::invalid_argument("gold strategy arity mismatch");
  }
  if (ex.gold_i < 0 || ex.gold_i >= 3 || ex.gold_d < 0 || ex.gold_d >= 3) {
    throw std::invalid_argument("gold label out of range");
  }
  for (int r : ex.gold_r) {
    if (r < 0 || r >= 3) throw std::invalid_argument("gold label out of range");
  }
  if (strategy) {
    for (int b : ex.gold_b) {
      if (b < 0 || b >= 14) throw std::invalid_argument("gold label out of range");
    }
  }
}

double gold_score(const SnippetGraph& g, const CrfExample& ex) {
  double s = g.u_i[ex.gold_i] + g.u_d[ex.gold_d];
  for (std::size_t k = 0; k < g.num_responses(); ++k) {
    const int r = ex.gold_r[k];
    s += g.u_r[k][r] + g.t_ir[ex.gold_i * 3 + r] + g.t_dr[ex.gold_d * 3 + r];
    if (g.has_strategy) {
      const int b = ex.gold_b[k];
      s += g.u_b[k][b] + g.t_rb[r * 14 + b];
    }
  }
  return s;
}

// Expected minus empirical feature counts for one snippet, added into grad.
void accumulate_snippet(const CrfParams& shape, const double* theta, const CrfExample& ex,
                        double& value, std::vector<double>& grad) {
  const SnippetGraph g =
      build_graph_impl(ex.features, shape.tasks, shape.dim_ctx, shape.dim_resp, theta);
  const InferenceResult res = infer_exact(g);
  value += res.log_z - gold_score(g, ex);

  const int dc = shape.dim_ctx;
  const int dr = shape.dim_resp;
  for (int a = 0; a < 3; ++a) {
    const double ci = res.p_i[a] - (a == ex.gold_i ? 1.0 : 0.0);
    const double cd = res.p_d[a] - (a == ex.gold_d ? 1.0 : 0.0);
    grad[shape.offset_b_i() + a] += ci;
    grad[shape.offset_b_d() + a] += cd;
    double* wi = grad.data() + shape.offset_w_i() + static_cast<std::size_t>(a) * dc;
    double* wd = grad.data() + shape.offset_w_d() + static_cast<std::size_t>(a) * dc;
    for (const auto& [j, v] : ex.features.context.entries) {
      wi[j] += ci * v;
      wd[j] += cd * v;
    }
  }
  for (std::size_t k = 0; k < g.num_responses(); ++k) {
    const SparseVector& x = ex.features.responses[k];
    for (int a = 0; a < 3; ++a) {
      const double cr = res.p_r[k][a] - (a == ex.gold_r[k] ? 1.0 : 0.0);
      grad[shape.offset_b_r() + a] += cr;
      double* wr = grad.data() + shape.offset_w_r() + static_cast<std::size_t>(a) * dr;
      for (const auto& [j, v] : x.entries) wr[j] += cr * v;
    }
    for (int t = 0; t < 9; ++t) {
      const bool gi = t / 3 == ex.gold_i && t % 3 == ex.gold_r[k];
      const bool gd = t / 3 == ex.gold_d && t % 3 == ex.gold_r[k];
      grad[shape.offset_t_ir() + t] += res.p_ir[k][t] - (gi ? 1.0 : 0.0);
      grad[shape.offset_t_dr() + t] += res.p_dr[k][t] - (gd ? 1.0 : 0.0);
    }
    if (g.has_strategy) {
      for (int b = 0; b < 14; ++b) {
        const double cb = res.p_b[k][b] - (b == ex.gold_b[k] ? 1.0 : 0.0);
        grad[shape.offset_b_b() + b] += cb;
        double* wb = grad.data() + shape.offset_w_b() + static_cast<std::size_t>(b) * dr;
        for (const auto& [j, v] : x.entries) wb[j] += cb * v;
      }
      for (int t = 0; t < 42; ++t) {
        const bool gold = t / 14 == ex.gold_r[k] && t % 14 == ex.gold_b[k];
        grad[shape.offset_t_rb() + t] += res.p_rb[k][t] - (gold ? 1.0 : 0.0);
      }
    }
  }
}

// l2 covers the weight matrices and the pairwise tables, never the biases.
void add_l2(const CrfParams& shape, const std::vector<double>& theta, double l2, double& value,
            std::vector<double>& grad) {
  if (l2 == 0.0) return;
  std::vector<std::pair<std::size_t, std::size_t>> ranges = {
      {shape.offset_w_i(), shape.offset_b_i()},
      {shape.offset_w_d(), shape.offset_b_d()},
      {shape.offset_w_r(), shape.offset_b_r()},
      {shape.offset_t_ir(), shape.size()},
  };
  if (shape.has_strategy()) ranges.push_back({shape.offset_w_b(), shape.offset_b_b()});
  double sq = 0.0;
  for (const auto& [begin, end] : ranges) {
    for (std::size_t j = begin; j < end; ++j) {
      sq += theta[j] * theta[j];
      grad[j] += l2 * theta[j];
    }
  }
  value += 0.5 * l2 * sq;
}

void check_dataset(const std::vector<CrfExample>& dataset, const CrfParams& shape,
                   const std::vector<double>& theta) {
  if (dataset.empty()) throw std::invalid_argument("dataset is empty");
  if (theta.size() != shape.size()) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  for (const CrfExample& ex : dataset) {
    check_example(ex, shape.has_strategy());
    if (ex.features.context.dimension != shape.dim_ctx) {
      throw std::invalid_argument("context dimension mismatch");
    }
    for (const SparseVector& r : ex.features.responses) {
      if (r.dimension != shape.dim_resp) {
        throw std::invalid_argument("response dimension mismatch");
      }
    }
  }
}

}  // namespace

CrfParams CrfParams::zeros(CrfTasks tasks, int dim_ctx, int dim_resp) {
  CrfParams p;
  p.tasks = tasks;
  p.dim_ctx = dim_ctx;
  p.dim_resp = dim_resp;
  p.theta.assign(p.size(), 0.0);
  return p;
}

SnippetGraph build_snippet_graph(const SnippetFeatures& features, const CrfParams& params) {
  if (params.theta.size() != params.size()) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  return build_graph_impl(features, params.tasks, params.dim_ctx, params.dim_resp,
                          params.theta.data());
}

InferenceResult infer_exact(const SnippetGraph& g) {
  const std::size_t R = g.num_responses();

  // Eliminate b_k into r_k: c[k][r] = lse_b(u_b + t_rb), and the max version
  // with its argmax for MAP decoding.
  std::vector<std::array<double, 3>> c(R), cmax(R);
  std::vector<std::array<int, 3>> carg(R);
  for (std::size_t k = 0; k < R; ++k) {
    for (int r = 0; r < 3; ++r) {
      if (!g.has_strategy) {
        c[k][r] = 0.0;
        cmax[k][r] = 0.0;
        carg[k][r] = 0;
        continue;
      }
      std::array<double, 14> vals{};
      double best = kNegInf;
      int best_b = 0;
      for (int b = 0; b < 14; ++b) {
        vals[b] = g.u_b[k][b] + g.t_rb[r * 14 + b];
        if (vals[b] > best) {
          best = vals[b];
          best_b = b;
        }
      }
      c[k][r] = log_sum_exp(vals.data(), 14);
      cmax[k][r] = best;
      carg[k][r] = best_b;
    }
  }

  // Condition on (i, d): s[idx][k][r] and its per-response log-sum m.
  std::vector<std::array<double, 3>> s(9 * R);
  std::vector<double> m(9 * R);
  std::array<double, 9> log_z_id{};
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 3; ++d) {
      const int idx = i * 3 + d;
      double tot = g.u_i[i] + g.u_d[d];
      for (std::size_t k = 0; k < R; ++k) {
        std::array<double, 3>& sk = s[idx * R + k];
        for (int r = 0; r < 3; ++r) {
          sk[r] = g.u_r[k][r] + g.t_ir[i * 3 + r] + g.t_dr[d * 3 + r] + c[k][r];
        }
        m[idx * R + k] = log_sum_exp(sk.data(), 3);
        tot += m[idx * R + k];
      }
      log_z_id[idx] = tot;
    }
  }

  InferenceResult res;
  res.log_z = log_sum_exp(log_z_id.data(), 9);
  for (int idx = 0; idx < 9; ++idx) {
    res.p_id[idx] = std::exp(log_z_id[idx] - res.log_z);
    res.p_i[idx / 3] += res.p_id[idx];
    res.p_d[idx % 3] += res.p_id[idx];
  }

  res.p_r.assign(R, {});
  res.p_ir.assign(R, {});
  res.p_dr.assign(R, {});
  if (g.has_strategy) {
    res.p_b.assign(R, {});
    res.p_rb.assign(R, {});
  }
  for (std::size_t k = 0; k < R; ++k) {
    for (int idx = 0; idx < 9; ++idx) {
      const int i = idx / 3;
      const int d = idx % 3;
      for (int r = 0; r < 3; ++r) {
        const double pr = res.p_id[idx] * std::exp(s[idx * R + k][r] - m[idx * R + k]);
        res.p_r[k][r] += pr;
        res.p_ir[k][i * 3 + r] += pr;
        res.p_dr[k][d * 3 + r] += pr;
      }
    }
    if (g.has_strategy) {
      for (int r = 0; r < 3; ++r) {
        for (int b = 0; b < 14; ++b) {
          const double p =
              res.p_r[k][r] * std::exp(g.u_b[k][b] + g.t_rb[r * 14 + b] - c[k][r]);
          res.p_rb[k][r * 14 + b] = p;
          res.p_b[k][b] += p;
        }
      }
    }
  }

  // MAP: max over r of the max-eliminated scores, then scan (i, d) pairs in
  // index order so ties land on the lowest indices.
  double best_total = kNegInf;
  int best_idx = 0;
  for (int idx = 0; idx < 9; ++idx) {
    double tot = g.u_i[idx / 3] + g.u_d[idx % 3];
    for (std::size_t k = 0; k < R; ++k) {
      double best_r = kNegInf;
      for (int r = 0; r < 3; ++r) {
        const double v = g.u_r[k][r] + g.t_ir[(idx / 3) * 3 + r] + g.t_dr[(idx % 3) * 3 + r] +
                         cmax[k][r];
        if (v > best_r) best_r = v;
      }
      tot += best_r;
    }
    if (tot > best_total) {
      best_total = tot;
      best_idx = idx;
    }
  }
  res.map_i = best_idx / 3;
  res.map_d = best_idx % 3;
  res.map_r.resize(R);
  if (g.has_strategy) res.map_b.resize(R);
  for (std::size_t k = 0; k < R; ++k) {
    double best_r = kNegInf;
    int arg_r = 0;
    for (int r = 0; r < 3; ++r) {
      const double v = g.u_r[k][r] + g.t_ir[res.map_i * 3 + r] + g.t_dr[res.map_d * 3 + r] +
                       cmax[k][r];
      if (v > best_r) {
        best_r = v;
        arg_r = r;
      }
    }
    res.map_r[k] = arg_r;
    if (g.has_strategy) res.map_b[k] = carg[k][arg_r];
  }
  return res;
}

ObjectiveEvaluation crf_objective(const std::vector<CrfExample>& dataset, const CrfParams& shape,
                                  const std::vector<double>& theta, double l2, int threads) {
  check_dataset(dataset, shape, theta);
  BlockAccum total = blocked_reduce(
      dataset.size(), theta.size(), threads,
      [&](std::size_t, std::size_t begin, std::size_t end, BlockAccum& acc) {
        for (std::size_t i = begin; i < end; ++i) {
          accumulate_snippet(shape, theta.data(), dataset[i], acc.value, acc.vec);
        }
      });
  add_l2(shape, theta, l2, total.value, total.vec);
  return {total.value, std::move(total.vec)};
}

CrfParams train_crf(const std::vector<CrfExample>& dataset, CrfTasks tasks, int dim_ctx,
                    int dim_resp, double l2, int threads, const OptimConfig& optim) {
  CrfParams shape = CrfParams::zeros(tasks, dim_ctx, dim_resp);
  MinimizeResult res = minimize(
      [&](const std::vector<double>& theta) {
        return crf_objective(dataset, shape, theta, l2, threads);
      },
      shape.theta, optim);
  shape.theta = std::move(res.x);
  return shape;
}

CrfPrediction predict_crf(const CrfParams& params, const SnippetFeatures& features,
                          DecodeRule rule) {
  const SnippetGraph g = build_snippet_graph(features, params);
  const InferenceResult res = infer_exact(g);
  CrfPrediction out;
  if (rule == DecodeRule::Map) {
    out.intention = res.map_i;
    out.disclosure = res.map_d;
    out.interpretations = res.map_r;
    out.strategies = res.map_b;
    return out;
  }
  auto argmax = [](const double* p, int n) {
    int best = 0;
    for (int a = 1; a < n; ++a) {
      if (p[a] > p[best]) best = a;
    }
    return best;
  };
  out.intention = argmax(res.p_i.data(), 3);
  out.disclosure = argmax(res.p_d.data(), 3);
  for (std::size_t k = 0; k < g.num_responses(); ++k) {
    out.interpretations.push_back(argmax(res.p_r[k].data(), 3));
    if (g.has_strategy) out.strategies.push_back(argmax(res.p_b[k].data(), 14));
  }
  return out;
}

namespace reference {

ObjectiveEvaluation crf_objective_serial(const std::vector<CrfExample>& dataset,
                                         const CrfParams& shape,
                                         const std::vector<double>& theta, double l2) {
  check_dataset(dataset, shape, theta);
  double value = 0.0;
  std::vector<double> grad(theta.size(), 0.0);
  for (const CrfExample& ex : dataset) {
    accumulate_snippet(shape, theta.data(), ex, value, grad);
  }
  add_l2(shape, theta, l2, value, grad);
  return {value, std::move(grad)};
}

}  // namespace reference

}  // namespace trollgraph
