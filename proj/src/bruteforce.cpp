#include "trollgraph/bruteforce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trollgraph::bruteforce {

namespace {

struct State {
  int i = 0;
  int d = 0;
  std::vector<int> r;
  std::vector<int> b;
};

double state_score(const SnippetGraph& g, const State& st) {
  double s = g.u_i[st.i] + g.u_d[st.d];
  for (std::size_t k = 0; k < g.num_responses(); ++k) {
    s += g.u_r[k][st.r[k]] + g.t_ir[st.i * 3 + st.r[k]] + g.t_dr[st.d * 3 + st.r[k]];
    if (g.has_strategy) {
      s += g.u_b[k][st.b[k]] + g.t_rb[st.r[k] * 14 + st.b[k]];
    }
  }
  return s;
}

// Visits every joint state in lexicographic order of (i, d, r_1, b_1, ...).
template <typename Fn>
void for_each_state(const SnippetGraph& g, Fn&& fn) {
  const std::size_t R = g.num_responses();
  const int nb = g.has_strategy ? 14 : 1;
  State st;
  st.r.assign(R, 0);
  st.b.assign(R, 0);
  for (st.i = 0; st.i < 3; ++st.i) {
    for (st.d = 0; st.d < 3; ++st.d) {
      std::fill(st.r.begin(), st.r.end(), 0);
      std::fill(st.b.begin(), st.b.end(), 0);
      while (true) {
        fn(st);
        // Odometer over (r_k, b_k) pairs, last pair fastest.
        std::size_t k = R;
        bool wrapped = true;
        while (k > 0) {
          --k;
          if (++st.b[k] < nb) {
            wrapped = false;
            break;
          }
          st.b[k] = 0;
          if (++st.r[k] < 3) {
            wrapped = false;
            break;
          }
          st.r[k] = 0;
        }
        if (wrapped) break;
      }
    }
  }
}

}  // namespace

InferenceResult infer(const SnippetGraph& g) {
  const std::size_t R = g.num_responses();

  double max_score = -std::numeric_limits<double>::infinity();
  for_each_state(g, [&](const State& st) { max_score = std::max(max_score, state_score(g, st)); });

  double z = 0.0;
  for_each_state(g, [&](const State& st) { z += std::exp(state_score(g, st) - max_score); });

  InferenceResult res;
  res.log_z = max_score + std::log(z);
  res.p_r.assign(R, {});
  res.p_ir.assign(R, {});
  res.p_dr.assign(R, {});
  if (g.has_strategy) {
    res.p_b.assign(R, {});
    res.p_rb.assign(R, {});
  }
  res.map_r.assign(R, 0);
  if (g.has_strategy) res.map_b.assign(R, 0);

  double best = -std::numeric_limits<double>::infinity();
  for_each_state(g, [&](const State& st) {
    const double score = state_score(g, st);
    const double p = std::exp(score - res.log_z);
    res.p_i[st.i] += p;
    res.p_d[st.d] += p;
    res.p_id[st.i * 3 + st.d] += p;
    for (std::size_t k = 0; k < R; ++k) {
      res.p_r[k][st.r[k]] += p;
      res.p_ir[k][st.i * 3 + st.r[k]] += p;
      res.p_dr[k][st.d * 3 + st.r[k]] += p;
      if (g.has_strategy) {
        res.p_b[k][st.b[k]] += p;
        res.p_rb[k][st.r[k] * 14 + st.b[k]] += p;
      }
    }
    // Strictly-greater acceptance over the lexicographic visit order keeps
    // the lowest-index maximizer.
    if (score > best) {
      best = score;
      res.map_i = st.i;
      res.map_d = st.d;
      res.map_r = st.r;
      if (g.has_strategy) res.map_b = st.b;
    }
  });
  return res;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
    double step) {
  std::vector<double> grad(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double saved = x[j];
    x[j] = saved + step;
    const double hi = f(x);
    x[j] = saved - step;
    const double lo = f(x);
    x[j] = saved;
    grad[j] = (hi - lo) / (2.0 * step);
  }
  return grad;
}

}  // namespace trollgraph::bruteforce
