#include "trollgraph/optim.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace trollgraph {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

bool all_finite(const ObjectiveEvaluation& e) {
  if (!std::isfinite(e.value)) return false;
  for (double g : e.gradient) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

struct HistoryPair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

// H*g via the two-loop recursion, H0 = gamma*I from the most recent pair.
std::vector<double> two_loop(const std::vector<double>& grad,
                             const std::deque<HistoryPair>& history) {
  std::vector<double> q = grad;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * dot(history[i].s, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] -= alpha[i] * history[i].y[j];
  }
  if (!history.empty()) {
    const HistoryPair& last = history.back();
    const double yy = dot(last.y, last.y);
    if (yy > 0) {
      const double gamma = dot(last.s, last.y) / yy;
      for (double& v : q) v *= gamma;
    }
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * dot(history[i].y, q);
    for (std::size_t j = 0; j < q.size(); ++j) q[j] += (alpha[i] - beta) * history[i].s[j];
  }
  return q;
}

struct ProbePoint {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative g(x+alpha*d).d
  ObjectiveEvaluation eval;
  std::vector<double> x;
};

struct LineSearchState {
  const Objective& objective;
  const std::vector<double>& x0;
  const std::vector<double>& direction;
  int evals_left;

  ProbePoint probe(double alpha) {
    ProbePoint p;
    p.alpha = alpha;
    p.x = x0;
    for (std::size_t j = 0; j < p.x.size(); ++j) p.x[j] += alpha * direction[j];
    p.eval = objective(p.x);
    if (!all_finite(p.eval)) {
      throw std::runtime_error("non-finite objective or gradient during line search");
    }
    p.value = p.eval.value;
    p.slope = dot(p.eval.gradient, direction);
    --evals_left;
    return p;
  }
};

// Strong Wolfe line search: bracketing phase with doubling steps, then a
// bisection zoom on the bracketed interval.
bool wolfe_search(LineSearchState& ls, double value0, double slope0, double c1, double c2,
                  ProbePoint& out) {
  const double wolfe_slope = -c2 * slope0;

  auto zoom = [&](ProbePoint lo, ProbePoint hi) -> bool {
    while (ls.evals_left > 0) {
      if (std::fabs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::fabs(lo.alpha))) return false;
      ProbePoint mid = ls.probe(0.5 * (lo.alpha + hi.alpha));
      if (mid.value > value0 + c1 * mid.alpha * slope0 || mid.value >= lo.value) {
        hi = std::move(mid);
        continue;
      }
      if (std::fabs(mid.slope) <= wolfe_slope) {
        out = std::move(mid);
        return true;
      }
      if (mid.slope * (hi.alpha - lo.alpha) >= 0) hi = lo;
      lo = std::move(mid);
    }
    return false;
  };

  ProbePoint prev;
  prev.alpha = 0.0;
  prev.value = value0;
  prev.slope = slope0;
  double alpha = 1.0;
  bool first = true;
  while (ls.evals_left > 0) {
    ProbePoint cur = ls.probe(alpha);
    if (cur.value > value0 + c1 * alpha * slope0 || (!first && cur.value >= prev.value)) {
      return zoom(std::move(prev), std::move(cur));
    }
    if (std::fabs(cur.slope) <= wolfe_slope) {
      out = std::move(cur);
      return true;
    }
    if (cur.slope >= 0) {
      return zoom(std::move(cur), std::move(prev));
    }
    prev = std::move(cur);
    alpha = std::min(2.0 * alpha, 1e12);
    first = false;
  }
  return false;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, std::vector<double> x0,
                        const OptimConfig& config) {
  if (config.memory_pairs < 1) throw std::invalid_argument("memory_pairs must be >= 1");
  if (config.gradient_tolerance <= 0) throw std::invalid_argument("gradient_tolerance must be > 0");
  if (config.sufficient_decrease <= 0 || config.curvature <= config.sufficient_decrease ||
      config.curvature >= 1) {
    throw std::invalid_argument("line search requires 0 < c1 < c2 < 1");
  }

  MinimizeResult result;
  ObjectiveEvaluation eval = objective(x0);
  if (!all_finite(eval)) throw std::runtime_error("non-finite objective or gradient at x0");
  if (eval.gradient.size() != x0.size()) {
    throw std::invalid_argument("gradient length does not match parameter length");
  }

  std::vector<double> x = std::move(x0);
  result.trace.push_back(eval.value);
  std::deque<HistoryPair> history;

  while (result.iterations < config.max_iterations) {
    if (max_norm(eval.gradient) < config.gradient_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> direction = two_loop(eval.gradient, history);
    for (double& v : direction) v = -v;
    double slope0 = dot(eval.gradient, direction);
    bool steepest = false;
    if (!(slope0 < 0)) {
      // Degenerate curvature estimate; restart from steepest descent.
      history.clear();
      direction = eval.gradient;
      for (double& v : direction) v = -v;
      slope0 = -dot(eval.gradient, eval.gradient);
      steepest = true;
    }

    ProbePoint accepted;
    LineSearchState ls{objective, x, direction, config.max_line_search};
    bool ok = wolfe_search(ls, eval.value, slope0, config.sufficient_decrease, config.curvature,
                           accepted);
    if (!ok && !steepest) {
      history.clear();
      direction = eval.gradient;
      for (double& v : direction) v = -v;
      slope0 = -dot(eval.gradient, eval.gradient);
      LineSearchState retry{objective, x, direction, config.max_line_search};
      ok = wolfe_search(retry, eval.value, slope0, config.sufficient_decrease, config.curvature,
                        accepted);
      steepest = true;
    }
    if (!ok) {
      result.message = "line search failed on steepest-descent fallback";
      break;
    }

    std::vector<double> s(x.size()), y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      s[j] = accepted.x[j] - x[j];
      y[j] = accepted.eval.gradient[j] - eval.gradient[j];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
      history.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(history.size()) > config.memory_pairs) history.pop_front();
    }

    x = std::move(accepted.x);
    eval = std::move(accepted.eval);
    ++result.iterations;
    result.trace.push_back(eval.value);
  }

  if (!result.converged && result.message.empty()) {
    if (max_norm(eval.gradient) < config.gradient_tolerance) {
      result.converged = true;
    } else {
      result.message = "iteration cap reached";
    }
  }
  result.x = std::move(x);
  result.value = eval.value;
  return result;
}

}  // namespace trollgraph
