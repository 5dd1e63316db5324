// Times the OpenMP-blocked objectives against their serial reference
// implementations on synthetic data and reports speedups plus the largest
// value/gradient deviation between the two.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "trollgraph/crf.hpp"
#include "trollgraph/logreg.hpp"

using namespace trollgraph;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    fn();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

double max_abs_diff(const ObjectiveEvaluation& a, const ObjectiveEvaluation& b) {
  double m = std::abs(a.value - b.value);
  for (std::size_t i = 0; i < a.gradient.size(); ++i) {
    m = std::max(m, std::abs(a.gradient[i] - b.gradient[i]));
  }
  return m;
}

SparseVector random_sparse(std::mt19937_64& rng, int dim, double density) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  SparseVector v;
  v.dimension = dim;
  for (int j = 0; j < dim; ++j) {
    if (coin(rng) < density) v.entries.emplace_back(j, value(rng));
  }
  return v;
}

}  // namespace

int main() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("benchmarking blocked objectives against serial references (%d threads)\n\n",
              threads);

  {
    const int n = 4000, dim = 300, classes = 14;
    std::vector<SparseVector> xs;
    std::vector<int> ys;
    for (int i = 0; i < n; ++i) {
      xs.push_back(random_sparse(rng, dim, 0.15));
      ys.push_back(static_cast<int>(rng() % classes));
    }
    std::vector<double> params(LogRegModel::param_count(classes, dim));
    for (double& p : params) p = dist(rng);

    ObjectiveEvaluation serial, blocked;
    const double t_serial = time_best_of(3, [&] {
      serial = reference::logreg_objective_serial(params, xs, ys, classes, dim, 0.5);
    });
    const double t_blocked = time_best_of(3, [&] {
      blocked = logreg_objective(params, xs, ys, classes, dim, 0.5, 0);
    });
    std::printf("logreg objective  n=%d dim=%d classes=%d\n", n, dim, classes);
    std::printf("  serial reference: %8.2f ms\n", t_serial * 1e3);
    std::printf("  blocked parallel: %8.2f ms   speedup %.2fx   max deviation %.3e\n\n",
                t_blocked * 1e3, t_serial / t_blocked, max_abs_diff(serial, blocked));
  }

  {
    const int n = 600, dim_ctx = 120, dim_resp = 80;
    std::vector<CrfExample> data;
    for (int i = 0; i < n; ++i) {
      CrfExample ex;
      ex.features.snippet_id = "b" + std::to_string(i);
      ex.features.context = random_sparse(rng, dim_ctx, 0.1);
      const int responses = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < responses; ++k) {
        ex.features.responses.push_back(random_sparse(rng, dim_resp, 0.1));
        ex.gold_r.push_back(static_cast<int>(rng() % 3));
        ex.gold_b.push_back(static_cast<int>(rng() % 14));
      }
      ex.gold_i = static_cast<int>(rng() % 3);
      ex.gold_d = static_cast<int>(rng() % 3);
      data.push_back(ex);
    }
    CrfParams shape = CrfParams::zeros(CrfTasks::All, dim_ctx, dim_resp);
    std::vector<double> theta(shape.size());
    for (double& t : theta) t = dist(rng);

    ObjectiveEvaluation serial, blocked;
    const double t_serial = time_best_of(3, [&] {
      serial = reference::crf_objective_serial(data, shape, theta, 0.5);
    });
    const double t_blocked =
        time_best_of(3, [&] { blocked = crf_objective(data, shape, theta, 0.5, 0); });
    std::printf("crf objective     n=%d dim_ctx=%d dim_resp=%d\n", n, dim_ctx, dim_resp);
    std::printf("  serial reference: %8.2f ms\n", t_serial * 1e3);
    std::printf("  blocked parallel: %8.2f ms   speedup %.2fx   max deviation %.3e\n",
                t_blocked * 1e3, t_serial / t_blocked, max_abs_diff(serial, blocked));
  }
  return 0;
}
