#include "trollgraph/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trollgraph/parallel.hpp"

namespace trollgraph {

namespace {

void check_inputs(const std::vector<double>& params, const std::vector<SparseVector>& examples,
                  const std::vector<int>& labels, int num_classes, int dimension) {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (dimension < 0) throw std::invalid_argument("dimension must be >= 0");
  if (examples.size() != labels.size()) {
    throw std::invalid_argument("examples and labels differ in length");
  }
  if (params.size() != LogRegModel::param_count(num_classes, dimension)) {
    throw std::invalid_argument("parameter vector has the wrong length");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw std::invalid_argument("label out of range");
  }
  for (const SparseVector& x : examples) {
    if (x.dimension != dimension) throw std::invalid_argument("example dimension mismatch");
  }
}

std::vector<double> class_scores(const std::vector<double>& params, const SparseVector& x,
                                 int num_classes, int dimension) {
  std::vector<double> scores(num_classes);
  const std::size_t bias0 = static_cast<std::size_t>(num_classes) * dimension;
  for (int k = 0; k < num_classes; ++k) {
    double s = params[bias0 + k];
    const std::size_t row = static_cast<std::size_t>(k) * dimension;
    for (const auto& [j, v] : x.entries) s += params[row + j] * v;
    scores[k] = s;
  }
  return scores;
}

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Adds one example's loss and gradient into the accumulator.
void accumulate_example(const std::vector<double>& params, const SparseVector& x, int y,
                        int num_classes, int dimension, double& value,
                        std::vector<double>& grad) {
  const std::vector<double> scores = class_scores(params, x, num_classes, dimension);
  const double lse = log_sum_exp(scores);
  value += lse - scores[y];
  const std::size_t bias0 = static_cast<std::size_t>(num_classes) * dimension;
  for (int k = 0; k < num_classes; ++k) {
    const double coef = std::exp(scores[k] - lse) - (k == y ? 1.0 : 0.0);
    grad[bias0 + k] += coef;
    const std::size_t row = static_cast<std::size_t>(k) * dimension;
    for (const auto& [j, v] : x.entries) grad[row + j] += coef * v;
  }
}

void add_l2(const std::vector<double>& params, int num_classes, int dimension, double l2,
            double& value, std::vector<double>& grad) {
  if (l2 == 0.0) return;
  const std::size_t weights = static_cast<std::size_t>(num_classes) * dimension;
  double sq = 0.0;
  for (std::size_t j = 0; j < weights; ++j) {
    sq += params[j] * params[j];
    grad[j] += l2 * params[j];
  }
  value += 0.5 * l2 * sq;
}

}  // namespace

ObjectiveEvaluation logreg_objective(const std::vector<double>& params,
                                     const std::vector<SparseVector>& examples,
                                     const std::vector<int>& labels, int num_classes,
                                     int dimension, double l2, int threads) {
  check_inputs(params, examples, labels, num_classes, dimension);
  BlockAccum total = blocked_reduce(
      examples.size(), params.size(), threads,
      [&](std::size_t, std::size_t begin, std::size_t end, BlockAccum& acc) {
        for (std::size_t i = begin; i < end; ++i) {
          accumulate_example(params, examples[i], labels[i], num_classes, dimension, acc.value,
                             acc.vec);
        }
      });
  add_l2(params, num_classes, dimension, l2, total.value, total.vec);
  return {total.value, std::move(total.vec)};
}

LogRegModel train_logreg(const std::vector<SparseVector>& examples,
                         const std::vector<int>& labels, int num_classes, int dimension,
                         double l2, int threads, const OptimConfig& optim) {
  if (labels.empty()) throw std::invalid_argument("no training examples");
  if (std::count(labels.begin(), labels.end(), labels.front()) ==
      static_cast<long>(labels.size())) {
    throw std::invalid_argument("training labels are all identical");
  }
  LogRegModel model;
  model.num_classes = num_classes;
  model.dimension = dimension;
  std::vector<double> x0(LogRegModel::param_count(num_classes, dimension), 0.0);
  MinimizeResult res = minimize(
      [&](const std::vector<double>& p) {
        return logreg_objective(p, examples, labels, num_classes, dimension, l2, threads);
      },
      std::move(x0), optim);
  model.params = std::move(res.x);
  return model;
}

std::vector<double> logreg_log_probs(const LogRegModel& model, const SparseVector& x) {
  if (x.dimension != model.dimension) throw std::invalid_argument("dimension mismatch");
  std::vector<double> scores = class_scores(model.params, x, model.num_classes, model.dimension);
  const double lse = log_sum_exp(scores);
  for (double& s : scores) s -= lse;
  return scores;
}

int predict_logreg(const LogRegModel& model, const SparseVector& x) {
  if (x.dimension != model.dimension) throw std::invalid_argument("dimension mismatch");
  const std::vector<double> scores =
      class_scores(model.params, x, model.num_classes, model.dimension);
  int best = 0;
  for (int k = 1; k < model.num_classes; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

namespace reference {

ObjectiveEvaluation logreg_objective_serial(const std::vector<double>& params,
                                            const std::vector<SparseVector>& examples,
                                            const std::vector<int>& labels, int num_classes,
                                            int dimension, double l2) {
  check_inputs(params, examples, labels, num_classes, dimension);
  double value = 0.0;
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    accumulate_example(params, examples[i], labels[i], num_classes, dimension, value, grad);
  }
  add_l2(params, num_classes, dimension, l2, value, grad);
  return {value, std::move(grad)};
}

}  // namespace reference

}  // namespace trollgraph
