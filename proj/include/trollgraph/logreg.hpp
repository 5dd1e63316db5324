#pragma once

#include <vector>

#include "trollgraph/features.hpp"
#include "trollgraph/optim.hpp"

namespace trollgraph {

// Multinomial logistic regression. Parameters are stored flat:
// [W row-major num_classes x dimension | biases num_classes].
struct LogRegModel {
  int num_classes = 0;
  int dimension = 0;
  std::vector<double> params;

  double weight(int k, int j) const {
    return params[static_cast<std::size_t>(k) * dimension + j];
  }
  double bias(int k) const {
    return params[static_cast<std::size_t>(num_classes) * dimension + k];
  }
  static std::size_t param_count(int num_classes, int dimension) {
    return static_cast<std::size_t>(num_classes) * dimension + num_classes;
  }
};

// Regularized negative log-likelihood and its gradient. l2 penalizes the
// weight matrix only, never the biases. Examples are reduced with
// blocked_reduce, so the result is identical for any thread count.
ObjectiveEvaluation logreg_objective(const std::vector<double>& params,
                                     const std::vector<SparseVector>& examples,
                                     const std::vector<int>& labels, int num_classes,
                                     int dimension, double l2, int threads);

// Trains from a zero start with L-BFGS.
LogRegModel train_logreg(const std::vector<SparseVector>& examples,
                         const std::vector<int>& labels, int num_classes, int dimension,
                         double l2, int threads, const OptimConfig& optim = OptimConfig{});

// Log of the class posterior, length num_classes.
std::vector<double> logreg_log_probs(const LogRegModel& model, const SparseVector& x);

// Argmax class; ties resolve to the lowest class index.
int predict_logreg(const LogRegModel& model, const SparseVector& x);

namespace reference {

// Serial left-fold over examples, kept as the oracle for the blocked version.
ObjectiveEvaluation logreg_objective_serial(const std::vector<double>& params,
                                            const std::vector<SparseVector>& examples,
                                            const std::vector<int>& labels, int num_classes,
                                            int dimension, double l2);

}  // namespace reference

}  // namespace trollgraph
