#pragma once

#include <array>
#include <string>
#include <vector>

#include "trollgraph/features.hpp"
#include "trollgraph/labels.hpp"
#include "trollgraph/optim.hpp"

namespace trollgraph {

// Which variables the joint model carries. NoStrategy drops the b variables
// together with their unary block and the r-b table (the 2-pass first stage).
enum class CrfTasks { All, NoStrategy };

// Flat parameter vector for the factor graph. Layout, in order:
//   W_I (3 x dim_ctx), b_I (3), W_D (3 x dim_ctx), b_D (3),
//   W_R (3 x dim_resp), b_R (3), [W_B (14 x dim_resp), b_B (14)],
//   T_IR (3x3, i-major), T_DR (3x3, d-major), [T_RB (3x14, r-major)].
// Bracketed blocks exist only when tasks == All. Weight rows are row-major.
struct CrfParams {
  CrfTasks tasks = CrfTasks::All;
  int dim_ctx = 0;
  int dim_resp = 0;
  std::vector<double> theta;

  bool has_strategy() const { return tasks == CrfTasks::All; }

  std::size_t offset_w_i() const { return 0; }
  std::size_t offset_b_i() const { return 3u * dim_ctx; }
  std::size_t offset_w_d() const { return offset_b_i() + 3; }
  std::size_t offset_b_d() const { return offset_w_d() + 3u * dim_ctx; }
  std::size_t offset_w_r() const { return offset_b_d() + 3; }
  std::size_t offset_b_r() const { return offset_w_r() + 3u * dim_resp; }
  std::size_t offset_w_b() const { return offset_b_r() + 3; }
  std::size_t offset_b_b() const { return offset_w_b() + 14u * dim_resp; }
  std::size_t offset_t_ir() const {
    return has_strategy() ? offset_b_b() + 14 : offset_b_r() + 3;
  }
  std::size_t offset_t_dr() const { return offset_t_ir() + 9; }
  std::size_t offset_t_rb() const { return offset_t_dr() + 9; }
  std::size_t size() const { return offset_t_dr() + 9 + (has_strategy() ? 42 : 0); }

  static CrfParams zeros(CrfTasks tasks, int dim_ctx, int dim_resp);
};

// Featurized snippet: one context vector (suspect plus parent) and one vector
// per direct response.
struct SnippetFeatures {
  std::string snippet_id;
  SparseVector context;
  std::vector<SparseVector> responses;
};

// A labeled snippet with label indices. gold_b is ignored (may be empty) when
// training with tasks == NoStrategy.
struct CrfExample {
  SnippetFeatures features;
  int gold_i = 0;
  int gold_d = 0;
  std::vector<int> gold_r;
  std::vector<int> gold_b;
};

// Log-potentials for one snippet under fixed params. Pairwise tables are
// copied in so inference needs no further access to the params.
struct SnippetGraph {
  std::string snippet_id;
  bool has_strategy = true;
  std::array<double, 3> u_i{};
  std::array<double, 3> u_d{};
  std::vector<std::array<double, 3>> u_r;
  std::vector<std::array<double, 14>> u_b;
  std::array<double, 9> t_ir{};   // [i*3 + r]
  std::array<double, 9> t_dr{};   // [d*3 + r]
  std::array<double, 42> t_rb{};  // [r*14 + b]

  std::size_t num_responses() const { return u_r.size(); }
};

// Exact quantities for one snippet. Pairwise tables are flattened the same
// way as in SnippetGraph. The b-related fields stay empty for graphs without
// strategy variables.
struct InferenceResult {
  double log_z = 0.0;
  std::array<double, 3> p_i{};
  std::array<double, 3> p_d{};
  std::array<double, 9> p_id{};              // [i*3 + d]
  std::vector<std::array<double, 3>> p_r;    // per response
  std::vector<std::array<double, 14>> p_b;   // per response
  std::vector<std::array<double, 9>> p_ir;   // per response, [i*3 + r]
  std::vector<std::array<double, 9>> p_dr;   // per response, [d*3 + r]
  std::vector<std::array<double, 42>> p_rb;  // per response, [r*14 + b]
  int map_i = 0;
  int map_d = 0;
  std::vector<int> map_r;
  std::vector<int> map_b;
};

// Fills every log-potential table by dot products against the params.
SnippetGraph build_snippet_graph(const SnippetFeatures& features, const CrfParams& params);

// Exact inference by conditioning on the nine (i, d) pairs: each b_k is
// eliminated into r_k, each r_k into (i, d); all accumulation is log-space
// log-sum-exp with max subtraction. MAP runs the max version of the same
// elimination; ties resolve to the lowest label indices in the order
// (i, d, r_1, b_1, ...).
InferenceResult infer_exact(const SnippetGraph& graph);

// Negative conditional log-likelihood plus (l2/2)*||theta||^2 over weights
// and pairwise tables (biases are never penalized). Snippets are reduced
// with blocked_reduce, so the result is identical for any thread count.
ObjectiveEvaluation crf_objective(const std::vector<CrfExample>& dataset,
                                  const CrfParams& shape, const std::vector<double>& theta,
                                  double l2, int threads);

// Trains from zero init with L-BFGS; deterministic for fixed inputs.
CrfParams train_crf(const std::vector<CrfExample>& dataset, CrfTasks tasks, int dim_ctx,
                    int dim_resp, double l2, int threads,
                    const OptimConfig& optim = OptimConfig{});

enum class DecodeRule { Map, Marginal };

// Decoded label indices for one snippet. strategies is empty for NoStrategy
// params.
struct CrfPrediction {
  int intention = 0;
  int disclosure = 0;
  std::vector<int> interpretations;
  std::vector<int> strategies;
};

CrfPrediction predict_crf(const CrfParams& params, const SnippetFeatures& features,
                          DecodeRule rule = DecodeRule::Map);

namespace reference {

// Serial left-fold over snippets, kept as the oracle for the blocked version.
ObjectiveEvaluation crf_objective_serial(const std::vector<CrfExample>& dataset,
                                         const CrfParams& shape,
                                         const std::vector<double>& theta, double l2);

}  // namespace reference

}  // namespace trollgraph
