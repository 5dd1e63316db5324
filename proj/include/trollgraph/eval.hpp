#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "trollgraph/labels.hpp"
#include "trollgraph/models.hpp"

namespace trollgraph {

// Deterministic assignment of snippets to folds. All instances of one
// snippet live in one fold; the tune fold never enters reported metrics.
struct FoldPlan {
  std::uint64_t seed = 0;
  int k = 5;
  int tune_fold = 0;
  std::map<std::string, int> fold_of;
};

// Fisher-Yates shuffle seeded by `seed`, then round-robin assignment, so
// fold sizes differ by at most one.
FoldPlan make_folds(const std::vector<std::string>& snippet_ids, int k, std::uint64_t seed,
                    int tune_fold);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int support = 0;
  double share = 0.0;  // gold share of the task's distribution
};

struct TaskMetrics {
  Task task = Task::Intention;
  std::vector<ClassMetrics> classes;  // one row per class, enum order
  double accuracy = 0.0;
  int total = 0;
};

// One-vs-rest precision/recall/F1 per class. A denominator of zero yields
// 0 by convention.
TaskMetrics prf1(const std::vector<int>& gold, const std::vector<int>& predicted, Task task);

// Items x annotators category matrix for one aspect; all rows equally long.
struct AnnotationTable {
  std::vector<std::vector<int>> rows;
};

// Fleiss kappa. All-one-category tables (chance agreement 1) are 1.0 under
// perfect agreement and an error otherwise.
double fleiss_kappa(const AnnotationTable& table);

// CSV rows snippet_id,annotator_id,aspect,label; '#' lines are comments.
// Returns one complete table per aspect, with label strings mapped to
// category indices in first-seen order.
std::map<std::string, AnnotationTable> load_annotation_csv(std::istream& in);

// Human-readable aligned table. Every class of I, D, R gets a row; B rows
// appear only when the class holds at least `threshold` of the gold
// distribution.
std::string format_report(const std::vector<TaskMetrics>& metrics, double threshold = 0.05);

// Machine-readable NDJSON stream: every row, with a flag marking rows the
// human table suppressed.
std::string machine_report(const std::vector<TaskMetrics>& metrics, double threshold = 0.05);

struct ProtocolConfig {
  ModelKind kind = ModelKind::Pipeline;
  FeatureSet feature_set = FeatureSet::Enhanced;
  int k = 5;
  int tune_fold = 0;
  std::uint64_t seed = 1;
  std::vector<double> l2_grid = {0.01, 0.1, 1.0, 10.0};
  std::vector<int> min_count_grid = {1};
  int threads = 0;
  DownstreamFeatures downstream = DownstreamFeatures::Gold;
  OptimConfig optim;
};

struct ProtocolResult {
  FoldPlan plan;
  double chosen_l2 = 0.0;
  int chosen_min_count = 1;
  double tune_score = 0.0;            // mean task accuracy on the tune fold
  std::vector<TaskMetrics> metrics;   // pooled over the non-tune folds
};

// The cross-validation protocol: grid-search hyperparameters on the tune
// fold (train on all other folds), then report pooled metrics from
// leave-one-fold-out runs over the non-tune folds only.
ProtocolResult run_protocol(const std::vector<LabeledSnippet>& data, const LexiconSet& lexicons,
                            const ProtocolConfig& config, const SidecarMap* sidecars = nullptr);

}  // namespace trollgraph
