#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trollgraph/comments.hpp"
#include "trollgraph/crf.hpp"
#include "trollgraph/features.hpp"
#include "trollgraph/lexicons.hpp"
#include "trollgraph/logreg.hpp"

namespace trollgraph {

enum class ModelKind { Pipeline, Joint, Hybrid };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

// What feeds the task:* indicator features while training downstream tasks:
// the gold upstream labels, or out-of-fold predictions from an internal
// cross-validation of the upstream chain.
enum class DownstreamFeatures { Gold, CrossValPredicted };

std::string_view to_string(DownstreamFeatures d);
std::optional<DownstreamFeatures> parse_downstream_features(std::string_view name);

struct ModelConfig {
  FeatureSet feature_set = FeatureSet::Enhanced;
  double l2 = 0.1;
  int min_count = 1;
  int threads = 0;
  DownstreamFeatures downstream = DownstreamFeatures::Gold;
  std::uint64_t seed = 1;
  OptimConfig optim;
};

struct LabeledSnippet {
  Snippet snippet;
  SnippetLabels labels;
};

using SidecarMap = std::map<std::string, SidecarAnnotation>;

// Feature bags for one snippet: suspect+parent context and one bag per
// response.
struct SnippetBags {
  std::string snippet_id;
  FeatureBag context;
  std::vector<FeatureBag> responses;
};

SnippetBags extract_snippet_bags(const Snippet& snippet, const LexiconSet& lexicons,
                                 FeatureSet set, const SidecarMap* sidecars = nullptr);

// Indicator feature name for a predicted/gold upstream label, e.g.
// task:i:trolling. These pass through the normal vocabulary mechanism.
std::string task_indicator(Task task, int label_index);
std::vector<std::string> task_indicator_names(Task task);

struct TaskClassifier {
  Vocabulary vocab;
  LogRegModel model;
};

// Chained independent classifiers in the fixed order I, D, R, B; every later
// task sees indicator features for all earlier ones.
struct PipelineModel {
  FeatureSet feature_set = FeatureSet::Enhanced;
  double l2 = 0.1;
  int min_count = 1;
  DownstreamFeatures downstream = DownstreamFeatures::Gold;
  TaskClassifier intention;
  TaskClassifier disclosure;
  TaskClassifier interpretation;
  TaskClassifier strategy;
};

// Full joint factor graph over all four aspects.
struct JointModel {
  FeatureSet feature_set = FeatureSet::Enhanced;
  double l2 = 0.1;
  int min_count = 1;
  Vocabulary ctx_vocab;
  Vocabulary resp_vocab;
  CrfParams crf;
};

// 2-pass model: joint inference over I, D, R, then a strategy classifier fed
// with indicators for the three jointly decoded labels.
struct HybridModel {
  FeatureSet feature_set = FeatureSet::Enhanced;
  double l2 = 0.1;
  int min_count = 1;
  DownstreamFeatures downstream = DownstreamFeatures::Gold;
  Vocabulary ctx_vocab;
  Vocabulary resp_vocab;
  CrfParams crf;  // tasks == NoStrategy
  TaskClassifier strategy;
};

PipelineModel train_pipeline(const std::vector<LabeledSnippet>& data,
                             const LexiconSet& lexicons, const ModelConfig& config,
                             const SidecarMap* sidecars = nullptr);
SnippetLabels predict_pipeline(const PipelineModel& model, const SnippetBags& bags);

JointModel train_joint(const std::vector<LabeledSnippet>& data, const LexiconSet& lexicons,
                       const ModelConfig& config, const SidecarMap* sidecars = nullptr);
SnippetLabels predict_joint(const JointModel& model, const SnippetBags& bags,
                            DecodeRule rule = DecodeRule::Map);

HybridModel train_hybrid(const std::vector<LabeledSnippet>& data, const LexiconSet& lexicons,
                         const ModelConfig& config, const SidecarMap* sidecars = nullptr);
SnippetLabels predict_hybrid(const HybridModel& model, const SnippetBags& bags,
                             DecodeRule rule = DecodeRule::Map);

// Kind-erased wrapper so evaluation and the CLI treat systems uniformly.
struct AnyModel {
  ModelKind kind = ModelKind::Pipeline;
  std::optional<PipelineModel> pipeline;
  std::optional<JointModel> joint;
  std::optional<HybridModel> hybrid;

  FeatureSet feature_set() const;
};

AnyModel train_model(ModelKind kind, const std::vector<LabeledSnippet>& data,
                     const LexiconSet& lexicons, const ModelConfig& config,
                     const SidecarMap* sidecars = nullptr);
SnippetLabels predict_model(const AnyModel& model, const Snippet& snippet,
                            const LexiconSet& lexicons, const SidecarMap* sidecars = nullptr,
                            DecodeRule rule = DecodeRule::Map);

}  // namespace trollgraph
