#include "trollgraph/models.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "trollgraph/eval.hpp"

namespace trollgraph {

namespace {

const SidecarAnnotation* find_sidecar(const SidecarMap* sidecars, const std::string& id) {
  if (!sidecars) return nullptr;
  auto it = sidecars->find(id);
  return it == sidecars->end() ? nullptr : &it->second;
}

void check_labeled(const std::vector<LabeledSnippet>& data) {
  if (data.empty()) throw std::invalid_argument("no labeled snippets");
  for (const LabeledSnippet& ls : data) {
    if (ls.labels.per_response.size() != ls.snippet.responses.size()) {
      throw std::invalid_argument("snippet " + ls.snippet.snippet_id +
                                  ": label count does not match response count");
    }
    if (ls.snippet.responses.empty()) {
      throw std::invalid_argument("snippet " + ls.snippet.snippet_id + " has no responses");
    }
  }
}

// Gold (or cross-validated) upstream labels per snippet, used as indicator
// features for downstream tasks.
struct UpstreamLabels {
  std::vector<int> i;               // per snippet
  std::vector<int> d;               // per snippet
  std::vector<std::vector<int>> r;  // per snippet, per response
};

UpstreamLabels gold_upstream(const std::vector<LabeledSnippet>& data) {
  UpstreamLabels up;
  for (const LabeledSnippet& ls : data) {
    up.i.push_back(static_cast<int>(ls.labels.intention));
    up.d.push_back(static_cast<int>(ls.labels.disclosure));
    std::vector<int> r;
    for (const ResponseLabels& rl : ls.labels.per_response) {
      r.push_back(static_cast<int>(rl.interpretation));
    }
    up.r.push_back(std::move(r));
  }
  return up;
}

TaskClassifier train_task(std::vector<FeatureBag> bags, const std::vector<int>& labels,
                          int num_classes, const std::vector<std::string>& always,
                          const ModelConfig& config) {
  TaskClassifier clf;
  clf.vocab = build_vocabulary(bags, config.min_count, always);
  std::vector<SparseVector> xs;
  xs.reserve(bags.size());
  for (const FeatureBag& bag : bags) xs.push_back(vectorize(bag, clf.vocab));
  clf.model = train_logreg(xs, labels, num_classes, clf.vocab.dimension(), config.l2,
                           config.threads, config.optim);
  return clf;
}

std::vector<std::string> indicator_names_upto(Task last) {
  std::vector<std::string> names;
  for (int t = 0; t <= static_cast<int>(last); ++t) {
    for (const std::string& n : task_indicator_names(static_cast<Task>(t))) names.push_back(n);
  }
  return names;
}

// Builds the per-task instance bags of the pipeline given upstream labels.
std::vector<FeatureBag> context_bags(const std::vector<SnippetBags>& bags) {
  std::vector<FeatureBag> out;
  out.reserve(bags.size());
  for (const SnippetBags& sb : bags) out.push_back(sb.context);
  return out;
}

std::vector<FeatureBag> disclosure_bags(const std::vector<SnippetBags>& bags,
                                        const UpstreamLabels& up) {
  std::vector<FeatureBag> out;
  out.reserve(bags.size());
  for (std::size_t s = 0; s < bags.size(); ++s) {
    FeatureBag bag = bags[s].context;
    bag.set(task_indicator(Task::Intention, up.i[s]), 1.0);
    out.push_back(std::move(bag));
  }
  return out;
}

std::vector<FeatureBag> interpretation_bags(const std::vector<SnippetBags>& bags,
                                            const UpstreamLabels& up) {
  std::vector<FeatureBag> out;
  for (std::size_t s = 0; s < bags.size(); ++s) {
    for (const FeatureBag& rbag : bags[s].responses) {
      FeatureBag bag = rbag;
      bag.set(task_indicator(Task::Intention, up.i[s]), 1.0);
      bag.set(task_indicator(Task::Disclosure, up.d[s]), 1.0);
      out.push_back(std::move(bag));
    }
  }
  return out;
}

std::vector<FeatureBag> strategy_bags(const std::vector<SnippetBags>& bags,
                                      const UpstreamLabels& up) {
  std::vector<FeatureBag> out;
  for (std::size_t s = 0; s < bags.size(); ++s) {
    for (std::size_t k = 0; k < bags[s].responses.size(); ++k) {
      FeatureBag bag = bags[s].responses[k];
      bag.set(task_indicator(Task::Intention, up.i[s]), 1.0);
      bag.set(task_indicator(Task::Disclosure, up.d[s]), 1.0);
      bag.set(task_indicator(Task::Interpretation, up.r[s][k]), 1.0);
      out.push_back(std::move(bag));
    }
  }
  return out;
}

std::vector<int> flatten_r(const std::vector<LabeledSnippet>& data) {
  std::vector<int> out;
  for (const LabeledSnippet& ls : data) {
    for (const ResponseLabels& rl : ls.labels.per_response) {
      out.push_back(static_cast<int>(rl.interpretation));
    }
  }
  return out;
}

std::vector<int> flatten_b(const std::vector<LabeledSnippet>& data) {
  std::vector<int> out;
  for (const LabeledSnippet& ls : data) {
    for (const ResponseLabels& rl : ls.labels.per_response) {
      out.push_back(static_cast<int>(rl.strategy));
    }
  }
  return out;
}

std::vector<SnippetBags> all_bags(const std::vector<LabeledSnippet>& data,
                                  const LexiconSet& lexicons, FeatureSet set,
                                  const SidecarMap* sidecars) {
  std::vector<SnippetBags> bags;
  bags.reserve(data.size());
  for (const LabeledSnippet& ls : data) {
    bags.push_back(extract_snippet_bags(ls.snippet, lexicons, set, sidecars));
  }
  return bags;
}

// Out-of-fold upstream predictions for DownstreamFeatures::CrossValPredicted.
// Each stage is predicted by models trained on the other folds, reusing the
// previous stages' out-of-fold labels as indicators. Falls back to gold when
// the dataset is too small to split.
UpstreamLabels cross_val_upstream(const std::vector<LabeledSnippet>& data,
                                  const std::vector<SnippetBags>& bags,
                                  const ModelConfig& config) {
  const std::size_t n = data.size();
  const int k = static_cast<int>(std::min<std::size_t>(5, n));
  if (k < 2) return gold_upstream(data);

  std::vector<std::string> ids;
  for (const LabeledSnippet& ls : data) ids.push_back(ls.snippet.snippet_id);
  const FoldPlan plan = make_folds(ids, k, config.seed, 0);
  std::vector<int> fold(n);
  for (std::size_t s = 0; s < n; ++s) fold[s] = plan.fold_of.at(ids[s]);

  const UpstreamLabels gold = gold_upstream(data);
  UpstreamLabels cv;
  cv.i.assign(n, 0);
  cv.d.assign(n, 0);
  cv.r.resize(n);
  for (std::size_t s = 0; s < n; ++s) cv.r[s].assign(data[s].snippet.responses.size(), 0);

  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t s = 0; s < n; ++s) (fold[s] == f ? test_idx : train_idx).push_back(s);

    auto subset_bags = [&](const std::vector<std::size_t>& idx) {
      std::vector<SnippetBags> out;
      for (std::size_t s : idx) out.push_back(bags[s]);
      return out;
    };
    auto subset_up = [&](const UpstreamLabels& up, const std::vector<std::size_t>& idx) {
      UpstreamLabels out;
      for (std::size_t s : idx) {
        out.i.push_back(up.i[s]);
        out.d.push_back(up.d[s]);
        out.r.push_back(up.r[s]);
      }
      return out;
    };
    const std::vector<SnippetBags> tr_bags = subset_bags(train_idx);
    const UpstreamLabels tr_up = subset_up(cv, train_idx);

    std::vector<int> yi, yd, yr;
    for (std::size_t s : train_idx) {
      yi.push_back(gold.i[s]);
      yd.push_back(gold.d[s]);
      for (int r : gold.r[s]) yr.push_back(r);
    }

    const TaskClassifier ci = train_task(context_bags(tr_bags), yi, kNumIntention, {}, config);
    for (std::size_t s : test_idx) {
      cv.i[s] = predict_logreg(ci.model, vectorize(bags[s].context, ci.vocab));
    }
    const TaskClassifier cd =
        train_task(disclosure_bags(tr_bags, tr_up), yd, kNumDisclosure,
                   task_indicator_names(Task::Intention), config);
    for (std::size_t s : test_idx) {
      FeatureBag bag = bags[s].context;
      bag.set(task_indicator(Task::Intention, cv.i[s]), 1.0);
      cv.d[s] = predict_logreg(cd.model, vectorize(bag, cd.vocab));
    }
    const TaskClassifier cr =
        train_task(interpretation_bags(tr_bags, tr_up), yr, kNumInterpretation,
                   indicator_names_upto(Task::Disclosure), config);
    for (std::size_t s : test_idx) {
      for (std::size_t q = 0; q < bags[s].responses.size(); ++q) {
        FeatureBag bag = bags[s].responses[q];
        bag.set(task_indicator(Task::Intention, cv.i[s]), 1.0);
        bag.set(task_indicator(Task::Disclosure, cv.d[s]), 1.0);
        cv.r[s][q] = predict_logreg(cr.model, vectorize(bag, cr.vocab));
      }
    }
  }
  return cv;
}

std::vector<CrfExample> crf_examples(const std::vector<LabeledSnippet>& data,
                                     const std::vector<SnippetBags>& bags,
                                     const Vocabulary& ctx_vocab, const Vocabulary& resp_vocab,
                                     bool with_strategy) {
  std::vector<CrfExample> out;
  out.reserve(data.size());
  for (std::size_t s = 0; s < data.size(); ++s) {
    CrfExample ex;
    ex.features.snippet_id = bags[s].snippet_id;
    ex.features.context = vectorize(bags[s].context, ctx_vocab);
    for (const FeatureBag& rbag : bags[s].responses) {
      ex.features.responses.push_back(vectorize(rbag, resp_vocab));
    }
    ex.gold_i = static_cast<int>(data[s].labels.intention);
    ex.gold_d = static_cast<int>(data[s].labels.disclosure);
    for (const ResponseLabels& rl : data[s].labels.per_response) {
      ex.gold_r.push_back(static_cast<int>(rl.interpretation));
      if (with_strategy) ex.gold_b.push_back(static_cast<int>(rl.strategy));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<FeatureBag> response_bags(const std::vector<SnippetBags>& bags) {
  std::vector<FeatureBag> out;
  for (const SnippetBags& sb : bags) {
    for (const FeatureBag& rbag : sb.responses) out.push_back(rbag);
  }
  return out;
}

SnippetFeatures featurize_for_crf(const SnippetBags& bags, const Vocabulary& ctx_vocab,
                                  const Vocabulary& resp_vocab) {
  SnippetFeatures f;
  f.snippet_id = bags.snippet_id;
  f.context = vectorize(bags.context, ctx_vocab);
  for (const FeatureBag& rbag : bags.responses) {
    f.responses.push_back(vectorize(rbag, resp_vocab));
  }
  return f;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Pipeline: return "baseline";
    case ModelKind::Joint: return "joint";
    case ModelKind::Hybrid: return "hybrid";
  }
  return "";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "baseline" || name == "pipeline") return ModelKind::Pipeline;
  if (name == "joint") return ModelKind::Joint;
  if (name == "hybrid") return ModelKind::Hybrid;
  return std::nullopt;
}

std::string_view to_string(DownstreamFeatures d) {
  return d == DownstreamFeatures::Gold ? "gold" : "cross_val_predicted";
}

std::optional<DownstreamFeatures> parse_downstream_features(std::string_view name) {
  if (name == "gold") return DownstreamFeatures::Gold;
  if (name == "cross_val_predicted") return DownstreamFeatures::CrossValPredicted;
  return std::nullopt;
}

SnippetBags extract_snippet_bags(const Snippet& snippet, const LexiconSet& lexicons,
                                 FeatureSet set, const SidecarMap* sidecars) {
  SnippetBags bags;
  bags.snippet_id = snippet.snippet_id;
  const FeatureBag suspect =
      extract_features(snippet.suspect, find_sidecar(sidecars, snippet.suspect.id), lexicons, set);
  const FeatureBag parent =
      extract_features(snippet.parent, find_sidecar(sidecars, snippet.parent.id), lexicons, set);
  bags.context = combine_context(suspect, parent);
  for (const Comment& resp : snippet.responses) {
    bags.responses.push_back(
        extract_features(resp, find_sidecar(sidecars, resp.id), lexicons, set));
  }
  return bags;
}

std::string task_indicator(Task task, int label_index) {
  const std::vector<std::string>& names = task_class_names(task);
  if (label_index < 0 || label_index >= static_cast<int>(names.size())) {
    throw std::invalid_argument("label index out of range");
  }
  std::string letter(task_name(task));
  std::transform(letter.begin(), letter.end(), letter.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return "task:" + letter + ":" + names[label_index];
}

std::vector<std::string> task_indicator_names(Task task) {
  std::vector<std::string> out;
  for (std::size_t a = 0; a < task_class_names(task).size(); ++a) {
    out.push_back(task_indicator(task, static_cast<int>(a)));
  }
  return out;
}

PipelineModel train_pipeline(const std::vector<LabeledSnippet>& data,
                             const LexiconSet& lexicons, const ModelConfig& config,
                             const SidecarMap* sidecars) {
  check_labeled(data);
  const std::vector<SnippetBags> bags = all_bags(data, lexicons, config.feature_set, sidecars);
  const UpstreamLabels up = config.downstream == DownstreamFeatures::Gold
                                ? gold_upstream(data)
                                : cross_val_upstream(data, bags, config);

  PipelineModel model;
  model.feature_set = config.feature_set;
  model.l2 = config.l2;
  model.min_count = config.min_count;
  model.downstream = config.downstream;

  std::vector<int> yi, yd;
  for (const LabeledSnippet& ls : data) {
    yi.push_back(static_cast<int>(ls.labels.intention));
    yd.push_back(static_cast<int>(ls.labels.disclosure));
  }
  model.intention = train_task(context_bags(bags), yi, kNumIntention, {}, config);
  model.disclosure = train_task(disclosure_bags(bags, up), yd, kNumDisclosure,
                                task_indicator_names(Task::Intention), config);
  model.interpretation =
      train_task(interpretation_bags(bags, up), flatten_r(data), kNumInterpretation,
                 indicator_names_upto(Task::Disclosure), config);
  model.strategy = train_task(strategy_bags(bags, up), flatten_b(data), kNumStrategy,
                              indicator_names_upto(Task::Interpretation), config);
  return model;
}

SnippetLabels predict_pipeline(const PipelineModel& model, const SnippetBags& bags) {
  SnippetLabels out;
  const int pi =
      predict_logreg(model.intention.model, vectorize(bags.context, model.intention.vocab));

  FeatureBag dbag = bags.context;
  dbag.set(task_indicator(Task::Intention, pi), 1.0);
  const int pd = predict_logreg(model.disclosure.model, vectorize(dbag, model.disclosure.vocab));

  out.intention = static_cast<Intention>(pi);
  out.disclosure = static_cast<Disclosure>(pd);
  for (const FeatureBag& rbag : bags.responses) {
    FeatureBag rb = rbag;
    rb.set(task_indicator(Task::Intention, pi), 1.0);
    rb.set(task_indicator(Task::Disclosure, pd), 1.0);
    const int pr =
        predict_logreg(model.interpretation.model, vectorize(rb, model.interpretation.vocab));

    FeatureBag bb = rbag;
    bb.set(task_indicator(Task::Intention, pi), 1.0);
    bb.set(task_indicator(Task::Disclosure, pd), 1.0);
    bb.set(task_indicator(Task::Interpretation, pr), 1.0);
    const int pb = predict_logreg(model.strategy.model, vectorize(bb, model.strategy.vocab));

    out.per_response.push_back(
        {static_cast<Interpretation>(pr), static_cast<Strategy>(pb)});
  }
  return out;
}

JointModel train_joint(const std::vector<LabeledSnippet>& data, const LexiconSet& lexicons,
                       const ModelConfig& config, const SidecarMap* sidecars) {
  check_labeled(data);
  const std::vector<SnippetBags> bags = all_bags(data, lexicons, config.feature_set, sidecars);

  JointModel model;
  model.feature_set = config.feature_set;
  model.l2 = config.l2;
  model.min_count = config.min_count;
  model.ctx_vocab = build_vocabulary(context_bags(bags), config.min_count);
  model.resp_vocab = build_vocabulary(response_bags(bags), config.min_count);
  const std::vector<CrfExample> examples =
      crf_examples(data, bags, model.ctx_vocab, model.resp_vocab, true);
  model.crf = train_crf(examples, CrfTasks::All, model.ctx_vocab.dimension(),
                        model.resp_vocab.dimension(), config.l2, config.threads, config.optim);
  return model;
}

SnippetLabels predict_joint(const JointModel& model, const SnippetBags& bags, DecodeRule rule) {
  const SnippetFeatures f = featurize_for_crf(bags, model.ctx_vocab, model.resp_vocab);
  const CrfPrediction pred = predict_crf(model.crf, f, rule);
  SnippetLabels out;
  out.intention = static_cast<Intention>(pred.intention);
  out.disclosure = static_cast<Disclosure>(pred.disclosure);
  for (std::size_t k = 0; k < f.responses.size(); ++k) {
    out.per_response.push_back({static_cast<Interpretation>(pred.interpretations[k]),
                                static_cast<Strategy>(pred.strategies[k])});
  }
  return out;
}

HybridModel train_hybrid(const std::vector<LabeledSnippet>& data, const LexiconSet& lexicons,
                         const ModelConfig& config, const SidecarMap* sidecars) {
  check_labeled(data);
  const std::vector<SnippetBags> bags = all_bags(data, lexicons, config.feature_set, sidecars);

  HybridModel model;
  model.feature_set = config.feature_set;
  model.l2 = config.l2;
  model.min_count = config.min_count;
  model.downstream = config.downstream;
  model.ctx_vocab = build_vocabulary(context_bags(bags), config.min_count);
  model.resp_vocab = build_vocabulary(response_bags(bags), config.min_count);
  const std::vector<CrfExample> examples =
      crf_examples(data, bags, model.ctx_vocab, model.resp_vocab, false);
  model.crf = train_crf(examples, CrfTasks::NoStrategy, model.ctx_vocab.dimension(),
                        model.resp_vocab.dimension(), config.l2, config.threads, config.optim);

  const UpstreamLabels up = config.downstream == DownstreamFeatures::Gold
                                ? gold_upstream(data)
                                : cross_val_upstream(data, bags, config);
  model.strategy = train_task(strategy_bags(bags, up), flatten_b(data), kNumStrategy,
                              indicator_names_upto(Task::Interpretation), config);
  return model;
}

SnippetLabels predict_hybrid(const HybridModel& model, const SnippetBags& bags,
                             DecodeRule rule) {
  const SnippetFeatures f = featurize_for_crf(bags, model.ctx_vocab, model.resp_vocab);
  const CrfPrediction pred = predict_crf(model.crf, f, rule);
  SnippetLabels out;
  out.intention = static_cast<Intention>(pred.intention);
  out.disclosure = static_cast<Disclosure>(pred.disclosure);
  for (std::size_t k = 0; k < bags.responses.size(); ++k) {
    FeatureBag bb = bags.responses[k];
    bb.set(task_indicator(Task::Intention, pred.intention), 1.0);
    bb.set(task_indicator(Task::Disclosure, pred.disclosure), 1.0);
    bb.set(task_indicator(Task::Interpretation, pred.interpretations[k]), 1.0);
    const int pb = predict_logreg(model.strategy.model, vectorize(bb, model.strategy.vocab));
    out.per_response.push_back(
        {static_cast<Interpretation>(pred.interpretations[k]), static_cast<Strategy>(pb)});
  }
  return out;
}

FeatureSet AnyModel::feature_set() const {
  switch (kind) {
    case ModelKind::Pipeline: return pipeline->feature_set;
    case ModelKind::Joint: return joint->feature_set;
    case ModelKind::Hybrid: return hybrid->feature_set;
  }
  return FeatureSet::Enhanced;
}

AnyModel train_model(ModelKind kind, const std::vector<LabeledSnippet>& data,
                     const LexiconSet& lexicons, const ModelConfig& config,
                     const SidecarMap* sidecars) {
  AnyModel model;
  model.kind = kind;
  switch (kind) {
    case ModelKind::Pipeline:
      model.pipeline = train_pipeline(data, lexicons, config, sidecars);
      break;
    case ModelKind::Joint:
      model.joint = train_joint(data, lexicons, config, sidecars);
      break;
    case ModelKind::Hybrid:
      model.hybrid = train_hybrid(data, lexicons, config, sidecars);
      break;
  }
  return model;
}

SnippetLabels predict_model(const AnyModel& model, const Snippet& snippet,
                            const LexiconSet& lexicons, const SidecarMap* sidecars,
                            DecodeRule rule) {
  const SnippetBags bags = extract_snippet_bags(snippet, lexicons, model.feature_set(), sidecars);
  switch (model.kind) {
    case ModelKind::Pipeline: return predict_pipeline(*model.pipeline, bags);
    case ModelKind::Joint: return predict_joint(*model.joint, bags, rule);
    case ModelKind::Hybrid: return predict_hybrid(*model.hybrid, bags, rule);
  }
  throw std::logic_error("unknown model kind");
}

}  // namespace trollgraph
