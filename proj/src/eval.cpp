#include "trollgraph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace trollgraph {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double safe_div(double num, double den) { return den > 0 ? num / den : 0.0; }

// Per-task gold/predicted label vectors pooled over a set of snippets.
struct PooledLabels {
  std::vector<int> gold[4];
  std::vector<int> pred[4];

  void add(const SnippetLabels& gold_l, const SnippetLabels& pred_l) {
    gold[0].push_back(static_cast<int>(gold_l.intention));
    pred[0].push_back(static_cast<int>(pred_l.intention));
    gold[1].push_back(static_cast<int>(gold_l.disclosure));
    pred[1].push_back(static_cast<int>(pred_l.disclosure));
    for (std::size_t k = 0; k < gold_l.per_response.size(); ++k) {
      gold[2].push_back(static_cast<int>(gold_l.per_response[k].interpretation));
      pred[2].push_back(static_cast<int>(pred_l.per_response[k].interpretation));
      gold[3].push_back(static_cast<int>(gold_l.per_response[k].strategy));
      pred[3].push_back(static_cast<int>(pred_l.per_response[k].strategy));
    }
  }

  double mean_accuracy() const {
    double sum = 0.0;
    for (int t = 0; t < 4; ++t) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < gold[t].size(); ++i) hits += gold[t][i] == pred[t][i];
      sum += gold[t].empty() ? 0.0 : static_cast<double>(hits) / gold[t].size();
    }
    return sum / 4.0;
  }
};

}  // namespace

FoldPlan make_folds(const std::vector<std::string>& snippet_ids, int k, std::uint64_t seed,
                    int tune_fold) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (snippet_ids.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("fewer snippets than folds");
  }
  if (tune_fold < 0 || tune_fold >= k) throw std::invalid_argument("tune_fold out of range");

  std::vector<std::string> ids = snippet_ids;
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(ids[i - 1], ids[j]);
  }

  FoldPlan plan;
  plan.seed = seed;
  plan.k = k;
  plan.tune_fold = tune_fold;
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const auto [it, inserted] = plan.fold_of.emplace(ids[pos], static_cast<int>(pos % k));
    if (!inserted) throw std::invalid_argument("duplicate snippet id: " + ids[pos]);
  }
  return plan;
}

TaskMetrics prf1(const std::vector<int>& gold, const std::vector<int>& predicted, Task task) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("gold and predicted differ in length");
  }
  if (gold.empty()) throw std::invalid_argument("no instances to score");
  const std::vector<std::string>& names = task_class_names(task);
  const int num_classes = static_cast<int>(names.size());
  std::vector<int> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0),
      support(num_classes, 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes) {
      throw std::invalid_argument("label out of range");
    }
    ++support[gold[i]];
    if (gold[i] == predicted[i]) {
      ++tp[gold[i]];
    } else {
      ++fn[gold[i]];
      ++fp[predicted[i]];
    }
  }

  TaskMetrics out;
  out.task = task;
  out.total = static_cast<int>(gold.size());
  int hits = 0;
  for (int c = 0; c < num_classes; ++c) {
    ClassMetrics cm;
    cm.label = names[c];
    cm.support = support[c];
    cm.share = static_cast<double>(support[c]) / out.total;
    cm.precision = safe_div(tp[c], tp[c] + fp[c]);
    cm.recall = safe_div(tp[c], tp[c] + fn[c]);
    cm.f1 = safe_div(2.0 * cm.precision * cm.recall, cm.precision + cm.recall);
    out.classes.push_back(std::move(cm));
    hits += tp[c];
  }
  out.accuracy = static_cast<double>(hits) / out.total;
  return out;
}

double fleiss_kappa(const AnnotationTable& table) {
  const std::size_t items = table.rows.size();
  if (items == 0) throw std::invalid_argument("no items");
  const std::size_t n = table.rows[0].size();
  if (n < 2) throw std::invalid_argument("need at least two annotators");
  int num_categories = 0;
  for (const auto& row : table.rows) {
    if (row.size() != n) throw std::invalid_argument("ragged annotation table");
    for (int c : row) {
      if (c < 0) throw std::invalid_argument("negative category");
      num_categories = std::max(num_categories, c + 1);
    }
  }

  std::vector<double> p_j(num_categories, 0.0);
  double p_bar = 0.0;
  for (const auto& row : table.rows) {
    std::vector<int> counts(num_categories, 0);
    for (int c : row) ++counts[c];
    double agree = 0.0;
    for (int j = 0; j < num_categories; ++j) {
      agree += static_cast<double>(counts[j]) * counts[j];
      p_j[j] += counts[j];
    }
    p_bar += (agree - static_cast<double>(n)) / (static_cast<double>(n) * (n - 1));
  }
  p_bar /= static_cast<double>(items);
  double p_e = 0.0;
  for (double& pj : p_j) {
    pj /= static_cast<double>(items) * n;
    p_e += pj * pj;
  }

  if (p_e >= 1.0) {
    if (p_bar >= 1.0) return 1.0;
    throw std::runtime_error("chance agreement is 1; kappa undefined");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

std::map<std::string, AnnotationTable> load_annotation_csv(std::istream& in) {
  // aspect -> item -> annotator -> label string
  std::map<std::string, std::map<std::string, std::map<std::string, std::string>>> cells;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 4) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected snippet_id,annotator_id,aspect,label");
    }
    auto& cell = cells[fields[2]][fields[0]];
    if (!cell.emplace(fields[1], fields[3]).second) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate annotation");
    }
  }

  std::map<std::string, AnnotationTable> tables;
  for (const auto& [aspect, items] : cells) {
    std::set<std::string> annotators;
    for (const auto& [item, votes] : items) {
      for (const auto& [annotator, label] : votes) annotators.insert(annotator);
    }
    std::map<std::string, int> category_of;
    AnnotationTable table;
    for (const auto& [item, votes] : items) {
      if (votes.size() != annotators.size()) {
        throw std::runtime_error("aspect " + aspect + ": item " + item +
                                 " is missing annotations");
      }
      std::vector<int> row;
      for (const std::string& annotator : annotators) {
        const auto it = votes.find(annotator);
        if (it == votes.end()) {
          throw std::runtime_error("aspect " + aspect + ": item " + item +
                                   " is missing annotator " + annotator);
        }
        const auto [cat, inserted] =
            category_of.emplace(it->second, static_cast<int>(category_of.size()));
        row.push_back(cat->second);
      }
      table.rows.push_back(std::move(row));
    }
    tables.emplace(aspect, std::move(table));
  }
  return tables;
}

std::string format_report(const std::vector<TaskMetrics>& metrics, double threshold) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-15s %-17s %7s %7s %7s %7s\n", "Task", "Class", "Size", "P",
                "R", "F1");
  out += buf;
  out += std::string(64, '-') + "\n";
  for (const TaskMetrics& tm : metrics) {
    bool first = true;
    for (const ClassMetrics& cm : tm.classes) {
      if (tm.task == Task::Strategy && cm.share < threshold) continue;
      std::snprintf(buf, sizeof(buf), "%-15s %-17s %6.1f%% %7.3f %7.3f %7.3f\n",
                    first ? std::string(task_long_name(tm.task)).c_str() : "", cm.label.c_str(),
                    cm.share * 100.0, cm.precision, cm.recall, cm.f1);
      out += buf;
      first = false;
    }
  }
  return out;
}

std::string machine_report(const std::vector<TaskMetrics>& metrics, double threshold) {
  std::string out;
  for (const TaskMetrics& tm : metrics) {
    for (const ClassMetrics& cm : tm.classes) {
      nlohmann::json rec;
      rec["task"] = std::string(task_name(tm.task));
      rec["class"] = cm.label;
      rec["size"] = cm.share;
      rec["precision"] = cm.precision;
      rec["recall"] = cm.recall;
      rec["f1"] = cm.f1;
      rec["support"] = cm.support;
      rec["reported"] = !(tm.task == Task::Strategy && cm.share < threshold);
      out += rec.dump();
      out += "\n";
    }
  }
  return out;
}

ProtocolResult run_protocol(const std::vector<LabeledSnippet>& data, const LexiconSet& lexicons,
                            const ProtocolConfig& config, const SidecarMap* sidecars) {
  if (config.k < 3) throw std::invalid_argument("protocol needs k >= 3");
  if (config.l2_grid.empty() || config.min_count_grid.empty()) {
    throw std::invalid_argument("empty hyperparameter grid");
  }
  std::vector<std::string> ids;
  ids.reserve(data.size());
  for (const LabeledSnippet& ls : data) ids.push_back(ls.snippet.snippet_id);

  ProtocolResult result;
  result.plan = make_folds(ids, config.k, config.seed, config.tune_fold);

  auto fold_of = [&](const LabeledSnippet& ls) {
    return result.plan.fold_of.at(ls.snippet.snippet_id);
  };
  auto subset = [&](auto&& keep) {
    std::vector<LabeledSnippet> out;
    for (const LabeledSnippet& ls : data) {
      if (keep(fold_of(ls))) out.push_back(ls);
    }
    return out;
  };

  auto base_config = [&](double l2, int min_count) {
    ModelConfig mc;
    mc.feature_set = config.feature_set;
    mc.l2 = l2;
    mc.min_count = min_count;
    mc.threads = config.threads;
    mc.downstream = config.downstream;
    mc.seed = config.seed;
    mc.optim = config.optim;
    return mc;
  };
  auto score_on = [&](const AnyModel& model, const std::vector<LabeledSnippet>& eval_set) {
    PooledLabels pooled;
    for (const LabeledSnippet& ls : eval_set) {
      pooled.add(ls.labels, predict_model(model, ls.snippet, lexicons, sidecars));
    }
    return pooled;
  };

  // Hyperparameter grid: train on every non-tune fold, score on the tune fold.
  const std::vector<LabeledSnippet> grid_train =
      subset([&](int f) { return f != config.tune_fold; });
  const std::vector<LabeledSnippet> tune_set =
      subset([&](int f) { return f == config.tune_fold; });
  if (grid_train.empty() || tune_set.empty()) {
    throw std::invalid_argument("tune split left an empty side");
  }
  double best_score = -1.0;
  for (int min_count : config.min_count_grid) {
    for (double l2 : config.l2_grid) {
      const AnyModel model =
          train_model(config.kind, grid_train, lexicons, base_config(l2, min_count), sidecars);
      const double score = score_on(model, tune_set).mean_accuracy();
      if (score > best_score) {
        best_score = score;
        result.chosen_l2 = l2;
        result.chosen_min_count = min_count;
      }
    }
  }
  result.tune_score = best_score;

  // Reported metrics: leave-one-fold-out over the non-tune folds, pooled.
  PooledLabels pooled;
  for (int f = 0; f < config.k; ++f) {
    if (f == config.tune_fold) continue;
    const std::vector<LabeledSnippet> train_set =
        subset([&](int g) { return g != config.tune_fold && g != f; });
    const std::vector<LabeledSnippet> test_set = subset([&](int g) { return g == f; });
    if (train_set.empty()) throw std::invalid_argument("fold split left an empty train side");
    const AnyModel model = train_model(config.kind, train_set, lexicons,
                                       base_config(result.chosen_l2, result.chosen_min_count),
                                       sidecars);
    for (const LabeledSnippet& ls : test_set) {
      if (fold_of(ls) == config.tune_fold) {
        throw std::logic_error("tune-fold snippet leaked into reported metrics");
      }
      pooled.add(ls.labels, predict_model(model, ls.snippet, lexicons, sidecars));
    }
  }
  for (int t = 0; t < 4; ++t) {
    result.metrics.push_back(prf1(pooled.gold[t], pooled.pred[t], static_cast<Task>(t)));
  }
  return result;
}

}  // namespace trollgraph
