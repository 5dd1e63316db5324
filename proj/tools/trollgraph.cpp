#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trollgraph/bruteforce.hpp"
#include "trollgraph/comments.hpp"
#include "trollgraph/crf.hpp"
#include "trollgraph/eval.hpp"
#include "trollgraph/io.hpp"
#include "trollgraph/lexicons.hpp"
#include "trollgraph/logreg.hpp"
#include "trollgraph/models.hpp"
#include "trollgraph/synth.hpp"
#include "trollgraph/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trollgraph;

namespace {

// Config or flag validation problems exit with status 2; data problems with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  int threads = 0;
  std::uint64_t seed = 1;

  std::string dump;
  std::string comments;
  std::string snippets;
  std::string lexicons;
  std::string sidecars;
  std::string model_file;
  std::string annotations;
  std::string out = ".";

  std::string features = "enhanced";
  std::string model = "baseline";
  std::string downstream = "gold";
  std::string keyword;
  int max_edit = 1;
  double l2 = 0.1;
  int min_count = 1;
  int k = 5;
  int tune_fold = 0;
  std::vector<double> l2_grid = {0.01, 0.1, 1.0, 10.0};
  std::vector<int> min_count_grid = {1};
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
  int memory_pairs = 10;
  int trials = 200;
  bool strict = false;

  std::size_t synth_n = 200;
  int synth_max_responses = 3;
  bool synth_b_from_r = false;
};

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
  return in;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  return out;
}

FeatureSet parse_features_or_die(const std::string& name) {
  auto f = parse_feature_set(name);
  if (!f) throw UsageError("unknown feature set: " + name + " (expected basic|enhanced)");
  return *f;
}

ModelKind parse_model_or_die(const std::string& name) {
  auto m = parse_model_kind(name);
  if (!m) throw UsageError("unknown model: " + name + " (expected baseline|joint|hybrid)");
  return *m;
}

DownstreamFeatures parse_downstream_or_die(const std::string& name) {
  auto d = parse_downstream_features(name);
  if (!d) {
    throw UsageError("unknown downstream mode: " + name +
                     " (expected gold|cross_val_predicted)");
  }
  return *d;
}

OptimConfig optim_config(const Options& o) {
  OptimConfig c;
  c.max_iterations = o.max_iterations;
  c.gradient_tolerance = o.gradient_tolerance;
  c.memory_pairs = o.memory_pairs;
  return c;
}

ModelConfig model_config(const Options& o) {
  ModelConfig c;
  c.feature_set = parse_features_or_die(o.features);
  c.l2 = o.l2;
  c.min_count = o.min_count;
  c.threads = o.threads;
  c.downstream = parse_downstream_or_die(o.downstream);
  c.seed = o.seed;
  c.optim = optim_config(o);
  return c;
}

SidecarMap load_sidecars_opt(const Options& o) {
  SidecarMap map;
  if (!o.sidecars.empty()) {
    auto in = open_input(o.sidecars, "sidecar file");
    map = read_sidecars(in);
  }
  return map;
}

// --- config file -----------------------------------------------------------

// Applies config values for flags the user did not pass. Keys that do not
// name any known setting are an error; keys irrelevant to the active
// subcommand are ignored so one config can drive a whole run.
void apply_config(const json& cfg, const CLI::App& app, const CLI::App& sub, Options& o) {
  auto given = [&](const std::string& flag) {
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt == nullptr) opt = app.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };

  auto want_string = [&](const json& v, const char* key) {
    if (!v.is_string()) throw UsageError(std::string("config key '") + key + "' must be a string");
    return v.get<std::string>();
  };
  auto want_int = [&](const json& v, const char* key) {
    if (!v.is_number_integer()) {
      throw UsageError(std::string("config key '") + key + "' must be an integer");
    }
    return v.get<long long>();
  };
  auto want_double = [&](const json& v, const char* key) {
    if (!v.is_number()) throw UsageError(std::string("config key '") + key + "' must be a number");
    return v.get<double>();
  };

  for (const auto& [key, value] : cfg.items()) {
    if (key == "dump") {
      if (!given("--dump")) o.dump = want_string(value, "dump");
    } else if (key == "comments") {
      if (!given("--comments")) o.comments = want_string(value, "comments");
    } else if (key == "snippets") {
      if (!given("--snippets")) o.snippets = want_string(value, "snippets");
    } else if (key == "lexicons") {
      if (!given("--lexicons")) o.lexicons = want_string(value, "lexicons");
    } else if (key == "sidecars") {
      if (!given("--sidecars")) o.sidecars = want_string(value, "sidecars");
    } else if (key == "model_file") {
      if (!given("--model-file")) o.model_file = want_string(value, "model_file");
    } else if (key == "annotations") {
      if (!given("--annotations")) o.annotations = want_string(value, "annotations");
    } else if (key == "out") {
      if (!given("--out")) o.out = want_string(value, "out");
    } else if (key == "features") {
      if (!given("--features")) o.features = want_string(value, "features");
    } else if (key == "model") {
      if (!given("--model")) o.model = want_string(value, "model");
    } else if (key == "downstream") {
      if (!given("--downstream")) o.downstream = want_string(value, "downstream");
    } else if (key == "keyword") {
      if (!given("--keyword")) o.keyword = want_string(value, "keyword");
    } else if (key == "max_edit") {
      if (!given("--max-edit")) o.max_edit = static_cast<int>(want_int(value, "max_edit"));
    } else if (key == "l2") {
      if (!given("--l2")) o.l2 = want_double(value, "l2");
    } else if (key == "min_count") {
      if (!given("--min-count")) o.min_count = static_cast<int>(want_int(value, "min_count"));
    } else if (key == "k") {
      if (!given("--k")) o.k = static_cast<int>(want_int(value, "k"));
    } else if (key == "tune_fold") {
      if (!given("--tune-fold")) o.tune_fold = static_cast<int>(want_int(value, "tune_fold"));
    } else if (key == "seed") {
      if (!given("--seed")) o.seed = static_cast<std::uint64_t>(want_int(value, "seed"));
    } else if (key == "threads") {
      if (!given("--threads")) o.threads = static_cast<int>(want_int(value, "threads"));
    } else if (key == "trials") {
      if (!given("--trials")) o.trials = static_cast<int>(want_int(value, "trials"));
    } else if (key == "strict") {
      if (!value.is_boolean()) throw UsageError("config key 'strict' must be a boolean");
      if (!given("--strict")) o.strict = value.get<bool>();
    } else if (key == "l2_grid") {
      if (!value.is_array() || value.empty()) {
        throw UsageError("config key 'l2_grid' must be a nonempty array of numbers");
      }
      o.l2_grid.clear();
      for (const auto& v : value) o.l2_grid.push_back(want_double(v, "l2_grid"));
    } else if (key == "min_count_grid") {
      if (!value.is_array() || value.empty()) {
        throw UsageError("config key 'min_count_grid' must be a nonempty array of integers");
      }
      o.min_count_grid.clear();
      for (const auto& v : value) {
        o.min_count_grid.push_back(static_cast<int>(want_int(v, "min_count_grid")));
      }
    } else if (key == "max_iterations") {
      o.max_iterations = static_cast<int>(want_int(value, "max_iterations"));
    } else if (key == "gradient_tolerance") {
      o.gradient_tolerance = want_double(value, "gradient_tolerance");
    } else if (key == "memory_pairs") {
      o.memory_pairs = static_cast<int>(want_int(value, "memory_pairs"));
    } else if (key == "n") {
      if (!given("--n")) o.synth_n = static_cast<std::size_t>(want_int(value, "n"));
    } else if (key == "max_responses") {
      if (!given("--max-responses")) {
        o.synth_max_responses = static_cast<int>(want_int(value, "max_responses"));
      }
    } else if (key == "b_from_r") {
      if (!value.is_boolean()) throw UsageError("config key 'b_from_r' must be a boolean");
      if (!given("--b-from-r")) o.synth_b_from_r = value.get<bool>();
    } else {
      throw UsageError("unknown config key: " + key);
    }
  }
}

// --- subcommands ------------------------------------------------------------

int cmd_ingest(const Options& o) {
  auto in = open_input(o.dump, "dump");
  DumpParseResult result = parse_comment_dump(in, o.strict);
  auto out = open_output(fs::path(o.out) / "comments.ndjson");
  write_comments(out, result.comments, artifact_header("ingest", o.seed));

  for (std::size_t i = 0; i < result.issues.size() && i < 5; ++i) {
    std::cerr << "warning: line " << result.issues[i].line << ": " << result.issues[i].message
              << "\n";
  }
  if (result.issues.size() > 5) {
    std::cerr << "warning: " << (result.issues.size() - 5) << " further malformed records\n";
  }
  std::cout << "ingested " << result.comments.size() << " comments ("
            << result.dropped_deleted << " deleted dropped, " << result.issues.size()
            << " malformed) -> " << (fs::path(o.out) / "comments.ndjson").string() << "\n";
  return 0;
}

int cmd_mine(const Options& o) {
  if (o.keyword.empty()) throw UsageError("mine requires --keyword");
  if (o.max_edit < 0) throw UsageError("--max-edit must be >= 0");
  auto in = open_input(o.comments, "comments file");
  std::vector<Comment> comments = read_comments(in);
  std::vector<ConversationTree> trees = build_trees(comments);

  std::vector<SnippetRecord> records;
  std::size_t suspects = 0;
  std::map<std::string, std::size_t> rejects;
  for (const ConversationTree& tree : trees) {
    for (const std::string& suspect_id : find_suspects(tree, o.keyword, o.max_edit)) {
      ++suspects;
      SnippetExtraction extraction = extract_snippet(tree, suspect_id);
      if (extraction.snippet) {
        records.push_back({std::move(*extraction.snippet), std::nullopt});
      } else {
        ++rejects[std::string(to_string(extraction.reject))];
      }
    }
  }

  auto out = open_output(fs::path(o.out) / "snippets.ndjson");
  write_snippets(out, records, artifact_header("mine", o.seed));

  std::cout << "mined " << records.size() << " snippets from " << suspects << " suspects in "
            << trees.size() << " trees";
  for (const auto& [reason, count] : rejects) {
    std::cout << ", rejected " << count << " " << reason;
  }
  std::cout << " -> " << (fs::path(o.out) / "snippets.ndjson").string() << "\n";
  return 0;
}

int cmd_featurize(const Options& o) {
  auto in = open_input(o.snippets, "snippet file");
  std::vector<SnippetRecord> records = read_snippets(in);
  LexiconSet lexicons = load_lexicons(o.lexicons);
  SidecarMap sidecars = load_sidecars_opt(o);
  const FeatureSet set = parse_features_or_die(o.features);

  auto out = open_output(fs::path(o.out) / "features.ndjson");
  out << artifact_header("featurize", o.seed);
  std::size_t names = 0;
  for (const SnippetRecord& rec : records) {
    SnippetBags bags =
        extract_snippet_bags(rec.snippet, lexicons, set, sidecars.empty() ? nullptr : &sidecars);
    json j;
    j["snippet_id"] = bags.snippet_id;
    j["context"] = bags.context.values;
    json rs = json::array();
    for (const FeatureBag& rb : bags.responses) rs.push_back(rb.values);
    j["responses"] = std::move(rs);
    out << j.dump() << "\n";
    names += bags.context.values.size();
  }
  std::cout << "featurized " << records.size() << " snippets (" << names
            << " context features total) -> " << (fs::path(o.out) / "features.ndjson").string()
            << "\n";
  return 0;
}

int cmd_train(const Options& o) {
  auto in = open_input(o.snippets, "snippet file");
  std::vector<LabeledSnippet> data = require_labels(read_snippets(in));
  LexiconSet lexicons = load_lexicons(o.lexicons);
  SidecarMap sidecars = load_sidecars_opt(o);
  const ModelKind kind = parse_model_or_die(o.model);

  AnyModel model = train_model(kind, data, lexicons, model_config(o),
                               sidecars.empty() ? nullptr : &sidecars);
  auto out = open_output(fs::path(o.out) / "model.json");
  save_model(out, model, o.seed);
  std::cout << "trained " << to_string(kind) << " model on " << data.size() << " snippets -> "
            << (fs::path(o.out) / "model.json").string() << "\n";
  return 0;
}

int cmd_predict(const Options& o) {
  auto min = open_input(o.model_file, "model file");
  AnyModel model = load_model(min);
  auto in = open_input(o.snippets, "snippet file");
  std::vector<SnippetRecord> records = read_snippets(in);
  LexiconSet lexicons = load_lexicons(o.lexicons);
  SidecarMap sidecars = load_sidecars_opt(o);

  std::vector<std::string> ids;
  std::vector<SnippetLabels> predicted;
  for (const SnippetRecord& rec : records) {
    ids.push_back(rec.snippet.snippet_id);
    predicted.push_back(predict_model(model, rec.snippet, lexicons,
                                      sidecars.empty() ? nullptr : &sidecars));
  }
  auto out = open_output(fs::path(o.out) / "predictions.ndjson");
  write_predictions(out, ids, predicted, artifact_header("predict", o.seed));
  std::cout << "predicted " << records.size() << " snippets -> "
            << (fs::path(o.out) / "predictions.ndjson").string() << "\n";
  return 0;
}

int cmd_evaluate(const Options& o) {
  auto in = open_input(o.snippets, "snippet file");
  std::vector<LabeledSnippet> data = require_labels(read_snippets(in));
  LexiconSet lexicons = load_lexicons(o.lexicons);
  SidecarMap sidecars = load_sidecars_opt(o);

  ProtocolConfig cfg;
  cfg.kind = parse_model_or_die(o.model);
  cfg.feature_set = parse_features_or_die(o.features);
  cfg.k = o.k;
  cfg.tune_fold = o.tune_fold;
  cfg.seed = o.seed;
  cfg.l2_grid = o.l2_grid;
  cfg.min_count_grid = o.min_count_grid;
  cfg.threads = o.threads;
  cfg.downstream = parse_downstream_or_die(o.downstream);
  cfg.optim = optim_config(o);

  ProtocolResult result = run_protocol(data, lexicons, cfg,
                                       sidecars.empty() ? nullptr : &sidecars);

  std::ostringstream summary;
  summary << "model=" << to_string(cfg.kind) << " features=" << to_string(cfg.feature_set)
          << " k=" << cfg.k << " tune_fold=" << cfg.tune_fold << " chosen_l2="
          << result.chosen_l2 << " chosen_min_count=" << result.chosen_min_count;
  char tune[32];
  std::snprintf(tune, sizeof(tune), "%.4f", result.tune_score);
  summary << " tune_score=" << tune << "\n";

  const std::string human = format_report(result.metrics);
  auto out_txt = open_output(fs::path(o.out) / "report.txt");
  out_txt << artifact_header("evaluate", o.seed) << summary.str() << "\n" << human;
  auto out_json = open_output(fs::path(o.out) / "report.ndjson");
  out_json << artifact_header("evaluate", o.seed) << machine_report(result.metrics);

  std::cout << summary.str() << "\n" << human;
  return 0;
}

int cmd_kappa(const Options& o) {
  auto in = open_input(o.annotations, "annotation file");
  std::map<std::string, AnnotationTable> tables = load_annotation_csv(in);
  if (tables.empty()) throw std::runtime_error("no annotations found");

  std::ostringstream body;
  for (const auto& [aspect, table] : tables) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-4s %8.4f  (%zu items)\n", aspect.c_str(),
                  fleiss_kappa(table), table.rows.size());
    body << buf;
  }
  auto out = open_output(fs::path(o.out) / "kappa.txt");
  out << artifact_header("kappa", o.seed) << body.str();
  std::cout << body.str();
  return 0;
}

int cmd_synth(const Options& o) {
  SynthConfig cfg;
  cfg.num_snippets = o.synth_n;
  cfg.seed = o.seed;
  cfg.max_responses = o.synth_max_responses;
  cfg.strategy_from_interpretation = o.synth_b_from_r;
  std::vector<SnippetRecord> records = make_synthetic(cfg);
  auto out = open_output(fs::path(o.out) / "synthetic.ndjson");
  write_snippets(out, records, artifact_header("synth", o.seed));
  std::cout << "generated " << records.size() << " labeled snippets -> "
            << (fs::path(o.out) / "synthetic.ndjson").string() << "\n";
  return 0;
}

int cmd_selfcheck(const Options& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  bool ok = true;

  // Inference against brute-force enumeration.
  double max_dev = 0.0;
  bool map_match = true;
  for (int trial = 0; trial < o.trials; ++trial) {
    SnippetGraph g;
    g.snippet_id = "check";
    g.has_strategy = true;
    const int R = 1 + static_cast<int>(rng() % 3);
    g.u_r.resize(R);
    g.u_b.resize(R);
    for (double& x : g.u_i) x = dist(rng);
    for (double& x : g.u_d) x = dist(rng);
    for (int k = 0; k < R; ++k) {
      for (double& x : g.u_r[k]) x = dist(rng);
      for (double& x : g.u_b[k]) x = dist(rng);
    }
    for (double& x : g.t_ir) x = dist(rng);
    for (double& x : g.t_dr) x = dist(rng);
    for (double& x : g.t_rb) x = dist(rng);

    InferenceResult fast = infer_exact(g);
    InferenceResult slow = bruteforce::infer(g);
    auto dev = [&](double a, double b) { max_dev = std::max(max_dev, std::abs(a - b)); };
    dev(fast.log_z, slow.log_z);
    for (int a = 0; a < 3; ++a) {
      dev(fast.p_i[a], slow.p_i[a]);
      dev(fast.p_d[a], slow.p_d[a]);
    }
    for (int a = 0; a < 9; ++a) dev(fast.p_id[a], slow.p_id[a]);
    for (int k = 0; k < R; ++k) {
      for (int a = 0; a < 3; ++a) dev(fast.p_r[k][a], slow.p_r[k][a]);
      for (int a = 0; a < 14; ++a) dev(fast.p_b[k][a], slow.p_b[k][a]);
      for (int a = 0; a < 9; ++a) {
        dev(fast.p_ir[k][a], slow.p_ir[k][a]);
        dev(fast.p_dr[k][a], slow.p_dr[k][a]);
      }
      for (int a = 0; a < 42; ++a) dev(fast.p_rb[k][a], slow.p_rb[k][a]);
    }
    map_match = map_match && fast.map_i == slow.map_i && fast.map_d == slow.map_d &&
                fast.map_r == slow.map_r && fast.map_b == slow.map_b;
  }
  const bool inference_ok = max_dev < 1e-8 && map_match;
  ok = ok && inference_ok;
  std::printf("inference oracle:      max deviation %.3e over %d draws, MAP %s  [%s]\n", max_dev,
              o.trials, map_match ? "agrees" : "DISAGREES", inference_ok ? "ok" : "FAIL");

  // CRF gradient against central finite differences on a 5-snippet toy set.
  const int dim_ctx = 3, dim_resp = 2;
  std::vector<CrfExample> data;
  for (int s = 0; s < 5; ++s) {
    CrfExample ex;
    ex.features.snippet_id = "s" + std::to_string(s);
    ex.features.context.dimension = dim_ctx;
    for (int j = 0; j < dim_ctx; ++j) {
      if (rng() % 2) ex.features.context.entries.emplace_back(j, dist(rng));
    }
    const int R = 1 + static_cast<int>(rng() % 3);
    ex.features.responses.resize(R);
    for (int k = 0; k < R; ++k) {
      ex.features.responses[k].dimension = dim_resp;
      for (int j = 0; j < dim_resp; ++j) {
        if (rng() % 2) ex.features.responses[k].entries.emplace_back(j, dist(rng));
      }
      ex.gold_r.push_back(static_cast<int>(rng() % 3));
      ex.gold_b.push_back(static_cast<int>(rng() % 14));
    }
    ex.gold_i = static_cast<int>(rng() % 3);
    ex.gold_d = static_cast<int>(rng() % 3);
    data.push_back(ex);
  }
  CrfParams shape = CrfParams::zeros(CrfTasks::All, dim_ctx, dim_resp);
  double max_rel_crf = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> theta(shape.size());
    for (double& x : theta) x = 0.5 * dist(rng);
    ObjectiveEvaluation ev = crf_objective(data, shape, theta, 0.2, o.threads);
    auto value = [&](const std::vector<double>& t) {
      return crf_objective(data, shape, t, 0.2, o.threads).value;
    };
    std::vector<double> fd = bruteforce::finite_difference_gradient(value, theta, 1e-5);
    for (std::size_t j = 0; j < fd.size(); ++j) {
      const double scale = std::max({1.0, std::abs(fd[j]), std::abs(ev.gradient[j])});
      max_rel_crf = std::max(max_rel_crf, std::abs(fd[j] - ev.gradient[j]) / scale);
    }
  }
  const bool crf_ok = max_rel_crf < 1e-5;
  ok = ok && crf_ok;
  std::printf("crf gradient oracle:   max relative error %.3e  [%s]\n", max_rel_crf,
              crf_ok ? "ok" : "FAIL");

  // Logistic regression gradient on the same snippets' context vectors.
  std::vector<SparseVector> xs;
  std::vector<int> ys;
  for (const CrfExample& ex : data) {
    xs.push_back(ex.features.context);
    ys.push_back(ex.gold_i);
  }
  const std::size_t n_params = LogRegModel::param_count(3, dim_ctx);
  double max_rel_lr = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> params(n_params);
    for (double& x : params) x = 0.5 * dist(rng);
    ObjectiveEvaluation ev = logreg_objective(params, xs, ys, 3, dim_ctx, 0.2, o.threads);
    auto value = [&](const std::vector<double>& p) {
      return logreg_objective(p, xs, ys, 3, dim_ctx, 0.2, o.threads).value;
    };
    std::vector<double> fd = bruteforce::finite_difference_gradient(value, params, 1e-5);
    for (std::size_t j = 0; j < fd.size(); ++j) {
      const double scale = std::max({1.0, std::abs(fd[j]), std::abs(ev.gradient[j])});
      max_rel_lr = std::max(max_rel_lr, std::abs(fd[j] - ev.gradient[j]) / scale);
    }
  }
  const bool lr_ok = max_rel_lr < 1e-5;
  ok = ok && lr_ok;
  std::printf("logreg gradient oracle: max relative error %.3e  [%s]\n", max_rel_lr,
              lr_ok ? "ok" : "FAIL");

  if (!ok) {
    std::cerr << "selfcheck failed\n";
    return 1;
  }
  std::cout << "selfcheck passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"trollgraph: joint prediction of trolling intention, disclosure, "
               "interpretation and response strategy"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("trollgraph v") + kVersion);
  app.add_option("--config", o.config_path, "JSON config file; flags override its values");
  app.add_option("--threads", o.threads, "worker threads (0 = all available)");
  app.add_option("--seed", o.seed, "seed recorded in every artifact header");

  CLI::App* ingest = app.add_subcommand("ingest", "parse a raw comment dump");
  ingest->add_option("--dump", o.dump, "newline-delimited JSON comment dump");
  ingest->add_flag("--strict", o.strict, "fail on the first malformed record");
  ingest->add_option("--out", o.out, "output directory");

  CLI::App* mine = app.add_subcommand("mine", "extract suspected trolling snippets");
  mine->add_option("--comments", o.comments, "comments.ndjson from ingest");
  mine->add_option("--keyword", o.keyword, "mining keyword, e.g. troll");
  mine->add_option("--max-edit", o.max_edit, "maximum edit distance for keyword matching");
  mine->add_option("--out", o.out, "output directory");

  CLI::App* featurize = app.add_subcommand("featurize", "dump feature bags for inspection");
  featurize->add_option("--snippets", o.snippets, "snippets.ndjson");
  featurize->add_option("--lexicons", o.lexicons, "lexicon directory");
  featurize->add_option("--sidecars", o.sidecars, "optional sidecar annotations");
  featurize->add_option("--features", o.features, "basic|enhanced");
  featurize->add_option("--out", o.out, "output directory");

  CLI::App* train = app.add_subcommand("train", "train a model on labeled snippets");
  train->add_option("--snippets", o.snippets, "labeled snippets.ndjson");
  train->add_option("--lexicons", o.lexicons, "lexicon directory");
  train->add_option("--sidecars", o.sidecars, "optional sidecar annotations");
  train->add_option("--model", o.model, "baseline|joint|hybrid");
  train->add_option("--features", o.features, "basic|enhanced");
  train->add_option("--l2", o.l2, "l2 regularization strength");
  train->add_option("--min-count", o.min_count, "vocabulary minimum document count");
  train->add_option("--downstream", o.downstream, "gold|cross_val_predicted");
  train->add_option("--out", o.out, "output directory");

  CLI::App* predict = app.add_subcommand("predict", "label snippets with a trained model");
  predict->add_option("--snippets", o.snippets, "snippets.ndjson");
  predict->add_option("--model-file", o.model_file, "model.json from train");
  predict->add_option("--lexicons", o.lexicons, "lexicon directory");
  predict->add_option("--sidecars", o.sidecars, "optional sidecar annotations");
  predict->add_option("--out", o.out, "output directory");

  CLI::App* evaluate = app.add_subcommand("evaluate", "run the cross-validation protocol");
  evaluate->add_option("--snippets", o.snippets, "labeled snippets.ndjson");
  evaluate->add_option("--lexicons", o.lexicons, "lexicon directory");
  evaluate->add_option("--sidecars", o.sidecars, "optional sidecar annotations");
  evaluate->add_option("--model", o.model, "baseline|joint|hybrid");
  evaluate->add_option("--features", o.features, "basic|enhanced");
  evaluate->add_option("--k", o.k, "number of folds");
  evaluate->add_option("--tune-fold", o.tune_fold, "fold used for hyperparameter tuning");
  evaluate->add_option("--downstream", o.downstream, "gold|cross_val_predicted");
  evaluate->add_option("--out", o.out, "output directory");

  CLI::App* kappa = app.add_subcommand("kappa", "inter-annotator agreement from a CSV");
  kappa->add_option("--annotations", o.annotations,
                    "CSV rows snippet_id,annotator_id,aspect,label");
  kappa->add_option("--out", o.out, "output directory");

  CLI::App* selfcheck =
      app.add_subcommand("selfcheck", "run inference and gradient oracles");
  selfcheck->add_option("--trials", o.trials, "random inference draws");

  CLI::App* synth = app.add_subcommand("synth", "generate a planted-marker synthetic dataset");
  synth->add_option("--n", o.synth_n, "number of snippets");
  synth->add_option("--max-responses", o.synth_max_responses, "responses per snippet cap");
  synth->add_flag("--b-from-r", o.synth_b_from_r,
                  "derive the strategy label from the interpretation");
  synth->add_option("--out", o.out, "output directory");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!o.config_path.empty()) {
      std::ifstream cfg_in(o.config_path);
      if (!cfg_in) throw UsageError("cannot open config: " + o.config_path);
      json cfg;
      try {
        cfg_in >> cfg;
      } catch (const json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!cfg.is_object()) throw UsageError("config must be a JSON object");
      apply_config(cfg, app, *active, o);
    }

    if (active == ingest) return cmd_ingest(o);
    if (active == mine) return cmd_mine(o);
    if (active == featurize) return cmd_featurize(o);
    if (active == train) return cmd_train(o);
    if (active == predict) return cmd_predict(o);
    if (active == evaluate) return cmd_evaluate(o);
    if (active == kappa) return cmd_kappa(o);
    if (active == selfcheck) return cmd_selfcheck(o);
    if (active == synth) return cmd_synth(o);
    throw UsageError("unknown subcommand");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
