#include "trollgraph/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "trollgraph/version.hpp"

namespace trollgraph {

namespace {

using nlohmann::json;

json comment_to_json(const Comment& c) {
  json j;
  j["id"] = c.id;
  j["parent_id"] = c.parent_id ? json(*c.parent_id) : json(nullptr);
  j["link_id"] = c.thread_id;
  j["author"] = c.author;
  j["body"] = c.body;
  j["created_utc"] = c.created_utc;
  return j;
}

Comment comment_from_json(const json& j) {
  Comment c;
  c.id = j.at("id").get<std::string>();
  if (j.contains("parent_id") && !j.at("parent_id").is_null()) {
    c.parent_id = j.at("parent_id").get<std::string>();
  }
  c.thread_id = j.at("link_id").get<std::string>();
  c.author = j.at("author").get<std::string>();
  c.body = j.at("body").get<std::string>();
  c.created_utc = j.at("created_utc").get<std::int64_t>();
  return c;
}

json labels_to_json(const SnippetLabels& labels) {
  json j;
  j["intention"] = std::string(to_string(labels.intention));
  j["disclosure"] = std::string(to_string(labels.disclosure));
  json rs = json::array();
  for (const ResponseLabels& rl : labels.per_response) {
    json r;
    r["interpretation"] = std::string(to_string(rl.interpretation));
    r["strategy"] = std::string(to_string(rl.strategy));
    rs.push_back(std::move(r));
  }
  j["responses"] = std::move(rs);
  return j;
}

template <typename Enum, typename Parser>
Enum parse_label(const json& j, const char* key, Parser&& parser) {
  const std::string name = j.at(key).get<std::string>();
  const auto parsed = parser(name);
  if (!parsed) throw std::runtime_error(std::string("unknown ") + key + " label: " + name);
  return *parsed;
}

SnippetLabels labels_from_json(const json& j) {
  SnippetLabels labels;
  labels.intention = parse_label<Intention>(j, "intention", parse_intention);
  labels.disclosure = parse_label<Disclosure>(j, "disclosure", parse_disclosure);
  for (const json& r : j.at("responses")) {
    ResponseLabels rl;
    rl.interpretation = parse_label<Interpretation>(r, "interpretation", parse_interpretation);
    rl.strategy = parse_label<Strategy>(r, "strategy", parse_strategy);
    labels.per_response.push_back(rl);
  }
  return labels;
}

json vocab_to_json(const Vocabulary& vocab) { return json(vocab.names()); }

Vocabulary vocab_from_json(const json& j) {
  Vocabulary vocab;
  for (const json& name : j) vocab.add(name.get<std::string>());
  vocab.freeze();
  return vocab;
}

json logreg_to_json(const LogRegModel& model) {
  json j;
  j["num_classes"] = model.num_classes;
  j["dimension"] = model.dimension;
  j["params"] = model.params;
  return j;
}

LogRegModel logreg_from_json(const json& j) {
  LogRegModel model;
  model.num_classes = j.at("num_classes").get<int>();
  model.dimension = j.at("dimension").get<int>();
  model.params = j.at("params").get<std::vector<double>>();
  if (model.params.size() != LogRegModel::param_count(model.num_classes, model.dimension)) {
    throw std::runtime_error("model file: classifier parameter block has the wrong length");
  }
  return model;
}

json classifier_to_json(const TaskClassifier& clf) {
  json j;
  j["vocab"] = vocab_to_json(clf.vocab);
  j["model"] = logreg_to_json(clf.model);
  return j;
}

TaskClassifier classifier_from_json(const json& j) {
  TaskClassifier clf;
  clf.vocab = vocab_from_json(j.at("vocab"));
  clf.model = logreg_from_json(j.at("model"));
  if (clf.model.dimension != clf.vocab.dimension()) {
    throw std::runtime_error("model file: vocabulary and classifier dimensions disagree");
  }
  return clf;
}

std::vector<double> slice(const std::vector<double>& theta, std::size_t begin,
                          std::size_t count) {
  return std::vector<double>(theta.begin() + begin, theta.begin() + begin + count);
}

json crf_to_json(const CrfParams& p) {
  json j;
  j["tasks"] = p.has_strategy() ? "all" : "no_strategy";
  j["dim_ctx"] = p.dim_ctx;
  j["dim_resp"] = p.dim_resp;
  json blocks;
  blocks["W_I"] = slice(p.theta, p.offset_w_i(), 3u * p.dim_ctx);
  blocks["b_I"] = slice(p.theta, p.offset_b_i(), 3);
  blocks["W_D"] = slice(p.theta, p.offset_w_d(), 3u * p.dim_ctx);
  blocks["b_D"] = slice(p.theta, p.offset_b_d(), 3);
  blocks["W_R"] = slice(p.theta, p.offset_w_r(), 3u * p.dim_resp);
  blocks["b_R"] = slice(p.theta, p.offset_b_r(), 3);
  if (p.has_strategy()) {
    blocks["W_B"] = slice(p.theta, p.offset_w_b(), 14u * p.dim_resp);
    blocks["b_B"] = slice(p.theta, p.offset_b_b(), 14);
  }
  blocks["T_IR"] = slice(p.theta, p.offset_t_ir(), 9);
  blocks["T_DR"] = slice(p.theta, p.offset_t_dr(), 9);
  if (p.has_strategy()) blocks["T_RB"] = slice(p.theta, p.offset_t_rb(), 42);
  j["blocks"] = std::move(blocks);
  return j;
}

CrfParams crf_from_json(const json& j) {
  const std::string tasks = j.at("tasks").get<std::string>();
  if (tasks != "all" && tasks != "no_strategy") {
    throw std::runtime_error("model file: unknown tasks set: " + tasks);
  }
  CrfParams p = CrfParams::zeros(tasks == "all" ? CrfTasks::All : CrfTasks::NoStrategy,
                                 j.at("dim_ctx").get<int>(), j.at("dim_resp").get<int>());
  const json& blocks = j.at("blocks");
  auto put = [&](const char* name, std::size_t offset, std::size_t count) {
    const std::vector<double> v = blocks.at(name).get<std::vector<double>>();
    if (v.size() != count) {
      throw std::runtime_error(std::string("model file: block ") + name +
                               " has the wrong length");
    }
    std::copy(v.begin(), v.end(), p.theta.begin() + offset);
  };
  put("W_I", p.offset_w_i(), 3u * p.dim_ctx);
  put("b_I", p.offset_b_i(), 3);
  put("W_D", p.offset_w_d(), 3u * p.dim_ctx);
  put("b_D", p.offset_b_d(), 3);
  put("W_R", p.offset_w_r(), 3u * p.dim_resp);
  put("b_R", p.offset_b_r(), 3);
  if (p.has_strategy()) {
    put("W_B", p.offset_w_b(), 14u * p.dim_resp);
    put("b_B", p.offset_b_b(), 14);
  }
  put("T_IR", p.offset_t_ir(), 9);
  put("T_DR", p.offset_t_dr(), 9);
  if (p.has_strategy()) put("T_RB", p.offset_t_rb(), 42);
  return p;
}

json parse_line(const std::string& line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": invalid JSON");
  }
  return j;
}

// Streams NDJSON payload lines, skipping blank lines and # headers.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    fn(parse_line(line, line_no), line_no);
  }
}

}  // namespace

std::string artifact_header(const std::string& command, std::uint64_t seed) {
  return "#trollgraph v" + std::string(kVersion) + " seed=" + std::to_string(seed) +
         " cmd=" + command + "\n";
}

std::string snippet_to_json(const SnippetRecord& record) {
  json j;
  j["snippet_id"] = record.snippet.snippet_id;
  j["parent"] = comment_to_json(record.snippet.parent);
  j["suspect"] = comment_to_json(record.snippet.suspect);
  json rs = json::array();
  for (const Comment& c : record.snippet.responses) rs.push_back(comment_to_json(c));
  j["responses"] = std::move(rs);
  if (record.labels) j["labels"] = labels_to_json(*record.labels);
  return j.dump();
}

SnippetRecord snippet_from_json(const std::string& line) {
  const json j = parse_line(line, 1);
  SnippetRecord record;
  record.snippet.snippet_id = j.at("snippet_id").get<std::string>();
  record.snippet.parent = comment_from_json(j.at("parent"));
  record.snippet.suspect = comment_from_json(j.at("suspect"));
  for (const json& r : j.at("responses")) {
    record.snippet.responses.push_back(comment_from_json(r));
  }
  if (j.contains("labels") && !j.at("labels").is_null()) {
    record.labels = labels_from_json(j.at("labels"));
    if (record.labels->per_response.size() != record.snippet.responses.size()) {
      throw std::runtime_error("snippet " + record.snippet.snippet_id +
                               ": label count does not match response count");
    }
  }
  return record;
}

std::vector<SnippetRecord> read_snippets(std::istream& in) {
  std::vector<SnippetRecord> records;
  for_each_record(in, [&](const json& j, std::size_t line_no) {
    try {
      records.push_back(snippet_from_json(j.dump()));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  });
  return records;
}

void write_snippets(std::ostream& out, const std::vector<SnippetRecord>& records,
                    const std::string& header) {
  out << header;
  for (const SnippetRecord& r : records) out << snippet_to_json(r) << "\n";
}

std::vector<LabeledSnippet> require_labels(const std::vector<SnippetRecord>& records) {
  std::vector<LabeledSnippet> out;
  out.reserve(records.size());
  for (const SnippetRecord& r : records) {
    if (!r.labels) {
      throw std::runtime_error("snippet " + r.snippet.snippet_id + " has no labels");
    }
    out.push_back({r.snippet, *r.labels});
  }
  return out;
}

std::string prediction_to_json(const std::string& snippet_id, const SnippetLabels& labels) {
  json j = labels_to_json(labels);
  j["snippet_id"] = snippet_id;
  return j.dump();
}

void write_predictions(std::ostream& out, const std::vector<std::string>& snippet_ids,
                       const std::vector<SnippetLabels>& labels, const std::string& header) {
  if (snippet_ids.size() != labels.size()) {
    throw std::invalid_argument("ids and labels differ in length");
  }
  out << header;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << prediction_to_json(snippet_ids[i], labels[i]) << "\n";
  }
}

void write_comments(std::ostream& out, const std::vector<Comment>& comments,
                    const std::string& header) {
  out << header;
  for (const Comment& c : comments) out << comment_to_json(c).dump() << "\n";
}

std::vector<Comment> read_comments(std::istream& in) {
  const DumpParseResult parsed = parse_comment_dump(in, true);
  return parsed.comments;
}

void save_model(std::ostream& out, const AnyModel& model, std::uint64_t seed) {
  out << artifact_header("train", seed);
  json j;
  j["format"] = "trollgraph-model";
  j["version"] = kVersion;
  j["seed"] = seed;
  j["kind"] = std::string(to_string(model.kind));
  j["features"] = std::string(to_string(model.feature_set()));
  json labels;
  labels["intention"] = intention_names();
  labels["disclosure"] = disclosure_names();
  labels["interpretation"] = interpretation_names();
  labels["strategy"] = strategy_names();
  j["labels"] = std::move(labels);

  switch (model.kind) {
    case ModelKind::Pipeline: {
      const PipelineModel& m = *model.pipeline;
      json b;
      b["l2"] = m.l2;
      b["min_count"] = m.min_count;
      b["downstream"] = std::string(to_string(m.downstream));
      b["i"] = classifier_to_json(m.intention);
      b["d"] = classifier_to_json(m.disclosure);
      b["r"] = classifier_to_json(m.interpretation);
      b["b"] = classifier_to_json(m.strategy);
      j["baseline"] = std::move(b);
      break;
    }
    case ModelKind::Joint: {
      const JointModel& m = *model.joint;
      json b;
      b["l2"] = m.l2;
      b["min_count"] = m.min_count;
      b["ctx_vocab"] = vocab_to_json(m.ctx_vocab);
      b["resp_vocab"] = vocab_to_json(m.resp_vocab);
      b["crf"] = crf_to_json(m.crf);
      j["joint"] = std::move(b);
      break;
    }
    case ModelKind::Hybrid: {
      const HybridModel& m = *model.hybrid;
      json b;
      b["l2"] = m.l2;
      b["min_count"] = m.min_count;
      b["downstream"] = std::string(to_string(m.downstream));
      b["ctx_vocab"] = vocab_to_json(m.ctx_vocab);
      b["resp_vocab"] = vocab_to_json(m.resp_vocab);
      b["crf"] = crf_to_json(m.crf);
      b["b"] = classifier_to_json(m.strategy);
      j["hybrid"] = std::move(b);
      break;
    }
  }
  out << j.dump(2) << "\n";
}

AnyModel load_model(std::istream& in) {
  while (in.peek() == '#') {
    std::string header;
    std::getline(in, header);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model file: invalid JSON: ") + e.what());
  }
  if (!j.contains("format") || j.at("format").get<std::string>() != "trollgraph-model") {
    throw std::runtime_error("model file: missing or unknown format tag");
  }
  const std::string kind_name = j.at("kind").get<std::string>();
  const auto kind = parse_model_kind(kind_name);
  if (!kind) throw std::runtime_error("model file: unknown kind: " + kind_name);
  const std::string feat_name = j.at("features").get<std::string>();
  const auto feat = parse_feature_set(feat_name);
  if (!feat) throw std::runtime_error("model file: unknown feature set: " + feat_name);

  AnyModel model;
  model.kind = *kind;
  switch (*kind) {
    case ModelKind::Pipeline: {
      const json& b = j.at("baseline");
      PipelineModel m;
      m.feature_set = *feat;
      m.l2 = b.at("l2").get<double>();
      m.min_count = b.at("min_count").get<int>();
      const auto down = parse_downstream_features(b.at("downstream").get<std::string>());
      if (!down) throw std::runtime_error("model file: unknown downstream mode");
      m.downstream = *down;
      m.intention = classifier_from_json(b.at("i"));
      m.disclosure = classifier_from_json(b.at("d"));
      m.interpretation = classifier_from_json(b.at("r"));
      m.strategy = classifier_from_json(b.at("b"));
      model.pipeline = std::move(m);
      break;
    }
    case ModelKind::Joint: {
      const json& b = j.at("joint");
      JointModel m;
      m.feature_set = *feat;
      m.l2 = b.at("l2").get<double>();
      m.min_count = b.at("min_count").get<int>();
      m.ctx_vocab = vocab_from_json(b.at("ctx_vocab"));
      m.resp_vocab = vocab_from_json(b.at("resp_vocab"));
      m.crf = crf_from_json(b.at("crf"));
      if (m.crf.tasks != CrfTasks::All) {
        throw std::runtime_error("model file: joint model requires the full tasks set");
      }
      if (m.crf.dim_ctx != m.ctx_vocab.dimension() ||
          m.crf.dim_resp != m.resp_vocab.dimension()) {
        throw std::runtime_error("model file: vocabulary and crf dimensions disagree");
      }
      model.joint = std::move(m);
      break;
    }
    case ModelKind::Hybrid: {
      const json& b = j.at("hybrid");
      HybridModel m;
      m.feature_set = *feat;
      m.l2 = b.at("l2").get<double>();
      m.min_count = b.at("min_count").get<int>();
      const auto down = parse_downstream_features(b.at("downstream").get<std::string>());
      if (!down) throw std::runtime_error("model file: unknown downstream mode");
      m.downstream = *down;
      m.ctx_vocab = vocab_from_json(b.at("ctx_vocab"));
      m.resp_vocab = vocab_from_json(b.at("resp_vocab"));
      m.crf = crf_from_json(b.at("crf"));
      if (m.crf.tasks != CrfTasks::NoStrategy) {
        throw std::runtime_error("model file: hybrid model requires the 3-task set");
      }
      if (m.crf.dim_ctx != m.ctx_vocab.dimension() ||
          m.crf.dim_resp != m.resp_vocab.dimension()) {
        throw std::runtime_error("model file: vocabulary and crf dimensions disagree");
      }
      m.strategy = classifier_from_json(b.at("b"));
      model.hybrid = std::move(m);
      break;
    }
  }
  return model;
}

SidecarMap read_sidecars(std::istream& in) {
  SidecarMap sidecars;
  for_each_record(in, [&](const json& j, std::size_t line_no) {
    SidecarAnnotation ann;
    ann.comment_id = j.at("comment_id").get<std::string>();
    if (j.contains("tokens")) {
      for (const json& t : j.at("tokens")) {
        SidecarToken tok;
        tok.text = t.at("text").get<std::string>();
        tok.pos = t.value("pos", "");
        tok.lemma = t.value("lemma", "");
        ann.tokens.push_back(std::move(tok));
      }
    }
    if (j.contains("frames")) {
      for (const json& f : j.at("frames")) {
        FrameAnnotation frame;
        frame.frame = f.at("frame").get<std::string>();
        frame.target = f.value("target", "");
        if (f.contains("args")) {
          for (const json& a : f.at("args")) {
            frame.args.push_back({a.at("role").get<std::string>(),
                                  a.at("text").get<std::string>()});
          }
        }
        ann.frames.push_back(std::move(frame));
      }
    }
    if (!sidecars.emplace(ann.comment_id, std::move(ann)).second) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": duplicate sidecar for comment");
    }
  });
  return sidecars;
}

}  // namespace trollgraph
