#include "trollgraph/comments.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace trollgraph {

namespace {

using nlohmann::json;

bool is_deleted(const Comment& c) {
  return c.body == kDeletedMarker || c.author == kDeletedMarker;
}

// Reddit dumps prefix parent_id/link_id with a type tag ("t1_", "t3_", ...);
// comment ids themselves are bare.
std::string strip_type_prefix(std::string s) {
  if (s.size() > 3 && s[0] == 't' && std::isdigit(static_cast<unsigned char>(s[1])) && s[2] == '_') {
    return s.substr(3);
  }
  return s;
}

Comment parse_record(const json& rec) {
  if (!rec.is_object()) throw std::runtime_error("record is not an object");
  Comment c;
  if (!rec.contains("id") || !rec["id"].is_string() || rec["id"].get<std::string>().empty()) {
    throw std::runtime_error("missing or empty 'id'");
  }
  c.id = rec["id"].get<std::string>();
  if (!rec.contains("link_id") || !rec["link_id"].is_string() ||
      rec["link_id"].get<std::string>().empty()) {
    throw std::runtime_error("missing or empty 'link_id'");
  }
  c.thread_id = strip_type_prefix(rec["link_id"].get<std::string>());
  if (!rec.contains("body") || !rec["body"].is_string()) {
    throw std::runtime_error("missing 'body'");
  }
  c.body = rec["body"].get<std::string>();
  if (rec.contains("parent_id") && rec["parent_id"].is_string()) {
    std::string p = strip_type_prefix(rec["parent_id"].get<std::string>());
    if (!p.empty()) c.parent_id = std::move(p);
  }
  if (rec.contains("author") && rec["author"].is_string()) {
    c.author = rec["author"].get<std::string>();
  }
  if (rec.contains("created_utc")) {
    const auto& v = rec["created_utc"];
    if (v.is_number_integer()) {
      c.created_utc = v.get<std::int64_t>();
    } else if (v.is_string()) {
      try {
        c.created_utc = std::stoll(v.get<std::string>());
      } catch (const std::exception&) {
        throw std::runtime_error("bad 'created_utc'");
      }
    } else if (v.is_number()) {
      c.created_utc = static_cast<std::int64_t>(v.get<double>());
    } else if (!v.is_null()) {
      throw std::runtime_error("bad 'created_utc'");
    }
  }
  if (c.body.empty()) {
    throw std::runtime_error("empty 'body'");
  }
  return c;
}

bool timestamp_id_less(const Comment& a, const Comment& b) {
  if (a.created_utc != b.created_utc) return a.created_utc < b.created_utc;
  return a.id < b.id;
}

// Keyword matching tokenization: whitespace split, strip leading/trailing
// punctuation, lowercase. Makes "troll," match "troll".
std::vector<std::string> keyword_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::size_t b = i, e = j;
      while (b < e && std::ispunct(static_cast<unsigned char>(text[b]))) ++b;
      while (e > b && std::ispunct(static_cast<unsigned char>(text[e - 1]))) --e;
      if (e > b) {
        std::string tok = text.substr(b, e - b);
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        out.push_back(std::move(tok));
      }
    }
    i = j;
  }
  return out;
}

}  // namespace

DumpParseResult parse_comment_dump(std::istream& in, bool strict) {
  DumpParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    json rec = json::parse(line, nullptr, false);
    try {
      if (rec.is_discarded()) throw std::runtime_error("invalid JSON");
      Comment c = parse_record(rec);
      if (is_deleted(c)) {
        ++result.dropped_deleted;
        continue;
      }
      result.comments.push_back(std::move(c));
    } catch (const std::exception& e) {
      if (strict) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
      }
      result.issues.push_back({line_no, e.what()});
    }
  }
  return result;
}

std::vector<ConversationTree> build_trees(const std::vector<Comment>& comments) {
  std::map<std::string, ConversationTree> by_thread;
  for (const Comment& c : comments) {
    ConversationTree& tree = by_thread[c.thread_id];
    tree.thread_id = c.thread_id;
    auto [it, inserted] = tree.nodes.emplace(c.id, c);
    if (!inserted) {
      throw std::runtime_error("duplicate comment id '" + c.id + "' in thread '" + c.thread_id +
                               "'");
    }
  }

  std::vector<ConversationTree> trees;
  trees.reserve(by_thread.size());
  for (auto& [thread_id, tree] : by_thread) {
    std::vector<const Comment*> root_comments;
    for (const auto& [id, c] : tree.nodes) {
      if (c.parent_id && tree.nodes.count(*c.parent_id)) {
        tree.children[*c.parent_id].push_back(id);
      } else {
        root_comments.push_back(&c);
      }
    }
    for (auto& [parent, kids] : tree.children) {
      std::sort(kids.begin(), kids.end(), [&](const std::string& a, const std::string& b) {
        return timestamp_id_less(tree.nodes.at(a), tree.nodes.at(b));
      });
    }
    std::sort(root_comments.begin(), root_comments.end(),
              [](const Comment* a, const Comment* b) { return timestamp_id_less(*a, *b); });
    for (const Comment* r : root_comments) tree.roots.push_back(r->id);

    // Parent links that loop back on themselves leave nodes unreachable from
    // any root; such a dump cannot form a tree.
    std::size_t reached = 0;
    std::deque<std::string> queue(tree.roots.begin(), tree.roots.end());
    while (!queue.empty()) {
      std::string id = std::move(queue.front());
      queue.pop_front();
      ++reached;
      auto it = tree.children.find(id);
      if (it != tree.children.end()) {
        for (const std::string& kid : it->second) queue.push_back(kid);
      }
    }
    if (reached != tree.nodes.size()) {
      throw std::runtime_error("cycle detected in thread '" + thread_id + "'");
    }
    trees.push_back(std::move(tree));
  }
  return trees;
}

int levenshtein(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return static_cast<int>(m);
  if (m == 0) return static_cast<int>(n);
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::vector<std::string> find_suspects(const ConversationTree& tree, const std::string& keyword,
                                       int max_edit) {
  if (keyword.empty()) throw std::invalid_argument("keyword must be nonempty");
  if (max_edit < 0) throw std::invalid_argument("max_edit must be >= 0");

  std::string lowered_kw = keyword;
  std::transform(lowered_kw.begin(), lowered_kw.end(), lowered_kw.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });

  auto matches = [&](const Comment& c) {
    for (const std::string& tok : keyword_tokens(c.body)) {
      const auto diff = static_cast<long>(tok.size()) - static_cast<long>(lowered_kw.size());
      if (diff > max_edit || -diff > max_edit) continue;
      if (levenshtein(tok, lowered_kw) <= max_edit) return true;
    }
    return false;
  };

  std::vector<std::string> out;
  for (const auto& [id, c] : tree.nodes) {
    auto it = tree.children.find(id);
    if (it == tree.children.end()) continue;
    for (const std::string& kid : it->second) {
      if (matches(tree.nodes.at(kid))) {
        out.push_back(id);
        break;
      }
    }
  }
  return out;
}

std::string_view to_string(SnippetReject r) {
  switch (r) {
    case SnippetReject::None: return "none";
    case SnippetReject::NoParent: return "NoParent";
    case SnippetReject::NoResponses: return "NoResponses";
    case SnippetReject::ParentNotResponder: return "ParentNotResponder";
  }
  return "unknown";
}

SnippetExtraction extract_snippet(const ConversationTree& tree, const std::string& suspect_id) {
  auto it = tree.nodes.find(suspect_id);
  if (it == tree.nodes.end()) throw std::invalid_argument("suspect id not in tree: " + suspect_id);
  const Comment& suspect = it->second;

  if (!suspect.parent_id || !tree.nodes.count(*suspect.parent_id)) {
    return {std::nullopt, SnippetReject::NoParent};
  }
  const Comment& parent = tree.nodes.at(*suspect.parent_id);

  auto kids = tree.children.find(suspect_id);
  if (kids == tree.children.end() || kids->second.empty()) {
    return {std::nullopt, SnippetReject::NoResponses};
  }

  Snippet s;
  s.snippet_id = suspect.id;
  s.parent = parent;
  s.suspect = suspect;
  bool parent_responds = false;
  for (const std::string& kid : kids->second) {
    const Comment& r = tree.nodes.at(kid);
    if (r.author == parent.author) parent_responds = true;
    s.responses.push_back(r);
  }
  if (!parent_responds) return {std::nullopt, SnippetReject::ParentNotResponder};
  return {std::move(s), SnippetReject::None};
}

LabelCheck validate_labels(const Snippet& snippet, const SnippetLabels& labels) {
  LabelCheck check;
  if (labels.per_response.size() != snippet.responses.size()) {
    check.violations.push_back("per_response length " + std::to_string(labels.per_response.size()) +
                               " does not match response count " +
                               std::to_string(snippet.responses.size()));
  }
  const bool i_none = labels.intention == Intention::None;
  const bool d_none = labels.disclosure == Disclosure::None;
  if (i_none != d_none) {
    check.violations.push_back(std::string("intention/disclosure consistency: intention=") +
                               std::string(to_string(labels.intention)) + " with disclosure=" +
                               std::string(to_string(labels.disclosure)));
  }
  if (labels.intention == Intention::Playing && !d_none) {
    check.warnings.push_back(std::string("unspecified pairing: intention=playing with disclosure=") +
                             std::string(to_string(labels.disclosure)));
  }
  return check;
}

}  // namespace trollgraph
