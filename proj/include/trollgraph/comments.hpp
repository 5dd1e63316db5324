#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trollgraph/labels.hpp"

namespace trollgraph {

// Deleted comments carry this marker in body or author and are dropped on ingest.
inline constexpr const char* kDeletedMarker = "[deleted]";

struct Comment {
  std::string id;
  std::optional<std::string> parent_id;
  std::string thread_id;
  std::string author;
  std::string body;
  std::int64_t created_utc = 0;
};

struct ConversationTree {
  std::string thread_id;
  std::map<std::string, Comment> nodes;
  // Child ids ordered by (created_utc, id). Comments whose parent is absent
  // from the dump are roots.
  std::map<std::string, std::vector<std::string>> children;
  std::vector<std::string> roots;
};

// The unit of prediction: parent, suspected trolling comment, and all of the
// suspect's direct responses.
struct Snippet {
  std::string snippet_id;
  Comment parent;
  Comment suspect;
  std::vector<Comment> responses;
};

struct ResponseLabels {
  Interpretation interpretation = Interpretation::None;
  Strategy strategy = Strategy::Normal;
};

struct SnippetLabels {
  Intention intention = Intention::None;
  Disclosure disclosure = Disclosure::None;
  std::vector<ResponseLabels> per_response;
};

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct DumpParseResult {
  std::vector<Comment> comments;
  std::vector<ParseIssue> issues;
  std::size_t dropped_deleted = 0;
};

// Reads newline-delimited JSON records with fields id, parent_id (nullable),
// link_id, author, body, created_utc. Records whose body or author is
// "[deleted]" are dropped. Malformed records are collected as issues and
// skipped; with strict=true the first malformed record throws instead.
// Lines that are empty or start with '#' are ignored.
DumpParseResult parse_comment_dump(std::istream& in, bool strict = false);

// One tree per thread_id. Throws on duplicate comment id within a thread.
std::vector<ConversationTree> build_trees(const std::vector<Comment>& comments);

// Unit-cost Levenshtein distance.
int levenshtein(std::string_view a, std::string_view b);

// Ids of comments with at least one child containing a token within edit
// distance max_edit of keyword (lowercased). Returned in id order.
std::vector<std::string> find_suspects(const ConversationTree& tree, const std::string& keyword,
                                       int max_edit);

enum class SnippetReject { None = 0, NoParent, NoResponses, ParentNotResponder };

std::string_view to_string(SnippetReject r);

struct SnippetExtraction {
  std::optional<Snippet> snippet;
  SnippetReject reject = SnippetReject::None;
};

// Builds (parent, suspect, direct responses); rejects when the suspect has no
// parent, no responses, or the parent's author is not among response authors.
SnippetExtraction extract_snippet(const ConversationTree& tree, const std::string& suspect_id);

struct LabelCheck {
  std::vector<std::string> violations;
  // Combinations the annotation scheme leaves unspecified (e.g. a playing
  // intention with a hidden/exposed disclosure) are reported here instead.
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

LabelCheck validate_labels(const Snippet& snippet, const SnippetLabels& labels);

}  // namespace trollgraph
