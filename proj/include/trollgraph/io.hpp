#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trollgraph/comments.hpp"
#include "trollgraph/models.hpp"

namespace trollgraph {

// First line of every output artifact: #trollgraph v<version> seed=<seed>
// cmd=<subcommand>. Readers skip leading # lines.
std::string artifact_header(const std::string& command, std::uint64_t seed);

// NDJSON snippet records: {snippet_id, parent, suspect, responses:[...]},
// with an optional labels object using the lowercase enum names. Readers
// accept records with or without labels.
struct SnippetRecord {
  Snippet snippet;
  std::optional<SnippetLabels> labels;
};

std::string snippet_to_json(const SnippetRecord& record);
SnippetRecord snippet_from_json(const std::string& line);

std::vector<SnippetRecord> read_snippets(std::istream& in);
void write_snippets(std::ostream& out, const std::vector<SnippetRecord>& records,
                    const std::string& header);

// Labeled view of records; throws when any record lacks labels.
std::vector<LabeledSnippet> require_labels(const std::vector<SnippetRecord>& records);

// Prediction records share the gold-label schema so files diff cleanly:
// {snippet_id, intention, disclosure, responses:[{interpretation, strategy}]}.
std::string prediction_to_json(const std::string& snippet_id, const SnippetLabels& labels);
void write_predictions(std::ostream& out, const std::vector<std::string>& snippet_ids,
                       const std::vector<SnippetLabels>& labels, const std::string& header);

// Conversation trees as NDJSON: one record per comment, grouped implicitly by
// thread id. Used by the ingest subcommand.
void write_comments(std::ostream& out, const std::vector<Comment>& comments,
                    const std::string& header);
std::vector<Comment> read_comments(std::istream& in);

// Versioned JSON model container. Kind, feature set, hyperparameters,
// vocabularies, label names, and dense weights round-trip bit-exactly
// (doubles are serialized shortest-round-trip).
void save_model(std::ostream& out, const AnyModel& model, std::uint64_t seed);
AnyModel load_model(std::istream& in);

// Sidecar annotations: NDJSON records {comment_id, tokens:[{text,pos,lemma}],
// frames:[{frame,target,args:[{role,text}]}]}.
SidecarMap read_sidecars(std::istream& in);

}  // namespace trollgraph
