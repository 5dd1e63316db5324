#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trollgraph/comments.hpp"
#include "trollgraph/lexicons.hpp"

namespace trollgraph {

struct Token {
  std::string text;
  std::string lowered;
  std::optional<std::string> pos;
  std::optional<std::string> lemma;
};

struct SidecarToken {
  std::string text;
  std::string pos;
  std::string lemma;
};

struct FrameArg {
  std::string role;
  std::string text;
};

struct FrameAnnotation {
  std::string frame;
  std::string target;
  std::vector<FrameArg> args;
};

// Offline POS/lemma/frame annotations attached to a comment by id.
struct SidecarAnnotation {
  std::string comment_id;
  std::vector<SidecarToken> tokens;
  std::vector<FrameAnnotation> frames;
};

// Named feature values. Names are namespaced family:payload; binary families
// carry value 1.0. Ordered map keeps iteration deterministic.
struct FeatureBag {
  std::map<std::string, double> values;
  std::string provenance;

  void set(const std::string& name, double value) { values[name] = value; }
  bool has(const std::string& name) const { return values.count(name) > 0; }
  std::size_t size() const { return values.size(); }
};

enum class FeatureSet { Basic, Enhanced };

std::string_view to_string(FeatureSet s);
std::optional<FeatureSet> parse_feature_set(std::string_view name);

// Whitespace split with leading/trailing punctuation separated into their own
// tokens; chunks listed in the emoticon lexicon survive intact.
std::vector<Token> tokenize(const std::string& text,
                            const std::map<std::string, std::string>* emoticons = nullptr);

// The four real-valued sentiment feature names, in canonical order. Always
// present in any vocabulary.
const std::vector<std::string>& sentiment_feature_names();

FeatureBag extract_features(const Comment& comment, const SidecarAnnotation* sidecar,
                            const LexiconSet& lexicons, FeatureSet set);

// Union of suspect features (names unchanged) and parent features renamed
// with a ctx: prefix.
FeatureBag combine_context(const FeatureBag& suspect_bag, const FeatureBag& parent_bag);

// Frozen feature-name -> column-index map. Built from training folds only.
class Vocabulary {
 public:
  // Interns a name, returning its index. Throws when frozen and unknown.
  int add(const std::string& name);
  std::optional<int> lookup(const std::string& name) const;
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  int dimension() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

// Names occurring in at least min_count bags, in first-seen order, plus the
// sentiment features and any extra_always names. With require_counted (the
// default) an empty counted set is an error.
Vocabulary build_vocabulary(const std::vector<FeatureBag>& bags, int min_count = 1,
                            const std::vector<std::string>& extra_always = {},
                            bool require_counted = true);

struct SparseVector {
  std::vector<std::pair<int, double>> entries;  // strictly increasing indices
  int dimension = 0;
};

// Maps known names to (index, value) pairs; unknown names are dropped.
SparseVector vectorize(const FeatureBag& bag, const Vocabulary& vocab);

}  // namespace trollgraph
