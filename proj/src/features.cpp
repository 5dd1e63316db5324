#include "trollgraph/features.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <stdexcept>

namespace trollgraph {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string> whitespace_split(const std::string& text) {
  std::vector<std::string> chunks;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) chunks.push_back(text.substr(i, j - i));
    i = j;
  }
  return chunks;
}

Token make_token(std::string text) {
  Token t;
  t.lowered = lowercase(text);
  t.text = std::move(text);
  return t;
}

// Splits one whitespace-delimited chunk: peels leading then trailing
// punctuation characters into their own tokens, stopping as soon as the
// remainder is a known emoticon.
void split_chunk(const std::string& chunk, const std::map<std::string, std::string>* emoticons,
                 std::vector<Token>& out) {
  auto is_emoticon = [&](const std::string& s) {
    return emoticons != nullptr && emoticons->count(lowercase(s)) > 0;
  };

  std::vector<std::string> lead;
  std::deque<std::string> trail;
  std::size_t b = 0, e = chunk.size();
  std::string core;
  while (b < e) {
    std::string cur = chunk.substr(b, e - b);
    if (is_emoticon(cur)) {
      core = std::move(cur);
      break;
    }
    if (is_punct(chunk[b])) {
      lead.push_back(std::string(1, chunk[b]));
      ++b;
      continue;
    }
    if (is_punct(chunk[e - 1])) {
      trail.push_front(std::string(1, chunk[e - 1]));
      --e;
      continue;
    }
    core = std::move(cur);
    break;
  }
  for (std::string& s : lead) out.push_back(make_token(std::move(s)));
  if (!core.empty()) out.push_back(make_token(std::move(core)));
  for (std::string& s : trail) out.push_back(make_token(std::move(s)));
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += '_';
    out += words[i];
  }
  return out;
}

// True when the words appear as a contiguous run in the token stream.
bool contains_phrase(const std::vector<std::string>& lowered_tokens,
                     const std::vector<std::string>& words) {
  if (words.empty() || words.size() > lowered_tokens.size()) return false;
  for (std::size_t i = 0; i + words.size() <= lowered_tokens.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (lowered_tokens[i + j] != words[j]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(FeatureSet s) {
  return s == FeatureSet::Basic ? "basic" : "enhanced";
}

std::optional<FeatureSet> parse_feature_set(std::string_view name) {
  if (name == "basic") return FeatureSet::Basic;
  if (name == "enhanced") return FeatureSet::Enhanced;
  return std::nullopt;
}

std::vector<Token> tokenize(const std::string& text,
                            const std::map<std::string, std::string>* emoticons) {
  std::vector<Token> tokens;
  for (const std::string& chunk : whitespace_split(text)) {
    split_chunk(chunk, emoticons, tokens);
  }
  return tokens;
}

const std::vector<std::string>& sentiment_feature_names() {
  static const std::vector<std::string> names = {"senti:positive", "senti:neutral",
                                                 "senti:negative", "senti:compound"};
  return names;
}

FeatureBag extract_features(const Comment& comment, const SidecarAnnotation* sidecar,
                            const LexiconSet& lexicons, FeatureSet set) {
  FeatureBag bag;
  const std::vector<Token> tokens = tokenize(comment.body, &lexicons.emoticons);

  std::vector<std::string> lowered;
  lowered.reserve(tokens.size());
  for (const Token& t : tokens) lowered.push_back(t.lowered);

  // Lemma stream: sidecar lemmas when available, otherwise lowered tokens.
  std::vector<std::string> lemmas;
  if (sidecar) {
    lemmas.reserve(sidecar->tokens.size());
    for (const SidecarToken& t : sidecar->tokens) lemmas.push_back(lowercase(t.lemma));
    bag.provenance = "sidecar";
  } else {
    lemmas = lowered;
    bag.provenance = "no-sidecar: pos/frame families disabled; lemmas from lowered tokens";
  }

  for (const std::string& t : lowered) bag.set("uni:" + t, 1.0);
  for (std::size_t i = 0; i + 1 < lowered.size(); ++i) {
    bag.set("bi:" + lowered[i] + "_" + lowered[i + 1], 1.0);
  }
  if (sidecar) {
    std::vector<std::string> tagged;
    tagged.reserve(sidecar->tokens.size());
    for (const SidecarToken& t : sidecar->tokens) {
      tagged.push_back(lowercase(t.text) + "/" + t.pos);
    }
    for (const std::string& t : tagged) bag.set("unipos:" + t, 1.0);
    for (std::size_t i = 0; i + 1 < tagged.size(); ++i) {
      bag.set("bipos:" + tagged[i] + "_" + tagged[i + 1], 1.0);
    }
  }
  for (const std::string& l : lemmas) bag.set("lemma:" + l, 1.0);
  for (const std::string& t : lowered) {
    if (lexicons.harmful_words.count(t)) bag.set("harm:" + t, 1.0);
  }
  for (const auto& [emotion, lemma_set] : lexicons.emotion_lemmas) {
    for (const std::string& l : lemmas) {
      if (lemma_set.count(l)) bag.set("emo:" + emotion + ":" + l, 1.0);
    }
  }

  if (set == FeatureSet::Basic) return bag;

  for (const std::string& t : lowered) {
    if (lexicons.emoticons.count(t)) bag.set("emoticon:" + t, 1.0);
  }

  const SentimentScores senti = sentiment_scores(comment.body, lexicons);
  bag.set("senti:positive", senti.positive);
  bag.set("senti:neutral", senti.neutral);
  bag.set("senti:negative", senti.negative);
  bag.set("senti:compound", senti.compound);

  for (const std::string& t : lowered) {
    if (lexicons.subjectivity_entries.count(t)) bag.set("subj:" + t, 1.0);
  }

  for (const std::string& entry : lexicons.swear_entries) {
    std::vector<std::string> words = whitespace_split(entry);
    if (contains_phrase(lowered, words)) bag.set("swear:" + join_words(words), 1.0);
  }

  if (sidecar) {
    for (const FrameAnnotation& f : sidecar->frames) {
      bag.set("frame:" + f.frame, 1.0);
      bag.set("frametgt:" + f.frame + ":" + f.target, 1.0);
      for (const FrameArg& a : f.args) {
        bag.set("framearg:" + a.role + ":" + a.text, 1.0);
      }
    }
  }

  for (const std::string& cue : lexicons.politeness_cues.polite) {
    std::vector<std::string> words = whitespace_split(cue);
    if (contains_phrase(lowered, words)) bag.set("polite:" + join_words(words), 1.0);
  }
  for (const std::string& cue : lexicons.politeness_cues.impolite) {
    std::vector<std::string> words = whitespace_split(cue);
    if (contains_phrase(lowered, words)) bag.set("impolite:" + join_words(words), 1.0);
  }
  return bag;
}

FeatureBag combine_context(const FeatureBag& suspect_bag, const FeatureBag& parent_bag) {
  FeatureBag out = suspect_bag;
  for (const auto& [name, value] : parent_bag.values) {
    out.values["ctx:" + name] = value;
  }
  return out;
}

int Vocabulary::add(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  if (frozen_) throw std::runtime_error("vocabulary is frozen; unknown feature: " + name);
  const int idx = static_cast<int>(names_.size());
  index_.emplace(name, idx);
  names_.push_back(name);
  return idx;
}

std::optional<int> Vocabulary::lookup(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const std::vector<FeatureBag>& bags, int min_count,
                            const std::vector<std::string>& extra_always, bool require_counted) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");

  std::map<std::string, int> doc_count;
  for (const FeatureBag& bag : bags) {
    for (const auto& [name, value] : bag.values) ++doc_count[name];
  }

  std::set<std::string> always(extra_always.begin(), extra_always.end());
  for (const std::string& name : sentiment_feature_names()) always.insert(name);

  Vocabulary vocab;
  std::size_t counted = 0;
  for (const FeatureBag& bag : bags) {
    for (const auto& [name, value] : bag.values) {
      if (doc_count[name] >= min_count) {
        const int before = vocab.dimension();
        vocab.add(name);
        if (vocab.dimension() > before && !always.count(name)) ++counted;
      }
    }
  }
  for (const std::string& name : sentiment_feature_names()) vocab.add(name);
  for (const std::string& name : extra_always) vocab.add(name);

  if (require_counted && counted == 0) {
    throw std::runtime_error("vocabulary is empty: no feature reached min_count=" +
                             std::to_string(min_count));
  }
  vocab.freeze();
  return vocab;
}

SparseVector vectorize(const FeatureBag& bag, const Vocabulary& vocab) {
  if (!vocab.frozen()) throw std::logic_error("vectorize requires a frozen vocabulary");
  SparseVector vec;
  vec.dimension = vocab.dimension();
  vec.entries.reserve(bag.values.size());
  for (const auto& [name, value] : bag.values) {
    if (auto idx = vocab.lookup(name)) vec.entries.emplace_back(*idx, value);
  }
  std::sort(vec.entries.begin(), vec.entries.end());
  return vec;
}

}  // namespace trollgraph
