#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "trollgraph/features.hpp"

using namespace trollgraph;
using testutil::make_comment;

namespace {

std::vector<std::string> token_texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

}  // namespace

TEST_CASE("tokenizer splits punctuation but keeps emoticons intact") {
  LexiconSet lex = testutil::tiny_lexicons();
  CHECK(token_texts(tokenize("Space is cool! :)", &lex.emoticons)) ==
        std::vector<std::string>{"Space", "is", "cool", "!", ":)"});
  CHECK(tokenize("", &lex.emoticons).empty());
  CHECK(token_texts(tokenize("hello")) == std::vector<std::string>{"hello"});
  CHECK(token_texts(tokenize("(hi).")) == std::vector<std::string>{"(", "hi", ")", "."});
  // Without the emoticon lexicon ":)" falls apart into punctuation.
  CHECK(token_texts(tokenize(":)")) == std::vector<std::string>{":", ")"});
}

TEST_CASE("tokens carry lowercased forms") {
  auto tokens = tokenize("TROLL Face");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].text == "TROLL");
  CHECK(tokens[0].lowered == "troll");
  CHECK(tokens[1].lowered == "face");
}

TEST_CASE("basic bag for a two-word comment matches the n-gram families exactly") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "you troll");
  FeatureBag bag = extract_features(c, nullptr, lex, FeatureSet::Basic);
  const std::map<std::string, double> expected = {
      {"uni:you", 1.0},   {"uni:troll", 1.0}, {"bi:you_troll", 1.0},
      {"lemma:you", 1.0}, {"lemma:troll", 1.0}};
  CHECK(bag.values == expected);
}

TEST_CASE("enhanced bag always carries the four sentiment features") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "");
  FeatureBag bag = extract_features(c, nullptr, lex, FeatureSet::Enhanced);
  const std::map<std::string, double> expected = {{"senti:positive", 0.0},
                                                  {"senti:neutral", 1.0},
                                                  {"senti:negative", 0.0},
                                                  {"senti:compound", 0.0}};
  CHECK(bag.values == expected);
  CHECK(sentiment_feature_names() ==
        std::vector<std::string>{"senti:positive", "senti:neutral", "senti:negative",
                                 "senti:compound"});
}

TEST_CASE("basic bag is a subset of the enhanced bag") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "you doofus , heck no :) please rage");
  FeatureBag basic = extract_features(c, nullptr, lex, FeatureSet::Basic);
  FeatureBag enhanced = extract_features(c, nullptr, lex, FeatureSet::Enhanced);
  for (const auto& [name, value] : basic.values) {
    REQUIRE(enhanced.values.count(name) == 1);
    CHECK(enhanced.values.at(name) == value);
  }
}

TEST_CASE("enhanced bag covers lexicon-driven families") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "you doofus heck no :) please shut up awful");
  FeatureBag bag = extract_features(c, nullptr, lex, FeatureSet::Enhanced);
  CHECK(bag.values.count("harm:doofus") == 1);
  CHECK(bag.values.count("swear:heck_no") == 1);
  CHECK(bag.values.count("emoticon::)") == 1);
  CHECK(bag.values.count("polite:please") == 1);
  CHECK(bag.values.count("impolite:shut_up") == 1);
  CHECK(bag.values.count("subj:awful") == 1);
  // Phrase entries only fire on contiguous runs.
  Comment scattered = make_comment("s2", "p", "th", "a", "heck yes no");
  FeatureBag bag2 = extract_features(scattered, nullptr, lex, FeatureSet::Enhanced);
  CHECK(bag2.values.count("swear:heck_no") == 0);
}

TEST_CASE("emotion features are keyed by emotion and lemma") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "pure rage and dread");
  FeatureBag bag = extract_features(c, nullptr, lex, FeatureSet::Basic);
  CHECK(bag.values.count("emo:anger:rage") == 1);
  CHECK(bag.values.count("emo:fear:dread") == 1);
  CHECK(bag.values.count("emo:anger:dread") == 0);
}

TEST_CASE("sidecar annotations enable pos, lemma and frame families") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "cats ran");
  SidecarAnnotation side;
  side.comment_id = "s";
  side.tokens = {{"cats", "NNS", "cat"}, {"ran", "VBD", "run"}};
  side.frames = {{"Motion", "ran", {{"Theme", "cats"}}}};

  FeatureBag basic = extract_features(c, &side, lex, FeatureSet::Basic);
  CHECK(basic.values.count("lemma:cat") == 1);
  CHECK(basic.values.count("lemma:run") == 1);
  CHECK(basic.values.count("lemma:cats") == 0);
  CHECK(basic.values.count("unipos:cats/NNS") == 1);
  CHECK(basic.values.count("bipos:cats/NNS_ran/VBD") == 1);
  CHECK(basic.provenance == "sidecar");
  // Frames are an enhanced-only family.
  CHECK(basic.values.count("frame:Motion") == 0);

  FeatureBag enhanced = extract_features(c, &side, lex, FeatureSet::Enhanced);
  CHECK(enhanced.values.count("frame:Motion") == 1);
  CHECK(enhanced.values.count("frametgt:Motion:ran") == 1);
  CHECK(enhanced.values.count("framearg:Theme:cats") == 1);
}

TEST_CASE("missing sidecar falls back to lowered tokens and records provenance") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment c = make_comment("s", "p", "th", "a", "Cats ran");
  FeatureBag bag = extract_features(c, nullptr, lex, FeatureSet::Enhanced);
  CHECK(bag.values.count("lemma:cats") == 1);
  CHECK(bag.values.count("unipos:cats/NNS") == 0);
  CHECK(bag.provenance.find("no-sidecar") == 0);
}

TEST_CASE("context combination prefixes parent features with ctx:") {
  FeatureBag suspect;
  suspect.values = {{"uni:a", 1.0}};
  FeatureBag parent;
  parent.values = {{"uni:b", 1.0}};
  FeatureBag combined = combine_context(suspect, parent);
  const std::map<std::string, double> expected = {{"uni:a", 1.0}, {"ctx:uni:b", 1.0}};
  CHECK(combined.values == expected);

  FeatureBag empty;
  CHECK(combine_context(suspect, empty).values == suspect.values);

  FeatureBag same = combine_context(suspect, suspect);
  CHECK(same.values.count("uni:a") == 1);
  CHECK(same.values.count("ctx:uni:a") == 1);
}

TEST_CASE("vocabulary keeps counted names in first-seen order plus sentiment and extras") {
  FeatureBag b1;
  b1.values = {{"uni:z", 1.0}, {"uni:a", 1.0}};
  FeatureBag b2;
  b2.values = {{"uni:a", 1.0}, {"uni:q", 1.0}};

  SUBCASE("min_count 1 keeps everything") {
    Vocabulary v = build_vocabulary({b1, b2}, 1);
    // First-seen order iterates bags in order; within a bag map order applies.
    const std::vector<std::string> expected = {"uni:a",         "uni:z",
                                               "uni:q",         "senti:positive",
                                               "senti:neutral", "senti:negative",
                                               "senti:compound"};
    CHECK(v.names() == expected);
    CHECK(v.frozen());
    CHECK(v.dimension() == 7);
  }

  SUBCASE("min_count 2 drops singletons but keeps sentiment") {
    Vocabulary v = build_vocabulary({b1, b2}, 2);
    const std::vector<std::string> expected = {"uni:a", "senti:positive", "senti:neutral",
                                               "senti:negative", "senti:compound"};
    CHECK(v.names() == expected);
  }

  SUBCASE("extra_always names are appended") {
    Vocabulary v = build_vocabulary({b1, b2}, 2, {"task:i:none", "task:i:trolling"});
    CHECK(v.names().back() == "task:i:trolling");
    CHECK(v.lookup("task:i:none").has_value());
  }

  SUBCASE("an empty counted set is an error by default") {
    CHECK_THROWS_AS(build_vocabulary({b1, b2}, 99), std::runtime_error);
    CHECK_NOTHROW(build_vocabulary({b1, b2}, 99, {}, false));
  }
}

TEST_CASE("frozen vocabularies reject unknown names") {
  FeatureBag b;
  b.values = {{"uni:a", 1.0}};
  Vocabulary v = build_vocabulary({b}, 1);
  CHECK_THROWS_AS(v.add("uni:new"), std::runtime_error);
  CHECK(v.lookup("uni:a").has_value());
  CHECK_FALSE(v.lookup("uni:new").has_value());
  CHECK(v.add("uni:a") == *v.lookup("uni:a"));
}

TEST_CASE("vectorize maps known names in index order and drops unknown ones") {
  FeatureBag b1;
  b1.values = {{"uni:a", 1.0}, {"uni:b", 2.0}};
  Vocabulary v = build_vocabulary({b1}, 1);

  FeatureBag query;
  query.values = {{"uni:b", 2.0}, {"uni:unknown", 5.0}, {"uni:a", 1.0}};
  SparseVector vec = vectorize(query, v);
  CHECK(vec.dimension == v.dimension());
  REQUIRE(vec.entries.size() == 2);
  CHECK(std::is_sorted(vec.entries.begin(), vec.entries.end()));
  CHECK(vec.entries[0].first == *v.lookup("uni:a"));
  CHECK(vec.entries[0].second == 1.0);
  CHECK(vec.entries[1].first == *v.lookup("uni:b"));
  CHECK(vec.entries[1].second == 2.0);
}

TEST_CASE("vectorizing a combined bag equals the union of its parts") {
  LexiconSet lex = testutil::tiny_lexicons();
  Comment suspect = make_comment("s", "p", "th", "a", "you troll");
  Comment parent = make_comment("p", std::nullopt, "th", "b", "nice day");
  FeatureBag sb = extract_features(suspect, nullptr, lex, FeatureSet::Enhanced);
  FeatureBag pb = extract_features(parent, nullptr, lex, FeatureSet::Enhanced);
  FeatureBag combined = combine_context(sb, pb);

  Vocabulary v = build_vocabulary({combined}, 1);
  SparseVector vec = vectorize(combined, v);
  CHECK(vec.entries.size() == combined.values.size());
  for (const auto& [name, value] : sb.values) {
    auto idx = v.lookup(name);
    REQUIRE(idx.has_value());
    auto it = std::find_if(vec.entries.begin(), vec.entries.end(),
                           [&](const auto& e) { return e.first == *idx; });
    REQUIRE(it != vec.entries.end());
    CHECK(it->second == value);
  }
  for (const auto& [name, value] : pb.values) {
    CHECK(v.lookup("ctx:" + name).has_value());
  }
}
