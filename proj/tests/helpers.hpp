#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "trollgraph/comments.hpp"
#include "trollgraph/crf.hpp"
#include "trollgraph/lexicons.hpp"

namespace testutil {

// Scratch directory under the system temp root, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::uint64_t counter = 0;
    auto base = std::filesystem::temp_directory_path();
    path = base / ("trollgraph_test_" + std::to_string(::getpid()) + "_" +
                   std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline trollgraph::Comment make_comment(std::string id, std::optional<std::string> parent,
                                        std::string thread, std::string author, std::string body,
                                        std::int64_t t = 0) {
  trollgraph::Comment c;
  c.id = std::move(id);
  c.parent_id = std::move(parent);
  c.thread_id = std::move(thread);
  c.author = std::move(author);
  c.body = std::move(body);
  c.created_utc = t;
  return c;
}

// Small in-memory lexicon set usable without touching the filesystem.
inline trollgraph::LexiconSet tiny_lexicons() {
  trollgraph::LexiconSet lex;
  lex.harmful_words = {"doofus", "pest"};
  lex.swear_entries = {"darn", "heck no"};
  for (const std::string& name : trollgraph::kEmotionNames) {
    lex.emotion_lemmas[name] = {};
  }
  lex.emotion_lemmas["anger"] = {"rage", "fury"};
  lex.emotion_lemmas["fear"] = {"dread"};
  lex.subjectivity_entries["awful"] = {"negative", "strong"};
  lex.subjectivity_entries["nice"] = {"positive", "weak"};
  lex.emoticons[":)"] = "positive";
  lex.emoticons[":("] = "negative";
  lex.politeness_cues.polite = {"please", "thank you"};
  lex.politeness_cues.impolite = {"shut up"};
  lex.sentiment_valence["good"] = 1.5;
  lex.sentiment_valence["bad"] = -1.5;
  lex.sentiment_valence["great"] = 2.1;
  return lex;
}

// On-disk counterpart of tiny_lexicons() for code that loads from a path.
inline void write_lexicon_dir(const std::filesystem::path& dir) {
  write_file(dir / "harmful.txt", "doofus\npest\n");
  write_file(dir / "swear.txt", "darn\nheck no\n");
  for (const std::string& name : trollgraph::kEmotionNames) {
    write_file(dir / "emotions" / (name + ".txt"), "# placeholder\nplacefill_" + name + "\n");
  }
  write_file(dir / "emotions" / "anger.txt", "rage\nfury\n");
  write_file(dir / "emotions" / "fear.txt", "dread\n");
  write_file(dir / "subjectivity.tsv", "awful\tnegative\tstrong\nnice\tpositive\tweak\n");
  write_file(dir / "emoticons.tsv", ":)\tpositive\n:(\tnegative\n");
  write_file(dir / "politeness_polite.txt", "please\nthank you\n");
  write_file(dir / "politeness_impolite.txt", "shut up\n");
  write_file(dir / "sentiment_valence.tsv", "good\t1.5\nbad\t-1.5\ngreat\t2.1\n");
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

// Random potentials in [-scale, scale]; exercises inference independently of
// the feature pipeline.
inline trollgraph::SnippetGraph random_graph(std::mt19937_64& rng, int num_responses,
                                             bool strategy, double scale = 1.5) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  trollgraph::SnippetGraph g;
  g.snippet_id = "g";
  g.has_strategy = strategy;
  for (double& x : g.u_i) x = dist(rng);
  for (double& x : g.u_d) x = dist(rng);
  g.u_r.resize(num_responses);
  g.u_b.resize(num_responses);
  for (int k = 0; k < num_responses; ++k) {
    for (double& x : g.u_r[k]) x = dist(rng);
    if (strategy) {
      for (double& x : g.u_b[k]) x = dist(rng);
    } else {
      g.u_b[k].fill(0.0);
    }
  }
  for (double& x : g.t_ir) x = dist(rng);
  for (double& x : g.t_dr) x = dist(rng);
  if (strategy) {
    for (double& x : g.t_rb) x = dist(rng);
  } else {
    g.t_rb.fill(0.0);
  }
  return g;
}

// Random sparse features over the given dimension: every index present with
// probability density, value in [-1, 1].
inline trollgraph::SparseVector random_sparse(std::mt19937_64& rng, int dimension,
                                              double density = 0.5) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  trollgraph::SparseVector v;
  v.dimension = dimension;
  for (int j = 0; j < dimension; ++j) {
    if (coin(rng) < density) v.entries.emplace_back(j, value(rng));
  }
  return v;
}

// Random labeled snippet example for CRF objective tests.
inline trollgraph::CrfExample random_crf_example(std::mt19937_64& rng, const std::string& id,
                                                 int dim_ctx, int dim_resp, int max_responses) {
  trollgraph::CrfExample ex;
  ex.features.snippet_id = id;
  ex.features.context = random_sparse(rng, dim_ctx);
  const int R = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_responses));
  ex.features.responses.resize(R);
  ex.gold_r.resize(R);
  ex.gold_b.resize(R);
  ex.gold_i = static_cast<int>(rng() % 3);
  ex.gold_d = static_cast<int>(rng() % 3);
  for (int k = 0; k < R; ++k) {
    ex.features.responses[k] = random_sparse(rng, dim_resp);
    ex.gold_r[k] = static_cast<int>(rng() % 3);
    ex.gold_b[k] = static_cast<int>(rng() % 14);
  }
  return ex;
}

}  // namespace testutil
