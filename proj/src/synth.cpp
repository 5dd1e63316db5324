#include "trollgraph/synth.hpp"

#include <random>
#include <stdexcept>

namespace trollgraph {

namespace {

const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words = {
      "the", "thread", "reply", "talk", "forum", "post", "people", "really",
      "again", "maybe", "never", "actual", "point", "wall", "because",
  };
  return words;
}

std::string filler(std::mt19937_64& rng, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (!out.empty()) out += ' ';
    out += filler_words()[rng() % filler_words().size()];
  }
  return out;
}

const std::vector<std::string>& author_pool() {
  static const std::vector<std::string> authors = {"alice", "bob", "carol", "dave",
                                                   "erin", "frank", "grace"};
  return authors;
}

}  // namespace

std::vector<SnippetRecord> make_synthetic(const SynthConfig& config) {
  if (config.num_snippets == 0) throw std::invalid_argument("num_snippets must be > 0");
  if (config.max_responses < 1) throw std::invalid_argument("max_responses must be >= 1");

  std::mt19937_64 rng(config.seed);
  std::vector<SnippetRecord> records;
  records.reserve(config.num_snippets);
  std::int64_t clock = 1500000000;

  for (std::size_t n = 0; n < config.num_snippets; ++n) {
    const std::string tag = std::to_string(n);
    const std::string thread = "th" + tag;
    const std::string parent_author = author_pool()[rng() % author_pool().size()];
    std::string suspect_author = author_pool()[rng() % author_pool().size()];
    if (suspect_author == parent_author) {
      suspect_author = author_pool()[(rng() % (author_pool().size() - 1)) + 1];
    }

    const int i = static_cast<int>(rng() % 3);
    const int d = i == 0 ? 0 : 1 + static_cast<int>(rng() % 2);

    SnippetRecord rec;
    rec.snippet.snippet_id = "s" + tag;

    Comment parent;
    parent.id = "p" + tag;
    parent.thread_id = thread;
    parent.author = parent_author;
    parent.body = filler(rng, 4 + static_cast<int>(rng() % 3));
    parent.created_utc = clock++;

    Comment suspect;
    suspect.id = "s" + tag;
    suspect.parent_id = parent.id;
    suspect.thread_id = thread;
    suspect.author = suspect_author;
    suspect.body = filler(rng, 2) + " mki" + std::to_string(i) + " mkd" + std::to_string(d) +
                   " " + filler(rng, 2);
    suspect.created_utc = clock++;

    rec.snippet.parent = parent;
    rec.snippet.suspect = suspect;

    SnippetLabels labels;
    labels.intention = static_cast<Intention>(i);
    labels.disclosure = static_cast<Disclosure>(d);

    const int num_resp = 1 + static_cast<int>(rng() % config.max_responses);
    for (int k = 0; k < num_resp; ++k) {
      const int r = static_cast<int>(rng() % 3);
      const int b = config.strategy_from_interpretation ? r : static_cast<int>(rng() % 14);

      Comment resp;
      resp.id = "r" + tag + "_" + std::to_string(k);
      resp.parent_id = suspect.id;
      resp.thread_id = thread;
      // The first responder is the parent's author, matching the mining rule
      // that the suspect's parent must come back to respond.
      resp.author = k == 0 ? parent_author : author_pool()[rng() % author_pool().size()];
      resp.body = filler(rng, 2) + " mkr" + std::to_string(r) +
                  (config.strategy_from_interpretation ? "" : " mkb" + std::to_string(b)) +
                  " " + filler(rng, 2);
      resp.created_utc = clock++;
      rec.snippet.responses.push_back(std::move(resp));

      labels.per_response.push_back(
          {static_cast<Interpretation>(r), static_cast<Strategy>(b)});
    }
    rec.labels = std::move(labels);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace trollgraph
