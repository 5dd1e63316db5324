#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace trollgraph {

// The seven emotion lexicon files, in fixed order.
inline const std::array<std::string, 7> kEmotionNames = {
    "anger", "embarrassment", "empathy", "fear", "pride", "relief", "sadness"};

struct SubjectivityEntry {
  std::string polarity;
  std::string strength;
};

struct PolitenessCues {
  std::set<std::string> polite;
  std::set<std::string> impolite;
};

// Dictionary resources behind the basic and enhanced feature sets. Immutable
// after load; safe to share across threads.
struct LexiconSet {
  std::set<std::string> harmful_words;
  std::set<std::string> swear_entries;  // words and short phrases
  std::map<std::string, std::set<std::string>> emotion_lemmas;
  std::map<std::string, SubjectivityEntry> subjectivity_entries;
  std::map<std::string, std::string> emoticons;  // emoticon -> polarity class
  PolitenessCues politeness_cues;
  std::map<std::string, double> sentiment_valence;
};

// Loads harmful.txt, swear.txt, emotions/<emotion>.txt, subjectivity.tsv,
// emoticons.tsv, politeness_polite.txt, politeness_impolite.txt and
// sentiment_valence.tsv from the directory. Entries are lowercased and
// deduplicated; lines starting with '#' are skipped. Missing or empty files
// throw with the file named.
LexiconSet load_lexicons(const std::filesystem::path& directory);

struct SentimentScores {
  double positive = 0.0;
  double neutral = 1.0;
  double negative = 0.0;
  double compound = 0.0;
};

// Valence-sum sentiment scorer. positive/negative/neutral are the token
// proportions with positive, negative, and zero-or-no valence; compound is
// S / sqrt(S^2 + 15) with S the raw valence sum. Text with no tokens scores
// (0, 1, 0, 0).
SentimentScores sentiment_scores(const std::string& text, const LexiconSet& lexicons);

}  // namespace trollgraph
