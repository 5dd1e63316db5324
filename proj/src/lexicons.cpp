#include "trollgraph/lexicons.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "trollgraph/features.hpp"

namespace trollgraph {

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Content lines of a lexicon file: trimmed, lowercased, '#' comments and
// blank lines skipped. Throws naming the file when missing or empty.
std::vector<std::string> read_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing lexicon file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    lines.push_back(lowercase(t));
  }
  if (lines.empty()) throw std::runtime_error("empty lexicon file: " + path.string());
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::set<std::string> read_entry_set(const std::filesystem::path& path) {
  auto lines = read_entries(path);
  return {lines.begin(), lines.end()};
}

}  // namespace

LexiconSet load_lexicons(const std::filesystem::path& directory) {
  LexiconSet lex;
  lex.harmful_words = read_entry_set(directory / "harmful.txt");
  lex.swear_entries = read_entry_set(directory / "swear.txt");

  for (const std::string& emotion : kEmotionNames) {
    lex.emotion_lemmas[emotion] = read_entry_set(directory / "emotions" / (emotion + ".txt"));
  }

  for (const std::string& line : read_entries(directory / "subjectivity.tsv")) {
    auto fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty()) {
      throw std::runtime_error("malformed line in " + (directory / "subjectivity.tsv").string() +
                               ": expected token<TAB>polarity<TAB>strength");
    }
    lex.subjectivity_entries[trim(fields[0])] = {trim(fields[1]), trim(fields[2])};
  }

  for (const std::string& line : read_entries(directory / "emoticons.tsv")) {
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw std::runtime_error("malformed line in " + (directory / "emoticons.tsv").string() +
                               ": expected emoticon<TAB>polarity");
    }
    lex.emoticons[trim(fields[0])] = trim(fields[1]);
  }

  lex.politeness_cues.polite = read_entry_set(directory / "politeness_polite.txt");
  lex.politeness_cues.impolite = read_entry_set(directory / "politeness_impolite.txt");

  for (const std::string& line : read_entries(directory / "sentiment_valence.tsv")) {
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw std::runtime_error("malformed line in " +
                               (directory / "sentiment_valence.tsv").string() +
                               ": expected token<TAB>valence");
    }
    try {
      lex.sentiment_valence[trim(fields[0])] = std::stod(fields[1]);
    } catch (const std::exception&) {
      throw std::runtime_error("bad valence in " + (directory / "sentiment_valence.tsv").string() +
                               " for token '" + fields[0] + "'");
    }
  }
  return lex;
}

SentimentScores sentiment_scores(const std::string& text, const LexiconSet& lexicons) {
  const std::vector<Token> tokens = tokenize(text, &lexicons.emoticons);
  SentimentScores scores;
  if (tokens.empty()) return scores;  // (0, 1, 0, 0)

  double valence_sum = 0.0;
  std::size_t num_pos = 0, num_neg = 0;
  for (const Token& tok : tokens) {
    auto it = lexicons.sentiment_valence.find(tok.lowered);
    if (it == lexicons.sentiment_valence.end()) continue;
    valence_sum += it->second;
    if (it->second > 0) ++num_pos;
    if (it->second < 0) ++num_neg;
  }
  const double n = static_cast<double>(tokens.size());
  scores.positive = static_cast<double>(num_pos) / n;
  scores.negative = static_cast<double>(num_neg) / n;
  scores.neutral = (n - static_cast<double>(num_pos) - static_cast<double>(num_neg)) / n;
  constexpr double kAlpha = 15.0;
  scores.compound = valence_sum / std::sqrt(valence_sum * valence_sum + kAlpha);
  return scores;
}

}  // namespace trollgraph
