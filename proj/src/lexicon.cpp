#include "boldline/lexicon.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include <fmt/format.h>

#include "boldline/error.hpp"

namespace boldline {
namespace {

constexpr std::string_view kNormHeader =
    "word\tvalence\tarousal\tdominance\tjoy\tanger\tsadness\tfear\tdisgust";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  for (;;) {
    const auto tab = line.find('\t', begin);
    fields.push_back(line.substr(begin, tab == std::string_view::npos ? tab : tab - begin));
    if (tab == std::string_view::npos) break;
    begin = tab + 1;
  }
  return fields;
}

double parse_value(std::string_view field, std::size_t line) {
  double value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError(fmt::format("malformed value \"{}\"", field), line);
  return value;
}

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(NormVariable v) {
  switch (v) {
    case NormVariable::valence: return "valence";
    case NormVariable::arousal: return "arousal";
    case NormVariable::dominance: return "dominance";
    case NormVariable::joy: return "joy";
    case NormVariable::anger: return "anger";
    case NormVariable::sadness: return "sadness";
    case NormVariable::fear: return "fear";
    case NormVariable::disgust: return "disgust";
  }
  return "?";
}

NormLexicon NormLexicon::load(std::istream& in) {
  NormLexicon lexicon;
  std::string raw_line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, raw_line)) {
    ++line_no;
    const auto line = trim_cr(raw_line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kNormHeader) throw ParseError("missing or malformed norm lexicon header", line_no);
      header_seen = true;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != kNormVariables + 1)
      throw ParseError(fmt::format("expected {} fields, found {}", kNormVariables + 1, fields.size()),
                       line_no);
    if (fields[0].empty()) throw ParseError("empty word", line_no);

    NormEntry entry;
    entry.word = fold_case(fields[0]);
    for (const auto v : kAllNormVariables) {
      const auto i = static_cast<std::size_t>(v);
      const double value = parse_value(fields[i + 1], line_no);
      const double hi = is_vad(v) ? 9.0 : 5.0;
      if (value < 1.0 || value > hi)
        throw RangeError(fmt::format("{} = {} outside [1, {}] for \"{}\"", to_string(v), value, hi,
                                     entry.word),
                         line_no);
      entry.raw[i] = value;
    }
    if (lexicon.find(entry.word))
      throw ParseError(fmt::format("duplicate entry \"{}\"", entry.word), line_no);
    lexicon.insert(std::move(entry));
  }
  return lexicon;
}

NormLexicon NormLexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open norm lexicon: " + path);
  return load(in);
}

void NormLexicon::insert(NormEntry entry) {
  auto key = entry.word;
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

const NormEntry* NormLexicon::find(std::string_view lower_word) const {
  const auto it = entries_.find(lower_word);
  return it == entries_.end() ? nullptr : &it->second;
}

double rescale_vad(double raw) {
  if (!(raw >= 1.0 && raw <= 9.0)) throw RangeError(fmt::format("VAD value {} outside [1, 9]", raw));
  return (raw - 5.0) / 4.0;
}

double rescale_be5(double raw) {
  if (!(raw >= 1.0 && raw <= 5.0)) throw RangeError(fmt::format("BE5 value {} outside [1, 5]", raw));
  return (raw - 1.0) / 4.0;
}

double unscale_vad(double scaled) {
  if (!(scaled >= -1.0 && scaled <= 1.0))
    throw RangeError(fmt::format("scaled VAD value {} outside [-1, 1]", scaled));
  return scaled * 4.0 + 5.0;
}

double unscale_be5(double scaled) {
  if (!(scaled >= 0.0 && scaled <= 1.0))
    throw RangeError(fmt::format("scaled BE5 value {} outside [0, 1]", scaled));
  return scaled * 4.0 + 1.0;
}

double rescale(NormVariable v, double raw) { return is_vad(v) ? rescale_vad(raw) : rescale_be5(raw); }

SentimentScore sentiment_score(std::span<const Token> tokens, const SentimentScorer& scorer) {
  return scorer.score(tokens);
}

}  // namespace boldline
