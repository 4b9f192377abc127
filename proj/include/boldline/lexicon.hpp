#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "boldline/text.hpp"

namespace boldline {

enum class NormVariable { valence, arousal, dominance, joy, anger, sadness, fear, disgust };

inline constexpr std::size_t kNormVariables = 8;
inline constexpr std::array<NormVariable, kNormVariables> kAllNormVariables = {
    NormVariable::valence, NormVariable::arousal, NormVariable::dominance, NormVariable::joy,
    NormVariable::anger,   NormVariable::sadness, NormVariable::fear,      NormVariable::disgust};

std::string_view to_string(NormVariable v);

// VAD variables live on [1, 9]; BE5 variables on [1, 5].
constexpr bool is_vad(NormVariable v) {
  return v == NormVariable::valence || v == NormVariable::arousal || v == NormVariable::dominance;
}

/// Word-level affect ratings on their raw scales.
struct NormEntry {
  std::string word;
  std::array<double, kNormVariables> raw{};

  double operator[](NormVariable v) const { return raw[static_cast<std::size_t>(v)]; }
};

class NormLexicon {
 public:
  NormLexicon() = default;

  /// Tab-separated with the header
  /// word valence arousal dominance joy anger sadness fear disgust.
  static NormLexicon load(std::istream& in);
  static NormLexicon load_file(const std::string& path);

  void insert(NormEntry entry);
  const NormEntry* find(std::string_view lower_word) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, NormEntry, std::less<>> entries_;
};

double rescale_vad(double raw);
double rescale_be5(double raw);
double unscale_vad(double scaled);
double unscale_be5(double scaled);
double rescale(NormVariable v, double raw);

struct SentimentScore {
  double value = 0.0;
};

/// Deterministic map from tokens to [-1, 1]. Implementations must be safe to
/// call concurrently.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual SentimentScore score(std::span<const Token> tokens) const = 0;
};

SentimentScore sentiment_score(std::span<const Token> tokens, const SentimentScorer& scorer);

/// Valence-lexicon scorer following the VADER rule set: booster and dampener
/// words, negation, ALL-CAPS emphasis, "but" contrast, special idioms and
/// punctuation emphasis, normalized with x / sqrt(x^2 + 15).
class VaderScorer final : public SentimentScorer {
 public:
  explicit VaderScorer(std::unordered_map<std::string, double> lexicon)
      : lexicon_(std::move(lexicon)) {}

  /// "token<TAB>mean<TAB>..." lines, as distributed with VADER.
  static VaderScorer load(std::istream& in);
  static VaderScorer load_file(const std::string& path);

  SentimentScore score(std::span<const Token> tokens) const override;

  std::size_t lexicon_size() const { return lexicon_.size(); }

 private:
  std::optional<double> lookup(const std::string& lower) const;

  std::unordered_map<std::string, double> lexicon_;
};

}  // namespace boldline
