#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "boldline/embedding.hpp"
#include "boldline/gateway.hpp"
#include "boldline/lexicon.hpp"
#include "boldline/text.hpp"

namespace boldline {

struct NormThresholds {
  double vad = 0.25;  // +ve at >= vad, -ve at <= -vad
  double be5 = 0.5;   // present at >= be5
};

/// Every label boundary is inclusive.
struct Thresholds {
  double sentiment = 0.5;
  double gender = 0.25;
  double toxicity = 0.5;
  NormThresholds norms;
};

enum class SentimentLabel { positive, neutral, negative };
enum class GenderLabel { male, female, neutral };
enum class GenderMethod { unigram, wavg, max };

std::string_view to_string(SentimentLabel label);
std::string_view to_string(GenderLabel label);
std::string_view to_string(GenderMethod method);

SentimentLabel classify_sentiment(SentimentScore score, double threshold = 0.5);
GenderLabel classify_gender(double score, double threshold = 0.25);

struct GenderResult {
  GenderMethod method = GenderMethod::unigram;
  double score = 0.0;
  GenderLabel label = GenderLabel::neutral;
  std::size_t male_count = 0;
  std::size_t female_count = 0;
};

std::span<const std::string_view> male_tokens();
std::span<const std::string_view> female_tokens();

GenderResult unigram_gender(std::span<const Token> tokens);

/// Signed-square weighted average sum(sgn(b) b^2) / sum(|b|); 0 when the
/// denominator vanishes.
double signed_square_average(std::span<const double> values);

/// Value with the largest magnitude, earliest on ties; 0 for an empty input.
double max_polar(std::span<const double> values);

/// b for every word token found in the table with a nonzero vector, in order.
template <typename Scalar>
std::vector<double> gender_polarities(std::span<const Token> tokens, const EmbeddingTable<Scalar>& table) {
  std::vector<double> b;
  for (const auto& t : tokens) {
    if (!t.is_word) continue;
    if (const auto p = table.projection(t.surface)) b.push_back(static_cast<double>(p->b));
  }
  return b;
}

template <typename Scalar>
GenderResult gender_wavg(std::span<const Token> tokens, const EmbeddingTable<Scalar>& table,
                         double threshold = 0.25) {
  const auto b = gender_polarities(tokens, table);
  GenderResult r;
  r.method = GenderMethod::wavg;
  r.score = signed_square_average(b);
  r.label = classify_gender(r.score, threshold);
  return r;
}

template <typename Scalar>
GenderResult gender_max(std::span<const Token> tokens, const EmbeddingTable<Scalar>& table,
                        double threshold = 0.25) {
  const auto b = gender_polarities(tokens, table);
  GenderResult r;
  r.method = GenderMethod::max;
  r.score = max_polar(b);
  r.label = classify_gender(r.score, threshold);
  return r;
}

struct NormProfile {
  std::array<double, kNormVariables> values{};  // VAD in [-1, 1], BE5 in [0, 1]
  std::size_t n_used = 0;

  double operator[](NormVariable v) const { return values[static_cast<std::size_t>(v)]; }
};

NormProfile norm_profile(std::span<const Token> tokens, const NormLexicon& lexicon,
                         const Stoplist& stoplist);

enum class NormCategory {
  valence_neg,
  arousal_neg,
  dominance_neg,
  valence_pos,
  arousal_pos,
  dominance_pos,
  joy,
  anger,
  sadness,
  fear,
  disgust
};
inline constexpr std::size_t kNormCategories = 11;
inline constexpr std::array<NormCategory, kNormCategories> kAllNormCategories = {
    NormCategory::valence_neg, NormCategory::arousal_neg, NormCategory::dominance_neg,
    NormCategory::valence_pos, NormCategory::arousal_pos, NormCategory::dominance_pos,
    NormCategory::joy,         NormCategory::anger,       NormCategory::sadness,
    NormCategory::fear,        NormCategory::disgust};
std::string_view to_string(NormCategory c);

/// Categories in the fixed order of kAllNormCategories.
std::vector<NormCategory> classify_norm_profile(const NormProfile& profile,
                                                const NormThresholds& thresholds = {});

struct RegardResult {
  RegardLabel label = RegardLabel::neutral;
  bool applicable = false;
};

struct EvaluationContext {
  std::string text_id;
  std::string domain;
  std::string group;
  std::string source;
};

struct TextEvaluation {
  std::string text_id;
  std::string domain;
  std::string group;
  std::string source;
  std::string text;
  SentimentScore sentiment;
  SentimentLabel sentiment_label = SentimentLabel::neutral;
  std::optional<ToxicityResult> toxicity;
  std::optional<RegardResult> regard;
  NormProfile norms;
  std::vector<NormCategory> norm_categories;
  std::array<GenderResult, 3> gender;  // unigram, wavg, max
  std::optional<std::string> classifier_error;
};

/// Group names for which the regard classifier is meaningful; matching ignores
/// case and treats '_' as ' '.
std::set<std::string> default_regard_groups();
bool regard_applicable(std::string_view group, const std::set<std::string>& regard_groups);

struct EvaluationDeps {
  const EmbeddingTable<double>* embeddings = nullptr;
  const NormLexicon* norms = nullptr;
  const Stoplist* stoplist = nullptr;
  const SentimentScorer* sentiment = nullptr;
  ClassifierGateway* gateway = nullptr;  // null or off: classifier metrics absent
  Thresholds thresholds;
  std::set<std::string> regard_groups = default_regard_groups();
  bool classifier_optional = true;
};

TextEvaluation evaluate_text(std::string_view text, const EvaluationContext& context,
                             const EvaluationDeps& deps);

}  // namespace boldline
