#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "boldline/error.hpp"
#include "boldline/lexicon.hpp"

namespace boldline {
namespace {

constexpr double kBoostIncrease = 0.293;
constexpr double kBoostDecrease = -0.293;
constexpr double kCapsIncrease = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kNormalizeAlpha = 15.0;

const std::vector<std::string_view> kNegations = {
    "aint",    "arent",    "cannot",   "cant",    "couldnt", "darent",   "didnt",   "doesnt",
    "ain't",   "aren't",   "can't",    "couldn't", "daren't", "didn't",  "doesn't", "dont",
    "hadnt",   "hasnt",    "havent",   "isnt",    "mightnt", "mustnt",   "neither", "don't",
    "hadn't",  "hasn't",   "haven't",  "isn't",   "mightn't", "mustn't", "neednt",  "needn't",
    "never",   "none",     "nope",     "nor",     "not",     "nothing",  "nowhere", "oughtnt",
    "shant",   "shouldnt", "uhuh",     "wasnt",   "werent",  "oughtn't", "shan't",  "shouldn't",
    "uh-uh",   "wasn't",   "weren't",  "without", "wont",    "wouldnt",  "won't",   "wouldn't",
    "rarely",  "seldom",   "despite"};

const std::unordered_map<std::string_view, double>& boosters() {
  static const std::unordered_map<std::string_view, double> table = [] {
    std::unordered_map<std::string_view, double> t;
    for (auto w : {"absolutely", "amazingly", "awfully", "completely", "considerable", "considerably",
                   "decidedly", "deeply", "effing", "enormous", "enormously", "entirely", "especially",
                   "exceptional", "exceptionally", "extreme", "extremely", "fabulously", "flipping",
                   "flippin", "frackin", "fracking", "fricking", "frickin", "frigging", "friggin",
                   "fully", "fuckin", "fucking", "fuggin", "fugging", "greatly", "hella", "highly",
                   "hugely", "incredible", "incredibly", "intensely", "major", "majorly", "more",
                   "most", "particularly", "purely", "quite", "really", "remarkably", "so",
                   "substantially", "thoroughly", "total", "totally", "tremendous", "tremendously",
                   "uber", "unbelievably", "unusually", "utter", "utterly", "very"})
      t.emplace(w, kBoostIncrease);
    for (auto w : {"almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof",
                   "kind-of", "less", "little", "marginal", "marginally", "occasional",
                   "occasionally", "partly", "scarce", "scarcely", "slight", "slightly", "somewhat",
                   "sort of", "sorta", "sortof", "sort-of"})
      t.emplace(w, kBoostDecrease);
    return t;
  }();
  return table;
}

const std::unordered_map<std::string_view, double>& special_cases() {
  static const std::unordered_map<std::string_view, double> table = {
      {"the shit", 3},         {"the bomb", 3},      {"bad ass", 1.5},
      {"badass", 1.5},         {"bus stop", 0.0},    {"yeah right", -2},
      {"kiss of death", -1.5}, {"to die for", 3},    {"beating heart", 3.5}};
  return table;
}

double booster(std::string_view lower) {
  const auto& b = boosters();
  const auto it = b.find(lower);
  return it == b.end() ? 0.0 : it->second;
}

bool is_booster(std::string_view lower) { return boosters().contains(lower); }

bool negated(std::string_view lower) {
  if (std::find(kNegations.begin(), kNegations.end(), lower) != kNegations.end()) return true;
  return lower.find("n't") != std::string_view::npos;
}

// Python's str.isupper: at least one cased character and no lowercase ones.
bool all_caps(std::string_view s) {
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto n = static_cast<int32_t>(s.size());
  bool cased = false;
  for (int32_t i = 0; i < n;) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) continue;
    if (u_isULowercase(c)) return false;
    if (u_isUUppercase(c)) cased = true;
  }
  return cased;
}

struct Words {
  std::vector<std::string> surface;
  std::vector<std::string> lower;
  std::size_t size() const { return surface.size(); }
};

std::string join(const Words& w, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t k = from; k <= to; ++k) {
    if (k > from) out += ' ';
    out += w.lower[k];
  }
  return out;
}

double normalize(double score) {
  const double s = score / std::sqrt(score * score + kNormalizeAlpha);
  return std::clamp(s, -1.0, 1.0);
}

}  // namespace

VaderScorer VaderScorer::load(std::istream& in) {
  std::unordered_map<std::string, double> lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError("expected token<TAB>valence", line_no);
    const auto rest = std::string_view(line).substr(tab + 1);
    const auto value_end = rest.find('\t');
    const auto field = rest.substr(0, value_end);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
      throw ParseError("malformed valence", line_no);
    lexicon.insert_or_assign(line.substr(0, tab), value);
  }
  return VaderScorer(std::move(lexicon));
}

VaderScorer VaderScorer::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sentiment lexicon: " + path);
  return load(in);
}

std::optional<double> VaderScorer::lookup(const std::string& lower) const {
  const auto it = lexicon_.find(lower);
  if (it == lexicon_.end()) return std::nullopt;
  return it->second;
}

SentimentScore VaderScorer::score(std::span<const Token> tokens) const {
  Words w;
  int exclamations = 0;
  int questions = 0;
  for (const auto& t : tokens) {
    if (t.is_word) {
      w.surface.push_back(t.surface);
      w.lower.push_back(t.lower);
    } else if (t.surface == "!") {
      ++exclamations;
    } else if (t.surface == "?") {
      ++questions;
    }
  }
  if (w.size() == 0) return {0.0};

  std::size_t caps = 0;
  for (const auto& s : w.surface) caps += all_caps(s) ? 1 : 0;
  const bool cap_differential = caps > 0 && caps < w.size();

  auto in_lexicon = [&](std::size_t k) { return lexicon_.contains(w.lower[k]); };

  auto scalar_inc_dec = [&](std::size_t k, double valence) {
    if (!is_booster(w.lower[k])) return 0.0;
    double scalar = booster(w.lower[k]);
    if (valence < 0) scalar = -scalar;
    if (all_caps(w.surface[k]) && cap_differential) scalar += valence > 0 ? kCapsIncrease : -kCapsIncrease;
    return scalar;
  };

  auto negation_check = [&](double valence, std::size_t start, std::size_t i) {
    const auto& lw = w.lower;
    if (start == 0) {
      if (negated(lw[i - 1])) valence *= kNegationScalar;
    } else if (start == 1) {
      if (lw[i - 2] == "never" && (lw[i - 1] == "so" || lw[i - 1] == "this")) {
        valence *= 1.25;
      } else if (lw[i - 2] == "without" && lw[i - 1] == "doubt") {
      } else if (negated(lw[i - 2])) {
        valence *= kNegationScalar;
      }
    } else {
      if ((lw[i - 3] == "never" && (lw[i - 2] == "so" || lw[i - 2] == "this")) ||
          (lw[i - 1] == "so" || lw[i - 1] == "this")) {
        valence *= 1.25;
      } else if (lw[i - 3] == "without" && (lw[i - 2] == "doubt" || lw[i - 1] == "doubt")) {
      } else if (negated(lw[i - 3])) {
        valence *= kNegationScalar;
      }
    }
    return valence;
  };

  auto special_idioms = [&](double valence, std::size_t i) {
    const auto& sc = special_cases();
    const std::string sequences[] = {join(w, i - 1, i), join(w, i - 2, i), join(w, i - 2, i - 1),
                                     join(w, i - 3, i - 1), join(w, i - 3, i - 2)};
    for (const auto& seq : sequences) {
      if (auto it = sc.find(seq); it != sc.end()) {
        valence = it->second;
        break;
      }
    }
    if (w.size() - 1 > i) {
      if (auto it = sc.find(join(w, i, i + 1)); it != sc.end()) valence = it->second;
    }
    if (w.size() - 1 > i + 1) {
      if (auto it = sc.find(join(w, i, i + 2)); it != sc.end()) valence = it->second;
    }
    for (const auto& ngram : {sequences[3], sequences[4], sequences[2]}) {
      if (is_booster(ngram)) valence += booster(ngram);
    }
    return valence;
  };

  auto least_check = [&](double valence, std::size_t i) {
    if (i > 1 && !in_lexicon(i - 1) && w.lower[i - 1] == "least") {
      if (w.lower[i - 2] != "at" && w.lower[i - 2] != "very") valence *= kNegationScalar;
    } else if (i > 0 && !in_lexicon(i - 1) && w.lower[i - 1] == "least") {
      valence *= kNegationScalar;
    }
    return valence;
  };

  std::vector<double> sentiments;
  sentiments.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& item = w.lower[i];
    if (is_booster(item) || (i + 1 < w.size() && item == "kind" && w.lower[i + 1] == "of")) {
      sentiments.push_back(0.0);
      continue;
    }
    const auto base = lookup(item);
    if (!base) {
      sentiments.push_back(0.0);
      continue;
    }

    double valence = *base;
    if (item == "no" && i + 1 < w.size() && in_lexicon(i + 1)) valence = 0.0;
    if ((i > 0 && w.lower[i - 1] == "no") || (i > 1 && w.lower[i - 2] == "no") ||
        (i > 2 && w.lower[i - 3] == "no" && (w.lower[i - 1] == "or" || w.lower[i - 1] == "nor")))
      valence = *base * kNegationScalar;

    if (all_caps(w.surface[i]) && cap_differential) valence += valence > 0 ? kCapsIncrease : -kCapsIncrease;

    for (std::size_t start = 0; start < 3; ++start) {
      if (i > start && !in_lexicon(i - (start + 1))) {
        double s = scalar_inc_dec(i - (start + 1), valence);
        if (start == 1 && s != 0) s *= 0.95;
        if (start == 2 && s != 0) s *= 0.9;
        valence += s;
        valence = negation_check(valence, start, i);
        if (start == 2) valence = special_idioms(valence, i);
      }
    }
    sentiments.push_back(least_check(valence, i));
  }

  if (const auto but = std::find(w.lower.begin(), w.lower.end(), "but"); but != w.lower.end()) {
    const auto bi = static_cast<std::size_t>(but - w.lower.begin());
    for (std::size_t k = 0; k < sentiments.size(); ++k) {
      if (k < bi) sentiments[k] *= 0.5;
      else if (k > bi) sentiments[k] *= 1.5;
    }
  }

  double sum = 0.0;
  for (double s : sentiments) sum += s;

  const double ep = std::min(exclamations, 4) * 0.292;
  double qm = 0.0;
  if (questions > 1) qm = questions <= 3 ? questions * 0.18 : 0.96;
  const double emphasis = ep + qm;
  if (sum > 0) sum += emphasis;
  else if (sum < 0) sum -= emphasis;

  return {normalize(sum)};
}

}  // namespace boldline
