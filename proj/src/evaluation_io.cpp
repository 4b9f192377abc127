#include "boldline/evaluation_io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "boldline/error.hpp"

namespace boldline {
namespace {

using nlohmann::json;

template <typename Enum, std::size_t N>
Enum parse_enum(const json& node, const std::array<Enum, N>& values, std::size_t line, const char* what) {
  if (!node.is_string()) throw ParseError(fmt::format("{} must be a string", what), line);
  const auto name = node.get<std::string>();
  for (auto v : values)
    if (to_string(v) == name) return v;
  throw ParseError(fmt::format("unknown {} \"{}\"", what, name), line);
}

const json& field(const json& node, const char* key, std::size_t line) {
  if (!node.is_object() || !node.contains(key)) throw ParseError(fmt::format("missing field \"{}\"", key), line);
  return node[key];
}

double number(const json& node, const char* key, std::size_t line) {
  const auto& v = field(node, key, line);
  if (!v.is_number()) throw ParseError(fmt::format("\"{}\" must be a number", key), line);
  return v.get<double>();
}

std::string text(const json& node, const char* key, std::size_t line) {
  const auto& v = field(node, key, line);
  if (!v.is_string()) throw ParseError(fmt::format("\"{}\" must be a string", key), line);
  return v.get<std::string>();
}

bool boolean(const json& node, const char* key, std::size_t line) {
  const auto& v = field(node, key, line);
  if (!v.is_boolean()) throw ParseError(fmt::format("\"{}\" must be a boolean", key), line);
  return v.get<bool>();
}

constexpr std::array<SentimentLabel, 3> kSentimentLabels = {SentimentLabel::positive, SentimentLabel::neutral,
                                                            SentimentLabel::negative};
constexpr std::array<GenderLabel, 3> kGenderLabels = {GenderLabel::male, GenderLabel::female, GenderLabel::neutral};
constexpr std::array<GenderMethod, 3> kGenderMethods = {GenderMethod::unigram, GenderMethod::wavg, GenderMethod::max};
constexpr std::array<RegardLabel, 4> kRegardLabels = {RegardLabel::positive, RegardLabel::negative,
                                                      RegardLabel::neutral, RegardLabel::other};

}  // namespace

std::string to_json_line(const TextEvaluation& e) {
  json root = {{"text_id", e.text_id}, {"domain", e.domain}, {"group", e.group},
               {"source", e.source},   {"text", e.text}};
  root["sentiment"] = {{"score", e.sentiment.value}, {"label", to_string(e.sentiment_label)}};

  if (e.toxicity) {
    json tox = json::object();
    for (std::size_t i = 0; i < kToxicityLabels; ++i)
      tox[std::string(kToxicityLabelNames[i])] = e.toxicity->flags[i];
    tox["is_toxic"] = e.toxicity->is_toxic;
    root["toxicity"] = tox;
  }
  if (e.regard) root["regard"] = {{"label", to_string(e.regard->label)}, {"applicable", e.regard->applicable}};

  json norms = json::object();
  for (const auto v : kAllNormVariables) norms[std::string(to_string(v))] = e.norms[v];
  norms["n_used"] = e.norms.n_used;
  root["norms"] = norms;

  json categories = json::array();
  for (const auto c : e.norm_categories) categories.push_back(to_string(c));
  root["norm_categories"] = categories;

  json gender = json::object();
  for (const auto& g : e.gender) {
    json node = {{"score", g.score}, {"label", to_string(g.label)}};
    if (g.method == GenderMethod::unigram) {
      node["male_count"] = g.male_count;
      node["female_count"] = g.female_count;
    }
    gender[std::string(to_string(g.method))] = node;
  }
  root["gender"] = gender;

  if (e.classifier_error) root["classifier_error"] = *e.classifier_error;
  return root.dump();
}

TextEvaluation parse_evaluation(std::string_view line, std::size_t line_no) {
  json root;
  try {
    root = json::parse(line);
  } catch (const json::exception& ex) {
    throw ParseError(ex.what(), line_no);
  }
  if (!root.is_object()) throw ParseError("expected a JSON object", line_no);

  TextEvaluation e;
  e.text_id = text(root, "text_id", line_no);
  e.domain = text(root, "domain", line_no);
  e.group = text(root, "group", line_no);
  e.source = text(root, "source", line_no);
  e.text = text(root, "text", line_no);

  const auto& sentiment = field(root, "sentiment", line_no);
  e.sentiment.value = number(sentiment, "score", line_no);
  e.sentiment_label = parse_enum(field(sentiment, "label", line_no), kSentimentLabels, line_no, "sentiment label");

  if (root.contains("toxicity")) {
    const auto& tox = root["toxicity"];
    ToxicityResult r;
    for (std::size_t i = 0; i < kToxicityLabels; ++i)
      r.flags[i] = boolean(tox, std::string(kToxicityLabelNames[i]).c_str(), line_no);
    r.is_toxic = boolean(tox, "is_toxic", line_no);
    e.toxicity = r;
  }
  if (root.contains("regard")) {
    const auto& reg = root["regard"];
    RegardResult r;
    r.label = parse_enum(field(reg, "label", line_no), kRegardLabels, line_no, "regard label");
    r.applicable = boolean(reg, "applicable", line_no);
    e.regard = r;
  }

  const auto& norms = field(root, "norms", line_no);
  for (const auto v : kAllNormVariables)
    e.norms.values[static_cast<std::size_t>(v)] = number(norms, std::string(to_string(v)).c_str(), line_no);
  e.norms.n_used = static_cast<std::size_t>(number(norms, "n_used", line_no));

  const auto& categories = field(root, "norm_categories", line_no);
  if (!categories.is_array()) throw ParseError("\"norm_categories\" must be an array", line_no);
  for (const auto& c : categories)
    e.norm_categories.push_back(parse_enum(c, kAllNormCategories, line_no, "norm category"));

  const auto& gender = field(root, "gender", line_no);
  for (std::size_t k = 0; k < kGenderMethods.size(); ++k) {
    const auto& node = field(gender, std::string(to_string(kGenderMethods[k])).c_str(), line_no);
    auto& g = e.gender[k];
    g.method = kGenderMethods[k];
    g.score = number(node, "score", line_no);
    g.label = parse_enum(field(node, "label", line_no), kGenderLabels, line_no, "gender label");
    if (g.method == GenderMethod::unigram) {
      g.male_count = static_cast<std::size_t>(number(node, "male_count", line_no));
      g.female_count = static_cast<std::size_t>(number(node, "female_count", line_no));
    }
  }
  if (root.contains("classifier_error")) e.classifier_error = text(root, "classifier_error", line_no);
  return e;
}

std::vector<TextEvaluation> read_evaluations(std::istream& in) {
  std::vector<TextEvaluation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_evaluation(line, line_no));
  }
  return out;
}

}  // namespace boldline
