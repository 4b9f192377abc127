#include "boldline/config.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

namespace boldline {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const json& node, const char* key) {
  if (!node.is_string()) throw ConfigError(fmt::format("config: \"{}\" must be a string path", key));
  std::filesystem::path p = node.get<std::string>();
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

double real(const json& node, const char* key) {
  if (!node.is_number()) throw ConfigError(fmt::format("config: \"{}\" must be a number", key));
  return node.get<double>();
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  const std::filesystem::path data = BOLDLINE_DATA_DIR;
  c.paths.stoplist = data / "stoplist.txt";
  c.paths.sentiment_lexicon = data / "vader_lexicon.txt";
  return c;
}

RunConfig RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config {}: {}", path.string(), e.what()));
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig c = defaults();
  const auto base = path.parent_path();

  if (root.contains("paths")) {
    const auto& p = root["paths"];
    if (!p.is_object()) throw ConfigError("config: \"paths\" must be an object");
    auto set = [&](const char* key, std::filesystem::path& target) {
      if (p.contains(key)) target = resolve(base, p[key], key);
    };
    set("embeddings", c.paths.embeddings);
    set("norm_lexicon", c.paths.norm_lexicon);
    set("stoplist", c.paths.stoplist);
    set("sentiment_lexicon", c.paths.sentiment_lexicon);
    set("registry", c.paths.registry);
    set("fixtures", c.paths.fixtures);
    set("corpus", c.paths.corpus);
    set("continuations", c.paths.continuations);
    set("evaluations", c.paths.evaluations);
    set("out", c.paths.out);
    if (p.contains("sentences")) {
      const auto& s = p["sentences"];
      if (s.is_string()) {
        c.paths.sentences.push_back(resolve(base, s, "sentences"));
      } else if (s.is_array()) {
        for (const auto& item : s) c.paths.sentences.push_back(resolve(base, item, "sentences"));
      } else {
        throw ConfigError("config: \"sentences\" must be a path or list of paths");
      }
    }
  }

  if (root.contains("thresholds")) {
    const auto& t = root["thresholds"];
    if (t.contains("sentiment")) c.thresholds.sentiment = real(t["sentiment"], "sentiment");
    if (t.contains("gender")) c.thresholds.gender = real(t["gender"], "gender");
    if (t.contains("toxicity")) c.thresholds.toxicity = real(t["toxicity"], "toxicity");
    if (t.contains("norm_vad")) c.thresholds.norms.vad = real(t["norm_vad"], "norm_vad");
    if (t.contains("norm_be5")) c.thresholds.norms.be5 = real(t["norm_be5"], "norm_be5");
  }

  if (root.contains("gateway")) {
    const auto& g = root["gateway"];
    if (g.contains("url")) {
      if (!g["url"].is_string()) throw ConfigError("config: gateway \"url\" must be a string");
      c.gateway.endpoint = g["url"].get<std::string>();
    }
    if (g.contains("mode")) {
      const auto mode = g["mode"].is_string() ? parse_gateway_mode(g["mode"].get<std::string>()) : std::nullopt;
      if (!mode) throw ConfigError("config: gateway \"mode\" must be live, replay, record or off");
      c.gateway.mode = *mode;
    }
    if (g.contains("timeout_ms"))
      c.gateway.timeout = std::chrono::milliseconds(static_cast<long>(real(g["timeout_ms"], "timeout_ms")));
    if (g.contains("retries")) c.gateway.retries = static_cast<int>(real(g["retries"], "retries"));
    if (g.contains("bearer_token") && g["bearer_token"].is_string())
      c.gateway.bearer_token = g["bearer_token"].get<std::string>();
  }

  if (root.contains("threads")) {
    const double n = real(root["threads"], "threads");
    if (n < 1) throw ConfigError("config: \"threads\" must be at least 1");
    c.threads = static_cast<unsigned>(n);
  }
  if (root.contains("classifier_optional")) {
    if (!root["classifier_optional"].is_boolean()) throw ConfigError("config: \"classifier_optional\" must be a boolean");
    c.classifier_optional = root["classifier_optional"].get<bool>();
  }
  if (root.contains("regard_groups")) {
    if (!root["regard_groups"].is_array()) throw ConfigError("config: \"regard_groups\" must be an array");
    c.regard_groups.clear();
    for (const auto& g : root["regard_groups"]) {
      if (!g.is_string()) throw ConfigError("config: \"regard_groups\" must contain strings");
      c.regard_groups.insert(g.get<std::string>());
    }
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  auto check = [](double v, double lo, double hi, const char* name) {
    if (!(v > lo && v <= hi)) throw ConfigError(fmt::format("threshold {} = {} outside ({}, {}]", name, v, lo, hi));
  };
  check(thresholds.sentiment, 0.0, 1.0, "sentiment");
  check(thresholds.gender, 0.0, 1.0, "gender");
  check(thresholds.toxicity, 0.0, 1.0, "toxicity");
  check(thresholds.norms.vad, 0.0, 1.0, "norm_vad");
  check(thresholds.norms.be5, 0.0, 1.0, "norm_be5");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

}  // namespace boldline
