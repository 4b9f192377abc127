#include "boldline/gateway.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace boldline {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw GatewayError(GatewayError::Kind::malformed, "malformed classifier response: " + what);
}

double probability(const json& node, std::string_view name) {
  if (!node.is_number()) malformed(fmt::format("\"{}\" is not a number", name));
  const double p = node.get<double>();
  if (!(p >= 0.0 && p <= 1.0)) malformed(fmt::format("\"{}\" = {} outside [0, 1]", name, p));
  return p;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

bool is_timeout(httplib::Error e) {
  return e == httplib::Error::Read || e == httplib::Error::Write ||
         e == httplib::Error::ConnectionTimeout;
}

}  // namespace

std::string_view to_string(Task task) { return task == Task::toxicity ? "toxicity" : "regard"; }

Task parse_task(std::string_view name) {
  if (name == "toxicity") return Task::toxicity;
  if (name == "regard") return Task::regard;
  throw DomainError(fmt::format("unknown classifier task \"{}\"", name));
}

std::string_view to_string(RegardLabel label) {
  return kRegardLabelNames[static_cast<std::size_t>(label)];
}

std::optional<RegardLabel> parse_regard_label(std::string_view name) {
  for (std::size_t i = 0; i < kRegardLabelNames.size(); ++i)
    if (kRegardLabelNames[i] == name) return static_cast<RegardLabel>(i);
  return std::nullopt;
}

std::string_view to_string(GatewayMode mode) {
  switch (mode) {
    case GatewayMode::live: return "live";
    case GatewayMode::replay: return "replay";
    case GatewayMode::record: return "record";
    case GatewayMode::off: return "off";
  }
  return "?";
}

std::optional<GatewayMode> parse_gateway_mode(std::string_view name) {
  for (auto m : {GatewayMode::live, GatewayMode::replay, GatewayMode::record, GatewayMode::off})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

ToxicityResult flags_from_probabilities(std::span<const double, kToxicityLabels> probabilities,
                                        double threshold) {
  ToxicityResult r;
  for (std::size_t i = 0; i < kToxicityLabels; ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0))
      throw RangeError(fmt::format("{} probability {} outside [0, 1]", kToxicityLabelNames[i], p));
    r.flags[i] = p >= threshold;
    r.is_toxic = r.is_toxic || r.flags[i];
  }
  return r;
}

std::string request_body(const ClassifierRequest& request) {
  json body = {{"task", to_string(request.task)},
               {"text", request.text},
               {"request_id", request.request_id}};
  return body.dump();
}

ClassifierResponse parse_response(std::string_view body, Task expected) {
  json root;
  try {
    root = json::parse(body);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
  if (!root.is_object()) malformed("body is not an object");
  if (!root.contains("task") || !root["task"].is_string()) malformed("missing \"task\"");
  if (root["task"].get<std::string>() != to_string(expected))
    malformed(fmt::format("task \"{}\" does not match request", root["task"].get<std::string>()));

  ClassifierResponse response;
  response.task = expected;

  if (expected == Task::toxicity) {
    if (!root.contains("toxicity") || !root["toxicity"].is_object()) malformed("missing \"toxicity\"");
    const auto& node = root["toxicity"];
    ToxicityPayload payload;
    for (std::size_t i = 0; i < kToxicityLabels; ++i) {
      const std::string name(kToxicityLabelNames[i]);
      if (!node.contains(name)) malformed(fmt::format("missing label \"{}\"", name));
      payload.probabilities[i] = probability(node[name], name);
    }
    if (root.contains("threshold")) payload.threshold = probability(root["threshold"], "threshold");
    response.toxicity = payload;
  } else {
    if (!root.contains("regard") || !root["regard"].is_object()) malformed("missing \"regard\"");
    const auto& node = root["regard"];
    if (!node.contains("label") || !node["label"].is_string()) malformed("missing regard label");
    const auto label = parse_regard_label(node["label"].get<std::string>());
    if (!label) malformed(fmt::format("unknown regard label \"{}\"", node["label"].get<std::string>()));
    if (!node.contains("scores") || !node["scores"].is_object()) malformed("missing regard scores");
    RegardPayload payload;
    payload.label = *label;
    double sum = 0.0;
    for (std::size_t i = 0; i < kRegardLabelNames.size(); ++i) {
      const std::string name(kRegardLabelNames[i]);
      if (!node["scores"].contains(name)) malformed(fmt::format("missing regard score \"{}\"", name));
      payload.scores[i] = probability(node["scores"][name], name);
      sum += payload.scores[i];
    }
    if (std::abs(sum - 1.0) > 1e-6) malformed(fmt::format("regard scores sum to {}", sum));
    response.regard = payload;
  }
  return response;
}

std::string serialize_response(const ClassifierResponse& response) {
  json root = {{"task", to_string(response.task)}};
  if (response.toxicity) {
    json probs = json::object();
    for (std::size_t i = 0; i < kToxicityLabels; ++i)
      probs[std::string(kToxicityLabelNames[i])] = response.toxicity->probabilities[i];
    root["toxicity"] = probs;
    if (response.toxicity->threshold) root["threshold"] = *response.toxicity->threshold;
  }
  if (response.regard) {
    json scores = json::object();
    for (std::size_t i = 0; i < kRegardLabelNames.size(); ++i)
      scores[std::string(kRegardLabelNames[i])] = response.regard->scores[i];
    root["regard"] = {{"label", to_string(response.regard->label)}, {"scores", scores}};
  }
  return root.dump(2) + "\n";
}

std::string normalize_text(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  const auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  const icu::UnicodeString composed = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(u' '));
    pending_space = false;
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

std::string fixture_key(Task task, std::string_view text) {
  return sha256_hex(std::string(to_string(task)) + normalize_text(text));
}

ClassifierGateway::ClassifierGateway(GatewayConfig config) : config_(std::move(config)) {
  const bool needs_endpoint = config_.mode == GatewayMode::live || config_.mode == GatewayMode::record;
  const bool needs_fixtures = config_.mode == GatewayMode::replay || config_.mode == GatewayMode::record;
  if (needs_endpoint && config_.endpoint.empty())
    throw Error(fmt::format("gateway mode {} requires an endpoint", to_string(config_.mode)));
  if (needs_fixtures && config_.fixture_dir.empty())
    throw Error(fmt::format("gateway mode {} requires a fixture directory", to_string(config_.mode)));
}

std::filesystem::path ClassifierGateway::fixture_path(Task task, std::string_view text) const {
  return config_.fixture_dir / (fixture_key(task, text) + ".json");
}

ClassifierResponse ClassifierGateway::classify(const ClassifierRequest& request) {
  if (normalize_text(request.text).empty()) throw DomainError("classifier request text is empty");
  switch (config_.mode) {
    case GatewayMode::live:
      return call_live(request);
    case GatewayMode::replay:
      return replay(request);
    case GatewayMode::record: {
      auto response = call_live(request);
      record(request, response);
      return response;
    }
    case GatewayMode::off:
      break;
  }
  throw Error("classifier gateway is off");
}

ClassifierResponse ClassifierGateway::call_live(const ClassifierRequest& request) const {
  httplib::Client client(config_.endpoint);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());

  httplib::Headers headers;
  if (!config_.bearer_token.empty())
    headers.emplace("Authorization", "Bearer " + config_.bearer_token);
  const auto body = request_body(request);

  auto delay = config_.backoff;
  for (int attempt = 0;; ++attempt) {
    auto result = client.Post("/v1/classify", headers, body, "application/json");
    if (result) {
      if (result->status != 200) {
        std::string message = result->body;
        try {
          const auto err = json::parse(result->body);
          if (err.is_object() && err.contains("error") && err["error"].is_string())
            message = err["error"].get<std::string>();
        } catch (const json::exception&) {
        }
        throw GatewayError(GatewayError::Kind::http_status,
                           fmt::format("classifier returned HTTP {}: {}", result->status, message),
                           result->status);
      }
      return parse_response(result->body, request.task);
    }
    const auto error = result.error();
    if (!is_timeout(error) || attempt >= config_.retries) {
      throw GatewayError(is_timeout(error) ? GatewayError::Kind::timeout : GatewayError::Kind::connection,
                         fmt::format("classifier request failed: {}", httplib::to_string(error)));
    }
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

ClassifierResponse ClassifierGateway::replay(const ClassifierRequest& request) const {
  const auto path = fixture_path(request.task, request.text);
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FixtureMiss(fmt::format("no recorded {} response for text \"{}\"", to_string(request.task),
                                  request.text));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_response(buffer.str(), request.task);
}

void ClassifierGateway::record(const ClassifierRequest& request, const ClassifierResponse& response) {
  const auto path = fixture_path(request.task, request.text);
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  std::lock_guard lock(record_mutex_);
  std::filesystem::create_directories(config_.fixture_dir);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write fixture " + tmp.string());
    out << serialize_response(response);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace boldline
