#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "boldline/error.hpp"

namespace boldline {

enum class Task { toxicity, regard };

std::string_view to_string(Task task);
Task parse_task(std::string_view name);

inline constexpr std::size_t kToxicityLabels = 6;
inline constexpr std::array<std::string_view, kToxicityLabels> kToxicityLabelNames = {
    "toxic", "severe_toxic", "threat", "obscene", "insult", "identity_threat"};

struct ToxicityResult {
  std::array<bool, kToxicityLabels> flags{};
  bool is_toxic = false;
};

/// flag_i = probability_i >= threshold; toxic when any flag is set.
ToxicityResult flags_from_probabilities(std::span<const double, kToxicityLabels> probabilities,
                                        double threshold);

enum class RegardLabel { positive, negative, neutral, other };
inline constexpr std::array<std::string_view, 4> kRegardLabelNames = {"positive", "negative",
                                                                     "neutral", "other"};
std::string_view to_string(RegardLabel label);
std::optional<RegardLabel> parse_regard_label(std::string_view name);

struct ClassifierRequest {
  Task task = Task::toxicity;
  std::string text;
  std::string request_id;
};

struct ToxicityPayload {
  std::array<double, kToxicityLabels> probabilities{};
  std::optional<double> threshold;
};

struct RegardPayload {
  RegardLabel label = RegardLabel::neutral;
  std::array<double, 4> scores{};  // indexed like kRegardLabelNames
};

struct ClassifierResponse {
  Task task = Task::toxicity;
  std::optional<ToxicityPayload> toxicity;
  std::optional<RegardPayload> regard;
};

class GatewayError : public Error {
 public:
  enum class Kind { timeout, malformed, http_status, connection };

  GatewayError(Kind kind, const std::string& what, int status = 0)
      : Error(what), kind_(kind), status_(status) {}
  Kind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }

 private:
  Kind kind_;
  int status_;
};

class FixtureMiss : public Error {
 public:
  using Error::Error;
};

// Wire format of POST /v1/classify.
std::string request_body(const ClassifierRequest& request);

/// Parses and validates a 200 response body. Throws GatewayError(malformed) on
/// any protocol or invariant violation.
ClassifierResponse parse_response(std::string_view body, Task expected);

std::string serialize_response(const ClassifierResponse& response);

/// NFC, Unicode whitespace runs collapsed to one space, trimmed.
std::string normalize_text(std::string_view text);

/// Lowercase hex SHA-256 of task name followed by the normalized text.
std::string fixture_key(Task task, std::string_view text);

enum class GatewayMode { live, replay, record, off };
std::string_view to_string(GatewayMode mode);
std::optional<GatewayMode> parse_gateway_mode(std::string_view name);

struct GatewayConfig {
  GatewayMode mode = GatewayMode::off;
  std::string endpoint;  // scheme://host:port
  std::filesystem::path fixture_dir;
  std::chrono::milliseconds timeout{10000};
  int retries = 3;
  std::chrono::milliseconds backoff{200};
  std::string bearer_token;
};

/// Toxicity/regard client. Live mode talks HTTP, replay answers from the
/// fixture store, record does both and persists what it received.
class ClassifierGateway {
 public:
  explicit ClassifierGateway(GatewayConfig config);

  const GatewayConfig& config() const { return config_; }
  bool enabled() const { return config_.mode != GatewayMode::off; }

  ClassifierResponse classify(const ClassifierRequest& request);

  std::filesystem::path fixture_path(Task task, std::string_view text) const;

 private:
  ClassifierResponse call_live(const ClassifierRequest& request) const;
  ClassifierResponse replay(const ClassifierRequest& request) const;
  void record(const ClassifierRequest& request, const ClassifierResponse& response);

  GatewayConfig config_;
  std::mutex record_mutex_;
};

inline ClassifierResponse classify(ClassifierGateway& client, const ClassifierRequest& request) {
  return client.classify(request);
}

}  // namespace boldline
