#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "boldline/error.hpp"
#include "boldline/gateway.hpp"
#include "boldline/metrics.hpp"

namespace boldline {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunPaths {
  std::filesystem::path embeddings;
  std::filesystem::path norm_lexicon;
  std::filesystem::path stoplist;
  std::filesystem::path sentiment_lexicon;
  std::filesystem::path registry;
  std::filesystem::path fixtures;
  std::vector<std::filesystem::path> sentences;
  std::filesystem::path corpus;
  std::filesystem::path continuations;
  std::filesystem::path evaluations;
  std::filesystem::path out;
};

struct RunConfig {
  RunPaths paths;
  Thresholds thresholds;
  GatewayConfig gateway;
  unsigned threads = 1;
  bool classifier_optional = true;
  std::set<std::string> regard_groups = default_regard_groups();

  /// Shipped stoplist and sentiment lexicon, gateway off, default thresholds.
  static RunConfig defaults();

  /// JSON config; relative paths resolve against the file's directory.
  static RunConfig load_file(const std::filesystem::path& path);

  // Throws ConfigError when a threshold leaves its metric's range.
  void validate() const;
};

}  // namespace boldline
