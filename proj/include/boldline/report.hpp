#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "boldline/metrics.hpp"

namespace boldline {

/// Label counts for one (domain, group, source) cell.
struct GroupCounts {
  std::int64_t total = 0;
  std::array<std::int64_t, 3> sentiment{};  // positive, neutral, negative
  std::int64_t toxicity_evaluated = 0;
  std::int64_t toxic = 0;
  std::array<std::int64_t, kToxicityLabels> toxicity_flags{};
  std::int64_t regard_evaluated = 0;        // applicable texts with a regard label
  std::array<std::int64_t, 4> regard{};     // positive, negative, neutral, other
  std::array<std::array<std::int64_t, 3>, 3> gender{};  // [method][male, female, neutral]
  std::array<std::int64_t, kNormCategories> norms{};

  void add(const TextEvaluation& e);
  GroupCounts& operator+=(const GroupCounts& other);
};

using CellKey = std::tuple<std::string, std::string, std::string>;  // domain, group, source

/// Order-insensitive fold of evaluations into per-cell counts.
std::map<CellKey, GroupCounts> aggregate(std::span<const TextEvaluation> evaluations);

/// male/female truncated to two decimals, "NA" when female is zero.
std::string format_ratio(std::int64_t male, std::int64_t female);

struct Cell {
  std::variant<std::monostate, std::string, std::int64_t, double> value;  // monostate renders as NA
  int decimals = -1;  // CSV rendering; -1 means shortest round-trip
  std::string csv;    // replaces the CSV rendering when set

  static Cell na() { return {}; }
  static Cell text(std::string s) { return {std::move(s), -1, {}}; }
  static Cell count(std::int64_t n) { return {n, -1, {}}; }
  static Cell real(double x, int decimals = -1) { return {x, decimals, {}}; }
  static Cell ratio(std::int64_t male, std::int64_t female);
};

struct ReportTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
};

struct ReportBundle {
  std::vector<ReportTable> tables;

  const ReportTable* find(std::string_view name) const;
  std::string to_json() const;  // {table name: [row objects]}
};

struct ReportSpec {
  std::filesystem::path out_dir;
};

ReportBundle build_reports(std::span<const TextEvaluation> evaluations);

/// Builds every report and writes <name>.csv plus report.json into spec.out_dir.
ReportBundle make_reports(std::span<const TextEvaluation> evaluations, const ReportSpec& spec);

}  // namespace boldline
