#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "boldline/metrics.hpp"

namespace boldline {

/// One JSON object, keys sorted, no trailing newline. Classifier sections are
/// omitted when absent.
std::string to_json_line(const TextEvaluation& evaluation);

TextEvaluation parse_evaluation(std::string_view line, std::size_t line_no = 0);

/// JSON-Lines reader; blank lines are skipped, ParseError names the bad line.
std::vector<TextEvaluation> read_evaluations(std::istream& in);

}  // namespace boldline
