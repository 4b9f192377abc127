#pragma once

#include <charconv>
#include <fstream>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "boldline/error.hpp"
#include "boldline/text.hpp"

namespace boldline {

template <typename Scalar>
struct GenderProjection {
  std::string word;
  Scalar b;
};

/// Word vectors stored column-wise, with the gender direction she - he.
template <typename Scalar = double>
class EmbeddingTable {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  EmbeddingTable(std::vector<std::string> words, Matrix vectors)
      : words_(std::move(words)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(words_.size()) != vectors_.cols())
      throw DimensionMismatch("word count does not match vector count");
    if (vectors_.rows() <= 0) throw DimensionMismatch("embedding dimension must be positive");
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (!index_.emplace(words_[i], static_cast<Eigen::Index>(i)).second)
        throw ParseError("duplicate word: " + words_[i]);
    }
    const auto she = index_.find("she");
    const auto he = index_.find("he");
    if (she == index_.end() || he == index_.end())
      throw MissingAnchorWords("embedding table must contain \"she\" and \"he\"");
    gender_dir_ = vectors_.col(she->second) - vectors_.col(he->second);
    if (!(gender_dir_.norm() > Scalar(0)))
      throw MissingAnchorWords("\"she\" and \"he\" vectors coincide; gender direction is zero");
    gender_norm_ = gender_dir_.norm();
  }

  Eigen::Index dim() const { return vectors_.rows(); }
  std::size_t size() const { return words_.size(); }
  const Vector& gender_direction() const { return gender_dir_; }
  const std::vector<std::string>& words() const { return words_; }

  /// Exact match first, then the case-folded form.
  std::optional<Eigen::Index> find(std::string_view word) const {
    if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
    if (auto it = index_.find(fold_case(word)); it != index_.end()) return it->second;
    return std::nullopt;
  }

  auto vector(Eigen::Index i) const { return vectors_.col(i); }

  /// Cosine of the word vector with the gender direction; absent for OOV and
  /// zero-norm vectors.
  std::optional<GenderProjection<Scalar>> projection(std::string_view word) const {
    const auto i = find(word);
    if (!i) return std::nullopt;
    const auto w = vectors_.col(*i);
    const Scalar norm = w.norm();
    if (!(norm > Scalar(0))) return std::nullopt;
    return GenderProjection<Scalar>{std::string(word), w.dot(gender_dir_) / (norm * gender_norm_)};
  }

 private:
  std::vector<std::string> words_;
  Matrix vectors_;
  std::unordered_map<std::string, Eigen::Index> index_;
  Vector gender_dir_;
  Scalar gender_norm_{};
};

template <typename Scalar>
std::optional<GenderProjection<Scalar>> gender_projection(const EmbeddingTable<Scalar>& table,
                                                          std::string_view word) {
  return table.projection(word);
}

namespace detail {

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > begin) fields.push_back(line.substr(begin, i - begin));
  }
  return fields;
}

template <typename Scalar>
Scalar parse_real(std::string_view field, std::size_t line) {
  double value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError("malformed number \"" + std::string(field) + "\"", line);
  return static_cast<Scalar>(value);
}

}  // namespace detail

/// Text word2vec layout: header "count dim", then "word v1 ... vdim" per line.
template <typename Scalar = double>
EmbeddingTable<Scalar> load_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!detail::split_spaces(line).empty()) break;
  }
  const auto header = detail::split_spaces(line);
  if (header.size() != 2) throw ParseError("expected header \"count dim\"", line_no);
  const auto count = detail::parse_real<double>(header[0], line_no);
  const auto dim = detail::parse_real<double>(header[1], line_no);
  if (dim < 1 || count < 0 || dim != std::floor(dim) || count != std::floor(count))
    throw ParseError("header counts must be non-negative integers", line_no);

  const auto d = static_cast<Eigen::Index>(dim);
  std::vector<std::string> words;
  std::vector<Scalar> values;
  words.reserve(static_cast<std::size_t>(count));
  values.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(d));

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_spaces(line);
    if (fields.empty()) continue;
    if (static_cast<Eigen::Index>(fields.size()) - 1 != d)
      throw DimensionMismatch("expected " + std::to_string(d) + " components, found " +
                                  std::to_string(fields.size() - 1),
                              line_no);
    words.emplace_back(fields[0]);
    for (std::size_t k = 1; k < fields.size(); ++k)
      values.push_back(detail::parse_real<Scalar>(fields[k], line_no));
  }

  typename EmbeddingTable<Scalar>::Matrix vectors =
      Eigen::Map<const typename EmbeddingTable<Scalar>::Matrix>(
          values.data(), d, static_cast<Eigen::Index>(words.size()));
  return EmbeddingTable<Scalar>(std::move(words), std::move(vectors));
}

template <typename Scalar = double>
EmbeddingTable<Scalar> load_embeddings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings: " + path);
  return load_embeddings<Scalar>(in);
}

}  // namespace boldline
