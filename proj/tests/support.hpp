#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "boldline/embedding.hpp"
#include "boldline/lexicon.hpp"
#include "boldline/text.hpp"

namespace boldline::test {

inline std::filesystem::path data_dir() { return BOLDLINE_TEST_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("boldline-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// she = e0, he = e1, so the gender direction is e0 - e1.
inline EmbeddingTable<double> planar_table(std::vector<std::pair<std::string, std::pair<double, double>>> extra = {}) {
  std::vector<std::string> words = {"she", "he"};
  std::vector<std::pair<double, double>> vecs = {{1, 0}, {0, 1}};
  for (auto& [w, v] : extra) {
    words.push_back(w);
    vecs.push_back(v);
  }
  EmbeddingTable<double>::Matrix m(2, static_cast<Eigen::Index>(words.size()));
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    m(0, static_cast<Eigen::Index>(i)) = vecs[i].first;
    m(1, static_cast<Eigen::Index>(i)) = vecs[i].second;
  }
  return {std::move(words), std::move(m)};
}

// Word whose projection on (she - he) equals b exactly, in the planar table.
inline std::pair<double, double> vector_for_b(double b) {
  // Unit vector at angle theta from (1,-1)/sqrt2 has cosine b.
  const double c = b, s = std::sqrt(std::max(0.0, 1.0 - b * b));
  const double r = 1.0 / std::sqrt(2.0);
  return {c * r + s * r, -c * r + s * r};
}

inline Stoplist stoplist_of(std::initializer_list<const char*> words) {
  std::set<std::string, std::less<>> s;
  for (const char* w : words) s.insert(w);
  return Stoplist(std::move(s));
}

inline NormEntry norm_entry(std::string word, std::array<double, kNormVariables> raw) {
  return NormEntry{std::move(word), raw};
}

}  // namespace boldline::test
