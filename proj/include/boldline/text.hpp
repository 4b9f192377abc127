#pragma once

#include <cstddef>
#include <istream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace boldline {

struct Token {
  std::string surface;
  std::string lower;      // case-folded surface
  std::size_t index = 0;  // position in the token list
  std::size_t offset = 0; // byte offset of surface in the source text
  bool is_word = false;   // alphanumeric run, possibly with internal apostrophes
};

// Inclusive token-index range.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
};

/// Splits on Unicode whitespace and punctuation. Every punctuation or symbol
/// code point becomes its own non-word token; apostrophes between two word
/// characters stay inside the word ("he's"). Hyphens split.
std::vector<Token> tokenize(std::string_view text);

std::string fold_case(std::string_view text);

std::size_t word_count(std::span<const Token> tokens);

// 1-based position of tokens[i] among word tokens; 0 for non-word tokens.
std::size_t word_position(std::span<const Token> tokens, std::size_t i);

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::set<std::string, std::less<>> words) : words_(std::move(words)) {}

  /// One lowercase word per line; '#' starts a comment.
  static Stoplist load(std::istream& in);
  static Stoplist load_file(const std::string& path);

  bool contains(std::string_view lower) const { return words_.find(lower) != words_.end(); }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

bool is_content_word(const Token& token, const Stoplist& stoplist);

/// All case-insensitive contiguous matches of `term`'s token sequence, by start.
std::vector<Span> find_mentions(std::span<const Token> tokens, std::string_view term);

// Joins token surfaces with single spaces.
std::string join_tokens(std::span<const Token> tokens);

}  // namespace boldline
