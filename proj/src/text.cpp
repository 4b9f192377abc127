#include "boldline/text.hpp"

#include <fstream>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "boldline/error.hpp"

namespace boldline {
namespace {

enum class CharClass { space, word, apostrophe, other };

CharClass classify(UChar32 c) {
  if (c < 0) return CharClass::other;
  if (c == U'\'' || c == 0x2019) return CharClass::apostrophe;
  if (u_isUWhiteSpace(c)) return CharClass::space;
  if (u_isalnum(c)) return CharClass::word;
  switch (u_charType(c)) {
    case U_NON_SPACING_MARK:
    case U_COMBINING_SPACING_MARK:
    case U_ENCLOSING_MARK:
      return CharClass::word;
    default:
      return CharClass::other;
  }
}

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t begin = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back({c, static_cast<std::size_t>(begin), static_cast<std::size_t>(i)});
  }
  return out;
}

Token make_token(std::string_view text, std::size_t begin, std::size_t end, bool is_word) {
  Token t;
  t.surface = std::string(text.substr(begin, end - begin));
  t.lower = fold_case(t.surface);
  t.offset = begin;
  t.is_word = is_word;
  return t;
}

}  // namespace

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto& cp : decode(text)) {
    if (cp.value < 0) {
      out.append(text.substr(cp.begin, cp.end - cp.begin));
      continue;
    }
    const UChar32 folded = u_foldCase(cp.value, U_FOLD_CASE_DEFAULT);
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, folded);
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  const auto cps = decode(text);
  std::vector<Token> tokens;
  std::size_t word_begin = 0;
  bool in_word = false;

  auto close_word = [&](std::size_t end) {
    if (in_word) tokens.push_back(make_token(text, word_begin, end, true));
    in_word = false;
  };

  for (std::size_t k = 0; k < cps.size(); ++k) {
    const auto& cp = cps[k];
    switch (classify(cp.value)) {
      case CharClass::word:
        if (!in_word) {
          word_begin = cp.begin;
          in_word = true;
        }
        break;
      case CharClass::apostrophe:
        if (in_word && k + 1 < cps.size() && classify(cps[k + 1].value) == CharClass::word) break;
        close_word(cp.begin);
        tokens.push_back(make_token(text, cp.begin, cp.end, false));
        break;
      case CharClass::space:
        close_word(cp.begin);
        break;
      case CharClass::other:
        close_word(cp.begin);
        tokens.push_back(make_token(text, cp.begin, cp.end, false));
        break;
    }
  }
  close_word(text.size());

  for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i].index = i;
  return tokens;
}

std::size_t word_count(std::span<const Token> tokens) {
  std::size_t n = 0;
  for (const auto& t : tokens) n += t.is_word ? 1 : 0;
  return n;
}

std::size_t word_position(std::span<const Token> tokens, std::size_t i) {
  if (i >= tokens.size() || !tokens[i].is_word) return 0;
  return word_count(tokens.first(i + 1));
}

Stoplist Stoplist::load(std::istream& in) {
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.insert(fold_case(std::string_view(line).substr(first, last - first + 1)));
  }
  return Stoplist(std::move(words));
}

Stoplist Stoplist::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stoplist: " + path);
  return load(in);
}

bool is_content_word(const Token& token, const Stoplist& stoplist) {
  return token.is_word && !stoplist.contains(token.lower);
}

std::vector<Span> find_mentions(std::span<const Token> tokens, std::string_view term) {
  const auto pattern = tokenize(term);
  std::vector<Span> spans;
  if (pattern.empty() || pattern.size() > tokens.size()) return spans;

  for (std::size_t start = 0; start + pattern.size() <= tokens.size(); ++start) {
    bool match = true;
    for (std::size_t k = 0; k < pattern.size() && match; ++k)
      match = tokens[start + k].lower == pattern[k].lower;
    if (!match) continue;

    Span span{start, start + pattern.size() - 1, {}};
    for (std::size_t k = span.start; k <= span.end; ++k) {
      if (k > span.start) span.text += ' ';
      span.text += tokens[k].surface;
    }
    spans.push_back(std::move(span));
  }
  return spans;
}

std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace boldline
