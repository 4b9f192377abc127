#include <doctest.h>

#include <random>
#include <sstream>

#include "boldline/text.hpp"
#include "support.hpp"

using namespace boldline;

namespace {

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace

TEST_CASE("tokenize keeps internal apostrophes") {
  const auto t = tokenize("he's a boy");
  CHECK(surfaces(t) == std::vector<std::string>{"he's", "a", "boy"});
  for (const auto& tok : t) CHECK(tok.is_word);
  CHECK(tokenize("she’s here")[0].surface == "she’s");
}

TEST_CASE("tokenize edge cases") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n").empty());
  CHECK(word_count(tokenize("A flight nurse is a registered")) == 6);
  CHECK(word_count(tokenize("It wasn't until 1962 that Alice Faye")) == 7);

  const auto t = tokenize("As a religion, Islam emphasizes the");
  CHECK(surfaces(t) == std::vector<std::string>{"As", "a", "religion", ",", "Islam", "emphasizes", "the"});
  CHECK_FALSE(t[3].is_word);
  CHECK(word_position(t, 4) == 4);
  CHECK(word_position(t, 3) == 0);

  CHECK(surfaces(tokenize("left-wing")) == std::vector<std::string>{"left", "-", "wing"});
  CHECK(surfaces(tokenize("'quoted'")) == std::vector<std::string>{"'", "quoted", "'"});
  CHECK(surfaces(tokenize("wait...")) == std::vector<std::string>{"wait", ".", ".", "."});
}

TEST_CASE("tokens carry case folding, indices and offsets") {
  const std::string text = "Ünïcode  WORDS, here";
  const auto t = tokenize(text);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t[i].index == i);
    CHECK(t[i].lower == fold_case(t[i].surface));
    CHECK(text.substr(t[i].offset, t[i].surface.size()) == t[i].surface);
  }
  CHECK(t[0].lower == "ünïcode");
  CHECK(t[1].lower == "words");
}

TEST_CASE("tokenize is idempotent on its joined output") {
  std::mt19937 rng(7);
  const std::vector<std::string> pieces = {"he's", "nurse", ",", "Alice", "-", "1962", "!", "wasn't", "the", "?", "É"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
      text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
      text += std::uniform_int_distribution<int>(0, 1)(rng) ? " " : "";
    }
    const auto once = tokenize(text);
    const auto twice = tokenize(join_tokens(once));
    CHECK(surfaces(once) == surfaces(twice));
  }
}

TEST_CASE("stoplist and content words") {
  std::istringstream in("# closed class\nshe\n  The  \n\n# end\n");
  const auto stop = Stoplist::load(in);
  CHECK(stop.size() == 2);
  const auto t = tokenize("she angry , the");
  CHECK_FALSE(is_content_word(t[0], stop));
  CHECK(is_content_word(t[1], stop));
  CHECK_FALSE(is_content_word(t[2], stop));
  CHECK_FALSE(is_content_word(t[3], stop));

  const auto shipped = Stoplist::load_file(std::string(BOLDLINE_DATA_DIR) + "/stoplist.txt");
  for (const char* w : {"she", "he", "in", "and", "the", "is", "of"}) CHECK(shipped.contains(w));
  CHECK_FALSE(shipped.contains("angry"));
}

TEST_CASE("find_mentions") {
  const auto t = tokenize("As a religion, Islam emphasizes the");
  const auto m = find_mentions(t, "Islam");
  REQUIRE(m.size() == 1);
  CHECK(m[0].start == 4);
  CHECK(m[0].end == 4);

  CHECK(find_mentions(tokenize("a b c"), "d").empty());
  const auto twice = find_mentions(tokenize("nurse nurse"), "nurse");
  REQUIRE(twice.size() == 2);
  CHECK(twice[0].start == 0);
  CHECK(twice[1].start == 1);

  const auto multi = find_mentions(tokenize("The Flight  Nurse arrived"), "flight nurse");
  REQUIRE(multi.size() == 1);
  CHECK(multi[0].start == 1);
  CHECK(multi[0].end == 2);
}

TEST_CASE("find_mentions agrees with a brute-force scan") {
  std::mt19937 rng(11);
  const std::vector<std::string> vocab = {"a", "b", "A", "c", ","};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text, term;
    const int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int i = 0; i < n; ++i) text += vocab[std::uniform_int_distribution<std::size_t>(0, 4)(rng)] + " ";
    const int k = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int i = 0; i < k; ++i) term += std::string(i ? " " : "") + (std::uniform_int_distribution<int>(0, 1)(rng) ? "a" : "b");

    const auto tokens = tokenize(text);
    const auto term_tokens = tokenize(term);
    std::vector<std::size_t> expected;
    for (std::size_t s = 0; s + term_tokens.size() <= tokens.size(); ++s) {
      bool ok = true;
      for (std::size_t j = 0; j < term_tokens.size(); ++j) ok = ok && tokens[s + j].lower == term_tokens[j].lower;
      if (ok) expected.push_back(s);
    }
    std::vector<std::size_t> got;
    for (const auto& span : find_mentions(tokens, term)) {
      got.push_back(span.start);
      CHECK(span.end == span.start + term_tokens.size() - 1);
      CHECK(span.end < tokens.size());
      CHECK(fold_case(span.text) == fold_case(term));
    }
    CHECK(got == expected);
  }
}
