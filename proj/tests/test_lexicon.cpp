#include <doctest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "boldline/error.hpp"
#include "boldline/lexicon.hpp"
#include "support.hpp"

using namespace boldline;
using doctest::Approx;

namespace {

const char* kHeader = "word\tvalence\tarousal\tdominance\tjoy\tanger\tsadness\tfear\tdisgust\n";

const VaderScorer& vader() {
  static const VaderScorer scorer = VaderScorer::load_file(std::string(BOLDLINE_DATA_DIR) + "/vader_lexicon.txt");
  return scorer;
}

}  // namespace

TEST_CASE("norm lexicon round trip") {
  std::istringstream in(std::string(kHeader) + "happy\t8.21\t6.49\t7.21\t4.8\t1.1\t1.1\t1.2\t1.1\n");
  const auto lex = NormLexicon::load(in);
  REQUIRE(lex.size() == 1);
  const auto* e = lex.find("happy");
  REQUIRE(e);
  CHECK((*e)[NormVariable::valence] == 8.21);
  CHECK((*e)[NormVariable::joy] == 4.8);
  CHECK((*e)[NormVariable::disgust] == 1.1);
  CHECK_FALSE(lex.find("sad"));
}

TEST_CASE("norm lexicon errors") {
  SUBCASE("out of scale value names its line") {
    std::istringstream in(std::string(kHeader) + "ok\t5\t5\t5\t1\t1\t1\t1\t1\nbad\t9.5\t5\t5\t1\t1\t1\t1\t1\n");
    try {
      NormLexicon::load(in);
      FAIL("expected RangeError");
    } catch (const RangeError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("BE5 above 5") {
    std::istringstream in(std::string(kHeader) + "bad\t5\t5\t5\t5.5\t1\t1\t1\t1\n");
    CHECK_THROWS_AS(NormLexicon::load(in), RangeError);
  }
  SUBCASE("wrong field count") {
    std::istringstream in(std::string(kHeader) + "bad\t5\t5\n");
    CHECK_THROWS_AS(NormLexicon::load(in), ParseError);
  }
  SUBCASE("bad header") {
    std::istringstream in("word\tv\n");
    CHECK_THROWS_AS(NormLexicon::load(in), ParseError);
  }
  SUBCASE("duplicate word") {
    std::istringstream in(std::string(kHeader) + "a\t5\t5\t5\t1\t1\t1\t1\t1\na\t5\t5\t5\t1\t1\t1\t1\t1\n");
    CHECK_THROWS_AS(NormLexicon::load(in), ParseError);
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    CHECK(NormLexicon::load(in).size() == 0);
  }
}

TEST_CASE("rescaling") {
  CHECK(rescale_vad(5) == 0.0);
  CHECK(rescale_vad(9) == 1.0);
  CHECK(rescale_vad(1) == -1.0);
  CHECK(rescale_vad(7) == 0.5);
  CHECK(rescale_be5(1) == 0.0);
  CHECK(rescale_be5(5) == 1.0);
  CHECK(rescale_be5(3) == 0.5);
  CHECK_THROWS_AS(rescale_vad(0.99), RangeError);
  CHECK_THROWS_AS(rescale_vad(9.01), RangeError);
  CHECK_THROWS_AS(rescale_be5(5.5), RangeError);
  CHECK(rescale(NormVariable::valence, 9) == 1.0);
  CHECK(rescale(NormVariable::fear, 5) == 1.0);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> vad(1, 9), be5(1, 5);
  for (int i = 0; i < 1000; ++i) {
    const double a = vad(rng), b = vad(rng);
    CHECK((a < b) == (rescale_vad(a) < rescale_vad(b)));
    CHECK(unscale_vad(rescale_vad(a)) == Approx(a).epsilon(1e-15));
    const double c = be5(rng);
    CHECK(unscale_be5(rescale_be5(c)) == Approx(c).epsilon(1e-15));
  }
}

TEST_CASE("sentiment scorer basics") {
  CHECK(sentiment_score({}, vader()).value == 0.0);
  CHECK(sentiment_score(tokenize("zxq qqq"), vader()).value == 0.0);
  const auto t = tokenize("The food was really good!");
  CHECK(sentiment_score(t, vader()).value == sentiment_score(tokenize("The food was really good!"), vader()).value);
  CHECK(sentiment_score(tokenize("good"), vader()).value > 0);
  CHECK(sentiment_score(tokenize("not good"), vader()).value < 0);
  CHECK(sentiment_score(tokenize("very good"), vader()).value > sentiment_score(tokenize("good"), vader()).value);
}

TEST_CASE("sentiment agrees with reference VADER scores") {
  const auto rows = nlohmann::json::parse(test::read_file(test::data_dir() / "vader_reference.json"));
  REQUIRE(rows.size() == 50);
  for (const auto& row : rows) {
    const auto text = row["text"].get<std::string>();
    const double expected = row["compound"].get<double>();
    INFO(text);
    CHECK(std::abs(vader().score(tokenize(text)).value - expected) <= 0.05);
  }
}

TEST_CASE("sentiment is bounded") {
  std::mt19937 rng(9);
  const std::vector<std::string> vocab = {"good", "GREAT", "not", "very", "bad", "but", "!", "?", "kind of", "hate",
                                          "love", "never", "the", "extremely", "awful", "no"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int i = 0; i < n; ++i) text += vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)] + " ";
    const double v = vader().score(tokenize(text)).value;
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
}
