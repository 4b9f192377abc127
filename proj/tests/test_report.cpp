#include <doctest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "boldline/error.hpp"
#include "boldline/evaluation_io.hpp"
#include "boldline/report.hpp"
#include "support.hpp"

using namespace boldline;
using doctest::Approx;

namespace {

TextEvaluation evaluation(std::string group, GenderLabel unigram, SentimentLabel sentiment = SentimentLabel::neutral,
                          std::vector<NormCategory> norms = {}, std::string domain = "gender",
                          std::string source = "wiki") {
  TextEvaluation e;
  e.text_id = domain + "/" + group;
  e.domain = std::move(domain);
  e.group = std::move(group);
  e.source = std::move(source);
  e.sentiment_label = sentiment;
  e.gender[0] = {GenderMethod::unigram, 0.0, unigram, 0, 0};
  e.gender[1].method = GenderMethod::wavg;
  e.gender[2].method = GenderMethod::max;
  e.norm_categories = std::move(norms);
  return e;
}

std::string cell(const ReportTable& t, std::size_t row, std::string_view column) {
  const auto csv = t.to_csv();
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::vector<std::string>> grid;
  while (std::getline(lines, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream s(line);
    while (std::getline(s, field, ',')) fields.push_back(field);
    grid.push_back(fields);
  }
  for (std::size_t i = 0; i < grid[0].size(); ++i)
    if (grid[0][i] == column) return grid.at(row + 1).at(i);
  return "<missing column>";
}

}  // namespace

TEST_CASE("ratio formatting") {
  CHECK(format_ratio(145, 101) == "1.43");
  CHECK(format_ratio(3, 0) == "NA");
  CHECK(format_ratio(0, 7) == "0.00");
  CHECK(format_ratio(1, 3) == "0.33");
  CHECK(format_ratio(2, 3) == "0.66");
  CHECK(format_ratio(29, 100) == "0.29");
  CHECK(format_ratio(300, 2) == "150.00");
}

TEST_CASE("gender polarity table") {
  std::vector<TextEvaluation> evals;
  for (int i = 0; i < 145; ++i) evals.push_back(evaluation("American_actors", GenderLabel::male));
  for (int i = 0; i < 101; ++i) evals.push_back(evaluation("American_actors", GenderLabel::female));
  for (int i = 0; i < 4; ++i) evals.push_back(evaluation("American_actresses", GenderLabel::male));
  const auto bundle = build_reports(evals);
  const auto* t = bundle.find("gender_polarity");
  REQUIRE(t);
  CHECK(std::find(t->header.begin(), t->header.end(), "male : female") != t->header.end());
  CHECK(cell(*t, 0, "metric") == "unigram");
  CHECK(cell(*t, 0, "male #") == "145");
  CHECK(cell(*t, 0, "female #") == "101");
  CHECK(cell(*t, 0, "male : female") == "1.43");
  CHECK(cell(*t, 3, "male : female") == "NA");

  const auto json = nlohmann::json::parse(bundle.to_json());
  CHECK(json["gender_polarity"][0]["male : female"].get<double>() == Approx(145.0 / 101.0).epsilon(1e-15));
  CHECK(json["gender_polarity"][3]["male : female"].is_null());
}

TEST_CASE("norm differences are percentage points a minus b") {
  std::vector<TextEvaluation> evals;
  for (int i = 0; i < 100; ++i) {
    evals.push_back(evaluation("christianity", GenderLabel::neutral, SentimentLabel::neutral,
                               i < 3 ? std::vector<NormCategory>{NormCategory::anger} : std::vector<NormCategory>{},
                               "religious_belief"));
    evals.push_back(evaluation("islam", GenderLabel::neutral, SentimentLabel::neutral,
                               i < 5 ? std::vector<NormCategory>{NormCategory::anger} : std::vector<NormCategory>{},
                               "religious_belief"));
  }
  const auto bundle = build_reports(evals);
  const auto* t = bundle.find("norm_differences");
  REQUIRE(t);
  REQUIRE(t->rows.size() == 1);
  CHECK(cell(*t, 0, "group_a") == "christianity");
  CHECK(cell(*t, 0, "group_b") == "islam");
  CHECK(cell(*t, 0, "anger") == "-2.00");
  CHECK(cell(*t, 0, "joy") == "0.00");
}

TEST_CASE("proportions sum to one and aggregation is order insensitive") {
  std::mt19937 rng(31);
  std::vector<TextEvaluation> evals;
  const std::vector<std::string> groups = {"a", "b", "c"};
  for (int i = 0; i < 300; ++i) {
    auto e = evaluation(groups[i % 3], static_cast<GenderLabel>(std::uniform_int_distribution<int>(0, 2)(rng)),
                        static_cast<SentimentLabel>(std::uniform_int_distribution<int>(0, 2)(rng)));
    if (i % 2) {
      ToxicityResult tox;
      tox.flags[2] = i % 5 == 0;
      tox.is_toxic = tox.flags[2];
      e.toxicity = tox;
    }
    evals.push_back(e);
  }
  const auto cells = aggregate(evals);
  for (const auto& [key, c] : cells) {
    CHECK(c.sentiment[0] + c.sentiment[1] + c.sentiment[2] == c.total);
    for (const auto& g : c.gender) CHECK(g[0] + g[1] + g[2] == c.total);
  }

  const auto reference = build_reports(evals).to_json();
  for (int trial = 0; trial < 3; ++trial) {
    std::shuffle(evals.begin(), evals.end(), rng);
    CHECK(build_reports(evals).to_json() == reference);
  }

  // Partial aggregation merged with += equals the single fold.
  const std::size_t half = evals.size() / 2;
  auto left = aggregate(std::span(evals).first(half));
  const auto right = aggregate(std::span(evals).subspan(half));
  for (const auto& [key, c] : right) left[key] += c;
  const auto whole = aggregate(evals);
  for (const auto& [key, c] : whole) {
    CHECK(left[key].total == c.total);
    CHECK(left[key].sentiment == c.sentiment);
    CHECK(left[key].gender == c.gender);
    CHECK(left[key].toxic == c.toxic);
  }

  const auto bundle = build_reports(evals);
  const auto* tests = bundle.find("tests");
  REQUIRE(tests);
  CHECK_FALSE(tests->rows.empty());
}

TEST_CASE("regard table excludes inapplicable groups and other from proportions") {
  std::vector<TextEvaluation> evals;
  auto add = [&](std::string group, RegardLabel label, bool applicable) {
    auto e = evaluation(std::move(group), GenderLabel::neutral);
    e.regard = RegardResult{label, applicable};
    e.toxicity = ToxicityResult{};
    evals.push_back(e);
  };
  add("American_actors", RegardLabel::positive, true);
  add("American_actors", RegardLabel::negative, true);
  add("American_actors", RegardLabel::other, true);
  add("American_actors", RegardLabel::neutral, true);
  add("Asian_Americans", RegardLabel::neutral, false);
  const auto bundle = build_reports(evals);
  const auto* t = bundle.find("regard");
  REQUIRE(t);
  REQUIRE(t->rows.size() == 1);
  CHECK(cell(*t, 0, "group") == "American_actors");
  CHECK(cell(*t, 0, "evaluated") == "4");
  CHECK(cell(*t, 0, "other #") == "1");
  CHECK(std::stod(cell(*t, 0, "positive")) == Approx(1.0 / 3.0));
}

TEST_CASE("empty evaluations give empty but valid reports") {
  const auto dir = test::scratch_dir("report-empty");
  const auto bundle = make_reports({}, {dir});
  CHECK(bundle.tables.size() == 8);
  for (const auto& t : bundle.tables) {
    CHECK(t.rows.empty());
    const auto csv = test::read_file(dir / (t.name + ".csv"));
    CHECK(csv == t.to_csv());
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  }
  const auto json = nlohmann::json::parse(test::read_file(dir / "report.json"));
  CHECK(json.size() == 8);
}

TEST_CASE("evaluation records round trip") {
  auto e = evaluation("American_actors", GenderLabel::male, SentimentLabel::positive, {NormCategory::joy});
  e.text = "Person said \"hi\"";
  e.sentiment.value = 0.6369;
  e.gender[1] = {GenderMethod::wavg, -0.6090909090909091, GenderLabel::male, 0, 0};
  e.gender[0].male_count = 2;
  e.norms.values[3] = 0.51;
  e.norms.n_used = 2;
  ToxicityResult tox;
  tox.flags[0] = true;
  tox.is_toxic = true;
  e.toxicity = tox;
  e.regard = RegardResult{RegardLabel::negative, true};

  const auto line = to_json_line(e);
  CHECK(line.find('\n') == std::string::npos);
  const auto back = parse_evaluation(line);
  CHECK(to_json_line(back) == line);
  CHECK(back.gender[1].score == e.gender[1].score);
  CHECK(back.toxicity->flags[0]);
  CHECK(back.regard->label == RegardLabel::negative);

  e.toxicity.reset();
  e.regard.reset();
  const auto bare = nlohmann::json::parse(to_json_line(e));
  CHECK_FALSE(bare.contains("toxicity"));
  CHECK_FALSE(bare.contains("regard"));
  CHECK(bare.contains("norms"));

  std::istringstream in(line + "\n\n" + line + "\n{broken\n");
  try {
    read_evaluations(in);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line() == 4);
  }
}
