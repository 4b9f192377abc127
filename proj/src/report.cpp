#include "boldline/report.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "boldline/error.hpp"
#include "boldline/stats.hpp"

namespace boldline {
namespace {

using nlohmann::ordered_json;

std::string render(const Cell& cell) {
  if (!cell.csv.empty()) return cell.csv;
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "NA";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          if (cell.decimals < 0) return fmt::format("{}", v);
          auto s = fmt::format("{:.{}f}", v, cell.decimals);
          if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
          return s;
        }
      },
      cell.value);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json to_json_value(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else return v;
      },
      cell.value);
}

Cell proportion(std::int64_t count, std::int64_t total) {
  if (total <= 0) return Cell::na();
  return Cell::real(static_cast<double>(count) / static_cast<double>(total));
}

double share(std::int64_t count, std::int64_t total) {
  return total > 0 ? static_cast<double>(count) / static_cast<double>(total) : 0.0;
}

std::size_t sentiment_index(SentimentLabel l) {
  switch (l) {
    case SentimentLabel::positive: return 0;
    case SentimentLabel::neutral: return 1;
    case SentimentLabel::negative: return 2;
  }
  return 1;
}

std::size_t gender_index(GenderLabel l) {
  switch (l) {
    case GenderLabel::male: return 0;
    case GenderLabel::female: return 1;
    case GenderLabel::neutral: return 2;
  }
  return 2;
}

constexpr std::array<std::string_view, 3> kSentimentNames = {"positive", "neutral", "negative"};
constexpr std::array<GenderMethod, 3> kMethods = {GenderMethod::unigram, GenderMethod::wavg, GenderMethod::max};

std::vector<Cell> key_cells(const CellKey& key) {
  return {Cell::text(std::get<0>(key)), Cell::text(std::get<1>(key)), Cell::text(std::get<2>(key))};
}

ReportTable gender_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"gender_polarity",
                {"domain", "group", "source", "metric", "total", "male #", "female #", "neutral #", "male",
                 "female", "male : female"},
                {}};
  for (const auto& [key, c] : cells) {
    for (std::size_t m = 0; m < kMethods.size(); ++m) {
      const auto& g = c.gender[m];
      auto row = key_cells(key);
      row.push_back(Cell::text(std::string(to_string(kMethods[m]))));
      row.push_back(Cell::count(c.total));
      row.push_back(Cell::count(g[0]));
      row.push_back(Cell::count(g[1]));
      row.push_back(Cell::count(g[2]));
      row.push_back(proportion(g[0], c.total));
      row.push_back(proportion(g[1], c.total));
      row.push_back(Cell::ratio(g[0], g[1]));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

ReportTable sentiment_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"sentiment",
                {"domain", "group", "source", "total", "positive #", "neutral #", "negative #", "positive",
                 "neutral", "negative"},
                {}};
  for (const auto& [key, c] : cells) {
    auto row = key_cells(key);
    row.push_back(Cell::count(c.total));
    for (auto n : c.sentiment) row.push_back(Cell::count(n));
    for (auto n : c.sentiment) row.push_back(proportion(n, c.total));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable toxicity_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"toxicity", {"domain", "group", "source", "evaluated", "toxic texts", "toxic proportion"}, {}};
  for (auto name : kToxicityLabelNames) t.header.push_back(std::string(name) + " #");
  for (const auto& [key, c] : cells) {
    auto row = key_cells(key);
    row.push_back(Cell::count(c.toxicity_evaluated));
    row.push_back(Cell::count(c.toxic));
    row.push_back(proportion(c.toxic, c.toxicity_evaluated));
    for (auto n : c.toxicity_flags) row.push_back(Cell::count(n));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// "other" is excluded from the proportion denominator.
ReportTable regard_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"regard",
                {"domain", "group", "source", "evaluated", "positive #", "negative #", "neutral #", "other #",
                 "positive", "negative", "neutral"},
                {}};
  for (const auto& [key, c] : cells) {
    if (c.regard_evaluated == 0) continue;
    auto row = key_cells(key);
    row.push_back(Cell::count(c.regard_evaluated));
    for (auto n : c.regard) row.push_back(Cell::count(n));
    const auto rated = c.regard_evaluated - c.regard[3];
    for (std::size_t k = 0; k < 3; ++k) row.push_back(proportion(c.regard[k], rated));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ReportTable norm_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"norms", {"domain", "group", "source", "total"}, {}};
  for (auto cat : kAllNormCategories) t.header.push_back(std::string(to_string(cat)) + " #");
  for (auto cat : kAllNormCategories) t.header.push_back(std::string(to_string(cat)));
  for (const auto& [key, c] : cells) {
    auto row = key_cells(key);
    row.push_back(Cell::count(c.total));
    for (auto n : c.norms) row.push_back(Cell::count(n));
    for (auto n : c.norms) row.push_back(proportion(n, c.total));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// Percentage-point differences, group_a minus group_b, for every group pair
// sharing a domain and source.
ReportTable norm_difference_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"norm_differences", {"domain", "source", "group_a", "group_b"}, {}};
  for (auto cat : kAllNormCategories) t.header.push_back(std::string(to_string(cat)));
  for (auto a = cells.begin(); a != cells.end(); ++a) {
    for (auto b = std::next(a); b != cells.end(); ++b) {
      const auto& [da, ga, sa] = a->first;
      const auto& [db, gb, sb] = b->first;
      if (da != db || sa != sb) continue;
      std::vector<Cell> row = {Cell::text(da), Cell::text(sa), Cell::text(ga), Cell::text(gb)};
      for (std::size_t k = 0; k < kNormCategories; ++k)
        row.push_back(Cell::real(
            100.0 * (share(a->second.norms[k], a->second.total) - share(b->second.norms[k], b->second.total)), 2));
      t.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(t.rows.begin(), t.rows.end(), [](const auto& x, const auto& y) {
    return std::tie(std::get<std::string>(x[0].value), std::get<std::string>(x[1].value)) <
           std::tie(std::get<std::string>(y[0].value), std::get<std::string>(y[1].value));
  });
  return t;
}

struct Binary {
  std::string metric;
  std::string category;
  std::int64_t (*hits)(const GroupCounts&);
  std::int64_t (*trials)(const GroupCounts&);
};

const std::vector<Binary>& binary_categories() {
  static const std::vector<Binary> list = [] {
    std::vector<Binary> b = {
        {"sentiment", "positive", [](const GroupCounts& c) { return c.sentiment[0]; },
         [](const GroupCounts& c) { return c.total; }},
        {"sentiment", "negative", [](const GroupCounts& c) { return c.sentiment[2]; },
         [](const GroupCounts& c) { return c.total; }},
        {"toxicity", "toxic", [](const GroupCounts& c) { return c.toxic; },
         [](const GroupCounts& c) { return c.toxicity_evaluated; }},
        {"regard", "positive", [](const GroupCounts& c) { return c.regard[0]; },
         [](const GroupCounts& c) { return c.regard_evaluated - c.regard[3]; }},
        {"regard", "negative", [](const GroupCounts& c) { return c.regard[1]; },
         [](const GroupCounts& c) { return c.regard_evaluated - c.regard[3]; }},
        {"gender_unigram", "male", [](const GroupCounts& c) { return c.gender[0][0]; },
         [](const GroupCounts& c) { return c.total; }},
        {"gender_unigram", "female", [](const GroupCounts& c) { return c.gender[0][1]; },
         [](const GroupCounts& c) { return c.total; }},
        {"gender_wavg", "male", [](const GroupCounts& c) { return c.gender[1][0]; },
         [](const GroupCounts& c) { return c.total; }},
        {"gender_wavg", "female", [](const GroupCounts& c) { return c.gender[1][1]; },
         [](const GroupCounts& c) { return c.total; }},
        {"gender_max", "male", [](const GroupCounts& c) { return c.gender[2][0]; },
         [](const GroupCounts& c) { return c.total; }},
        {"gender_max", "female", [](const GroupCounts& c) { return c.gender[2][1]; },
         [](const GroupCounts& c) { return c.total; }},
    };
    return b;
  }();
  return list;
}

// Two groups: pooled z-test. Three or more: chi-square over group x {hit, miss}.
// Degenerate tables are left out.
ReportTable test_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"tests", {"domain", "source", "metric", "category", "test", "groups", "statistic", "dof", "p_value"}, {}};

  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, const GroupCounts*>>> slices;
  for (const auto& [key, c] : cells) slices[{std::get<0>(key), std::get<2>(key)}].push_back({std::get<1>(key), &c});

  for (const auto& [slice, groups] : slices) {
    const auto& [domain, source] = slice;

    for (const auto& cat : binary_categories()) {
      std::vector<std::pair<std::string, const GroupCounts*>> tested;
      for (const auto& g : groups)
        if (cat.trials(*g.second) > 0) tested.push_back(g);
      if (tested.size() < 2) continue;

      std::string names;
      for (const auto& g : tested) names += (names.empty() ? "" : ";") + g.first;

      std::vector<Cell> row = {Cell::text(domain), Cell::text(source), Cell::text(cat.metric), Cell::text(cat.category)};
      if (tested.size() == 2) {
        const auto& a = *tested[0].second;
        const auto& b = *tested[1].second;
        const auto r = two_proportion_test(cat.hits(a), cat.trials(a), cat.hits(b), cat.trials(b));
        row.insert(row.end(), {Cell::text("two_proportion_z"), Cell::text(names), Cell::real(r.z), Cell::na(),
                               Cell::real(r.p_two_sided)});
      } else {
        CountMatrix m(static_cast<Eigen::Index>(tested.size()), 2);
        for (std::size_t i = 0; i < tested.size(); ++i) {
          const auto hits = cat.hits(*tested[i].second);
          m(static_cast<Eigen::Index>(i), 0) = hits;
          m(static_cast<Eigen::Index>(i), 1) = cat.trials(*tested[i].second) - hits;
        }
        try {
          const auto r = chi_square_test(m);
          row.insert(row.end(), {Cell::text("chi_square"), Cell::text(names), Cell::real(r.stat),
                                 Cell::count(r.dof), Cell::real(r.p)});
        } catch (const DegenerateTable&) {
          continue;
        }
      }
      t.rows.push_back(std::move(row));
    }

    // Full sentiment distribution, dropping empty label columns.
    if (groups.size() >= 2) {
      std::vector<std::size_t> columns;
      for (std::size_t k = 0; k < 3; ++k) {
        std::int64_t sum = 0;
        for (const auto& g : groups) sum += g.second->sentiment[k];
        if (sum > 0) columns.push_back(k);
      }
      if (columns.size() >= 2) {
        CountMatrix m(static_cast<Eigen::Index>(groups.size()), static_cast<Eigen::Index>(columns.size()));
        std::string names;
        for (std::size_t i = 0; i < groups.size(); ++i) {
          names += (names.empty() ? "" : ";") + groups[i].first;
          for (std::size_t j = 0; j < columns.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = groups[i].second->sentiment[columns[j]];
        }
        try {
          const auto r = chi_square_test(m);
          t.rows.push_back({Cell::text(domain), Cell::text(source), Cell::text("sentiment"), Cell::text("all"),
                            Cell::text("chi_square"), Cell::text(names), Cell::real(r.stat), Cell::count(r.dof),
                            Cell::real(r.p)});
        } catch (const DegenerateTable&) {
        }
      }
    }
  }
  return t;
}

ReportTable plot_table(const std::map<CellKey, GroupCounts>& cells) {
  ReportTable t{"plot_data", {"domain", "group", "source", "category", "proportion"}, {}};
  auto add = [&](const CellKey& key, std::string category, std::int64_t n, std::int64_t total) {
    if (total <= 0) return;
    auto row = key_cells(key);
    row.push_back(Cell::text(std::move(category)));
    row.push_back(proportion(n, total));
    t.rows.push_back(std::move(row));
  };
  for (const auto& [key, c] : cells) {
    for (std::size_t k = 0; k < 3; ++k) add(key, "sentiment_" + std::string(kSentimentNames[k]), c.sentiment[k], c.total);
    add(key, "toxic", c.toxic, c.toxicity_evaluated);
    for (std::size_t k = 0; k < 3; ++k)
      add(key, "regard_" + std::string(kRegardLabelNames[k]), c.regard[k], c.regard_evaluated - c.regard[3]);
    for (std::size_t m = 0; m < kMethods.size(); ++m) {
      add(key, fmt::format("gender_{}_male", to_string(kMethods[m])), c.gender[m][0], c.total);
      add(key, fmt::format("gender_{}_female", to_string(kMethods[m])), c.gender[m][1], c.total);
    }
    for (std::size_t k = 0; k < kNormCategories; ++k)
      add(key, "norm_" + std::string(to_string(kAllNormCategories[k])), c.norms[k], c.total);
  }
  return t;
}

}  // namespace

void GroupCounts::add(const TextEvaluation& e) {
  ++total;
  ++sentiment[sentiment_index(e.sentiment_label)];
  if (e.toxicity) {
    ++toxicity_evaluated;
    toxic += e.toxicity->is_toxic ? 1 : 0;
    for (std::size_t i = 0; i < kToxicityLabels; ++i) toxicity_flags[i] += e.toxicity->flags[i] ? 1 : 0;
  }
  if (e.regard && e.regard->applicable) {
    ++regard_evaluated;
    ++regard[static_cast<std::size_t>(e.regard->label)];
  }
  for (std::size_t m = 0; m < 3; ++m) ++gender[m][gender_index(e.gender[m].label)];
  for (const auto c : e.norm_categories) ++norms[static_cast<std::size_t>(c)];
}

GroupCounts& GroupCounts::operator+=(const GroupCounts& o) {
  total += o.total;
  for (std::size_t k = 0; k < 3; ++k) sentiment[k] += o.sentiment[k];
  toxicity_evaluated += o.toxicity_evaluated;
  toxic += o.toxic;
  for (std::size_t k = 0; k < kToxicityLabels; ++k) toxicity_flags[k] += o.toxicity_flags[k];
  regard_evaluated += o.regard_evaluated;
  for (std::size_t k = 0; k < 4; ++k) regard[k] += o.regard[k];
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t k = 0; k < 3; ++k) gender[m][k] += o.gender[m][k];
  for (std::size_t k = 0; k < kNormCategories; ++k) norms[k] += o.norms[k];
  return *this;
}

std::map<CellKey, GroupCounts> aggregate(std::span<const TextEvaluation> evaluations) {
  std::map<CellKey, GroupCounts> cells;
  for (const auto& e : evaluations) cells[{e.domain, e.group, e.source}].add(e);
  return cells;
}

std::string format_ratio(std::int64_t male, std::int64_t female) {
  if (female <= 0 || male < 0) return "NA";
  const std::int64_t hundredths = male * 100 / female;
  return fmt::format("{}.{:02}", hundredths / 100, hundredths % 100);
}

Cell Cell::ratio(std::int64_t male, std::int64_t female) {
  if (female <= 0 || male < 0) return na();
  Cell c = real(static_cast<double>(male) / static_cast<double>(female));
  c.csv = format_ratio(male, female);
  return c;
}

std::string ReportTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(render(row[i]));
    out += '\n';
  }
  return out;
}

const ReportTable* ReportBundle::find(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

std::string ReportBundle::to_json() const {
  ordered_json root = ordered_json::object();
  for (const auto& t : tables) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json obj = ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = to_json_value(row[i]);
      rows.push_back(std::move(obj));
    }
    root[t.name] = std::move(rows);
  }
  return root.dump(2) + "\n";
}

ReportBundle build_reports(std::span<const TextEvaluation> evaluations) {
  const auto cells = aggregate(evaluations);
  ReportBundle bundle;
  bundle.tables.push_back(gender_table(cells));
  bundle.tables.push_back(sentiment_table(cells));
  bundle.tables.push_back(toxicity_table(cells));
  bundle.tables.push_back(regard_table(cells));
  bundle.tables.push_back(norm_table(cells));
  bundle.tables.push_back(norm_difference_table(cells));
  bundle.tables.push_back(test_table(cells));
  bundle.tables.push_back(plot_table(cells));
  return bundle;
}

ReportBundle make_reports(std::span<const TextEvaluation> evaluations, const ReportSpec& spec) {
  auto bundle = build_reports(evaluations);
  std::filesystem::create_directories(spec.out_dir);
  auto write = [&](const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed: " + path.string());
  };
  for (const auto& t : bundle.tables) write(spec.out_dir / (t.name + ".csv"), t.to_csv());
  write(spec.out_dir / "report.json", bundle.to_json());
  return bundle;
}

}  // namespace boldline
