#include "boldline/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "boldline/error.hpp"

namespace boldline {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

ProportionTest two_proportion_test(std::int64_t x1, std::int64_t n1, std::int64_t x2, std::int64_t n2) {
  if (n1 <= 0 || n2 <= 0 || x1 < 0 || x2 < 0 || x1 > n1 || x2 > n2)
    throw DomainError(fmt::format("invalid counts ({}/{}, {}/{})", x1, n1, x2, n2));

  const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  if (se == 0.0) return {0.0, 1.0};

  ProportionTest t;
  t.z = (p1 - p2) / se;
  t.p_two_sided = std::min(1.0, 2.0 * normal_sf(std::abs(t.z)));
  return t;
}

ChiSquareTest chi_square_test(const CountMatrix& observed) {
  const auto r = observed.rows();
  const auto c = observed.cols();
  if (r < 2 || c < 2)
    throw DegenerateTable(fmt::format("{}x{} table has no degrees of freedom", r, c));
  if ((observed.array() < 0).any()) throw DomainError("negative count in contingency table");

  const Eigen::MatrixXd o = observed.cast<double>();
  const Eigen::VectorXd row_sums = o.rowwise().sum();
  const Eigen::RowVectorXd col_sums = o.colwise().sum();
  if ((row_sums.array() == 0).any() || (col_sums.array() == 0).any())
    throw DegenerateTable("contingency table has a zero marginal");

  const Eigen::MatrixXd expected = row_sums * col_sums / o.sum();
  ChiSquareTest t;
  t.stat = ((o - expected).array().square() / expected.array()).sum();
  t.dof = static_cast<int>((r - 1) * (c - 1));
  t.p = t.stat <= 0.0 ? 1.0 : boost::math::gamma_q(t.dof / 2.0, t.stat / 2.0);
  return t;
}

Eigen::VectorXd average_ranks(std::span<const double> values) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

  Eigen::VectorXd ranks(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks(static_cast<Eigen::Index>(order[k])) = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("spearman_rho: length mismatch");
  if (x.size() < 2) throw DomainError("spearman_rho: need at least two observations");

  const Eigen::VectorXd rx = average_ranks(x);
  const Eigen::VectorXd ry = average_ranks(y);
  const Eigen::VectorXd dx = rx.array() - rx.mean();
  const Eigen::VectorXd dy = ry.array() - ry.mean();
  const double sx = dx.norm();
  const double sy = dy.norm();
  if (sx == 0.0 || sy == 0.0) throw DomainError("spearman_rho: constant input");
  return std::clamp(dx.dot(dy) / (sx * sy), -1.0, 1.0);
}

ClassificationReport weighted_prf(std::span<const std::string> truth, std::span<const std::string> pred) {
  if (truth.size() != pred.size()) throw DomainError("weighted_prf: length mismatch");
  if (truth.empty()) throw DomainError("weighted_prf: empty input");

  std::map<std::string, std::int64_t> tp, predicted, actual;
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++actual[truth[i]];
    ++predicted[pred[i]];
    if (truth[i] == pred[i]) {
      ++tp[truth[i]];
      ++correct;
    }
  }

  ClassificationReport report;
  const auto n = static_cast<double>(truth.size());
  report.accuracy = static_cast<double>(correct) / n;

  std::map<std::string, std::int64_t> labels = actual;
  for (const auto& [label, count] : predicted) labels.try_emplace(label, 0);

  for (const auto& [label, unused] : labels) {
    ClassScores s;
    s.support = actual.count(label) ? actual[label] : 0;
    const double hits = tp.count(label) ? static_cast<double>(tp[label]) : 0.0;
    const double npred = predicted.count(label) ? static_cast<double>(predicted[label]) : 0.0;
    s.precision = npred > 0 ? hits / npred : 0.0;
    s.recall = s.support > 0 ? hits / static_cast<double>(s.support) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;

    const double weight = static_cast<double>(s.support) / n;
    report.weighted_precision += weight * s.precision;
    report.weighted_recall += weight * s.recall;
    report.weighted_f1 += weight * s.f1;
    report.per_class.emplace(label, s);
  }
  return report;
}

}  // namespace boldline
