#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace boldline {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct ContingencyTable {
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  CountMatrix counts;
};

struct ProportionTest {
  double z = 0.0;
  double p_two_sided = 1.0;
};

struct ChiSquareTest {
  double stat = 0.0;
  int dof = 0;
  double p = 1.0;
};

// Standard normal upper tail P(Z > z), computed with erfc.
double normal_sf(double z);

/// Pooled-variance z-test for x1/n1 vs x2/n2, no continuity correction.
ProportionTest two_proportion_test(std::int64_t x1, std::int64_t n1, std::int64_t x2, std::int64_t n2);

/// Pearson chi-square test of independence. Throws DegenerateTable for a zero
/// row or column marginal, or when (r-1)(c-1) = 0.
ChiSquareTest chi_square_test(const CountMatrix& observed);
inline ChiSquareTest chi_square_test(const ContingencyTable& table) { return chi_square_test(table.counts); }

// Average ranks, 1-based; ties share their mean rank.
Eigen::VectorXd average_ranks(std::span<const double> values);

double spearman_rho(std::span<const double> x, std::span<const double> y);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct ClassificationReport {
  double accuracy = 0.0;
  std::map<std::string, ClassScores> per_class;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
};

/// Per-class scores with averages weighted by truth-class support. Undefined
/// precision (no predictions of a class) counts as 0.
ClassificationReport weighted_prf(std::span<const std::string> truth, std::span<const std::string> pred);

}  // namespace boldline
