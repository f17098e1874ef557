#pragma once

// Sign, homogeneity and McNemar tests in classical and lambda-regularized
// form. A regularized statistic is the classical formula evaluated on
// shrunken probability estimates; under the null hypothesis the statistic
// divided by lambda is asymptotically N(0, 1). Reports always carry the
// lambda-scaled statistic and the p-values computed from it.

#include <cmath>
#include <string_view>
#include <utility>

#include "catreg/error.hpp"
#include "catreg/estimators.hpp"
#include "catreg/normal.hpp"
#include "catreg/table.hpp"

namespace catreg {

enum class Reference { StdNormal, ChiSq1 };

constexpr std::string_view to_string(Reference r) noexcept {
  return r == Reference::StdNormal ? "StdNormal" : "ChiSq1";
}

struct TestReport {
  double statistic = 0.0;         // S*, Z* or T*
  double scaled_statistic = 0.0;  // statistic / lambda
  double lambda = 1.0;
  Reference reference = Reference::StdNormal;
  double p_two_sided = 1.0;
  double p_one_sided_upper = 0.5;
  double p_one_sided_lower = 0.5;
  // Set when the asymptotic N(0, 1) null is not guaranteed for the scaled
  // statistic (sign test shrunk toward a target other than 1/2).
  bool calibration_warning = false;

  /// Square of the scaled statistic, the chi-square(1) form of the test.
  double chi_square() const noexcept { return scaled_statistic * scaled_statistic; }
};

namespace detail {

inline void require_lambda(double lambda) {
  if (lambda == 0.0) fail(ErrorCode::ZeroLambda, "lambda = 0 leaves nothing to scale");
  if (!(lambda > 0.0 && lambda <= 1.0)) fail(ErrorCode::InvalidArgument, "lambda must lie in (0, 1]");
}

inline void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::InvalidArgument, std::string(what) + " must lie in [0, 1]");
}

inline TestReport make_report(double statistic, double lambda) {
  TestReport r;
  r.statistic = statistic;
  r.lambda = lambda;
  r.scaled_statistic = statistic / lambda;
  r.reference = Reference::StdNormal;
  r.p_one_sided_upper = std_normal_sf(r.scaled_statistic);
  r.p_one_sided_lower = std_normal_cdf(r.scaled_statistic);
  r.p_two_sided = std::fmin(1.0, 2.0 * std_normal_cdf(-std::fabs(r.scaled_statistic)));
  return r;
}

inline void require_positive_margins(const ContingencyTable& t) {
  require_2x2(t);
  if (t.row_total(0) == 0 || t.row_total(1) == 0 || t.col_total(0) == 0 || t.col_total(1) == 0)
    fail(ErrorCode::DegenerateMargin, "every row and column total must be positive");
}

inline void require_discordant(const ContingencyTable& t) {
  require_2x2(t);
  if (t(0, 1) + t(1, 0) == 0) fail(ErrorCode::NoDiscordantPairs, "n12 + n21 = 0");
}

// sqrt(n * n.1 * n.2 / (n1. * n2.)), symmetric under swapping rows or columns.
inline double homogeneity_scale(const ContingencyTable& t) {
  const double cols = static_cast<double>(t.col_total(0)) * static_cast<double>(t.col_total(1));
  const double rows = static_cast<double>(t.row_total(0)) * static_cast<double>(t.row_total(1));
  return std::sqrt(static_cast<double>(t.total()) * cols / rows);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sign test, H0: pi = 1/2.

/// S = 2 sqrt(n) (x/n - 1/2).
inline double sign_statistic(const BinomialSample& s) {
  detail::require_trials(s);
  return 2.0 * std::sqrt(static_cast<double>(s.trials())) * (mle(s) - 0.5);
}

/// S* uses pi* = lambda * x/n + (1 - lambda) * pi0 in place of x/n.
inline TestReport sign_regularized(const BinomialSample& s, double lambda, double pi0 = 0.5) {
  detail::require_lambda(lambda);
  detail::require_unit(pi0, "pi0");
  const double pi_star = shrink(s, ShrinkageConfig(lambda, pi0));
  const double stat = 2.0 * std::sqrt(static_cast<double>(s.trials())) * (pi_star - 0.5);
  TestReport r = detail::make_report(stat, lambda);
  r.calibration_warning = pi0 != 0.5;
  return r;
}

// ---------------------------------------------------------------------------
// Homogeneity of two binomial columns, H0: pi_1 = pi_2.

/// Success rates per column, n11 / n.1 and n12 / n.2.
inline std::pair<double, double> group_rates(const ContingencyTable& t) {
  detail::require_positive_margins(t);
  return {static_cast<double>(t(0, 0)) / static_cast<double>(t.col_total(0)),
          static_cast<double>(t(0, 1)) / static_cast<double>(t.col_total(1))};
}

/// Column rates shrunk toward the pooled success rate n1. / n.
inline std::pair<double, double> regularized_group_rates(const ContingencyTable& t, double lambda) {
  detail::require_lambda(lambda);
  const auto [p1, p2] = group_rates(t);
  const double pooled = static_cast<double>(t.row_total(0)) / static_cast<double>(t.total());
  return {lambda * p1 + (1.0 - lambda) * pooled, lambda * p2 + (1.0 - lambda) * pooled};
}

/// Z = (pi2 - pi1) sqrt(n n.1 n.2 / (n1. n2.)); Z^2 is Pearson's chi-square.
inline double homogeneity_z(const ContingencyTable& t) {
  detail::require_positive_margins(t);
  // (n12 n.1 - n11 n.2) / (n.1 n.2) is pi2 - pi1 with a single rounding.
  const Count c1 = t.col_total(0);
  const Count c2 = t.col_total(1);
  // Integer products are exact in long double up to 2^64.
  const long double num = static_cast<long double>(t(0, 1)) * static_cast<long double>(c1) -
                          static_cast<long double>(t(0, 0)) * static_cast<long double>(c2);
  const double diff = static_cast<double>(num) / (static_cast<double>(c1) * static_cast<double>(c2));
  return diff * detail::homogeneity_scale(t);
}

inline TestReport homogeneity_regularized(const ContingencyTable& t, double lambda) {
  const auto [p1, p2] = regularized_group_rates(t, lambda);
  return detail::make_report((p2 - p1) * detail::homogeneity_scale(t), lambda);
}

// ---------------------------------------------------------------------------
// McNemar test of symmetry, H0: pi12 = pi21.

/// T = n (pi12 - pi21) / sqrt(n12 + n21); T^2 = (n12 - n21)^2 / (n12 + n21).
inline double mcnemar_t(const ContingencyTable& t) {
  detail::require_discordant(t);
  const auto n = static_cast<double>(t.total());
  const double p12 = static_cast<double>(t(0, 1)) / n;
  const double p21 = static_cast<double>(t(1, 0)) / n;
  return n * (p12 - p21) / std::sqrt(static_cast<double>(t(0, 1) + t(1, 0)));
}

/// Discordant probabilities shrunk toward a common target tau.
inline std::pair<double, double> regularized_discordant(const ContingencyTable& t, double lambda, double tau) {
  detail::require_discordant(t);
  detail::require_lambda(lambda);
  detail::require_unit(tau, "tau");
  const auto n = static_cast<double>(t.total());
  return {lambda * (static_cast<double>(t(0, 1)) / n) + (1.0 - lambda) * tau,
          lambda * (static_cast<double>(t(1, 0)) / n) + (1.0 - lambda) * tau};
}

inline TestReport mcnemar_regularized(const ContingencyTable& t, double lambda, double tau) {
  const auto [p12, p21] = regularized_discordant(t, lambda, tau);
  const auto n = static_cast<double>(t.total());
  const double stat = n * (p12 - p21) / std::sqrt(static_cast<double>(t(0, 1) + t(1, 0)));
  return detail::make_report(stat, lambda);
}

}  // namespace catreg
