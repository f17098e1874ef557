#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "catreg/mutual_information.hpp"
#include "oracles.hpp"

using namespace catreg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected catreg::Error");
  return ErrorCode::InvalidArgument;
}

std::vector<std::vector<double>> joint_of(const MITargetSpec& s) {
  std::vector<std::vector<double>> t(s.rows(), std::vector<double>(s.cols()));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) t[i][j] = s.t(i, j);
  return t;
}

// Product target zeta eta^T built from random positive margins.
MITargetSpec random_product_target(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::vector<double> r(rows), c(cols);
  double rs = 0, cs = 0;
  for (auto& v : r) rs += (v = w(rng));
  for (auto& v : c) cs += (v = w(rng));
  std::vector<double> t;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t.push_back((r[i] / rs) * (c[j] / cs));
  return MITargetSpec::from_joint(rows, cols, std::move(t));
}

}  // namespace

TEST_CASE("uniform targets", "[mi]") {
  const auto u = uniform_targets(2, 2);
  for (double v : u.joint()) CHECK(v == 0.25);
  CHECK(u.zeta(0) == 0.5);
  CHECK(u.eta(1) == 0.5);

  const auto row = uniform_targets(1, 3);
  CHECK(row.zeta(0) == 1.0);
  CHECK_THAT(row.t(0, 2), WithinAbs(1.0 / 3.0, 1e-16));
  CHECK_THAT(row.eta(0), WithinAbs(1.0 / 3.0, 1e-16));

  const auto tall = uniform_targets(3, 2);
  CHECK_THAT(tall.zeta(2), WithinAbs(1.0 / 3.0, 1e-16));
  CHECK(tall.eta(0) == 0.5);
}

TEST_CASE("target validation", "[mi]") {
  CHECK_THROWS_AS(MITargetSpec(2, 2, {0.25, 0.25, 0.25, 0.25}, {0.5, 0.5}, {0.6, 0.4}), Error);
  CHECK_THROWS_AS(MITargetSpec::from_joint(2, 2, {0.3, 0.3, 0.3, 0.3}), Error);
  CHECK_THROWS_AS(MITargetSpec::from_joint(2, 2, {-0.1, 0.6, 0.25, 0.25}), Error);
  CHECK(code_of([] { MITargetSpec::from_joint(2, 2, {1.0}); }) == ErrorCode::DimensionMismatch);
  CHECK_NOTHROW(MITargetSpec::from_joint(2, 2, {0.5, 0.0, 0.0, 0.5}));
}

TEST_CASE("plug-in mutual information", "[mi]") {
  CHECK(mi_mle(ContingencyTable::from_rows({{1, 1}, {1, 1}})) == 0.0);
  CHECK_THAT(mi_mle(ContingencyTable::from_rows({{5, 0}, {0, 5}})), WithinAbs(std::log(2.0), 1e-15));
  CHECK_THAT(mi_mle(ContingencyTable::from_rows({{2, 1}, {1, 2}})), WithinAbs(0.05663301226513249, 1e-15));
  // Zero rows contribute nothing.
  CHECK_THAT(mi_mle(ContingencyTable::from_rows({{5, 0}, {0, 0}, {0, 5}})), WithinAbs(std::log(2.0), 1e-15));
}

TEST_CASE("plug-in MI matches a direct double loop", "[mi][property]") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    auto c = oracle::random_table(rng, dim(rng), dim(rng), 20);
    c[0][0] += 1;
    REQUIRE(std::fabs(mi_mle(ContingencyTable::from_rows(c)) - oracle::mi_plugin(c)) <= 1e-12);
  }
}

TEST_CASE("regularized mutual information", "[mi]") {
  const auto diag = ContingencyTable::from_rows({{1, 0}, {0, 1}});
  const MIResult r = mi_regularized(diag, 0.5, uniform_targets(2, 2));
  CHECK_THAT(r.value, WithinAbs(0.1308120359411370, 1e-15));
  CHECK_THAT(r.value, WithinAbs(0.75 * std::log(1.5) + 0.25 * std::log(0.5), 1e-15));
  CHECK(r.cells_elided == 0);
  CHECK_THAT(r.bits(), WithinRel(r.value / std::log(2.0), 1e-15));

  CHECK_THAT(mi_regularized(ContingencyTable::from_rows({{1, 1}, {1, 1}}), 0.3, uniform_targets(2, 2)).value,
             WithinAbs(0.0, 1e-16));

  const auto t = ContingencyTable::from_rows({{3, 0, 2}, {1, 4, 1}});
  const MIResult one = mi_regularized(t, 1.0, uniform_targets(2, 3));
  CHECK(one.value == mi_mle(t));
  CHECK(one.cells_elided == 1);

  // lambda = 0 gives the MI of the target itself.
  const auto target = MITargetSpec::from_joint(2, 2, {0.4, 0.1, 0.1, 0.4});
  CHECK_THAT(mi_regularized(diag, 0.0, target).value,
             WithinAbs(2 * 0.4 * std::log(0.4 / 0.25) + 2 * 0.1 * std::log(0.1 / 0.25), 1e-15));
}

TEST_CASE("regularized MI errors", "[mi]") {
  const auto t = ContingencyTable::from_rows({{1, 2}, {3, 4}});
  CHECK(code_of([&] { mi_regularized(t, 0.5, uniform_targets(3, 2)); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { mi_regularized(t, 1.5, uniform_targets(2, 2)); }) == ErrorCode::InvalidArgument);
  const auto empty_row = ContingencyTable::from_rows({{1, 2}, {0, 0}});
  CHECK(code_of([&] { mi_regularized(empty_row, 1.0, uniform_targets(2, 2)); }) == ErrorCode::ZeroMargin);
  const auto lopsided = MITargetSpec::from_joint(2, 2, {0.5, 0.5, 0.0, 0.0});
  CHECK(code_of([&] { mi_regularized(empty_row, 0.5, lopsided); }) == ErrorCode::ZeroMargin);
  CHECK_NOTHROW(mi_regularized(empty_row, 0.5, uniform_targets(2, 2)));
}

TEST_CASE("zero-count elision", "[mi]") {
  const auto t = ContingencyTable::from_rows({{3, 0}, {1, 2}});
  const auto target = MITargetSpec::from_joint(2, 2, {0.4, 0.0, 0.3, 0.3});
  CHECK(verify_zero_elision(t, 0.5, target));
  CHECK(mi_regularized(t, 0.5, target).cells_elided == 1);

  CHECK(verify_zero_elision(ContingencyTable::from_rows({{1, 1}, {1, 1}}), 0.4, uniform_targets(2, 2)));

  CHECK(code_of([] { verify_zero_elision(ContingencyTable::from_rows({{2, 0}, {0, 0}}), 0.5, uniform_targets(2, 2)); }) ==
        ErrorCode::HypothesisViolated);
  CHECK(code_of([&] { verify_zero_elision(t, 0.5, uniform_targets(2, 2)); }) == ErrorCode::HypothesisViolated);
}

TEST_CASE("regularized MI is nonnegative and vanishes exactly on factorizing joints", "[mi][property]") {
  std::size_t zeros = 0;
  std::size_t checked = 0;
  for (std::size_t rows = 1; rows <= 3; ++rows)
    for (std::size_t cols = 1; cols <= 3; ++cols)
      for (std::int64_t n = 1; n <= 8; ++n)
        oracle::for_each_table_with_total(rows, cols, n, [&](const oracle::Cells& c) {
          const auto t = ContingencyTable::from_rows(c);
          const auto target = uniform_targets(rows, cols);
          for (double lam : {0.3, 0.7, 1.0}) {
            if (lam == 1.0 && !oracle::positive_margins(c)) continue;
            const double mi = mi_regularized(t, lam, target).value;
            REQUIRE(mi >= -1e-12);
            const bool indep = oracle::factorizes(oracle::regularized_joint(c, lam, joint_of(target)));
            REQUIRE((std::fabs(mi) <= 1e-10) == indep);
            zeros += indep;
            ++checked;
          }
        });
  CHECK(zeros > 0);
  CHECK(checked > zeros);
}

TEST_CASE("regularized MI approaches the plug-in value as lambda -> 1", "[mi][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = oracle::random_table(rng, 3, 4, 9);
    if (!oracle::positive_margins(c)) continue;
    const auto t = ContingencyTable::from_rows(c);
    const auto target = random_product_target(rng, 3, 4);
    const double plug = mi_mle(t);
    const double g1 = std::fabs(mi_regularized(t, 0.9, target).value - plug);
    const double g2 = std::fabs(mi_regularized(t, 0.99, target).value - plug);
    const double g3 = std::fabs(mi_regularized(t, 0.999, target).value - plug);
    REQUIRE(g2 <= g1);
    REQUIRE(g3 <= g2);
    REQUIRE(g3 < 0.01);
  }
}

TEST_CASE("regularized MI is symmetric under transposition", "[mi][property]") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rows = static_cast<std::size_t>(dim(rng));
    const auto cols = static_cast<std::size_t>(dim(rng));
    auto c = oracle::random_table(rng, rows, cols, 10);
    c[0][0] += 1;
    const auto t = ContingencyTable::from_rows(c);
    const auto target = random_product_target(rng, rows, cols);
    const double l = lam(rng);
    const double a = mi_regularized(t, l, target).value;
    const double b = mi_regularized(t.transposed(), l, target.transposed()).value;
    REQUIRE(std::fabs(a - b) <= 1e-12);
  }
}

TEST_CASE("zero elision holds on random sparse tables", "[mi][property]") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  int verified = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto rows = static_cast<std::size_t>(dim(rng));
    const auto cols = static_cast<std::size_t>(dim(rng));
    auto c = oracle::random_table(rng, rows, cols, 6);
    c[0][1] = 0;
    if (!oracle::positive_margins(c)) continue;
    std::vector<double> t;
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) total += (t.emplace_back(c[i][j] == 0 ? 0.0 : w(rng)));
    for (double& v : t) v /= total;
    const auto target = MITargetSpec::from_joint(rows, cols, std::move(t));
    REQUIRE(verify_zero_elision(ContingencyTable::from_rows(c), lam(rng), target));
    ++verified;
  }
  CHECK(verified > 100);
}
