#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "catreg/bootstrap.hpp"

using namespace catreg;
using Catch::Matchers::WithinAbs;

namespace {

BootstrapConfig config(std::int64_t b, std::uint64_t seed, unsigned threads = 0) {
  BootstrapConfig c;
  c.replicates = b;
  c.seed = seed;
  c.threads = threads;
  return c;
}

bool identical(const BootstrapReport& a, const BootstrapReport& b) {
  return a.empirical_quantiles == b.empirical_quantiles && a.rejection_rate == b.rejection_rate &&
         a.p_value == b.p_value && a.degenerate_replicates == b.degenerate_replicates && a.seed == b.seed &&
         a.replicates == b.replicates && a.observed_scaled == b.observed_scaled;
}

void check_monotone(const BootstrapReport& r) {
  for (std::size_t k = 1; k < r.empirical_quantiles.size(); ++k) {
    REQUIRE(r.empirical_quantiles[k - 1].first < r.empirical_quantiles[k].first);
    REQUIRE(r.empirical_quantiles[k - 1].second <= r.empirical_quantiles[k].second);
  }
}

}  // namespace

TEST_CASE("split streams are reproducible and distinct", "[bootstrap][rng]") {
  auto a = SplitMix64::stream(42, 7);
  auto b = SplitMix64::stream(42, 7);
  for (int k = 0; k < 100; ++k) REQUIRE(a() == b());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t k = 0; k < 10000; ++k) firsts.insert(SplitMix64::stream(42, k)());
  CHECK(firsts.size() == 10000);
  CHECK(SplitMix64::stream(1, 0)() != SplitMix64::stream(2, 0)());
}

TEST_CASE("type-1 quantiles", "[bootstrap]") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(type1_quantile(v, 0.05) == 1);
  CHECK(type1_quantile(v, 0.1) == 1);
  CHECK(type1_quantile(v, 0.11) == 2);
  CHECK(type1_quantile(v, 0.5) == 5);
  CHECK(type1_quantile(v, 0.975) == 10);
  std::vector<double> big(10000);
  for (std::size_t k = 0; k < big.size(); ++k) big[k] = static_cast<double>(k + 1);
  CHECK(type1_quantile(big, 0.975) == 9750);
  CHECK(type1_quantile(big, 0.005) == 50);
  CHECK(type1_quantile(big, 0.995) == 9950);
}

TEST_CASE("bootstrap configuration is validated", "[bootstrap]") {
  const auto t = ContingencyTable::from_rows({{10, 20}, {30, 40}});
  try {
    bootstrap_homogeneity(t, 1.0, config(99, 1));
    FAIL("expected InsufficientReplicates");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientReplicates);
  }
  BootstrapConfig bad = config(1000, 1);
  bad.alpha = 1.0;
  CHECK_THROWS_AS(bootstrap_homogeneity(t, 1.0, bad), Error);
  try {
    bootstrap_homogeneity(ContingencyTable::from_rows({{0, 0}, {3, 4}}), 1.0, config(1000, 1));
    FAIL("expected DegenerateMargin");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateMargin);
  }
  try {
    bootstrap_mcnemar(ContingencyTable::from_rows({{3, 0}, {0, 4}}), 1.0, 0.1, config(1000, 1));
    FAIL("expected NoDiscordantPairs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoDiscordantPairs);
  }
}

TEST_CASE("homogeneity bootstrap", "[bootstrap]") {
  const auto t = ContingencyTable::from_rows({{10, 20}, {30, 40}});
  const BootstrapReport r = bootstrap_homogeneity(t, 1.0, config(10000, 42));
  CHECK(r.rejection_rate >= 0.03);
  CHECK(r.rejection_rate <= 0.07);
  CHECK(r.replicates == 10000);
  CHECK(r.seed == 42);
  CHECK_THAT(r.critical_value, WithinAbs(1.959963984540054, 1e-12));
  check_monotone(r);

  const BootstrapReport again = bootstrap_homogeneity(t, 1.0, config(10000, 42));
  CHECK(identical(r, again));

  const BootstrapReport balanced =
      bootstrap_homogeneity(ContingencyTable::from_rows({{5, 5}, {5, 5}}), 0.5, config(1000, 3));
  CHECK(balanced.quantile(0.975) >= 1.5);
  CHECK(balanced.quantile(0.975) <= 2.5);
  check_monotone(balanced);
}

TEST_CASE("lambda rescales the homogeneity statistic but not the bootstrap null", "[bootstrap]") {
  const auto t = ContingencyTable::from_rows({{12, 20}, {28, 40}});
  const BootstrapReport a = bootstrap_homogeneity(t, 1.0, config(2000, 9));
  const BootstrapReport b = bootstrap_homogeneity(t, 0.3, config(2000, 9));
  for (std::size_t k = 0; k < a.empirical_quantiles.size(); ++k)
    CHECK_THAT(a.empirical_quantiles[k].second, WithinAbs(b.empirical_quantiles[k].second, 1e-12));
}

TEST_CASE("McNemar bootstrap", "[bootstrap]") {
  const auto t = ContingencyTable::from_rows({{15, 8}, {2, 25}});
  const BootstrapReport r = bootstrap_mcnemar(t, 1.0, 0.1, config(10000, 42));
  CHECK(r.rejection_rate >= 0.02);
  CHECK(r.rejection_rate <= 0.08);
  check_monotone(r);
  CHECK(identical(r, bootstrap_mcnemar(t, 1.0, 0.1, config(10000, 42))));

  for (double lam : {0.3, 1.0}) {
    const BootstrapReport sym = bootstrap_mcnemar(ContingencyTable::from_rows({{3, 5}, {5, 3}}), lam, 0.25, config(2000, 5));
    CHECK(sym.observed_scaled == 0.0);
    CHECK(sym.quantile(0.025) <= 0.0);
    CHECK(sym.quantile(0.975) >= 0.0);
  }
}

TEST_CASE("McNemar null probabilities are symmetric and normalized", "[bootstrap]") {
  const auto p = mcnemar_null_probs(ContingencyTable::from_rows({{15, 8}, {2, 25}}), 0.6, 0.1);
  CHECK(p[1] == p[2]);
  CHECK_THAT(p[0] + p[1] + p[2] + p[3], WithinAbs(1.0, 1e-15));
}

TEST_CASE("results do not depend on the thread count", "[bootstrap]") {
  const auto t = ContingencyTable::from_rows({{15, 8}, {2, 25}});
  const BootstrapReport serial = bootstrap_mcnemar(t, 0.7, 0.2, config(3000, 77, 1));
  for (unsigned threads : {2u, 3u, 8u}) CHECK(identical(serial, bootstrap_mcnemar(t, 0.7, 0.2, config(3000, 77, threads))));
  const auto h = ContingencyTable::from_rows({{10, 20}, {30, 40}});
  CHECK(identical(bootstrap_homogeneity(h, 0.5, config(3000, 5, 1)), bootstrap_homogeneity(h, 0.5, config(3000, 5, 5))));
}

TEST_CASE("bootstrap quantile approaches the normal quantile on large null data", "[bootstrap]") {
  const auto t = ContingencyTable::from_rows({{150, 150}, {350, 350}});
  const BootstrapReport r = bootstrap_homogeneity(t, 1.0, config(10000, 2026));
  CHECK(std::fabs(r.quantile(0.975) - 1.959964) <= 0.15);
  CHECK(std::fabs(r.quantile(0.025) + 1.959964) <= 0.15);
}
