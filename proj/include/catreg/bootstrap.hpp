#pragma once

// Parametric bootstrap for the regularized homogeneity and McNemar tests.
//
// Homogeneity: column totals are held fixed and each column is redrawn as an
// independent binomial with the pooled success rate n1./n. That rate is a
// fixed point of shrinkage toward itself, so lambda only rescales the
// statistic.
//
// McNemar: n pairs are redrawn from a multinomial whose cells are the
// shrunken estimates lambda * n_ij / n + (1 - lambda) * tau, with the two
// discordant cells replaced by their average and the whole table
// renormalized.
//
// Replicates whose redrawn table leaves the statistic undefined (an empty row
// for homogeneity, no discordant pairs for McNemar) have equal observed
// proportions and are scored 0; they are counted in degenerate_replicates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "catreg/error.hpp"
#include "catreg/hypothesis.hpp"
#include "catreg/normal.hpp"
#include "catreg/rng.hpp"
#include "catreg/table.hpp"

namespace catreg {

struct BootstrapConfig {
  static constexpr std::int64_t min_replicates = 100;

  std::int64_t replicates = 10000;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  // Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;

  void validate() const {
    if (replicates < min_replicates)
      detail::fail(ErrorCode::InsufficientReplicates, "at least " + std::to_string(min_replicates) + " replicates required");
    if (!(alpha > 0.0 && alpha < 1.0)) detail::fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
};

inline constexpr std::array<double, 6> bootstrap_levels{0.005, 0.025, 0.05, 0.95, 0.975, 0.995};

struct BootstrapReport {
  // (level, quantile of the scaled statistic), levels ascending.
  std::vector<std::pair<double, double>> empirical_quantiles;
  double rejection_rate = 0.0;  // share of replicates with |scaled| > critical_value
  double critical_value = 0.0;  // two-sided N(0, 1) cutoff at alpha
  double observed_scaled = 0.0;
  double p_value = 1.0;  // share of replicates with |scaled| >= |observed_scaled|
  std::int64_t degenerate_replicates = 0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  double lambda = 1.0;

  double quantile(double level) const {
    for (const auto& [l, q] : empirical_quantiles)
      if (l == level) return q;
    detail::fail(ErrorCode::InvalidArgument, "level not tabulated");
  }
};

/// Inverted-CDF (type 1) quantile of sorted data: the ceil(level * size)-th
/// smallest value. level * size is nudged down by a relative 1e-12 so decimal
/// levels such as 0.975 * 10000 land on the intended order statistic.
inline double type1_quantile(const std::vector<double>& sorted, double level) {
  if (sorted.empty()) detail::fail(ErrorCode::InvalidArgument, "quantile of empty sample");
  if (!(level > 0.0 && level <= 1.0)) detail::fail(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1]");
  const auto size = static_cast<double>(sorted.size());
  auto k = static_cast<std::size_t>(std::ceil(level * size * (1.0 - 1e-12)));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

namespace detail {

// Fills out[k] = replicate(k, engine_k) for every k, split across threads.
inline void run_replicates(std::vector<double>& out, std::vector<char>& degenerate, const BootstrapConfig& cfg,
                           const std::function<std::pair<double, bool>(SplitMix64&)>& replicate) {
  const auto b = static_cast<std::size_t>(cfg.replicates);
  out.assign(b, 0.0);
  degenerate.assign(b, 0);
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, b));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      SplitMix64 engine = SplitMix64::stream(cfg.seed, k);
      const auto [stat, degen] = replicate(engine);
      out[k] = stat;
      degenerate[k] = degen ? 1 : 0;
    }
  };

  if (workers <= 1) {
    work(0, b);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (b + workers - 1) / workers;
  for (std::size_t begin = 0; begin < b; begin += chunk) pool.emplace_back(work, begin, std::min(b, begin + chunk));
}

inline BootstrapReport summarize(std::vector<double> stats, const std::vector<char>& degenerate, double observed,
                                 double lambda, const BootstrapConfig& cfg) {
  BootstrapReport r;
  r.replicates = cfg.replicates;
  r.seed = cfg.seed;
  r.alpha = cfg.alpha;
  r.lambda = lambda;
  r.observed_scaled = observed;
  r.critical_value = std_normal_quantile(1.0 - cfg.alpha / 2.0);

  std::int64_t rejected = 0;
  std::int64_t extreme = 0;
  for (double s : stats) {
    if (std::fabs(s) > r.critical_value) ++rejected;
    if (std::fabs(s) >= std::fabs(observed)) ++extreme;
  }
  for (char d : degenerate) r.degenerate_replicates += d;
  const auto b = static_cast<double>(stats.size());
  r.rejection_rate = static_cast<double>(rejected) / b;
  r.p_value = static_cast<double>(extreme) / b;

  std::sort(stats.begin(), stats.end());
  for (double level : bootstrap_levels) r.empirical_quantiles.emplace_back(level, type1_quantile(stats, level));
  return r;
}

inline std::int64_t draw_binomial(SplitMix64& engine, std::int64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> dist(trials, p);
  return dist(engine);
}

}  // namespace detail

inline BootstrapReport bootstrap_homogeneity(const ContingencyTable& t, double lambda, const BootstrapConfig& cfg) {
  cfg.validate();
  const double observed = homogeneity_regularized(t, lambda).scaled_statistic;
  const Count c1 = t.col_total(0);
  const Count c2 = t.col_total(1);
  const double pooled = static_cast<double>(t.row_total(0)) / static_cast<double>(t.total());

  std::vector<double> stats;
  std::vector<char> degenerate;
  detail::run_replicates(stats, degenerate, cfg, [&](SplitMix64& engine) -> std::pair<double, bool> {
    const Count x1 = detail::draw_binomial(engine, c1, pooled);
    const Count x2 = detail::draw_binomial(engine, c2, pooled);
    const Count successes = x1 + x2;
    if (successes == 0 || successes == c1 + c2) return {0.0, true};
    const ContingencyTable rep(2, 2, {x1, x2, c1 - x1, c2 - x2});
    return {homogeneity_regularized(rep, lambda).scaled_statistic, false};
  });
  return detail::summarize(std::move(stats), degenerate, observed, lambda, cfg);
}

/// Null cell probabilities used by bootstrap_mcnemar, row-major.
inline std::array<double, 4> mcnemar_null_probs(const ContingencyTable& t, double lambda, double tau) {
  const auto [p12, p21] = regularized_discordant(t, lambda, tau);
  const auto n = static_cast<double>(t.total());
  const double p11 = lambda * (static_cast<double>(t(0, 0)) / n) + (1.0 - lambda) * tau;
  const double p22 = lambda * (static_cast<double>(t(1, 1)) / n) + (1.0 - lambda) * tau;
  const double d = 0.5 * (p12 + p21);
  const double total = p11 + 2.0 * d + p22;
  return {p11 / total, d / total, d / total, p22 / total};
}

inline BootstrapReport bootstrap_mcnemar(const ContingencyTable& t, double lambda, double tau, const BootstrapConfig& cfg) {
  cfg.validate();
  const double observed = mcnemar_regularized(t, lambda, tau).scaled_statistic;
  const std::array<double, 4> probs = mcnemar_null_probs(t, lambda, tau);
  const Count n = t.total();

  std::vector<double> stats;
  std::vector<char> degenerate;
  detail::run_replicates(stats, degenerate, cfg, [&](SplitMix64& engine) -> std::pair<double, bool> {
    // Multinomial draw as a chain of conditional binomials.
    std::array<Count, 4> cells{};
    Count remaining = n;
    double mass = 1.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double p = mass > 0.0 ? std::min(1.0, probs[c] / mass) : 0.0;
      cells[c] = detail::draw_binomial(engine, remaining, p);
      remaining -= cells[c];
      mass -= probs[c];
    }
    cells[3] = remaining;
    if (cells[1] + cells[2] == 0) return {0.0, true};
    const ContingencyTable rep(2, 2, {cells[0], cells[1], cells[2], cells[3]});
    return {mcnemar_regularized(rep, lambda, tau).scaled_statistic, false};
  });
  return detail::summarize(std::move(stats), degenerate, observed, lambda, cfg);
}

}  // namespace catreg
