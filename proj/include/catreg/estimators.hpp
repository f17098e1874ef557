#pragma once

// Point estimators of a Bernoulli success probability: the MLE and the
// posterior summaries under a conjugate Beta(a, b) prior. Every posterior
// mean is a convex combination lambda * mle + (1 - lambda) * prior_mean with
// lambda = n / (n + a + b).

#include <cmath>
#include <cstdint>

#include "catreg/error.hpp"

namespace catreg {

/// Conjugate prior Beta(a, b), a > 0, b > 0.
class BetaPrior {
 public:
  BetaPrior(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
      detail::fail(ErrorCode::InvalidArgument, "beta prior parameters must be positive and finite");
  }

  static BetaPrior bayes_laplace() { return {1.0, 1.0}; }
  static BetaPrior jeffreys() { return {0.5, 0.5}; }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double mean() const noexcept { return a_ / (a_ + b_); }

  /// Shape parameters below one allow boundary modes; permitted but advised against.
  bool below_recommended() const noexcept { return a_ < 1.0 || b_ < 1.0; }

  friend bool operator==(const BetaPrior&, const BetaPrior&) = default;

 private:
  double a_;
  double b_;
};

/// x successes out of n trials. n = 0 is representable (prior-only updates).
class BinomialSample {
 public:
  BinomialSample(std::int64_t successes, std::int64_t trials) : x_(successes), n_(trials) {
    if (trials < 0 || successes < 0 || successes > trials)
      detail::fail(ErrorCode::InvalidArgument, "binomial sample requires 0 <= x <= n");
  }

  std::int64_t successes() const noexcept { return x_; }
  std::int64_t trials() const noexcept { return n_; }
  std::int64_t failures() const noexcept { return n_ - x_; }

 private:
  std::int64_t x_;
  std::int64_t n_;
};

struct ShrinkageConfig {
  double lambda = 1.0;
  double target = 0.5;

  ShrinkageConfig(double lam, double tgt) : lambda(lam), target(tgt) {
    if (!(lam >= 0.0 && lam <= 1.0)) detail::fail(ErrorCode::InvalidArgument, "lambda must lie in [0, 1]");
    if (!(tgt >= 0.0 && tgt <= 1.0)) detail::fail(ErrorCode::InvalidArgument, "shrinkage target must lie in [0, 1]");
  }
};

enum class ModeKind {
  Interior,
  BoundaryMode,   // posterior density monotone or U-shaped; mode sits at 0 or 1
  UndefinedMode,  // flat posterior Beta(1, 1): every point is a mode
};

struct MapEstimate {
  double value;
  ModeKind kind;
  BetaPrior posterior;
};

namespace detail {

inline void require_trials(const BinomialSample& s) {
  if (s.trials() < 1) fail(ErrorCode::InvalidArgument, "estimator needs at least one trial");
}

}  // namespace detail

inline double mle(const BinomialSample& s) {
  detail::require_trials(s);
  return static_cast<double>(s.successes()) / static_cast<double>(s.trials());
}

/// lambda * (x / n) + (1 - lambda) * target.
inline double shrink(const BinomialSample& s, const ShrinkageConfig& c) {
  return c.lambda * mle(s) + (1.0 - c.lambda) * c.target;
}

inline BetaPrior posterior_beta(const BetaPrior& p, const BinomialSample& s) {
  return {p.a() + static_cast<double>(s.successes()), p.b() + static_cast<double>(s.failures())};
}

/// (x + a) / (n + a + b).
inline double posterior_mean_beta(const BetaPrior& p, const BinomialSample& s) {
  return (static_cast<double>(s.successes()) + p.a()) / (static_cast<double>(s.trials()) + p.a() + p.b());
}

/// Posterior mean under the uniform prior: (x + 1) / (n + 2).
inline double bayes_laplace(const BinomialSample& s) {
  return (static_cast<double>(s.successes()) + 1.0) / (static_cast<double>(s.trials()) + 2.0);
}

/// Posterior mean under Beta(1/2, 1/2): (x + 1/2) / (n + 1).
inline double jeffreys(const BinomialSample& s) {
  return (static_cast<double>(s.successes()) + 0.5) / (static_cast<double>(s.trials()) + 1.0);
}

/// Posterior mode. Shape parameters <= 1 give a monotone or U-shaped density,
/// reported as BoundaryMode; Beta(1, 1) has no unique mode and returns 0.5.
inline MapEstimate map_estimate(const BetaPrior& p, const BinomialSample& s) {
  const BetaPrior post = posterior_beta(p, s);
  const double al = post.a();
  const double be = post.b();
  if (al > 1.0 && be > 1.0) return {(al - 1.0) / (al + be - 2.0), ModeKind::Interior, post};
  if (al == 1.0 && be == 1.0) return {0.5, ModeKind::UndefinedMode, post};
  if (al <= 1.0 && be >= 1.0) return {0.0, ModeKind::BoundaryMode, post};
  if (al >= 1.0 && be <= 1.0) return {1.0, ModeKind::BoundaryMode, post};
  // Both shapes below one: the density diverges at both ends, faster at the
  // end with the smaller shape parameter.
  if (al < be) return {0.0, ModeKind::BoundaryMode, post};
  if (be < al) return {1.0, ModeKind::BoundaryMode, post};
  return {0.5, ModeKind::UndefinedMode, post};
}

/// lambda = n / (n + a + b), target = a / (a + b).
inline ShrinkageConfig decompose_shrinkage(const BetaPrior& p, std::int64_t n) {
  if (n < 1) detail::fail(ErrorCode::InvalidArgument, "decomposition needs n >= 1");
  const auto nd = static_cast<double>(n);
  return {nd / (nd + p.a() + p.b()), p.mean()};
}

}  // namespace catreg
