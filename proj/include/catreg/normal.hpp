#pragma once

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "catreg/error.hpp"

namespace catreg {

/// Standard normal CDF. Evaluated through erfc so that the lower tail keeps
/// full relative precision down to about -37.
inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

/// 1 - Phi(z) without cancellation.
inline double std_normal_sf(double z) { return std_normal_cdf(-z); }

/// Inverse CDF for p in (0, 1).
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) detail::fail(ErrorCode::InvalidArgument, "normal quantile needs p in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace catreg
