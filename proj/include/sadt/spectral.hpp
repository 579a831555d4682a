#pragma once
#include <cstddef>
#include <vector>

#include "sadt/evolution.hpp"
#include "sadt/matrix.hpp"

namespace sadt {

// For a stochastic P, I - P always has a zero singular value (rows of P sum to
// 1, so (I-P) 1 = 0).  sigma_at returns the smallest nonzero singular value,
// positionally the (n-1)-th largest.  It throws rank_warning when the
// numerically-zero tail has more than one value (stationary law not unique at
// working precision) or when the expected zero is not actually tiny.
double sigma_at(const StochasticMatrix& p);

namespace detail {
// Same computation on a raw matrix, for scan loops past validation.
double sigma_of_stochastic(const Matrix& p);
}  // namespace detail

struct SpectralScan {
  std::vector<double> grid;
  std::vector<double> sigma;
  double sigma_floor = 0.0;
};

// Evaluates sigma over analysis_grid(e, grid_points).  All grid points are
// visited even if some fail, and the lowest-s rank_warning is reported, so the
// outcome does not depend on the worker count.
SpectralScan spectral_scan(const Evolution& e, std::size_t grid_points = kDefaultGridPoints,
                           int workers = 1);

// Lower bound on the largest mixing time: (1 - 2 sqrt(n) eps) / sigma_floor
// must not exceed sup_s tmix(P(s), eps).  The check is vacuous once
// eps >= 1/(2 sqrt(n)), where the left side drops to zero or below.
struct MixingLowerBoundVerdict {
  double eps = 0.0;
  double sigma_floor = 0.0;
  double lhs = 0.0;
  long long rhs = 0;
  bool holds = false;
  bool vacuous = false;
};

MixingLowerBoundVerdict check_mixing_lower_bound(const Evolution& e, double eps, long long tmix_sup,
                         const SpectralScan& scan);

}  // namespace sadt
