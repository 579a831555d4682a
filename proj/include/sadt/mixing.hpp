#pragma once
#include <cstddef>
#include <utility>
#include <vector>

#include "sadt/evolution.hpp"
#include "sadt/matrix.hpp"

namespace sadt {

// Binary powering with cached squarings: P^T is assembled from the ones in
// the binary expansion of T, so evaluating d(T) along a doubling/bisection
// search costs O(log^2 T) matrix products total.
class PowerCache {
 public:
  explicit PowerCache(Matrix base);
  std::size_t dim() const { return sq_.front().n; }
  Matrix power(long long t);  // t >= 1

 private:
  const Matrix& squaring(std::size_t j);
  std::vector<Matrix> sq_;
};

// Worst-case total variation distance from stationarity after exactly T
// steps: max over starting point masses of TV(P^T(i,.), pi).  Maximizing over
// point masses suffices because TV(nu P^T, pi) is convex in nu.
double worst_case_tv(const StochasticMatrix& p, const ProbabilityVector& pi, long long t);

struct MixingResult {
  long long tmix = 0;
  double eps = 0.0;
  // (T, d(T)) pairs actually evaluated during the search, sorted by T.
  std::vector<std::pair<long long, double>> tv_profile;
};

// Smallest T >= 1 with d(T) <= eps, found by doubling then bisection and
// finished with a boundary check d(tmix - 1) > eps.  Throws cap_exceeded if
// d(cap) > eps.  Structural validation matches stationary_distribution.
MixingResult mixing_time(const StochasticMatrix& p, double eps, long long cap = kDefaultCap,
                         ValidationMode mode = ValidationMode::Relaxed);

struct LargestMixingResult {
  double eps = 0.0;
  long long cap = 0;
  std::vector<double> grid;
  std::vector<long long> tmix_at;
  long long tmix_sup = 0;
};

// sup over the analysis grid of the per-matrix mixing time.  The certificate
// for the requested mode must pass.  Cap overruns surface as cap_exceeded
// naming the lowest offending s regardless of worker count.
LargestMixingResult largest_mixing_time(const Evolution& e, double eps,
                                        std::size_t grid_points = kDefaultGridPoints,
                                        long long cap = kDefaultCap, int workers = 1,
                                        ValidationMode mode = ValidationMode::Relaxed);

namespace detail {
// Search core without structural validation; pi must be stationary for p.
long long mixing_time_raw(const Matrix& p, std::span<const double> pi, double eps, long long cap,
                          std::vector<std::pair<long long, double>>* profile = nullptr);
}  // namespace detail

}  // namespace sadt
