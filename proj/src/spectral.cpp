#include "sadt/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "sadt/parallel.hpp"

namespace sadt {

namespace detail {

double sigma_of_stochastic(const Matrix& p) {
  const std::size_t n = p.n;
  if (n < 2)
    throw AnalysisError(errc::bad_input, "smallest nonzero singular value needs dimension >= 2");
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - p.at(i, j);
  Eigen::VectorXd sv;
  if (n <= 64) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    sv = svd.singularValues();
  }
  // Eigen returns singular values sorted descending.
  const double thresh = 1e-10 * std::max(1.0, sv(0));
  if (sv(static_cast<Eigen::Index>(n - 1)) > thresh)
    throw AnalysisError(errc::rank_warning,
                        "I - P has no numerically zero singular value (smallest is " +
                            std::to_string(sv(static_cast<Eigen::Index>(n - 1))) + ")");
  const double sigma = sv(static_cast<Eigen::Index>(n - 2));
  if (sigma <= thresh)
    throw AnalysisError(errc::rank_warning,
                        "I - P has at least two numerically zero singular values; the "
                        "stationary distribution is not unique at working precision");
  return sigma;
}

}  // namespace detail

double sigma_at(const StochasticMatrix& p) { return detail::sigma_of_stochastic(p.entries()); }

SpectralScan spectral_scan(const Evolution& e, std::size_t grid_points, int workers) {
  SpectralScan scan;
  scan.grid = analysis_grid(e, grid_points);
  scan.sigma.assign(scan.grid.size(), 0.0);
  std::vector<std::optional<std::string>> warning(scan.grid.size());
  parallel_for(scan.grid.size(), workers, [&](std::size_t i) {
    try {
      scan.sigma[i] = detail::sigma_of_stochastic(e.sample_matrix(scan.grid[i]));
    } catch (const AnalysisError& err) {
      if (err.code() != errc::rank_warning) throw;
      warning[i] = err.what();
    }
  });
  for (std::size_t i = 0; i < scan.grid.size(); ++i)
    if (warning[i])
      throw AnalysisError(errc::rank_warning,
                          "at s = " + std::to_string(scan.grid[i]) + ": " + *warning[i]);
  scan.sigma_floor = *std::min_element(scan.sigma.begin(), scan.sigma.end());
  return scan;
}

MixingLowerBoundVerdict check_mixing_lower_bound(const Evolution& e, double eps, long long tmix_sup,
                         const SpectralScan& scan) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw AnalysisError(errc::eps_out_of_range, "eps must lie in (0,1)");
  if (tmix_sup < 1) throw AnalysisError(errc::nonpositive_argument, "tmix_sup must be >= 1");
  MixingLowerBoundVerdict v;
  v.eps = eps;
  v.sigma_floor = scan.sigma_floor;
  v.lhs = (1.0 - 2.0 * std::sqrt(static_cast<double>(e.dim())) * eps) / scan.sigma_floor;
  v.rhs = tmix_sup;
  v.vacuous = v.lhs <= 0.0;
  v.holds = v.lhs <= static_cast<double>(v.rhs);
  return v;
}

}  // namespace sadt
