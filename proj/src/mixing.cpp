#include "sadt/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "sadt/kernels.hpp"
#include "sadt/parallel.hpp"

namespace sadt {

PowerCache::PowerCache(Matrix base) {
  if (base.n == 0) throw AnalysisError(errc::bad_input, "empty matrix");
  sq_.push_back(std::move(base));
}

const Matrix& PowerCache::squaring(std::size_t j) {
  while (sq_.size() <= j) sq_.push_back(sq_.back() * sq_.back());
  return sq_[j];
}

Matrix PowerCache::power(long long t) {
  if (t < 1) throw AnalysisError(errc::nonpositive_argument, "matrix power needs t >= 1");
  Matrix acc;
  bool have = false;
  for (std::size_t j = 0; t > 0; ++j, t >>= 1) {
    if (t & 1) {
      const Matrix& s = squaring(j);
      acc = have ? acc * s : s;
      have = true;
    } else {
      squaring(j);
    }
  }
  return acc;
}

namespace {

double worst_tv_of_power(const Matrix& pt, std::span<const double> pi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pt.n; ++i)
    worst = std::max(worst, 0.5 * kernels::l1_diff(pt.row(i), pi.data(), pt.n));
  return worst;
}

}  // namespace

double worst_case_tv(const StochasticMatrix& p, const ProbabilityVector& pi, long long t) {
  if (pi.dim() != p.dim()) throw AnalysisError(errc::dimension_mismatch, "worst_case_tv");
  PowerCache cache(p.entries());
  return worst_tv_of_power(cache.power(t), pi.span());
}

namespace detail {

long long mixing_time_raw(const Matrix& p, std::span<const double> pi, double eps, long long cap,
                          std::vector<std::pair<long long, double>>* profile) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw AnalysisError(errc::eps_out_of_range, "eps must lie in (0,1)");
  if (cap < 1) throw AnalysisError(errc::nonpositive_argument, "cap must be >= 1");
  PowerCache cache(Matrix{p});
  std::map<long long, double> seen;
  auto d = [&](long long t) {
    auto it = seen.find(t);
    if (it != seen.end()) return it->second;
    double v = worst_tv_of_power(cache.power(t), pi);
    seen.emplace(t, v);
    return v;
  };

  long long hi = 1;
  while (d(hi) > eps) {
    if (hi >= cap)
      throw AnalysisError(errc::cap_exceeded, "d(" + std::to_string(cap) + ") = " +
                                                  std::to_string(d(cap)) + " > eps = " +
                                                  std::to_string(eps));
    hi = hi > cap / 2 ? cap : hi * 2;
  }
  long long lo = hi / 2;  // d(lo) > eps when lo >= 1, d(hi) <= eps
  while (hi - lo > 1 && lo >= 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (d(mid) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  // d(T) is monotone for exact arithmetic; guard the boundary against the
  // off-chance of rounding wobble near eps.
  while (hi > 1 && d(hi - 1) <= eps) --hi;
  if (profile) profile->assign(seen.begin(), seen.end());
  return hi;
}

}  // namespace detail

MixingResult mixing_time(const StochasticMatrix& p, double eps, long long cap,
                         ValidationMode mode) {
  ProbabilityVector pi = stationary_distribution(p, mode);
  MixingResult out;
  out.eps = eps;
  out.tmix = detail::mixing_time_raw(p.entries(), pi.span(), eps, cap, &out.tv_profile);
  return out;
}

LargestMixingResult largest_mixing_time(const Evolution& e, double eps, std::size_t grid_points,
                                        long long cap, int workers, ValidationMode mode) {
  if (!e.certificate(mode).overall)
    throw AnalysisError(errc::bad_input,
                        "structural certificate failed; run `analyze` for the breakdown");
  LargestMixingResult out;
  out.eps = eps;
  out.cap = cap;
  out.grid = analysis_grid(e, grid_points);
  out.tmix_at.assign(out.grid.size(), 0);
  std::vector<std::optional<std::string>> capped(out.grid.size());
  parallel_for(out.grid.size(), workers, [&](std::size_t i) {
    Matrix p = e.sample_matrix(out.grid[i]);
    std::vector<double> pi = detail::stationary_of(p);
    try {
      out.tmix_at[i] = detail::mixing_time_raw(p, pi, eps, cap);
    } catch (const AnalysisError& err) {
      if (err.code() != errc::cap_exceeded) throw;
      capped[i] = err.what();
    }
  });
  for (std::size_t i = 0; i < out.grid.size(); ++i)
    if (capped[i])
      throw AnalysisError(errc::cap_exceeded,
                          "at s = " + std::to_string(out.grid[i]) + ": " + *capped[i]);
  out.tmix_sup = *std::max_element(out.tmix_at.begin(), out.tmix_at.end());
  return out;
}

}  // namespace sadt
