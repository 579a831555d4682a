#include "sadt/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sadt/kernels.hpp"
#include "sadt/parallel.hpp"
#include "sadt/spectral.hpp"

namespace sadt {

StationaryCache::StationaryCache(std::size_t max_entries) : max_entries_(max_entries) {}

std::shared_ptr<const std::vector<double>> StationaryCache::get(const Evolution& e, double s) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(s);
    if (it != map_.end()) return it->second;
  }
  // Solve outside the lock; concurrent duplicate solves return identical
  // values, so which one lands in the map is immaterial.
  auto value = std::make_shared<const std::vector<double>>(
      detail::stationary_of(e.sample_matrix(s)));
  std::lock_guard<std::mutex> lock(mu_);
  if (map_.size() >= max_entries_) {
    auto it = map_.find(s);
    return it != map_.end() ? it->second : value;
  }
  return map_.emplace(s, std::move(value)).first->second;
}

namespace {

// Raise the precise structural objection for an evolution that cannot be
// annealed: every sampled matrix needs a unique aperiodic recurrent class.
void require_certified(const Evolution& e) {
  StructuralCertificate cert = e.certificate(ValidationMode::Relaxed);
  if (cert.overall) return;
  for (const auto& kf : cert.keyframes) {
    if (kf.passes) continue;
    if (kf.cls.recurrent_classes.size() != 1)
      throw AnalysisError(errc::multiple_recurrent_classes,
                          "keyframe at s = " + std::to_string(kf.s) + " has " +
                              std::to_string(kf.cls.recurrent_classes.size()) +
                              " recurrent classes");
    throw AnalysisError(errc::periodic_recurrent_class,
                        "keyframe at s = " + std::to_string(kf.s) + " has a periodic "
                        "recurrent class");
  }
  for (const auto& sg : cert.segments) {
    if (sg.irreducible && sg.aperiodic) continue;
    throw AnalysisError(sg.irreducible ? errc::periodic_recurrent_class : errc::not_irreducible,
                        "segment (" + std::to_string(sg.s_lo) + ", " + std::to_string(sg.s_hi) +
                            ") fails interior validation");
  }
  throw AnalysisError(errc::bad_input, "structural certificate failed");
}

struct TrajectoryScan {
  std::vector<double> deviations;
  double max_deviation = 0.0;
  long long argmax_k = 0;
  bool hit_eps = false;  // some deviation reached stop_eps (search short-circuit)
};

TrajectoryScan run_trajectory(const Evolution& e, long long horizon, StationaryCache* cache,
                              std::optional<double> stop_eps, bool keep_deviations) {
  const std::size_t n = e.dim();
  auto pi_at = [&](double s) -> std::shared_ptr<const std::vector<double>> {
    if (cache) return cache->get(e, s);
    return std::make_shared<const std::vector<double>>(
        detail::stationary_of(e.sample_matrix(s)));
  };

  TrajectoryScan out;
  if (keep_deviations) out.deviations.reserve(static_cast<std::size_t>(horizon));
  std::vector<double> nu = *pi_at(0.0);
  std::vector<double> next(n);
  double maxdev = -1.0;
  for (long long k = 1; k <= horizon; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(horizon);
    Matrix p = e.sample_matrix(s);
    kernels::row_times_matrix(nu.data(), p.data(), next.data(), n);
    nu.swap(next);
    auto pik = pi_at(s);
    const double dev = 0.5 * kernels::l1_diff(nu.data(), pik->data(), n);
    if (keep_deviations) out.deviations.push_back(dev);
    if (dev > maxdev) {
      maxdev = dev;
      out.argmax_k = k;
    }
    if (stop_eps && dev >= *stop_eps) {
      out.hit_eps = true;
      break;
    }
  }
  out.max_deviation = std::max(maxdev, 0.0);
  return out;
}

}  // namespace

Trajectory adiabatic_trajectory(const Evolution& e, long long horizon, StationaryCache* cache) {
  if (horizon < 1) throw AnalysisError(errc::nonpositive_argument, "horizon must be >= 1");
  require_certified(e);
  TrajectoryScan scan = run_trajectory(e, horizon, cache, std::nullopt, true);
  Trajectory t;
  t.horizon = horizon;
  t.deviations = std::move(scan.deviations);
  t.max_deviation = scan.max_deviation;
  t.argmax_k = scan.argmax_k;
  return t;
}

bool is_feasible(const Evolution& e, long long horizon, double eps, StationaryCache* cache,
                 double* max_dev_seen) {
  if (horizon < 1) throw AnalysisError(errc::nonpositive_argument, "horizon must be >= 1");
  if (!(eps > 0.0)) throw AnalysisError(errc::eps_out_of_range, "eps must be positive");
  require_certified(e);
  TrajectoryScan scan = run_trajectory(e, horizon, cache, eps, false);
  if (max_dev_seen) *max_dev_seen = scan.max_deviation;
  return !scan.hit_eps;
}

namespace {

long long contiguous_prefix(std::vector<long long> tested) {
  std::sort(tested.begin(), tested.end());
  tested.erase(std::unique(tested.begin(), tested.end()), tested.end());
  long long expect = 1;
  for (long long t : tested) {
    if (t != expect) break;
    ++expect;
  }
  return expect - 1;
}

}  // namespace

SadResult stable_adiabatic_time(const Evolution& e, double eps, long long cap,
                                SearchStrategy strategy, int workers) {
  if (!(eps > 0.0)) throw AnalysisError(errc::eps_out_of_range, "eps must be positive");
  if (cap < 1) throw AnalysisError(errc::nonpositive_argument, "cap must be >= 1");
  require_certified(e);

  SadResult r;
  r.eps = eps;
  r.cap = cap;
  r.strategy = strategy;
  r.degenerate = eps >= 1.0;
  StationaryCache cache;

  auto probe = [&](long long t) {
    SadSearchEntry entry;
    entry.horizon = t;
    TrajectoryScan scan = run_trajectory(e, t, &cache, eps, false);
    entry.feasible = !scan.hit_eps;
    entry.max_deviation = scan.max_deviation;
    return entry;
  };

  if (strategy == SearchStrategy::Exact) {
    // Feasibility is not monotone in T, so scan T = 1, 2, 3, ... in order.
    // Parallel runs probe fixed-size blocks; the log is trimmed to T <= tsad
    // afterwards so the bytes do not depend on the block or worker count.
    const long long block = workers <= 1 ? 1 : static_cast<long long>(workers) * 4;
    long long t = 1;
    while (t <= cap && !r.tsad) {
      const long long hi = std::min(cap, t + block - 1);
      std::vector<SadSearchEntry> entries(static_cast<std::size_t>(hi - t + 1));
      parallel_for(entries.size(), workers,
                   [&](std::size_t i) { entries[i] = probe(t + static_cast<long long>(i)); });
      for (const auto& entry : entries) {
        if (entry.feasible) {
          r.tsad = entry.horizon;
          break;
        }
      }
      r.search_log.insert(r.search_log.end(), entries.begin(), entries.end());
      t = hi + 1;
    }
    if (r.tsad) {
      std::erase_if(r.search_log, [&](const SadSearchEntry& s) { return s.horizon > *r.tsad; });
      r.exhaustive_below = *r.tsad;
    } else {
      r.exhaustive_below = cap;
    }
    return r;
  }

  // Geometric: grow the horizon ~1.1x per step until something is feasible,
  // then sweep the bracket interior left to right for the earliest feasible
  // horizon.  Cheap when tsad is large, but isolated feasible horizons below
  // the first tested one can be missed; exhaustive_below records the reach of
  // the exhaustive guarantee.
  std::vector<long long> tested;
  long long prev_infeasible = 0;
  std::optional<long long> bracket;
  long long t = 1;
  while (true) {
    SadSearchEntry entry = probe(t);
    r.search_log.push_back(entry);
    tested.push_back(t);
    if (entry.feasible) {
      bracket = t;
      break;
    }
    prev_infeasible = t;
    if (t >= cap) break;
    t = std::min(cap, std::max(t + 1, static_cast<long long>(std::ceil(static_cast<double>(t) * 1.1))));
  }
  if (bracket) {
    for (long long u = prev_infeasible + 1; u < *bracket && !r.tsad; ++u) {
      SadSearchEntry entry = probe(u);
      r.search_log.push_back(entry);
      tested.push_back(u);
      if (entry.feasible) r.tsad = u;
    }
    if (!r.tsad) r.tsad = *bracket;
  }
  std::sort(r.search_log.begin(), r.search_log.end(),
            [](const SadSearchEntry& a, const SadSearchEntry& b) { return a.horizon < b.horizon; });
  r.exhaustive_below = contiguous_prefix(std::move(tested));
  return r;
}

BoundReport quadratic_bound(std::size_t n, double lipschitz, long long tmix, double eps,
                           BoundVariant variant) {
  if (n < 2) throw AnalysisError(errc::nonpositive_argument, "state count must be >= 2");
  if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz))
    throw AnalysisError(errc::nonpositive_argument, "Lipschitz constant must be finite and >= 0");
  if (tmix < 1) throw AnalysisError(errc::nonpositive_argument, "tmix must be >= 1");
  const double root_n = std::sqrt(static_cast<double>(n));
  if (!(eps > 0.0) || !(eps < 1.0 / (2.0 * root_n)))
    throw AnalysisError(errc::eps_out_of_range,
                        "the bound needs 0 < eps < 1/(2 sqrt(n)) = " +
                            std::to_string(1.0 / (2.0 * root_n)));
  BoundReport b;
  b.n = n;
  b.lipschitz = lipschitz;
  b.tmix = tmix;
  b.eps = eps;
  b.variant = variant;
  b.value = 3.0 * std::pow(static_cast<double>(n), 1.5) * lipschitz * static_cast<double>(tmix) *
            static_cast<double>(tmix) / ((1.0 - 2.0 * root_n * eps) * eps);
  b.ceiling = static_cast<long long>(std::ceil(b.value));
  return b;
}

double continuity_delta(double eps, double sigma_floor, double lipschitz, std::size_t n) {
  if (n < 1) throw AnalysisError(errc::nonpositive_argument, "state count must be >= 1");
  if (!(eps > 0.0) || !(sigma_floor > 0.0) || !(lipschitz > 0.0))
    throw AnalysisError(errc::nonpositive_argument,
                        "eps, sigma, and the Lipschitz constant must all be positive");
  return eps * sigma_floor / (3.0 * lipschitz * std::pow(static_cast<double>(n), 1.5));
}

ContinuityReport check_stationary_continuity(const Evolution& e, double eps, std::size_t grid_points,
                             int workers) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw AnalysisError(errc::eps_out_of_range, "eps must lie in (0,1)");
  require_certified(e);

  ContinuityReport r;
  r.eps = eps;
  r.n = e.dim();
  SpectralScan scan = spectral_scan(e, grid_points, workers);
  r.sigma_floor = scan.sigma_floor;
  r.lipschitz = e.lipschitz().value;
  r.delta = r.lipschitz == 0.0 ? std::numeric_limits<double>::infinity()
                               : continuity_delta(eps, scan.sigma_floor, r.lipschitz, r.n);

  const std::vector<double>& grid = scan.grid;
  std::vector<std::vector<double>> pi(grid.size());
  parallel_for(grid.size(), workers,
               [&](std::size_t i) { pi[i] = detail::stationary_of(e.sample_matrix(grid[i])); });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size() && grid[j] - grid[i] <= r.delta; ++j) {
      const double tv = 0.5 * kernels::l1_diff(pi[i].data(), pi[j].data(), r.n);
      r.max_tv_seen = std::max(r.max_tv_seen, tv);
      ++r.pairs_tested;
    }
  }
  r.vacuous = r.pairs_tested == 0;
  r.holds = r.vacuous || r.max_tv_seen <= eps;
  return r;
}

}  // namespace sadt
