#include "sadt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sadt/adiabatic.hpp"
#include "sadt/instances.hpp"
#include "sadt/io.hpp"
#include "sadt/kernels.hpp"
#include "sadt/mixing.hpp"
#include "sadt/spectral.hpp"

namespace sadt {

using nlohmann::ordered_json;

namespace {

struct Ctx {
  SplitMix64 rng;
  int workers;
  bool inject_fault;
};

// Worst-case TV at horizon t computed by naive repeated multiplication; used
// as the cross-check against the binary-powering path.
double naive_worst_tv(const Matrix& p, std::span<const double> pi, long long t) {
  Matrix acc = p;
  for (long long i = 1; i < t; ++i) acc = acc * p;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.n; ++i)
    worst = std::max(worst, 0.5 * kernels::l1_diff(acc.row(i), pi.data(), p.n));
  return worst;
}

CheckResult check_tv_l1_identity(Ctx& c) {
  CheckResult r{"tv_l1_identity", true, {}};
  double worst = 0.0;
  const std::size_t trials = 200;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + c.rng.below(7);
    auto mu = random_simplex_point(c.rng, n);
    auto nu = random_simplex_point(c.rng, n);
    double manual = 0.0;
    for (std::size_t i = 0; i < n; ++i) manual += std::fabs(mu[i] - nu[i]);
    manual *= 0.5;
    const double reported = tv_distance(std::span<const double>(mu), std::span<const double>(nu));
    const double gap = std::fabs(manual - reported);
    worst = std::max(worst, gap);
    if (gap > 1e-15 * static_cast<double>(n)) {
      r.pass = false;
      r.details["counterexample"] = {{"mu", mu}, {"nu", nu}, {"gap", gap}};
      break;
    }
  }
  r.details["trials"] = trials;
  r.details["worst_gap"] = worst;
  return r;
}

CheckResult check_l1_contraction(Ctx& c) {
  CheckResult r{"l1_contraction", true, {}};
  double worst = 0.0;
  const std::size_t trials = 200;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t n = 2 + c.rng.below(7);
    Matrix p = random_strict_matrix(c.rng, n).entries();
    if (c.inject_fault && t == trials / 2) p.at(0, 0) += 0.6;  // negative control
    std::vector<double> nu(n);
    for (double& x : nu) x = c.rng.uniform(-1.0, 1.0);
    auto out = propagate(std::span<const double>(nu), p);
    const double before = kernels::l1_norm(nu.data(), n);
    const double after = kernels::l1_norm(out.data(), n);
    worst = std::max(worst, after - before);
    if (after > before + 1e-12) {
      r.pass = false;
      r.details["counterexample"] = {
          {"matrix_row0", std::vector<double>(p.row(0), p.row(0) + n)},
          {"l1_before", before},
          {"l1_after", after}};
      break;
    }
  }
  r.details["trials"] = trials;
  r.details["worst_expansion"] = worst;
  return r;
}

CheckResult check_tv_monotonicity(Ctx& c) {
  CheckResult r{"tv_monotonicity", true, {}};
  double worst = 0.0;
  const std::size_t matrices = 20;
  for (std::size_t m = 0; m < matrices && r.pass; ++m) {
    const std::size_t n = 2 + c.rng.below(5);
    StochasticMatrix p = random_strict_matrix(c.rng, n, 1 + static_cast<int>(c.rng.below(3)));
    ProbabilityVector pi = stationary_distribution(p);
    Matrix acc = p.entries();
    double prev = 2.0;
    for (long long t = 1; t <= 30; ++t) {
      if (t > 1) acc = acc * p.entries();
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        d = std::max(d, 0.5 * kernels::l1_diff(acc.row(i), pi.span().data(), n));
      worst = std::max(worst, d - prev);
      if (d > prev + 1e-12) {
        r.pass = false;
        r.details["counterexample"] = {{"T", t}, {"d_T", d}, {"d_prev", prev}};
        break;
      }
      prev = d;
    }
  }
  r.details["matrices"] = matrices;
  r.details["worst_increase"] = worst;
  return r;
}

CheckResult check_vertex_sufficiency(Ctx& c) {
  CheckResult r{"vertex_sufficiency", true, {}};
  double worst = 0.0;
  const std::size_t matrices = 5, points = 1000;
  for (std::size_t m = 0; m < matrices && r.pass; ++m) {
    const std::size_t n = 2 + c.rng.below(5);
    StochasticMatrix p = random_strict_matrix(c.rng, n);
    ProbabilityVector pi = stationary_distribution(p);
    for (long long t : {1LL, 2LL, 3LL, 5LL, 10LL}) {
      const double d = worst_case_tv(p, pi, t);
      PowerCache cache(p.entries());
      Matrix pt = cache.power(t);
      for (std::size_t k = 0; k < points; ++k) {
        auto nu = random_simplex_point(c.rng, n);
        auto out = propagate(std::span<const double>(nu), pt);
        const double tv = 0.5 * kernels::l1_diff(out.data(), pi.span().data(), n);
        worst = std::max(worst, tv - d);
        if (tv > d + 1e-12) {
          r.pass = false;
          r.details["counterexample"] = {{"T", t}, {"tv", tv}, {"d_T", d}, {"nu", nu}};
          break;
        }
      }
      if (!r.pass) break;
    }
  }
  r.details["matrices"] = matrices;
  r.details["points_per_horizon"] = points;
  r.details["worst_excess"] = worst;
  return r;
}

CheckResult check_operator_norm_oracle(Ctx& c) {
  CheckResult r{"operator_norm_simplex_oracle", true, {}};
  double worst_excess = 0.0, worst_equality_gap = 0.0;
  const std::size_t matrices = 5, points = 1000;
  for (std::size_t m = 0; m < matrices && r.pass; ++m) {
    const std::size_t n = 2 + c.rng.below(5);
    Matrix diff =
        random_strict_matrix(c.rng, n).entries() - random_strict_matrix(c.rng, n).entries();
    const double norm = operator_norm(diff);
    double best_vertex = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      best_vertex = std::max(best_vertex, kernels::l1_norm(diff.row(i), n));
    worst_equality_gap = std::max(worst_equality_gap, std::fabs(best_vertex - norm));
    if (std::fabs(best_vertex - norm) > 1e-15 * static_cast<double>(n)) {
      r.pass = false;
      r.details["counterexample"] = {{"norm", norm}, {"best_vertex", best_vertex}};
      break;
    }
    for (std::size_t k = 0; k < points; ++k) {
      auto nu = random_simplex_point(c.rng, n);
      auto out = propagate(std::span<const double>(nu), diff);
      const double l1 = kernels::l1_norm(out.data(), n);
      worst_excess = std::max(worst_excess, l1 - norm);
      if (l1 > norm + 1e-12) {
        r.pass = false;
        r.details["counterexample"] = {{"l1", l1}, {"norm", norm}, {"nu", nu}};
        break;
      }
    }
  }
  r.details["matrices"] = matrices;
  r.details["points"] = points;
  r.details["worst_excess"] = worst_excess;
  r.details["worst_vertex_gap"] = worst_equality_gap;
  return r;
}

CheckResult check_power_consistency(Ctx& c) {
  CheckResult r{"binary_powering_consistency", true, {}};
  double worst = 0.0;
  const std::size_t matrices = 10;
  for (std::size_t m = 0; m < matrices && r.pass; ++m) {
    const std::size_t n = 2 + c.rng.below(5);
    StochasticMatrix p = random_strict_matrix(c.rng, n);
    ProbabilityVector pi = stationary_distribution(p);
    for (long long t : {1LL, 2LL, 3LL, 7LL, 19LL}) {
      const double fast = worst_case_tv(p, pi, t);
      const double slow = naive_worst_tv(p.entries(), pi.span(), t);
      worst = std::max(worst, std::fabs(fast - slow));
      if (std::fabs(fast - slow) > 1e-12) {
        r.pass = false;
        r.details["counterexample"] = {{"T", t}, {"fast", fast}, {"naive", slow}};
        break;
      }
    }
  }
  r.details["matrices"] = matrices;
  r.details["worst_gap"] = worst;
  return r;
}

CheckResult check_mixing_boundary(Ctx& c) {
  CheckResult r{"mixing_time_boundary", true, {}};
  const std::size_t matrices = 10;
  std::size_t checked = 0;
  for (std::size_t m = 0; m < matrices && r.pass; ++m) {
    const std::size_t n = 2 + c.rng.below(5);
    StochasticMatrix p = random_strict_matrix(c.rng, n, 1 + static_cast<int>(c.rng.below(3)));
    ProbabilityVector pi = stationary_distribution(p);
    for (double eps : {0.3, 0.1, 0.05}) {
      const long long tmix = mixing_time(p, eps).tmix;
      const double at = worst_case_tv(p, pi, tmix);
      const double before = tmix > 1 ? worst_case_tv(p, pi, tmix - 1) : 1.0;
      ++checked;
      if (!(at <= eps) || !(tmix == 1 || before > eps)) {
        r.pass = false;
        r.details["counterexample"] = {{"eps", eps}, {"tmix", tmix}, {"d_tmix", at},
                                       {"d_before", before}};
        break;
      }
    }
  }
  r.details["cases"] = checked;
  return r;
}

CheckResult check_fixed_point_trajectory(Ctx& c) {
  CheckResult r{"fixed_point_trajectory", true, {}};
  double worst = 0.0;
  const std::size_t paths = 5;
  for (std::size_t m = 0; m < paths && r.pass; ++m) {
    const std::size_t n = 2 + c.rng.below(5);
    StochasticMatrix p = random_strict_matrix(c.rng, n);
    Evolution e = Evolution::convex(p, p);
    for (long long t : {1LL, 7LL, 23LL}) {
      Trajectory traj = adiabatic_trajectory(e, t);
      worst = std::max(worst, traj.max_deviation);
      if (traj.max_deviation > 1e-12) {
        r.pass = false;
        r.details["counterexample"] = {{"T", t}, {"max_deviation", traj.max_deviation}};
        break;
      }
    }
  }
  r.details["paths"] = paths;
  r.details["worst_deviation"] = worst;
  return r;
}

CheckResult check_trajectory_probability(Ctx& c) {
  CheckResult r{"trajectory_stays_probability", true, {}};
  const std::size_t instances = 10;
  for (std::size_t m = 0; m < instances && r.pass; ++m) {
    const std::size_t n = 3 + c.rng.below(4);
    Evolution e = random_strict_evolution(c.rng, n, 2 + c.rng.below(3));
    const long long horizon = 1 + static_cast<long long>(c.rng.below(30));
    // Rebuild the propagation by hand and validate each nu_k as a
    // probability vector under the documented tolerances.
    std::vector<double> nu = detail::stationary_of(e.sample_matrix(0.0));
    for (long long k = 1; k <= horizon; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(horizon);
      nu = propagate(std::span<const double>(nu), e.sample_matrix(s));
      try {
        ProbabilityVector::from_raw(nu, 1e-10, 1e-12);
      } catch (const AnalysisError& err) {
        r.pass = false;
        r.details["counterexample"] = {{"T", horizon}, {"k", k}, {"error", err.what()}};
        break;
      }
    }
  }
  r.details["instances"] = instances;
  return r;
}

CheckResult check_telescoping(Ctx& c) {
  CheckResult r{"telescoping_decomposition", true, {}};
  double worst = 0.0;
  const std::size_t instances = 10;
  for (std::size_t m = 0; m < instances && r.pass; ++m) {
    const std::size_t n = 3 + c.rng.below(3);
    Evolution e = random_strict_evolution(c.rng, n, 2 + c.rng.below(3));
    const long long horizon = 2 + static_cast<long long>(c.rng.below(11));
    auto pi_at = [&](long long j) {
      return detail::stationary_of(
          e.sample_matrix(static_cast<double>(j) / static_cast<double>(horizon)));
    };
    // Left side: nu_k - pi(k/T) from the actual propagation.
    const long long k = horizon;
    std::vector<double> nu = pi_at(0);
    std::vector<Matrix> steps;
    for (long long j = 1; j <= k; ++j) {
      Matrix p = e.sample_matrix(static_cast<double>(j) / static_cast<double>(horizon));
      nu = propagate(std::span<const double>(nu), p);
      steps.push_back(std::move(p));
    }
    std::vector<double> lhs(n);
    auto pik = pi_at(k);
    for (std::size_t i = 0; i < n; ++i) lhs[i] = nu[i] - pik[i];
    // Right side: sum_j (pi((j-1)/T) - pi(j/T)) P(j/T) ... P(k/T).
    std::vector<double> rhs(n, 0.0);
    for (long long j = 1; j <= k; ++j) {
      auto prev = pi_at(j - 1);
      auto cur = pi_at(j);
      std::vector<double> term(n);
      for (std::size_t i = 0; i < n; ++i) term[i] = prev[i] - cur[i];
      for (long long step = j; step <= k; ++step)
        term = propagate(std::span<const double>(term), steps[static_cast<std::size_t>(step - 1)]);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += term[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = std::fabs(lhs[i] - rhs[i]);
      worst = std::max(worst, gap);
      if (gap > 1e-10) {
        r.pass = false;
        r.details["counterexample"] = {{"T", horizon}, {"entry", i}, {"gap", gap}};
        break;
      }
    }
  }
  r.details["instances"] = instances;
  r.details["worst_gap"] = worst;
  return r;
}

CheckResult check_continuity_random(Ctx& c) {
  CheckResult r{"stationary_continuity_bound", true, {}};
  const std::size_t instances = 5;
  std::size_t nonvacuous = 0;
  for (std::size_t m = 0; m < instances && r.pass; ++m) {
    const std::size_t n = 3 + c.rng.below(3);
    Evolution e = random_strict_evolution(c.rng, n, 2 + c.rng.below(3));
    // Size the grid from delta so the pair set cannot be empty: spacing of
    // roughly delta/2 puts neighbors inside every delta-window.
    SpectralScan coarse = spectral_scan(e, 201, c.workers);
    const double delta = continuity_delta(0.1, coarse.sigma_floor, e.lipschitz().value, n);
    const std::size_t grid = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(2.0 / delta)) + 1, 201, 20001);
    ContinuityReport rep = check_stationary_continuity(e, 0.1, grid, c.workers);
    if (!rep.vacuous) ++nonvacuous;
    if (!rep.holds) {
      r.pass = false;
      r.details["counterexample"] = {{"instance", m}, {"max_tv", rep.max_tv_seen},
                                     {"delta", rep.delta}};
    }
  }
  if (nonvacuous == 0) {
    r.pass = false;
    r.details["counterexample"] = "every instance was vacuous; the bound was never exercised";
  }
  r.details["instances"] = instances;
  r.details["nonvacuous"] = nonvacuous;
  return r;
}

CheckResult check_lower_bound_random(Ctx& c) {
  CheckResult r{"mixing_lower_bound", true, {}};
  const std::size_t instances = 5;
  std::size_t pointwise = 0;
  for (std::size_t m = 0; m < instances && r.pass; ++m) {
    const std::size_t n = 3 + c.rng.below(3);
    const double eps = m % 2 == 0 ? 0.05 : 0.1;
    Evolution e = m < 3 ? random_strict_evolution(c.rng, n, 2 + c.rng.below(3))
                        : [&] {  // constant paths exercise the degenerate grid
                            StochasticMatrix p = random_strict_matrix(c.rng, n);
                            return Evolution::convex(p, p);
                          }();
    SpectralScan scan = spectral_scan(e, 201, c.workers);
    LargestMixingResult mix = largest_mixing_time(e, eps, 201, kDefaultCap, c.workers);
    const double margin = 1.0 - 2.0 * std::sqrt(static_cast<double>(n)) * eps;
    for (std::size_t i = 0; i < scan.grid.size(); ++i) {
      ++pointwise;
      if (margin / scan.sigma[i] > static_cast<double>(mix.tmix_at[i])) {
        r.pass = false;
        r.details["counterexample"] = {{"s", scan.grid[i]},
                                       {"lhs", margin / scan.sigma[i]},
                                       {"tmix", mix.tmix_at[i]}};
        break;
      }
    }
    MixingLowerBoundVerdict v = check_mixing_lower_bound(e, eps, mix.tmix_sup, scan);
    if (!v.holds || v.vacuous) {
      r.pass = false;
      r.details["counterexample"] = {{"lhs", v.lhs}, {"rhs", v.rhs}, {"vacuous", v.vacuous}};
    }
  }
  r.details["instances"] = instances;
  r.details["pointwise_cases"] = pointwise;
  return r;
}

CheckResult check_quadratic_desk(Ctx& c) {
  CheckResult r{"quadratic_bound_desk_scale", true, {}};
  const std::size_t instances = 3;
  ordered_json rows = ordered_json::array();
  for (std::size_t m = 0; m < instances && r.pass; ++m) {
    const std::size_t n = 3 + c.rng.below(3);
    const double eps = 0.05;
    Evolution e = random_strict_evolution(c.rng, n, 2 + c.rng.below(3));
    const double lip = e.lipschitz().value;
    LargestMixingResult mix = largest_mixing_time(e, eps / 2.0, 201, kDefaultCap, c.workers);
    BoundReport bound = quadratic_bound(n, lip, mix.tmix_sup, eps, BoundVariant::ProofFaithful);
    SadResult sad = stable_adiabatic_time(e, eps, std::max(1LL, bound.ceiling),
                                          SearchStrategy::Exact, c.workers);
    rows.push_back({{"n", n}, {"tsad", sad.tsad ? ordered_json(*sad.tsad) : ordered_json(nullptr)},
                    {"ceiling", bound.ceiling}});
    if (!sad.tsad || *sad.tsad > bound.ceiling) {
      r.pass = false;
      r.details["counterexample"] = rows.back();
    }
  }
  r.details["instances"] = instances;
  r.details["cases"] = std::move(rows);
  return r;
}

CheckResult check_kernel_equivalence(Ctx& c) {
  CheckResult r{"kernel_backend_equivalence", true, {}};
  const auto original = kernels::active_backend();
  r.details["active_backend"] = std::string(kernels::backend_name(original));
  if (original == kernels::Backend::Scalar) {
    r.details["note"] = "only the scalar backend is available on this host";
    return r;
  }
  const std::size_t trials = 50;
  double worst_reduction_gap = 0.0;
  for (std::size_t t = 0; t < trials && r.pass; ++t) {
    const std::size_t n = 1 + c.rng.below(40);
    std::vector<double> a(n * n), b(n * n), x(n);
    for (double& v : a) v = c.rng.uniform(-1.0, 1.0);
    for (double& v : b) v = c.rng.uniform(-1.0, 1.0);
    for (double& v : x) v = c.rng.uniform(-1.0, 1.0);
    const double tt = c.rng.uniform();

    std::vector<double> lerp_s(n * n), lerp_v(n * n), row_s(n), row_v(n), mat_s(n * n),
        mat_v(n * n);
    kernels::scalar::lerp(a.data(), b.data(), tt, lerp_s.data(), n * n);
    kernels::scalar::row_times_matrix(x.data(), a.data(), row_s.data(), n);
    kernels::scalar::matmul(a.data(), b.data(), mat_s.data(), n);
    const double l1_s = kernels::scalar::l1_norm(a.data(), n * n);
    const double diff_s = kernels::scalar::l1_diff(a.data(), b.data(), n * n);
    const double rowsum_s = kernels::scalar::max_abs_row_sum(a.data(), n);

    kernels::lerp(a.data(), b.data(), tt, lerp_v.data(), n * n);
    kernels::row_times_matrix(x.data(), a.data(), row_v.data(), n);
    kernels::matmul(a.data(), b.data(), mat_v.data(), n);
    const double l1_v = kernels::l1_norm(a.data(), n * n);
    const double diff_v = kernels::l1_diff(a.data(), b.data(), n * n);
    const double rowsum_v = kernels::max_abs_row_sum(a.data(), n);

    if (lerp_s != lerp_v || row_s != row_v || mat_s != mat_v) {
      r.pass = false;
      r.details["counterexample"] = {{"n", n}, {"kind", "elementwise kernels not bit-identical"}};
      break;
    }
    for (auto [s, v] : {std::pair{l1_s, l1_v}, {diff_s, diff_v}, {rowsum_s, rowsum_v}}) {
      const double gap = std::fabs(s - v) / std::max(1.0, std::fabs(s));
      worst_reduction_gap = std::max(worst_reduction_gap, gap);
      if (gap > 1e-13) {
        r.pass = false;
        r.details["counterexample"] = {{"n", n}, {"scalar", s}, {"vector", v}};
        break;
      }
    }
  }
  r.details["trials"] = trials;
  r.details["worst_reduction_gap"] = worst_reduction_gap;
  return r;
}

CheckResult check_worker_determinism(Ctx& c) {
  CheckResult r{"worker_count_determinism", true, {}};
  Evolution e = random_strict_evolution(c.rng, 5, 3);
  std::vector<std::string> dumps;
  for (int workers : {1, 4}) {
    ordered_json bundle;
    bundle["spectral"] = json_of(spectral_scan(e, 201, workers));
    bundle["mixing"] = json_of(largest_mixing_time(e, 0.1, 201, kDefaultCap, workers));
    bundle["sad"] = json_of(stable_adiabatic_time(e, 0.1, 1000, SearchStrategy::Exact, workers));
    bundle["continuity"] = json_of(check_stationary_continuity(e, 0.1, 201, workers));
    dumps.push_back(bundle.dump());
  }
  r.pass = dumps[0] == dumps[1];
  r.details["bytes"] = dumps[0].size();
  if (!r.pass) r.details["counterexample"] = "worker counts 1 and 4 disagree byte-wise";
  return r;
}

}  // namespace

BatteryResult run_battery(const BatteryOptions& options) {
  BatteryResult result;
  result.seed = options.seed;
  result.inject_fault = options.inject_fault;

  using CheckFn = CheckResult (*)(Ctx&);
  const std::pair<const char*, CheckFn> checks[] = {
      {"tv_l1_identity", check_tv_l1_identity},
      {"l1_contraction", check_l1_contraction},
      {"tv_monotonicity", check_tv_monotonicity},
      {"vertex_sufficiency", check_vertex_sufficiency},
      {"operator_norm_simplex_oracle", check_operator_norm_oracle},
      {"binary_powering_consistency", check_power_consistency},
      {"mixing_time_boundary", check_mixing_boundary},
      {"fixed_point_trajectory", check_fixed_point_trajectory},
      {"trajectory_stays_probability", check_trajectory_probability},
      {"telescoping_decomposition", check_telescoping},
      {"stationary_continuity_bound", check_continuity_random},
      {"mixing_lower_bound", check_lower_bound_random},
      {"quadratic_bound_desk_scale", check_quadratic_desk},
      {"kernel_backend_equivalence", check_kernel_equivalence},
      {"worker_count_determinism", check_worker_determinism},
  };

  SplitMix64 master(options.seed);
  result.all_pass = true;
  for (const auto& [name, fn] : checks) {
    // Each check gets its own derived stream so its instances do not depend
    // on how earlier checks consumed randomness.
    Ctx ctx{SplitMix64(master.next()), options.workers, options.inject_fault};
    CheckResult cr = fn(ctx);
    cr.name = name;
    result.all_pass = result.all_pass && cr.pass;
    result.checks.push_back(std::move(cr));
  }
  return result;
}

ordered_json json_of(const BatteryResult& r) {
  ordered_json out;
  out["seed"] = r.seed;
  out["inject_fault"] = r.inject_fault;
  out["all_pass"] = r.all_pass;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["details"] = c.details;
    checks.push_back(std::move(j));
  }
  out["checks"] = std::move(checks);
  return out;
}

}  // namespace sadt
