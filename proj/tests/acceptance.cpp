// Acceptance gate: one line per criterion, every criterion always runs, any
// red fails the binary.  Tolerances are stated inline next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "sadt/adiabatic.hpp"
#include "sadt/instances.hpp"
#include "sadt/mixing.hpp"
#include "sadt/rng.hpp"
#include "sadt/spectral.hpp"
#include "sadt/verify.hpp"

using namespace sadt;

namespace {

constexpr int kWorkers = 8;
constexpr std::size_t kScanGrid = 201;  // grid for per-instance scans

int g_failed = 0;

void verdict(bool pass, const std::string& title, const std::string& detail,
             std::chrono::steady_clock::time_point t0) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  std::printf("[%s] %s  (%s, %lld ms)\n", pass ? "PASS" : "FAIL", title.c_str(), detail.c_str(),
              static_cast<long long>(ms));
  if (!pass) ++g_failed;
}

struct Instance {
  Evolution e;
  double eps = 0.0;
  std::size_t n = 0;
};

// 50 seeded strictly-positive piecewise-linear paths: n cycles 3..6, keyframe
// count cycles 2..4, eps alternates 0.05 / 0.1 (always below 1/(2 sqrt n)).
std::vector<Instance> strict_instances() {
  SplitMix64 master(20260826u);
  std::vector<Instance> out;
  for (int i = 0; i < 50; ++i) {
    SplitMix64 rng(master.next());
    const std::size_t n = 3 + static_cast<std::size_t>(i % 4);
    const std::size_t keyframes = 2 + static_cast<std::size_t>(i % 3);
    out.push_back({random_strict_evolution(rng, n, keyframes), i % 2 == 0 ? 0.05 : 0.1, n});
  }
  return out;
}

std::vector<Instance> constant_instances() {
  SplitMix64 master(977100u);
  std::vector<Instance> out;
  for (int i = 0; i < 20; ++i) {
    SplitMix64 rng(master.next());
    const std::size_t n = 3 + static_cast<std::size_t>(i % 4);
    auto p = random_strict_matrix(rng, n);
    out.push_back({Evolution::convex(p, p), i % 2 == 0 ? 0.05 : 0.1, n});
  }
  return out;
}

// Criterion: on every seeded strict path the exact-scan stable adiabatic time
// exists and never exceeds the ceiling of the quadratic bound (proof-faithful
// variant: mixing supremum taken at eps/2).  Exact integer comparison.
void criterion_quadratic_bound(const std::vector<Instance>& instances) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  double worst_frac = 0.0;
  long long max_tsad = 0;
  for (std::size_t i = 0; i < instances.size() && pass; ++i) {
    const Instance& ins = instances[i];
    const double lip = ins.e.lipschitz().value;
    const auto half = largest_mixing_time(ins.e, ins.eps / 2.0, kScanGrid, kDefaultCap, kWorkers,
                                          ValidationMode::Strict);
    const auto bound =
        quadratic_bound(ins.n, lip, half.tmix_sup, ins.eps, BoundVariant::ProofFaithful);
    const auto sad = stable_adiabatic_time(ins.e, ins.eps, std::max(1LL, bound.ceiling),
                                           SearchStrategy::Exact, kWorkers);
    if (!sad.tsad || *sad.tsad > bound.ceiling) {
      pass = false;
      detail = "instance " + std::to_string(i) + ": tsad " +
               (sad.tsad ? std::to_string(*sad.tsad) : std::string("none")) + " vs ceiling " +
               std::to_string(bound.ceiling);
      break;
    }
    worst_frac = std::max(
        worst_frac, static_cast<double>(*sad.tsad) / static_cast<double>(bound.ceiling));
    max_tsad = std::max(max_tsad, *sad.tsad);
  }
  if (pass)
    detail = "50 paths, max tsad " + std::to_string(max_tsad) + ", worst tsad/ceiling " +
             std::to_string(worst_frac);
  verdict(pass, "exact stable adiabatic time stays below the quadratic bound ceiling", detail, t0);
}

// Criterion: (1 - 2 sqrt(n) eps) / sigma <= tmix pointwise on the scan grid
// and in aggregate (floor vs supremum), non-vacuously.  Exact float compare.
void criterion_mixing_lower_bound(const std::vector<Instance>& strict,
                                  const std::vector<Instance>& constant) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  double min_slack = 1e300;
  std::size_t points = 0;

  auto run_one = [&](const Instance& ins, std::size_t index, ValidationMode mode) {
    const double numer = 1.0 - 2.0 * std::sqrt(static_cast<double>(ins.n)) * ins.eps;
    if (numer <= 0.0) {
      pass = false;
      detail = "instance " + std::to_string(index) + " is vacuous (eps too large)";
      return;
    }
    const auto scan = spectral_scan(ins.e, kScanGrid, kWorkers);
    const auto mix = largest_mixing_time(ins.e, ins.eps, kScanGrid, kDefaultCap, kWorkers, mode);
    for (std::size_t k = 0; k < scan.grid.size(); ++k) {
      const double lhs = numer / scan.sigma[k];
      const double rhs = static_cast<double>(mix.tmix_at[k]);
      if (lhs > rhs) {
        pass = false;
        detail = "instance " + std::to_string(index) + " at s = " + std::to_string(scan.grid[k]) +
                 ": " + std::to_string(lhs) + " > tmix " + std::to_string(mix.tmix_at[k]);
        return;
      }
      min_slack = std::min(min_slack, rhs - lhs);
      ++points;
    }
    const auto agg = check_mixing_lower_bound(ins.e, ins.eps, mix.tmix_sup, scan);
    if (agg.vacuous || !agg.holds) {
      pass = false;
      detail = "aggregate verdict failed on instance " + std::to_string(index);
    }
  };

  for (std::size_t i = 0; i < strict.size() && pass; ++i)
    run_one(strict[i], i, ValidationMode::Strict);
  for (std::size_t i = 0; i < constant.size() && pass; ++i)
    run_one(constant[i], 50 + i, ValidationMode::Relaxed);

  if (pass)
    detail = std::to_string(points) + " grid points across 70 paths, min slack " +
             std::to_string(min_slack);
  verdict(pass, "spectral lower bound on the mixing time holds pointwise and in aggregate", detail,
          t0);
}

// Criterion: the stationary-continuity check holds with a non-vacuous pair
// set on every strict path; the grid is sized from delta so neighbours
// actually fall inside the window.  Threshold: max observed TV <= eps.
void criterion_stationary_continuity(const std::vector<Instance>& instances) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  double worst_tv_margin = 0.0;
  std::size_t min_pairs = SIZE_MAX;
  for (std::size_t i = 0; i < instances.size() && pass; ++i) {
    const Instance& ins = instances[i];
    const auto coarse = spectral_scan(ins.e, kScanGrid, kWorkers);
    const double lip = ins.e.lipschitz().value;
    const double delta = continuity_delta(ins.eps, coarse.sigma_floor, lip, ins.n);
    const std::size_t grid = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(2.0 / delta)) + 1, 1001, 30001);
    const auto rep = check_stationary_continuity(ins.e, ins.eps, grid, kWorkers);
    if (!rep.holds || rep.vacuous) {
      pass = false;
      detail = "instance " + std::to_string(i) + ": holds=" + (rep.holds ? "yes" : "no") +
               " pairs=" + std::to_string(rep.pairs_tested);
      break;
    }
    worst_tv_margin = std::max(worst_tv_margin, rep.max_tv_seen / rep.eps);
    min_pairs = std::min(min_pairs, rep.pairs_tested);
  }
  if (pass)
    detail = "50 paths, min pairs " + std::to_string(min_pairs) + ", worst max_tv/eps " +
             std::to_string(worst_tv_margin);
  verdict(pass, "stationary laws move continuously within the predicted step size", detail, t0);
}

// Criterion: on the built-in reset/shift family at eps = 0.2 the ratio
// tsad * eps / tmix_sup^2 stays inside a frozen band for n = 4, 6, 8, 10.
// Band [0.25, 0.55] recorded from the first run of this suite (ratio spread
// 2.2x, comfortably under the allowed 20x), so the quadratic growth of the
// stable adiabatic time in the mixing time is pinned with a regression range.
void criterion_family_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr double kBandLo = 0.25;
  constexpr double kBandHi = 0.55;
  static_assert(kBandLo > 0.0 && kBandHi / kBandLo <= 20.0);
  const double eps = 0.2;
  bool pass = true;
  std::string detail;
  std::string ratios;
  for (std::size_t n : {4u, 6u, 8u, 10u}) {
    Evolution fam = reset_shift_family(n);
    const auto mix = largest_mixing_time(fam, eps, 1001, kDefaultCap, kWorkers);
    long long cap = kDefaultCap;
    if (eps < 1.0 / (2.0 * std::sqrt(static_cast<double>(n)))) {
      const auto half = largest_mixing_time(fam, eps / 2.0, 1001, kDefaultCap, kWorkers);
      cap = std::max(1LL, quadratic_bound(n, fam.lipschitz().value, half.tmix_sup, eps,
                                         BoundVariant::ProofFaithful)
                              .ceiling);
    }
    const auto sad = stable_adiabatic_time(fam, eps, cap, SearchStrategy::Exact, kWorkers);
    if (!sad.tsad) {
      pass = false;
      detail = "n = " + std::to_string(n) + ": no feasible horizon up to " + std::to_string(cap);
      break;
    }
    const double ratio = static_cast<double>(*sad.tsad) * eps /
                         (static_cast<double>(mix.tmix_sup) * static_cast<double>(mix.tmix_sup));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%sn=%zu:%.4f", ratios.empty() ? "" : " ", n, ratio);
    ratios += buf;
    if (!(ratio >= kBandLo && ratio <= kBandHi)) {
      pass = false;
      detail = "n = " + std::to_string(n) + ": ratio " + std::to_string(ratio) +
               " outside [0.25, 0.55]";
      break;
    }
  }
  if (pass) detail = ratios;
  verdict(pass, "family scaling ratio tsad*eps/tmix_sup^2 stays in the frozen band", detail, t0);
}

// Criterion: closed-form scalar oracles.  The two-state chain [[.75,.25],
// [.25,.75]] mixes in exactly 3 steps at eps = 0.1 (d(T) = (1/2)^{T+1});
// I - P = 0.25*[[1,-1],[-1,1]] has smallest nonzero singular value exactly
// 2 * 0.25 = 0.5 (tolerance 1e-12); the family's stationary law at
// (n = 3, s = 0.5) is (0.5, 0.25, 0.25) (tolerance 1e-12).
void criterion_scalar_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail = "mixing exact, sigma and stationary within 1e-12";

  auto p = StochasticMatrix::ingest({{0.75, 0.25}, {0.25, 0.75}});
  const auto mix = mixing_time(p, 0.1);
  if (mix.tmix != 3) {
    pass = false;
    detail = "two-state mixing time: got " + std::to_string(mix.tmix) + ", want 3";
  }

  const double sigma = sigma_at(p);
  if (pass && std::fabs(sigma - 0.5) > 1e-12) {
    pass = false;
    detail = "two-state sigma: got " + std::to_string(sigma) + ", want 0.5";
  }

  if (pass) {
    auto pi = stationary_distribution(reset_shift_family(3).sample(0.5));
    const double want[3] = {0.5, 0.25, 0.25};
    for (int i = 0; i < 3; ++i) {
      if (std::fabs(pi.entries()[static_cast<std::size_t>(i)] - want[i]) > 1e-12) {
        pass = false;
        detail = "family stationary law off at index " + std::to_string(i);
        break;
      }
    }
  }
  verdict(pass, "closed-form oracles: mixing time, spectral gap, stationary law", detail, t0);
}

// Criterion: the full seeded property battery passes with its default seed.
void criterion_property_battery() {
  const auto t0 = std::chrono::steady_clock::now();
  BatteryResult result = run_battery(BatteryOptions{});
  std::string detail;
  if (result.all_pass) {
    detail = std::to_string(result.checks.size()) + " checks, seed " +
             std::to_string(result.seed);
  } else {
    for (const auto& c : result.checks)
      if (!c.pass) detail += (detail.empty() ? "" : ", ") + c.name;
    detail = "failing: " + detail;
  }
  verdict(result.all_pass, "seeded property battery (invariants and determinism)", detail, t0);
}

}  // namespace

int main() {
  const auto instances = strict_instances();
  const auto constants = constant_instances();

  criterion_quadratic_bound(instances);
  criterion_mixing_lower_bound(instances, constants);
  criterion_stationary_continuity(instances);
  criterion_family_scaling();
  criterion_scalar_oracles();
  criterion_property_battery();

  if (g_failed == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failed);
  return 1;
}
