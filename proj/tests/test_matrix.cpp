#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "sadt/instances.hpp"
#include "sadt/matrix.hpp"
#include "sadt/rng.hpp"

using namespace sadt;

namespace {

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const AnalysisError& e) {
    return e.code();
  }
  throw std::logic_error("expected an AnalysisError");
}

// Brute-force structure oracle for tiny matrices: reachability by Warshall
// closure, irreducible iff all pairs mutually reachable, recurrent classes by
// closure over the communication relation, period by gcd over all simple
// cycle lengths found by DFS within the class.
struct BruteStructure {
  bool irreducible;
  std::vector<std::vector<std::size_t>> recurrent_classes;
  std::vector<std::size_t> periods;
};

BruteStructure brute_structure(const Matrix& m) {
  const std::size_t n = m.n;
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = m.at(i, j) > 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = 1;

  auto communicates = [&](std::size_t i, std::size_t j) {
    return i == j || (reach[i][j] && reach[j][i]);
  };

  BruteStructure out;
  out.irreducible = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && !(reach[i][j] && reach[j][i])) out.irreducible = false;

  std::vector<char> assigned(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = 0; j < n; ++j)
      if (communicates(i, j)) {
        cls.push_back(j);
        assigned[j] = 1;
      }
    bool closed = true;
    for (std::size_t u : cls)
      for (std::size_t v = 0; v < n; ++v)
        if (m.at(u, v) > 0.0 && !communicates(i, v)) closed = false;
    bool has_edge = false;
    for (std::size_t u : cls)
      for (std::size_t v : cls)
        if (m.at(u, v) > 0.0) has_edge = true;
    if (!(closed && has_edge)) continue;

    // Period of cls.front(): gcd of the lengths of closed walks through it.
    // Walks up to 3n cover every simple cycle plus enough concatenations.
    std::size_t g = 0;
    std::vector<std::size_t> frontier{cls.front()};
    for (std::size_t len = 1; len <= 3 * n; ++len) {
      std::vector<std::size_t> next;
      for (std::size_t u : frontier)
        for (std::size_t v : cls) {
          if (m.at(u, v) <= 0.0) continue;
          if (v == cls.front()) g = std::gcd(g, len);
          next.push_back(v);
        }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      frontier = std::move(next);
    }
    out.recurrent_classes.push_back(cls);
    out.periods.push_back(g);
  }
  std::sort(out.recurrent_classes.begin(), out.recurrent_classes.end());
  return out;
}

}  // namespace

TEST_CASE("ingest accepts, clamps, renormalizes") {
  // Clean symmetric chain.
  auto p = StochasticMatrix::ingest({{0.75, 0.25}, {0.25, 0.75}});
  CHECK(p.structure().irreducible);
  CHECK(p.structure().aperiodic);
  CHECK(p.at(0, 1) == 0.25);

  // Tiny boundary violations get clamped, row then renormalized.
  auto q = StochasticMatrix::ingest({{1.0 + 5e-16, -5e-16}, {0.5, 0.5}});
  CHECK(q.at(0, 0) == 1.0);
  CHECK(q.at(0, 1) == 0.0);

  // Row sums slightly off within row_tol are rescaled to exactly 1-ish.
  auto r = StochasticMatrix::ingest({{0.6 + 4e-10, 0.4}, {0.3, 0.7}});
  double sum = r.at(0, 0) + r.at(0, 1);
  CHECK(std::fabs(sum - 1.0) <= 1e-15);

  CHECK(code_of([] { StochasticMatrix::ingest({{0.7, 0.2}, {0.5, 0.5}}); }) ==
        errc::row_sum_violation);
  CHECK(code_of([] { StochasticMatrix::ingest({{1.1, -0.1}, {0.5, 0.5}}); }) ==
        errc::negative_entry);
  CHECK(code_of([] { StochasticMatrix::ingest({{1.0, 0.0}, {0.5}}); }) == errc::not_square);
  CHECK(code_of([] {
          StochasticMatrix::ingest({{std::nan(""), 1.0}, {0.5, 0.5}});
        }) == errc::bad_input);
}

TEST_CASE("classification of canonical supports") {
  // Identity: three absorbing states, each its own aperiodic recurrent class.
  auto id = StochasticMatrix::ingest({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK_FALSE(id.structure().irreducible);
  CHECK(id.structure().aperiodic);
  CHECK(id.structure().recurrent_classes.size() == 3);
  CHECK_FALSE(id.structure().period.has_value());

  // Two-state swap: irreducible with period 2.
  auto swap = StochasticMatrix::ingest({{0, 1}, {1, 0}});
  CHECK(swap.structure().irreducible);
  CHECK_FALSE(swap.structure().aperiodic);
  CHECK(swap.structure().period == 2);

  // Deterministic shift toward the last state: unique aperiodic absorbing
  // class, but reducible.
  auto shift = StochasticMatrix::ingest({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  CHECK_FALSE(shift.structure().irreducible);
  CHECK(shift.structure().aperiodic);
  REQUIRE(shift.structure().recurrent_classes.size() == 1);
  CHECK(shift.structure().recurrent_classes[0] == std::vector<std::size_t>{2});
  CHECK(shift.structure().period == 1);

  // Three-cycle: period 3.
  auto cyc = StochasticMatrix::ingest({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  CHECK(cyc.structure().period == 3);
}

TEST_CASE("classification agrees with the brute-force oracle") {
  SplitMix64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng.below(4);  // n <= 5
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Random sparse support; force at least one outgoing edge per row.
      bool any = false;
      for (std::size_t j = 0; j < n; ++j)
        if (rng.uniform() < 0.35) {
          m.at(i, j) = 1.0;
          any = true;
        }
      if (!any) m.at(i, rng.below(n)) = 1.0;
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += m.at(i, j);
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) /= s;
    }
    Classification got = classify_structure(m);
    BruteStructure want = brute_structure(m);
    CHECK(got.irreducible == want.irreducible);
    // Both sides sort classes by smallest member, so periods align by index.
    REQUIRE(got.recurrent_classes == want.recurrent_classes);
    CHECK(got.class_periods == want.periods);
    ++compared;
  }
  CHECK(compared == 400);
}

TEST_CASE("tv distance and operator norm basics") {
  auto e0 = ProbabilityVector::point_mass(2, 0);
  auto e1 = ProbabilityVector::point_mass(2, 1);
  CHECK(tv_distance(e0, e1) == 1.0);
  CHECK(tv_distance(e0, e0) == 0.0);
  auto pi = ProbabilityVector::from_raw({0.5, 0.25, 0.25});
  auto p0 = ProbabilityVector::point_mass(3, 0);
  CHECK(tv_distance(pi, p0) == 0.5);

  Matrix zero(3);
  CHECK(operator_norm(zero) == 0.0);
  auto a = StochasticMatrix::ingest({{1, 0, 0}, {1, 0, 0}, {1, 0, 0}});
  auto b = StochasticMatrix::ingest({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  CHECK(operator_norm(b.entries() - a.entries()) == 2.0);
}

TEST_CASE("operator norm equals the max over point masses and dominates the simplex") {
  SplitMix64 rng(5150);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    Matrix diff = random_strict_matrix(rng, n).entries() - random_strict_matrix(rng, n).entries();
    const double norm = operator_norm(diff);
    double vertex_best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = propagate(ProbabilityVector::point_mass(n, i).span(), diff);
      double l1 = 0.0;
      for (double v : row) l1 += std::fabs(v);
      vertex_best = std::max(vertex_best, l1);
    }
    CHECK(vertex_best == doctest::Approx(norm).epsilon(1e-14));
    for (int k = 0; k < 1000; ++k) {
      auto nu = random_simplex_point(rng, n);
      auto out = propagate(std::span<const double>(nu), diff);
      double l1 = 0.0;
      for (double v : out) l1 += std::fabs(v);
      CHECK(l1 <= norm + 1e-12);
    }
  }
}

TEST_CASE("propagate contracts l1 and fixes the stationary law") {
  auto p = StochasticMatrix::ingest({{0.75, 0.25}, {0.25, 0.75}});
  auto pi = stationary_distribution(p);
  CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
  auto moved = propagate(pi, p);
  CHECK(tv_distance(pi, moved) <= 1e-15);

  // Point mass through the deterministic shift lands on the next state.
  auto shift = StochasticMatrix::ingest({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  auto hit = propagate(ProbabilityVector::point_mass(3, 0), shift);
  CHECK(hit[1] == 1.0);

  // Signed vectors never grow in l1.
  SplitMix64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    auto q = random_strict_matrix(rng, n);
    std::vector<double> nu(n);
    for (double& x : nu) x = rng.uniform(-1.0, 1.0);
    auto out = propagate(std::span<const double>(nu), q.entries());
    double before = 0.0, after = 0.0;
    for (double v : nu) before += std::fabs(v);
    for (double v : out) after += std::fabs(v);
    CHECK(after <= before + 1e-12);
  }
}

TEST_CASE("stationary distributions: values, residuals, and refusals") {
  // Closed form for the reset/shift family at the midpoint.
  Evolution fam = reset_shift_family(3);
  auto pm = fam.sample(0.5);
  auto pi = stationary_distribution(pm, ValidationMode::Strict);
  CHECK(std::fabs(pi[0] - 0.5) <= 1e-12);
  CHECK(std::fabs(pi[1] - 0.25) <= 1e-12);
  CHECK(std::fabs(pi[2] - 0.25) <= 1e-12);

  // Residual invariant on random instances.
  SplitMix64 rng(8899);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    auto p = random_strict_matrix(rng, n, 1 + static_cast<int>(rng.below(4)));
    auto st = stationary_distribution(p);
    CHECK(detail::stationary_residual(st.span(), p.entries()) <= 1e-10);
  }

  // Unique but reducible: fine relaxed, refused strict.
  auto shift = StochasticMatrix::ingest({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}});
  auto abs_pi = stationary_distribution(shift);
  CHECK(abs_pi[2] == doctest::Approx(1.0));
  CHECK(code_of([&] { stationary_distribution(shift, ValidationMode::Strict); }) ==
        errc::not_irreducible);

  auto id = StochasticMatrix::ingest({{1, 0}, {0, 1}});
  CHECK(code_of([&] { stationary_distribution(id); }) == errc::multiple_recurrent_classes);

  auto swap = StochasticMatrix::ingest({{0, 1}, {1, 0}});
  CHECK(code_of([&] { stationary_distribution(swap); }) == errc::periodic_recurrent_class);
  CHECK(code_of([&] { stationary_distribution(swap, ValidationMode::Strict); }) ==
        errc::periodic_recurrent_class);
}

TEST_CASE("tv equals half the l1 distance on random pairs") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    auto mu = random_simplex_point(rng, n);
    auto nu = random_simplex_point(rng, n);
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) l1 += std::fabs(mu[i] - nu[i]);
    CHECK(std::fabs(tv_distance(std::span<const double>(mu), std::span<const double>(nu)) -
                    0.5 * l1) <= 1e-15 * static_cast<double>(n));
  }
}

TEST_CASE("probability vector validation") {
  CHECK(code_of([] { ProbabilityVector::from_raw({0.5, 0.6}); }) == errc::bad_input);
  CHECK(code_of([] { ProbabilityVector::from_raw({-0.1, 1.1}); }) == errc::bad_input);
  auto v = ProbabilityVector::from_raw({0.5 - 1e-13, 0.5, 1e-13 - 1e-14}, 1e-12, 1e-12);
  CHECK(v.dim() == 3);
  auto clamped = ProbabilityVector::from_raw({1.0 + 5e-13, -5e-13}, 1e-11, 1e-12);
  CHECK(clamped[1] == 0.0);
}
