#pragma once
#include <cstddef>
#include <vector>

#include "sadt/evolution.hpp"
#include "sadt/matrix.hpp"
#include "sadt/rng.hpp"

namespace sadt {

// Seeded generators shared by the verification battery, the test suites, and
// the demo command.  Everything here is a pure function of the RNG stream.

// Strictly positive rows (floor 0.02 before normalization), with an exponent
// knob: higher sharpness concentrates mass on few states, which slows mixing
// and moves the stationary law around more.
StochasticMatrix random_strict_matrix(SplitMix64& rng, std::size_t n, int sharpness = 1);

// Piecewise-linear evolution with `keyframes` strictly positive keyframes on
// an evenly spaced breakpoint grid.  Every sample is strictly positive, so
// the strict structural certificate passes by construction.
Evolution random_strict_evolution(SplitMix64& rng, std::size_t n, std::size_t keyframes,
                                  int sharpness = 1);

// Probability vector with strictly positive entries.
std::vector<double> random_simplex_point(SplitMix64& rng, std::size_t n);

// The optimality family: P0 sends every state to state 0, P1 shifts state i
// to i+1 and fixes the last state.  Along the straight line between them the
// stationary law is ((1-s), (1-s)s, ..., (1-s)s^{n-2}, s^{n-1}).  Endpoints
// are reducible, so only the relaxed certificate passes.
Evolution reset_shift_family(std::size_t n);

// Closed-form stationary law of the family at s (see above).
std::vector<double> reset_shift_stationary(std::size_t n, double s);

}  // namespace sadt
