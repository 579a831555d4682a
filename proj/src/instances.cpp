#include "sadt/instances.hpp"

#include <cmath>

namespace sadt {

StochasticMatrix random_strict_matrix(SplitMix64& rng, std::size_t n, int sharpness) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double w = 0.02 + std::pow(rng.uniform(), sharpness);
      m.at(i, j) = w;
      sum += w;
    }
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) /= sum;
  }
  return StochasticMatrix::ingest(std::move(m), 1e-9);
}

Evolution random_strict_evolution(SplitMix64& rng, std::size_t n, std::size_t keyframes,
                                  int sharpness) {
  std::vector<double> breaks;
  std::vector<StochasticMatrix> frames;
  for (std::size_t k = 0; k < keyframes; ++k) {
    breaks.push_back(static_cast<double>(k) / static_cast<double>(keyframes - 1));
    frames.push_back(random_strict_matrix(rng, n, sharpness));
  }
  breaks.back() = 1.0;
  return Evolution::piecewise_linear(std::move(breaks), std::move(frames));
}

std::vector<double> random_simplex_point(SplitMix64& rng, std::size_t n) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = 1e-6 + rng.uniform();
    sum += v[i];
  }
  for (double& x : v) x /= sum;
  return v;
}

Evolution reset_shift_family(std::size_t n) {
  Matrix p0(n), p1(n);
  for (std::size_t i = 0; i < n; ++i) {
    p0.at(i, 0) = 1.0;
    p1.at(i, std::min(i + 1, n - 1)) = 1.0;
  }
  return Evolution::convex(StochasticMatrix::ingest(std::move(p0)),
                           StochasticMatrix::ingest(std::move(p1)));
}

std::vector<double> reset_shift_stationary(std::size_t n, double s) {
  std::vector<double> pi(n);
  double power = 1.0;  // s^i
  for (std::size_t i = 0; i + 1 < n; ++i) {
    pi[i] = (1.0 - s) * power;
    power *= s;
  }
  pi[n - 1] = power;  // s^{n-1}
  return pi;
}

}  // namespace sadt
