#include <algorithm>
#include <cmath>

#include "sadt/kernels.hpp"

namespace sadt::kernels::scalar {

void lerp(const double* a, const double* b, double t, double* out, std::size_t m) {
  const double u = 1.0 - t;
  for (std::size_t i = 0; i < m; ++i) out[i] = u * a[i] + t * b[i];
}

void row_times_matrix(const double* x, const double* a, double* y, std::size_t n) {
  std::fill(y, y + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double* row = a + i * n;
    for (std::size_t j = 0; j < n; ++j) y[j] += xi * row[j];
  }
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  std::fill(c, c + n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      const double* brow = b + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

double l1_norm(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i]);
  return acc;
}

double l1_diff(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
  return acc;
}

double max_abs_row_sum(const double* a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, l1_norm(a + i * n, n));
  return best;
}

}  // namespace sadt::kernels::scalar
