#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "sadt/kernels.hpp"

// Elementwise kernels mirror the scalar op order exactly (independent mul then
// add per element, no FMA), so results are bit-identical to the scalar
// backend.  Reductions use four parallel accumulators and therefore agree with
// the scalar backend only up to rounding.

namespace sadt::kernels::avx2 {

namespace {
inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(v, mask);
}
inline double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}
}  // namespace

void lerp(const double* a, const double* b, double t, double* out, std::size_t m) {
  const double u = 1.0 - t;
  const __m256d vu = _mm256_set1_pd(u);
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(vu, va), _mm256_mul_pd(vt, vb)));
  }
  for (; i < m; ++i) out[i] = u * a[i] + t * b[i];
}

void row_times_matrix(const double* x, const double* a, double* y, std::size_t n) {
  std::fill(y, y + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const __m256d vxi = _mm256_set1_pd(xi);
    const double* row = a + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d vy = _mm256_loadu_pd(y + j);
      const __m256d vr = _mm256_loadu_pd(row + j);
      _mm256_storeu_pd(y + j, _mm256_add_pd(vy, _mm256_mul_pd(vxi, vr)));
    }
    for (; j < n; ++j) y[j] += xi * row[j];
  }
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  std::fill(c, c + n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      const __m256d vaik = _mm256_set1_pd(aik);
      const double* brow = b + k * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        const __m256d vc = _mm256_loadu_pd(crow + j);
        const __m256d vb = _mm256_loadu_pd(brow + j);
        _mm256_storeu_pd(crow + j, _mm256_add_pd(vc, _mm256_mul_pd(vaik, vb)));
      }
      for (; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

double l1_norm(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
  double total = hsum_pd(acc);
  for (; i < n; ++i) total += std::fabs(x[i]);
  return total;
}

double l1_diff(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, abs_pd(d));
  }
  double total = hsum_pd(acc);
  for (; i < n; ++i) total += std::fabs(x[i] - y[i]);
  return total;
}

double max_abs_row_sum(const double* a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, l1_norm(a + i * n, n));
  return best;
}

}  // namespace sadt::kernels::avx2
