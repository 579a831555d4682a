#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "sadt/kernels.hpp"

// Mirrors the AVX2 variant with 2-wide float64x2_t lanes.  Elementwise kernels
// keep the scalar op order per element (separate mul and add, no fused ops);
// reductions accumulate in lanes and agree with scalar up to rounding.

namespace sadt::kernels::neon {

void lerp(const double* a, const double* b, double t, double* out, std::size_t m) {
  const double u = 1.0 - t;
  const float64x2_t vu = vdupq_n_f64(u);
  const float64x2_t vt = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    vst1q_f64(out + i, vaddq_f64(vmulq_f64(vu, va), vmulq_f64(vt, vb)));
  }
  for (; i < m; ++i) out[i] = u * a[i] + t * b[i];
}

void row_times_matrix(const double* x, const double* a, double* y, std::size_t n) {
  std::fill(y, y + n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const float64x2_t vxi = vdupq_n_f64(xi);
    const double* row = a + i * n;
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const float64x2_t vy = vld1q_f64(y + j);
      const float64x2_t vr = vld1q_f64(row + j);
      vst1q_f64(y + j, vaddq_f64(vy, vmulq_f64(vxi, vr)));
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
      const float64x2_t vaik = vdupq_n_f64(aik);
      const double* brow = b + k * n;
      std::size_t j = 0;
      for (; j + 2 <= n; j += 2) {
        const float64x2_t vc = vld1q_f64(crow + j);
        const float64x2_t vb = vld1q_f64(brow + j);
        vst1q_f64(crow + j, vaddq_f64(vc, vmulq_f64(vaik, vb)));
      }
      for (; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

double l1_norm(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) total += std::fabs(x[i]);
  return total;
}

double l1_diff(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vaddq_f64(acc, vabsq_f64(d));
  }
  double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) total += std::fabs(x[i] - y[i]);
  return total;
}

double max_abs_row_sum(const double* a, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, l1_norm(a + i * n, n));
  return best;
}

}  // namespace sadt::kernels::neon
