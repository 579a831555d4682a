#pragma once
#include <cstddef>
#include <string_view>

// Dense row-vector / matrix primitives used by every analysis loop.  A scalar
// reference implementation always exists; on x86-64 an AVX2 variant and on
// aarch64 a NEON variant are compiled in and selected at runtime.  The
// elementwise kernels (lerp, row_times_matrix, matmul) perform the identical
// sequence of rounded operations per output element in every backend, so they
// agree bit for bit.  The reductions (l1_norm, l1_diff, max_abs_row_sum)
// accumulate in lanes and may differ from the scalar path by rounding only.

namespace sadt::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b);
bool backend_available(Backend b);
Backend active_backend();
// Throws std::invalid_argument if the backend was not compiled in or the CPU
// lacks the feature.
void set_backend(Backend b);
void reset_backend();  // back to the best available

// out[i] = (1-t)*a[i] + t*b[i], i < m
void lerp(const double* a, const double* b, double t, double* out, std::size_t m);
// y = x A with x a length-n row vector and A n-by-n row-major; y must not alias x or A.
void row_times_matrix(const double* x, const double* a, double* y, std::size_t n);
// C = A B, all n-by-n row-major; C must not alias A or B.
void matmul(const double* a, const double* b, double* c, std::size_t n);
double l1_norm(const double* x, std::size_t n);
double l1_diff(const double* x, const double* y, std::size_t n);
// max_i sum_j |a(i,j)|
double max_abs_row_sum(const double* a, std::size_t n);

namespace scalar {
void lerp(const double* a, const double* b, double t, double* out, std::size_t m);
void row_times_matrix(const double* x, const double* a, double* y, std::size_t n);
void matmul(const double* a, const double* b, double* c, std::size_t n);
double l1_norm(const double* x, std::size_t n);
double l1_diff(const double* x, const double* y, std::size_t n);
double max_abs_row_sum(const double* a, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SADT_KERNELS_HAVE_AVX2 1
namespace avx2 {
void lerp(const double* a, const double* b, double t, double* out, std::size_t m);
void row_times_matrix(const double* x, const double* a, double* y, std::size_t n);
void matmul(const double* a, const double* b, double* c, std::size_t n);
double l1_norm(const double* x, std::size_t n);
double l1_diff(const double* x, const double* y, std::size_t n);
double max_abs_row_sum(const double* a, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define SADT_KERNELS_HAVE_NEON 1
namespace neon {
void lerp(const double* a, const double* b, double t, double* out, std::size_t m);
void row_times_matrix(const double* x, const double* a, double* y, std::size_t n);
void matmul(const double* a, const double* b, double* c, std::size_t n);
double l1_norm(const double* x, std::size_t n);
double l1_diff(const double* x, const double* y, std::size_t n);
double max_abs_row_sum(const double* a, std::size_t n);
}  // namespace neon
#endif

}  // namespace sadt::kernels
