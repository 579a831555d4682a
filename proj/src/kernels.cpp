#include <stdexcept>

#include "sadt/kernels.hpp"

namespace sadt::kernels {

namespace {

struct Vtable {
  void (*lerp)(const double*, const double*, double, double*, std::size_t);
  void (*row_times_matrix)(const double*, const double*, double*, std::size_t);
  void (*matmul)(const double*, const double*, double*, std::size_t);
  double (*l1_norm)(const double*, std::size_t);
  double (*l1_diff)(const double*, const double*, std::size_t);
  double (*max_abs_row_sum)(const double*, std::size_t);
};

constexpr Vtable kScalar{scalar::lerp,    scalar::row_times_matrix, scalar::matmul,
                         scalar::l1_norm, scalar::l1_diff,          scalar::max_abs_row_sum};

#if defined(SADT_KERNELS_HAVE_AVX2)
constexpr Vtable kAvx2{avx2::lerp,    avx2::row_times_matrix, avx2::matmul,
                       avx2::l1_norm, avx2::l1_diff,          avx2::max_abs_row_sum};
#endif
#if defined(SADT_KERNELS_HAVE_NEON)
constexpr Vtable kNeon{neon::lerp,    neon::row_times_matrix, neon::matmul,
                       neon::l1_norm, neon::l1_diff,          neon::max_abs_row_sum};
#endif

Backend detect_best() {
#if defined(SADT_KERNELS_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
#if defined(SADT_KERNELS_HAVE_NEON)
  return Backend::Neon;
#endif
  return Backend::Scalar;
}

const Vtable& table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return kScalar;
#if defined(SADT_KERNELS_HAVE_AVX2)
    case Backend::Avx2:
      return kAvx2;
#endif
#if defined(SADT_KERNELS_HAVE_NEON)
    case Backend::Neon:
      return kNeon;
#endif
    default:
      return kScalar;
  }
}

struct State {
  Backend backend;
  const Vtable* table;
};

State& state() {
  static State s{detect_best(), &table_for(detect_best())};
  return s;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(SADT_KERNELS_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::Neon:
#if defined(SADT_KERNELS_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return state().backend; }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
  state().backend = b;
  state().table = &table_for(b);
}

void reset_backend() { set_backend(detect_best()); }

void lerp(const double* a, const double* b, double t, double* out, std::size_t m) {
  state().table->lerp(a, b, t, out, m);
}
void row_times_matrix(const double* x, const double* a, double* y, std::size_t n) {
  state().table->row_times_matrix(x, a, y, n);
}
void matmul(const double* a, const double* b, double* c, std::size_t n) {
  state().table->matmul(a, b, c, n);
}
double l1_norm(const double* x, std::size_t n) { return state().table->l1_norm(x, n); }
double l1_diff(const double* x, const double* y, std::size_t n) {
  return state().table->l1_diff(x, y, n);
}
double max_abs_row_sum(const double* a, std::size_t n) {
  return state().table->max_abs_row_sum(a, n);
}

}  // namespace sadt::kernels
