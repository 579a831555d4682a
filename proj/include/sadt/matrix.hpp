#pragma once
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sadt/errors.hpp"

namespace sadt {

// Dense square matrix, row-major.  Not necessarily stochastic; differences of
// stochastic matrices live here too.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;

  Matrix() = default;
  explicit Matrix(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}
  static Matrix identity(std::size_t dim);

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double* row(std::size_t i) { return a.data() + i * n; }
  const double* row(std::size_t i) const { return a.data() + i * n; }
  const double* data() const { return a.data(); }
};

Matrix operator-(const Matrix& x, const Matrix& y);
Matrix operator*(const Matrix& x, const Matrix& y);

// Communicating-class structure of the support digraph (edge i->j iff
// entry(i,j) > 0).  A recurrent class is a strongly connected component with
// no edge leaving it; its period is the gcd of its cycle lengths.
struct Classification {
  bool irreducible = false;
  bool aperiodic = false;  // every recurrent class has period 1
  std::vector<std::vector<std::size_t>> recurrent_classes;
  std::vector<std::size_t> class_periods;  // parallel to recurrent_classes
  // Set when there is exactly one recurrent class (the common cases people
  // ask about: irreducible chains, or a unique absorbing class).
  std::optional<std::size_t> period;
};

Classification classify_structure(const Matrix& m);

enum class ValidationMode { Relaxed, Strict };

class ProbabilityVector {
 public:
  ProbabilityVector() = default;
  // Validates: entries >= -negative_tol (small negatives are clamped to 0),
  // |sum - 1| <= sum_tol; then rescales so the sum is exactly normalized.
  static ProbabilityVector from_raw(std::vector<double> v, double sum_tol = 1e-12,
                                    double negative_tol = 0.0);
  static ProbabilityVector point_mass(std::size_t n, std::size_t i);
  static ProbabilityVector uniform(std::size_t n);

  std::size_t dim() const { return v_.size(); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& entries() const { return v_; }
  std::span<const double> span() const { return v_; }

 private:
  explicit ProbabilityVector(std::vector<double> v) : v_(std::move(v)) {}
  std::vector<double> v_;
};

// A validated row-stochastic matrix: entries in [0,1], rows summing to 1 after
// ingest renormalization, with its support classification precomputed.
class StochasticMatrix {
 public:
  // Entries within 1e-15 of [0,1] are clamped onto the boundary; rows whose
  // sum is within row_tol of 1 are renormalized, anything worse is rejected.
  static StochasticMatrix ingest(Matrix raw, double row_tol = 1e-9);
  static StochasticMatrix ingest(const std::vector<std::vector<double>>& rows,
                                 double row_tol = 1e-9);

  std::size_t dim() const { return m_.n; }
  const Matrix& entries() const { return m_; }
  double at(std::size_t i, std::size_t j) const { return m_.at(i, j); }
  const double* row(std::size_t i) const { return m_.row(i); }
  const Classification& structure() const { return cls_; }

 private:
  StochasticMatrix(Matrix m, Classification cls) : m_(std::move(m)), cls_(std::move(cls)) {}
  Matrix m_;
  Classification cls_;
};

// Total variation distance, i.e. half the l1 distance.
double tv_distance(std::span<const double> mu, std::span<const double> nu);
double tv_distance(const ProbabilityVector& mu, const ProbabilityVector& nu);

// Operator norm induced by the l1 norm on row vectors: max_i sum_j |m(i,j)|.
double operator_norm(const Matrix& m);

std::vector<double> propagate(std::span<const double> nu, const Matrix& p);
ProbabilityVector propagate(const ProbabilityVector& nu, const StochasticMatrix& p);

// Unique stationary distribution of p.  Relaxed mode accepts any matrix with
// exactly one recurrent class, aperiodic; Strict additionally requires
// irreducibility.  Solved by direct LU with a normalization row, falling back
// to power iteration; the result always satisfies |pi P - pi|_1 <= 1e-10.
ProbabilityVector stationary_distribution(const StochasticMatrix& p,
                                          ValidationMode mode = ValidationMode::Relaxed);

namespace detail {
// Stationary solve without structural validation, for hot paths where the
// caller already certified the evolution.  Throws on solver failure.
std::vector<double> stationary_of(const Matrix& p, double residual_tol = 1e-10);
// mu P compared against mu, used as the solver's acceptance residual.
double stationary_residual(std::span<const double> pi, const Matrix& p);
}  // namespace detail

}  // namespace sadt
