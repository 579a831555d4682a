#include "sadt/matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sadt/kernels.hpp"

namespace sadt {

std::string_view errc_name(errc c) {
  switch (c) {
    case errc::not_square:
      return "NotSquare";
    case errc::negative_entry:
      return "NegativeEntry";
    case errc::row_sum_violation:
      return "RowSumViolation";
    case errc::dimension_mismatch:
      return "DimensionMismatch";
    case errc::multiple_recurrent_classes:
      return "MultipleRecurrentClasses";
    case errc::periodic_recurrent_class:
      return "PeriodicRecurrentClass";
    case errc::not_irreducible:
      return "NotIrreducible";
    case errc::rank_warning:
      return "RankWarning";
    case errc::cap_exceeded:
      return "CapExceeded";
    case errc::eps_out_of_range:
      return "EpsOutOfRange";
    case errc::nonpositive_argument:
      return "NonpositiveArgument";
    case errc::bad_breakpoints:
      return "BadBreakpoints";
    case errc::out_of_range:
      return "OutOfRange";
    case errc::bad_input:
      return "BadInput";
  }
  return "UnknownError";
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

Matrix operator-(const Matrix& x, const Matrix& y) {
  if (x.n != y.n) throw AnalysisError(errc::dimension_mismatch, "matrix difference");
  Matrix out(x.n);
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] - y.a[i];
  return out;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.n != y.n) throw AnalysisError(errc::dimension_mismatch, "matrix product");
  Matrix out(x.n);
  kernels::matmul(x.data(), y.data(), out.a.data(), x.n);
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> support_adjacency(const Matrix& m) {
  std::vector<std::vector<std::size_t>> adj(m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (m.at(i, j) > 0.0) adj[i].push_back(j);
  return adj;
}

// Iterative DFS recording finish order (first pass of Kosaraju).
void dfs_finish_order(const std::vector<std::vector<std::size_t>>& adj, std::size_t start,
                      std::vector<char>& seen, std::vector<std::size_t>& order) {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
  seen[start] = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < adj[node].size()) {
      std::size_t child = adj[node][next++];
      if (!seen[child]) {
        seen[child] = 1;
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
}

// Period of one strongly connected component: breadth-first levels from an
// arbitrary member, then gcd of (level[u] + 1 - level[v]) over internal edges.
std::size_t component_period(const std::vector<std::vector<std::size_t>>& adj,
                             const std::vector<std::size_t>& members,
                             const std::vector<std::size_t>& comp_of) {
  const std::size_t root = members.front();
  const std::size_t comp = comp_of[root];
  std::vector<long long> level(comp_of.size(), -1);
  std::vector<std::size_t> queue{root};
  level[root] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    for (std::size_t v : adj[u]) {
      if (comp_of[v] != comp) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      }
    }
  }
  long long g = 0;
  for (std::size_t u : members)
    for (std::size_t v : adj[u]) {
      if (comp_of[v] != comp) continue;
      g = std::gcd(g, std::llabs(level[u] + 1 - level[v]));
    }
  return static_cast<std::size_t>(g);
}

}  // namespace

Classification classify_structure(const Matrix& m) {
  const std::size_t n = m.n;
  auto adj = support_adjacency(m);
  std::vector<std::vector<std::size_t>> radj(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : adj[u]) radj[v].push_back(u);

  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) dfs_finish_order(adj, v, seen, order);

  std::vector<std::size_t> comp_of(n, n);
  std::vector<std::vector<std::size_t>> comps;
  std::fill(seen.begin(), seen.end(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (seen[*it]) continue;
    std::vector<std::size_t> members;
    std::vector<std::size_t> stack{*it};
    seen[*it] = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      comp_of[u] = comps.size();
      members.push_back(u);
      for (std::size_t v : radj[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    std::sort(members.begin(), members.end());
    comps.push_back(std::move(members));
  }

  Classification out;
  out.irreducible = comps.size() == 1;

  // A component is recurrent iff it is closed (no edge leaves it) and has at
  // least one internal edge; rows of a stochastic matrix always provide one.
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> recurrent;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool closed = true;
    bool has_edge = false;
    for (std::size_t u : comps[c]) {
      for (std::size_t v : adj[u]) {
        if (comp_of[v] != c) {
          closed = false;
          break;
        }
        has_edge = true;
      }
      if (!closed) break;
    }
    if (closed && has_edge) recurrent.emplace_back(comps[c].front(), comps[c]);
  }
  std::sort(recurrent.begin(), recurrent.end());

  out.aperiodic = true;
  for (auto& [lead, members] : recurrent) {
    std::size_t p = component_period(adj, members, comp_of);
    out.recurrent_classes.push_back(members);
    out.class_periods.push_back(p);
    if (p != 1) out.aperiodic = false;
  }
  if (out.recurrent_classes.size() == 1) out.period = out.class_periods.front();
  return out;
}

ProbabilityVector ProbabilityVector::from_raw(std::vector<double> v, double sum_tol,
                                              double negative_tol) {
  if (v.empty()) throw AnalysisError(errc::bad_input, "empty probability vector");
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw AnalysisError(errc::bad_input, "non-finite entry in probability vector");
    if (v[i] < 0.0) {
      if (v[i] < -negative_tol)
        throw AnalysisError(errc::bad_input, "negative probability entry " + std::to_string(v[i]) +
                                                 " at index " + std::to_string(i));
      v[i] = 0.0;
    }
    sum += v[i];
  }
  if (std::fabs(sum - 1.0) > sum_tol)
    throw AnalysisError(errc::bad_input,
                        "probability vector sums to " + std::to_string(sum) + ", not 1");
  if (sum != 1.0)
    for (double& x : v) x /= sum;
  return ProbabilityVector(std::move(v));
}

ProbabilityVector ProbabilityVector::point_mass(std::size_t n, std::size_t i) {
  if (i >= n) throw AnalysisError(errc::out_of_range, "point mass index");
  std::vector<double> v(n, 0.0);
  v[i] = 1.0;
  return ProbabilityVector(std::move(v));
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  if (n == 0) throw AnalysisError(errc::bad_input, "empty probability vector");
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

StochasticMatrix StochasticMatrix::ingest(Matrix raw, double row_tol) {
  const std::size_t n = raw.n;
  if (n == 0 || raw.a.size() != n * n)
    throw AnalysisError(errc::not_square, "matrix storage does not match its dimension");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double& v = raw.at(i, j);
      if (!std::isfinite(v))
        throw AnalysisError(errc::bad_input, "non-finite entry at (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ")");
      if (v < 0.0) {
        if (v < -1e-15)
          throw AnalysisError(errc::negative_entry,
                              "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                  std::to_string(v));
        v = 0.0;
      } else if (v > 1.0 && v <= 1.0 + 1e-15) {
        v = 1.0;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += raw.at(i, j);
    if (std::fabs(sum - 1.0) > row_tol)
      throw AnalysisError(errc::row_sum_violation,
                          "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    if (sum != 1.0)
      for (std::size_t j = 0; j < n; ++j) raw.at(i, j) /= sum;
  }
  Classification cls = classify_structure(raw);
  return StochasticMatrix(std::move(raw), std::move(cls));
}

StochasticMatrix StochasticMatrix::ingest(const std::vector<std::vector<double>>& rows,
                                          double row_tol) {
  const std::size_t n = rows.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw AnalysisError(errc::not_square, "row " + std::to_string(i) + " has " +
                                                std::to_string(rows[i].size()) + " entries, expected " +
                                                std::to_string(n));
    std::copy(rows[i].begin(), rows[i].end(), m.row(i));
  }
  return ingest(std::move(m), row_tol);
}

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw AnalysisError(errc::dimension_mismatch, "tv_distance");
  return 0.5 * kernels::l1_diff(mu.data(), nu.data(), mu.size());
}

double tv_distance(const ProbabilityVector& mu, const ProbabilityVector& nu) {
  return tv_distance(mu.span(), nu.span());
}

double operator_norm(const Matrix& m) { return kernels::max_abs_row_sum(m.data(), m.n); }

std::vector<double> propagate(std::span<const double> nu, const Matrix& p) {
  if (nu.size() != p.n) throw AnalysisError(errc::dimension_mismatch, "propagate");
  std::vector<double> out(p.n);
  kernels::row_times_matrix(nu.data(), p.data(), out.data(), p.n);
  return out;
}

ProbabilityVector propagate(const ProbabilityVector& nu, const StochasticMatrix& p) {
  return ProbabilityVector::from_raw(propagate(nu.span(), p.entries()), 1e-10, 1e-12);
}

namespace detail {

double stationary_residual(std::span<const double> pi, const Matrix& p) {
  std::vector<double> next(pi.size());
  kernels::row_times_matrix(pi.data(), p.data(), next.data(), p.n);
  return kernels::l1_diff(next.data(), pi.data(), p.n);
}

std::vector<double> stationary_of(const Matrix& p, double residual_tol) {
  const std::size_t n = p.n;
  if (n == 0) throw AnalysisError(errc::bad_input, "empty matrix");
  // pi P = pi  <=>  (I - P)^T pi^T = 0; one equation is redundant, so replace
  // a row with the normalization constraint sum(pi) = 1 and solve directly.
  Eigen::MatrixXd base(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      base(i, j) = (i == j ? 1.0 : 0.0) - p.at(j, i);

  auto attempt = [&](std::size_t replace_row) -> std::optional<std::vector<double>> {
    Eigen::MatrixXd m = base;
    m.row(static_cast<Eigen::Index>(replace_row)).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    b(static_cast<Eigen::Index>(replace_row)) = 1.0;
    Eigen::VectorXd x = m.partialPivLu().solve(b);
    std::vector<double> pi(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = x(static_cast<Eigen::Index>(i));
      if (!std::isfinite(v) || v < -1e-9) return std::nullopt;
      pi[i] = std::max(v, 0.0);
      sum += pi[i];
    }
    if (!(std::fabs(sum - 1.0) < 1e-6)) return std::nullopt;
    for (double& v : pi) v /= sum;
    if (stationary_residual(pi, p) > residual_tol) return std::nullopt;
    return pi;
  };

  if (auto pi = attempt(n - 1)) return *pi;
  for (std::size_t r = 0; r + 1 < n; ++r)
    if (auto pi = attempt(r)) return *pi;

  // Degenerate LU (e.g. nearly rank-deficient beyond one dimension): fall back
  // to power iteration, which converges whenever the stationary law is unique
  // and the chain is aperiodic.
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> w(n);
  for (std::size_t iter = 0; iter < 2'000'000; ++iter) {
    kernels::row_times_matrix(v.data(), p.data(), w.data(), n);
    double delta = kernels::l1_diff(v.data(), w.data(), n);
    v.swap(w);
    if (delta < 1e-15) break;
  }
  double sum = 0.0;
  for (double& x : v) {
    x = std::max(x, 0.0);
    sum += x;
  }
  if (sum > 0.0)
    for (double& x : v) x /= sum;
  if (stationary_residual(v, p) > residual_tol)
    throw AnalysisError(errc::bad_input, "stationary solve failed to reach residual tolerance");
  return v;
}

}  // namespace detail

ProbabilityVector stationary_distribution(const StochasticMatrix& p, ValidationMode mode) {
  const Classification& c = p.structure();
  if (mode == ValidationMode::Strict && !c.irreducible)
    throw AnalysisError(errc::not_irreducible, "strict mode requires an irreducible matrix");
  if (c.recurrent_classes.size() != 1)
    throw AnalysisError(errc::multiple_recurrent_classes,
                        "matrix has " + std::to_string(c.recurrent_classes.size()) +
                            " recurrent classes");
  if (c.class_periods.front() != 1)
    throw AnalysisError(errc::periodic_recurrent_class,
                        "recurrent class has period " + std::to_string(c.class_periods.front()));
  return ProbabilityVector::from_raw(detail::stationary_of(p.entries()), 1e-9, 1e-12);
}

}  // namespace sadt
