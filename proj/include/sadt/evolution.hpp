#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "sadt/matrix.hpp"

namespace sadt {

// A continuous path s -> P(s) of stochastic matrices on [0,1].  Convex is the
// straight line between two endpoint matrices; PiecewiseLinear interpolates a
// sorted breakpoint grid; SampledGrid carries the same data but marks that the
// path between samples is a reconstruction, not ground truth (estimates
// derived from it are flagged as inexact).
enum class PathKind { Convex, PiecewiseLinear, SampledGrid };

struct LipschitzEstimate {
  double value = 0.0;
  bool exact = false;
  std::optional<std::size_t> grid_resolution;  // set when estimated from samples
};

struct SegmentVerdict {
  double s_lo = 0.0, s_hi = 0.0;
  bool irreducible = false;
  bool aperiodic = false;
};

struct KeyframeVerdict {
  double s = 0.0;
  Classification cls;
  bool passes = false;
};

// On each open segment the support of P(s) is constant (the union of the two
// endpoint supports), so one interior classification certifies the whole
// segment.  Interior points must always be irreducible and aperiodic;
// keyframes are held to the requested mode.
struct StructuralCertificate {
  ValidationMode mode = ValidationMode::Relaxed;
  std::vector<SegmentVerdict> segments;
  std::vector<KeyframeVerdict> keyframes;
  bool overall = false;
};

bool keyframe_passes(const Classification& cls, ValidationMode mode);

class Evolution {
 public:
  static Evolution convex(StochasticMatrix p0, StochasticMatrix p1);
  static Evolution piecewise_linear(std::vector<double> breakpoints,
                                    std::vector<StochasticMatrix> keyframes);
  static Evolution sampled_grid(std::vector<double> breakpoints,
                                std::vector<StochasticMatrix> keyframes);

  PathKind kind() const { return kind_; }
  std::size_t dim() const { return frames_.front().dim(); }
  const std::vector<double>& breakpoints() const { return breaks_; }
  std::size_t keyframe_count() const { return frames_.size(); }
  const StochasticMatrix& keyframe(std::size_t i) const { return frames_[i]; }

  // Raw interpolated matrix at s: stored keyframe entries bit-for-bit at a
  // breakpoint, otherwise the linear interpolation with rows renormalized.
  // This is the single numeric path every downstream computation samples.
  Matrix sample_matrix(double s) const;
  // Same point, but validated and classified.
  StochasticMatrix sample(double s) const;

  // max over segments of |P(s_{i+1}) - P(s_i)| / (s_{i+1} - s_i) in the
  // l1-induced operator norm.  Exact for Convex/PiecewiseLinear; for
  // SampledGrid (or when a resample grid is forced) it is a lower estimate.
  LipschitzEstimate lipschitz(std::optional<std::size_t> resample_grid = std::nullopt) const;

  StructuralCertificate certificate(ValidationMode mode) const;

 private:
  Evolution(PathKind kind, std::vector<double> breaks, std::vector<StochasticMatrix> frames)
      : kind_(kind), breaks_(std::move(breaks)), frames_(std::move(frames)) {}
  PathKind kind_;
  std::vector<double> breaks_;
  std::vector<StochasticMatrix> frames_;
};

// Uniform grid of grid_points values spanning [0,1] plus every breakpoint of
// the evolution, sorted and deduplicated.  All scan operations share it so
// spectral, mixing, and continuity reports line up point for point.
std::vector<double> analysis_grid(const Evolution& e, std::size_t grid_points);

inline constexpr std::size_t kDefaultGridPoints = 1001;
inline constexpr long long kDefaultCap = 1'000'000;

}  // namespace sadt
