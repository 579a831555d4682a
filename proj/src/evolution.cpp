#include "sadt/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sadt/kernels.hpp"

namespace sadt {

namespace {

void check_frames(const std::vector<double>& breaks, const std::vector<StochasticMatrix>& frames) {
  if (frames.size() < 2)
    throw AnalysisError(errc::bad_breakpoints, "an evolution needs at least two keyframes");
  if (breaks.size() != frames.size())
    throw AnalysisError(errc::bad_breakpoints, "breakpoint and keyframe counts differ");
  if (breaks.front() != 0.0 || breaks.back() != 1.0)
    throw AnalysisError(errc::bad_breakpoints, "breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1]))
      throw AnalysisError(errc::bad_breakpoints, "breakpoints must be strictly increasing");
  const std::size_t n = frames.front().dim();
  if (n < 2)
    throw AnalysisError(errc::bad_input, "evolutions over a single state are degenerate");
  for (const auto& f : frames)
    if (f.dim() != n) throw AnalysisError(errc::dimension_mismatch, "keyframe dimensions differ");
}

}  // namespace

bool keyframe_passes(const Classification& cls, ValidationMode mode) {
  if (mode == ValidationMode::Strict) return cls.irreducible && cls.aperiodic;
  return cls.recurrent_classes.size() == 1 && cls.aperiodic;
}

Evolution Evolution::convex(StochasticMatrix p0, StochasticMatrix p1) {
  std::vector<StochasticMatrix> frames;
  frames.push_back(std::move(p0));
  frames.push_back(std::move(p1));
  std::vector<double> breaks{0.0, 1.0};
  check_frames(breaks, frames);
  return Evolution(PathKind::Convex, std::move(breaks), std::move(frames));
}

Evolution Evolution::piecewise_linear(std::vector<double> breakpoints,
                                      std::vector<StochasticMatrix> keyframes) {
  check_frames(breakpoints, keyframes);
  return Evolution(PathKind::PiecewiseLinear, std::move(breakpoints), std::move(keyframes));
}

Evolution Evolution::sampled_grid(std::vector<double> breakpoints,
                                  std::vector<StochasticMatrix> keyframes) {
  check_frames(breakpoints, keyframes);
  return Evolution(PathKind::SampledGrid, std::move(breakpoints), std::move(keyframes));
}

Matrix Evolution::sample_matrix(double s) const {
  if (!(s >= 0.0 && s <= 1.0))
    throw AnalysisError(errc::out_of_range, "sample point " + std::to_string(s));
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), s);
  if (it != breaks_.end() && *it == s)
    return frames_[static_cast<std::size_t>(it - breaks_.begin())].entries();
  const std::size_t seg = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  const double t = (s - breaks_[seg]) / (breaks_[seg + 1] - breaks_[seg]);
  const std::size_t n = dim();
  Matrix out(n);
  kernels::lerp(frames_[seg].entries().data(), frames_[seg + 1].entries().data(), t,
                out.a.data(), n * n);
  // Convex mixes of stochastic rows are stochastic up to rounding; renormalize
  // so downstream powering cannot accumulate the rounding drift.
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += out.at(i, j);
    if (sum != 1.0)
      for (std::size_t j = 0; j < n; ++j) out.at(i, j) /= sum;
  }
  return out;
}

StochasticMatrix Evolution::sample(double s) const {
  auto it = std::lower_bound(breaks_.begin(), breaks_.end(), s);
  if (it != breaks_.end() && *it == s)
    return frames_[static_cast<std::size_t>(it - breaks_.begin())];
  return StochasticMatrix::ingest(sample_matrix(s), 1e-12);
}

LipschitzEstimate Evolution::lipschitz(std::optional<std::size_t> resample_grid) const {
  LipschitzEstimate est;
  if (resample_grid) {
    if (*resample_grid < 2)
      throw AnalysisError(errc::bad_input, "resample grid needs at least two points");
    const std::size_t g = *resample_grid;
    double best = 0.0;
    Matrix prev = sample_matrix(0.0);
    for (std::size_t i = 1; i < g; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(g - 1);
      Matrix cur = sample_matrix(s);
      best = std::max(best, operator_norm(cur - prev) * static_cast<double>(g - 1));
      prev = std::move(cur);
    }
    est.value = best;
    est.exact = false;
    est.grid_resolution = g;
    return est;
  }
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < frames_.size(); ++i) {
    const double ds = breaks_[i + 1] - breaks_[i];
    best = std::max(best, operator_norm(frames_[i + 1].entries() - frames_[i].entries()) / ds);
  }
  est.value = best;
  est.exact = kind_ != PathKind::SampledGrid;
  if (!est.exact) est.grid_resolution = breaks_.size();
  return est;
}

StructuralCertificate Evolution::certificate(ValidationMode mode) const {
  StructuralCertificate cert;
  cert.mode = mode;
  cert.overall = true;
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    // On the open segment every strictly convex combination has the same
    // support (the union of the endpoint supports, no cancellation between
    // nonnegative entries), so the midpoint classification covers it all.
    const double mid = 0.5 * (breaks_[i] + breaks_[i + 1]);
    Classification cls = classify_structure(sample_matrix(mid));
    SegmentVerdict v{breaks_[i], breaks_[i + 1], cls.irreducible, cls.aperiodic};
    if (!(v.irreducible && v.aperiodic)) cert.overall = false;
    cert.segments.push_back(v);
  }
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    KeyframeVerdict v{breaks_[i], frames_[i].structure(), false};
    v.passes = keyframe_passes(v.cls, mode);
    if (!v.passes) cert.overall = false;
    cert.keyframes.push_back(std::move(v));
  }
  return cert;
}

std::vector<double> analysis_grid(const Evolution& e, std::size_t grid_points) {
  if (grid_points < 2)
    throw AnalysisError(errc::bad_input, "analysis grid needs at least two points");
  std::vector<double> grid;
  grid.reserve(grid_points + e.breakpoints().size());
  for (std::size_t i = 0; i < grid_points; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(grid_points - 1));
  grid.insert(grid.end(), e.breakpoints().begin(), e.breakpoints().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace sadt
