#include "sadt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sadt {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json finite_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string_view kind_name(PathKind k) {
  switch (k) {
    case PathKind::Convex:
      return "convex";
    case PathKind::PiecewiseLinear:
      return "piecewise_linear";
    case PathKind::SampledGrid:
      return "sampled_grid";
  }
  return "unknown";
}

std::vector<std::vector<double>> matrix_rows(const json& j, std::size_t index) {
  if (!j.is_array() || j.empty())
    throw AnalysisError(errc::bad_input,
                        "matrices[" + std::to_string(index) + "] must be a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array())
      throw AnalysisError(errc::bad_input,
                          "matrices[" + std::to_string(index) + "] rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number())
        throw AnalysisError(errc::bad_input,
                            "matrices[" + std::to_string(index) + "] entries must be numbers");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

Evolution load_evolution(const json& j) {
  if (!j.is_object()) throw AnalysisError(errc::bad_input, "evolution must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw AnalysisError(errc::bad_input, "evolution needs a string field \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (!j.contains("matrices"))
    throw AnalysisError(errc::bad_input, "evolution needs a field \"matrices\"");
  if (!j["matrices"].is_array() || j["matrices"].size() < 2)
    throw AnalysisError(errc::bad_input, "\"matrices\" must list at least two matrices");

  std::vector<StochasticMatrix> frames;
  for (std::size_t i = 0; i < j["matrices"].size(); ++i)
    frames.push_back(StochasticMatrix::ingest(matrix_rows(j["matrices"][i], i)));

  std::vector<double> breaks;
  if (j.contains("breakpoints")) {
    if (!j["breakpoints"].is_array())
      throw AnalysisError(errc::bad_input, "\"breakpoints\" must be an array");
    for (const auto& v : j["breakpoints"]) {
      if (!v.is_number())
        throw AnalysisError(errc::bad_input, "\"breakpoints\" entries must be numbers");
      breaks.push_back(v.get<double>());
    }
  }

  if (kind == "convex") {
    if (frames.size() != 2)
      throw AnalysisError(errc::bad_input, "a convex evolution takes exactly two matrices");
    if (!breaks.empty() && breaks != std::vector<double>{0.0, 1.0})
      throw AnalysisError(errc::bad_breakpoints, "convex breakpoints must be [0, 1] when given");
    return Evolution::convex(std::move(frames[0]), std::move(frames[1]));
  }
  if (breaks.empty())
    throw AnalysisError(errc::bad_input, "\"" + kind + "\" needs explicit breakpoints");
  if (kind == "piecewise_linear")
    return Evolution::piecewise_linear(std::move(breaks), std::move(frames));
  if (kind == "sampled_grid") return Evolution::sampled_grid(std::move(breaks), std::move(frames));
  throw AnalysisError(errc::bad_input, "unknown evolution kind \"" + kind + "\"");
}

Evolution load_evolution_file(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& err) {
    throw AnalysisError(errc::bad_input, "cannot parse " + path.string() + ": " + err.what());
  }
  return load_evolution(j);
}

ordered_json json_of(const Evolution& e) {
  ordered_json out;
  out["kind"] = kind_name(e.kind());
  out["breakpoints"] = e.breakpoints();
  ordered_json mats = ordered_json::array();
  for (std::size_t k = 0; k < e.keyframe_count(); ++k) {
    const Matrix& m = e.keyframe(k).entries();
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.n; ++i)
      rows.push_back(std::vector<double>(m.row(i), m.row(i) + m.n));
    mats.push_back(std::move(rows));
  }
  out["matrices"] = std::move(mats);
  return out;
}

ordered_json json_of(const Classification& c) {
  ordered_json out;
  out["irreducible"] = c.irreducible;
  out["aperiodic"] = c.aperiodic;
  out["recurrent_classes"] = c.recurrent_classes;
  out["class_periods"] = c.class_periods;
  if (c.period)
    out["period"] = *c.period;
  else
    out["period"] = nullptr;
  return out;
}

ordered_json json_of(const StructuralCertificate& c) {
  ordered_json out;
  out["mode"] = c.mode == ValidationMode::Strict ? "strict" : "relaxed";
  ordered_json segs = ordered_json::array();
  for (const auto& s : c.segments) {
    ordered_json seg;
    seg["s_lo"] = s.s_lo;
    seg["s_hi"] = s.s_hi;
    seg["irreducible"] = s.irreducible;
    seg["aperiodic"] = s.aperiodic;
    segs.push_back(std::move(seg));
  }
  out["segments"] = std::move(segs);
  ordered_json kfs = ordered_json::array();
  for (const auto& k : c.keyframes) {
    ordered_json kf;
    kf["s"] = k.s;
    kf["classification"] = json_of(k.cls);
    kf["passes"] = k.passes;
    kfs.push_back(std::move(kf));
  }
  out["keyframes"] = std::move(kfs);
  out["overall"] = c.overall;
  return out;
}

ordered_json json_of(const LipschitzEstimate& l) {
  ordered_json out;
  out["value"] = l.value;
  out["exact"] = l.exact;
  if (l.grid_resolution)
    out["grid_resolution"] = *l.grid_resolution;
  else
    out["grid_resolution"] = nullptr;
  return out;
}

ordered_json json_of(const SpectralScan& s) {
  ordered_json out;
  out["sigma_floor"] = s.sigma_floor;
  out["grid"] = s.grid;
  out["sigma"] = s.sigma;
  return out;
}

ordered_json json_of(const MixingLowerBoundVerdict& v) {
  ordered_json out;
  out["eps"] = v.eps;
  out["sigma_floor"] = v.sigma_floor;
  out["lhs"] = v.lhs;
  out["rhs"] = v.rhs;
  out["holds"] = v.holds;
  out["vacuous"] = v.vacuous;
  return out;
}

ordered_json json_of(const MixingResult& m) {
  ordered_json out;
  out["tmix"] = m.tmix;
  out["eps"] = m.eps;
  ordered_json profile = ordered_json::array();
  for (const auto& [t, d] : m.tv_profile) {
    ordered_json row;
    row["T"] = t;
    row["d"] = d;
    profile.push_back(std::move(row));
  }
  out["tv_profile"] = std::move(profile);
  return out;
}

ordered_json json_of(const LargestMixingResult& m) {
  ordered_json out;
  out["eps"] = m.eps;
  out["cap"] = m.cap;
  out["tmix_sup"] = m.tmix_sup;
  out["grid"] = m.grid;
  out["tmix"] = m.tmix_at;
  return out;
}

ordered_json json_of(const Trajectory& t) {
  ordered_json out;
  out["horizon"] = t.horizon;
  out["max_deviation"] = t.max_deviation;
  out["argmax_k"] = t.argmax_k;
  out["deviations"] = t.deviations;
  return out;
}

ordered_json json_of(const SadResult& r) {
  ordered_json out;
  if (r.tsad)
    out["tsad"] = *r.tsad;
  else
    out["tsad"] = nullptr;
  out["eps"] = r.eps;
  out["cap"] = r.cap;
  out["strategy"] = r.strategy == SearchStrategy::Exact ? "exact" : "geometric";
  out["degenerate"] = r.degenerate;
  out["exhaustive_below"] = r.exhaustive_below;
  ordered_json log = ordered_json::array();
  for (const auto& entry : r.search_log) {
    ordered_json e;
    e["T"] = entry.horizon;
    e["feasible"] = entry.feasible;
    e["max_deviation"] = entry.max_deviation;
    log.push_back(std::move(e));
  }
  out["search_log"] = std::move(log);
  return out;
}

ordered_json json_of(const BoundReport& b) {
  ordered_json out;
  out["n"] = b.n;
  out["lipschitz"] = b.lipschitz;
  out["tmix"] = b.tmix;
  out["eps"] = b.eps;
  out["variant"] = b.variant == BoundVariant::TheoremLiteral ? "theorem_literal" : "proof_faithful";
  out["value"] = finite_or_null(b.value);
  out["ceiling"] = b.ceiling;
  return out;
}

ordered_json json_of(const ContinuityReport& r) {
  ordered_json out;
  out["eps"] = r.eps;
  out["sigma_floor"] = r.sigma_floor;
  out["lipschitz"] = r.lipschitz;
  out["n"] = r.n;
  out["delta"] = finite_or_null(r.delta);
  out["pairs_tested"] = r.pairs_tested;
  out["max_tv_seen"] = r.max_tv_seen;
  out["holds"] = r.holds;
  out["vacuous"] = r.vacuous;
  return out;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_of_spectral(const SpectralScan& s) {
  std::string out = "s,sigma\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    out += format_g17(s.grid[i]) + "," + format_g17(s.sigma[i]) + "\n";
  return out;
}

std::string csv_of_mixing(const LargestMixingResult& m) {
  std::string out = "s,tmix\n";
  for (std::size_t i = 0; i < m.grid.size(); ++i)
    out += format_g17(m.grid[i]) + "," + std::to_string(m.tmix_at[i]) + "\n";
  return out;
}

std::string csv_of_trajectory(const Trajectory& t) {
  std::string out = "k,s,deviation\n";
  for (std::size_t k = 0; k < t.deviations.size(); ++k) {
    const double s =
        static_cast<double>(k + 1) / static_cast<double>(t.horizon);
    out += std::to_string(k + 1) + "," + format_g17(s) + "," + format_g17(t.deviations[k]) + "\n";
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AnalysisError(errc::bad_input, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw AnalysisError(errc::bad_input, "cannot write " + path.string());
  out << content;
}

}  // namespace sadt
