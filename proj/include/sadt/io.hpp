#pragma once
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sadt/adiabatic.hpp"
#include "sadt/evolution.hpp"
#include "sadt/matrix.hpp"
#include "sadt/mixing.hpp"
#include "sadt/spectral.hpp"

namespace sadt {

// Evolution JSON schema:
//   {
//     "kind": "convex" | "piecewise_linear" | "sampled_grid",
//     "breakpoints": [0, ..., 1],   // omitted or [0,1] for convex
//     "matrices": [ [[row], [row], ...], ... ]
//   }
// Matrices pass standard ingest (row_tol 1e-9).  Parse problems raise
// AnalysisError(bad_input); structural defects keep their own codes.
Evolution load_evolution(const nlohmann::json& j);
Evolution load_evolution_file(const std::filesystem::path& path);
nlohmann::ordered_json json_of(const Evolution& e);

// Report serializers.  All use ordered_json and only finite numbers (non-
// finite values become null), so equal inputs give byte-equal dumps.
nlohmann::ordered_json json_of(const Classification& c);
nlohmann::ordered_json json_of(const StructuralCertificate& c);
nlohmann::ordered_json json_of(const LipschitzEstimate& l);
nlohmann::ordered_json json_of(const SpectralScan& s);
nlohmann::ordered_json json_of(const MixingLowerBoundVerdict& v);
nlohmann::ordered_json json_of(const MixingResult& m);
nlohmann::ordered_json json_of(const LargestMixingResult& m);
nlohmann::ordered_json json_of(const Trajectory& t);
nlohmann::ordered_json json_of(const SadResult& r);
nlohmann::ordered_json json_of(const BoundReport& b);
nlohmann::ordered_json json_of(const ContinuityReport& r);

// 17 significant digits: enough to round-trip any double exactly.
std::string format_g17(double v);

std::string csv_of_spectral(const SpectralScan& s);
std::string csv_of_mixing(const LargestMixingResult& m);
std::string csv_of_trajectory(const Trajectory& t);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace sadt
