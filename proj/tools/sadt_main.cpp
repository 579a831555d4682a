// Command-line front end: analyze | mixing | sad | bound | verify | demo-optimal.
// Exit codes: 0 success, 1 a verification verdict failed, 2 bad input or
// usage, 3 a search cap was exceeded.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sadt/adiabatic.hpp"
#include "sadt/instances.hpp"
#include "sadt/io.hpp"
#include "sadt/kernels.hpp"
#include "sadt/mixing.hpp"
#include "sadt/spectral.hpp"
#include "sadt/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string input;
  double eps = 0.1;
  std::size_t grid = sadt::kDefaultGridPoints;
  long long cap = sadt::kDefaultCap;
  std::string mode = "relaxed";
  std::string out = "both";
  std::string out_dir = ".";
  int workers = 4;
};

sadt::ValidationMode mode_of(const std::string& m) {
  return m == "strict" ? sadt::ValidationMode::Strict : sadt::ValidationMode::Relaxed;
}

bool want_json(const CommonOpts& o) { return o.out != "csv"; }
bool want_csv(const CommonOpts& o) { return o.out != "json"; }

fs::path out_path(const CommonOpts& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  return fs::path(o.out_dir) / name;
}

std::string input_stem(const CommonOpts& o) { return fs::path(o.input).stem().string(); }

void emit(const fs::path& p, const std::string& content) {
  sadt::write_text_file(p, content);
  std::cout << "wrote " << p.string() << "\n";
}

ordered_json config_json(const CommonOpts& o) {
  // Workers and output options are deliberately absent: they must not affect
  // report bytes.
  ordered_json j;
  j["input"] = fs::path(o.input).filename().string();
  j["eps"] = o.eps;
  j["grid_points"] = o.grid;
  j["cap"] = o.cap;
  j["mode"] = o.mode;
  return j;
}

void require_eps_open_unit(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw sadt::AnalysisError(sadt::errc::eps_out_of_range, "--eps must lie in (0,1)");
}

// The quadratic bound plus the mixing scan it needs, or an explanation of why
// eps is out of its validity range.
ordered_json bound_section(const sadt::Evolution& e, double eps, sadt::BoundVariant variant,
                           const CommonOpts& o, sadt::ValidationMode mode) {
  const double limit = 1.0 / (2.0 * std::sqrt(static_cast<double>(e.dim())));
  if (!(eps < limit)) {
    ordered_json j;
    j["eps_condition_ok"] = false;
    j["eps_limit"] = limit;
    j["variant"] =
        variant == sadt::BoundVariant::TheoremLiteral ? "theorem_literal" : "proof_faithful";
    return j;
  }
  const double eps_for_mixing = variant == sadt::BoundVariant::TheoremLiteral ? eps : eps / 2.0;
  sadt::LargestMixingResult mix =
      sadt::largest_mixing_time(e, eps_for_mixing, o.grid, o.cap, o.workers, mode);
  sadt::BoundReport b =
      sadt::quadratic_bound(e.dim(), e.lipschitz().value, mix.tmix_sup, eps, variant);
  ordered_json j = sadt::json_of(b);
  j["eps_condition_ok"] = true;
  return j;
}

int cmd_analyze(const CommonOpts& o) {
  require_eps_open_unit(o.eps);
  sadt::Evolution e = sadt::load_evolution_file(o.input);
  const sadt::ValidationMode mode = mode_of(o.mode);

  ordered_json report;
  report["config"] = config_json(o);
  report["n"] = e.dim();
  sadt::StructuralCertificate cert = e.certificate(mode);
  report["certificate"] = sadt::json_of(cert);
  if (!cert.overall) {
    report["error"] = "structural certificate failed";
    if (want_json(o)) emit(out_path(o, input_stem(o) + ".analyze.json"), report.dump(2) + "\n");
    std::cout << "certificate: FAIL\n";
    return 2;
  }

  report["lipschitz"] = sadt::json_of(e.lipschitz());
  sadt::SpectralScan scan = sadt::spectral_scan(e, o.grid, o.workers);
  report["spectral"] = sadt::json_of(scan);
  sadt::LargestMixingResult mix = sadt::largest_mixing_time(e, o.eps, o.grid, o.cap, o.workers, mode);
  report["largest_mixing"] = sadt::json_of(mix);
  report["bound_theorem_literal"] =
      bound_section(e, o.eps, sadt::BoundVariant::TheoremLiteral, o, mode);
  report["bound_proof_faithful"] =
      bound_section(e, o.eps, sadt::BoundVariant::ProofFaithful, o, mode);
  sadt::ContinuityReport continuity = sadt::check_stationary_continuity(e, o.eps, o.grid, o.workers);
  report["stationary_continuity"] = sadt::json_of(continuity);
  sadt::MixingLowerBoundVerdict lower_bound = sadt::check_mixing_lower_bound(e, o.eps, mix.tmix_sup, scan);
  report["mixing_lower_bound"] = sadt::json_of(lower_bound);

  if (want_json(o)) emit(out_path(o, input_stem(o) + ".analyze.json"), report.dump(2) + "\n");
  if (want_csv(o)) {
    emit(out_path(o, input_stem(o) + ".spectral.csv"), sadt::csv_of_spectral(scan));
    emit(out_path(o, input_stem(o) + ".mixing.csv"), sadt::csv_of_mixing(mix));
  }
  std::cout << "n=" << e.dim() << " sigma_floor=" << sadt::format_g17(scan.sigma_floor)
            << " tmix_sup=" << mix.tmix_sup << " continuity=" << (continuity.holds ? "holds" : "FAILS")
            << " lower_bound=" << (lower_bound.holds ? "holds" : "FAILS") << "\n";
  return continuity.holds && lower_bound.holds ? 0 : 1;
}

int cmd_mixing(const CommonOpts& o) {
  require_eps_open_unit(o.eps);
  sadt::Evolution e = sadt::load_evolution_file(o.input);
  sadt::LargestMixingResult mix =
      sadt::largest_mixing_time(e, o.eps, o.grid, o.cap, o.workers, mode_of(o.mode));
  ordered_json report;
  report["config"] = config_json(o);
  report["largest_mixing"] = sadt::json_of(mix);
  if (want_json(o)) emit(out_path(o, input_stem(o) + ".mixing.json"), report.dump(2) + "\n");
  if (want_csv(o)) emit(out_path(o, input_stem(o) + ".mixing.csv"), sadt::csv_of_mixing(mix));
  std::cout << "tmix_sup=" << mix.tmix_sup << " at eps=" << sadt::format_g17(o.eps) << "\n";
  return 0;
}

int cmd_sad(const CommonOpts& o, std::optional<long long> cap_flag, const std::string& strategy) {
  require_eps_open_unit(o.eps);
  sadt::Evolution e = sadt::load_evolution_file(o.input);
  const sadt::ValidationMode mode = mode_of(o.mode);

  ordered_json report;
  report["config"] = config_json(o);

  // Default horizon cap: the ceiling of the proof-faithful bound when eps is
  // in its validity range, otherwise the generic cap.
  long long cap = cap_flag.value_or(sadt::kDefaultCap);
  ordered_json bound =
      cap_flag ? ordered_json(nullptr)
               : bound_section(e, o.eps, sadt::BoundVariant::ProofFaithful, o, mode);
  if (!cap_flag && bound.is_object() && bound["eps_condition_ok"].get<bool>())
    cap = std::max(1LL, bound["ceiling"].get<long long>());
  report["config"]["cap"] = cap;
  report["bound_proof_faithful"] = bound;

  sadt::SadResult sad = sadt::stable_adiabatic_time(
      e, o.eps, cap,
      strategy == "geometric" ? sadt::SearchStrategy::Geometric : sadt::SearchStrategy::Exact,
      o.workers);
  report["stable_adiabatic"] = sadt::json_of(sad);

  if (want_json(o)) emit(out_path(o, input_stem(o) + ".sad.json"), report.dump(2) + "\n");
  if (sad.tsad) {
    if (want_csv(o)) {
      sadt::Trajectory traj = sadt::adiabatic_trajectory(e, *sad.tsad);
      emit(out_path(o, input_stem(o) + ".trajectory.csv"), sadt::csv_of_trajectory(traj));
    }
    std::cout << "tsad=" << *sad.tsad << (sad.degenerate ? " (degenerate eps >= 1)" : "") << "\n";
    return 0;
  }
  std::cout << "no feasible horizon up to cap=" << cap << "\n";
  return 3;
}

int cmd_bound(const CommonOpts& o, const std::string& variant_name) {
  require_eps_open_unit(o.eps);
  sadt::Evolution e = sadt::load_evolution_file(o.input);
  const sadt::ValidationMode mode = mode_of(o.mode);
  const sadt::BoundVariant variant = variant_name == "literal"
                                         ? sadt::BoundVariant::TheoremLiteral
                                         : sadt::BoundVariant::ProofFaithful;
  const double eps_for_mixing =
      variant == sadt::BoundVariant::TheoremLiteral ? o.eps : o.eps / 2.0;
  sadt::LargestMixingResult mix =
      sadt::largest_mixing_time(e, eps_for_mixing, o.grid, o.cap, o.workers, mode);
  // Out-of-range eps throws eps_out_of_range here -> usage error, exit 2.
  sadt::BoundReport b = sadt::quadratic_bound(e.dim(), e.lipschitz().value, mix.tmix_sup, o.eps, variant);
  ordered_json report;
  report["config"] = config_json(o);
  report["bound"] = sadt::json_of(b);
  if (want_json(o)) emit(out_path(o, input_stem(o) + ".bound.json"), report.dump(2) + "\n");
  std::cout << "bound=" << sadt::format_g17(b.value) << " ceiling=" << b.ceiling << "\n";
  return 0;
}

int cmd_verify(std::uint64_t seed, bool inject_fault, int workers, const std::string& out_dir) {
  sadt::BatteryOptions opts;
  opts.seed = seed;
  opts.inject_fault = inject_fault;
  opts.workers = workers;
  sadt::BatteryResult result = sadt::run_battery(opts);
  const std::string dump = sadt::json_of(result).dump(2) + "\n";
  fs::create_directories(out_dir);
  sadt::write_text_file(fs::path(out_dir) / "verify.json", dump);
  std::cout << dump;
  return result.all_pass ? 0 : 1;
}

int cmd_demo_optimal(const std::vector<std::size_t>& ns, double eps, std::size_t grid,
                     int workers, const std::string& out_dir) {
  require_eps_open_unit(eps);
  ordered_json rows = ordered_json::array();
  std::string csv = "n,tmix_sup,tsad,bound_ceiling,ratio\n";
  for (std::size_t n : ns) {
    if (n < 2)
      throw sadt::AnalysisError(sadt::errc::bad_input, "demo sizes must be >= 2");
    sadt::Evolution e = sadt::reset_shift_family(n);
    sadt::LargestMixingResult mix =
        sadt::largest_mixing_time(e, eps, grid, sadt::kDefaultCap, workers);
    std::optional<long long> ceiling;
    long long cap = sadt::kDefaultCap;
    if (eps < 1.0 / (2.0 * std::sqrt(static_cast<double>(n)))) {
      sadt::LargestMixingResult half =
          sadt::largest_mixing_time(e, eps / 2.0, grid, sadt::kDefaultCap, workers);
      ceiling = sadt::quadratic_bound(n, e.lipschitz().value, half.tmix_sup, eps,
                                     sadt::BoundVariant::ProofFaithful)
                    .ceiling;
      cap = std::max(1LL, *ceiling);
    }
    std::optional<long long> tsad;
    try {
      sadt::SadResult sad =
          sadt::stable_adiabatic_time(e, eps, cap, sadt::SearchStrategy::Exact, workers);
      tsad = sad.tsad;
    } catch (const sadt::AnalysisError& err) {
      if (err.code() != sadt::errc::cap_exceeded) throw;
    }
    ordered_json row;
    row["n"] = n;
    row["tmix_sup"] = mix.tmix_sup;
    row["tsad"] = tsad ? ordered_json(*tsad) : ordered_json(nullptr);
    row["bound_ceiling"] = ceiling ? ordered_json(*ceiling) : ordered_json(nullptr);
    const std::optional<double> ratio =
        tsad ? std::optional<double>(static_cast<double>(*tsad) * eps /
                                     (static_cast<double>(mix.tmix_sup) *
                                      static_cast<double>(mix.tmix_sup)))
             : std::nullopt;
    row["ratio"] = ratio ? ordered_json(*ratio) : ordered_json(nullptr);
    rows.push_back(row);
    csv += std::to_string(n) + "," + std::to_string(mix.tmix_sup) + "," +
           (tsad ? std::to_string(*tsad) : "") + "," +
           (ceiling ? std::to_string(*ceiling) : "") + "," +
           (ratio ? sadt::format_g17(*ratio) : "") + "\n";
    std::cout << "n=" << n << " tmix_sup=" << mix.tmix_sup
              << " tsad=" << (tsad ? std::to_string(*tsad) : "none") << "\n";
  }
  ordered_json report;
  report["eps"] = eps;
  report["grid_points"] = grid;
  report["rows"] = std::move(rows);
  fs::create_directories(out_dir);
  sadt::write_text_file(fs::path(out_dir) / "demo_optimal.json", report.dump(2) + "\n");
  std::cout << "wrote " << (fs::path(out_dir) / "demo_optimal.json").string() << "\n";
  sadt::write_text_file(fs::path(out_dir) / "demo_optimal.csv", csv);
  std::cout << "wrote " << (fs::path(out_dir) / "demo_optimal.csv").string() << "\n";
  return 0;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_eps = true) {
  cmd->add_option("--input", o.input, "evolution JSON file")->required();
  if (with_eps) cmd->add_option("--eps", o.eps, "accuracy target in (0,1)");
  cmd->add_option("--grid", o.grid, "analysis grid points (uniform, plus breakpoints)");
  cmd->add_option("--mode", o.mode, "structural validation mode")
      ->check(CLI::IsMember({"relaxed", "strict"}));
  cmd->add_option("--workers", o.workers, "worker threads (never affects output bytes)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "report formats to write")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_option("--out-dir", o.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixing, spectral, and stability analysis for continuously varying Markov chains"};
  app.require_subcommand(1);

  // Applied while parsing, before any subcommand callback runs.
  std::string kernel_choice;
  app.add_option("--kernel", kernel_choice, "force a kernel backend (scalar, avx2, neon)")
      ->check(CLI::IsMember({"scalar", "avx2", "neon"}))
      ->each([](const std::string& k) {
        sadt::kernels::set_backend(k == "scalar" ? sadt::kernels::Backend::Scalar
                                   : k == "avx2" ? sadt::kernels::Backend::Avx2
                                                 : sadt::kernels::Backend::Neon);
      });

  CommonOpts analyze_opts, mixing_opts, sad_opts, bound_opts;
  int rc = 0;

  CLI::App* analyze = app.add_subcommand("analyze", "full report: certificate, Lipschitz, "
                                                    "spectral floor, mixing, bounds, verdicts")->fallthrough();
  add_common(analyze, analyze_opts);
  analyze->add_option("--cap", analyze_opts.cap, "mixing-time search cap")->check(CLI::PositiveNumber);
  analyze->callback([&] { rc = cmd_analyze(analyze_opts); });

  CLI::App* mixing = app.add_subcommand("mixing", "largest mixing time over the path")->fallthrough();
  add_common(mixing, mixing_opts);
  mixing->add_option("--cap", mixing_opts.cap, "mixing-time search cap")->check(CLI::PositiveNumber);
  mixing->callback([&] { rc = cmd_mixing(mixing_opts); });

  CLI::App* sad = app.add_subcommand("sad", "stable adiabatic time search")->fallthrough();
  std::optional<long long> sad_cap;
  std::string sad_strategy = "exact";
  add_common(sad, sad_opts);
  sad->add_option("--cap", sad_cap, "horizon cap (default: proof-faithful bound ceiling)")
      ->check(CLI::PositiveNumber);
  sad->add_option("--strategy", sad_strategy, "horizon search strategy")
      ->check(CLI::IsMember({"exact", "geometric"}));
  sad->callback([&] { rc = cmd_sad(sad_opts, sad_cap, sad_strategy); });

  CLI::App* bound = app.add_subcommand("bound", "quadratic stability bound")->fallthrough();
  std::string bound_variant = "proof";
  add_common(bound, bound_opts);
  bound->add_option("--cap", bound_opts.cap, "mixing-time search cap")->check(CLI::PositiveNumber);
  bound->add_option("--variant", bound_variant, "which mixing accuracy feeds the bound")
      ->check(CLI::IsMember({"literal", "proof"}));
  bound->callback([&] { rc = cmd_bound(bound_opts, bound_variant); });

  CLI::App* verify = app.add_subcommand("verify", "seeded property battery")->fallthrough();
  std::uint64_t seed = 12345;
  bool inject_fault = false;
  int verify_workers = 4;
  std::string verify_out_dir = ".";
  verify->add_option("--seed", seed, "battery seed");
  verify->add_flag("--inject-fault", inject_fault,
                   "negative control: corrupt one input so the battery must fail");
  verify->add_option("--workers", verify_workers, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--out-dir", verify_out_dir, "output directory");
  verify->callback([&] { rc = cmd_verify(seed, inject_fault, verify_workers, verify_out_dir); });

  CLI::App* demo = app.add_subcommand("demo-optimal", "scaling table for the reset/shift family")->fallthrough();
  std::vector<std::size_t> demo_ns;
  double demo_eps = 0.2;
  std::size_t demo_grid = sadt::kDefaultGridPoints;
  int demo_workers = 4;
  std::string demo_out_dir = ".";
  demo->add_option("--n", demo_ns, "state counts, e.g. --n 4 6 8 10")->required()->expected(-1);
  demo->add_option("--eps", demo_eps, "accuracy target in (0,1)");
  demo->add_option("--grid", demo_grid, "analysis grid points");
  demo->add_option("--workers", demo_workers, "worker threads")->check(CLI::PositiveNumber);
  demo->add_option("--out-dir", demo_out_dir, "output directory");
  demo->callback([&] { rc = cmd_demo_optimal(demo_ns, demo_eps, demo_grid, demo_workers, demo_out_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sadt::AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == sadt::errc::cap_exceeded ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
