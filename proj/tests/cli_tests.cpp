// End-to-end checks of the command-line tool: exit codes, output files, and
// byte-stable reports.  Runs the real binary (path injected at compile time)
// in a scratch directory under /tmp.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "sadt/instances.hpp"
#include "sadt/io.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(bool ok, const std::string& what) {
  if (!ok) {
    ++g_failures;
    std::cout << "[FAIL] " << what << "\n";
  } else {
    std::cout << "[ ok ] " << what << "\n";
  }
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(SADT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
  return fs::exists(p) ? sadt::read_text_file(p) : std::string();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

int main() {
  fs::path work = fs::temp_directory_path() / "sadt_cli_tests";
  fs::remove_all(work);
  fs::create_directories(work);
  fs::path log = work / "run.log";

  fs::path fam_json = work / "fam3.json";
  sadt::write_text_file(fam_json, sadt::json_of(sadt::reset_shift_family(3)).dump(2) + "\n");

  // --- analyze: success, expected artifacts, byte-stable reruns ---
  const std::string common = "--input " + fam_json.string() + " --eps 0.2 --grid 201";
  int rc = run("analyze " + common + " --out-dir " + (work / "a1").string(), log);
  report(rc == 0, "analyze exits 0 on the reset/shift family (got " + std::to_string(rc) + ")");
  report(fs::exists(work / "a1" / "fam3.analyze.json"), "analyze writes the JSON report");
  report(fs::exists(work / "a1" / "fam3.spectral.csv"), "analyze writes the spectral CSV");
  report(fs::exists(work / "a1" / "fam3.mixing.csv"), "analyze writes the mixing CSV");

  rc = run("analyze " + common + " --out-dir " + (work / "a2").string(), log);
  report(rc == 0, "analyze rerun exits 0");
  report(!slurp(work / "a1" / "fam3.analyze.json").empty() &&
             slurp(work / "a1" / "fam3.analyze.json") == slurp(work / "a2" / "fam3.analyze.json"),
         "analyze reports are byte-identical across reruns");

  rc = run("analyze " + common + " --workers 1 --out-dir " + (work / "a3").string(), log);
  report(rc == 0, "analyze --workers 1 exits 0");
  report(slurp(work / "a1" / "fam3.analyze.json") == slurp(work / "a3" / "fam3.analyze.json"),
         "worker count does not change report bytes");

  rc = run("analyze " + common + " --kernel scalar --out-dir " + (work / "a4").string(), log);
  report(rc == 0, "analyze runs on the scalar kernel backend");

  // --- input and usage failures ---
  fs::path broken = work / "broken.json";
  sadt::write_text_file(broken, "{ this is not json\n");
  rc = run("analyze --input " + broken.string() + " --out-dir " + work.string(), log);
  report(rc == 2, "malformed input JSON exits 2 (got " + std::to_string(rc) + ")");

  rc = run("analyze --input " + (work / "missing.json").string(), log);
  report(rc == 2, "missing input file exits 2 (got " + std::to_string(rc) + ")");

  rc = run("", log);
  report(rc == 2, "no subcommand exits 2 (got " + std::to_string(rc) + ")");

  rc = run("frobnicate", log);
  report(rc == 2, "unknown subcommand exits 2 (got " + std::to_string(rc) + ")");

  rc = run("analyze " + common + " --eps 1.5 --out-dir " + work.string(), log);
  report(rc == 2, "eps outside (0,1) exits 2 (got " + std::to_string(rc) + ")");

  rc = run("demo-optimal --out-dir " + work.string(), log);
  report(rc == 2, "demo-optimal without --n exits 2 (got " + std::to_string(rc) + ")");

  // --- mixing ---
  rc = run("mixing " + common + " --out-dir " + (work / "m1").string(), log);
  report(rc == 0, "mixing exits 0 (got " + std::to_string(rc) + ")");
  report(contains(slurp(work / "m1" / "fam3.mixing.json"), "\"tmix_sup\": 2"),
         "mixing report carries the known supremum for the family at eps 0.2");

  // --- sad: default cap from the bound, explicit tiny cap, trajectory CSV ---
  rc = run("sad " + common + " --out-dir " + (work / "s1").string(), log);
  report(rc == 0, "sad exits 0 with the default cap (got " + std::to_string(rc) + ")");
  const std::string sad1 = slurp(work / "s1" / "fam3.sad.json");
  report(contains(sad1, "\"tsad\": 5"), "sad finds the frozen horizon 5");
  report(contains(sad1, "\"exhaustive_below\": 5"), "exact search certifies the infimum");
  report(fs::exists(work / "s1" / "fam3.trajectory.csv"),
         "sad writes the trajectory CSV at the found horizon");

  rc = run("sad " + common + " --cap 3 --out-dir " + (work / "s2").string(), log);
  report(rc == 3, "sad with an unreachable cap exits 3 (got " + std::to_string(rc) + ")");
  const std::string sad2 = slurp(work / "s2" / "fam3.sad.json");
  report(contains(sad2, "\"tsad\": null"), "capped sad reports a null horizon");
  report(contains(sad2, "\"T\": 3"), "capped sad still emits its search log");

  rc = run("sad " + common + " --strategy geometric --out-dir " + (work / "s3").string(), log);
  report(rc == 0, "geometric sad exits 0 (got " + std::to_string(rc) + ")");
  report(contains(slurp(work / "s3" / "fam3.sad.json"), "\"tsad\": 5"),
         "geometric strategy agrees on this family");

  // --- bound: validity window for eps ---
  rc = run("bound " + common + " --out-dir " + (work / "b1").string(), log);
  report(rc == 0, "bound exits 0 inside the eps window (got " + std::to_string(rc) + ")");
  report(contains(slurp(work / "b1" / "fam3.bound.json"), "\"variant\": \"proof_faithful\""),
         "bound defaults to the proof-faithful variant");
  rc = run("bound --input " + fam_json.string() + " --eps 0.4 --grid 201 --out-dir " +
               (work / "b2").string(),
           log);
  report(rc == 2, "bound with eps >= 1/(2 sqrt n) exits 2 (got " + std::to_string(rc) + ")");

  // --- strict mode rejects the family's reducible endpoints up front ---
  rc = run("analyze " + common + " --mode strict --out-dir " + (work / "st").string(), log);
  report(rc == 2, "strict mode fails the certificate and exits 2 (got " + std::to_string(rc) + ")");
  report(contains(slurp(work / "st" / "fam3.analyze.json"), "\"overall\": false"),
         "the failed certificate is still written out");

  // --- verify battery ---
  rc = run("verify --out-dir " + (work / "v1").string(), log);
  report(rc == 0, "verify exits 0 (got " + std::to_string(rc) + ")");
  report(contains(slurp(work / "v1" / "verify.json"), "\"all_pass\": true"),
         "battery reports all_pass");
  rc = run("verify --out-dir " + (work / "v2").string(), log);
  report(!slurp(work / "v1" / "verify.json").empty() &&
             slurp(work / "v1" / "verify.json") == slurp(work / "v2" / "verify.json"),
         "battery output is byte-identical across runs");
  rc = run("verify --workers 1 --out-dir " + (work / "v3").string(), log);
  report(slurp(work / "v1" / "verify.json") == slurp(work / "v3" / "verify.json"),
         "battery output is byte-identical across worker counts");
  rc = run("verify --inject-fault --out-dir " + (work / "v4").string(), log);
  report(rc == 1, "verify --inject-fault exits 1 (got " + std::to_string(rc) + ")");
  report(contains(slurp(work / "v4" / "verify.json"), "\"all_pass\": false"),
         "the injected fault is caught and reported");

  // --- demo-optimal on a small size ---
  rc = run("demo-optimal --n 3 4 --eps 0.2 --out-dir " + (work / "d1").string(), log);
  report(rc == 0, "demo-optimal exits 0 (got " + std::to_string(rc) + ")");
  const std::string demo = slurp(work / "d1" / "demo_optimal.json");
  report(contains(demo, "\"tsad\": 5") && contains(demo, "\"tsad\": 15"),
         "demo table reproduces the frozen horizons for n = 3 and 4");
  report(fs::exists(work / "d1" / "demo_optimal.csv"), "demo-optimal writes the CSV table");

  if (g_failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    fs::remove_all(work);
    return 0;
  }
  std::cout << "cli_tests: " << g_failures << " check(s) failed; artifacts kept in "
            << work.string() << "\n";
  return 1;
}
