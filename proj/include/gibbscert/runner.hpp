#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbscert/bounds.hpp"
#include "gibbscert/config.hpp"

namespace gibbscert {

struct KernelSpectrum {
  std::string name;
  std::size_t states = 0;
  double operator_norm = 0.0;
  double gap = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool psd = true;
};

// Searches for counterexamples to open questions. Never certified, never affects status.
struct ExploratoryFinding {
  std::string name;
  std::string question;
  std::vector<std::pair<std::string, double>> values;
  bool counterexample = false;
};

struct RunReport {
  std::string name;
  std::string fingerprint;
  std::vector<std::string> suites;
  std::vector<KernelSpectrum> spectra;  // sorted by name
  Reports reports;                      // sorted by name
  std::vector<ExploratoryFinding> exploratory;
  double seconds = 0.0;
};

// Builds the kernels the config's suites need, runs every check and sorts the results.
RunReport run_suite(const ModelConfig& config);

// 0 when every report passes or is hypothesis_unmet, 1 otherwise.
int exit_status(const RunReport& report);

// JSON text, sorted keys, trailing newline. Timing lives under "timing" and is the only
// field that may differ between identical runs; pass false to leave it out.
std::string report_json(const RunReport& report, bool with_timing = true);
// Columns: name,lhs,rhs,slack,status.
std::string report_csv(const RunReport& report);

// The command-line front end: analyze, check, simulate, demo, list-demos.
// Returns the process exit code (0 pass, 1 failed check, 2 input error).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gibbscert
