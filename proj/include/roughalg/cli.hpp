#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace roughalg::cli {

// Unusable input: a missing or malformed file, or an option combination the
// commands reject. Distinct from the numerical failures the library throws.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a command run needs. Invariants: depth >= 1, p >= 1, tol > 0,
// and when has_interval is set, interval_lo < interval_hi.
struct RunConfig {
  std::string command;  // signature | integrate | verify | verify-effects
  std::string path_file;
  std::string one_form_file;
  std::string suite;  // for verify: hopf | signature | changevar | effects
  int depth = 1;
  bool depth_set = false;  // verify falls back to per suite defaults
  double p = 1.0;
  double tol = 1e-9;
  bool tol_set = false;  // verify reads tol as a tolerance scale when set
  bool has_interval = false;
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  std::string out_file;  // empty: stdout
  std::uint64_t seed = 0;
  int verbosity = 1;
  int max_level = 24;  // refinement budget passed through to the sewing map
};

// A finished run: the document to emit and the process exit code.
// 0 success, 1 verification failures, 2 unusable input, 3 numerical failure.
struct CommandResult {
  nlohmann::ordered_json doc;
  int exit_code = 0;
};

CommandResult run_signature(const RunConfig& cfg);
CommandResult run_integrate(const RunConfig& cfg);
CommandResult run_verify(const RunConfig& cfg);
CommandResult run_verify_effects(const RunConfig& cfg);

// Validates cfg, dispatches on cfg.command, and maps exceptions to exit
// codes; never throws.
CommandResult execute(const RunConfig& cfg);

// The one rendering used everywhere: two space indent plus a final newline,
// so identical documents are identical bytes.
std::string render(const nlohmann::ordered_json& doc);

}  // namespace roughalg::cli
