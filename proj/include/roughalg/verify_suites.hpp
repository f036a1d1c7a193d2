#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "roughalg/one_forms.hpp"
#include "roughalg/paths.hpp"

namespace roughalg::verify {

// One named property check: `cases` instances were tried, the largest
// observed defect is compared against `tolerance`. Exact algebraic checks
// carry tolerance 0.
struct CheckResult {
  std::string name;
  int cases = 0;
  double worst_defect = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteReport {
  std::string suite;
  bool seeded = true;
  std::uint64_t seed = 0;
  nlohmann::ordered_json context;  // suite parameters, for the report
  std::vector<CheckResult> checks;
  bool passed = false;
};

// tolerance_scale multiplies every float tolerance; 0 turns each float check
// into an exact comparison, which is how reporting honesty is exercised.

// Exact algebra on words and permutations: the two pinned product expansions,
// associativity of the permutation product on random triples, the dendriform
// split of the shuffle, closure of the half shuffle, and the compatibility of
// the coproduct with the product on small orders.
SuiteReport hopf_suite(std::uint64_t seed, int max_order = 3, int trials = 25,
                       double tolerance_scale = 1.0);

// Signatures of piecewise linear paths: Chen's identity, reparametrisation
// invariance, reversal inverse, group likeness, and the unit circle's area.
SuiteReport signature_suite(std::uint64_t seed, int depth = 4, int paths = 20,
                            double tolerance_scale = 1.0);

// The character property of s_hat and the change of variable formula for
// half shuffles under the coproduct.
SuiteReport changevar_suite(std::uint64_t seed, int depth = 5, int trials = 3,
                            double tolerance_scale = 1.0);

// Slowly varying one forms on a synthetic smooth curve: the reset cocycle,
// identity fibers reproducing increments, convergence of the effect integral
// under refinement, and finiteness of the operator norm.
SuiteReport effects_suite(std::uint64_t seed, double tolerance_scale = 1.0);

// The same invariants run against user supplied data rather than synthetic
// fixtures: fibers are Taylor stacks of `form` along `path`.
SuiteReport effects_invariants(const paths::PiecewiseLinearPath& path,
                               const oneforms::PolynomialOneForm& form,
                               double p, double tol);

// {"suite","seed"?,"context","checks":[...],"passed"}; "seed" appears only
// for seeded suites.
nlohmann::ordered_json report_json(const SuiteReport& report);

}  // namespace roughalg::verify
