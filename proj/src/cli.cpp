#include "roughalg/cli.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "roughalg/one_forms.hpp"
#include "roughalg/paths.hpp"
#include "roughalg/rough_integration.hpp"
#include "roughalg/serialization.hpp"
#include "roughalg/tensor_series.hpp"
#include "roughalg/verify_suites.hpp"

namespace roughalg::cli {
namespace {

using json = nlohmann::ordered_json;
namespace ser = serialization;

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void validate(const RunConfig& cfg) {
  if (cfg.command != "signature" && cfg.command != "integrate" &&
      cfg.command != "verify" && cfg.command != "verify-effects")
    throw InputError("unknown command \"" + cfg.command +
                     "\" (use signature, integrate, verify, or "
                     "verify-effects)");
  if (cfg.depth < 1) throw InputError("depth must be at least 1");
  if (!std::isfinite(cfg.p) || !(cfg.p >= 1.0))
    throw InputError("p must be finite and at least 1");
  if (cfg.command == "verify") {
    // verify reads tol as a scale on the suite tolerances; zero is a
    // legitimate way to demand exactness.
    if (cfg.tol_set && !(cfg.tol >= 0.0))
      throw InputError("tolerance scale must be nonnegative");
  } else {
    if (!(cfg.tol > 0.0)) throw InputError("tol must be positive");
  }
  if (cfg.has_interval && !(cfg.interval_lo < cfg.interval_hi))
    throw InputError("interval must satisfy S < T");
  if (cfg.max_level < 1)
    throw InputError("refinement level budget must be at least 1");
}

paths::PiecewiseLinearPath load_path(const RunConfig& cfg) {
  if (cfg.path_file.empty()) throw InputError("no path file given");
  return ser::path_from_csv_file(cfg.path_file);
}

oneforms::PolynomialOneForm load_form(const RunConfig& cfg) {
  if (cfg.one_form_file.empty()) throw InputError("no one form file given");
  const json doc = ser::load_json_file(cfg.one_form_file);
  try {
    return ser::one_form_from_json(doc);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(cfg.one_form_file + ": " + e.what());
  }
}

// Refuse lifts whose flat tensor storage would be absurd; dim^depth entries
// arrive fast.
void guard_lift(int dim, int depth) {
  constexpr std::size_t budget = std::size_t{1} << 26;
  std::size_t level = 1;
  std::size_t total = 1;
  for (int k = 1; k <= depth; ++k) {
    if (level > budget / static_cast<std::size_t>(dim))
      level = budget + 1;
    else
      level *= static_cast<std::size_t>(dim);
    total += level;
    if (total > budget)
      throw InputError("lift of a dimension " + std::to_string(dim) +
                       " path to depth " + std::to_string(depth) +
                       " exceeds the tensor budget");
  }
}

}  // namespace

std::string render(const json& doc) { return doc.dump(2) + "\n"; }

CommandResult run_signature(const RunConfig& cfg) {
  const auto path = load_path(cfg);
  guard_lift(path.dim(), cfg.depth);
  const auto sig =
      cfg.has_interval
          ? paths::signature(path, cfg.depth, cfg.interval_lo,
                             cfg.interval_hi)
          : paths::signature(path, cfg.depth);
  json doc = ser::tensor_to_json(sig.series());
  doc["group_like_defect"] = tensor::group_like_defect(sig.series());
  if (cfg.verbosity >= 2) {
    json echo{{"command", "signature"},
              {"path", cfg.path_file},
              {"depth", cfg.depth},
              {"samples", static_cast<int>(path.times().size())}};
    if (cfg.has_interval)
      echo["interval"] = json::array({cfg.interval_lo, cfg.interval_hi});
    doc["config"] = std::move(echo);
  }
  return {std::move(doc), 0};
}

CommandResult run_integrate(const RunConfig& cfg) {
  const auto path = load_path(cfg);
  const auto form = load_form(cfg);
  if (form.dim_in() != path.dim())
    throw InputError("one form domain dimension " +
                     std::to_string(form.dim_in()) +
                     " differs from path dimension " +
                     std::to_string(path.dim()));

  const double p = cfg.p;
  const int cap = static_cast<int>(std::floor(p));
  double gamma = form.degree() + 1.0;
  std::string warning;
  if (!(gamma > p)) {
    // A polynomial is as smooth as we declare it: pad the derivative stack
    // with zero levels, which is exact, and say so in the output.
    gamma = std::floor(p) + 1.5;
    warning = "declared smoothness degree + 1 = " +
              std::to_string(form.degree() + 1) + " does not exceed p = " +
              fmt(p) + "; zero padded the derivative stack up to order " +
              fmt(gamma) + ", exact for polynomial coefficients";
  }

  oneforms::LipOneFormData lip;
  lip.dim_in = form.dim_in();
  lip.dim_out = form.dim_out();
  lip.gamma = gamma;
  lip.bound = 0.0;
  for (int j = 0; j <= cap; ++j) {
    if (j <= form.degree()) {
      lip.stack.push_back([form, j](const std::vector<double>& x) {
        return oneforms::shift_base(form, x).coeff(j);
      });
    } else {
      std::size_t size = static_cast<std::size_t>(form.dim_out());
      for (int r = 0; r <= j; ++r)
        size *= static_cast<std::size_t>(form.dim_in());
      lip.stack.push_back([size](const std::vector<double>&) {
        return std::vector<double>(size, 0.0);
      });
    }
  }

  const int lift_depth = cfg.depth * (cap + 1);
  guard_lift(path.dim(), lift_depth);
  const auto X = paths::lift_path(path, lift_depth);
  const double lo = cfg.has_interval ? cfg.interval_lo : path.t_begin();
  const double hi = cfg.has_interval ? cfg.interval_hi : path.t_end();

  const roughint::RoughIntegralProblem problem{
      X, lip, p, lo, hi, cfg.depth, cfg.tol, cfg.max_level};
  try {
    const auto result = roughint::rough_integral(problem);
    json doc = ser::tensor_to_json(result.value.series());
    doc["level1"] = result.level1;
    if (!warning.empty()) doc["warning"] = warning;
    doc["sewing_report"] =
        json{{"levels_used", result.sewing_report.levels_used},
             {"final_defect", result.sewing_report.final_defect},
             {"estimated_constant", result.sewing_report.estimated_constant}};
    if (cfg.verbosity >= 2) {
      doc["config"] = json{{"command", "integrate"},
                           {"path", cfg.path_file},
                           {"one_form", cfg.one_form_file},
                           {"p", p},
                           {"depth", cfg.depth},
                           {"tol", cfg.tol},
                           {"lift_depth", lift_depth},
                           {"interval", json::array({lo, hi})}};
    }
    return {std::move(doc), 0};
  } catch (const std::runtime_error& e) {
    // Numerical failure: the almost multiplicative data refused to sew.
    json doc;
    doc["error"] = e.what();
    if (!warning.empty()) doc["warning"] = warning;
    return {std::move(doc), 3};
  }
}

CommandResult run_verify(const RunConfig& cfg) {
  const double scale = cfg.tol_set ? cfg.tol : 1.0;
  verify::SuiteReport rep;
  if (cfg.suite == "hopf") {
    rep = verify::hopf_suite(cfg.seed, 3, 25, scale);
  } else if (cfg.suite == "signature") {
    rep = verify::signature_suite(cfg.seed, cfg.depth_set ? cfg.depth : 4,
                                  20, scale);
  } else if (cfg.suite == "changevar") {
    rep = verify::changevar_suite(cfg.seed, cfg.depth_set ? cfg.depth : 5, 3,
                                  scale);
  } else if (cfg.suite == "effects") {
    rep = verify::effects_suite(cfg.seed, scale);
  } else {
    throw InputError("unknown suite \"" + cfg.suite +
                     "\" (use hopf, signature, changevar, or effects)");
  }
  json doc = verify::report_json(rep);
  return {std::move(doc), rep.passed ? 0 : 1};
}

CommandResult run_verify_effects(const RunConfig& cfg) {
  const auto path = load_path(cfg);
  const auto form = load_form(cfg);
  const auto rep = verify::effects_invariants(path, form, cfg.p, cfg.tol);
  json doc = verify::report_json(rep);
  return {std::move(doc), rep.passed ? 0 : 1};
}

CommandResult execute(const RunConfig& cfg) {
  try {
    validate(cfg);
    if (cfg.command == "signature") return run_signature(cfg);
    if (cfg.command == "integrate") return run_integrate(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    return run_verify_effects(cfg);
  } catch (const InputError& e) {
    return {json{{"error", e.what()}}, 2};
  } catch (const std::invalid_argument& e) {
    return {json{{"error", e.what()}}, 2};
  } catch (const std::exception& e) {
    return {json{{"error", e.what()}}, 2};
  }
}

}  // namespace roughalg::cli
