#pragma once

#include <string>
#include <vector>

#include "roughalg/one_forms.hpp"
#include "roughalg/paths.hpp"
#include "roughalg/sewing.hpp"
#include "roughalg/tensor_series.hpp"

namespace roughalg::roughint {

// Integration of a Lip(gamma) one-form along a sampled rough path over
// [lo, hi], producing a group element of the given output depth over the
// form's target space. Requires gamma > p and X deep enough to support the
// output depth: depth(X) >= out_depth * (floor(p) + 1).
struct RoughIntegralProblem {
  paths::SampledRoughPath X;
  oneforms::LipOneFormData lip;
  double p = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  int out_depth = 1;
  double tol = 1e-9;
  int max_level = 24;
};

struct RoughIntegralResult {
  tensor::GroupElement value;   // the sewn group element over the target space
  std::vector<double> level1;   // its level 1: the integral itself
  sewing::SewingReport sewing_report;
};

// Sews mu(s,t) = F_q(X_s)^{-1} F_q(X_t), where q is the local Taylor model
// of the form at the trace point x_s, re-fitted at every s. The defect
// exponent is min(floor(p)+1, gamma)/p; its constant has no a priori value
// and is fitted on the admission grid before sewing.
RoughIntegralResult rough_integral(const RoughIntegralProblem& problem);

// Diagnostics of the Young integral computation: dyadic left-point sums,
// their Richardson pairs 2 S_{k} - S_{k-1}, and convergence state.
struct YoungReport {
  std::vector<double> raw_sums;
  std::vector<double> accelerated;
  bool exponents_compatible = true;  // 1/p + 1/q > 1
  bool converged = false;
  double final_gap = 0.0;
};

// Integral of x against y from sampled values on a shared time grid: the
// limit of left-point Riemann sums over index-dyadic subgrids, accelerated
// by pairwise Richardson extrapolation. Incompatible exponents
// (1/p + 1/q <= 1) and failure to meet tol before the grid is exhausted are
// reported, not thrown.
double young_integral(const std::vector<double>& times,
                      const std::vector<double>& x,
                      const std::vector<double>& y, double p, double q,
                      double tol = 1e-9, YoungReport* report = nullptr);

// Sample-level checks that X behaves like a geometric p-rough path:
// group-likeness of the points and their increments, and superadditivity of
// the induced p-variation control.
struct GeometricReport {
  double p_variation = 0.0;
  double max_group_defect = 0.0;
  // Most negative omega(s,t) - omega(s,u) - omega(u,t) seen; anything below
  // the rounding slack is a violation.
  double min_superadditivity_gap = 0.0;
  std::vector<std::string> violations;
  bool passed = true;
};

GeometricReport verify_geometric(const paths::SampledRoughPath& X, double p,
                                 double tol = 1e-8);

}  // namespace roughalg::roughint
