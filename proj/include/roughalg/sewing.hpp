#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "roughalg/paths.hpp"
#include "roughalg/tensor_series.hpp"

namespace roughalg::sewing {

// Flat l1 distance between group elements: l1 norm of the entry-wise
// difference across every level. Translation by z on either side is
// Lipschitz with factor l1_norm(z) under this distance.
double flat_distance(const tensor::GroupElement& a,
                     const tensor::GroupElement& b);

// Modulus V(t) = K t^alpha with K > 0 and alpha > 1, plus the dominating
// series Vbar(t) = sum_{n>=0} theta^n V(t 2^-n) = V(t) / (1 - theta 2^-alpha)
// for a fixed theta in (2, 2^alpha).
class StrongControl {
 public:
  StrongControl(double constant, double exponent);

  double operator()(double t) const;  // V(t), t >= 0
  double dominating(double t) const;  // Vbar(t)

  double constant() const { return constant_; }
  double exponent() const { return exponent_; }
  double theta() const { return theta_; }

 private:
  double constant_;
  double exponent_;
  double theta_;
};

// Two-parameter group-valued map mu(s, t) for s <= t.
using Evaluator = std::function<tensor::GroupElement(double, double)>;

// mu together with the control claimed to bound its multiplicativity defect:
// flat_distance(mu(s,t), mu(s,u) mu(u,t)) <= V(t-s).
struct AlmostMultiplicativeFunctional {
  Evaluator mu;
  StrongControl control;
};

// Left-to-right product mu(t0,t1) mu(t1,t2) ... over a partition given as at
// least two strictly increasing times.
tensor::GroupElement riemann_product(const Evaluator& mu,
                                     const std::vector<double>& partition);

// Diagnostics accumulated across the queries of one sewn functional.
struct SewingReport {
  int levels_used = 0;              // deepest dyadic refinement reached
  double final_defect = 0.0;        // last gap between successive levels
  double estimated_constant = 0.0;  // max flat_distance(mu, u) / Vbar(t-s)
};

class SewnFunctional;

// Builds the multiplicative functional determined by an admissible mu: each
// query u(s, t) is the limit of Riemann products of mu over dyadic
// partitions of [s, t], refined until successive levels are closer than an
// internal fraction of tol (so that multiplicativity of u holds within tol
// on queried triples). Throws if the admission test
// flat_distance(mu(s,t), mu(s,u) mu(u,t)) <= V(t-s) fails on a sampled
// triple grid of [lo, hi], or if a query fails to converge within max_level
// refinements.
SewnFunctional sew(AlmostMultiplicativeFunctional f, double lo, double hi,
                   double tol, int max_level = 24);

// The result of sew: callable, memoizing, safe for concurrent queries. The
// evaluator runs outside the internal lock and must itself tolerate
// concurrent calls.
class SewnFunctional {
 public:
  tensor::GroupElement operator()(double s, double t) const;
  SewingReport report() const;

 private:
  friend SewnFunctional sew(AlmostMultiplicativeFunctional f, double lo,
                            double hi, double tol, int max_level);
  struct State;
  explicit SewnFunctional(std::shared_ptr<State> state);
  std::shared_ptr<State> state_;
};

// Sews mu(s, t) := f(s, X_s)^{-1} f(s, X_t) over [lo, hi] and returns the
// full-interval value. The report out-parameter, when given, receives the
// sewing diagnostics.
tensor::GroupElement integrate_time_varying(
    const std::function<tensor::GroupElement(double,
                                             const tensor::GroupElement&)>& f,
    const paths::SampledRoughPath& X, double lo, double hi,
    const StrongControl& control, double tol, int max_level = 24,
    SewingReport* report = nullptr);

}  // namespace roughalg::sewing
