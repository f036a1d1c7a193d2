#pragma once

#include <functional>
#include <vector>

#include "roughalg/paths.hpp"
#include "roughalg/tensor_series.hpp"

namespace roughalg::effects {

// Fiber of the polynomial bundle along a rough path: phi = sum_k phi^k with
// phi^k in L(V^{(x)k}, U), k = 1..degree, stored as row-major
// dim_out x dim_in^k arrays. There is no degree-0 part, so phi vanishes on
// the identity group element.
class FiberElement {
 public:
  // Zero stack of the given degree.
  FiberElement(int dim_in, int dim_out, int degree);
  // levels[k-1] holds phi^k and must have size dim_out * dim_in^k.
  FiberElement(int dim_in, int dim_out,
               std::vector<std::vector<double>> levels);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  int degree() const { return static_cast<int>(levels_.size()); }

  std::vector<double>& level(int k) {
    return levels_[static_cast<std::size_t>(k) - 1];
  }
  const std::vector<double>& level(int k) const {
    return levels_[static_cast<std::size_t>(k) - 1];
  }

  // phi(x) = sum_k phi^k(x^k); requires x.depth() >= degree().
  std::vector<double> evaluate(const tensor::GroupElement& x) const;

  // l1 -> l1 operator norm of one level, and the max over levels.
  double level_norm(int k) const;
  double norm() const;

  FiberElement& operator+=(const FiberElement& o);
  FiberElement& operator-=(const FiberElement& o);
  void scale(double c);

 private:
  int dim_in_;
  int dim_out_;
  std::vector<std::vector<double>> levels_;
};

// Parallel transport of a fiber: x -> phi(a x) - phi(a) as a closed-form
// stack, contracting the leading slots of each level against the graded
// parts of a. Requires a.depth() >= degree - 1.
// Cocycle: reset(reset(phi, a), b) = reset(phi, a * b).
FiberElement reset(const FiberElement& phi, const tensor::GroupElement& a);

// Graded products of fibers. Each keeps the degree bound of its inputs: the
// degree-n component sums contractions of phi^{k_1} (x) ... (x) phi^{k_l}
// against a permutation kernel acting on x^n, over k_1 + ... + k_l = n.
//
// truncated_power: l-fold product of phi with itself, kernel the full
// permutation product of identities; on group-like x its padded-to-degree
// l*degree version evaluates to the l-fold tensor power of phi(x).
FiberElement truncated_power(const FiberElement& phi, int l);
// truncated_product: binary version for two stacks, output over U1 (x) U2.
FiberElement truncated_product(const FiberElement& phi1,
                               const FiberElement& phi2);
// truncated_half_shuffle: the iterated-integration kernel 1_{k1} > 1_{k2}.
// Splits the product: truncated_product(a, b) =
// truncated_half_shuffle(a, b) + swap of truncated_half_shuffle(b, a).
FiberElement truncated_half_shuffle(const FiberElement& phi1,
                                    const FiberElement& phi2);

// Reindex a stack over U_a (x) U_b (rows u_a * right_rows + u_b) to one over
// U_b (x) U_a. Requires left_rows * right_rows == dim_out.
FiberElement swap_tensor_factors(const FiberElement& phi, int left_rows,
                                 int right_rows);

// One-form along a fixed sampled rough path: a fiber at every sample time,
// with the path exponent p and declared control and exponent theta > 1.
// Fibers all have degree floor(p).
class SlowlyVaryingOneForm {
 public:
  SlowlyVaryingOneForm(paths::SampledRoughPath X,
                       std::vector<FiberElement> fibers, double p,
                       tensor::Control omega, double theta);

  const paths::SampledRoughPath& path() const { return X_; }
  const std::vector<FiberElement>& fibers() const { return fibers_; }
  const FiberElement& fiber(std::size_t i) const { return fibers_[i]; }
  double p() const { return p_; }
  int truncation() const { return fibers_.front().degree(); }
  int dim_out() const { return fibers_.front().dim_out(); }
  const tensor::Control& omega() const { return omega_; }
  double theta() const { return theta_; }

 private:
  paths::SampledRoughPath X_;
  std::vector<FiberElement> fibers_;
  double p_;
  tensor::Control omega_;
  double theta_;
};

struct OperatorNormReport {
  double sup_norm = 0.0;                 // sup_t of the fiber norms
  std::vector<double> difference_terms;  // per k = 1..truncation
  bool nonpositive_exponent = false;     // theta - k/p <= 0 for some k
  bool infinite = false;  // zero control against a nonzero numerator
};

// Sampled operator norm: sup_t ||beta(X_t)|| plus, for each level k, the
// max over sample pairs s < t of the level-k norm of
// beta(X_t) - reset(beta(X_s), X_{s,t}), divided by omega(s,t)^{theta - k/p}.
// All suprema range over the stored samples. Zero-control pairs contribute
// 0 when the numerator vanishes and make the norm infinite otherwise.
double operator_norm(const SlowlyVaryingOneForm& beta,
                     const tensor::Control& omega, double theta,
                     OperatorNormReport* report = nullptr);

struct EffectPath {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // values.front() is zero
  bool converged = false;
  double final_gap = 0.0;
};

// Riemann sums of beta(X_{t_k})(X_{t_k, t_{k+1}}) along the samples in
// [lo, hi]; lo and hi must be sample times. values are prefix sums on the
// finest grid; convergence is diagnosed by comparing index-dyadic
// refinements of the total and reported, not thrown.
EffectPath integrate_effect(const SlowlyVaryingOneForm& beta, double lo,
                            double hi, double tol);
EffectPath integrate_effect(const SlowlyVaryingOneForm& beta, double tol);

// A C^gamma function given by its derivative stack: stack[l](u) returns
// D^l phi at u as a row-major dim_out x dim_in^l array, l = 0, 1, ...
struct RegularFunction {
  int dim_in = 0;
  int dim_out = 0;
  double gamma = 0.0;
  std::vector<std::function<std::vector<double>(const std::vector<double>&)>>
      stack;
};

struct ComposeReport {
  EffectPath h;
  double h_sup = 0.0;
  double phi_norm_estimate = 0.0;   // max sampled derivative norm, l <= cap
  double operator_norm_value = 0.0;
  double estimated_constant = 0.0;  // fitted from the norm inequality
};

// Composition with a regular function: the new fiber at t is
// sum_l (1/l!) (D^l phi)(h_t) applied to the l-th truncated power of the
// fiber of beta1, with h the integral of beta1. The result keeps
// omega1 + |X|_pvar^p as control and theta = min(theta1, gamma/p,
// (floor(p)+1)/p). Norm fields of the report are filled only when a report
// is requested (they cost a quadratic number of resets).
SlowlyVaryingOneForm compose_effect(const SlowlyVaryingOneForm& beta1,
                                    const RegularFunction& phi, double tol,
                                    ComposeReport* report = nullptr);

struct IteratedReport {
  EffectPath h1;
  double operator_norm_value = 0.0;
  double estimated_constant = 0.0;
};

// Iterated integration: fiber at t is h_t (x) beta2-fiber plus the
// truncated half-shuffle of the two fibers; with beta2 the level-1 identity
// this is the integration of beta1. Control omega1 + omega2 + |X|_pvar^p,
// theta = min(theta1, theta2).
SlowlyVaryingOneForm iterated_effect(const SlowlyVaryingOneForm& beta1,
                                     const SlowlyVaryingOneForm& beta2,
                                     double tol,
                                     IteratedReport* report = nullptr);

}  // namespace roughalg::effects
