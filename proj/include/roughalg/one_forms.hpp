#pragma once

#include <functional>
#include <vector>

#include "roughalg/paths.hpp"
#include "roughalg/permutations.hpp"
#include "roughalg/tensor_series.hpp"

namespace roughalg::oneforms {

// Polynomial one-form p: R^d -> L(R^d, R^e) stored by its derivative arrays
// at base 0: coeffs[k] holds (D^k p)(0) in L(V^{(x)(k+1)}, U) as a row-major
// e x d^{k+1} array. The first k tensor slots are derivative slots (expected
// symmetric; asserted, not enforced), the last is the dx slot.
class PolynomialOneForm {
 public:
  PolynomialOneForm(int dim_in, int dim_out, int degree,
                    std::vector<std::vector<double>> coeffs);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  int degree() const { return degree_; }
  const std::vector<double>& coeff(int k) const {
    return coeffs_[static_cast<std::size_t>(k)];
  }

  // p(v)(w) = sum_k (D^k p)(0) (v^{(x)k} (x) w) / k!.
  std::vector<double> evaluate(const std::vector<double>& v,
                               const std::vector<double>& w) const;

  // Worst asymmetry of any derivative array under swapping two derivative
  // slots; 0 for exactly symmetric data.
  double derivative_symmetry_defect() const;

 private:
  int dim_in_;
  int dim_out_;
  int degree_;
  std::vector<std::vector<double>> coeffs_;
};

// max over columns of the l1 column sum: the l1 -> l1 operator norm of a
// row-major rows x cols matrix.
double l1_operator_norm(const std::vector<double>& a, int rows,
                        std::size_t cols);

// Same polynomial re-expanded around x0; the result's coefficient arrays are
// (D^k p)(x0), to be used in coordinates centered at x0.
PolynomialOneForm shift_base(const PolynomialOneForm& p,
                             const std::vector<double>& x0);

// f_p(g) = sum_{k=0}^n (D^k p)(0) applied to level k+1 of g (no factorial;
// the symmetrized factorial is absorbed by the signature levels).
std::vector<double> f_p(const PolynomialOneForm& p,
                        const tensor::GroupElement& g);

// One summand of sigma_l: the derivative orders (k_1..k_l) selecting the
// coefficient tensor (D^{k_1}p)(0) (x) ... (x) (D^{k_l}p)(0), and the
// permutation sum m_succ(1_{k_1+1}, ..., 1_{k_l+1}) it contracts against.
struct SigmaTerm {
  std::vector<int> ks;
  words::PermutationSum perm_sum;
};

// All sigma_l summands, k_i ranging over 0..degree in lexicographic order.
std::vector<SigmaTerm> sigma_l(const PolynomialOneForm& p, int l);

// F_p(s) = 1 + sum_{l=1}^{out_depth} s~(sigma_l): level l is the contraction
// of each sigma_l coefficient tensor against s_hat of its permutation sum.
// Requires depth(s) >= out_depth * (degree + 1).
tensor::GroupElement F_p(const PolynomialOneForm& p,
                         const tensor::GroupElement& s, int out_depth);

// A Lip(gamma)-style one-form given by its derivative stack: stack[j](x)
// returns (theta^j)(x) as a row-major e x d^{j+1} array, j = 0..floor(gamma).
// bound is the Taylor-remainder constant M.
struct LipOneFormData {
  int dim_in;
  int dim_out;
  double gamma;
  double bound;
  std::vector<std::function<std::vector<double>(const std::vector<double>&)>>
      stack;
};

// Worst Taylor-remainder excess over the Lip bound for the pair (x, y):
// max_j (||theta^j(x) - sum_l theta^{j+l}(y)(x-y)^l/l!|| - M |x-y|^{gamma-j}).
// Nonpositive when the data satisfies its declared bound on this pair.
double lip_taylor_defect(const LipOneFormData& lip,
                         const std::vector<double>& x,
                         const std::vector<double>& y);

// Degree-p_cap Taylor model of the Lip data at x_s, re-based to 0 so all
// downstream contractions share one convention.
PolynomialOneForm local_taylor_form(const LipOneFormData& lip,
                                    const std::vector<double>& x_s, int p_cap);

// Group increment of the F-lift over [s, t]:
// Y_{s,t} = F_p(X_s)^{-1} F_p(X_t) at output depth out_depth.
tensor::GroupElement almost_multiplicative_Y(const PolynomialOneForm& p_based,
                                             const paths::SampledRoughPath& X,
                                             double s, double t,
                                             int out_depth);

// Independent evaluation of the same increment: re-expand p at x_s = level 1
// of X_s and contract the ordered-shuffle kernels directly against the
// increment X_{s,t}. Cross-check for almost_multiplicative_Y.
tensor::GroupElement ordered_shuffle_Y(const PolynomialOneForm& p_based,
                                       const paths::SampledRoughPath& X,
                                       double s, double t, int out_depth);

}  // namespace roughalg::oneforms
