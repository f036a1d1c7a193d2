#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "roughalg/permutations.hpp"

namespace roughalg::tensor {

// Dense truncated tensor series over R^dim. Level k holds dim^k coefficients in
// row-major word order: the index of a word is its base-dim digit string with
// the first letter most significant.
class TruncatedTensorSeries {
 public:
  TruncatedTensorSeries(int dim, int depth);

  static TruncatedTensorSeries unit(int dim, int depth);

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  std::size_t level_size(int k) const { return sizes_[k]; }

  std::vector<double>& level(int k) { return levels_[k]; }
  const std::vector<double>& level(int k) const { return levels_[k]; }

  bool same_shape(const TruncatedTensorSeries& o) const {
    return dim_ == o.dim_ && depth_ == o.depth_;
  }

  TruncatedTensorSeries& operator+=(const TruncatedTensorSeries& o);
  TruncatedTensorSeries& operator-=(const TruncatedTensorSeries& o);
  void scale(double c);

  // Largest entry-wise absolute difference across levels.
  friend double max_abs_diff(const TruncatedTensorSeries& a,
                             const TruncatedTensorSeries& b);
  // l1 norm across all levels (the algebra norm; submultiplicative).
  friend double l1_norm(const TruncatedTensorSeries& a);

 private:
  int dim_ = 1;
  int depth_ = 1;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<double>> levels_;
};

double max_abs_diff(const TruncatedTensorSeries& a,
                    const TruncatedTensorSeries& b);
double l1_norm(const TruncatedTensorSeries& a);

// Graded concatenation product truncated at the common depth.
TruncatedTensorSeries conc_mul(const TruncatedTensorSeries& a,
                               const TruncatedTensorSeries& b);

// A tensor series with level-0 coefficient exactly 1; closed under conc_mul,
// inverse, and reachable by exp.
class GroupElement {
 public:
  explicit GroupElement(TruncatedTensorSeries s);
  static GroupElement one(int dim, int depth);

  int dim() const { return series_.dim(); }
  int depth() const { return series_.depth(); }
  const TruncatedTensorSeries& series() const { return series_; }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(conc_mul(a.series_, b.series_));
  }

 private:
  TruncatedTensorSeries series_;
};

// Truncated Neumann series for (1 + x)^{-1}; exact on group elements up to
// rounding.
GroupElement inverse(const GroupElement& a);

// Truncated exponential; requires zero level-0 coefficient.
GroupElement exp(const TruncatedTensorSeries& l);
// Truncated logarithm of a unit-leading series.
TruncatedTensorSeries log(const GroupElement& a);

// Worst shuffle-character violation max |<a, u sh v> - <a,u><a,v>| over word
// pairs with |u|+|v| <= depth; zero iff group-like up to the truncation.
double group_like_defect(const TruncatedTensorSeries& a);

// max_k ||pi_k(a^{-1}b)||_1^{1/k}.
double homogeneous_distance(const GroupElement& a, const GroupElement& b);

// p-variation norm of a sampled group-valued path: the supremum over
// sub-partitions of the sample points of sum d(X_k, X_{k+1})^p, raised to 1/p.
// Computed by dynamic programming over the samples.
double p_variation(const std::vector<GroupElement>& points, double p);

// s_hat(sigma, s): series whose level-n component, for each order-n term of
// sigma, is the coefficient array w -> <s, sigma.w>, summed with coefficients.
TruncatedTensorSeries s_hat(const words::PermutationSum& sigma,
                            const GroupElement& s);

// Interval control omega(s,t): continuous, superadditive, zero on the diagonal.
class Control {
 public:
  static Control linear(double c);
  // p-variation control of a sampled group-valued path: omega(s,t) is the p-th
  // power of the p-variation over the samples inside [s,t].
  static Control p_variation_of(std::vector<double> times,
                                std::vector<GroupElement> points, double p);
  static Control sum(Control a, Control b);

  double operator()(double s, double t) const;

 private:
  explicit Control(std::function<double(double, double)> eval);
  std::function<double(double, double)> eval_;
};

}  // namespace roughalg::tensor
