#pragma once

#include <vector>

#include "roughalg/tensor_series.hpp"

namespace roughalg::paths {

// Polygonal path in R^d with strictly increasing sample times. Smooth paths
// enter the library as polygonal samplings of themselves.
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath(std::vector<double> times,
                      std::vector<std::vector<double>> points);

  int dim() const { return dim_; }
  std::size_t sample_count() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  // Linear interpolation; throws outside [t_begin, t_end].
  std::vector<double> value(double t) const;
  // Sum of l1 segment increments.
  double total_variation() const;

 private:
  int dim_;
  std::vector<double> times_;
  std::vector<std::vector<double>> points_;
};

// Signature of the straight segment from a to b: level k is (b-a)^{(x) k}/k!.
tensor::GroupElement segment_signature(const std::vector<double>& a,
                                       const std::vector<double>& b, int depth);

// Signature over [s, t] (defaulting to the whole time range) as the
// concatenation product of segment exponentials; endpoints may subdivide a
// segment.
tensor::GroupElement signature(const PiecewiseLinearPath& path, int depth);
tensor::GroupElement signature(const PiecewiseLinearPath& path, int depth,
                               double s, double t);

// Test oracle: nested left-point Riemann sums over a uniform grid, sampling
// the path velocity at each cell's left edge. First-order accurate in 1/grid;
// deliberately independent of the Chen evaluation above.
tensor::GroupElement brute_force_iterated_integrals(
    const PiecewiseLinearPath& path, int depth, int grid);

// Same polygonal image traversed backwards, on the same time grid.
PiecewiseLinearPath reversed(const PiecewiseLinearPath& path);

// Group-valued path sampled at increasing times; between samples, at(t)
// follows the one-parameter geodesic through log of the increment, which is
// exact for lifts of piecewise-linear paths.
class SampledRoughPath {
 public:
  SampledRoughPath(std::vector<double> times,
                   std::vector<tensor::GroupElement> elements);

  int dim() const;
  int depth() const;
  const std::vector<double>& times() const { return times_; }
  const std::vector<tensor::GroupElement>& elements() const {
    return elements_;
  }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  tensor::GroupElement at(double t) const;
  // X_s^{-1} X_t for s <= t.
  tensor::GroupElement increment(double s, double t) const;

 private:
  std::vector<double> times_;
  std::vector<tensor::GroupElement> elements_;
};

// Canonical lift X_t = exp(x_{t_0}) * signature over [t_0, t], sampled at the
// path's vertices.
SampledRoughPath lift_path(const PiecewiseLinearPath& path, int depth);

}  // namespace roughalg::paths
