#include "roughalg/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace roughalg::paths {

using tensor::GroupElement;
using tensor::TruncatedTensorSeries;

PiecewiseLinearPath::PiecewiseLinearPath(
    std::vector<double> times, std::vector<std::vector<double>> points)
    : times_(std::move(times)), points_(std::move(points)) {
  if (times_.size() < 2) {
    throw std::invalid_argument("path needs at least 2 samples");
  }
  if (times_.size() != points_.size()) {
    throw std::invalid_argument("times and points size mismatch");
  }
  if (points_[0].empty()) throw std::invalid_argument("path needs dim >= 1");
  dim_ = static_cast<int>(points_[0].size());
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) {
      throw std::invalid_argument("non-finite sample time");
    }
    if (i > 0 && !(times_[i - 1] < times_[i])) {
      throw std::invalid_argument("times must be strictly increasing");
    }
    if (points_[i].size() != static_cast<std::size_t>(dim_)) {
      throw std::invalid_argument("inconsistent point dimension");
    }
    for (double x : points_[i]) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("non-finite path coordinate");
      }
    }
  }
}

std::vector<double> PiecewiseLinearPath::value(double t) const {
  if (t < t_begin() || t > t_end()) {
    throw std::invalid_argument("time outside path range");
  }
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t hi = std::min<std::size_t>(
      static_cast<std::size_t>(it - times_.begin()), times_.size() - 1);
  const std::size_t lo = hi - 1;
  const double theta = (t - times_[lo]) / (times_[hi] - times_[lo]);
  std::vector<double> out(static_cast<std::size_t>(dim_));
  for (int a = 0; a < dim_; ++a) {
    const std::size_t ai = static_cast<std::size_t>(a);
    out[ai] = points_[lo][ai] + theta * (points_[hi][ai] - points_[lo][ai]);
  }
  return out;
}

double PiecewiseLinearPath::total_variation() const {
  double total = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    for (int a = 0; a < dim_; ++a) {
      const std::size_t ai = static_cast<std::size_t>(a);
      total += std::abs(points_[i][ai] - points_[i - 1][ai]);
    }
  }
  return total;
}

GroupElement segment_signature(const std::vector<double>& a,
                               const std::vector<double>& b, int depth) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("segment endpoints dimension mismatch");
  }
  const int dim = static_cast<int>(a.size());
  TruncatedTensorSeries s(dim, depth);
  s.level(0)[0] = 1.0;
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = b[i] - a[i];
  // Level k is the k-fold tensor power of v divided by k!.
  for (int k = 1; k <= depth; ++k) {
    const auto& prev = s.level(k - 1);
    auto& cur = s.level(k);
    for (std::size_t u = 0; u < prev.size(); ++u) {
      for (int letter = 0; letter < dim; ++letter) {
        cur[u * static_cast<std::size_t>(dim) +
            static_cast<std::size_t>(letter)] =
            prev[u] * v[static_cast<std::size_t>(letter)] / k;
      }
    }
  }
  return GroupElement(std::move(s));
}

GroupElement signature(const PiecewiseLinearPath& path, int depth) {
  return signature(path, depth, path.t_begin(), path.t_end());
}

GroupElement signature(const PiecewiseLinearPath& path, int depth, double s,
                       double t) {
  if (s < path.t_begin() || t > path.t_end() || s > t) {
    throw std::invalid_argument("signature interval outside path range");
  }
  GroupElement acc = GroupElement::one(path.dim(), depth);
  const auto& times = path.times();
  std::vector<double> from = path.value(s);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double hi = times[i + 1];
    if (hi <= s) continue;
    if (times[i] >= t) break;
    const std::vector<double> to = path.value(std::min(hi, t));
    acc = acc * segment_signature(from, to, depth);
    from = to;
  }
  return acc;
}

GroupElement brute_force_iterated_integrals(const PiecewiseLinearPath& path,
                                            int depth, int grid) {
  if (grid < 1) throw std::invalid_argument("oracle grid must be >= 1");
  const int dim = path.dim();
  const double t0 = path.t_begin();
  const double h = (path.t_end() - t0) / grid;
  const auto& times = path.times();
  const auto& pts = path.points();
  TruncatedTensorSeries s = TruncatedTensorSeries::unit(dim, depth);
  // F_k(i) = sum over i_1 < ... < i_k <= i of the tensor product of cell
  // contributions v(u_j) h; updating levels downward keeps F_{k-1} at i-1.
  std::size_t seg = 0;
  std::vector<double> step(static_cast<std::size_t>(dim));
  for (int i = 0; i < grid; ++i) {
    const double u = t0 + i * h;
    while (seg + 2 < times.size() && times[seg + 1] <= u) ++seg;
    const double dt = times[seg + 1] - times[seg];
    for (int a = 0; a < dim; ++a) {
      const std::size_t ai = static_cast<std::size_t>(a);
      step[ai] = (pts[seg + 1][ai] - pts[seg][ai]) / dt * h;
    }
    for (int k = depth; k >= 1; --k) {
      const auto& prev = s.level(k - 1);
      auto& cur = s.level(k);
      for (std::size_t w = 0; w < prev.size(); ++w) {
        for (int a = 0; a < dim; ++a) {
          const std::size_t ai = static_cast<std::size_t>(a);
          cur[w * static_cast<std::size_t>(dim) + ai] += prev[w] * step[ai];
        }
      }
    }
  }
  return GroupElement(std::move(s));
}

PiecewiseLinearPath reversed(const PiecewiseLinearPath& path) {
  const auto& times = path.times();
  std::vector<std::vector<double>> pts(path.points().rbegin(),
                                       path.points().rend());
  const double lo = times.front(), hi = times.back();
  std::vector<double> rt(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    rt[i] = lo + (hi - times[times.size() - 1 - i]);
  }
  return PiecewiseLinearPath(std::move(rt), std::move(pts));
}

SampledRoughPath::SampledRoughPath(std::vector<double> times,
                                   std::vector<tensor::GroupElement> elements)
    : times_(std::move(times)), elements_(std::move(elements)) {
  if (times_.empty() || times_.size() != elements_.size()) {
    throw std::invalid_argument("sampled path needs matching nonempty samples");
  }
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i - 1] < times_[i])) {
      throw std::invalid_argument("times must be strictly increasing");
    }
    if (!elements_[i].series().same_shape(elements_[0].series())) {
      throw std::invalid_argument("inconsistent element shapes");
    }
  }
}

int SampledRoughPath::dim() const { return elements_[0].dim(); }
int SampledRoughPath::depth() const { return elements_[0].depth(); }

GroupElement SampledRoughPath::at(double t) const {
  if (t < t_begin() || t > t_end()) {
    throw std::invalid_argument("time outside sampled range");
  }
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  if (hi < times_.size() && times_[hi] == t) return elements_[hi];
  const std::size_t lo = hi - 1;
  const double theta = (t - times_[lo]) / (times_[hi] - times_[lo]);
  TruncatedTensorSeries dir =
      tensor::log(inverse(elements_[lo]) * elements_[hi]);
  dir.scale(theta);
  return elements_[lo] * tensor::exp(dir);
}

GroupElement SampledRoughPath::increment(double s, double t) const {
  if (s > t) throw std::invalid_argument("increment needs s <= t");
  return inverse(at(s)) * at(t);
}

SampledRoughPath lift_path(const PiecewiseLinearPath& path, int depth) {
  const auto& pts = path.points();
  std::vector<GroupElement> elems;
  elems.reserve(pts.size());
  const std::vector<double> origin(static_cast<std::size_t>(path.dim()), 0.0);
  elems.push_back(segment_signature(origin, pts[0], depth));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    elems.push_back(elems.back() * segment_signature(pts[i - 1], pts[i], depth));
  }
  return SampledRoughPath(path.times(), std::move(elems));
}

}  // namespace roughalg::paths
