#include "roughalg/tensor_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>
#include <utility>

#include "roughalg/words.hpp"

namespace roughalg::tensor {

namespace {

void require_same_shape(const TruncatedTensorSeries& a,
                        const TruncatedTensorSeries& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("tensor series shape mismatch");
  }
}

// dst += c * src
void add_scaled(TruncatedTensorSeries& dst, const TruncatedTensorSeries& src,
                double c) {
  for (int k = 0; k <= dst.depth(); ++k) {
    auto& d = dst.level(k);
    const auto& s = src.level(k);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += c * s[i];
  }
}

std::size_t word_index(const words::Word& w, int dim) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    idx = idx * static_cast<std::size_t>(dim) + static_cast<std::size_t>(w[i]);
  }
  return idx;
}

}  // namespace

TruncatedTensorSeries::TruncatedTensorSeries(int dim, int depth)
    : dim_(dim), depth_(depth) {
  if (dim < 1) throw std::invalid_argument("tensor series needs dim >= 1");
  if (depth < 0) throw std::invalid_argument("tensor series needs depth >= 0");
  sizes_.resize(static_cast<std::size_t>(depth) + 1);
  levels_.resize(static_cast<std::size_t>(depth) + 1);
  std::size_t sz = 1;
  for (int k = 0; k <= depth; ++k) {
    sizes_[static_cast<std::size_t>(k)] = sz;
    levels_[static_cast<std::size_t>(k)].assign(sz, 0.0);
    sz *= static_cast<std::size_t>(dim);
  }
}

TruncatedTensorSeries TruncatedTensorSeries::unit(int dim, int depth) {
  TruncatedTensorSeries s(dim, depth);
  s.level(0)[0] = 1.0;
  return s;
}

TruncatedTensorSeries& TruncatedTensorSeries::operator+=(
    const TruncatedTensorSeries& o) {
  require_same_shape(*this, o);
  add_scaled(*this, o, 1.0);
  return *this;
}

TruncatedTensorSeries& TruncatedTensorSeries::operator-=(
    const TruncatedTensorSeries& o) {
  require_same_shape(*this, o);
  add_scaled(*this, o, -1.0);
  return *this;
}

void TruncatedTensorSeries::scale(double c) {
  for (auto& lvl : levels_) {
    for (auto& x : lvl) x *= c;
  }
}

double max_abs_diff(const TruncatedTensorSeries& a,
                    const TruncatedTensorSeries& b) {
  require_same_shape(a, b);
  double best = 0.0;
  for (int k = 0; k <= a.depth(); ++k) {
    const auto& la = a.level(k);
    const auto& lb = b.level(k);
    for (std::size_t i = 0; i < la.size(); ++i) {
      best = std::max(best, std::abs(la[i] - lb[i]));
    }
  }
  return best;
}

double l1_norm(const TruncatedTensorSeries& a) {
  double total = 0.0;
  for (int k = 0; k <= a.depth(); ++k) {
    for (double x : a.level(k)) total += std::abs(x);
  }
  return total;
}

TruncatedTensorSeries conc_mul(const TruncatedTensorSeries& a,
                               const TruncatedTensorSeries& b) {
  require_same_shape(a, b);
  const int depth = a.depth();
  TruncatedTensorSeries out(a.dim(), depth);
  // out[n][idx] = sum_i a[i][idx div d^(n-i)] * b[n-i][idx mod d^(n-i)],
  // summed in increasing i for a fixed, thread-independent order.
  for (int n = 0; n <= depth; ++n) {
    auto& dst = out.level(n);
    for (std::size_t idx = 0; idx < dst.size(); ++idx) {
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const std::size_t right_size = b.level_size(n - i);
        acc += a.level(i)[idx / right_size] * b.level(n - i)[idx % right_size];
      }
      dst[idx] = acc;
    }
  }
  return out;
}

GroupElement::GroupElement(TruncatedTensorSeries s) : series_(std::move(s)) {
  if (series_.level(0)[0] != 1.0) {
    throw std::invalid_argument("group element needs level-0 coefficient 1");
  }
}

GroupElement GroupElement::one(int dim, int depth) {
  return GroupElement(TruncatedTensorSeries::unit(dim, depth));
}

GroupElement inverse(const GroupElement& a) {
  TruncatedTensorSeries x = a.series();
  x.level(0)[0] = 0.0;
  TruncatedTensorSeries out =
      TruncatedTensorSeries::unit(x.dim(), x.depth());
  TruncatedTensorSeries pow = x;
  for (int k = 1; k <= x.depth(); ++k) {
    if (k > 1) pow = conc_mul(pow, x);
    add_scaled(out, pow, (k % 2 == 0) ? 1.0 : -1.0);
  }
  return GroupElement(std::move(out));
}

GroupElement exp(const TruncatedTensorSeries& l) {
  if (l.level(0)[0] != 0.0) {
    throw std::invalid_argument("exp needs zero level-0 coefficient");
  }
  TruncatedTensorSeries out =
      TruncatedTensorSeries::unit(l.dim(), l.depth());
  TruncatedTensorSeries term = l;
  for (int k = 1; k <= l.depth(); ++k) {
    if (k > 1) {
      term = conc_mul(term, l);
      term.scale(1.0 / k);
    }
    out += term;
  }
  return GroupElement(std::move(out));
}

TruncatedTensorSeries log(const GroupElement& a) {
  TruncatedTensorSeries x = a.series();
  x.level(0)[0] = 0.0;
  TruncatedTensorSeries out(x.dim(), x.depth());
  TruncatedTensorSeries pow = x;
  for (int k = 1; k <= x.depth(); ++k) {
    if (k > 1) pow = conc_mul(pow, x);
    add_scaled(out, pow, ((k % 2 == 0) ? -1.0 : 1.0) / k);
  }
  return out;
}

double group_like_defect(const TruncatedTensorSeries& a) {
  const int dim = a.dim();
  const int depth = a.depth();
  double worst = 0.0;
  auto decode = [&](int len, std::size_t idx) {
    words::Word w;
    w.letters.resize(static_cast<std::size_t>(len));
    for (int j = len - 1; j >= 0; --j) {
      w.letters[static_cast<std::size_t>(j)] = static_cast<int>(idx % dim);
      idx /= static_cast<std::size_t>(dim);
    }
    return w;
  };
  for (int ju = 0; ju <= depth; ++ju) {
    for (int jv = 0; jv + ju <= depth; ++jv) {
      for (std::size_t iu = 0; iu < a.level_size(ju); ++iu) {
        const words::Word u = decode(ju, iu);
        for (std::size_t iv = 0; iv < a.level_size(jv); ++iv) {
          const words::Word v = decode(jv, iv);
          const words::WordPolynomial sh = words::shuffle(u, v);
          double lhs = 0.0;
          for (const auto& [w, c] : sh.terms()) {
            lhs += c.convert_to<double>() *
                   a.level(static_cast<int>(w.size()))[word_index(w, dim)];
          }
          const double rhs = a.level(ju)[iu] * a.level(jv)[iv];
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

double homogeneous_distance(const GroupElement& a, const GroupElement& b) {
  // Equal inputs short-circuit to 0: the k-th roots below would amplify the
  // rounding residue of inverse(a) * a to ~1e-4 otherwise.
  if (max_abs_diff(a.series(), b.series()) == 0.0) return 0.0;
  const GroupElement g = inverse(a) * b;
  double best = 0.0;
  for (int k = 1; k <= g.depth(); ++k) {
    double norm = 0.0;
    for (double x : g.series().level(k)) norm += std::abs(x);
    best = std::max(best, std::pow(norm, 1.0 / k));
  }
  return best;
}

double p_variation(const std::vector<GroupElement>& points, double p) {
  if (points.size() < 2) {
    throw std::invalid_argument("p_variation needs at least 2 points");
  }
  if (p < 1.0) throw std::invalid_argument("p_variation needs p >= 1");
  const std::size_t m = points.size();
  // best[j]: largest sum of d^p over chains from sample 0 to sample j.
  std::vector<double> best(m, 0.0);
  for (std::size_t j = 1; j < m; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      v = std::max(
          v, best[i] + std::pow(homogeneous_distance(points[i], points[j]), p));
    }
    best[j] = v;
  }
  return std::pow(best[m - 1], 1.0 / p);
}

TruncatedTensorSeries s_hat(const words::PermutationSum& sigma,
                            const GroupElement& s) {
  const int dim = s.dim();
  const int depth = s.depth();
  TruncatedTensorSeries out(dim, depth);
  for (const auto& [perm, coeff] : sigma.terms()) {
    const int n = perm.order();
    if (n > depth) {
      throw std::invalid_argument("permutation order exceeds series depth");
    }
    const double c = coeff.convert_to<double>();
    if (n == 0) {
      out.level(0)[0] += c;
      continue;
    }
    const auto& src = s.series().level(n);
    auto& dst = out.level(n);
    // Pullback: dst[w] += c * src[perm . w] with (perm . w)_i = w_{perm(i)}.
    std::vector<std::size_t> digits(static_cast<std::size_t>(n));
    for (std::size_t idx = 0; idx < dst.size(); ++idx) {
      std::size_t rem = idx;
      for (int j = n - 1; j >= 0; --j) {
        digits[static_cast<std::size_t>(j)] = rem % dim;
        rem /= static_cast<std::size_t>(dim);
      }
      std::size_t target = 0;
      for (int j = 0; j < n; ++j) {
        target = target * static_cast<std::size_t>(dim) +
                 digits[static_cast<std::size_t>(perm(j + 1) - 1)];
      }
      dst[idx] += c * src[target];
    }
  }
  return out;
}

Control::Control(std::function<double(double, double)> eval)
    : eval_(std::move(eval)) {}

double Control::operator()(double s, double t) const {
  if (s > t) throw std::invalid_argument("control needs s <= t");
  return eval_(s, t);
}

Control Control::linear(double c) {
  if (c < 0.0) throw std::invalid_argument("linear control needs c >= 0");
  return Control([c](double s, double t) { return c * (t - s); });
}

Control Control::p_variation_of(std::vector<double> times,
                                std::vector<GroupElement> points, double p) {
  if (times.size() != points.size()) {
    throw std::invalid_argument("times and points size mismatch");
  }
  if (times.size() < 2) {
    throw std::invalid_argument("p-variation control needs at least 2 samples");
  }
  if (p < 1.0) throw std::invalid_argument("p-variation control needs p >= 1");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i - 1] < times[i])) {
      throw std::invalid_argument("times must be strictly increasing");
    }
  }
  // Distances are computed per call, on the samples inside [s, t] only;
  // precomputing all pairs would cost quadratic memory in the sample count.
  auto shared_times = std::make_shared<std::vector<double>>(std::move(times));
  auto shared_points =
      std::make_shared<std::vector<GroupElement>>(std::move(points));
  return Control([shared_points, shared_times, p](double s, double t) {
    const auto& ts = *shared_times;
    const auto& xs = *shared_points;
    auto lo = std::lower_bound(ts.begin(), ts.end(), s);
    auto hi = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t a = static_cast<std::size_t>(lo - ts.begin());
    const std::size_t b = static_cast<std::size_t>(hi - ts.begin());
    if (b - a < 2) return 0.0;
    std::vector<double> best(b - a, 0.0);
    for (std::size_t j = a + 1; j < b; ++j) {
      double v = 0.0;
      for (std::size_t i = a; i < j; ++i) {
        v = std::max(v, best[i - a] +
                            std::pow(homogeneous_distance(xs[i], xs[j]), p));
      }
      best[j - a] = v;
    }
    return best[b - a - 1];
  });
}

Control Control::sum(Control a, Control b) {
  return Control([a = std::move(a), b = std::move(b)](double s, double t) {
    return a(s, t) + b(s, t);
  });
}

}  // namespace roughalg::tensor
