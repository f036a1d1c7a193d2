#include "roughalg/sewing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace roughalg::sewing {

namespace {

// Queries refine until successive dyadic levels are closer than
// tol / kSewMargin, so products of queried values stay within tol of each
// other. The same fraction absorbs rounding in the admission test.
constexpr double kSewMargin = 8.0;

// Above this many memoized evaluations new ones are computed but not stored.
constexpr std::size_t kMuCacheCap = std::size_t{1} << 16;

constexpr int kAdmissionGrid = 8;

}  // namespace

double flat_distance(const tensor::GroupElement& a,
                     const tensor::GroupElement& b) {
  tensor::TruncatedTensorSeries diff = a.series();
  diff -= b.series();
  return tensor::l1_norm(diff);
}

StrongControl::StrongControl(double constant, double exponent)
    : constant_(constant), exponent_(exponent) {
  if (!(std::isfinite(constant) && constant > 0.0))
    throw std::invalid_argument("StrongControl: constant must be positive");
  if (!(std::isfinite(exponent) && exponent > 1.0))
    throw std::invalid_argument("StrongControl: exponent must exceed 1");
  const double two_alpha = std::pow(2.0, exponent_);
  // Any theta in (2, 2^alpha) keeps the dominating series finite; the value
  // only scales the reported constant. Fall back to the midpoint when the
  // preferred choice would not clear 2.
  theta_ = std::min(0.9 * two_alpha, 4.0);
  if (theta_ <= 2.0) theta_ = 0.5 * (2.0 + two_alpha);
}

double StrongControl::operator()(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("StrongControl: negative time");
  return constant_ * std::pow(t, exponent_);
}

double StrongControl::dominating(double t) const {
  return (*this)(t) / (1.0 - theta_ * std::pow(2.0, -exponent_));
}

tensor::GroupElement riemann_product(const Evaluator& mu,
                                     const std::vector<double>& partition) {
  if (partition.size() < 2)
    throw std::invalid_argument("riemann_product: need at least two times");
  for (std::size_t i = 0; i + 1 < partition.size(); ++i)
    if (!(partition[i] < partition[i + 1]))
      throw std::invalid_argument("riemann_product: unsorted partition");
  tensor::GroupElement acc = mu(partition[0], partition[1]);
  for (std::size_t i = 1; i + 1 < partition.size(); ++i)
    acc = acc * mu(partition[i], partition[i + 1]);
  return acc;
}

struct SewnFunctional::State {
  State(AlmostMultiplicativeFunctional func, double lo_, double hi_,
        double tol_, int max_level_)
      : f(std::move(func)), lo(lo_), hi(hi_), tol(tol_),
        max_level(max_level_) {}

  AlmostMultiplicativeFunctional f;
  double lo;
  double hi;
  double tol;
  int max_level;
  int dim = 0;
  int depth = 0;

  mutable std::mutex lock;
  mutable std::map<std::pair<double, double>, tensor::GroupElement> memo;
  mutable SewingReport report;

  tensor::GroupElement eval(double a, double b) const {
    const std::pair<double, double> key{a, b};
    {
      std::lock_guard<std::mutex> guard(lock);
      const auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    tensor::GroupElement value = f.mu(a, b);
    {
      std::lock_guard<std::mutex> guard(lock);
      if (memo.size() < kMuCacheCap) memo.emplace(key, value);
    }
    return value;
  }

  // Product of mu over the 2^m equal pieces of [s, t].
  tensor::GroupElement level_product(double s, double t, int m) const {
    const std::uint64_t n = std::uint64_t{1} << m;
    const double h = (t - s) / static_cast<double>(n);
    double b = (n == 1) ? t : s + h;
    tensor::GroupElement acc = eval(s, b);
    for (std::uint64_t j = 1; j < n; ++j) {
      const double a = b;
      b = (j + 1 == n) ? t : s + static_cast<double>(j + 1) * h;
      acc = acc * eval(a, b);
    }
    return acc;
  }

  tensor::GroupElement refine(double s, double t) const {
    tensor::GroupElement prev = eval(s, t);
    const double stop = tol / kSewMargin;
    double gap = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= max_level; ++m) {
      tensor::GroupElement cur = level_product(s, t, m);
      gap = flat_distance(prev, cur);
      if (gap < stop) {
        const double ratio =
            flat_distance(eval(s, t), cur) / f.control.dominating(t - s);
        std::lock_guard<std::mutex> guard(lock);
        report.levels_used = std::max(report.levels_used, m);
        report.final_defect = gap;
        report.estimated_constant =
            std::max(report.estimated_constant, ratio);
        return cur;
      }
      prev = std::move(cur);
    }
    {
      std::lock_guard<std::mutex> guard(lock);
      report.levels_used = std::max(report.levels_used, max_level);
      report.final_defect = gap;
    }
    std::ostringstream msg;
    msg << "sew: no convergence on [" << s << ", " << t << "] within "
        << max_level << " levels; last defect " << gap;
    throw std::runtime_error(msg.str());
  }
};

SewnFunctional::SewnFunctional(std::shared_ptr<State> state)
    : state_(std::move(state)) {}

tensor::GroupElement SewnFunctional::operator()(double s, double t) const {
  const State& st = *state_;
  if (!(st.lo <= s && s <= t && t <= st.hi))
    throw std::invalid_argument(
        "SewnFunctional: query outside the sewn interval");
  if (s == t) return tensor::GroupElement::one(st.dim, st.depth);
  return st.refine(s, t);
}

SewingReport SewnFunctional::report() const {
  std::lock_guard<std::mutex> guard(state_->lock);
  return state_->report;
}

SewnFunctional sew(AlmostMultiplicativeFunctional f, double lo, double hi,
                   double tol, int max_level) {
  if (!f.mu) throw std::invalid_argument("sew: empty evaluator");
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw std::invalid_argument("sew: need lo < hi");
  if (!(std::isfinite(tol) && tol > 0.0))
    throw std::invalid_argument("sew: tolerance must be positive");
  if (max_level < 1)
    throw std::invalid_argument("sew: max_level must be at least 1");

  std::shared_ptr<SewnFunctional::State> state(
      new SewnFunctional::State(std::move(f), lo, hi, tol, max_level));
  const tensor::GroupElement whole = state->eval(lo, hi);
  state->dim = whole.dim();
  state->depth = whole.depth();

  // Admission test: identity on the diagonal and the declared defect bound
  // on every ordered triple of a uniform grid.
  std::vector<double> grid(kAdmissionGrid + 1);
  for (int i = 0; i <= kAdmissionGrid; ++i)
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / kAdmissionGrid;
  grid.back() = hi;
  const double fuzz = tol / kSewMargin;
  const auto one = tensor::GroupElement::one(state->dim, state->depth);
  for (const double u : grid)
    if (flat_distance(state->eval(u, u), one) > fuzz)
      throw std::runtime_error("sew: mu is not the identity on the diagonal");
  for (int i = 0; i <= kAdmissionGrid; ++i)
    for (int j = i + 1; j <= kAdmissionGrid; ++j)
      for (int k = j + 1; k <= kAdmissionGrid; ++k) {
        const double a = grid[static_cast<std::size_t>(i)];
        const double m = grid[static_cast<std::size_t>(j)];
        const double b = grid[static_cast<std::size_t>(k)];
        const double defect =
            flat_distance(state->eval(a, b), state->eval(a, m) * state->eval(m, b));
        const double bound = state->f.control(b - a) + fuzz;
        if (defect > bound) {
          std::ostringstream msg;
          msg << "sew: admission test failed at (" << a << ", " << m << ", "
              << b << "): defect " << defect << " exceeds " << bound;
          throw std::runtime_error(msg.str());
        }
      }
  return SewnFunctional(std::move(state));
}

tensor::GroupElement integrate_time_varying(
    const std::function<tensor::GroupElement(double,
                                             const tensor::GroupElement&)>& f,
    const paths::SampledRoughPath& X, double lo, double hi,
    const StrongControl& control, double tol, int max_level,
    SewingReport* report) {
  if (!f)
    throw std::invalid_argument("integrate_time_varying: empty integrand");
  Evaluator mu = [&f, &X](double s, double t) {
    const tensor::GroupElement left = f(s, X.at(s));
    const tensor::GroupElement right = f(s, X.at(t));
    return tensor::inverse(left) * right;
  };
  const auto u =
      sew(AlmostMultiplicativeFunctional{std::move(mu), control}, lo, hi, tol,
          max_level);
  tensor::GroupElement out = u(lo, hi);
  if (report) *report = u.report();
  return out;
}

}  // namespace roughalg::sewing
