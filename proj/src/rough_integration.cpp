#include "roughalg/rough_integration.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace roughalg::roughint {

namespace {

// Grid used to fit the control constant; matches the admission grid inside
// sew so the fitted constant is tested on the pairs it was fitted on plus
// every triple between them.
constexpr int kFitGrid = 8;

}  // namespace

RoughIntegralResult rough_integral(const RoughIntegralProblem& prob) {
  if (!(std::isfinite(prob.p) && prob.p >= 1.0)) {
    throw std::invalid_argument("rough_integral: p must be at least 1");
  }
  const int cap = static_cast<int>(std::floor(prob.p));
  if (!(std::isfinite(prob.lip.gamma) && prob.lip.gamma > prob.p)) {
    throw std::invalid_argument("rough_integral: need gamma > p");
  }
  if (prob.lip.stack.size() < static_cast<std::size_t>(cap) + 1) {
    throw std::invalid_argument(
        "rough_integral: lip stack provides fewer derivatives than p needs");
  }
  if (prob.out_depth < 1) {
    throw std::invalid_argument("rough_integral: output depth must be >= 1");
  }
  const int need = prob.out_depth * (cap + 1);
  if (prob.X.depth() < need) {
    std::ostringstream msg;
    msg << "rough_integral: path depth " << prob.X.depth()
        << " cannot support output depth " << prob.out_depth << " at p = "
        << prob.p << " (needs " << need << ")";
    throw std::invalid_argument(msg.str());
  }
  if (prob.lip.dim_in != prob.X.dim()) {
    throw std::invalid_argument(
        "rough_integral: form and path dimensions differ");
  }
  if (!(prob.X.t_begin() <= prob.lo && prob.lo < prob.hi &&
        prob.hi <= prob.X.t_end())) {
    throw std::invalid_argument("rough_integral: bad interval");
  }

  // Increment of the lifted integral: the local model is re-fitted at every
  // left endpoint, so consecutive increments fail to telescope only by the
  // Taylor remainder of the data.
  const sewing::Evaluator mu = [&prob, cap](double s, double t) {
    const tensor::GroupElement xs = prob.X.at(s);
    const auto q =
        oneforms::local_taylor_form(prob.lip, xs.series().level(1), cap);
    return tensor::inverse(oneforms::F_p(q, xs, prob.out_depth)) *
           oneforms::F_p(q, prob.X.at(t), prob.out_depth);
  };

  // Defect exponent from the hypotheses; no usable a priori constant comes
  // with them, so fit one on the admission grid with a safety factor. The
  // fitted control is descriptive: correctness rests on the refinement
  // actually converging, which sew checks.
  const double alpha =
      std::min(static_cast<double>(cap + 1), prob.lip.gamma) / prob.p;
  std::vector<double> grid(kFitGrid + 1);
  for (int i = 0; i <= kFitGrid; ++i) {
    grid[static_cast<std::size_t>(i)] =
        prob.lo + (prob.hi - prob.lo) * i / kFitGrid;
  }
  grid.back() = prob.hi;
  std::map<std::pair<int, int>, tensor::GroupElement> vals;
  for (int i = 0; i <= kFitGrid; ++i) {
    for (int j = i + 1; j <= kFitGrid; ++j) {
      vals.emplace(std::make_pair(i, j),
                   mu(grid[static_cast<std::size_t>(i)],
                      grid[static_cast<std::size_t>(j)]));
    }
  }
  double fitted = 0.0;
  for (int i = 0; i <= kFitGrid; ++i) {
    for (int j = i + 1; j <= kFitGrid; ++j) {
      for (int k = j + 1; k <= kFitGrid; ++k) {
        const double defect = sewing::flat_distance(
            vals.at({i, k}), vals.at({i, j}) * vals.at({j, k}));
        const double span = grid[static_cast<std::size_t>(k)] -
                            grid[static_cast<std::size_t>(i)];
        fitted = std::max(fitted, defect / std::pow(span, alpha));
      }
    }
  }
  const sewing::StrongControl control(std::max(2.0 * fitted, 1e-12), alpha);

  const auto u = sewing::sew({mu, control}, prob.lo, prob.hi, prob.tol,
                             prob.max_level);
  RoughIntegralResult out{u(prob.lo, prob.hi), {}, u.report()};
  out.level1 = out.value.series().level(1);
  return out;
}

double young_integral(const std::vector<double>& times,
                      const std::vector<double>& x,
                      const std::vector<double>& y, double p, double q,
                      double tol, YoungReport* report) {
  const std::size_t n = times.size();
  if (n < 2 || x.size() != n || y.size() != n) {
    throw std::invalid_argument(
        "young_integral: need at least two matching samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(x[i]) ||
        !std::isfinite(y[i])) {
      throw std::invalid_argument("young_integral: non-finite sample");
    }
    if (i + 1 < n && !(times[i] < times[i + 1])) {
      throw std::invalid_argument("young_integral: times must increase");
    }
  }
  if (!(std::isfinite(p) && p >= 1.0 && std::isfinite(q) && q >= 1.0)) {
    throw std::invalid_argument(
        "young_integral: variation exponents must be at least 1");
  }
  if (!(std::isfinite(tol) && tol > 0.0)) {
    throw std::invalid_argument("young_integral: tolerance must be positive");
  }

  YoungReport rep;
  rep.exponents_compatible = (1.0 / p + 1.0 / q > 1.0);

  const std::size_t cells = n - 1;
  const auto left_sum = [&](std::size_t pieces) {
    double acc = 0.0;
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= pieces; ++k) {
      const std::size_t idx = (k * cells) / pieces;
      acc += x[prev] * (y[idx] - y[prev]);
      prev = idx;
    }
    return acc;
  };

  double value = left_sum(1);
  rep.raw_sums.push_back(value);
  if (cells == 1) {
    // The grid admits no refinement; the single left sum is the limit over
    // its subgrids by definition.
    rep.converged = true;
    if (report != nullptr) *report = rep;
    return value;
  }

  // Halving the mesh along index-dyadic subgrids and pairing consecutive
  // sums cancels the first-order term of the left-point rule.
  for (std::size_t pieces = 2; pieces <= cells; pieces *= 2) {
    const double s = left_sum(pieces);
    const double accel = 2.0 * s - rep.raw_sums.back();
    rep.raw_sums.push_back(s);
    if (!rep.accelerated.empty()) {
      rep.final_gap = std::abs(accel - rep.accelerated.back());
    }
    rep.accelerated.push_back(accel);
    value = accel;
    if (rep.accelerated.size() >= 2 && rep.final_gap < tol) {
      rep.converged = true;
      break;
    }
  }
  if (report != nullptr) *report = rep;
  return value;
}

GeometricReport verify_geometric(const paths::SampledRoughPath& X, double p,
                                 double tol) {
  if (!(std::isfinite(p) && p >= 1.0)) {
    throw std::invalid_argument("verify_geometric: p must be at least 1");
  }
  if (!(std::isfinite(tol) && tol > 0.0)) {
    throw std::invalid_argument("verify_geometric: tolerance must be positive");
  }

  GeometricReport rep;
  const auto& els = X.elements();
  const auto& ts = X.times();
  const std::size_t n = els.size();

  for (std::size_t i = 0; i < n; ++i) {
    const double defect = tensor::group_like_defect(els[i].series());
    rep.max_group_defect = std::max(rep.max_group_defect, defect);
    if (defect > tol) {
      std::ostringstream msg;
      msg << "point at t = " << ts[i] << " has shuffle defect " << defect;
      rep.violations.push_back(msg.str());
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto inc = tensor::inverse(els[i]) * els[i + 1];
    const double defect = tensor::group_like_defect(inc.series());
    rep.max_group_defect = std::max(rep.max_group_defect, defect);
    if (defect > tol) {
      std::ostringstream msg;
      msg << "increment over [" << ts[i] << ", " << ts[i + 1]
          << "] has shuffle defect " << defect;
      rep.violations.push_back(msg.str());
    }
  }

  if (n >= 2) {
    rep.p_variation = tensor::p_variation(els, p);

    // Superadditivity of the induced control on a bounded sample of triples.
    const auto control = tensor::Control::p_variation_of(ts, els, p);
    std::vector<std::size_t> picks;
    const std::size_t want = std::min<std::size_t>(n, 10);
    for (std::size_t k = 0; k < want; ++k) {
      const std::size_t idx = k * (n - 1) / (want - 1);
      if (picks.empty() || picks.back() != idx) picks.push_back(idx);
    }
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < picks.size(); ++a) {
      for (std::size_t b = a + 1; b < picks.size(); ++b) {
        for (std::size_t c = b + 1; c < picks.size(); ++c) {
          const double s = ts[picks[a]], u = ts[picks[b]], t = ts[picks[c]];
          const double whole = control(s, t);
          const double gap = whole - control(s, u) - control(u, t);
          min_gap = std::min(min_gap, gap);
          if (gap < -1e-9 * (1.0 + std::abs(whole))) {
            std::ostringstream msg;
            msg << "control fails superadditivity on (" << s << ", " << u
                << ", " << t << "): gap " << gap;
            rep.violations.push_back(msg.str());
          }
        }
      }
    }
    if (std::isfinite(min_gap)) rep.min_superadditivity_gap = min_gap;
  }

  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace roughalg::roughint
