#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "roughalg/one_forms.hpp"
#include "roughalg/paths.hpp"
#include "roughalg/sewing.hpp"
#include "roughalg/tensor_series.hpp"

using namespace roughalg::sewing;
using roughalg::oneforms::F_p;
using roughalg::oneforms::PolynomialOneForm;
using roughalg::paths::lift_path;
using roughalg::paths::PiecewiseLinearPath;
using roughalg::paths::SampledRoughPath;
using roughalg::paths::signature;
using roughalg::tensor::GroupElement;
using roughalg::tensor::inverse;
using roughalg::tensor::l1_norm;
using roughalg::tensor::max_abs_diff;
using roughalg::tensor::TruncatedTensorSeries;
using testoracles::integral_path;
using testoracles::random_one_form;

namespace {

GroupElement scalar_group(double level1) {
  TruncatedTensorSeries s(1, 1);
  s.level(0)[0] = 1.0;
  s.level(1)[0] = level1;
  return GroupElement(std::move(s));
}

// Exactly multiplicative over dyadic times: level-1 increments are dyadic
// rationals, so their sums round nowhere.
Evaluator linear_increment_mu() {
  return [](double s, double t) { return scalar_group(t - s); };
}

// Left-point Riemann kernel for the Young integral of t against t^2. Its
// defect over (s, u, t) is (u - s)(t^2 - u^2), bounded by 2 (t - s)^2 on
// [0, 1].
Evaluator young_mu() {
  return [](double s, double t) { return scalar_group(s * (t * t - s * s)); };
}

std::vector<double> uniform_partition(double lo, double hi, int pieces) {
  std::vector<double> ts;
  for (int i = 0; i <= pieces; ++i)
    ts.push_back(lo + (hi - lo) * i / pieces);
  ts.back() = hi;
  return ts;
}

PiecewiseLinearPath random_path(int dim, int segments, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.2, 1.0);
  std::vector<double> times{0.0};
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= segments; ++i) {
    if (i > 0) times.push_back(times.back() + gap(rng));
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& x : p) x = coord(rng);
    pts.push_back(std::move(p));
  }
  return PiecewiseLinearPath(std::move(times), std::move(pts));
}

}  // namespace

TEST_SUITE_BEGIN("sewing");

TEST_CASE("strong control") {
  StrongControl v(2.0, 2.0);
  CHECK(v(0.0) == 0.0);
  CHECK(v(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v(0.3) < v(0.4));

  // theta = min(0.9 * 2^alpha, 4) when that clears 2, else the midpoint of
  // (2, 2^alpha); always strictly inside the admissible interval.
  CHECK(v.theta() == doctest::Approx(3.6).epsilon(1e-15));
  StrongControl steep(1.0, 3.0);
  CHECK(steep.theta() == doctest::Approx(4.0).epsilon(1e-15));
  StrongControl shallow(1.0, 1.1);
  CHECK(shallow.theta() > 2.0);
  CHECK(shallow.theta() < std::pow(2.0, 1.1));

  // Vbar sums the geometric series exactly.
  for (const auto& c : {v, steep, shallow}) {
    const double scale =
        1.0 / (1.0 - c.theta() * std::pow(2.0, -c.exponent()));
    CHECK(c.dominating(0.7) ==
          doctest::Approx(scale * c(0.7)).epsilon(1e-14));
    CHECK(scale > 1.0);
    CHECK(std::isfinite(scale));
  }

  CHECK_THROWS_AS(StrongControl(0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(StrongControl(-1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(StrongControl(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(StrongControl(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(StrongControl(std::nan(""), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(v(-0.1), std::invalid_argument);
}

TEST_CASE("riemann products") {
  const auto mu = young_mu();

  SUBCASE("single interval is the bare evaluation") {
    const auto prod = riemann_product(mu, {0.25, 1.0});
    CHECK(max_abs_diff(prod.series(), mu(0.25, 1.0).series()) == 0.0);
  }

  SUBCASE("partition independence for an exactly multiplicative mu") {
    const auto lin = linear_increment_mu();
    const auto whole = riemann_product(lin, {0.0, 1.0});
    const auto halves = riemann_product(lin, {0.0, 0.5, 1.0});
    const auto quarters = riemann_product(lin, {0.0, 0.25, 0.5, 0.75, 1.0});
    const auto uneven = riemann_product(lin, {0.0, 0.125, 0.5, 1.0});
    CHECK(max_abs_diff(whole.series(), halves.series()) == 0.0);
    CHECK(max_abs_diff(whole.series(), quarters.series()) == 0.0);
    CHECK(max_abs_diff(whole.series(), uneven.series()) == 0.0);
    CHECK(whole.series().level(1)[0] == 1.0);
  }

  SUBCASE("bad partitions") {
    CHECK_THROWS_AS(riemann_product(mu, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(riemann_product(mu, {}), std::invalid_argument);
    CHECK_THROWS_AS(riemann_product(mu, {0.0, 0.5, 0.25, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(riemann_product(mu, {0.0, 0.5, 0.5, 1.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("dyadic refinements are Cauchy at the controlled rate") {
  const auto mu = young_mu();

  // Gap between successive dyadic products; the defect exponent alpha = 2
  // makes consecutive gaps shrink by about 2^(1-alpha) = 1/2.
  std::vector<double> gaps;
  auto prev = riemann_product(mu, uniform_partition(0.0, 1.0, 2));
  for (int m = 2; m <= 9; ++m) {
    auto cur = riemann_product(mu, uniform_partition(0.0, 1.0, 1 << m));
    gaps.push_back(flat_distance(prev, cur));
    prev = std::move(cur);
  }
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
    CHECK(gaps[i + 1] < gaps[i]);
    CHECK(gaps[i + 1] / gaps[i] <= 0.5 * 1.2);
  }

  // Least-squares slope of log2(gap) against the level, within 20% of
  // -(alpha - 1) = -1.
  const auto n = static_cast<double>(gaps.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double x = static_cast<double>(i);
    const double y = std::log2(gaps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope < -0.8);
  CHECK(slope > -1.2);
}

TEST_CASE("sewing an already multiplicative mu returns it unchanged") {
  AlmostMultiplicativeFunctional f{linear_increment_mu(),
                                   StrongControl(1.0, 2.0)};
  const auto u = sew(f, 0.0, 1.0, 1e-9, 20);

  for (const auto& [s, t] : std::vector<std::pair<double, double>>{
           {0.0, 1.0}, {0.25, 0.75}, {0.5, 1.0}}) {
    const auto got = u(s, t);
    CHECK(max_abs_diff(got.series(), f.mu(s, t).series()) == 0.0);
  }
  const auto rep = u.report();
  CHECK(rep.levels_used == 1);
  CHECK(rep.final_defect == 0.0);
  CHECK(rep.estimated_constant == 0.0);

  // Degenerate query: the identity, no refinement at all.
  const auto diag = u(0.5, 0.5);
  CHECK(max_abs_diff(diag.series(), GroupElement::one(1, 1).series()) == 0.0);
}

TEST_CASE("sewing reproduces the Young integral of t against t squared") {
  AlmostMultiplicativeFunctional f{young_mu(), StrongControl(2.0, 2.0)};
  const double tol = 2e-6;
  const auto u = sew(f, 0.0, 1.0, tol, 24);

  const auto full = u(0.0, 1.0);
  CHECK(std::abs(full.series().level(1)[0] - 2.0 / 3.0) <= 1e-6);

  const auto rep = u.report();
  CHECK(rep.levels_used >= 8);
  CHECK(rep.final_defect < tol);
  CHECK(rep.final_defect > 0.0);
  // d(mu(0,1), u(0,1)) = 2/3 while Vbar(1) = 20: the estimated constant is
  // small and certainly at most 1.
  CHECK(rep.estimated_constant > 0.0);
  CHECK(rep.estimated_constant <= 1.0);
}

TEST_CASE("sewn functional is multiplicative on queried triples") {
  AlmostMultiplicativeFunctional f{young_mu(), StrongControl(2.0, 2.0)};
  const double tol = 1e-4;
  const auto u = sew(f, 0.0, 1.0, tol, 24);

  const double triples[][3] = {{0.0, 0.5, 1.0},
                               {0.0, 0.25, 0.5},
                               {0.5, 0.75, 1.0},
                               {0.25, 0.5, 0.75}};
  for (const auto& tr : triples) {
    const auto joint = u(tr[0], tr[2]);
    const auto split = u(tr[0], tr[1]) * u(tr[1], tr[2]);
    CHECK(flat_distance(joint, split) <= tol);
  }
}

TEST_CASE("two refinement strategies agree at tolerance") {
  const auto mu = young_mu();
  AlmostMultiplicativeFunctional f{mu, StrongControl(2.0, 2.0)};
  const double tol = 1e-5;
  const auto dyadic = sew(f, 0.0, 1.0, tol, 24)(0.0, 1.0);

  // Uniform refinement on a tripling point count, a family that never
  // shares cut points with the dyadic one past the first level.
  auto prev = riemann_product(mu, uniform_partition(0.0, 1.0, 1));
  GroupElement uniform = prev;
  for (int k = 1; k <= 16; ++k) {
    int pieces = 1;
    for (int i = 0; i < k; ++i) pieces *= 3;
    auto cur = riemann_product(mu, uniform_partition(0.0, 1.0, pieces));
    const double gap = flat_distance(prev, cur);
    uniform = cur;
    prev = std::move(cur);
    if (gap < tol) break;
  }
  CHECK(flat_distance(dyadic, uniform) <= 2.0 * tol);
}

TEST_CASE("admission and convergence failures") {
  // Holder-0.4 increments cannot satisfy a (t-s)^2 defect bound.
  Evaluator rough = [](double s, double t) {
    return scalar_group(std::pow(t - s, 0.4));
  };
  AlmostMultiplicativeFunctional bad{rough, StrongControl(1.0, 2.0)};
  CHECK_THROWS_AS(sew(bad, 0.0, 1.0, 1e-6, 20), std::runtime_error);

  // Honest mu, but a tolerance the level cap cannot reach.
  AlmostMultiplicativeFunctional f{young_mu(), StrongControl(2.0, 2.0)};
  const auto u = sew(f, 0.0, 1.0, 1e-15, 3);
  CHECK_THROWS_AS(u(0.0, 1.0), std::runtime_error);

  // Queries outside the sewn interval or reversed.
  const auto ok = sew(f, 0.0, 1.0, 1e-3, 24);
  CHECK_THROWS_AS(ok(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ok(0.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(ok(0.7, 0.3), std::invalid_argument);

  CHECK_THROWS_AS(sew(f, 1.0, 1.0, 1e-3, 24), std::invalid_argument);
  CHECK_THROWS_AS(sew(f, 0.0, 1.0, 0.0, 24), std::invalid_argument);
  CHECK_THROWS_AS(sew(f, 0.0, 1.0, 1e-3, 0), std::invalid_argument);
}

TEST_CASE("translation is Lipschitz in the flat distance") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = testhelpers::random_group_like(2, 4, rng);
    const auto y = testhelpers::random_group_like(2, 4, rng);
    const auto z = testhelpers::random_group_like(2, 4, rng);
    const double base = flat_distance(x, y);
    const double factor = l1_norm(z.series());
    CHECK(flat_distance(x * z, y * z) <= factor * base * (1.0 + 1e-12));
    CHECK(flat_distance(z * x, z * y) <= factor * base * (1.0 + 1e-12));
  }
}

TEST_CASE("one form increments sew to the signature of the integral path") {
  std::mt19937_64 rng(77);
  const int d = 2, e = 2, degree = 1, out_depth = 2;
  const auto path = random_path(d, 4, rng);
  const auto p = random_one_form(d, e, degree, rng, 0.5);
  const auto X = lift_path(path, out_depth * (degree + 1));

  Evaluator mu = [&](double s, double t) {
    return roughalg::oneforms::almost_multiplicative_Y(p, X, s, t, out_depth);
  };
  // The increments telescope, so any valid control admits them.
  AlmostMultiplicativeFunctional f{mu, StrongControl(1.0, 1.5)};
  const auto u = sew(f, path.t_begin(), path.t_end(), 1e-9, 12);
  const auto sewn = u(path.t_begin(), path.t_end());

  const auto z = integral_path(path, p, 6000);
  const auto oracle = signature(z, out_depth);
  CHECK(max_abs_diff(sewn.series(), oracle.series()) <= 1e-6);
  CHECK(u.report().levels_used == 1);
}

TEST_CASE("time varying integration") {
  std::mt19937_64 rng(91);
  const int d = 2, e = 2, degree = 1, out_depth = 2;
  const auto path = random_path(d, 3, rng);
  const auto p = random_one_form(d, e, degree, rng, 0.5);
  const auto X = lift_path(path, out_depth * (degree + 1));
  const double lo = path.t_begin(), hi = path.t_end();

  SUBCASE("time constant integrand needs a single evaluation") {
    auto f = [&](double, const GroupElement& g) {
      return F_p(p, g, out_depth);
    };
    SewingReport rep;
    const auto got = integrate_time_varying(f, X, lo, hi,
                                            StrongControl(1.0, 1.5), 1e-9, 20,
                                            &rep);
    const auto want = inverse(F_p(p, X.at(lo), out_depth)) *
                      F_p(p, X.at(hi), out_depth);
    CHECK(max_abs_diff(got.series(), want.series()) <= 1e-12);
    CHECK(rep.levels_used == 1);
  }

  SUBCASE("constant driver integrates to the identity") {
    const auto g0 = testhelpers::random_group_like(d, out_depth * 2, rng);
    const SampledRoughPath constant({0.0, 0.5, 1.0}, {g0, g0, g0});
    auto f = [&](double t, const GroupElement& g) {
      TruncatedTensorSeries l(d, out_depth * 2);
      l.level(1)[0] = t;
      return roughalg::tensor::exp(l) * g;
    };
    const auto got = integrate_time_varying(f, constant, 0.0, 1.0,
                                            StrongControl(1.0, 2.0), 1e-9);
    CHECK(max_abs_diff(got.series(),
                       GroupElement::one(d, out_depth * 2).series()) <=
          1e-13);
  }
}

TEST_SUITE_END();
