#include "roughalg/verify_suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "roughalg/effects.hpp"
#include "roughalg/permutations.hpp"
#include "roughalg/tensor_series.hpp"
#include "roughalg/words.hpp"

namespace roughalg::verify {
namespace {

using json = nlohmann::ordered_json;
using oneforms::PolynomialOneForm;
using paths::PiecewiseLinearPath;
using paths::SampledRoughPath;
using tensor::Control;
using tensor::GroupElement;
using tensor::TruncatedTensorSeries;
using words::Permutation;
using words::PermutationSum;
using words::Word;
using words::WordPolynomial;

CheckResult check(std::string name, int cases, double worst, double tol) {
  CheckResult out;
  out.name = std::move(name);
  out.cases = cases;
  out.worst_defect = worst;
  out.tolerance = tol;
  out.passed = worst <= tol;
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

// The suites ship with the library, so they carry their own small generators
// instead of leaning on test scaffolding.

TruncatedTensorSeries letter_series(int a, int dim, int depth) {
  TruncatedTensorSeries s(dim, depth);
  s.level(1)[static_cast<std::size_t>(a)] = 1.0;
  return s;
}

TruncatedTensorSeries bracket_of_word(const std::vector<int>& w, int dim,
                                      int depth) {
  TruncatedTensorSeries cur = letter_series(w[0], dim, depth);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const TruncatedTensorSeries e = letter_series(w[i], dim, depth);
    TruncatedTensorSeries next = tensor::conc_mul(cur, e);
    next -= tensor::conc_mul(e, cur);
    cur = next;
  }
  return cur;
}

GroupElement random_group_like(int dim, int depth, std::mt19937_64& rng,
                               double scale = 0.5) {
  std::uniform_real_distribution<double> coeff(-scale, scale);
  std::uniform_int_distribution<int> pick(0, dim - 1);
  TruncatedTensorSeries lie(dim, depth);
  for (int len = 1; len <= depth; ++len) {
    std::vector<int> w(static_cast<std::size_t>(len));
    for (auto& x : w) x = pick(rng);
    TruncatedTensorSeries b = bracket_of_word(w, dim, depth);
    b.scale(coeff(rng));
    lie += b;
  }
  return tensor::exp(lie);
}

Permutation random_permutation(int order, std::mt19937_64& rng) {
  std::vector<int> images(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) images[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(std::move(images));
}

Word random_word(int max_len, int alphabet, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<int> letter(1, alphabet);
  std::vector<int> ls(static_cast<std::size_t>(len(rng)));
  for (auto& l : ls) l = letter(rng);
  return Word(std::move(ls));
}

WordPolynomial random_word_polynomial(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, 2);
  std::uniform_int_distribution<int> coeff(-2, 2);
  WordPolynomial out;
  const int n = terms(rng);
  for (int i = 0; i < n; ++i) {
    int c = coeff(rng);
    if (c == 0) c = 1;
    out.add(random_word(2, 3, rng), words::Int(c));
  }
  if (out.is_zero()) out.add(Word({1}), words::Int(1));
  return out;
}

words::Int binomial(int n, int k) {
  words::Int out = 1;
  for (int i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

// Pushforward on one level: out[sigma . w] = in[w].
TruncatedTensorSeries apply_pushforward(const Permutation& sigma,
                                        const TruncatedTensorSeries& in) {
  const int n = sigma.order();
  const int d = in.dim();
  TruncatedTensorSeries out(d, in.depth());
  const auto& src = in.level(n);
  auto& dst = out.level(n);
  std::vector<std::size_t> digits(static_cast<std::size_t>(n));
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    std::size_t rem = idx;
    for (int j = n - 1; j >= 0; --j) {
      digits[static_cast<std::size_t>(j)] = rem % static_cast<std::size_t>(d);
      rem /= static_cast<std::size_t>(d);
    }
    std::size_t target = 0;
    for (int j = 0; j < n; ++j) {
      target = target * static_cast<std::size_t>(d) +
               digits[static_cast<std::size_t>(sigma(j + 1) - 1)];
    }
    dst[target] += src[idx];
  }
  return out;
}

PiecewiseLinearPath random_polygon(int dim, int segments,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<double> times;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= segments; ++i) {
    times.push_back(static_cast<double>(i));
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& x : p) x = coord(rng);
    pts.push_back(std::move(p));
  }
  return PiecewiseLinearPath(std::move(times), std::move(pts));
}

PiecewiseLinearPath circle_path(int edges) {
  std::vector<double> times;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i <= edges; ++i) {
    const double a = 2.0 * std::numbers::pi * i / edges;
    times.push_back(static_cast<double>(i));
    pts.push_back({std::cos(a), std::sin(a)});
  }
  return PiecewiseLinearPath(std::move(times), std::move(pts));
}

// Smooth planar curve sampled uniformly on [0, 1].
PiecewiseLinearPath smooth_curve(int samples) {
  std::vector<double> times;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    times.push_back(t);
    pts.push_back({0.4 * std::sin(3.0 * t), 0.3 * std::cos(2.0 * t) - 0.3});
  }
  return PiecewiseLinearPath(std::move(times), std::move(pts));
}

std::vector<effects::FiberElement> identity_fibers(const SampledRoughPath& X,
                                                   int degree) {
  effects::FiberElement id(X.dim(), X.dim(), degree);
  for (int a = 0; a < X.dim(); ++a)
    id.level(1)[static_cast<std::size_t>(a * X.dim() + a)] = 1.0;
  return std::vector<effects::FiberElement>(X.times().size(), id);
}

std::vector<effects::FiberElement> taylor_fibers(const SampledRoughPath& X,
                                                 const PolynomialOneForm& p,
                                                 int degree) {
  std::vector<effects::FiberElement> out;
  out.reserve(X.times().size());
  for (const auto& g : X.elements()) {
    const auto local = oneforms::shift_base(p, g.series().level(1));
    std::vector<std::vector<double>> levels;
    for (int k = 1; k <= degree; ++k) levels.push_back(local.coeff(k - 1));
    out.emplace_back(p.dim_in(), p.dim_out(), std::move(levels));
  }
  return out;
}

effects::FiberElement random_fiber(int dim_in, int dim_out, int degree,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  effects::FiberElement phi(dim_in, dim_out, degree);
  for (int k = 1; k <= degree; ++k)
    for (auto& x : phi.level(k)) x = coeff(rng);
  return phi;
}

double fiber_diff(const effects::FiberElement& a,
                  const effects::FiberElement& b) {
  double worst = 0.0;
  for (int k = 1; k <= a.degree(); ++k) {
    const auto& u = a.level(k);
    const auto& v = b.level(k);
    for (std::size_t i = 0; i < u.size(); ++i)
      worst = std::max(worst, std::abs(u[i] - v[i]));
  }
  return worst;
}

double l1_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// Degree-2 form whose derivative slots are symmetric by construction:
// coeff(k)[r; i_1..i_k, j] = s_k u_r v_{i_1} ... v_{i_k} w_j.
PolynomialOneForm separable_quadratic_form(int d, int e,
                                           std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(0.2, 0.8);
  std::uniform_int_distribution<int> sign(0, 1);
  auto vec = [&](int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = coord(rng) * (sign(rng) ? 1.0 : -1.0);
    return v;
  };
  const auto u = vec(e);
  const auto v = vec(d);
  const auto w = vec(d);
  std::vector<std::vector<double>> arrays;
  for (int k = 0; k <= 2; ++k) {
    std::size_t cols = 1;
    for (int j = 0; j <= k; ++j) cols *= static_cast<std::size_t>(d);
    std::vector<double> arr(static_cast<std::size_t>(e) * cols);
    for (int r = 0; r < e; ++r) {
      for (std::size_t idx = 0; idx < cols; ++idx) {
        std::size_t rem = idx;
        double prod = u[static_cast<std::size_t>(r)];
        prod *= w[rem % static_cast<std::size_t>(d)];
        rem /= static_cast<std::size_t>(d);
        for (int j = 0; j < k; ++j) {
          prod *= v[rem % static_cast<std::size_t>(d)];
          rem /= static_cast<std::size_t>(d);
        }
        arr[static_cast<std::size_t>(r) * cols + idx] = prod;
      }
    }
    arrays.push_back(std::move(arr));
  }
  return PolynomialOneForm(d, e, 2, std::move(arrays));
}

}  // namespace

SuiteReport hopf_suite(std::uint64_t seed, int max_order, int trials,
                       double tolerance_scale) {
  std::mt19937_64 rng(seed);
  SuiteReport rep;
  rep.suite = "hopf";
  rep.seed = seed;
  rep.context = json{{"max_order", max_order},
                     {"trials", trials},
                     {"tolerance_scale", tolerance_scale}};

  {
    PermutationSum want;
    want.add(Permutation({1, 3, 2}), 1);
    want.add(Permutation({3, 1, 2}), 1);
    want.add(Permutation({3, 2, 1}), 1);
    double worst =
        words::perm_product(Permutation({1}), Permutation({2, 1})) == want
            ? 0.0
            : 1.0;
    PermutationSum half;
    half.add(Permutation({1, 4, 2, 3}), 1);
    half.add(Permutation({4, 1, 2, 3}), 1);
    half.add(Permutation({4, 2, 1, 3}), 1);
    if (words::half_shuffle(Permutation({1}), Permutation({3, 1, 2})) != half)
      worst = 1.0;
    rep.checks.push_back(
        check("pinned product expansions", 2, worst, 0.0 * tolerance_scale));
  }

  {
    double worst = 0.0;
    std::uniform_int_distribution<int> order(0, max_order);
    for (int t = 0; t < trials; ++t) {
      const auto a = PermutationSum::term(random_permutation(order(rng), rng));
      const auto b = PermutationSum::term(random_permutation(order(rng), rng));
      const auto c = PermutationSum::term(random_permutation(order(rng), rng));
      const auto left = words::perm_product(words::perm_product(a, b), c);
      const auto right = words::perm_product(a, words::perm_product(b, c));
      if (left != right) worst = 1.0;
    }
    rep.checks.push_back(
        check("product associativity", trials, worst, 0.0 * tolerance_scale));
  }

  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Word u = random_word(3, 3, rng);
      const Word v = random_word(3, 3, rng);
      const auto split =
          words::half_shuffle(u, v) + words::half_shuffle(v, u);
      if (words::shuffle(u, v) != split) worst = 1.0;
    }
    rep.checks.push_back(
        check("shuffle dendriform split", trials, worst,
              0.0 * tolerance_scale));
  }

  {
    double worst = 0.0;
    int cases = 0;
    for (int n1 = 1; n1 <= max_order; ++n1) {
      for (int n2 = 1; n1 + n2 <= max_order + 1; ++n2) {
        const auto hs = words::half_shuffle(Permutation::identity(n1),
                                            Permutation::identity(n2));
        ++cases;
        if (words::Int(hs.term_count()) != binomial(n1 + n2 - 1, n1))
          worst = 1.0;
        for (const auto& [perm, c] : hs.terms()) {
          if (c != 1) worst = 1.0;
          if (perm.order() != n1 + n2) worst = 1.0;
        }
      }
    }
    rep.checks.push_back(
        check("half shuffle closure", cases, worst, 0.0 * tolerance_scale));
  }

  {
    double worst = 0.0;
    const std::vector<std::pair<int, int>> splits{{1, 1}, {1, 2}, {2, 1},
                                                  {2, 2}, {1, 3}, {3, 1}};
    for (int t = 0; t < trials; ++t) {
      const auto [n, m] = splits[static_cast<std::size_t>(t) % splits.size()];
      std::vector<WordPolynomial> ps;
      for (int i = 0; i < n + m; ++i)
        ps.push_back(random_word_polynomial(rng));
      if (!words::lemma1_check(ps, n)) worst = 1.0;
    }
    rep.checks.push_back(check("coproduct compatibility", trials, worst,
                               0.0 * tolerance_scale));
  }

  rep.passed = all_passed(rep.checks);
  return rep;
}

SuiteReport signature_suite(std::uint64_t seed, int depth, int paths,
                            double tolerance_scale) {
  std::mt19937_64 rng(seed);
  SuiteReport rep;
  rep.suite = "signature";
  rep.seed = seed;
  rep.context = json{{"depth", depth},
                     {"paths", paths},
                     {"tolerance_scale", tolerance_scale}};

  double chen = 0.0, reparam = 0.0, reversal = 0.0, grouplike = 0.0;
  for (int i = 0; i < paths; ++i) {
    const int dim = 1 + i % 3;
    const int segments = 2 + i % 5;
    const auto path = random_polygon(dim, segments, rng);
    const auto sig = paths::signature(path, depth);

    const double mid = static_cast<double>(segments / 2 + 1);
    const auto head = paths::signature(path, depth, path.t_begin(), mid);
    const auto tail = paths::signature(path, depth, mid, path.t_end());
    chen = std::max(chen, tensor::max_abs_diff(
                              tensor::conc_mul(head.series(), tail.series()),
                              sig.series()));

    std::vector<double> warped;
    for (const double t : path.times()) warped.push_back(t * t + t);
    const PiecewiseLinearPath same_trace(warped, path.points());
    reparam = std::max(
        reparam, tensor::max_abs_diff(
                     paths::signature(same_trace, depth).series(),
                     sig.series()));

    const auto back = paths::signature(paths::reversed(path), depth);
    reversal = std::max(
        reversal,
        tensor::max_abs_diff(
            tensor::conc_mul(sig.series(), back.series()),
            TruncatedTensorSeries::unit(dim, depth)));

    grouplike =
        std::max(grouplike, tensor::group_like_defect(sig.series()));
  }
  rep.checks.push_back(
      check("chen identity", paths, chen, 1e-10 * tolerance_scale));
  rep.checks.push_back(check("reparametrisation invariance", paths, reparam,
                             1e-10 * tolerance_scale));
  rep.checks.push_back(
      check("reversal inverse", paths, reversal, 1e-10 * tolerance_scale));
  rep.checks.push_back(
      check("group like defect", paths, grouplike, 1e-10 * tolerance_scale));

  {
    const int edges = 1000;
    const auto sig = paths::signature(circle_path(edges), std::max(depth, 2));
    const auto& l1 = sig.series().level(1);
    const auto& l2 = sig.series().level(2);
    double worst = std::max(std::abs(l1[0]), std::abs(l1[1]));
    const double area = 0.5 * (l2[1] - l2[2]);
    worst = std::max(worst, std::abs(area - std::numbers::pi));
    rep.checks.push_back(
        check("circle area", 1, worst, 1e-3 * tolerance_scale));
  }

  rep.passed = all_passed(rep.checks);
  return rep;
}

SuiteReport changevar_suite(std::uint64_t seed, int depth, int trials,
                            double tolerance_scale) {
  std::mt19937_64 rng(seed);
  SuiteReport rep;
  rep.suite = "changevar";
  rep.seed = seed;
  rep.context = json{{"depth", depth},
                     {"trials", trials},
                     {"tolerance_scale", tolerance_scale}};

  const std::vector<Permutation> small{
      Permutation::identity(0), Permutation::identity(1),
      Permutation({1, 2}), Permutation({2, 1})};

  {
    double worst = 0.0;
    int cases = 0;
    for (const int dim : {2, 3}) {
      for (int t = 0; t < trials; ++t) {
        const auto s = random_group_like(dim, depth, rng);
        for (const auto& sigma : small) {
          for (const auto& rho : small) {
            const auto lhs = tensor::conc_mul(
                tensor::s_hat(PermutationSum::term(sigma), s),
                tensor::s_hat(PermutationSum::term(rho), s));
            const auto rhs =
                tensor::s_hat(words::perm_product(sigma, rho), s);
            worst = std::max(worst, tensor::max_abs_diff(lhs, rhs));
            ++cases;
          }
        }
      }
    }
    rep.checks.push_back(
        check("character property", cases, worst, 1e-12 * tolerance_scale));
  }

  {
    double worst = 0.0;
    int cases = 0;
    for (const int dim : {2, 3}) {
      for (int t = 0; t < trials; ++t) {
        const auto s = random_group_like(dim, depth, rng);
        const auto u = random_group_like(dim, depth, rng);
        const auto c = s * u;
        for (int n1 = 0; n1 <= 2; ++n1) {
          for (int n2 = 1; n2 <= 2; ++n2) {
            const auto kernel = words::half_shuffle(
                Permutation::identity(n1), Permutation::identity(n2));
            auto lhs = tensor::s_hat(kernel, c);
            lhs -= tensor::s_hat(kernel, s);

            TruncatedTensorSeries rhs(dim, depth);
            for (int k1 = 0; k1 <= n1; ++k1) {
              for (int k2 = 0; k2 < n2; ++k2) {
                const auto left = tensor::s_hat(
                    words::perm_product(Permutation::identity(k1),
                                        Permutation::identity(k2)),
                    s);
                const auto right = tensor::s_hat(
                    words::half_shuffle(Permutation::identity(n1 - k1),
                                        Permutation::identity(n2 - k2)),
                    u);
                rhs += apply_pushforward(
                    words::block_swap(k1, k2, n1, n2),
                    tensor::conc_mul(left, right));
              }
            }
            worst = std::max(worst, tensor::max_abs_diff(lhs, rhs));
            ++cases;
          }
        }
      }
    }
    rep.checks.push_back(
        check("change of variable", cases, worst, 1e-10 * tolerance_scale));
  }

  rep.passed = all_passed(rep.checks);
  return rep;
}

SuiteReport effects_suite(std::uint64_t seed, double tolerance_scale) {
  std::mt19937_64 rng(seed);
  SuiteReport rep;
  rep.suite = "effects";
  rep.seed = seed;
  rep.context = json{{"tolerance_scale", tolerance_scale}};

  {
    double worst = 0.0;
    const int trials = 12;
    for (int t = 0; t < trials; ++t) {
      const auto phi = random_fiber(2, 2, 3, rng);
      const auto a = random_group_like(2, 3, rng);
      const auto b = random_group_like(2, 3, rng);
      const auto twice = effects::reset(effects::reset(phi, a), b);
      const auto once = effects::reset(phi, a * b);
      worst = std::max(worst, fiber_diff(twice, once));
    }
    rep.checks.push_back(
        check("reset cocycle", trials, worst, 1e-12 * tolerance_scale));
  }

  {
    const auto path = random_polygon(2, 6, rng);
    const auto X = paths::lift_path(path, 1);
    const effects::SlowlyVaryingOneForm beta(X, identity_fibers(X, 1), 1.0,
                                             Control::linear(1.0), 1.5);
    const auto h = effects::integrate_effect(beta, 1e-12);
    double worst = h.converged ? 0.0 : 1.0;
    for (std::size_t i = 0; i < h.times.size(); ++i) {
      std::vector<double> want = path.points()[i];
      for (std::size_t c = 0; c < want.size(); ++c)
        want[c] -= path.points()[0][c];
      worst = std::max(worst, l1_diff(h.values[i], want));
    }
    rep.checks.push_back(check("identity fibers integrate to increments",
                               static_cast<int>(h.times.size()), worst,
                               1e-12 * tolerance_scale));
  }

  {
    const auto form = separable_quadratic_form(2, 2, rng);
    const auto X = paths::lift_path(smooth_curve(257), 2);
    const double p = 2.5;
    // The linear control keeps the pair scan quadratic; the p-variation
    // control would re-run its per-interval program on every pair.
    const effects::SlowlyVaryingOneForm beta(X, taylor_fibers(X, form, 2), p,
                                             Control::linear(1.0), 1.2);
    // Probe with a nominal tolerance so the refinement always runs; the
    // check judges the observed Cauchy gap, not the engine's verdict.
    const auto h = effects::integrate_effect(beta, 1e-12);
    rep.checks.push_back(check("effect integral converges", 1, h.final_gap,
                               1e-4 * tolerance_scale));

    effects::OperatorNormReport report;
    effects::operator_norm(beta, beta.omega(), beta.theta(), &report);
    rep.checks.push_back(check("operator norm finite", 1,
                               report.infinite ? 1.0 : 0.0,
                               0.0 * tolerance_scale));
  }

  rep.passed = all_passed(rep.checks);
  return rep;
}

SuiteReport effects_invariants(const PiecewiseLinearPath& path,
                               const PolynomialOneForm& form, double p,
                               double tol) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("p must be finite and at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (form.dim_in() != path.dim())
    throw std::invalid_argument("one form domain differs from the path");
  const int truncation = static_cast<int>(std::floor(p));
  if (form.degree() + 1 < truncation)
    throw std::invalid_argument(
        "one form degree " + std::to_string(form.degree()) +
        " is too low: fibers for p = " + std::to_string(p) + " need " +
        std::to_string(truncation) + " derivative levels");
  const double theta = (truncation + 1) / p;

  const auto X = paths::lift_path(path, truncation);
  // Linear control: evaluating the p-variation control on every pair of the
  // norm scan costs another quadratic factor on top of the pair count.
  const auto omega = Control::linear(1.0);
  const effects::SlowlyVaryingOneForm beta(
      X, taylor_fibers(X, form, truncation), p, omega, theta);

  SuiteReport rep;
  rep.suite = "effects-invariants";
  rep.seeded = false;
  rep.context = json{{"dim", form.dim_in()},
                     {"dim_out", form.dim_out()},
                     {"samples", static_cast<int>(X.times().size())},
                     {"p", p},
                     {"theta", theta},
                     {"truncation", truncation}};

  {
    const std::size_t n = X.times().size();
    std::vector<std::size_t> marks{0, n / 4, n / 2, (3 * n) / 4, n - 1};
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    double worst = 0.0;
    int cases = 0;
    for (std::size_t a = 0; a + 2 < marks.size(); ++a) {
      for (std::size_t b = a + 1; b + 1 < marks.size(); ++b) {
        for (std::size_t c = b + 1; c < marks.size(); ++c) {
          const double ti = X.times()[marks[a]];
          const double tj = X.times()[marks[b]];
          const double tk = X.times()[marks[c]];
          const auto& phi = beta.fiber(marks[a]);
          const auto twice = effects::reset(
              effects::reset(phi, X.increment(ti, tj)),
              X.increment(tj, tk));
          const auto once = effects::reset(phi, X.increment(ti, tk));
          worst = std::max(worst, fiber_diff(twice, once));
          ++cases;
        }
      }
    }
    rep.checks.push_back(check("reset cocycle", cases, worst, 1e-12));
  }

  {
    const effects::SlowlyVaryingOneForm id_beta(
        X, identity_fibers(X, truncation), p, omega, theta);
    const auto h = effects::integrate_effect(id_beta, 1e-12);
    double worst = h.converged ? 0.0 : 1.0;
    for (std::size_t i = 0; i < h.times.size(); ++i) {
      std::vector<double> want = path.points()[i];
      for (std::size_t c = 0; c < want.size(); ++c)
        want[c] -= path.points()[0][c];
      worst = std::max(worst, l1_diff(h.values[i], want));
    }
    rep.checks.push_back(check("identity fibers integrate to increments",
                               static_cast<int>(h.times.size()), worst,
                               1e-12));
  }

  {
    // Probe past the requested tolerance so the reported gap reflects the
    // grid's actual Cauchy behaviour instead of the stopping rule.
    const auto h = effects::integrate_effect(beta, std::min(tol, 1e-12));
    rep.checks.push_back(
        check("effect integral converges", 1, h.final_gap, tol));
  }

  {
    effects::OperatorNormReport report;
    effects::operator_norm(beta, beta.omega(), beta.theta(), &report);
    rep.checks.push_back(
        check("operator norm finite", 1, report.infinite ? 1.0 : 0.0, 0.0));
  }

  rep.passed = all_passed(rep.checks);
  return rep;
}

json report_json(const SuiteReport& report) {
  json doc;
  doc["suite"] = report.suite;
  if (report.seeded) doc["seed"] = report.seed;
  doc["context"] = report.context;
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name},
                          {"cases", c.cases},
                          {"worst_defect", c.worst_defect},
                          {"tolerance", c.tolerance},
                          {"passed", c.passed}});
  }
  doc["checks"] = std::move(checks);
  doc["passed"] = report.passed;
  return doc;
}

}  // namespace roughalg::verify
