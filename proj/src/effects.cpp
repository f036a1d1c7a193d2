#include "roughalg/effects.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "roughalg/one_forms.hpp"
#include "roughalg/permutations.hpp"
#include "roughalg/runtime.hpp"
#include "roughalg/words.hpp"

namespace roughalg::effects {

namespace {

std::size_t pow_size(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

void check_fiber_dims(int dim_in, int dim_out) {
  if (dim_in < 1 || dim_out < 1)
    throw std::invalid_argument("fiber dimensions must be positive");
}

}  // namespace

FiberElement::FiberElement(int dim_in, int dim_out, int degree)
    : dim_in_(dim_in), dim_out_(dim_out) {
  check_fiber_dims(dim_in, dim_out);
  if (degree < 1) throw std::invalid_argument("fiber degree must be at least 1");
  std::size_t words = 1;
  for (int k = 1; k <= degree; ++k) {
    words *= static_cast<std::size_t>(dim_in);
    levels_.emplace_back(static_cast<std::size_t>(dim_out) * words, 0.0);
  }
}

FiberElement::FiberElement(int dim_in, int dim_out,
                           std::vector<std::vector<double>> levels)
    : dim_in_(dim_in), dim_out_(dim_out), levels_(std::move(levels)) {
  check_fiber_dims(dim_in, dim_out);
  if (levels_.empty())
    throw std::invalid_argument("fiber degree must be at least 1");
  std::size_t words = 1;
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    words *= static_cast<std::size_t>(dim_in);
    if (levels_[k].size() != static_cast<std::size_t>(dim_out) * words)
      throw std::invalid_argument("fiber level has the wrong size");
  }
}

std::vector<double> FiberElement::evaluate(
    const tensor::GroupElement& x) const {
  if (x.dim() != dim_in_)
    throw std::invalid_argument("group element dimension differs from fiber");
  if (x.depth() < degree())
    throw std::invalid_argument("group element truncated below fiber degree");
  std::vector<double> out(static_cast<std::size_t>(dim_out_), 0.0);
  for (int k = 1; k <= degree(); ++k) {
    const auto& xk = x.series().level(k);
    const auto& pk = level(k);
    for (int u = 0; u < dim_out_; ++u) {
      const std::size_t off = static_cast<std::size_t>(u) * xk.size();
      double acc = 0.0;
      for (std::size_t i = 0; i < xk.size(); ++i) acc += pk[off + i] * xk[i];
      out[static_cast<std::size_t>(u)] += acc;
    }
  }
  return out;
}

double FiberElement::level_norm(int k) const {
  const std::size_t cols = level(k).size() / static_cast<std::size_t>(dim_out_);
  return oneforms::l1_operator_norm(level(k), dim_out_,
                                    static_cast<int>(cols));
}

double FiberElement::norm() const {
  double out = 0.0;
  for (int k = 1; k <= degree(); ++k) out = std::max(out, level_norm(k));
  return out;
}

FiberElement& FiberElement::operator+=(const FiberElement& o) {
  if (dim_in_ != o.dim_in_ || dim_out_ != o.dim_out_ ||
      degree() != o.degree())
    throw std::invalid_argument("fiber shapes differ");
  for (std::size_t k = 0; k < levels_.size(); ++k)
    for (std::size_t i = 0; i < levels_[k].size(); ++i)
      levels_[k][i] += o.levels_[k][i];
  return *this;
}

FiberElement& FiberElement::operator-=(const FiberElement& o) {
  if (dim_in_ != o.dim_in_ || dim_out_ != o.dim_out_ ||
      degree() != o.degree())
    throw std::invalid_argument("fiber shapes differ");
  for (std::size_t k = 0; k < levels_.size(); ++k)
    for (std::size_t i = 0; i < levels_[k].size(); ++i)
      levels_[k][i] -= o.levels_[k][i];
  return *this;
}

void FiberElement::scale(double c) {
  for (auto& lvl : levels_)
    for (auto& x : lvl) x *= c;
}

FiberElement reset(const FiberElement& phi, const tensor::GroupElement& a) {
  if (a.dim() != phi.dim_in())
    throw std::invalid_argument("base point dimension differs from fiber");
  if (a.depth() < phi.degree() - 1)
    throw std::invalid_argument("base point truncated below degree - 1");
  const int e = phi.dim_out();
  FiberElement out(phi.dim_in(), e, phi.degree());
  for (int j = 1; j <= phi.degree(); ++j) {
    auto& oj = out.level(j);
    const std::size_t wsz = oj.size() / static_cast<std::size_t>(e);
    for (int k = j; k <= phi.degree(); ++k) {
      const auto& pk = phi.level(k);
      const std::size_t cols = pk.size() / static_cast<std::size_t>(e);
      if (k == j) {
        for (std::size_t i = 0; i < pk.size(); ++i) oj[i] += pk[i];
        continue;
      }
      // Leading block of length k - j contracts against a; the index of a
      // word v.w is v * dim^j + w.
      const auto& av = a.series().level(k - j);
      for (int u = 0; u < e; ++u) {
        const std::size_t dst = static_cast<std::size_t>(u) * wsz;
        const std::size_t src = static_cast<std::size_t>(u) * cols;
        for (std::size_t v = 0; v < av.size(); ++v) {
          const double c = av[v];
          if (c == 0.0) continue;
          const std::size_t base = src + v * wsz;
          for (std::size_t w = 0; w < wsz; ++w) oj[dst + w] += c * pk[base + w];
        }
      }
    }
  }
  return out;
}

namespace {

void list_compositions(int n, int parts, std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    cur.push_back(n);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = 1; n - first >= parts - 1; ++first) {
    cur.push_back(first);
    list_compositions(n - first, parts - 1, cur, out);
    cur.pop_back();
  }
}

words::PermutationSum identity_sum(int n) {
  words::PermutationSum out;
  out.add(words::Permutation::identity(n), 1);
  return out;
}

// Contract phi_1^{k_1} (x) ... (x) phi_l^{k_l} against a permutation kernel
// into the level-n array of out. The kernel acts on tensors as s_hat, so the
// stack side reads slot j of the factor tensor through sigma^{-1}(j).
void accumulate_kernel(const words::PermutationSum& kernel,
                       const std::vector<const FiberElement*>& factors,
                       const std::vector<int>& comp, FiberElement& out) {
  const int l = static_cast<int>(factors.size());
  int n = 0;
  for (int k : comp) n += k;
  const int d = out.dim_in();
  auto& dst = out.level(n);
  const std::size_t wn = dst.size() / static_cast<std::size_t>(out.dim_out());

  std::vector<const std::vector<double>*> lvl(l);
  std::vector<std::size_t> wc(l);
  std::vector<int> rows(l);
  for (int f = 0; f < l; ++f) {
    lvl[f] = &factors[f]->level(comp[f]);
    rows[f] = factors[f]->dim_out();
    wc[f] = lvl[f]->size() / static_cast<std::size_t>(rows[f]);
  }

  std::vector<int> digits(static_cast<std::size_t>(n));
  std::vector<int> inv(static_cast<std::size_t>(n) + 1);
  std::vector<std::size_t> block(l);
  std::vector<int> u(l);
  int rows_out = 1;
  for (int f = 0; f < l; ++f) rows_out *= rows[f];

  for (const auto& [sigma, c] : kernel.terms()) {
    const double coeff = c.template convert_to<double>();
    for (int j = 1; j <= n; ++j) inv[static_cast<std::size_t>(sigma(j))] = j;
    for (std::size_t idx = 0; idx < wn; ++idx) {
      std::size_t rem = idx;
      for (int pos = n - 1; pos >= 0; --pos) {
        digits[static_cast<std::size_t>(pos)] =
            static_cast<int>(rem % static_cast<std::size_t>(d));
        rem /= static_cast<std::size_t>(d);
      }
      int slot = 1;
      for (int f = 0; f < l; ++f) {
        std::size_t b = 0;
        for (int t = 0; t < comp[static_cast<std::size_t>(f)]; ++t, ++slot)
          b = b * static_cast<std::size_t>(d) +
              static_cast<std::size_t>(
                  digits[static_cast<std::size_t>(inv[slot] - 1)]);
        block[static_cast<std::size_t>(f)] = b;
      }
      std::fill(u.begin(), u.end(), 0);
      for (int row = 0; row < rows_out; ++row) {
        double prod = coeff;
        for (int f = 0; f < l; ++f)
          prod *= (*lvl[f])[static_cast<std::size_t>(u[f]) * wc[f] + block[f]];
        dst[static_cast<std::size_t>(row) * wn + idx] += prod;
        for (int f = l - 1; f >= 0; --f) {
          if (++u[f] < rows[f]) break;
          u[f] = 0;
        }
      }
    }
  }
}

FiberElement graded_kernel_product(
    const std::vector<const FiberElement*>& factors, bool half_shuffle_kernel) {
  const int l = static_cast<int>(factors.size());
  const int d = factors[0]->dim_in();
  const int deg = factors[0]->degree();
  int rows_out = 1;
  for (const auto* f : factors) {
    if (f->dim_in() != d || f->degree() != deg)
      throw std::invalid_argument("factor stacks must share shape");
    rows_out *= f->dim_out();
  }
  FiberElement out(d, rows_out, deg);
  for (int n = l; n <= deg; ++n) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    list_compositions(n, l, cur, comps);
    for (const auto& comp : comps) {
      words::PermutationSum kernel = identity_sum(comp[0]);
      for (std::size_t f = 1; f < comp.size(); ++f) {
        kernel = half_shuffle_kernel
                     ? words::half_shuffle(kernel, identity_sum(comp[f]))
                     : words::perm_product(kernel, identity_sum(comp[f]));
      }
      accumulate_kernel(kernel, factors, comp, out);
    }
  }
  return out;
}

}  // namespace

FiberElement truncated_power(const FiberElement& phi, int l) {
  if (l < 1 || l > phi.degree())
    throw std::invalid_argument("power must lie between 1 and the degree");
  std::vector<const FiberElement*> factors(static_cast<std::size_t>(l), &phi);
  return graded_kernel_product(factors, false);
}

FiberElement truncated_product(const FiberElement& phi1,
                               const FiberElement& phi2) {
  return graded_kernel_product({&phi1, &phi2}, false);
}

FiberElement truncated_half_shuffle(const FiberElement& phi1,
                                    const FiberElement& phi2) {
  return graded_kernel_product({&phi1, &phi2}, true);
}

FiberElement swap_tensor_factors(const FiberElement& phi, int left_rows,
                                 int right_rows) {
  if (left_rows < 1 || right_rows < 1 ||
      left_rows * right_rows != phi.dim_out())
    throw std::invalid_argument("row split does not match the output space");
  FiberElement out(phi.dim_in(), phi.dim_out(), phi.degree());
  for (int k = 1; k <= phi.degree(); ++k) {
    const auto& src = phi.level(k);
    auto& dst = out.level(k);
    const std::size_t cols = src.size() / static_cast<std::size_t>(phi.dim_out());
    for (int a = 0; a < left_rows; ++a) {
      for (int b = 0; b < right_rows; ++b) {
        const std::size_t from =
            static_cast<std::size_t>(a * right_rows + b) * cols;
        const std::size_t to = static_cast<std::size_t>(b * left_rows + a) * cols;
        for (std::size_t i = 0; i < cols; ++i) dst[to + i] = src[from + i];
      }
    }
  }
  return out;
}

SlowlyVaryingOneForm::SlowlyVaryingOneForm(paths::SampledRoughPath X,
                                           std::vector<FiberElement> fibers,
                                           double p, tensor::Control omega,
                                           double theta)
    : X_(std::move(X)),
      fibers_(std::move(fibers)),
      p_(p),
      omega_(std::move(omega)),
      theta_(theta) {
  if (!std::isfinite(p_) || p_ < 1.0)
    throw std::invalid_argument("p must be finite and at least 1");
  if (!(theta_ > 1.0)) throw std::invalid_argument("theta must exceed 1");
  if (fibers_.size() != X_.times().size())
    throw std::invalid_argument("one fiber per sample time required");
  const int cap = static_cast<int>(std::floor(p_));
  for (const auto& f : fibers_) {
    if (f.degree() != cap)
      throw std::invalid_argument("fiber degree must equal floor(p)");
    if (f.dim_in() != X_.dim())
      throw std::invalid_argument("fiber domain differs from the path");
    if (f.dim_out() != fibers_.front().dim_out())
      throw std::invalid_argument("fibers target different spaces");
  }
  if (X_.depth() < cap)
    throw std::invalid_argument("path truncated below floor(p)");
}

double operator_norm(const SlowlyVaryingOneForm& beta,
                     const tensor::Control& omega, double theta,
                     OperatorNormReport* report) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  OperatorNormReport local;
  OperatorNormReport& rep = report ? *report : local;
  rep = OperatorNormReport{};
  const int cap = beta.truncation();
  rep.difference_terms.assign(static_cast<std::size_t>(cap), 0.0);
  for (const auto& f : beta.fibers())
    rep.sup_norm = std::max(rep.sup_norm, f.norm());
  for (int k = 1; k <= cap; ++k)
    if (theta - k / beta.p() <= 0.0) rep.nonpositive_exponent = true;

  const auto& times = beta.path().times();
  const std::size_t n = times.size();

  struct Partial {
    std::vector<double> terms;
    bool infinite = false;
    std::exception_ptr error;
  };
  // Every (i, j) term is computed identically and the partials combine by
  // max, so strided rows give the same result for any worker count.
  auto scan_rows = [&](std::size_t first, std::size_t stride, Partial& out) {
    out.terms.assign(static_cast<std::size_t>(cap), 0.0);
    try {
      for (std::size_t i = first; i + 1 < n; i += stride) {
        for (std::size_t j = i + 1; j < n; ++j) {
          auto moved =
              reset(beta.fiber(i), beta.path().increment(times[i], times[j]));
          moved -= beta.fiber(j);
          const double w = omega(times[i], times[j]);
          for (int k = 1; k <= cap; ++k) {
            const double num = moved.level_norm(k);
            if (w == 0.0) {
              if (num > 0.0) out.infinite = true;
              continue;
            }
            out.terms[static_cast<std::size_t>(k) - 1] =
                std::max(out.terms[static_cast<std::size_t>(k) - 1],
                         num / std::pow(w, theta - k / beta.p()));
          }
        }
      }
    } catch (...) {
      out.error = std::current_exception();
    }
  };

  std::size_t workers =
      n >= 64 ? static_cast<std::size_t>(runtime::thread_cap()) : 1;
  workers = std::min(workers, n >= 2 ? n - 1 : std::size_t{1});
  std::vector<Partial> partials(workers);
  if (workers == 1) {
    scan_rows(0, 1, partials[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] { scan_rows(w, workers, partials[w]); });
    for (auto& t : pool) t.join();
  }
  for (const auto& part : partials) {
    if (part.error) std::rethrow_exception(part.error);
    if (part.infinite) rep.infinite = true;
    for (std::size_t k = 0; k < part.terms.size(); ++k)
      rep.difference_terms[k] = std::max(rep.difference_terms[k], part.terms[k]);
  }
  if (rep.infinite) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  for (double term : rep.difference_terms) diff = std::max(diff, term);
  return rep.sup_norm + diff;
}

EffectPath integrate_effect(const SlowlyVaryingOneForm& beta, double lo,
                            double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto& times = beta.path().times();
  auto locate = [&times](double t) {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == t) return i;
    throw std::invalid_argument("endpoint is not a sample time");
  };
  const std::size_t i0 = locate(lo);
  const std::size_t i1 = locate(hi);
  if (i0 > i1)
    throw std::invalid_argument("integration endpoints are out of order");

  EffectPath out;
  out.times.assign(times.begin() + static_cast<std::ptrdiff_t>(i0),
                   times.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
  const std::size_t e = static_cast<std::size_t>(beta.dim_out());
  std::vector<double> acc(e, 0.0);
  out.values.push_back(acc);
  for (std::size_t i = i0; i < i1; ++i) {
    const auto step =
        beta.fiber(i).evaluate(beta.path().increment(times[i], times[i + 1]));
    for (std::size_t r = 0; r < e; ++r) acc[r] += step[r];
    out.values.push_back(acc);
  }

  const std::size_t cells = i1 - i0;
  if (cells <= 1) {
    out.converged = true;
    return out;
  }
  // Riemann totals over index-dyadic subgrids of the samples; the finest
  // total coincides with values.back().
  auto total_on = [&](std::size_t pieces) {
    std::vector<double> s(e, 0.0);
    for (std::size_t k = 0; k < pieces; ++k) {
      const std::size_t a = i0 + (k * cells) / pieces;
      const std::size_t b = i0 + ((k + 1) * cells) / pieces;
      const auto step =
          beta.fiber(a).evaluate(beta.path().increment(times[a], times[b]));
      for (std::size_t r = 0; r < e; ++r) s[r] += step[r];
    }
    return s;
  };
  std::vector<double> prev = total_on(1);
  for (std::size_t pieces = 2;; pieces *= 2) {
    if (pieces > cells) pieces = cells;
    const auto cur = total_on(pieces);
    double gap = 0.0;
    for (std::size_t r = 0; r < e; ++r) gap += std::abs(cur[r] - prev[r]);
    out.final_gap = gap;
    if (gap < tol) {
      out.converged = true;
      break;
    }
    if (pieces == cells) break;
    prev = cur;
  }
  return out;
}

EffectPath integrate_effect(const SlowlyVaryingOneForm& beta, double tol) {
  return integrate_effect(beta, beta.path().t_begin(), beta.path().t_end(),
                          tol);
}

namespace {

// acc += scale * A P, applying the row-major rows_out x P.dim_out() matrix A
// to every level of P.
void accumulate_matrix_apply(const std::vector<double>& A, int rows_out,
                             double scale, const FiberElement& P,
                             FiberElement& acc) {
  const int rin = P.dim_out();
  for (int k = 1; k <= P.degree(); ++k) {
    const auto& src = P.level(k);
    auto& dst = acc.level(k);
    const std::size_t cols = src.size() / static_cast<std::size_t>(rin);
    for (int u = 0; u < rows_out; ++u) {
      for (int r = 0; r < rin; ++r) {
        const double a = scale * A[static_cast<std::size_t>(u * rin + r)];
        if (a == 0.0) continue;
        const std::size_t from = static_cast<std::size_t>(r) * cols;
        const std::size_t to = static_cast<std::size_t>(u) * cols;
        for (std::size_t i = 0; i < cols; ++i) dst[to + i] += a * src[from + i];
      }
    }
  }
}

double operator_norm_or_zero(const SlowlyVaryingOneForm& beta) {
  return operator_norm(beta, beta.omega(), beta.theta());
}

}  // namespace

SlowlyVaryingOneForm compose_effect(const SlowlyVaryingOneForm& beta1,
                                    const RegularFunction& phi, double tol,
                                    ComposeReport* report) {
  const int cap = beta1.truncation();
  if (phi.dim_in != beta1.dim_out())
    throw std::invalid_argument("function domain differs from the form target");
  if (phi.dim_out < 1)
    throw std::invalid_argument("function target must be positive dimensional");
  if (!(phi.gamma > beta1.p()))
    throw std::invalid_argument("gamma must exceed p");
  if (static_cast<int>(phi.stack.size()) < cap + 1)
    throw std::invalid_argument("derivative stack shorter than floor(p) + 1");

  const auto h = integrate_effect(beta1, tol);
  const auto& times = beta1.path().times();
  const int w_in = beta1.dim_out();

  std::vector<FiberElement> fibers;
  fibers.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    FiberElement acc(beta1.path().dim(), phi.dim_out, cap);
    double factorial = 1.0;
    for (int l = 1; l <= cap; ++l) {
      factorial *= l;
      const auto power = truncated_power(beta1.fiber(i), l);
      const auto deriv = phi.stack[static_cast<std::size_t>(l)](h.values[i]);
      if (deriv.size() != static_cast<std::size_t>(phi.dim_out) *
                              pow_size(w_in, l))
        throw std::invalid_argument("derivative stack returned a wrong size");
      accumulate_matrix_apply(deriv, phi.dim_out, 1.0 / factorial, power, acc);
    }
    fibers.push_back(std::move(acc));
  }

  auto omega = tensor::Control::sum(
      beta1.omega(), tensor::Control::p_variation_of(
                         times, beta1.path().elements(), beta1.p()));
  const double theta = std::min(
      {beta1.theta(), phi.gamma / beta1.p(), (cap + 1.0) / beta1.p()});
  SlowlyVaryingOneForm out(beta1.path(), std::move(fibers), beta1.p(),
                           std::move(omega), theta);
  if (report) {
    report->h = h;
    report->h_sup = 0.0;
    for (const auto& v : h.values) {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      report->h_sup = std::max(report->h_sup, s);
    }
    report->phi_norm_estimate = 0.0;
    for (int l = 1; l <= cap; ++l) {
      for (const auto& v : h.values) {
        const auto deriv = phi.stack[static_cast<std::size_t>(l)](v);
        report->phi_norm_estimate = std::max(
            report->phi_norm_estimate,
            oneforms::l1_operator_norm(deriv, phi.dim_out,
                                       static_cast<int>(pow_size(w_in, l))));
      }
    }
    report->operator_norm_value = operator_norm_or_zero(out);
    const double n1 = operator_norm_or_zero(beta1);
    const double denom = report->phi_norm_estimate *
                         std::max(n1, std::pow(n1, cap));
    if (denom > 0.0) {
      report->estimated_constant = report->operator_norm_value / denom;
    } else {
      report->estimated_constant =
          report->operator_norm_value == 0.0
              ? 0.0
              : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

SlowlyVaryingOneForm iterated_effect(const SlowlyVaryingOneForm& beta1,
                                     const SlowlyVaryingOneForm& beta2,
                                     double tol, IteratedReport* report) {
  if (beta1.path().times() != beta2.path().times() ||
      beta1.path().dim() != beta2.path().dim())
    throw std::invalid_argument("the two forms live on different base paths");
  if (beta1.p() != beta2.p())
    throw std::invalid_argument("the two forms declare different p");

  const auto h1 = integrate_effect(beta1, tol);
  const int e1 = beta1.dim_out();
  const int e2 = beta2.dim_out();
  std::vector<FiberElement> fibers;
  fibers.reserve(beta1.fibers().size());
  for (std::size_t i = 0; i < beta1.fibers().size(); ++i) {
    FiberElement f = truncated_half_shuffle(beta1.fiber(i), beta2.fiber(i));
    const auto& v = h1.values[i];
    const auto& g = beta2.fiber(i);
    for (int k = 1; k <= f.degree(); ++k) {
      const auto& src = g.level(k);
      auto& dst = f.level(k);
      const std::size_t cols = src.size() / static_cast<std::size_t>(e2);
      for (int a = 0; a < e1; ++a) {
        const double c = v[static_cast<std::size_t>(a)];
        if (c == 0.0) continue;
        for (int b = 0; b < e2; ++b) {
          const std::size_t to = static_cast<std::size_t>(a * e2 + b) * cols;
          const std::size_t from = static_cast<std::size_t>(b) * cols;
          for (std::size_t x = 0; x < cols; ++x) dst[to + x] += c * src[from + x];
        }
      }
    }
    fibers.push_back(std::move(f));
  }

  auto omega = tensor::Control::sum(
      tensor::Control::sum(beta1.omega(), beta2.omega()),
      tensor::Control::p_variation_of(beta1.path().times(),
                                      beta1.path().elements(), beta1.p()));
  SlowlyVaryingOneForm out(beta1.path(), std::move(fibers), beta1.p(),
                           std::move(omega),
                           std::min(beta1.theta(), beta2.theta()));
  if (report) {
    report->h1 = h1;
    report->operator_norm_value = operator_norm_or_zero(out);
    const double denom =
        operator_norm_or_zero(beta1) * operator_norm_or_zero(beta2);
    if (denom > 0.0) {
      report->estimated_constant = report->operator_norm_value / denom;
    } else {
      report->estimated_constant =
          report->operator_norm_value == 0.0
              ? 0.0
              : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

}  // namespace roughalg::effects
