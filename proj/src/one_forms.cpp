#include "roughalg/one_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace roughalg::oneforms {

using tensor::GroupElement;
using tensor::TruncatedTensorSeries;

namespace {

std::size_t ipow(int base, int k) {
  std::size_t out = 1;
  for (int i = 0; i < k; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

// Contract the first tensor slot of a row-major rows x cols array (cols a
// power of d) with the vector y.
std::vector<double> contract_first_slot(const std::vector<double>& a, int rows,
                                        std::size_t cols,
                                        const std::vector<double>& y) {
  const std::size_t d = y.size();
  const std::size_t cols2 = cols / d;
  std::vector<double> out(static_cast<std::size_t>(rows) * cols2, 0.0);
  for (int r = 0; r < rows; ++r) {
    const double* src = a.data() + static_cast<std::size_t>(r) * cols;
    double* dst = out.data() + static_cast<std::size_t>(r) * cols2;
    for (std::size_t i = 0; i < d; ++i) {
      const double yi = y[i];
      const double* blk = src + i * cols2;
      for (std::size_t c = 0; c < cols2; ++c) dst[c] += yi * blk[c];
    }
  }
  return out;
}

const words::PermutationSum& cached_m_succ_of_identities(
    const std::vector<int>& orders) {
  static std::map<std::vector<int>, words::PermutationSum> cache;
  static std::mutex mu;
  const std::scoped_lock lock(mu);
  auto it = cache.find(orders);
  if (it == cache.end()) {
    it = cache.emplace(orders, words::m_succ_of_identities(orders)).first;
  }
  return it->second;
}

}  // namespace

PolynomialOneForm::PolynomialOneForm(int dim_in, int dim_out, int degree,
                                     std::vector<std::vector<double>> coeffs)
    : dim_in_(dim_in),
      dim_out_(dim_out),
      degree_(degree),
      coeffs_(std::move(coeffs)) {
  if (dim_in_ < 1 || dim_out_ < 1) {
    throw std::invalid_argument("one-form needs positive dimensions");
  }
  if (degree_ < 0) throw std::invalid_argument("one-form needs degree >= 0");
  if (coeffs_.size() != static_cast<std::size_t>(degree_) + 1) {
    throw std::invalid_argument("one-form needs degree+1 derivative arrays");
  }
  for (int k = 0; k <= degree_; ++k) {
    const std::size_t want =
        static_cast<std::size_t>(dim_out_) * ipow(dim_in_, k + 1);
    if (coeffs_[static_cast<std::size_t>(k)].size() != want) {
      throw std::invalid_argument("derivative array has wrong size");
    }
    for (double x : coeffs_[static_cast<std::size_t>(k)]) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("non-finite derivative coefficient");
      }
    }
  }
}

std::vector<double> PolynomialOneForm::evaluate(
    const std::vector<double>& v, const std::vector<double>& w) const {
  if (v.size() != static_cast<std::size_t>(dim_in_) || v.size() != w.size()) {
    throw std::invalid_argument("evaluate: dimension mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(dim_out_), 0.0);
  double fact = 1.0;
  for (int k = 0; k <= degree_; ++k) {
    if (k > 0) fact *= k;
    std::vector<double> arr = coeffs_[static_cast<std::size_t>(k)];
    std::size_t cols = ipow(dim_in_, k + 1);
    for (int j = 0; j < k; ++j) {
      arr = contract_first_slot(arr, dim_out_, cols, v);
      cols /= static_cast<std::size_t>(dim_in_);
    }
    for (int r = 0; r < dim_out_; ++r) {
      double acc = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        acc += arr[static_cast<std::size_t>(r) * w.size() + j] * w[j];
      }
      out[static_cast<std::size_t>(r)] += acc / fact;
    }
  }
  return out;
}

double PolynomialOneForm::derivative_symmetry_defect() const {
  double worst = 0.0;
  const std::size_t d = static_cast<std::size_t>(dim_in_);
  for (int k = 2; k <= degree_; ++k) {
    const auto& arr = coeffs_[static_cast<std::size_t>(k)];
    const std::size_t cols = ipow(dim_in_, k + 1);
    // Adjacent derivative-slot transpositions generate all of them.
    for (int slot = 0; slot + 1 < k; ++slot) {
      const std::size_t outer = ipow(dim_in_, slot);
      const std::size_t inner = cols / (outer * d * d);
      for (int r = 0; r < dim_out_; ++r) {
        const double* base = arr.data() + static_cast<std::size_t>(r) * cols;
        for (std::size_t o = 0; o < outer; ++o) {
          for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
              for (std::size_t c = 0; c < inner; ++c) {
                const double a = base[((o * d + i) * d + j) * inner + c];
                const double b = base[((o * d + j) * d + i) * inner + c];
                worst = std::max(worst, std::abs(a - b));
              }
            }
          }
        }
      }
    }
  }
  return worst;
}

double l1_operator_norm(const std::vector<double>& a, int rows,
                        std::size_t cols) {
  double worst = 0.0;
  for (std::size_t c = 0; c < cols; ++c) {
    double col = 0.0;
    for (int r = 0; r < rows; ++r) {
      col += std::abs(a[static_cast<std::size_t>(r) * cols + c]);
    }
    worst = std::max(worst, col);
  }
  return worst;
}

PolynomialOneForm shift_base(const PolynomialOneForm& p,
                             const std::vector<double>& x0) {
  if (x0.size() != static_cast<std::size_t>(p.dim_in())) {
    throw std::invalid_argument("shift_base: dimension mismatch");
  }
  const int n = p.degree();
  std::vector<std::vector<double>> out;
  for (int k = 0; k <= n; ++k) {
    std::vector<double> acc(
        static_cast<std::size_t>(p.dim_out()) * ipow(p.dim_in(), k + 1), 0.0);
    double fact = 1.0;
    for (int m = k; m <= n; ++m) {
      if (m > k) fact *= (m - k);
      std::vector<double> arr = p.coeff(m);
      std::size_t cols = ipow(p.dim_in(), m + 1);
      for (int j = 0; j < m - k; ++j) {
        arr = contract_first_slot(arr, p.dim_out(), cols, x0);
        cols /= static_cast<std::size_t>(p.dim_in());
      }
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += arr[i] / fact;
    }
    out.push_back(std::move(acc));
  }
  return PolynomialOneForm(p.dim_in(), p.dim_out(), n, std::move(out));
}

std::vector<double> f_p(const PolynomialOneForm& p,
                        const tensor::GroupElement& g) {
  if (g.dim() != p.dim_in()) {
    throw std::invalid_argument("f_p: dimension mismatch");
  }
  if (g.depth() < p.degree() + 1) {
    throw std::invalid_argument("f_p: series depth below degree+1");
  }
  std::vector<double> out(static_cast<std::size_t>(p.dim_out()), 0.0);
  for (int k = 0; k <= p.degree(); ++k) {
    const auto& arr = p.coeff(k);
    const auto& lvl = g.series().level(k + 1);
    for (int r = 0; r < p.dim_out(); ++r) {
      double acc = 0.0;
      for (std::size_t b = 0; b < lvl.size(); ++b) {
        acc += arr[static_cast<std::size_t>(r) * lvl.size() + b] * lvl[b];
      }
      out[static_cast<std::size_t>(r)] += acc;
    }
  }
  return out;
}

std::vector<SigmaTerm> sigma_l(const PolynomialOneForm& p, int l) {
  if (l < 1) throw std::invalid_argument("sigma_l needs l >= 1");
  std::vector<SigmaTerm> out;
  std::vector<int> ks(static_cast<std::size_t>(l), 0);
  while (true) {
    std::vector<int> orders(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) orders[i] = ks[i] + 1;
    out.push_back({ks, cached_m_succ_of_identities(orders)});
    int pos = l - 1;
    while (pos >= 0 && ks[static_cast<std::size_t>(pos)] == p.degree()) {
      ks[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++ks[static_cast<std::size_t>(pos)];
  }
  return out;
}

GroupElement F_p(const PolynomialOneForm& p, const tensor::GroupElement& s,
                 int out_depth) {
  if (s.dim() != p.dim_in()) {
    throw std::invalid_argument("F_p: dimension mismatch");
  }
  if (out_depth < 0) throw std::invalid_argument("F_p: negative depth");
  if (s.depth() < out_depth * (p.degree() + 1)) {
    throw std::invalid_argument("F_p: input depth below out_depth*(degree+1)");
  }
  const int d = p.dim_in();
  const int e = p.dim_out();
  TruncatedTensorSeries out = TruncatedTensorSeries::unit(e, out_depth);
  for (int l = 1; l <= out_depth; ++l) {
    for (const SigmaTerm& term : sigma_l(p, l)) {
      int K = 0;
      for (int k : term.ks) K += k + 1;
      const TruncatedTensorSeries hat = tensor::s_hat(term.perm_sum, s);
      // Fold the blocks left to right: each step eats d^{k_j+1} letters and
      // emits one U index.
      std::vector<double> cur = hat.level(K);
      std::size_t rows = 1;
      std::size_t rest = ipow(d, K);
      for (int k : term.ks) {
        const std::size_t bs = ipow(d, k + 1);
        const std::size_t rest2 = rest / bs;
        const auto& cf = p.coeff(k);
        std::vector<double> next(
            rows * static_cast<std::size_t>(e) * rest2, 0.0);
        for (std::size_t row = 0; row < rows; ++row) {
          for (int r = 0; r < e; ++r) {
            double* dst =
                next.data() +
                (row * static_cast<std::size_t>(e) + static_cast<std::size_t>(r)) *
                    rest2;
            const double* cfr = cf.data() + static_cast<std::size_t>(r) * bs;
            const double* src = cur.data() + row * rest;
            for (std::size_t c = 0; c < rest2; ++c) {
              double acc = 0.0;
              for (std::size_t b = 0; b < bs; ++b) {
                acc += cfr[b] * src[b * rest2 + c];
              }
              dst[c] = acc;
            }
          }
        }
        cur = std::move(next);
        rows *= static_cast<std::size_t>(e);
        rest = rest2;
      }
      auto& lvl = out.level(l);
      for (std::size_t i = 0; i < lvl.size(); ++i) lvl[i] += cur[i];
    }
  }
  return GroupElement(std::move(out));
}

namespace {

std::vector<double> theta_array(const LipOneFormData& lip, int j,
                                const std::vector<double>& x) {
  const auto arr = lip.stack[static_cast<std::size_t>(j)](x);
  const std::size_t want =
      static_cast<std::size_t>(lip.dim_out) * ipow(lip.dim_in, j + 1);
  if (arr.size() != want) {
    throw std::invalid_argument("lip stack returned wrong array size");
  }
  return arr;
}

}  // namespace

double lip_taylor_defect(const LipOneFormData& lip,
                         const std::vector<double>& x,
                         const std::vector<double>& y) {
  if (x.size() != static_cast<std::size_t>(lip.dim_in) || x.size() != y.size()) {
    throw std::invalid_argument("lip_taylor_defect: dimension mismatch");
  }
  const int top = static_cast<int>(lip.stack.size()) - 1;
  std::vector<double> diff(x.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff[i] = x[i] - y[i];
    dist += std::abs(diff[i]);
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= top; ++j) {
    std::vector<double> rem = theta_array(lip, j, x);
    double fact = 1.0;
    for (int l = 0; j + l <= top; ++l) {
      if (l > 0) fact *= l;
      std::vector<double> arr = theta_array(lip, j + l, y);
      std::size_t cols = ipow(lip.dim_in, j + l + 1);
      for (int m = 0; m < l; ++m) {
        arr = contract_first_slot(arr, lip.dim_out, cols, diff);
        cols /= static_cast<std::size_t>(lip.dim_in);
      }
      for (std::size_t i = 0; i < rem.size(); ++i) rem[i] -= arr[i] / fact;
    }
    const double norm =
        l1_operator_norm(rem, lip.dim_out, ipow(lip.dim_in, j + 1));
    worst = std::max(worst, norm - lip.bound * std::pow(dist, lip.gamma - j));
  }
  return worst;
}

PolynomialOneForm local_taylor_form(const LipOneFormData& lip,
                                    const std::vector<double>& x_s,
                                    int p_cap) {
  if (p_cap < 0) throw std::invalid_argument("local_taylor_form: negative cap");
  if (lip.stack.size() < static_cast<std::size_t>(p_cap) + 1) {
    throw std::invalid_argument("lip stack shorter than requested degree");
  }
  if (x_s.size() != static_cast<std::size_t>(lip.dim_in)) {
    throw std::invalid_argument("local_taylor_form: dimension mismatch");
  }
  std::vector<std::vector<double>> raw;
  for (int k = 0; k <= p_cap; ++k) raw.push_back(theta_array(lip, k, x_s));
  const PolynomialOneForm centered(lip.dim_in, lip.dim_out, p_cap,
                                   std::move(raw));
  std::vector<double> minus(x_s.size());
  for (std::size_t i = 0; i < x_s.size(); ++i) minus[i] = -x_s[i];
  return shift_base(centered, minus);
}

GroupElement almost_multiplicative_Y(const PolynomialOneForm& p_based,
                                     const paths::SampledRoughPath& X,
                                     double s, double t, int out_depth) {
  if (s > t) throw std::invalid_argument("Y increment needs s <= t");
  const GroupElement fs = F_p(p_based, X.at(s), out_depth);
  const GroupElement ft = F_p(p_based, X.at(t), out_depth);
  return inverse(fs) * ft;
}

GroupElement ordered_shuffle_Y(const PolynomialOneForm& p_based,
                               const paths::SampledRoughPath& X, double s,
                               double t, int out_depth) {
  if (s > t) throw std::invalid_argument("Y increment needs s <= t");
  const std::vector<double> xs = X.at(s).series().level(1);
  const PolynomialOneForm q = shift_base(p_based, xs);
  return F_p(q, X.increment(s, t), out_depth);
}

}  // namespace roughalg::oneforms
