#pragma once

#include <random>
#include <vector>

#include "roughalg/one_forms.hpp"
#include "roughalg/tensor_series.hpp"

// Shared generators for randomized tests. Everything is seeded explicitly so
// failures reproduce.
namespace testhelpers {

using roughalg::tensor::GroupElement;
using roughalg::tensor::TruncatedTensorSeries;

inline TruncatedTensorSeries letter_series(int a, int dim, int depth) {
  TruncatedTensorSeries s(dim, depth);
  s.level(1)[static_cast<std::size_t>(a)] = 1.0;
  return s;
}

// Left-normed bracket of a word: B(a) = e_a, B(wa) = B(w)e_a - e_a B(w).
// Vanishes when the word repeats its last letter; callers don't care.
inline TruncatedTensorSeries bracket_of_word(const std::vector<int>& w, int dim,
                                             int depth) {
  TruncatedTensorSeries cur = letter_series(w[0], dim, depth);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const TruncatedTensorSeries e = letter_series(w[i], dim, depth);
    TruncatedTensorSeries next = roughalg::tensor::conc_mul(cur, e);
    const TruncatedTensorSeries swapped = roughalg::tensor::conc_mul(e, cur);
    next -= swapped;
    cur = next;
  }
  return cur;
}

inline TruncatedTensorSeries random_lie(int dim, int depth,
                                        std::mt19937_64& rng,
                                        double scale = 0.5) {
  std::uniform_real_distribution<double> coeff(-scale, scale);
  std::uniform_int_distribution<int> pick(0, dim - 1);
  TruncatedTensorSeries out(dim, depth);
  for (int len = 1; len <= depth; ++len) {
    std::vector<int> w(static_cast<std::size_t>(len));
    for (auto& x : w) x = pick(rng);
    TruncatedTensorSeries b = bracket_of_word(w, dim, depth);
    b.scale(coeff(rng));
    out += b;
  }
  return out;
}

inline GroupElement random_group_like(int dim, int depth, std::mt19937_64& rng,
                                      double scale = 0.5) {
  return roughalg::tensor::exp(random_lie(dim, depth, rng, scale));
}

// Lip data whose stack is the derivative family of a fixed polynomial form.
inline roughalg::oneforms::LipOneFormData lip_from_polynomial(
    const roughalg::oneforms::PolynomialOneForm& p, double gamma,
    double bound) {
  roughalg::oneforms::LipOneFormData lip;
  lip.dim_in = p.dim_in();
  lip.dim_out = p.dim_out();
  lip.gamma = gamma;
  lip.bound = bound;
  for (int j = 0; j <= p.degree(); ++j) {
    lip.stack.push_back([p, j](const std::vector<double>& x) {
      return roughalg::oneforms::shift_base(p, x).coeff(j);
    });
  }
  return lip;
}

inline TruncatedTensorSeries random_series(int dim, int depth,
                                           std::mt19937_64& rng,
                                           double scale = 1.0) {
  std::uniform_real_distribution<double> coeff(-scale, scale);
  TruncatedTensorSeries out(dim, depth);
  for (int k = 0; k <= depth; ++k) {
    for (auto& x : out.level(k)) x = coeff(rng);
  }
  return out;
}

}  // namespace testhelpers
