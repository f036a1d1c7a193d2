#include "roughalg/permutations.hpp"

#include <algorithm>
#include <numeric>

namespace roughalg::words {

namespace {

// Word of rho with every letter shifted up by n, so it is letter-disjoint from
// words over {1..n}.
Word shifted_word(const Permutation& rho, int n) {
  std::vector<int> ls = rho.images();
  for (int& l : ls) l += n;
  return Word(std::move(ls));
}

PermutationSum to_permutations(const WordPolynomial& p) {
  PermutationSum out;
  for (const auto& [w, c] : p.terms()) out.add(Permutation(w.letters), c);
  return out;
}

}  // namespace

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 1 || v > static_cast<int>(images_.size()) || seen[v - 1])
      throw std::invalid_argument("Permutation: images are not a bijection of 1..n");
    seen[v - 1] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 1);
  return Permutation(std::move(images));
}

Permutation standardize(const Word& s) {
  const std::size_t n = s.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return s[a] < s[b]; });
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (s[order[i]] == s[order[i + 1]])
      throw std::invalid_argument("standardize: entries must be distinct");
  std::vector<int> ranks(n);
  for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r) + 1;
  return Permutation(std::move(ranks));
}

Word apply_perm(const Permutation& sigma, const Word& w) {
  if (static_cast<int>(w.size()) != sigma.order())
    throw std::invalid_argument("apply_perm: word length differs from order");
  std::vector<int> ls(w.size());
  for (int i = 1; i <= sigma.order(); ++i) ls[i - 1] = w[sigma(i) - 1];
  return Word(std::move(ls));
}

PermutationSum perm_product(const Permutation& sigma, const Permutation& rho) {
  return to_permutations(
      shuffle(sigma.as_word(), shifted_word(rho, sigma.order())));
}

PermutationSum perm_product(const PermutationSum& a, const PermutationSum& b) {
  PermutationSum out;
  for (const auto& [s, cs] : a.terms())
    for (const auto& [r, cr] : b.terms()) {
      PermutationSum p = perm_product(s, r);
      p *= cs * cr;
      out += p;
    }
  return out;
}

PermutationSum half_shuffle(const Permutation& sigma, const Permutation& rho) {
  if (sigma.order() == 0 && rho.order() == 0)
    throw std::invalid_argument("half_shuffle: (lambda, lambda) is outside the domain");
  if (rho.order() == 0) return PermutationSum::zero();
  return to_permutations(
      half_shuffle(sigma.as_word(), shifted_word(rho, sigma.order())));
}

PermutationSum half_shuffle(const PermutationSum& a, const PermutationSum& b) {
  if (a.coeff(Permutation{}) != 0 && b.coeff(Permutation{}) != 0)
    throw std::invalid_argument("half_shuffle: both arguments have lambda terms");
  PermutationSum out;
  for (const auto& [s, cs] : a.terms())
    for (const auto& [r, cr] : b.terms()) {
      PermutationSum p = half_shuffle(s, r);
      p *= cs * cr;
      out += p;
    }
  return out;
}

PermutationSum m_succ(const std::vector<PermutationSum>& rs) {
  if (rs.empty()) throw std::invalid_argument("m_succ: needs at least one argument");
  PermutationSum acc = rs.front();
  for (std::size_t i = 1; i < rs.size(); ++i) acc = half_shuffle(acc, rs[i]);
  return acc;
}

PermutationSum m_succ_of_identities(const std::vector<int>& orders) {
  std::vector<PermutationSum> rs;
  rs.reserve(orders.size());
  for (int n : orders)
    rs.push_back(PermutationSum::term(Permutation::identity(n)));
  return m_succ(rs);
}

std::vector<CoproductTerm> mr_coproduct(const Permutation& sigma) {
  std::vector<CoproductTerm> out;
  out.reserve(sigma.order() + 1);
  for (const auto& [l, r] : deconcat(sigma.as_word()))
    out.push_back({standardize(l), standardize(r)});
  return out;
}

Permutation block_swap(int k1, int k2, int n1, int n2) {
  if (n2 < 1 || k1 < 0 || k1 > n1 || k2 < 0 || k2 > n2)
    throw std::invalid_argument("block_swap: index ranges violated");
  std::vector<int> images;
  images.reserve(n1 + n2);
  for (int i = 1; i <= k1; ++i) images.push_back(i);
  for (int i = k1 + k2 + 1; i <= n1 + k2; ++i) images.push_back(i);
  for (int i = k1 + 1; i <= k1 + k2; ++i) images.push_back(i);
  for (int i = n1 + k2 + 1; i <= n1 + n2; ++i) images.push_back(i);
  return Permutation(std::move(images));
}

bool lemma1_check(const std::vector<WordPolynomial>& ps, int n) {
  const int total = static_cast<int>(ps.size());
  const int m = total - n;
  if (n < 1 || m < 1) throw std::invalid_argument("lemma1_check: need n, m >= 1");
  for (const auto& p : ps)
    if (p.coeff(Word{}) != 0)
      throw std::invalid_argument("lemma1_check: arguments must have no constant term");

  WordPolynomial lhs = shuffle(
      m_succ(std::vector<WordPolynomial>(ps.begin(), ps.begin() + n)),
      m_succ(std::vector<WordPolynomial>(ps.begin() + n, ps.end())));

  WordPolynomial rhs;
  const PermutationSum interleavings =
      perm_product(Permutation::identity(n), Permutation::identity(m));
  for (const auto& [rho, c] : interleavings.terms()) {
    std::vector<WordPolynomial> permuted;
    permuted.reserve(total);
    for (int i = 1; i <= total; ++i) permuted.push_back(ps[rho(i) - 1]);
    WordPolynomial t = m_succ(permuted);
    t *= c;
    rhs += t;
  }
  return lhs == rhs;
}

}  // namespace roughalg::words
