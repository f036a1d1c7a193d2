#pragma once

#include "roughalg/words.hpp"

namespace roughalg::words {

// One-line notation: images()[i-1] is the image of i, a bijection of {1..n}.
// Order 0 encodes the unit permutation lambda.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);  // validates the bijection
  static Permutation identity(int n);

  int order() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i - 1]; }
  const std::vector<int>& images() const { return images_; }
  Word as_word() const { return Word(images_); }

  bool operator==(const Permutation&) const = default;
  std::strong_ordering operator<=>(const Permutation& o) const {
    if (images_.size() != o.images_.size())
      return images_.size() <=> o.images_.size();
    return images_ <=> o.images_;
  }

 private:
  std::vector<int> images_;
};

using PermutationSum = LinearCombination<Permutation>;

// The permutation whose word is the rank pattern of s; entries must be distinct.
Permutation standardize(const Word& s);

// sigma acting on positions: result_i = w_{sigma(i)}. Requires |w| = order(sigma).
Word apply_perm(const Permutation& sigma, const Word& w);

// sigma *' rho: shuffle of sigma's word with rho's word shifted up by
// order(sigma). Supported on S_{n+m}, binomial(n+m, n) terms; lambda is the unit.
PermutationSum perm_product(const Permutation& sigma, const Permutation& rho);
PermutationSum perm_product(const PermutationSum& a, const PermutationSum& b);

// sigma > rho: half-shuffle against the shifted rho, so every term ends in
// n + rho(m). sigma > lambda = 0; the (lambda, lambda) pair is rejected.
PermutationSum half_shuffle(const Permutation& sigma, const Permutation& rho);
PermutationSum half_shuffle(const PermutationSum& a, const PermutationSum& b);

// Left-nested iterated half-shuffle.
PermutationSum m_succ(const std::vector<PermutationSum>& rs);
// m_succ over identity permutations of the given orders.
PermutationSum m_succ_of_identities(const std::vector<int>& orders);

struct CoproductTerm {
  Permutation left, right;
};
// Standardized deconcatenation splits of sigma's word, in split order; all
// order()+1 terms carry coefficient 1.
std::vector<CoproductTerm> mr_coproduct(const Permutation& sigma);

// The permutation of S_{n1+n2} exchanging the contiguous blocks
// (k1+1..k1+k2) and (k1+k2+1..n1+k2), fixing everything else.
// Requires 0 <= k1 <= n1, 0 <= k2 <= n2, n2 >= 1 (both blocks must fit).
Permutation block_swap(int k1, int k2, int n1, int n2);

// Whether sh(m_succ(p_1..p_n), m_succ(p_{n+1}..p_{n+m})) equals the sum of
// m_succ(p_{rho(1)},...,p_{rho(n+m)}) over the interleavings rho in 1_n *' 1_m.
// Exact comparison; each p_i must have zero coefficient on the empty word.
bool lemma1_check(const std::vector<WordPolynomial>& ps, int n);

}  // namespace roughalg::words
