#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace roughalg::words {

// Exact coefficients. Everything in this module stays integral: shuffles,
// half-shuffles and the permutation product never divide.
using Int = boost::multiprecision::cpp_int;

// A word over an integer alphabet; letters may repeat. Ordered by length first,
// then lexicographically, so keyed containers hold terms in canonical order.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  int operator[](std::size_t i) const { return letters[i]; }
  int last() const { return letters.back(); }

  Word prefix(std::size_t k) const {
    return Word(std::vector<int>(letters.begin(), letters.begin() + k));
  }
  Word suffix_from(std::size_t k) const {
    return Word(std::vector<int>(letters.begin() + k, letters.end()));
  }
  Word without_last() const { return prefix(letters.size() - 1); }
  Word appended(int letter) const {
    Word w = *this;
    w.letters.push_back(letter);
    return w;
  }

  bool operator==(const Word&) const = default;
  std::strong_ordering operator<=>(const Word& o) const {
    if (letters.size() != o.letters.size())
      return letters.size() <=> o.letters.size();
    return letters <=> o.letters;
  }
};

Word concat(const Word& a, const Word& b);

// Finite Z-linear combination of basis elements in canonical form: zero
// coefficients are never stored. Basis needs strict ordering and equality.
template <class Basis>
class LinearCombination {
 public:
  LinearCombination() = default;

  static LinearCombination zero() { return {}; }
  static LinearCombination term(Basis b, Int c = 1) {
    LinearCombination out;
    out.add(std::move(b), std::move(c));
    return out;
  }

  void add(Basis b, Int c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(b), std::move(c));
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Int coeff(const Basis& b) const {
    auto it = terms_.find(b);
    return it == terms_.end() ? Int(0) : it->second;
  }

  const std::map<Basis, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  LinearCombination& operator+=(const LinearCombination& o) {
    for (const auto& [b, c] : o.terms_) add(b, c);
    return *this;
  }
  LinearCombination& operator-=(const LinearCombination& o) {
    for (const auto& [b, c] : o.terms_) add(b, -c);
    return *this;
  }
  LinearCombination& operator*=(const Int& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [b, v] : terms_) v *= c;
    return *this;
  }
  friend LinearCombination operator+(LinearCombination a, const LinearCombination& b) {
    a += b;
    return a;
  }
  friend LinearCombination operator-(LinearCombination a, const LinearCombination& b) {
    a -= b;
    return a;
  }
  bool operator==(const LinearCombination&) const = default;

 private:
  std::map<Basis, Int> terms_;
};

using WordPolynomial = LinearCombination<Word>;

// u shuffled with v: all interleavings preserving each factor's letter order,
// with multiplicity. Total coefficient mass is binomial(|u|+|v|, |u|).
WordPolynomial shuffle(const Word& u, const Word& v);
WordPolynomial shuffle(const WordPolynomial& p, const WordPolynomial& q);

// All |w|+1 (prefix, suffix) splits of w, in order.
std::vector<std::pair<Word, Word>> deconcat(const Word& w);

// u > v: shuffle of u with v-minus-last, with the last letter of v appended.
// u > e = 0 for nonempty u; e > v = v; the (e, e) pair is outside the domain.
WordPolynomial half_shuffle(const Word& u, const Word& v);
WordPolynomial half_shuffle(const WordPolynomial& p, const WordPolynomial& q);

// Left-nested iterated half-shuffle ((p_1 > p_2) > ...) > p_n; identity on a
// single argument.
WordPolynomial m_succ(const std::vector<WordPolynomial>& ps);

}  // namespace roughalg::words
