#include "roughalg/words.hpp"

namespace roughalg::words {

Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

WordPolynomial shuffle(const Word& u, const Word& v) {
  if (u.empty()) return WordPolynomial::term(v);
  if (v.empty()) return WordPolynomial::term(u);
  // sh(w1 a, w2 b) = sh(w1 a, w2) b + sh(w1, w2 b) a
  WordPolynomial out;
  const WordPolynomial left = shuffle(u, v.without_last());
  for (const auto& [w, c] : left.terms()) out.add(w.appended(v.last()), c);
  const WordPolynomial right = shuffle(u.without_last(), v);
  for (const auto& [w, c] : right.terms()) out.add(w.appended(u.last()), c);
  return out;
}

WordPolynomial shuffle(const WordPolynomial& p, const WordPolynomial& q) {
  WordPolynomial out;
  for (const auto& [u, cu] : p.terms())
    for (const auto& [v, cv] : q.terms()) {
      WordPolynomial s = shuffle(u, v);
      s *= cu * cv;
      out += s;
    }
  return out;
}

std::vector<std::pair<Word, Word>> deconcat(const Word& w) {
  std::vector<std::pair<Word, Word>> splits;
  splits.reserve(w.size() + 1);
  for (std::size_t k = 0; k <= w.size(); ++k)
    splits.emplace_back(w.prefix(k), w.suffix_from(k));
  return splits;
}

WordPolynomial half_shuffle(const Word& u, const Word& v) {
  if (v.empty()) {
    if (u.empty())
      throw std::invalid_argument("half_shuffle: (e, e) is outside the domain");
    return WordPolynomial::zero();
  }
  WordPolynomial out;
  const WordPolynomial sh = shuffle(u, v.without_last());
  for (const auto& [w, c] : sh.terms()) out.add(w.appended(v.last()), c);
  return out;
}

WordPolynomial half_shuffle(const WordPolynomial& p, const WordPolynomial& q) {
  if (p.coeff(Word{}) != 0 && q.coeff(Word{}) != 0)
    throw std::invalid_argument("half_shuffle: both arguments have constant terms");
  WordPolynomial out;
  for (const auto& [u, cu] : p.terms())
    for (const auto& [v, cv] : q.terms()) {
      WordPolynomial s = half_shuffle(u, v);
      s *= cu * cv;
      out += s;
    }
  return out;
}

WordPolynomial m_succ(const std::vector<WordPolynomial>& ps) {
  if (ps.empty()) throw std::invalid_argument("m_succ: needs at least one argument");
  WordPolynomial acc = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) acc = half_shuffle(acc, ps[i]);
  return acc;
}

}  // namespace roughalg::words
