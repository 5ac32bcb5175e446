#ifndef CKALG_TESTS_FIXTURES_HPP
#define CKALG_TESTS_FIXTURES_HPP

#include <random>

#include "ckalg/element.hpp"

namespace fixtures {

inline ckalg::ZeroOneMatrix fibonacci() { return ckalg::ZeroOneMatrix::validate({{1, 1}, {1, 0}}); }
inline ckalg::ZeroOneMatrix full(int n) { return ckalg::ZeroOneMatrix::full(n); }
inline ckalg::ZeroOneMatrix flip() { return ckalg::ZeroOneMatrix::validate({{0, 1}, {1, 0}}); }
inline ckalg::ZeroOneMatrix three_classes() { return ckalg::ZeroOneMatrix::validate({{1, 1, 1}, {1, 1, 0}, {1, 1, 0}}); }

// Random element built from words up to `max_len` with coefficients in
// Q(zeta_12): small rationals times powers of zeta_12.
inline ckalg::CKElement random_element(const ckalg::CKAlgebra& alg, std::mt19937_64& rng, int terms, int max_len,
                                       bool degree_zero = false) {
  using namespace ckalg;
  std::uniform_int_distribution<int> len(0, max_len), pick_root(0, 11), pick_num(-3, 3);
  TermMap raw;
  for (int t = 0; t < terms; ++t) {
    auto random_word = [&](int k) {
      std::vector<Word> words = admissible_words(alg.matrix(), k);
      return words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
    };
    const int k1 = len(rng);
    const int k2 = degree_zero ? k1 : len(rng);
    const WordPair p{random_word(k1), random_word(k2)};
    int num = pick_num(rng);
    if (num == 0) num = 1;
    raw[p] += RootScalar(num) * RootScalar::root_of_unity(12, pick_root(rng));
  }
  return CKElement::from_terms(alg.matrix_ptr(), raw);
}

}  // namespace fixtures

#endif  // CKALG_TESTS_FIXTURES_HPP
