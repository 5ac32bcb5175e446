#ifndef CKALG_COCYCLE_HPP
#define CKALG_COCYCLE_HPP

#include <string>
#include <vector>

#include "ckalg/quasifree.hpp"
#include "ckalg/shift.hpp"

namespace ckalg {

// u_0 = 1, u_{k+1} = u_k phi^k(u).
class CocycleChain {
 public:
  static CocycleChain build(const CKAlgebra& alg, const CKElement& u, int K) {
    if (K < 0) fail(ErrorKind::DepthTooSmall, "chain length must be >= 0");
    CocycleChain c(u);
    c.entries_.push_back(alg.unit());
    for (int k = 0; k < K; ++k) c.entries_.push_back(c.entries_.back() * phi_power(alg, u, k));
    if (const auto eta = detail::diagonal_coefficients(u)) {
      for (int k = 0; k <= K; ++k) {
        CKElement closed = alg.zero();
        for (const Word& mu : admissible_words(alg.matrix(), k)) {
          RootScalar e(1);
          for (int l : mu.letters()) e = e * (*eta)[static_cast<std::size_t>(l - 1)];
          closed = closed + e * alg.term(mu, mu);
        }
        if (closed != c.entries_[static_cast<std::size_t>(k)])
          fail(ErrorKind::IdentityFailed, "closed form differs from the recursion at k = " + std::to_string(k));
      }
    }
    return c;
  }

  // Unchecked entries, for negative controls.
  static CocycleChain from_entries(const CKElement& u, std::vector<CKElement> entries) {
    CocycleChain c(u);
    c.entries_ = std::move(entries);
    return c;
  }

  const CKElement& base() const { return u_; }
  const std::vector<CKElement>& entries() const { return entries_; }
  const CKElement& at(int k) const { return entries_.at(static_cast<std::size_t>(k)); }
  int length() const { return static_cast<int>(entries_.size()) - 1; }

 private:
  explicit CocycleChain(CKElement u) : u_(std::move(u)) {}
  CKElement u_;
  std::vector<CKElement> entries_;
};

struct ChainReport {
  int powers_checked = 0;
  int cocycle_checked = 0;
  int commutators_checked = 0;
  int intertwinings_checked = 0;
};

// u_k^n = 1, u_i^* u_{i+j} = phi^i(u_j), [phi^k(u), phi^l(u)] = 0 and
// lambda_u o phi = ad(u) o phi o lambda_u on the s_i.
inline ChainReport chain_identities(const CKAlgebra& alg, const CocycleChain& chain, int n) {
  ChainReport rep;
  const int K = chain.length();
  const CKElement& u = chain.base();
  for (int k = 0; k <= K; ++k) {
    CKElement p = alg.unit();
    for (int e = 0; e < n; ++e) p = p * chain.at(k);
    if (p != alg.unit()) fail(ErrorKind::IdentityFailed, "u_k^n = 1 fails at k = " + std::to_string(k));
    ++rep.powers_checked;
  }
  for (int i = 0; i <= K; ++i)
    for (int j = 0; i + j <= K; ++j) {
      if (chain.at(i).adjoint() * chain.at(i + j) != phi_power(alg, chain.at(j), i))
        fail(ErrorKind::IdentityFailed, "u_i^* u_{i+j} = phi^i(u_j) fails at (i, j) = (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      ++rep.cocycle_checked;
    }
  std::vector<CKElement> shifted;
  for (int k = 0; k <= K; ++k) shifted.push_back(phi_power(alg, u, k));
  for (int k = 0; k <= K; ++k)
    for (int l = k + 1; l <= K; ++l) {
      const auto& a = shifted[static_cast<std::size_t>(k)];
      const auto& b = shifted[static_cast<std::size_t>(l)];
      if (a * b != b * a) fail(ErrorKind::IdentityFailed, "[phi^k(u), phi^l(u)] = 0 fails at (k, l) = (" + std::to_string(k) + ", " + std::to_string(l) + ")");
      ++rep.commutators_checked;
    }
  for (int i = 1; i <= alg.n(); ++i) {
    const CKElement lhs = lambda_apply(alg, u, phi(alg, alg.s(i)));
    const CKElement rhs = u * phi(alg, lambda_apply(alg, u, alg.s(i))) * u.adjoint();
    if (lhs != rhs) fail(ErrorKind::IdentityFailed, "intertwining fails on s_" + std::to_string(i));
    ++rep.intertwinings_checked;
  }
  return rep;
}

}  // namespace ckalg

#endif  // CKALG_COCYCLE_HPP
