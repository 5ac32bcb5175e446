#ifndef CKALG_SHIFT_HPP
#define CKALG_SHIFT_HPP

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "ckalg/core.hpp"

namespace ckalg {

// phi(x) = sum_i s_i x s_i^*
inline CKElement phi(const CKAlgebra& alg, const CKElement& x) {
  CKElement out = alg.zero();
  for (int i = 1; i <= alg.n(); ++i) out = out + alg.s(i) * x * alg.s_star(i);
  return out;
}

inline CKElement phi_iterate(const CKAlgebra& alg, CKElement x, int k) {
  for (int i = 0; i < k; ++i) x = phi(alg, x);
  return x;
}

// phi^k(x) = sum_{nu in W^k} s_nu x s_nu^*, checked against the iterate when
// `check` is set.
inline CKElement phi_power(const CKAlgebra& alg, const CKElement& x, int k, bool check = false) {
  if (k < 0) fail(ErrorKind::DepthTooSmall, "phi_power needs k >= 0");
  CKElement out = alg.zero();
  for (const Word& nu : admissible_words(alg.matrix(), k)) out = out + alg.term(nu, {}) * x * alg.term({}, nu);
  if (check && out != phi_iterate(alg, x, k)) fail(ErrorKind::IdentityFailed, "closed form of phi^k differs from the iterate");
  return out;
}

inline bool in_diagonal_commutant(const CKAlgebra& alg, const CKElement& x) {
  if (!x.is_homogeneous() || (!x.has_no_terms() && x.degree() != 0)) return false;
  for (int i = 1; i <= alg.n(); ++i)
    if (x * alg.q(i) != alg.q(i) * x) return false;
  return true;
}

struct InjectivityWitness {
  int letter;
  CKElement certificate;  // p_j phi(x)
};

inline InjectivityWitness injectivity_witness(const CKAlgebra& alg, const CKElement& x) {
  if (x.is_zero()) fail(ErrorKind::ZeroInput, "injectivity witness needs x != 0");
  if (!in_diagonal_commutant(alg, x)) fail(ErrorKind::NotInCommutant, "x does not commute with every q_i");
  const CKElement image = phi(alg, x);
  for (int j = 1; j <= alg.n(); ++j) {
    if ((x * alg.q(j)).is_zero()) continue;
    CKElement cert = alg.p(j) * image;
    if (!cert.is_zero()) return {j, std::move(cert)};
  }
  fail(ErrorKind::IdentityFailed, "no letter j with p_j phi(x) != 0");
}

// Minimal projection r_c for a 1-based column-class index.
inline CKElement class_projection(const CKAlgebra& alg, int c) {
  const auto classes = alg.matrix().column_classes();
  if (c < 1 || c > static_cast<int>(classes.size()))
    fail(ErrorKind::IndexOutOfRange, "class index " + std::to_string(c) + " outside 1.." + std::to_string(classes.size()));
  CKElement r = alg.zero();
  for (int l : classes[static_cast<std::size_t>(c - 1)]) r = r + alg.p(l);
  return r;
}

// W^k_{j,i}: words of length k starting in class j whose last letter t has
// r_i <= q_t.
inline std::vector<Word> corner_words(const CKAlgebra& alg, int j, int i, int k) {
  const auto classes = alg.matrix().column_classes();
  if (j < 1 || j > static_cast<int>(classes.size()) || i < 1 || i > static_cast<int>(classes.size()))
    fail(ErrorKind::IndexOutOfRange, "class index outside 1.." + std::to_string(classes.size()));
  const auto& cj = classes[static_cast<std::size_t>(j - 1)];
  const int rep = classes[static_cast<std::size_t>(i - 1)].front();
  std::set<int> first(cj.begin(), cj.end()), last;
  for (int t = 1; t <= alg.n(); ++t)
    if (alg.matrix()(t, rep)) last.insert(t);
  return admissible_words(alg.matrix(), k, first, last);
}

struct CornerReport {
  bool equal;
  CKElement lhs;  // r_j phi^k(r_i x r_i) r_j
  CKElement rhs;  // sum over W^k_{j,i} of s_nu (r_i x r_i) s_nu^*
  std::vector<Word> words;
};

inline CornerReport corner_formula_check(const CKAlgebra& alg, int i, int j, int k, const CKElement& x) {
  if (k < 1) fail(ErrorKind::DepthTooSmall, "corner formula needs k >= 1");
  const CKElement ri = class_projection(alg, i), rj = class_projection(alg, j);
  const CKElement middle = ri * x * ri;
  CornerReport out{false, rj * phi_power(alg, middle, k) * rj, alg.zero(), corner_words(alg, j, i, k)};
  for (const Word& nu : out.words) out.rhs = out.rhs + alg.term(nu, {}) * middle * alg.term({}, nu);
  out.equal = out.lhs == out.rhs;
  return out;
}

struct FullnessWitness {
  int m;
  Word mu;
  int s;
  int t;
  CKElement certificate;  // s_mu^* s_mu x s_mu^* s_mu = q_t x q_t
  CKElement contraction;  // s_mu^* (r_j phi^m(r_i x r_i) r_j) s_mu = r_i x r_i
};

inline FullnessWitness fullness_witness(const CKAlgebra& alg, int i, int j, const CKElement& x) {
  const auto m0 = is_aperiodic(alg.matrix());
  if (!m0) fail(ErrorKind::NotAperiodic, "fullness witness needs an aperiodic matrix");
  const CKElement ri = class_projection(alg, i), rj = class_projection(alg, j);
  if ((x * ri).is_zero()) fail(ErrorKind::ZeroCorner, "x r_i = 0");
  const auto classes = alg.matrix().column_classes();
  const int s = classes[static_cast<std::size_t>(j - 1)].front();
  const int rep = classes[static_cast<std::size_t>(i - 1)].front();
  int t = 0;
  for (int c = 1; c <= alg.n() && t == 0; ++c)
    if (alg.matrix()(c, rep)) t = c;
  for (int m = *m0; m <= *m0 + 1; ++m) {
    const auto words = admissible_words(alg.matrix(), m, std::set<int>{s}, std::set<int>{t});
    if (words.empty()) continue;
    const Word& mu = words.front();
    const CKElement smu = alg.term(mu, {});
    const CKElement src = smu.adjoint() * smu;
    FullnessWitness out{m, mu, s, t, src * x * src, alg.zero()};
    const CKElement corner = rj * phi_power(alg, ri * x * ri, m) * rj;
    out.contraction = smu.adjoint() * corner * smu;
    if (out.certificate.is_zero() || out.certificate != alg.q(t) * x * alg.q(t))
      fail(ErrorKind::IdentityFailed, "s_mu^* s_mu x s_mu^* s_mu != q_t x q_t");
    if (out.contraction != ri * x * ri) fail(ErrorKind::IdentityFailed, "corner contraction differs from r_i x r_i");
    return out;
  }
  fail(ErrorKind::IdentityFailed, "no word from s to t of length m0 or m0 + 1");
}

struct PreimageVerdict {
  int target;
  bool solvable;
  CKElement candidate;  // forced candidate q_i
  CKElement image;      // phi(q_i), compared with p_i
};

// Any commutant x with phi(x) = p_i must equal q_i; check phi(q_i) = p_i.
inline PreimageVerdict solve_phi_preimage(const CKAlgebra& alg, int i) {
  const CKElement cand = alg.q(i);
  CKElement image = phi(alg, cand);
  const bool ok = image == alg.p(i);
  return {i, ok, cand, std::move(image)};
}

struct SurjectivityReport {
  std::vector<PreimageVerdict> verdicts;
  bool all_solvable;
  bool permutation;
};

inline SurjectivityReport surjectivity_report(const CKAlgebra& alg) {
  SurjectivityReport out{{}, true, is_permutation(alg.matrix())};
  for (int i = 1; i <= alg.n(); ++i) {
    out.verdicts.push_back(solve_phi_preimage(alg, i));
    out.all_solvable = out.all_solvable && out.verdicts.back().solvable;
  }
  if (out.all_solvable != out.permutation) fail(ErrorKind::IdentityFailed, "preimage verdict disagrees with the permutation test");
  return out;
}

// Stage picture of the dilation: (l, x) stands for the class of x entering at
// stage l, with (l, x) ~ (l+1, phi(x)).
struct DilationElement {
  int stage;
  CKElement x;
};

inline DilationElement dilation_make(const CKAlgebra& alg, int stage, const CKElement& x) {
  if (stage < 0) fail(ErrorKind::DepthTooSmall, "stage must be >= 0");
  if (!in_diagonal_commutant(alg, x)) fail(ErrorKind::NotInCommutant, "dilation entries must lie in the diagonal commutant");
  return {stage, x};
}

// Compares at stage max(l, m). phi is injective on the commutant, so one
// comparison decides; a stage gap beyond the budget is reported instead.
inline bool dilation_equals(const CKAlgebra& alg, const DilationElement& a, const DilationElement& b, int budget = 8) {
  const int gap = std::abs(a.stage - b.stage);
  if (gap > budget) fail(ErrorKind::ProbeExceeded, "stage gap " + std::to_string(gap) + " exceeds probe budget " + std::to_string(budget));
  const int top = std::max(a.stage, b.stage);
  return phi_iterate(alg, a.x, top - a.stage) == phi_iterate(alg, b.x, top - b.stage);
}

inline DilationElement dilation_apply(const CKAlgebra& alg, const DilationElement& a) { return {a.stage, phi(alg, a.x)}; }
inline DilationElement dilation_apply_inverse(const DilationElement& a) { return {a.stage + 1, a.x}; }

}  // namespace ckalg

#endif  // CKALG_SHIFT_HPP
