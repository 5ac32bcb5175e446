#ifndef CKALG_QUASIFREE_HPP
#define CKALG_QUASIFREE_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ckalg/core.hpp"

namespace ckalg {

// Images sigma(s_1), ..., sigma(s_n) of a candidate unital endomorphism.
struct EndoSpec {
  std::vector<CKElement> images;
};

namespace detail {

// s_mu -> image of s_mu under the endomorphism determined by `gens`, cached.
class WordImages {
 public:
  WordImages(const CKAlgebra& alg, const std::vector<CKElement>& gens) : alg_(alg), gens_(gens) {}

  const CKElement& of(const Word& w) {
    if (auto it = cache_.find(w); it != cache_.end()) return it->second;
    CKElement img = alg_.unit();
    if (!w.empty()) img = gens_[static_cast<std::size_t>(w.front() - 1)] * of(w.suffix_from(1));
    return cache_.emplace(w, std::move(img)).first->second;
  }

 private:
  const CKAlgebra& alg_;
  const std::vector<CKElement>& gens_;
  std::map<Word, CKElement> cache_;
};

// eta_i when u = sum eta_i p_i, read off the canonical terms.
inline std::optional<std::vector<RootScalar>> diagonal_coefficients(const CKElement& u) {
  const int n = u.matrix().size();
  std::vector<RootScalar> eta(static_cast<std::size_t>(n), RootScalar(0));
  for (const auto& [p, c] : u.terms()) {
    if (p.mu != p.nu || p.mu.size() > 1) return std::nullopt;
    if (p.mu.empty()) {
      for (auto& e : eta) e += c;
    } else {
      eta[static_cast<std::size_t>(p.mu.front() - 1)] += c;
    }
  }
  return eta;
}

}  // namespace detail

// Image of x under the endomorphism s_i -> gens[i-1].
inline CKElement apply_endo(const CKAlgebra& alg, const std::vector<CKElement>& gens, const CKElement& x) {
  detail::WordImages images(alg, gens);
  CKElement out = alg.zero();
  for (const auto& [p, c] : x.terms()) out = out + c * (images.of(p.mu) * images.of(p.nu).adjoint());
  return out;
}

inline CKElement apply_endo(const CKAlgebra& alg, const EndoSpec& sigma, const CKElement& x) {
  return apply_endo(alg, sigma.images, x);
}

// sigma o rho on generators.
inline EndoSpec compose(const CKAlgebra& alg, const EndoSpec& sigma, const EndoSpec& rho) {
  EndoSpec out;
  for (const auto& img : rho.images) out.images.push_back(apply_endo(alg, sigma, img));
  return out;
}

// lambda_u(s_i) = u s_i. Diagonal u takes the closed form
// lambda_u(s_mu s_nu^*) = eta_mu conj(eta_nu) s_mu s_nu^*.
inline CKElement lambda_apply(const CKAlgebra& alg, const CKElement& u, const CKElement& x) {
  CKElement::check_same(u, x);
  if (const auto eta = detail::diagonal_coefficients(u)) {
    auto weight = [&](const Word& w) {
      RootScalar out(1);
      for (int l : w.letters()) out = out * (*eta)[static_cast<std::size_t>(l - 1)];
      return out;
    };
    TermMap raw;
    for (const auto& [p, c] : x.terms()) raw[p] = c * weight(p.mu) * weight(p.nu).conj();
    return CKElement::from_terms(alg.matrix_ptr(), raw);
  }
  std::vector<CKElement> gens;
  for (int i = 1; i <= alg.n(); ++i) gens.push_back(u * alg.s(i));
  return apply_endo(alg, gens, x);
}

inline EndoSpec endo_of_unitary(const CKAlgebra& alg, const CKElement& u) {
  EndoSpec out;
  for (int i = 1; i <= alg.n(); ++i) out.images.push_back(u * alg.s(i));
  return out;
}

// Checks the defining relations on the images and that every q_i is fixed.
inline void verify_endo(const CKAlgebra& alg, const EndoSpec& sigma) {
  const int n = alg.n();
  if (static_cast<int>(sigma.images.size()) != n)
    fail(ErrorKind::DimensionMismatch, "endomorphism needs " + std::to_string(n) + " images");
  const auto& t = sigma.images;
  CKElement range_sum = alg.zero();
  for (int i = 1; i <= n; ++i) {
    const CKElement& ti = t[static_cast<std::size_t>(i - 1)];
    range_sum = range_sum + ti * ti.adjoint();
    for (int j = 1; j <= n; ++j)
      if (i != j && !(ti.adjoint() * t[static_cast<std::size_t>(j - 1)]).is_zero())
        fail(ErrorKind::NotAnEndomorphism, "relation s_i^* s_j = 0 fails for (i, j) = (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    CKElement rhs = alg.zero();
    for (int j = 1; j <= n; ++j)
      if (alg.matrix()(i, j)) rhs = rhs + t[static_cast<std::size_t>(j - 1)] * t[static_cast<std::size_t>(j - 1)].adjoint();
    const CKElement source = ti.adjoint() * ti;
    if (source != rhs) fail(ErrorKind::NotAnEndomorphism, "relation s_i^* s_i = sum_j A(i,j) s_j s_j^* fails for i = " + std::to_string(i));
    if (source != alg.q(i)) fail(ErrorKind::NotAnEndomorphism, "q_" + std::to_string(i) + " is not fixed");
  }
  if (range_sum != alg.unit()) fail(ErrorKind::NotAnEndomorphism, "sum of range projections is not 1");
}

// A unitary of B = span{s_i s_j^*} commuting with every q_i.
class QFUnitary {
 public:
  static QFUnitary validate(const CKElement& u) {
    if (!u.is_homogeneous() || u.has_no_terms() || u.degree() != 0 || u.max_word_length() > 1)
      fail(ErrorKind::NotInCommutant, "unitary must lie in span{s_i s_j^*}");
    const CKAlgebra alg(u.matrix_ptr());
    if (u * u.adjoint() != alg.unit() || u.adjoint() * u != alg.unit()) fail(ErrorKind::NotUnitary, "u u^* = u^* u = 1 fails");
    for (int i = 1; i <= alg.n(); ++i)
      if (u * alg.q(i) != alg.q(i) * u) fail(ErrorKind::NotInCommutant, "u does not commute with q_" + std::to_string(i));
    return QFUnitary(u);
  }

  const CKElement& element() const { return u_; }

 private:
  explicit QFUnitary(CKElement u) : u_(std::move(u)) {}
  CKElement u_;
};

// u_sigma = sum sigma(s_i) s_i^*
inline QFUnitary unitary_of_endo(const CKAlgebra& alg, const EndoSpec& sigma) {
  verify_endo(alg, sigma);
  CKElement u = alg.zero();
  for (int i = 1; i <= alg.n(); ++i) u = u + sigma.images[static_cast<std::size_t>(i - 1)] * alg.s_star(i);
  return QFUnitary::validate(u);
}

// sigma(s_i) in span{s_1..s_n} for all i, and q_i fixed.
inline bool is_diagonal_quasi_free(const CKAlgebra& alg, const EndoSpec& sigma) {
  for (int i = 1; i <= alg.n(); ++i) {
    const CKElement& img = sigma.images[static_cast<std::size_t>(i - 1)];
    for (const auto& [p, c] : img.terms())
      if (p.mu.size() != 1 || !p.nu.empty()) return false;
    if (img.adjoint() * img != alg.q(i)) return false;
  }
  return true;
}

// sigma(u_rho) u_sigma, asserted equal to u_{sigma o rho}.
inline QFUnitary convolution_unitary(const CKAlgebra& alg, const EndoSpec& sigma, const EndoSpec& rho) {
  const QFUnitary us = unitary_of_endo(alg, sigma);
  const QFUnitary ur = unitary_of_endo(alg, rho);
  const CKElement conv = apply_endo(alg, sigma, ur.element()) * us.element();
  const QFUnitary composed = unitary_of_endo(alg, compose(alg, sigma, rho));
  if (conv != composed.element()) fail(ErrorKind::NotAnEndomorphism, "convolution law fails");
  return composed;
}

// G = Z_{n_1} x ... x Z_{n_r}; generator t acts by s_i -> zeta_{n_t}^{a_{t,i}} s_i.
struct ActionSpec {
  std::vector<int> orders;
  // eta_{t,i} = zeta_{root(t)}^{exponents[t][i-1]}; root(t) = orders[t] unless
  // a file entry named another root of unity.
  std::vector<std::vector<long>> exponents;
  std::vector<int> roots;

  std::size_t generators() const { return orders.size(); }
  int root(std::size_t t) const { return roots.empty() ? orders[t] : roots[t]; }
  RootScalar eta(std::size_t t, int letter) const {
    return RootScalar::root_of_unity(root(t), exponents[t][static_cast<std::size_t>(letter - 1)]);
  }
  // eta_{t,mu}
  RootScalar eta(std::size_t t, const Word& w) const { return RootScalar::root_of_unity(root(t), character(t, w)); }
  long character(std::size_t t, const Word& w) const {
    long e = 0;
    for (int l : w.letters()) e += exponents[t][static_cast<std::size_t>(l - 1)];
    const long n = root(t);
    return ((e % n) + n) % n;
  }
  CKElement unitary(const CKAlgebra& alg, std::size_t t) const {
    CKElement u = alg.zero();
    for (int i = 1; i <= alg.n(); ++i) u = u + eta(t, i) * alg.p(i);
    return u;
  }
  int field_order() const {
    int out = 1;
    for (std::size_t t = 0; t < orders.size(); ++t) out = std::lcm(out, root(t));
    return out;
  }
  std::string str() const {
    std::ostringstream os;
    os << "group:";
    for (int o : orders) os << " " << o;
    os << "\n";
    for (std::size_t t = 0; t < exponents.size(); ++t) {
      for (std::size_t i = 0; i < exponents[t].size(); ++i) {
        os << (i ? " " : "") << exponents[t][i];
        if (root(t) != orders[t]) os << "/" << root(t);
      }
      os << "\n";
    }
    return os.str();
  }
};

// "group: n_1 ... n_r" then r lines of n exponents.
inline ActionSpec parse_action(const std::string& text, int n) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) fail(ErrorKind::Parse, "empty action file");
  auto head = detail::tokens(lines[0]);
  if (head.empty() || head[0] != "group:") fail(ErrorKind::Parse, "action file must start with 'group:'");
  ActionSpec spec;
  for (std::size_t i = 1; i < head.size(); ++i) {
    const long o = detail::parse_int(head[i]);
    if (o < 1) fail(ErrorKind::Parse, "cyclic orders must be >= 1");
    spec.orders.push_back(static_cast<int>(o));
  }
  if (spec.orders.empty()) fail(ErrorKind::Parse, "no cyclic factors");
  if (lines.size() != spec.orders.size() + 1)
    fail(ErrorKind::Parse, "expected " + std::to_string(spec.orders.size()) + " generator lines");
  // An entry "a" is zeta_{n_t}^a; "a/N" is zeta_N^a, which the order check
  // later rejects unless N divides n_t.
  for (std::size_t t = 0; t < spec.orders.size(); ++t) {
    std::vector<std::pair<long, long>> row;
    for (const auto& tok : detail::tokens(lines[t + 1])) {
      const auto slash = tok.find('/');
      if (slash == std::string::npos) {
        row.emplace_back(detail::parse_int(tok), spec.orders[t]);
        continue;
      }
      const long den = detail::parse_int(tok.substr(slash + 1));
      if (den < 1) fail(ErrorKind::Parse, "root order in '" + tok + "' must be >= 1");
      row.emplace_back(detail::parse_int(tok.substr(0, slash)), den);
    }
    if (static_cast<int>(row.size()) != n)
      fail(ErrorKind::DimensionMismatch, "generator " + std::to_string(t + 1) + " has " + std::to_string(row.size()) + " exponents, need " + std::to_string(n));
    long root = 1;
    for (const auto& [a, den] : row) root = std::lcm(root, den);
    std::vector<long> exps;
    for (const auto& [a, den] : row) exps.push_back(a * (root / den));
    spec.exponents.push_back(std::move(exps));
    spec.roots.push_back(static_cast<int>(root));
  }
  bool plain = true;
  for (std::size_t t = 0; t < spec.orders.size(); ++t) plain = plain && spec.roots[t] == spec.orders[t];
  if (plain) spec.roots.clear();
  return spec;
}

struct VerifiedAction {
  ActionSpec spec;
  std::vector<QFUnitary> unitaries;
};

// sigma^{n-1}(u) ... sigma(u) u
inline CKElement convolution_power(const CKAlgebra& alg, const CKElement& u, int n) {
  CKElement prod = u, v = u;
  for (int k = 1; k < n; ++k) {
    v = lambda_apply(alg, u, v);
    prod = v * prod;
  }
  return prod;
}

// Convolution criterion for sigma_u^n = id on the generator numbered `t`.
inline QFUnitary check_generator_order(const CKAlgebra& alg, const CKElement& u, int n, std::size_t t) {
  if (convolution_power(alg, u, n) != alg.unit())
    fail(ErrorKind::OrderViolation, "generator " + std::to_string(t) + " does not have order dividing " + std::to_string(n));
  return QFUnitary::validate(u);
}

inline VerifiedAction verify_action(const CKAlgebra& alg, const ActionSpec& spec) {
  VerifiedAction out{spec, {}};
  for (std::size_t t = 0; t < spec.generators(); ++t) {
    if (static_cast<int>(spec.exponents[t].size()) != alg.n()) fail(ErrorKind::DimensionMismatch, "exponent row has wrong length");
    out.unitaries.push_back(check_generator_order(alg, spec.unitary(alg, t), spec.orders[t], t + 1));
  }
  for (std::size_t t = 0; t < spec.generators(); ++t)
    for (std::size_t t2 = t + 1; t2 < spec.generators(); ++t2) {
      const CKElement& a = out.unitaries[t].element();
      const CKElement& b = out.unitaries[t2].element();
      bool ok = a * b == b * a;
      for (int i = 1; ok && i <= alg.n(); ++i)
        ok = lambda_apply(alg, a, lambda_apply(alg, b, alg.s(i))) == lambda_apply(alg, b, lambda_apply(alg, a, alg.s(i)));
      if (!ok) fail(ErrorKind::NonCommuting, "generators " + std::to_string(t + 1) + " and " + std::to_string(t2 + 1) + " do not commute");
    }
  return out;
}

// Level-k degree-0 pairs fixed by every generator, optionally only those in
// {q_i}'.
inline std::vector<CKElement> fixed_point_core_basis(const CKAlgebra& alg, const ActionSpec& spec, int k, bool commutant_only = false) {
  std::vector<CKElement> out;
  for (const WordPair& p : level_pairs(alg.matrix(), k)) {
    bool fixed = true;
    for (std::size_t t = 0; fixed && t < spec.generators(); ++t) fixed = spec.character(t, p.mu) == spec.character(t, p.nu);
    if (!fixed) continue;
    if (commutant_only && k > 0 && !alg.matrix().columns_equal(p.mu.front(), p.nu.front())) continue;
    out.push_back(alg.term(p.mu, p.nu));
  }
  return out;
}

// Letters with equal rows and equal columns. On each such class the pairs
// s_i s_j^* multiply like matrix units, so B restricted there is a full matrix
// algebra inside {q_i}'.
inline std::vector<std::vector<int>> twin_classes(const ZeroOneMatrix& a) {
  std::vector<std::vector<int>> classes;
  for (int i = 1; i <= a.size(); ++i) {
    bool placed = false;
    for (auto& c : classes)
      if (a.columns_equal(c.front(), i) && a.rows_equal(c.front(), i)) {
        c.push_back(i);
        placed = true;
        break;
      }
    if (!placed) classes.push_back({i});
  }
  return classes;
}

using ExactMatrix = std::vector<std::vector<RootScalar>>;

inline ExactMatrix exact_identity(int n) {
  ExactMatrix m(static_cast<std::size_t>(n), std::vector<RootScalar>(static_cast<std::size_t>(n), RootScalar(0)));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = RootScalar(1);
  return m;
}

inline ExactMatrix exact_multiply(const ExactMatrix& x, const ExactMatrix& y) {
  const std::size_t n = x.size();
  ExactMatrix out(n, std::vector<RootScalar>(n, RootScalar(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (x[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (!y[k][j].is_zero()) out[i][j] += x[i][k] * y[k][j];
    }
  return out;
}

// sum c_ij s_i s_j^*
inline CKElement element_of_coefficients(const CKAlgebra& alg, const ExactMatrix& c) {
  TermMap raw;
  for (int i = 1; i <= alg.n(); ++i)
    for (int j = 1; j <= alg.n(); ++j) {
      const RootScalar& v = c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
      if (!v.is_zero() && alg.matrix().rows_overlap(i, j)) raw[{Word{i}, Word{j}}] += v;
    }
  return CKElement::from_terms(alg.matrix_ptr(), raw);
}

// Numeric coefficient matrix of an element of B (unit spread over p_i).
inline Eigen::MatrixXcd coefficient_matrix(const CKElement& x) {
  const int n = x.matrix().size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [p, c] : x.terms()) {
    if (p.mu.empty() && p.nu.empty()) {
      for (int i = 0; i < n; ++i) m(i, i) += c.to_complex();
    } else if (p.mu.size() == 1 && p.nu.size() == 1) {
      m(p.mu.front() - 1, p.nu.front() - 1) += c.to_complex();
    } else {
      fail(ErrorKind::NotInCommutant, "element is not in span{s_i s_j^*}");
    }
  }
  return m;
}

// Random exact unitary of B commuting with the q_i, over Q(zeta_12): a product
// of diagonal phases, letter transpositions and the rotation
// [[1/2, sqrt3/2], [-sqrt3/2, 1/2]] inside twin classes.
inline QFUnitary random_commutant_unitary(const CKAlgebra& alg, std::mt19937_64& rng, int factors = 4) {
  const int n = alg.n();
  const auto z12 = [](long k) { return RootScalar::root_of_unity(12, k); };
  const RootScalar half = RootScalar::rational(1, 2);
  const RootScalar half_sqrt3 = half * (z12(1) + z12(11));
  std::vector<std::vector<int>> twins;
  for (const auto& c : twin_classes(alg.matrix()))
    if (c.size() > 1) twins.push_back(c);
  std::uniform_int_distribution<int> phase(0, 11);
  ExactMatrix u = exact_identity(n);
  for (int f = 0; f < factors; ++f) {
    ExactMatrix step = exact_identity(n);
    const int kind = twins.empty() ? 0 : static_cast<int>(rng() % 3);
    if (kind == 0) {
      for (int i = 0; i < n; ++i) step[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = z12(phase(rng));
    } else {
      const auto& c = twins[rng() % twins.size()];
      std::size_t a = rng() % c.size(), b = rng() % (c.size() - 1);
      if (b >= a) ++b;
      const auto i = static_cast<std::size_t>(c[a] - 1), j = static_cast<std::size_t>(c[b] - 1);
      if (kind == 1) {
        step[i][i] = RootScalar(0);
        step[j][j] = RootScalar(0);
        step[i][j] = RootScalar(1);
        step[j][i] = RootScalar(1);
      } else {
        step[i][i] = half;
        step[j][j] = half;
        step[i][j] = half_sqrt3;
        step[j][i] = -half_sqrt3;
      }
    }
    u = exact_multiply(step, u);
  }
  return QFUnitary::validate(element_of_coefficients(alg, u));
}

// v D v^* with D = sum zeta_n^{a_i} p_i random and v a commutant unitary;
// has order dividing n.
inline QFUnitary random_finite_order_unitary(const CKAlgebra& alg, std::mt19937_64& rng, int n, const CKElement& v) {
  std::uniform_int_distribution<long> e(0, n - 1);
  CKElement d = alg.zero();
  for (int i = 1; i <= alg.n(); ++i) d = d + RootScalar::root_of_unity(n, e(rng)) * alg.p(i);
  return QFUnitary::validate(v * d * v.adjoint());
}

// Output of diagonalize_commuting_family.
struct Diagonalization {
  std::vector<int> orders;                    // order of each u
  std::vector<CKElement> projections;         // exact joint spectral projections
  std::vector<std::vector<long>> characters;  // eigenvalue exponent a (zeta_{order}^a) per u, per projection
  Eigen::MatrixXcd w;                         // coefficient matrix of the conjugator
  double off_diagonal_mass = 0.0;             // max_u || w u w^* - E(w u w^*) || in the core
  double unitarity_defect = 0.0;              // || w w^* - 1 ||
  bool certified(double tol = 1e-10) const { return off_diagonal_mass <= tol && unitarity_defect <= tol; }
};

inline int unitary_order(const CKAlgebra& alg, const CKElement& u, int bound) {
  CKElement power = u;
  for (int k = 1; k <= bound; ++k) {
    if (power == alg.unit()) return k;
    power = power * u;
  }
  fail(ErrorKind::NotFiniteOrder, "no u^k = 1 with k <= " + std::to_string(bound));
}

// Numeric element of the level-`layout` core for a coefficient matrix.
inline BlockMatrix coefficient_blocks(const CKAlgebra& alg, const Eigen::MatrixXcd& c, const CoreLayout& layout) {
  BlockMatrix out = BlockMatrix::zero(layout.sizes());
  for (int i = 1; i <= alg.n(); ++i)
    for (int j = 1; j <= alg.n(); ++j)
      if (std::abs(c(i - 1, j - 1)) > 0 && alg.matrix().rows_overlap(i, j))
        out = out + c(i - 1, j - 1) * to_blocks(alg.term(Word{i}, Word{j}), layout);
  return out;
}

// Distance of a level-2 core element from span{p_i}, with the diagonal
// weights taken from the level-1 coefficients.
inline double distance_from_diagonal(const BlockMatrix& d, const Eigen::VectorXcd& eta, const CoreLayout& layout) {
  BlockMatrix diag = BlockMatrix::zero(layout.sizes());
  for (std::size_t b = 0; b < layout.block_count(); ++b) {
    const auto& words = layout.block_words(b);
    for (std::size_t r = 0; r < words.size(); ++r)
      diag.blocks[b](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = eta(words[r].front() - 1);
  }
  return (d - diag).norm();
}

// Exact joint spectral projections by Fourier averaging, then a numeric
// conjugator w in B with w u w^* in span{p_i} for every u.
inline Diagonalization diagonalize_commuting_family(const CKAlgebra& alg, const std::vector<QFUnitary>& us, int order_bound = 120) {
  Diagonalization out;
  for (std::size_t a = 0; a < us.size(); ++a)
    for (std::size_t b = a + 1; b < us.size(); ++b)
      if (us[a].element() * us[b].element() != us[b].element() * us[a].element())
        fail(ErrorKind::NonCommuting, "family members " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " do not commute");

  out.projections = {alg.unit()};
  out.characters = {{}};
  for (const auto& qu : us) {
    const CKElement& u = qu.element();
    const int n = unitary_order(alg, u, order_bound);
    out.orders.push_back(n);
    std::vector<CKElement> powers{alg.unit()};
    for (int k = 1; k < n; ++k) powers.push_back(powers.back() * u);
    std::vector<std::pair<long, CKElement>> spectral;
    for (long a = 0; a < n; ++a) {
      CKElement p = alg.zero();
      for (int k = 0; k < n; ++k) p = p + RootScalar::root_of_unity(n, -a * k) * powers[static_cast<std::size_t>(k)];
      p = RootScalar::rational(1, n) * p;
      if (!p.is_zero()) spectral.emplace_back(a, std::move(p));
    }
    std::vector<CKElement> next;
    std::vector<std::vector<long>> next_chars;
    for (std::size_t j = 0; j < out.projections.size(); ++j)
      for (const auto& [a, p] : spectral) {
        CKElement joint = out.projections[j] * p;
        if (joint.is_zero()) continue;
        next.push_back(std::move(joint));
        auto ch = out.characters[j];
        ch.push_back(a);
        next_chars.push_back(std::move(ch));
      }
    out.projections = std::move(next);
    out.characters = std::move(next_chars);
  }

  // Orthonormal bases of the joint eigenspaces, then one letter per vector.
  const int n = alg.n();
  std::vector<Eigen::VectorXcd> vectors;
  for (const CKElement& p : out.projections) {
    const Eigen::MatrixXcd pm = coefficient_matrix(p);
    const int rank = static_cast<int>(std::lround(pm.trace().real()));
    std::vector<Eigen::VectorXcd> basis;
    for (int r = 0; r < rank; ++r) {
      Eigen::VectorXcd best;
      double best_norm = -1.0;
      for (int l = 0; l < n; ++l) {
        Eigen::VectorXcd v = pm.col(l);
        for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > best_norm + 1e-12) {
          best_norm = v.norm();
          best = v;
        }
      }
      basis.push_back(best / best_norm);
    }
    vectors.insert(vectors.end(), basis.begin(), basis.end());
  }
  out.w = Eigen::MatrixXcd::Zero(n, n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto& v : vectors) {
    int letter = -1;
    for (int l = 0; l < n; ++l)
      if (!used[static_cast<std::size_t>(l)] && (letter < 0 || std::abs(v(l)) > std::abs(v(letter)) + 1e-12)) letter = l;
    if (letter < 0) break;
    used[static_cast<std::size_t>(letter)] = true;
    Complex phase = std::abs(v(letter)) > 1e-12 ? std::conj(v(letter)) / std::abs(v(letter)) : Complex(1.0);
    out.w.row(letter) = (phase * v).adjoint();
  }

  const CoreLayout layout(alg.matrix(), 2);
  const BlockMatrix wb = coefficient_blocks(alg, out.w, layout);
  out.unitarity_defect = std::max((wb * wb.adjoint() - BlockMatrix::identity(layout.sizes())).norm(),
                                  (wb.adjoint() * wb - BlockMatrix::identity(layout.sizes())).norm());
  for (const auto& qu : us) {
    const BlockMatrix d = wb * to_blocks(qu.element(), layout) * wb.adjoint();
    const Eigen::MatrixXcd dc = out.w * coefficient_matrix(qu.element()) * out.w.adjoint();
    out.off_diagonal_mass = std::max(out.off_diagonal_mass, distance_from_diagonal(d, dc.diagonal(), layout));
  }
  return out;
}

}  // namespace ckalg

#endif  // CKALG_QUASIFREE_HPP
