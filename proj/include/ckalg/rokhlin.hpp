#ifndef CKALG_ROKHLIN_HPP
#define CKALG_ROKHLIN_HPP

#include <cmath>
#include <string>
#include <vector>

#include "ckalg/core.hpp"

namespace ckalg {

// z(s) = exp(2 pi i (1 - s) H) for a unitary u = exp(2 pi i H) of finite order
// n, H having eigenvalues a/n in (-1/2, 1/2]. Spectral projections come from
// Fourier averaging over the powers of u.
class UnitaryPath {
 public:
  static UnitaryPath of(const BlockMatrix& u, int n, double tol = 1e-10) {
    if (n < 1) fail(ErrorKind::NotFiniteOrder, "order must be >= 1");
    const auto sizes = u.sizes();
    std::vector<BlockMatrix> powers{BlockMatrix::identity(sizes)};
    for (int k = 1; k <= n; ++k) powers.push_back(powers.back() * u);
    if ((powers.back() - BlockMatrix::identity(sizes)).norm() > tol)
      fail(ErrorKind::NotFiniteOrder, "u^" + std::to_string(n) + " != 1");
    UnitaryPath path;
    path.sizes_ = sizes;
    for (int a = 0; a < n; ++a) {
      BlockMatrix p = BlockMatrix::zero(sizes);
      for (int k = 0; k < n; ++k) p = p + std::polar(1.0 / n, -kTwoPi * a * k / n) * powers[static_cast<std::size_t>(k)];
      if (p.norm() < tol) continue;
      const int centered = 2 * a > n ? a - n : a;
      path.parts_.push_back({static_cast<double>(centered) / n, std::move(p)});
    }
    return path;
  }

  BlockMatrix at(double s) const {
    BlockMatrix out = BlockMatrix::zero(sizes_);
    for (const auto& [h, p] : parts_) out = out + std::polar(1.0, kTwoPi * (1.0 - s) * h) * p;
    return out;
  }

  // 2 pi max |h|, at most pi.
  double lipschitz_constant() const {
    double m = 0.0;
    for (const auto& part : parts_) m = std::max(m, std::abs(part.first));
    return kTwoPi * m;
  }

  std::vector<double> angles() const {
    std::vector<double> out;
    for (const auto& part : parts_) out.push_back(part.first);
    return out;
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::pair<double, BlockMatrix>> parts_;
};

// Exact degree-0 unitary of finite order, represented in the core.
inline UnitaryPath unitary_path(const CKAlgebra& alg, const CKElement& u, int n) {
  CKElement p = alg.unit();
  for (int k = 0; k < n; ++k) p = p * u;
  if (p != alg.unit()) fail(ErrorKind::NotFiniteOrder, "u^" + std::to_string(n) + " != 1");
  const CoreLayout layout(alg.matrix(), static_cast<int>(u.max_word_length()) + 1);
  return UnitaryPath::of(to_blocks(u, layout), n);
}

// Finite-dimensional model: blocks of a direct sum, alpha(x)_{pi(b)} =
// V_{pi(b)} x_b V_{pi(b)}^*, two alpha-cyclic towers of blocks of lengths r
// and r + 1, and a unitary u of order n.
struct RokhlinModel {
  std::vector<int> sizes;
  std::vector<int> perm;
  std::vector<Eigen::MatrixXcd> conj;
  std::vector<int> tower0;  // blocks e_0..e_{r-1}
  std::vector<int> tower1;  // blocks f_0..f_r
  BlockMatrix u;
  int order = 1;

  int r() const { return static_cast<int>(tower0.size()); }

  BlockMatrix alpha(const BlockMatrix& x) const {
    BlockMatrix out = BlockMatrix::zero(sizes);
    for (std::size_t b = 0; b < sizes.size(); ++b) {
      const auto t = static_cast<std::size_t>(perm[b]);
      out.blocks[t] = conj[t] * x.blocks[b] * conj[t].adjoint();
    }
    return out;
  }

  BlockMatrix alpha_power(BlockMatrix x, int k) const {
    for (int i = 0; i < k; ++i) x = alpha(x);
    return x;
  }

  BlockMatrix block_identity(int b) const {
    BlockMatrix out = BlockMatrix::zero(sizes);
    out.blocks[static_cast<std::size_t>(b)].setIdentity();
    return out;
  }

  // u_0 = 1, u_{k+1} = u_k alpha^k(u)
  std::vector<BlockMatrix> chain(int K) const {
    std::vector<BlockMatrix> out{BlockMatrix::identity(sizes)};
    BlockMatrix shifted = u;
    for (int k = 0; k < K; ++k) {
      out.push_back(out.back() * shifted);
      shifted = alpha(shifted);
    }
    return out;
  }

  void validate(double tol = 1e-12) const {
    const std::size_t nb = sizes.size();
    auto bad = [](const std::string& msg) { fail(ErrorKind::ModelInvariantViolated, msg); };
    if (perm.size() != nb || conj.size() != nb || u.blocks.size() != nb) bad("block data has inconsistent lengths");
    std::vector<int> seen(nb, 0);
    for (int b : tower0) ++seen.at(static_cast<std::size_t>(b));
    for (int b : tower1) ++seen.at(static_cast<std::size_t>(b));
    for (int c : seen)
      if (c != 1) bad("towers do not partition the unit");
    if (tower1.size() != tower0.size() + 1) bad("tower lengths must be r and r + 1");
    for (std::size_t b = 0; b < nb; ++b) {
      const auto t = static_cast<std::size_t>(perm[b]);
      if (sizes[t] != sizes[b]) bad("alpha must map blocks to blocks of equal size");
      const Eigen::MatrixXcd& v = conj[t];
      if ((v * v.adjoint() - Eigen::MatrixXcd::Identity(v.rows(), v.cols())).norm() > tol) bad("conjugation is not unitary");
    }
    auto check_tower = [&](const std::vector<int>& tower) {
      for (std::size_t k = 0; k < tower.size(); ++k) {
        const BlockMatrix moved = alpha(block_identity(tower[k]));
        if ((moved - block_identity(tower[(k + 1) % tower.size()])).norm() > tol) bad("alpha does not cycle the tower");
      }
    };
    check_tower(tower0);
    check_tower(tower1);
    BlockMatrix p = BlockMatrix::identity(sizes);
    for (int k = 0; k < order; ++k) p = p * u;
    if ((p - BlockMatrix::identity(sizes)).norm() > tol) bad("u^n != 1");
    if ((u * u.adjoint() - BlockMatrix::identity(sizes)).norm() > tol) bad("u is not unitary");
    const auto ch = chain(r() + 1);
    for (const auto& c : ch)
      for (std::size_t b = 0; b < nb; ++b) {
        const BlockMatrix e = block_identity(static_cast<int>(b));
        if ((c * e - e * c).norm() > tol) bad("chain does not commute with the towers");
      }
  }

  // Cycles of lengths r and r + 1 of one-point blocks; u = zeta_n.
  static RokhlinModel scalar(int r, int n) { return cycles(r, 1, std::polar(1.0, kTwoPi / n) * Eigen::MatrixXcd::Identity(1, 1), Eigen::MatrixXcd::Identity(1, 1), n); }

  // Cycles of 2x2 blocks, alpha conjugating by the swap, u = diag(zeta_n, 1).
  static RokhlinModel two_by_two(int r, int n) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(2, 2);
    d(0, 0) = std::polar(1.0, kTwoPi / n);
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1.0;
    return cycles(r, 2, d, swap, n);
  }

  static RokhlinModel cycles(int r, int d, const Eigen::MatrixXcd& u_block, const Eigen::MatrixXcd& v, int n) {
    if (r < 1) fail(ErrorKind::ModelInvariantViolated, "tower length must be >= 1");
    RokhlinModel m;
    const int total = 2 * r + 1;
    m.sizes.assign(static_cast<std::size_t>(total), d);
    m.perm.resize(static_cast<std::size_t>(total));
    m.conj.assign(static_cast<std::size_t>(total), v);
    for (int k = 0; k < r; ++k) {
      m.tower0.push_back(k);
      m.perm[static_cast<std::size_t>(k)] = (k + 1) % r;
    }
    for (int l = 0; l <= r; ++l) {
      m.tower1.push_back(r + l);
      m.perm[static_cast<std::size_t>(r + l)] = r + (l + 1) % (r + 1);
    }
    m.u.blocks.assign(static_cast<std::size_t>(total), u_block);
    m.order = n;
    return m;
  }
};

struct AveragingReport {
  BlockMatrix z;
  double defect;       // || z alpha(z)^* - u ||
  double bound;        // 2 pi / r
  double defect_tower0;
  double defect_tower1;
  double unitarity;    // || z z^* - 1 ||
};

// z = sum_k u_k alpha^k(z0(k/r)) e_k + sum_l u_l alpha^l(z1(l/(r+1))) f_l with
// z0, z1 the paths from u_r and u_{r+1} to 1.
inline AveragingReport build_averaged_unitary(const RokhlinModel& m) {
  m.validate();
  const int r = m.r();
  const auto ch = m.chain(r + 1);
  const UnitaryPath z0 = UnitaryPath::of(ch[static_cast<std::size_t>(r)], m.order);
  const UnitaryPath z1 = UnitaryPath::of(ch[static_cast<std::size_t>(r + 1)], m.order);
  BlockMatrix z = BlockMatrix::zero(m.sizes);
  for (int k = 0; k < r; ++k)
    z = z + ch[static_cast<std::size_t>(k)] * m.alpha_power(z0.at(static_cast<double>(k) / r), k) * m.block_identity(m.tower0[static_cast<std::size_t>(k)]);
  for (int l = 0; l <= r; ++l)
    z = z + ch[static_cast<std::size_t>(l)] * m.alpha_power(z1.at(static_cast<double>(l) / (r + 1)), l) * m.block_identity(m.tower1[static_cast<std::size_t>(l)]);
  const BlockMatrix diff = z * m.alpha(z).adjoint() - m.u;
  AveragingReport rep{z, diff.norm(), kTwoPi / r, 0.0, 0.0, (z * z.adjoint() - BlockMatrix::identity(m.sizes)).norm()};
  for (int b : m.tower0) rep.defect_tower0 = std::max(rep.defect_tower0, spectral_norm(diff.blocks[static_cast<std::size_t>(b)]));
  for (int b : m.tower1) rep.defect_tower1 = std::max(rep.defect_tower1, spectral_norm(diff.blocks[static_cast<std::size_t>(b)]));
  return rep;
}

}  // namespace ckalg

#endif  // CKALG_ROKHLIN_HPP
