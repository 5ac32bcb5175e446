#ifndef CKALG_ORACLE_HPP
#define CKALG_ORACLE_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ckalg/element.hpp"

namespace ckalg {

using SparseOperator = Eigen::SparseMatrix<Complex>;

// Span of the admissible words of length <= L (the empty word included).
// s_i e_x = e_{ix} when |x| < L and x is empty or A(i, x_1) = 1, else 0.
class TruncatedRep {
 public:
  TruncatedRep(const ZeroOneMatrix& a, int depth) : a_(a), depth_(depth) {
    if (depth < 0) fail(ErrorKind::DepthTooSmall, "depth must be >= 0");
    for (int k = 0; k <= depth; ++k)
      for (Word& w : admissible_words(a, k)) {
        index_.emplace(w, static_cast<int>(words_.size()));
        words_.push_back(std::move(w));
      }
  }

  int depth() const { return depth_; }
  int size() const { return static_cast<int>(words_.size()); }
  const Word& word(int i) const { return words_[static_cast<std::size_t>(i)]; }

  SparseOperator generator(int i) const { return represent_pair(WordPair{Word{i}, Word{}}); }

  // s_mu s_nu^* e_{nu y} = e_{mu y} when mu y is admissible and fits, else 0.
  SparseOperator represent_pair(const WordPair& p, Complex c = 1.0) const {
    std::vector<Eigen::Triplet<Complex>> trips;
    add_pair(trips, p, c);
    return build(trips);
  }

  SparseOperator represent(const CKElement& x) const {
    if (static_cast<int>(x.max_word_length()) + 1 > depth_)
      fail(ErrorKind::DepthTooSmall, "depth " + std::to_string(depth_) + " below max word length + 1");
    std::vector<Eigen::Triplet<Complex>> trips;
    for (const auto& [p, c] : x.terms()) add_pair(trips, p, c.to_complex());
    return build(trips);
  }

  // Words with d < |x| <= L - d: at most d letters are removed and at most d
  // added along any generator product of length d, so these vectors behave
  // like infinite paths.
  std::vector<int> interior(int d) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
      const int len = static_cast<int>(word(i).size());
      if (len > d && len <= depth_ - d) out.push_back(i);
    }
    return out;
  }

 private:
  void add_pair(std::vector<Eigen::Triplet<Complex>>& trips, const WordPair& p, Complex c) const {
    for (int col = 0; col < size(); ++col) {
      const Word& x = word(col);
      if (!x.has_prefix(p.nu)) continue;
      const Word y = x.suffix_from(p.nu.size());
      if (p.mu.size() + y.size() > static_cast<std::size_t>(depth_)) continue;
      const Word image = p.mu + y;
      if (!a_.admissible(image)) continue;
      trips.emplace_back(index_.at(image), col, c);
    }
  }

  SparseOperator build(const std::vector<Eigen::Triplet<Complex>>& trips) const {
    SparseOperator m(size(), size());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
  }

  ZeroOneMatrix a_;
  int depth_;
  std::vector<Word> words_;
  std::map<Word, int> index_;
};

// Number of generator symbols in the longest term: |mu| + |nu|.
inline int generator_length(const CKElement& x) {
  int out = 0;
  for (const auto& [p, c] : x.terms()) out = std::max(out, static_cast<int>(p.mu.size() + p.nu.size()));
  return out;
}

inline SparseOperator represent(const CKElement& x, int depth) { return TruncatedRep(x.matrix(), depth).represent(x); }

namespace detail {

inline Eigen::MatrixXcd restrict_dense(const SparseOperator& m, const std::vector<int>& idx) {
  std::vector<int> pos(static_cast<std::size_t>(m.rows()), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) pos[static_cast<std::size_t>(idx[k])] = static_cast<int>(k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (int col = 0; col < m.outerSize(); ++col)
    for (SparseOperator::InnerIterator it(m, col); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())], c = pos[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) out(r, c) = it.value();
    }
  return out;
}

}  // namespace detail

// Product of the represented factors against the representation of y, on
// interior rows and columns.
inline bool oracle_check(const std::vector<CKElement>& factors, const CKElement& y, int depth, int d, double tol = 1e-9) {
  if (factors.empty()) fail(ErrorKind::ZeroInput, "no factors");
  int needed = 0;
  for (const auto& f : factors) {
    CKElement::check_same(f, y);
    needed += generator_length(f);
  }
  needed = std::max(needed, generator_length(y));
  if (d < needed) fail(ErrorKind::DepthTooSmall, "d = " + std::to_string(d) + " below generator length " + std::to_string(needed));
  if (depth < 2 * d + 1) fail(ErrorKind::DepthTooSmall, "depth " + std::to_string(depth) + " leaves no interior for d = " + std::to_string(d));
  const TruncatedRep rep(y.matrix(), depth);
  SparseOperator lhs = rep.represent(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) lhs = SparseOperator(lhs * rep.represent(factors[i]));
  const SparseOperator diff = lhs - rep.represent(y);
  const auto inner = rep.interior(d);
  std::vector<bool> in(static_cast<std::size_t>(rep.size()), false);
  for (int i : inner) in[static_cast<std::size_t>(i)] = true;
  for (int col = 0; col < diff.outerSize(); ++col)
    for (SparseOperator::InnerIterator it(diff, col); it; ++it)
      if (in[static_cast<std::size_t>(it.row())] && in[static_cast<std::size_t>(it.col())] && std::abs(it.value()) > tol) return false;
  return true;
}

inline bool oracle_check(const CKElement& x, const CKElement& y, int depth, int d, double tol = 1e-9) {
  return oracle_check(std::vector<CKElement>{x}, y, depth, d, tol);
}

// Largest singular value of the interior compression, computed per connected
// component of the sparsity pattern. A lower bound on the norm.
inline double norm_estimate(const CKElement& x, int depth) {
  const TruncatedRep rep(x.matrix(), std::max(depth, static_cast<int>(x.max_word_length()) + 1));
  const SparseOperator m = rep.represent(x);
  const auto inner = rep.interior(generator_length(x));
  std::vector<int> pos(static_cast<std::size_t>(rep.size()), -1);
  for (std::size_t k = 0; k < inner.size(); ++k) pos[static_cast<std::size_t>(inner[k])] = static_cast<int>(k);
  std::vector<int> parent(inner.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    return v;
  };
  for (int col = 0; col < m.outerSize(); ++col)
    for (SparseOperator::InnerIterator it(m, col); it; ++it) {
      const int r = pos[static_cast<std::size_t>(it.row())], c = pos[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) parent[static_cast<std::size_t>(root(r))] = root(c);
    }
  std::map<int, std::vector<int>> comps;
  for (std::size_t k = 0; k < inner.size(); ++k) comps[root(static_cast<int>(k))].push_back(inner[k]);
  double best = 0.0;
  for (const auto& [r, idx] : comps) {
    const Eigen::MatrixXcd block = detail::restrict_dense(m, idx);
    if (block.cwiseAbs().maxCoeff() == 0.0) continue;
    best = std::max(best, Eigen::JacobiSVD<Eigen::MatrixXcd>(block).singularValues()(0));
  }
  return best;
}

}  // namespace ckalg

#endif  // CKALG_ORACLE_HPP
