#ifndef CKALG_CORE_HPP
#define CKALG_CORE_HPP

#include <algorithm>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "ckalg/element.hpp"

namespace ckalg {

// Largest singular value.
inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols()) {
    Eigen::MatrixXcd off = m;
    off.diagonal().setZero();
    // diagonal blocks: exact, no squaring round-off
    if (off.isZero(0.0)) return m.diagonal().cwiseAbs().maxCoeff();
  }
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

// Element of a finite-dimensional C*-algebra given as a direct sum of full
// matrix blocks.
struct BlockMatrix {
  std::vector<Eigen::MatrixXcd> blocks;

  static BlockMatrix identity(const std::vector<int>& sizes) {
    BlockMatrix out;
    for (int s : sizes) out.blocks.push_back(Eigen::MatrixXcd::Identity(s, s));
    return out;
  }
  static BlockMatrix zero(const std::vector<int>& sizes) {
    BlockMatrix out;
    for (int s : sizes) out.blocks.push_back(Eigen::MatrixXcd::Zero(s, s));
    return out;
  }
  std::vector<int> sizes() const {
    std::vector<int> out;
    for (const auto& b : blocks) out.push_back(static_cast<int>(b.rows()));
    return out;
  }

  BlockMatrix adjoint() const {
    BlockMatrix out;
    for (const auto& b : blocks) out.blocks.push_back(b.adjoint());
    return out;
  }
  double norm() const {
    double out = 0.0;
    for (const auto& b : blocks) out = std::max(out, spectral_norm(b));
    return out;
  }

  friend BlockMatrix operator*(const BlockMatrix& x, const BlockMatrix& y) {
    BlockMatrix out;
    for (std::size_t i = 0; i < x.blocks.size(); ++i) out.blocks.push_back(x.blocks[i] * y.blocks[i]);
    return out;
  }
  friend BlockMatrix operator+(const BlockMatrix& x, const BlockMatrix& y) {
    BlockMatrix out;
    for (std::size_t i = 0; i < x.blocks.size(); ++i) out.blocks.push_back(x.blocks[i] + y.blocks[i]);
    return out;
  }
  friend BlockMatrix operator-(const BlockMatrix& x, const BlockMatrix& y) {
    BlockMatrix out;
    for (std::size_t i = 0; i < x.blocks.size(); ++i) out.blocks.push_back(x.blocks[i] - y.blocks[i]);
    return out;
  }
  friend BlockMatrix operator*(Complex c, const BlockMatrix& x) {
    BlockMatrix out;
    for (const auto& b : x.blocks) out.blocks.push_back(c * b);
    return out;
  }
};

// The level-k core: span of terminal-matched pairs s_mu s_nu^* with
// |mu| = |nu| = k, one full matrix block per terminal letter (rows indexed by
// the words ending in that letter, in lexicographic order). Level 0 is the
// scalars, a single 1x1 block holding the empty word.
class CoreLayout {
 public:
  CoreLayout(const ZeroOneMatrix& a, int level) : level_(level), n_(a.size()) {
    if (level == 0) {
      words_.push_back({Word{}});
    } else {
      words_.resize(static_cast<std::size_t>(n_));
      for (const Word& w : admissible_words(a, level)) words_[static_cast<std::size_t>(w.back() - 1)].push_back(w);
    }
    for (std::size_t b = 0; b < words_.size(); ++b)
      for (std::size_t i = 0; i < words_[b].size(); ++i) index_.emplace(words_[b][i], std::pair{static_cast<int>(b), static_cast<int>(i)});
  }

  int level() const { return level_; }
  std::size_t block_count() const { return words_.size(); }
  const std::vector<Word>& block_words(std::size_t b) const { return words_[b]; }
  std::vector<int> sizes() const {
    std::vector<int> out;
    for (const auto& w : words_) out.push_back(static_cast<int>(w.size()));
    return out;
  }
  // (block, row) of a level-k word
  std::pair<int, int> locate(const Word& w) const { return index_.at(w); }
  std::size_t block_of_terminal(int letter) const { return level_ == 0 ? 0 : static_cast<std::size_t>(letter - 1); }

 private:
  int level_;
  int n_;
  std::vector<std::vector<Word>> words_;
  std::map<Word, std::pair<int, int>> index_;
};

// Numeric image of a degree-0 element in the level-k core.
inline BlockMatrix to_blocks(const CKElement& x, const CoreLayout& layout) {
  if (x.degree() != 0) fail(ErrorKind::MixedDegree, "core representation needs degree 0");
  BlockMatrix out = BlockMatrix::zero(layout.sizes());
  if (layout.level() == 0) {
    for (const auto& [p, c] : x.terms()) {
      if (!p.mu.empty()) fail(ErrorKind::LevelTooSmall, "level 0 holds scalars only");
      out.blocks[0](0, 0) += c.to_complex();
    }
    return out;
  }
  const LeveledForm form = x.expand_to_level(layout.level());
  for (const auto& [p, c] : form.terms) {
    const auto [b, r] = layout.locate(p.mu);
    const auto [b2, col] = layout.locate(p.nu);
    out.blocks[static_cast<std::size_t>(b)](r, col) += c.to_complex();
    (void)b2;
  }
  return out;
}

// Index maps from level k to level k+1 realizing the inclusion C_k -> C_{k+1}
// and the shift phi: C_k -> C_{k+1}.
class LevelStep {
 public:
  LevelStep(const CoreLayout& lower, const CoreLayout& upper) : lower_sizes_(lower.sizes()), upper_sizes_(upper.sizes()) {
    for (std::size_t b = 0; b < upper.block_count(); ++b) {
      std::vector<Slot> prefix, tail;
      for (const Word& w : upper.block_words(b)) {
        const Word head = w.without_last();
        const Word rest = w.suffix_from(1);
        const auto [pb, pi] = lower.locate(head);
        const auto [tb, ti] = lower.locate(rest);
        prefix.push_back({pb, pi, 0});
        tail.push_back({tb, ti, w.front()});
      }
      prefix_.push_back(std::move(prefix));
      tail_.push_back(std::move(tail));
    }
  }

  BlockMatrix embed(const BlockMatrix& x) const { return build(x, prefix_); }
  BlockMatrix phi(const BlockMatrix& x) const { return build(x, tail_); }

 private:
  struct Slot {
    int block;
    int index;
    int head;  // first letter for the shift map, 0 for the inclusion
  };

  BlockMatrix build(const BlockMatrix& x, const std::vector<std::vector<Slot>>& slots) const {
    BlockMatrix out = BlockMatrix::zero(upper_sizes_);
    for (std::size_t b = 0; b < slots.size(); ++b) {
      const auto& s = slots[b];
      for (std::size_t r = 0; r < s.size(); ++r)
        for (std::size_t c = 0; c < s.size(); ++c)
          if (s[r].block == s[c].block && s[r].head == s[c].head)
            out.blocks[b](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                x.blocks[static_cast<std::size_t>(s[r].block)](s[r].index, s[c].index);
    }
    return out;
  }

  std::vector<int> lower_sizes_;
  std::vector<int> upper_sizes_;
  std::vector<std::vector<Slot>> prefix_;
  std::vector<std::vector<Slot>> tail_;
};

// Exact operator norm of a degree-0 element: the largest block norm of its
// terminal-matched expansion.
inline double core_norm(const CKElement& x) {
  if (!x.is_homogeneous() || x.degree() != 0) fail(ErrorKind::MixedDegree, "core_norm needs a degree-0 element");
  if (x.has_no_terms()) return 0.0;
  const CoreLayout layout(x.matrix(), static_cast<int>(x.max_word_length()) + 1);
  return to_blocks(x, layout).norm();
}

// Nonvanishing degree-0 pairs s_mu s_nu^* with |mu| = |nu| = k, lex order.
// They are linearly independent: their level-(k+1) expansions use disjoint
// matrix units.
inline std::vector<WordPair> level_pairs(const ZeroOneMatrix& a, int k) {
  const auto words = admissible_words(a, k);
  std::vector<WordPair> out;
  for (const Word& mu : words)
    for (const Word& nu : words)
      if (pair_nonvanishing(a, {mu, nu})) out.push_back({mu, nu});
  return out;
}

// Basis of the level-k degree-0 span intersected with {q_1..q_n}'.
// Each pair is an eigenvector of ad(q_i) with eigenvalue A(i, mu_1) - A(i, nu_1),
// so the kernel is spanned by the pairs whose first letters have equal columns.
inline std::vector<CKElement> diagonal_commutant_basis(const CKAlgebra& alg, int k) {
  std::vector<CKElement> out;
  for (const WordPair& p : level_pairs(alg.matrix(), k))
    if (k == 0 || alg.matrix().columns_equal(p.mu.front(), p.nu.front())) out.push_back(alg.term(p.mu, p.nu));
  return out;
}

// r_c = sum of p_l over each column class c.
inline std::vector<CKElement> minimal_diagonal_projections(const CKAlgebra& alg) {
  std::vector<CKElement> out;
  for (const auto& cls : alg.matrix().column_classes()) {
    CKElement r = alg.zero();
    for (int l : cls) r = r + alg.p(l);
    out.push_back(r);
  }
  return out;
}

}  // namespace ckalg

#endif  // CKALG_CORE_HPP
