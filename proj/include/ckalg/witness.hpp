#ifndef CKALG_WITNESS_HPP
#define CKALG_WITNESS_HPP

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <thread>
#include <vector>

#include "ckalg/quasifree.hpp"
#include "ckalg/shift.hpp"

namespace ckalg {

struct InnernessReport {
  double defect;     // core_norm(u - w phi(w)^*)
  CKElement v;       // w phi(w)^*
  bool ad_matches;   // ad(w)(s_i) = lambda_v(s_i) for all i
};

inline InnernessReport innerness_defect(const CKAlgebra& alg, const CKElement& w, const CKElement& u) {
  if (!w.is_homogeneous() || w.has_no_terms() || w.degree() != 0) fail(ErrorKind::NotUnitary, "w must be a degree-0 unitary");
  if (w * w.adjoint() != alg.unit() || w.adjoint() * w != alg.unit()) fail(ErrorKind::NotUnitary, "w w^* = w^* w = 1 fails");
  InnernessReport rep{0.0, w * phi(alg, w).adjoint(), true};
  rep.defect = core_norm(u - rep.v);
  for (int i = 1; i <= alg.n() && rep.ad_matches; ++i) rep.ad_matches = w * alg.s(i) * w.adjoint() == lambda_apply(alg, rep.v, alg.s(i));
  return rep;
}

struct WitnessOptions {
  int budget = 10000;  // defect evaluations per level
  int restarts = 4;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct WitnessLevel {
  int level;
  double defect;
  BlockMatrix w;  // in the level-k core
  int evaluations;
};

namespace detail {

// Index groups inside each level-k core block on which fixed-point commutant
// elements are block diagonal: same column class of the first letter and the
// same character under every generator.
inline std::vector<std::vector<std::vector<int>>> witness_groups(const ZeroOneMatrix& a, const ActionSpec& spec, const CoreLayout& layout) {
  std::vector<std::vector<std::vector<int>>> out;
  const auto classes = a.column_classes();
  std::vector<int> class_of(static_cast<std::size_t>(a.size()) + 1, 0);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (int l : classes[c]) class_of[static_cast<std::size_t>(l)] = static_cast<int>(c);
  for (std::size_t b = 0; b < layout.block_count(); ++b) {
    std::map<std::vector<long>, std::vector<int>> groups;
    const auto& words = layout.block_words(b);
    for (std::size_t r = 0; r < words.size(); ++r) {
      std::vector<long> key{words[r].empty() ? -1 : class_of[static_cast<std::size_t>(words[r].front())]};
      for (std::size_t t = 0; t < spec.generators(); ++t) key.push_back(spec.character(t, words[r]));
      groups[key].push_back(static_cast<int>(r));
    }
    std::vector<std::vector<int>> list;
    for (auto& [k, g] : groups) list.push_back(std::move(g));
    out.push_back(std::move(list));
  }
  return out;
}

class WitnessProblem {
 public:
  WitnessProblem(const CKAlgebra& alg, const ActionSpec& spec, const CKElement& u, int level)
      : lower_(alg.matrix(), level),
        upper_(alg.matrix(), level + 1),
        step_(lower_, upper_),
        u_(to_blocks(u, upper_)),
        groups_(witness_groups(alg.matrix(), spec, lower_)) {}

  double defect(const BlockMatrix& w) const { return (u_ - step_.embed(w) * step_.phi(w).adjoint()).norm(); }

  // Cayley transform of a random Hermitian element supported on the groups.
  BlockMatrix random_unitary(std::mt19937_64& rng, double scale) const {
    std::normal_distribution<double> g(0.0, scale);
    BlockMatrix out = BlockMatrix::identity(lower_.sizes());
    for (std::size_t b = 0; b < groups_.size(); ++b) {
      const auto size = out.blocks[b].rows();
      Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
      for (const auto& grp : groups_[b])
        for (int i : grp)
          for (int j : grp) h(i, j) = Complex(g(rng), g(rng));
      h = (h + h.adjoint()) * 0.25;
      const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(size, size);
      const Complex iu(0.0, 1.0);
      out.blocks[b] = (eye - iu * h).partialPivLu().solve(eye + iu * h);
    }
    return out;
  }

  const CoreLayout& lower() const { return lower_; }

 private:
  CoreLayout lower_;
  CoreLayout upper_;
  LevelStep step_;
  BlockMatrix u_;
  std::vector<std::vector<std::vector<int>>> groups_;
};

struct SearchOutcome {
  double defect;
  BlockMatrix w;
  int evaluations;
};

// Random local moves with a shrinking step from `start`.
inline SearchOutcome local_search(const WitnessProblem& prob, BlockMatrix start, double start_defect, int budget, double eps,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SearchOutcome best{start_defect, std::move(start), 0};
  double step = 1.0;
  int stale = 0;
  while (best.evaluations < budget && best.defect > eps && step > 1e-9) {
    BlockMatrix cand = best.w * prob.random_unitary(rng, step);
    const double d = prob.defect(cand);
    ++best.evaluations;
    if (d < best.defect) {
      best.defect = d;
      best.w = std::move(cand);
      stale = 0;
    } else if (++stale >= 20) {
      step *= 0.7;
      stale = 0;
    }
  }
  return best;
}

}  // namespace detail

// Best w in the fixed-point diagonal-commutant core at levels 0..K. Level k
// starts from the level-(k-1) winner, so the defect trace never increases.
inline std::vector<WitnessLevel> witness_search(const CKAlgebra& alg, const ActionSpec& spec, const CKElement& u, int K, double eps,
                                                const WitnessOptions& opt = {}) {
  std::vector<WitnessLevel> trace;
  BlockMatrix carried;
  double carried_defect = 0.0;
  for (int k = 0; k <= K; ++k) {
    const detail::WitnessProblem prob(alg, spec, u, k);
    if (k == 0) {
      carried = BlockMatrix::identity(prob.lower().sizes());
      carried_defect = prob.defect(carried);
    } else {
      const CoreLayout prev(alg.matrix(), k - 1);
      carried = LevelStep(prev, prob.lower()).embed(carried);
    }
    std::vector<detail::SearchOutcome> results(static_cast<std::size_t>(std::max(1, opt.restarts)));
    const int per = std::max(1, opt.budget / static_cast<int>(results.size()));
    auto run = [&](std::size_t r) {
      const std::uint64_t seed = opt.seed * 1000003ULL + static_cast<std::uint64_t>(k) * 7919ULL + r;
      if (r == 0) {
        results[r] = detail::local_search(prob, carried, carried_defect, per, eps, seed);
      } else {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        BlockMatrix start = prob.random_unitary(rng, 3.0);
        const double d = prob.defect(start);
        results[r] = detail::local_search(prob, std::move(start), d, per - 1, eps, seed);
        ++results[r].evaluations;
      }
    };
    // The level-0 core is the scalars, where w phi(w)^* = |w|^2 = 1: nothing to search.
    const bool done = k == 0;
    if (!done) {
      const std::size_t jobs = static_cast<std::size_t>(std::max(1, opt.jobs));
      for (std::size_t base = 0; base < results.size(); base += jobs) {
        std::vector<std::thread> pool;
        for (std::size_t r = base; r < std::min(results.size(), base + jobs); ++r) pool.emplace_back(run, r);
        for (auto& t : pool) t.join();
      }
    } else {
      results[0] = {carried_defect, carried, 0};
      results.resize(1);
    }
    int evals = 0;
    std::size_t winner = 0;
    for (std::size_t r = 0; r < results.size(); ++r) {
      evals += results[r].evaluations;
      if (results[r].defect < results[winner].defect) winner = r;
    }
    if (results[winner].defect < carried_defect) {
      carried = results[winner].w;
      carried_defect = results[winner].defect;
    }
    trace.push_back({k, carried_defect, carried, evals});
  }
  return trace;
}

}  // namespace ckalg

#endif  // CKALG_WITNESS_HPP
