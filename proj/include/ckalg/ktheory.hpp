#ifndef CKALG_KTHEORY_HPP
#define CKALG_KTHEORY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ckalg/matrix_graph.hpp"
#include "ckalg/numbers.hpp"

namespace ckalg {

struct SmithDecomposition {
  IntegerMatrix U;  // rows x rows, unimodular
  IntegerMatrix V;  // cols x cols, unimodular
  IntegerMatrix D;  // U M V
  std::vector<Integer> factors;  // diagonal of D, min(rows, cols) entries
};

inline IntegerMatrix integer_identity(std::size_t n) {
  IntegerMatrix out(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

namespace detail {

class SmithReducer {
 public:
  explicit SmithReducer(IntegerMatrix m)
      : d_(std::move(m)), rows_(d_.size()), cols_(rows_ == 0 ? 0 : d_[0].size()), u_(integer_identity(rows_)), v_(integer_identity(cols_)) {}

  SmithDecomposition run() {
    const std::size_t steps = std::min(rows_, cols_);
    for (std::size_t t = 0; t < steps; ++t) {
      if (!move_smallest_to(t)) break;
      for (;;) {
        if (!clear_cross(t)) continue;
        // d_t must divide the remaining block; otherwise fold a bad row in.
        const auto bad = nondivisible_row(t);
        if (!bad) break;
        add_row(t, *bad, 1);
      }
      if (d_[t][t] < 0) negate_row(t);
    }
    SmithDecomposition out{std::move(u_), std::move(v_), d_, {}};
    for (std::size_t t = 0; t < steps; ++t) out.factors.push_back(d_[t][t]);
    return out;
  }

 private:
  // Smallest nonzero |entry| of the trailing block moved to (t, t).
  bool move_smallest_to(std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < rows_; ++i)
      for (std::size_t j = t; j < cols_; ++j)
        if (d_[i][j] != 0 && (!best || abs(d_[i][j]) < abs(d_[best->first][best->second]))) best = {{i, j}};
    if (!best) return false;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return true;
  }

  // Reduces row and column t by the pivot. Returns false when a remainder
  // survived and a new pivot was moved in.
  bool clear_cross(std::size_t t) {
    bool clean = true;
    for (std::size_t i = t + 1; i < rows_; ++i) {
      if (d_[i][t] == 0) continue;
      add_row(i, t, -(d_[i][t] / d_[t][t]));
      clean = clean && d_[i][t] == 0;
    }
    for (std::size_t j = t + 1; j < cols_; ++j) {
      if (d_[t][j] == 0) continue;
      add_col(j, t, -(d_[t][j] / d_[t][t]));
      clean = clean && d_[t][j] == 0;
    }
    if (clean) return true;
    std::optional<std::pair<std::size_t, std::size_t>> best;
    auto consider = [&](std::size_t i, std::size_t j) {
      if (d_[i][j] != 0 && (!best || abs(d_[i][j]) < abs(d_[best->first][best->second]))) best = {{i, j}};
    };
    for (std::size_t i = t; i < rows_; ++i) consider(i, t);
    for (std::size_t j = t + 1; j < cols_; ++j) consider(t, j);
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return false;
  }

  std::optional<std::size_t> nondivisible_row(std::size_t t) const {
    for (std::size_t i = t + 1; i < rows_; ++i)
      for (std::size_t j = t + 1; j < cols_; ++j)
        if (d_[i][j] % d_[t][t] != 0) return i;
    return std::nullopt;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(d_[a], d_[b]);
    std::swap(u_[a], u_[b]);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : d_) std::swap(row[a], row[b]);
    for (auto& row : v_) std::swap(row[a], row[b]);
  }
  // row_dst += c * row_src
  void add_row(std::size_t dst, std::size_t src, const Integer& c) {
    for (std::size_t j = 0; j < cols_; ++j) d_[dst][j] += c * d_[src][j];
    for (std::size_t j = 0; j < rows_; ++j) u_[dst][j] += c * u_[src][j];
  }
  void add_col(std::size_t dst, std::size_t src, const Integer& c) {
    for (std::size_t i = 0; i < rows_; ++i) d_[i][dst] += c * d_[i][src];
    for (std::size_t i = 0; i < cols_; ++i) v_[i][dst] += c * v_[i][src];
  }
  void negate_row(std::size_t t) {
    for (auto& x : d_[t]) x = -x;
    for (auto& x : u_[t]) x = -x;
  }

  IntegerMatrix d_;
  std::size_t rows_, cols_;
  IntegerMatrix u_, v_;
};

}  // namespace detail

// Pivot: smallest nonzero absolute value. Factors are nonnegative, each
// dividing the next, zeros last.
inline SmithDecomposition smith_normal_form(const IntegerMatrix& m) { return detail::SmithReducer(m).run(); }

struct KGroups {
  std::vector<Integer> torsion;  // invariant factors > 1
  int k0_rank = 0;
  int k1_rank = 0;

  bool trivial() const { return torsion.empty() && k0_rank == 0 && k1_rank == 0; }

  // "0", "Z_3", "Z^2+Z_2+Z_4"
  std::string k0_str() const {
    std::vector<std::string> parts;
    if (k0_rank == 1) parts.push_back("Z");
    if (k0_rank > 1) parts.push_back("Z^" + std::to_string(k0_rank));
    for (const auto& d : torsion) parts.push_back("Z_" + d.str());
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += "+" + parts[i];
    return out;
  }
  std::string k1_str() const {
    if (k1_rank == 0) return "0";
    return k1_rank == 1 ? "Z" : "Z^" + std::to_string(k1_rank);
  }
};

// K_0 = coker(I - A^t), K_1 = ker(I - A^t).
inline IntegerMatrix k_theory_matrix(const ZeroOneMatrix& a) {
  const auto n = static_cast<std::size_t>(a.size());
  IntegerMatrix m = integer_identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(static_cast<int>(j) + 1, static_cast<int>(i) + 1)) m[i][j] -= 1;
  return m;
}

inline KGroups k_groups(const ZeroOneMatrix& a) {
  KGroups out;
  for (const auto& d : smith_normal_form(k_theory_matrix(a)).factors) {
    if (d == 0) {
      ++out.k0_rank;
      ++out.k1_rank;
    } else if (d > 1) {
      out.torsion.push_back(d);
    }
  }
  return out;
}

struct O2Verdict {
  bool value;
  std::optional<int> aperiodicity;
  KGroups groups;
  std::string explanation;
};

// Hypothesis check only: the identification with O_2 is the external
// Kirchberg-Phillips classification and is not verified here.
inline O2Verdict is_O2(const ZeroOneMatrix& a) {
  O2Verdict v{false, is_aperiodic(a), k_groups(a), ""};
  v.value = v.aperiodicity.has_value() && v.groups.trivial();
  if (!v.aperiodicity) {
    v.explanation = "A is not aperiodic, so O_A is not known to be a Kirchberg algebra";
  } else if (!v.groups.trivial()) {
    v.explanation = "O_A is a unital Kirchberg algebra but K0=" + v.groups.k0_str() + " K1=" + v.groups.k1_str() + " differ from those of O_2";
  } else {
    v.explanation = "A is aperiodic (m=" + std::to_string(*v.aperiodicity) +
                    ") and K0=K1=0; by the Kirchberg-Phillips classification (external, not checked) O_A is isomorphic to O_2";
  }
  return v;
}

}  // namespace ckalg

#endif  // CKALG_KTHEORY_HPP
