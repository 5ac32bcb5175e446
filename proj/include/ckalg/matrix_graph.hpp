#ifndef CKALG_MATRIX_GRAPH_HPP
#define CKALG_MATRIX_GRAPH_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ckalg/errors.hpp"
#include "ckalg/numbers.hpp"

namespace ckalg {

// A finite sequence of letters in {1..n}. The empty word is allowed.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters) : letters_(letters) {}
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}

  // Digits-only shorthand for tests and literals: "121" -> (1,2,1).
  static Word from_digits(std::string_view digits) {
    std::vector<int> out;
    for (char c : digits) {
      if (c < '1' || c > '9') fail(ErrorKind::Parse, "bad letter '" + std::string(1, c) + "' in word");
      out.push_back(c - '0');
    }
    return Word(std::move(out));
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int front() const { return letters_.front(); }
  int back() const { return letters_.back(); }
  const std::vector<int>& letters() const noexcept { return letters_; }

  Word operator+(const Word& tail) const {
    Word out = *this;
    out.letters_.insert(out.letters_.end(), tail.letters_.begin(), tail.letters_.end());
    return out;
  }
  Word appended(int letter) const {
    Word out = *this;
    out.letters_.push_back(letter);
    return out;
  }
  Word prepended(int letter) const {
    Word out;
    out.letters_.reserve(size() + 1);
    out.letters_.push_back(letter);
    out.letters_.insert(out.letters_.end(), letters_.begin(), letters_.end());
    return out;
  }
  Word without_last() const { return Word(std::vector<int>(letters_.begin(), letters_.end() - 1)); }
  Word suffix_from(std::size_t pos) const {
    return Word(std::vector<int>(letters_.begin() + static_cast<std::ptrdiff_t>(pos), letters_.end()));
  }
  bool has_prefix(const Word& prefix) const {
    return prefix.size() <= size() && std::equal(prefix.letters_.begin(), prefix.letters_.end(), letters_.begin());
  }

  std::string str() const {
    bool compact = std::all_of(letters_.begin(), letters_.end(), [](int l) { return l >= 1 && l <= 9; });
    std::string out;
    if (compact) {
      for (int l : letters_) out.push_back(static_cast<char>('0' + l));
      return out;
    }
    out = "(";
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(letters_[i]);
    }
    return out + ")";
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<int> letters_;
};

// The defining n x n matrix with entries in {0,1}, n >= 2, no zero rows or
// columns. Only constructible through validate(). Indices are 1-based.
class ZeroOneMatrix {
 public:
  static ZeroOneMatrix validate(const std::vector<std::vector<int>>& rows) {
    const std::size_t n = rows.size();
    for (const auto& r : rows) {
      if (r.size() != n) fail(ErrorKind::Parse, "matrix is not square");
      for (int v : r)
        if (v != 0 && v != 1) fail(ErrorKind::Parse, "entry " + std::to_string(v) + " is not 0 or 1");
    }
    if (n < 2) fail(ErrorKind::TooSmall, "matrix size " + std::to_string(n) + " < 2");
    ZeroOneMatrix m(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.entries_[i * n + j] = static_cast<std::uint8_t>(rows[i][j]);
    for (int i = 1; i <= m.n_; ++i) {
      bool any = false;
      for (int j = 1; j <= m.n_; ++j) any = any || m(i, j);
      if (!any) fail(ErrorKind::ZeroRowOrColumn, "row " + std::to_string(i) + " is zero");
    }
    for (int j = 1; j <= m.n_; ++j) {
      bool any = false;
      for (int i = 1; i <= m.n_; ++i) any = any || m(i, j);
      if (!any) fail(ErrorKind::ZeroRowOrColumn, "column " + std::to_string(j) + " is zero");
    }
    return m;
  }

  static ZeroOneMatrix full(int n) { return validate(std::vector<std::vector<int>>(n, std::vector<int>(n, 1))); }
  static ZeroOneMatrix identity(int n) {
    std::vector<std::vector<int>> rows(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) rows[i][i] = 1;
    return validate(rows);
  }

  int size() const noexcept { return n_; }
  bool operator()(int i, int j) const { return entries_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))] != 0; }

  std::vector<std::vector<int>> rows() const {
    std::vector<std::vector<int>> out(n_, std::vector<int>(n_));
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) out[i - 1][j - 1] = (*this)(i, j) ? 1 : 0;
    return out;
  }

  bool columns_equal(int i, int j) const {
    for (int k = 1; k <= n_; ++k)
      if ((*this)(k, i) != (*this)(k, j)) return false;
    return true;
  }
  bool rows_equal(int i, int j) const {
    for (int k = 1; k <= n_; ++k)
      if ((*this)(i, k) != (*this)(j, k)) return false;
    return true;
  }
  // q_a q_b != 0
  bool rows_overlap(int a, int b) const {
    for (int k = 1; k <= n_; ++k)
      if ((*this)(a, k) && (*this)(b, k)) return true;
    return false;
  }

  // A word may be extended by `letter` (the empty word extends by anything).
  bool extends(const Word& w, int letter) const { return w.empty() || (*this)(w.back(), letter); }

  bool admissible(const Word& w) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] < 1 || w[i] > n_) return false;
      if (i + 1 < w.size() && !(*this)(w[i], w[i + 1])) return false;
    }
    return true;
  }

  // Equivalence classes of {1..n} under column equality, each sorted, ordered
  // by smallest member. These index the minimal projections of C*(q_1..q_n).
  std::vector<std::vector<int>> column_classes() const {
    std::vector<std::vector<int>> classes;
    for (int i = 1; i <= n_; ++i) {
      bool placed = false;
      for (auto& c : classes)
        if (columns_equal(c.front(), i)) {
          c.push_back(i);
          placed = true;
          break;
        }
      if (!placed) classes.push_back({i});
    }
    return classes;
  }

  std::string str() const {
    std::ostringstream os;
    os << n_ << "\n";
    for (int i = 1; i <= n_; ++i) {
      for (int j = 1; j <= n_; ++j) os << (j > 1 ? " " : "") << ((*this)(i, j) ? 1 : 0);
      os << "\n";
    }
    return os.str();
  }

  friend bool operator==(const ZeroOneMatrix&, const ZeroOneMatrix&) = default;

 private:
  explicit ZeroOneMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n * n), 0) {}
  int n_;
  std::vector<std::uint8_t> entries_;
};

using IntegerMatrix = std::vector<std::vector<Integer>>;

inline IntegerMatrix to_integer_matrix(const ZeroOneMatrix& a) {
  IntegerMatrix out(a.size(), std::vector<Integer>(a.size()));
  for (int i = 1; i <= a.size(); ++i)
    for (int j = 1; j <= a.size(); ++j) out[i - 1][j - 1] = a(i, j) ? 1 : 0;
  return out;
}

inline IntegerMatrix multiply(const IntegerMatrix& x, const IntegerMatrix& y) {
  const std::size_t n = x.size(), m = y.empty() ? 0 : y[0].size(), k = y.size();
  IntegerMatrix out(n, std::vector<Integer>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (x[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += x[i][l] * y[l][j];
    }
  return out;
}

// Smallest m with A^m entrywise positive, searched up to the Wielandt bound
// (n-1)^2 + 1; std::nullopt when the matrix is not aperiodic.
inline std::optional<int> is_aperiodic(const ZeroOneMatrix& a) {
  const int n = a.size();
  const int bound = (n - 1) * (n - 1) + 1;
  const IntegerMatrix base = to_integer_matrix(a);
  IntegerMatrix power = base;
  for (int m = 1; m <= bound; ++m) {
    if (m > 1) power = multiply(power, base);
    bool positive = true;
    for (const auto& row : power)
      for (const auto& v : row) positive = positive && v > 0;
    if (positive) return m;
  }
  return std::nullopt;
}

inline bool is_permutation(const ZeroOneMatrix& a) {
  const int n = a.size();
  for (int i = 1; i <= n; ++i) {
    int row = 0, col = 0;
    for (int j = 1; j <= n; ++j) {
      row += a(i, j);
      col += a(j, i);
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

// Admissible words of length k in lexicographic order. `first` restricts the
// first letter, `last` the final letter (both ignored for k = 0).
inline std::vector<Word> admissible_words(const ZeroOneMatrix& a, int k,
                                          const std::optional<std::set<int>>& first = std::nullopt,
                                          const std::optional<std::set<int>>& last = std::nullopt) {
  std::vector<Word> out;
  if (k < 0) return out;
  if (k == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> stack;
  std::function<void()> grow = [&]() {
    if (static_cast<int>(stack.size()) == k) {
      if (!last || last->contains(stack.back())) out.emplace_back(stack);
      return;
    }
    for (int l = 1; l <= a.size(); ++l) {
      if (stack.empty() ? (first && !first->contains(l)) : !a(stack.back(), l)) continue;
      stack.push_back(l);
      grow();
      stack.pop_back();
    }
  };
  grow();
  return out;
}

struct Edge {
  std::string id;
  std::string source;
  std::string range;
};

// Finite directed graph with named vertices and at least two edges.
class FiniteGraph {
 public:
  static FiniteGraph make(std::vector<std::string> vertices, std::vector<Edge> edges) {
    std::set<std::string> known(vertices.begin(), vertices.end());
    if (known.size() != vertices.size()) fail(ErrorKind::InvalidGraph, "duplicate vertex");
    std::set<std::string> ids;
    for (const auto& e : edges) {
      if (!known.contains(e.source) || !known.contains(e.range))
        fail(ErrorKind::InvalidGraph, "edge " + e.id + " uses an undeclared vertex");
      if (!ids.insert(e.id).second) fail(ErrorKind::InvalidGraph, "duplicate edge id " + e.id);
    }
    if (edges.size() < 2) fail(ErrorKind::InvalidGraph, "graph needs at least two edges");
    FiniteGraph g;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);
    return g;
  }

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
};

// A_E(e,f) = 1 iff r(e) = s(f); rows and columns follow the edge order.
inline ZeroOneMatrix edge_matrix(const FiniteGraph& g) {
  const auto& edges = g.edges();
  std::vector<std::vector<int>> rows(edges.size(), std::vector<int>(edges.size(), 0));
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (std::size_t f = 0; f < edges.size(); ++f) rows[e][f] = edges[e].range == edges[f].source ? 1 : 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    bool succ = false, pred = false;
    for (std::size_t f = 0; f < edges.size(); ++f) {
      succ = succ || rows[e][f];
      pred = pred || rows[f][e];
    }
    if (!succ) fail(ErrorKind::ZeroRowOrColumn, "edge " + edges[e].id + " has no successor (row " + std::to_string(e + 1) + ")");
    if (!pred) fail(ErrorKind::ZeroRowOrColumn, "edge " + edges[e].id + " has no predecessor (column " + std::to_string(e + 1) + ")");
  }
  return ZeroOneMatrix::validate(rows);
}

// Edge-level reading: aperiodicity of the edge matrix. Graphs whose edge
// matrix does not validate (sources or sinks) are reported as false.
inline bool is_strongly_connected_aperiodic(const FiniteGraph& g) {
  try {
    return is_aperiodic(edge_matrix(g)).has_value();
  } catch (const Error&) {
    return false;
  }
}

namespace detail {

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) lines.pop_back();
  return lines;
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

inline long parse_int(const std::string& token) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(token, &pos);
  } catch (const std::exception&) {
    fail(ErrorKind::Parse, "expected an integer, got '" + token + "'");
  }
  if (pos != token.size()) fail(ErrorKind::Parse, "expected an integer, got '" + token + "'");
  return v;
}

}  // namespace detail

// Line 1: n. Lines 2..n+1: n space-separated 0/1 entries. Nothing else.
inline ZeroOneMatrix parse_matrix(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) fail(ErrorKind::Parse, "empty matrix file");
  const auto head = detail::tokens(lines[0]);
  if (head.size() != 1) fail(ErrorKind::Parse, "first line must hold the size only");
  const long n = detail::parse_int(head[0]);
  if (n < 1) fail(ErrorKind::Parse, "matrix size must be positive");
  if (lines.size() != static_cast<std::size_t>(n) + 1)
    fail(ErrorKind::Parse, "expected " + std::to_string(n) + " rows, found " + std::to_string(lines.size() - 1));
  std::vector<std::vector<int>> rows;
  for (long i = 1; i <= n; ++i) {
    const auto t = detail::tokens(lines[i]);
    if (t.size() != static_cast<std::size_t>(n)) fail(ErrorKind::Parse, "row " + std::to_string(i) + " has wrong length");
    std::vector<int> row;
    for (const auto& tok : t) {
      if (tok != "0" && tok != "1") fail(ErrorKind::Parse, "entry '" + tok + "' is not 0 or 1");
      row.push_back(tok == "1" ? 1 : 0);
    }
    rows.push_back(std::move(row));
  }
  return ZeroOneMatrix::validate(rows);
}

// Line 1: "vertices: v1 v2 ..."; then one "edge <id> <source> <range>" per line.
inline FiniteGraph parse_graph(const std::string& text) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) fail(ErrorKind::Parse, "empty graph file");
  auto head = detail::tokens(lines[0]);
  if (head.empty() || head[0] != "vertices:") fail(ErrorKind::Parse, "first line must start with 'vertices:'");
  std::vector<std::string> vertices(head.begin() + 1, head.end());
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto t = detail::tokens(lines[i]);
    if (t.size() != 4 || t[0] != "edge") fail(ErrorKind::Parse, "malformed edge line " + std::to_string(i + 1));
    edges.push_back({t[1], t[2], t[3]});
  }
  return FiniteGraph::make(std::move(vertices), std::move(edges));
}

}  // namespace ckalg

#endif  // CKALG_MATRIX_GRAPH_HPP
