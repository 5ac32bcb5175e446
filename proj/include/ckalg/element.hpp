#ifndef CKALG_ELEMENT_HPP
#define CKALG_ELEMENT_HPP

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckalg/cyclotomic.hpp"
#include "ckalg/errors.hpp"
#include "ckalg/matrix_graph.hpp"

namespace ckalg {

// The pair (mu, nu) standing for s_mu s_nu^*.
struct WordPair {
  Word mu;
  Word nu;

  int degree() const { return static_cast<int>(mu.size()) - static_cast<int>(nu.size()); }
  std::size_t long_side() const { return std::max(mu.size(), nu.size()); }
  bool terminal_matched() const { return !mu.empty() && !nu.empty() && mu.back() == nu.back(); }

  friend bool operator==(const WordPair&, const WordPair&) = default;
  friend auto operator<=>(const WordPair&, const WordPair&) = default;
};

using TermMap = std::map<WordPair, RootScalar>;
using MatrixPtr = std::shared_ptr<const ZeroOneMatrix>;

// s_mu s_nu^* != 0
inline bool pair_nonvanishing(const ZeroOneMatrix& a, const WordPair& p) {
  if (!a.admissible(p.mu) || !a.admissible(p.nu)) return false;
  if (p.mu.empty() || p.nu.empty()) return true;
  return a.rows_overlap(p.mu.back(), p.nu.back());
}

// Homogeneous terms of a single degree with every long-side word of length
// `level` and terminal letters matched. These pairs are matrix units inside
// the finite-dimensional blocks of the core, hence linearly independent.
struct LeveledForm {
  int level = 0;
  int degree = 0;
  TermMap terms;

  friend bool operator==(const LeveledForm&, const LeveledForm&) = default;
};

namespace detail {

inline void accumulate(TermMap& map, const WordPair& key, const RootScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = map.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) map.erase(it);
  }
}

// Expand homogeneous terms so every long side has length `level`.
inline TermMap expand_terms(const ZeroOneMatrix& a, const TermMap& terms, int level) {
  TermMap out;
  std::vector<std::pair<WordPair, RootScalar>> stack(terms.begin(), terms.end());
  while (!stack.empty()) {
    auto [pair, c] = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(pair.long_side()) > level)
      fail(ErrorKind::LevelTooSmall, "term longer than level " + std::to_string(level));
    if (static_cast<int>(pair.long_side()) == level) {
      if (!pair.terminal_matched())
        fail(ErrorKind::LevelTooSmall, "level " + std::to_string(level) + " leaves unmatched terminal letters");
      accumulate(out, pair, c);
      continue;
    }
    for (int l = 1; l <= a.size(); ++l)
      if (a.extends(pair.mu, l) && a.extends(pair.nu, l)) stack.push_back({{pair.mu.appended(l), pair.nu.appended(l)}, c});
  }
  return out;
}

// Bottom-up contraction of complete equal-coefficient blocks
// {s_{mu l} s_{nu l}^* : A(mu_end,l) A(nu_end,l) = 1} into s_mu s_nu^*.
inline TermMap contract_terms(const ZeroOneMatrix& a, TermMap terms) {
  std::size_t top = 0;
  for (const auto& [p, c] : terms) top = std::max(top, p.long_side());
  for (std::size_t len = top; len >= 1; --len) {
    std::map<WordPair, std::vector<TermMap::iterator>> groups;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      const WordPair& p = it->first;
      if (p.long_side() != len || p.mu.empty() || p.nu.empty()) continue;
      groups[{p.mu.without_last(), p.nu.without_last()}].push_back(it);
    }
    for (auto& [parent, members] : groups) {
      std::vector<int> block;
      for (int l = 1; l <= a.size(); ++l)
        if (a.extends(parent.mu, l) && a.extends(parent.nu, l)) block.push_back(l);
      if (members.size() != block.size()) continue;
      bool complete = true;
      for (std::size_t i = 0; i < members.size() && complete; ++i) {
        const WordPair& p = members[i]->first;
        complete = p.mu.back() == p.nu.back() && p.mu.back() == block[i] &&
                   members[i]->second == members[0]->second;
      }
      if (!complete) continue;
      const RootScalar c = members[0]->second;
      for (auto it : members) terms.erase(it);
      accumulate(terms, parent, c);
    }
  }
  return terms;
}

inline std::map<int, TermMap> split_by_degree(const TermMap& terms) {
  std::map<int, TermMap> parts;
  for (const auto& [p, c] : terms) parts[p.degree()].emplace(p, c);
  return parts;
}

inline int sufficient_level(const TermMap& terms) {
  std::size_t top = 0;
  for (const auto& [p, c] : terms) top = std::max(top, p.long_side());
  return static_cast<int>(top) + 1;
}

}  // namespace detail

// A finite linear combination of s_mu s_nu^* with cyclotomic coefficients,
// held in canonical (fully contracted) form. The zero element has no terms.
class CKElement {
 public:
  explicit CKElement(MatrixPtr a) : a_(std::move(a)) {}

  // Drops vanishing pairs, then canonicalizes.
  static CKElement from_terms(MatrixPtr a, const TermMap& raw) {
    CKElement x(std::move(a));
    TermMap clean;
    for (const auto& [p, c] : raw)
      if (pair_nonvanishing(*x.a_, p)) detail::accumulate(clean, p, c);
    x.terms_ = canonicalize(*x.a_, clean);
    return x;
  }

  const ZeroOneMatrix& matrix() const { return *a_; }
  const MatrixPtr& matrix_ptr() const { return a_; }
  const TermMap& terms() const { return terms_; }
  bool has_no_terms() const { return terms_.empty(); }

  std::set<int> degrees() const {
    std::set<int> out;
    for (const auto& [p, c] : terms_) out.insert(p.degree());
    return out;
  }
  bool is_homogeneous() const { return degrees().size() <= 1; }
  int degree() const {
    const auto d = degrees();
    if (d.size() > 1) fail(ErrorKind::MixedDegree, "element mixes degrees");
    return d.empty() ? 0 : *d.begin();
  }
  CKElement homogeneous_part(int d) const {
    CKElement out(a_);
    for (const auto& [p, c] : terms_)
      if (p.degree() == d) out.terms_.emplace(p, c);
    return out;
  }
  std::size_t max_word_length() const {
    std::size_t top = 0;
    for (const auto& [p, c] : terms_) top = std::max(top, p.long_side());
    return top;
  }

  CKElement adjoint() const {
    TermMap out;
    for (const auto& [p, c] : terms_) out.emplace(WordPair{p.nu, p.mu}, c.conj());
    return from_canonical(a_, std::move(out));
  }

  CKElement operator-() const {
    CKElement out = *this;
    for (auto& [p, c] : out.terms_) c = -c;
    return out;
  }

  friend CKElement operator+(const CKElement& x, const CKElement& y) {
    check_same(x, y);
    TermMap raw = x.terms_;
    for (const auto& [p, c] : y.terms_) detail::accumulate(raw, p, c);
    return from_canonical(x.a_, canonicalize(*x.a_, raw));
  }
  friend CKElement operator-(const CKElement& x, const CKElement& y) { return x + (-y); }

  friend CKElement operator*(const RootScalar& c, const CKElement& x) {
    if (c.is_zero()) return CKElement(x.a_);
    TermMap out;
    for (const auto& [p, v] : x.terms_) out.emplace(p, c * v);
    return from_canonical(x.a_, std::move(out));
  }
  friend CKElement operator*(const CKElement& x, const CKElement& y) { return multiply(x, y); }

  CKElement& operator+=(const CKElement& o) { return *this = *this + o; }
  CKElement& operator*=(const CKElement& o) { return *this = *this * o; }

  // Product via the word rule, re-canonicalized:
  //   rho = nu lambda  ->  s_{mu lambda} s_tau^*
  //   nu = rho lambda  ->  s_mu s_{tau lambda}^*
  //   nu = rho         ->  s_mu q_{nu_end} s_tau^*, expanded by relation 2
  //   otherwise        ->  0
  static CKElement multiply(const CKElement& x, const CKElement& y) {
    check_same(x, y);
    const ZeroOneMatrix& a = *x.a_;
    TermMap raw;
    for (const auto& [left, c1] : x.terms_) {
      for (const auto& [right, c2] : y.terms_) {
        const Word& mu = left.mu;
        const Word& nu = left.nu;
        const Word& rho = right.mu;
        const Word& tau = right.nu;
        if (rho.has_prefix(nu)) {
          if (rho.size() == nu.size()) {
            if (nu.empty()) {
              add_if_nonvanishing(a, raw, {mu, tau}, c1 * c2);
            } else {
              const RootScalar c = c1 * c2;
              for (int j = 1; j <= a.size(); ++j)
                if (a(nu.back(), j) && a.extends(mu, j) && a.extends(tau, j))
                  add_if_nonvanishing(a, raw, {mu.appended(j), tau.appended(j)}, c);
            }
          } else {
            const Word lambda = rho.suffix_from(nu.size());
            if (a.extends(mu, lambda.front())) add_if_nonvanishing(a, raw, {mu + lambda, tau}, c1 * c2);
          }
        } else if (nu.has_prefix(rho)) {
          const Word lambda = nu.suffix_from(rho.size());
          if (a.extends(tau, lambda.front())) add_if_nonvanishing(a, raw, {mu, tau + lambda}, c1 * c2);
        }
      }
    }
    return from_canonical(x.a_, canonicalize(a, raw));
  }

  // Leveled expansion of a homogeneous element; `level` is the long-side length.
  LeveledForm expand_to_level(int level) const {
    LeveledForm out;
    out.level = level;
    out.degree = degree();
    out.terms = detail::expand_terms(*a_, terms_, level);
    return out;
  }

  static CKElement from_leveled(MatrixPtr a, const LeveledForm& form) {
    CKElement x(a);
    x.terms_ = detail::contract_terms(*a, form.terms);
    return x;
  }

  // Exact zero test: every homogeneous part vanishes at a sufficient level.
  bool is_zero() const {
    for (const auto& [d, part] : detail::split_by_degree(terms_)) {
      if (!detail::expand_terms(*a_, part, detail::sufficient_level(part)).empty()) return false;
    }
    return true;
  }

  // Equality in the algebra, decided by leveled expansion of the difference.
  bool equals(const CKElement& y) const {
    check_same(*this, y);
    return (*this - y).is_zero();
  }
  friend bool operator==(const CKElement& x, const CKElement& y) { return x.equals(y); }

  // Coefficient of s_mu s_nu^* in the canonical form (0 if absent).
  RootScalar coefficient(const WordPair& p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? RootScalar(0) : it->second;
  }

  std::string str() const;

  static void check_same(const CKElement& x, const CKElement& y) {
    if (x.a_ != y.a_ && !(*x.a_ == *y.a_)) fail(ErrorKind::MatrixMismatch, "elements over different matrices");
  }

 private:

  static void add_if_nonvanishing(const ZeroOneMatrix& a, TermMap& raw, const WordPair& p, const RootScalar& c) {
    if (pair_nonvanishing(a, p)) detail::accumulate(raw, p, c);
  }

  static CKElement from_canonical(MatrixPtr a, TermMap terms) {
    CKElement x(std::move(a));
    x.terms_ = std::move(terms);
    return x;
  }

  // Per degree: expand to a sufficient level, then contract bottom-up. The
  // result depends only on the element, not on the input representation.
  static TermMap canonicalize(const ZeroOneMatrix& a, const TermMap& raw) {
    TermMap out;
    for (const auto& [d, part] : detail::split_by_degree(raw)) {
      TermMap leveled = detail::expand_terms(a, part, detail::sufficient_level(part));
      for (auto& [p, c] : detail::contract_terms(a, std::move(leveled))) out.emplace(p, std::move(c));
    }
    return out;
  }

  MatrixPtr a_;
  TermMap terms_;
};

inline std::string pair_body(const WordPair& p) {
  if (p.mu.empty() && p.nu.empty()) return "1";
  if (p.nu.empty()) return "s" + p.mu.str();
  if (p.mu.empty()) return "s" + p.nu.str() + "*";
  return "s" + p.mu.str() + "." + p.nu.str() + "*";
}

// Renders terms in canonical order, e.g. "s11.11* - 1/2 s12.21* + (z3^1) s2".
inline std::string CKElement::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [p, c] : terms_) {
    std::string term;
    const std::string body = pair_body(p);
    const bool unit = p.mu.empty() && p.nu.empty();
    if (c == RootScalar(1))
      term = body;
    else if (c == RootScalar(-1))
      term = "-" + body;
    else
      term = unit ? c.str() : c.str() + " " + body;
    if (out.empty())
      out = term;
    else if (term.front() == '-')
      out += " - " + term.substr(1);
    else
      out += " + " + term;
  }
  return out;
}

// Holds the matrix and hands out generators and parsed literals.
class CKAlgebra {
 public:
  explicit CKAlgebra(ZeroOneMatrix a) : a_(std::make_shared<const ZeroOneMatrix>(std::move(a))) {}
  explicit CKAlgebra(MatrixPtr a) : a_(std::move(a)) {}

  const ZeroOneMatrix& matrix() const { return *a_; }
  const MatrixPtr& matrix_ptr() const { return a_; }
  int n() const { return a_->size(); }

  CKElement zero() const { return CKElement(a_); }
  CKElement unit() const { return term({}, {}); }
  CKElement scalar(const RootScalar& c) const { return c * unit(); }
  CKElement s(int i) const { return term(Word{check(i)}, {}); }
  CKElement s_star(int i) const { return term({}, Word{check(i)}); }
  CKElement p(int i) const { return term(Word{check(i)}, Word{check(i)}); }
  CKElement q(int i) const {
    check(i);
    TermMap raw;
    for (int j = 1; j <= n(); ++j)
      if ((*a_)(i, j)) raw.emplace(WordPair{Word{j}, Word{j}}, RootScalar(1));
    return CKElement::from_terms(a_, raw);
  }
  CKElement term(const Word& mu, const Word& nu, const RootScalar& c = RootScalar(1)) const {
    return CKElement::from_terms(a_, TermMap{{WordPair{mu, nu}, c}});
  }
  // s_mu s_mu^*
  CKElement range_projection(const Word& mu) const { return term(mu, mu); }

  // Literal grammar, e.g. "1*11.21*", "s11.21*", "p1 - p2", "1/2 z12^3 q2",
  // "(1 + z4^1) s1". A bare "z^k" uses `default_order` for zeta.
  CKElement parse(const std::string& text, int default_order = 0) const;

 private:
  int check(int i) const {
    if (i < 1 || i > n()) fail(ErrorKind::IndexOutOfRange, "generator index " + std::to_string(i) + " outside 1.." + std::to_string(n()));
    return i;
  }
  MatrixPtr a_;
};

namespace detail {

class LiteralParser {
 public:
  LiteralParser(const CKAlgebra& alg, int default_order) : alg_(alg), default_order_(default_order) {}

  CKElement element(const std::string& text) {
    CKElement out = alg_.zero();
    const auto pieces = split_sum(text);
    if (pieces.empty()) fail(ErrorKind::Parse, "empty element literal");
    for (const auto& [sign, body] : pieces) {
      CKElement t = term(body);
      out = sign < 0 ? out - t : out + t;
    }
    return out;
  }

  RootScalar scalar(const std::string& text) {
    RootScalar out(0);
    const auto pieces = split_sum(text);
    if (pieces.empty()) fail(ErrorKind::Parse, "empty coefficient");
    for (const auto& [sign, body] : pieces) {
      RootScalar t = product(body);
      out += sign < 0 ? -t : t;
    }
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
  }

  // Split at top-level '+'/'-' (outside parentheses, not inside "z^").
  static std::vector<std::pair<int, std::string>> split_sum(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    int depth = 0, sign = 1;
    std::string cur;
    auto flush = [&](bool require) {
      const std::string t = trim(cur);
      if (t.empty()) {
        if (require) fail(ErrorKind::Parse, "dangling sign in '" + text + "'");
      } else {
        out.emplace_back(sign, t);
      }
      cur.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char ch = text[i];
      if (ch == '(') ++depth;
      if (ch == ')') {
        if (--depth < 0) fail(ErrorKind::Parse, "unbalanced ')' in '" + text + "'");
      }
      if (depth == 0 && (ch == '+' || ch == '-')) {
        const bool exponent = i > 0 && text[i - 1] == '^';
        if (!exponent) {
          const bool leading = trim(cur).empty();
          if (!leading) {
            flush(true);
            sign = ch == '-' ? -1 : 1;
          } else {
            sign *= ch == '-' ? -1 : 1;
          }
          continue;
        }
      }
      cur.push_back(ch);
    }
    if (depth != 0) fail(ErrorKind::Parse, "unbalanced '(' in '" + text + "'");
    flush(!out.empty() || !trim(cur).empty());
    return out;
  }

  // Product of factors: rationals "a/b", roots "z^k" / "zN^k", parenthesized sums.
  RootScalar product(const std::string& text) {
    RootScalar out(1);
    std::size_t i = 0;
    bool any = false;
    while (i < text.size()) {
      const char ch = text[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      any = true;
      if (ch == '(') {
        int depth = 0;
        std::size_t j = i;
        for (; j < text.size(); ++j) {
          if (text[j] == '(') ++depth;
          if (text[j] == ')' && --depth == 0) break;
        }
        if (j == text.size()) fail(ErrorKind::Parse, "unbalanced '(' in coefficient");
        out *= scalar(text.substr(i + 1, j - i - 1));
        i = j + 1;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        Rational q(text.substr(i, j - i));
        if (j < text.size() && text[j] == '/') {
          std::size_t k = j + 1;
          while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
          if (k == j + 1) fail(ErrorKind::Parse, "missing denominator in coefficient");
          const Rational den(text.substr(j + 1, k - j - 1));
          if (den == 0) fail(ErrorKind::Parse, "zero denominator");
          q /= den;
          j = k;
        }
        out *= RootScalar(q);
        i = j;
      } else if (ch == 'z') {
        std::size_t j = i + 1;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        int order = default_order_;
        if (j > i + 1) order = std::stoi(text.substr(i + 1, j - i - 1));
        if (order < 1) fail(ErrorKind::Parse, "root of unity without an order (write zN^k)");
        long k = 1;
        if (j < text.size() && text[j] == '^') {
          std::size_t e = j + 1;
          bool neg = false;
          if (e < text.size() && (text[e] == '-' || text[e] == '+')) neg = text[e++] == '-';
          std::size_t f = e;
          while (f < text.size() && std::isdigit(static_cast<unsigned char>(text[f]))) ++f;
          if (f == e) fail(ErrorKind::Parse, "missing exponent after '^'");
          k = std::stol(text.substr(e, f - e));
          if (neg) k = -k;
          j = f;
        }
        out *= RootScalar::root_of_unity(order, k);
        i = j;
      } else {
        fail(ErrorKind::Parse, "unexpected '" + std::string(1, ch) + "' in coefficient");
      }
    }
    if (!any) fail(ErrorKind::Parse, "empty coefficient");
    return out;
  }

  Word word(const std::string& text) {
    if (text.empty()) return {};
    if (text.front() == '(') {
      if (text.back() != ')') fail(ErrorKind::Parse, "bad word '" + text + "'");
      std::vector<int> letters;
      std::string inner = text.substr(1, text.size() - 2);
      std::size_t pos = 0;
      while (pos <= inner.size()) {
        const auto comma = inner.find(',', pos);
        const std::string tok = trim(inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        letters.push_back(static_cast<int>(parse_int(tok)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      return Word(letters);
    }
    return Word::from_digits(text);
  }

  // "11.21*", "11", "21*", ".21*", "" (unit)
  CKElement body(const std::string& text) {
    const std::string t = trim(text);
    const auto dot = t.find('.');
    Word mu, nu;
    if (dot != std::string::npos) {
      if (t.back() != '*') fail(ErrorKind::Parse, "expected '*' after the second word in '" + t + "'");
      mu = word(t.substr(0, dot));
      nu = word(t.substr(dot + 1, t.size() - dot - 2));
    } else if (!t.empty() && t.back() == '*') {
      nu = word(t.substr(0, t.size() - 1));
    } else {
      mu = word(t);
    }
    check_letters(mu);
    check_letters(nu);
    return alg_.term(mu, nu);
  }

  void check_letters(const Word& w) {
    for (int l : w.letters())
      if (l < 1 || l > alg_.n()) fail(ErrorKind::IndexOutOfRange, "letter " + std::to_string(l) + " outside 1.." + std::to_string(alg_.n()));
  }

  CKElement term(const std::string& text) {
    // Body introduced by a generator letter outside parentheses.
    int depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char ch = text[i];
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth != 0 || (ch != 'p' && ch != 'q' && ch != 's')) continue;
      std::string coeff = trim(text.substr(0, i));
      if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
      const RootScalar c = coeff.empty() ? RootScalar(1) : scalar(coeff);
      const std::string rest = trim(text.substr(i + 1));
      CKElement g = alg_.zero();
      if (ch == 's') {
        g = body(rest);
      } else {
        const long idx = parse_int(rest);
        if (idx < 1 || idx > alg_.n()) fail(ErrorKind::IndexOutOfRange, "index " + rest + " out of range");
        g = ch == 'p' ? alg_.p(static_cast<int>(idx)) : alg_.q(static_cast<int>(idx));
      }
      return c * g;
    }
    // "coeff*body"
    depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      if (depth == 0 && text[i] == '*') return scalar(trim(text.substr(0, i))) * body(text.substr(i + 1));
    }
    return alg_.scalar(scalar(text));
  }

  const CKAlgebra& alg_;
  int default_order_;
};

}  // namespace detail

inline CKElement CKAlgebra::parse(const std::string& text, int default_order) const {
  detail::LiteralParser parser(*this, default_order);
  return parser.element(text);
}

}  // namespace ckalg

#endif  // CKALG_ELEMENT_HPP
