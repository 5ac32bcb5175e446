#ifndef CKALG_CYCLOTOMIC_HPP
#define CKALG_CYCLOTOMIC_HPP

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "ckalg/errors.hpp"
#include "ckalg/numbers.hpp"

namespace ckalg {

namespace detail {

using IntPoly = std::vector<Integer>;  // little-endian coefficients

// Exact division of monic-divisor integer polynomials.
inline IntPoly poly_divide_exact(IntPoly num, const IntPoly& den) {
  const std::size_t dn = den.size() - 1;
  IntPoly quot(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const Integer c = num[i] / den[dn];
    quot[i - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return quot;
}

// Phi_N, cached. Thread-safe.
inline const IntPoly& cyclotomic_polynomial(int order) {
  static std::mutex mutex;
  static std::map<int, IntPoly> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
  }
  IntPoly num(static_cast<std::size_t>(order) + 1, 0);
  num[0] = -1;
  num[order] = 1;
  for (int d = 1; d < order; ++d)
    if (order % d == 0) num = poly_divide_exact(num, cyclotomic_polynomial(d));
  std::lock_guard lock(mutex);
  return cache.emplace(order, std::move(num)).first->second;
}

}  // namespace detail

// An exact element of the cyclotomic field Q(zeta_N), zeta_N = exp(2 pi i / N),
// stored as rationals over the power basis 1, zeta, ..., zeta^(phi(N)-1),
// reduced modulo Phi_N. Values of different orders are compared and combined
// in Q(zeta_lcm).
class RootScalar {
 public:
  RootScalar() : order_(1), coeffs_(1, Rational(0)) {}
  RootScalar(long v) : order_(1), coeffs_(1, Rational(v)) {}  // NOLINT(implicit)
  RootScalar(Rational q) : order_(1), coeffs_(1, std::move(q)) {}  // NOLINT(implicit)

  static RootScalar rational(long num, long den = 1) { return RootScalar(Rational(num, den)); }

  // zeta_N^k
  static RootScalar root_of_unity(int order, long k) {
    if (order < 1) fail(ErrorKind::Parse, "root order must be positive");
    k %= order;
    if (k < 0) k += order;
    std::vector<Rational> raw(static_cast<std::size_t>(order), Rational(0));
    raw[static_cast<std::size_t>(k)] = 1;
    return RootScalar(order, reduce(order, std::move(raw)));
  }

  int order() const noexcept { return order_; }
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) return false;
    return true;
  }
  const Rational& rational_part() const { return coeffs_[0]; }

  // Re-express in Q(zeta_M); M must be a multiple of the current order.
  RootScalar lifted(int target) const {
    if (target == order_) return *this;
    if (target % order_ != 0) fail(ErrorKind::Parse, "cannot lift order " + std::to_string(order_) + " to " + std::to_string(target));
    const int step = target / order_;
    std::vector<Rational> raw(static_cast<std::size_t>(target), Rational(0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) raw[k * static_cast<std::size_t>(step)] = coeffs_[k];
    return RootScalar(target, reduce(target, std::move(raw)));
  }

  // Smallest order in which this value is representable (among divisors of
  // the current order).
  RootScalar minimized() const {
    if (is_rational()) return RootScalar(coeffs_[0]);
    for (int d = 2; d < order_; ++d) {
      if (order_ % d != 0) continue;
      // Candidate: the value lies in Q(zeta_d) iff it is fixed by every
      // automorphism zeta -> zeta^(1 + j*d) with gcd(1 + j*d, N) = 1.
      bool fixed = true;
      for (int j = 1; j < order_ / d && fixed; ++j) {
        const int e = 1 + j * d;
        if (std::gcd(e, order_) != 1) continue;
        fixed = galois(e) == *this;
      }
      if (!fixed) continue;
      // Solve by lifting the basis of Q(zeta_d): coefficients are read off by
      // matching against lifted power-basis elements.
      const int deg = static_cast<int>(detail::cyclotomic_polynomial(d).size()) - 1;
      std::vector<std::vector<Rational>> basis;
      for (int k = 0; k < deg; ++k) basis.push_back(root_of_unity(d, k).lifted(order_).coeffs_);
      std::vector<Rational> sol;
      if (solve_in_span(basis, coeffs_, sol)) return RootScalar(d, sol);
    }
    return *this;
  }

  // zeta -> zeta^e
  RootScalar galois(int e) const {
    std::vector<Rational> raw(static_cast<std::size_t>(order_), Rational(0));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      long idx = (static_cast<long>(k) * e) % order_;
      if (idx < 0) idx += order_;
      raw[static_cast<std::size_t>(idx)] += coeffs_[k];
    }
    return RootScalar(order_, reduce(order_, std::move(raw)));
  }

  RootScalar conj() const { return galois(order_ - 1); }

  Complex to_complex() const {
    Complex out = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      const double angle = kTwoPi * static_cast<double>(k) / order_;
      out += to_double(coeffs_[k]) * Complex(std::cos(angle), std::sin(angle));
    }
    return out;
  }

  RootScalar operator-() const {
    RootScalar out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }

  friend RootScalar operator+(const RootScalar& a, const RootScalar& b) {
    const int m = std::lcm(a.order_, b.order_);
    RootScalar x = a.lifted(m);
    const RootScalar y = b.lifted(m);
    for (std::size_t k = 0; k < x.coeffs_.size(); ++k) x.coeffs_[k] += y.coeffs_[k];
    return x;
  }
  friend RootScalar operator-(const RootScalar& a, const RootScalar& b) { return a + (-b); }

  friend RootScalar operator*(const RootScalar& a, const RootScalar& b) {
    if (a.order_ == 1) return b.scaled(a.coeffs_[0]);
    if (b.order_ == 1) return a.scaled(b.coeffs_[0]);
    const int m = std::lcm(a.order_, b.order_);
    const RootScalar x = a.lifted(m), y = b.lifted(m);
    std::vector<Rational> raw(x.coeffs_.size() + y.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
      if (x.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < y.coeffs_.size(); ++j) raw[i + j] += x.coeffs_[i] * y.coeffs_[j];
    }
    return RootScalar(m, reduce(m, std::move(raw)));
  }

  RootScalar scaled(const Rational& q) const {
    RootScalar out = *this;
    for (auto& c : out.coeffs_) c *= q;
    return out;
  }

  RootScalar& operator+=(const RootScalar& o) { return *this = *this + o; }
  RootScalar& operator*=(const RootScalar& o) { return *this = *this * o; }

  friend bool operator==(const RootScalar& a, const RootScalar& b) {
    if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
    const int m = std::lcm(a.order_, b.order_);
    return a.lifted(m).coeffs_ == b.lifted(m).coeffs_;
  }

  // "3/4", "-1", "(1/2 z12^1 - z12^3)"
  std::string str() const {
    auto rat = [](const Rational& q) {
      std::string s = boost::multiprecision::numerator(q).str();
      if (boost::multiprecision::denominator(q) != 1) s += "/" + boost::multiprecision::denominator(q).str();
      return s;
    };
    const RootScalar v = minimized();
    if (v.is_rational()) return rat(v.coeffs_[0]);
    std::string out;
    for (std::size_t k = 0; k < v.coeffs_.size(); ++k) {
      const Rational& c = v.coeffs_[k];
      if (c == 0) continue;
      const bool neg = c < 0;
      const Rational mag = neg ? Rational(-c) : c;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      const std::string power = "z" + std::to_string(v.order_) + "^" + std::to_string(k);
      if (k == 0)
        out += rat(mag);
      else if (mag == 1)
        out += power;
      else
        out += rat(mag) + " " + power;
    }
    return "(" + out + ")";
  }

 private:
  RootScalar(int order, std::vector<Rational> coeffs) : order_(order), coeffs_(std::move(coeffs)) {}

  static std::vector<Rational> reduce(int order, std::vector<Rational> raw) {
    const auto& phi = detail::cyclotomic_polynomial(order);
    const std::size_t deg = phi.size() - 1;
    for (std::size_t i = raw.size(); i-- > deg;) {
      if (raw[i] == 0) continue;
      const Rational c = raw[i];
      for (std::size_t j = 0; j <= deg; ++j) raw[i - deg + j] -= c * Rational(phi[j]);
    }
    raw.resize(deg, Rational(0));
    return raw;
  }

  // Solve sum_k x_k basis[k] = target exactly; false if not in the span.
  static bool solve_in_span(const std::vector<std::vector<Rational>>& basis, const std::vector<Rational>& target,
                            std::vector<Rational>& x) {
    const std::size_t rows = target.size(), cols = basis.size();
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) m[r][c] = basis[c][r];
      m[r][cols] = target[r];
    }
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
      std::size_t p = row;
      while (p < rows && m[p][c] == 0) ++p;
      if (p == rows) continue;
      std::swap(m[p], m[row]);
      const Rational inv = 1 / m[row][c];
      for (auto& v : m[row]) v *= inv;
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == row || m[r][c] == 0) continue;
        const Rational f = m[r][c];
        for (std::size_t k = 0; k <= cols; ++k) m[r][k] -= f * m[row][k];
      }
      pivots.push_back(c);
      ++row;
    }
    for (std::size_t r = row; r < rows; ++r)
      if (m[r][cols] != 0) return false;
    x.assign(cols, Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m[i][cols];
    return true;
  }

  int order_;
  std::vector<Rational> coeffs_;
};

}  // namespace ckalg

#endif  // CKALG_CYCLOTOMIC_HPP
