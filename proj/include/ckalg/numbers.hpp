#ifndef CKALG_NUMBERS_HPP
#define CKALG_NUMBERS_HPP

#include <complex>
#include <numbers>

#include <boost/multiprecision/gmp.hpp>

namespace ckalg {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace ckalg

#endif  // CKALG_NUMBERS_HPP
