#pragma once

// Exact-rational scalar mode for algebraic-identity tests on small
// instances. Every finite double (in particular every stored Haar weight)
// converts to a rational exactly, so convolution identities can be asserted
// with operator== instead of a float tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include "gca/kernel.hpp"

namespace gca {

using Rational = boost::multiprecision::cpp_rational;

struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(int v) : re(v) {}  // NOLINT: scalar-like implicit conversion
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) {
    return !(a == b);
  }
};

namespace scalar {

template <>
struct Traits<ComplexRational> {
  static ComplexRational conjugate(const ComplexRational& v) { return {v.re, -v.im}; }
  static ComplexRational from_weight(double w) {
    return {Rational(w), Rational(0)};
  }
  static bool is_zero(const ComplexRational& v) { return v.re == 0 && v.im == 0; }
};

}  // namespace scalar

using ExactKernel = BasicKernel<ComplexRational>;
using ExactUnitFunction = BasicUnitFunction<ComplexRational>;

inline bool exact_equal(const ExactKernel& a, const ExactKernel& b) {
  if (a.parent() != b.parent()) return false;
  for (const auto& [idx, v] : a.entries())
    if (!(v == b.at(idx))) return false;
  for (const auto& [idx, v] : b.entries())
    if (!(v == a.at(idx))) return false;
  return true;
}

}  // namespace gca
