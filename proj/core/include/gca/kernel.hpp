#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <unordered_map>
#include <vector>

#include "gca/groupoid.hpp"

namespace gca {

namespace scalar {

template <class S>
struct Traits;

template <>
struct Traits<std::complex<double>> {
  static std::complex<double> conjugate(const std::complex<double>& v) {
    return std::conj(v);
  }
  static std::complex<double> from_weight(double w) { return {w, 0.0}; }
  static bool is_zero(const std::complex<double>& v) {
    return v == std::complex<double>{};
  }
};

}  // namespace scalar

// Finitely supported function on the arrows of a parent groupoid: an element
// of C_c(Xi). Only nonzero entries are stored. Values default to
// double-precision complex; an exact scalar type can be substituted for
// axiom tests (see gca/exact.hpp).
//
// On parents with truncated fibers, convolution silently drops contributions
// whose composition falls outside the truncation; such kernels are only
// meant to feed boundary operators.
template <class S>
class BasicKernel {
 public:
  explicit BasicKernel(GroupoidPtr parent) : parent_(std::move(parent)) {}

  static BasicKernel delta(GroupoidPtr parent, ArrowIndex a, S value = S(1)) {
    BasicKernel k(std::move(parent));
    k.set(a, value);
    return k;
  }

  const GroupoidPtr& parent() const { return parent_; }

  void set(ArrowIndex a, const S& value) {
    if (scalar::Traits<S>::is_zero(value))
      values_.erase(a);
    else
      values_[a] = value;
  }

  S at(ArrowIndex a) const {
    auto it = values_.find(a);
    return it == values_.end() ? S(0) : it->second;
  }

  std::size_t support_size() const { return values_.size(); }

  std::vector<ArrowIndex> support() const {
    std::vector<ArrowIndex> s;
    s.reserve(values_.size());
    for (const auto& [a, v] : values_) s.push_back(a);
    std::sort(s.begin(), s.end());
    return s;
  }

  const std::unordered_map<ArrowIndex, S>& entries() const { return values_; }

  BasicKernel& operator+=(const BasicKernel& other) {
    require_same_parent(other);
    for (const auto& [a, v] : other.values_) set(a, at(a) + v);
    return *this;
  }
  BasicKernel& operator-=(const BasicKernel& other) {
    require_same_parent(other);
    for (const auto& [a, v] : other.values_) set(a, at(a) - v);
    return *this;
  }
  BasicKernel& operator*=(const S& scale) {
    if (scalar::Traits<S>::is_zero(scale)) {
      values_.clear();
      return *this;
    }
    for (auto& [a, v] : values_) v = v * scale;
    return *this;
  }
  friend BasicKernel operator+(BasicKernel a, const BasicKernel& b) { return a += b; }
  friend BasicKernel operator-(BasicKernel a, const BasicKernel& b) { return a -= b; }
  friend BasicKernel operator*(const S& s, BasicKernel k) { return k *= s; }

  void require_same_parent(const BasicKernel& other) const {
    if (parent_ != other.parent_)
      throw Error(ErrorCode::parent_mismatch, "kernels have different parents");
  }

 private:
  GroupoidPtr parent_;
  std::unordered_map<ArrowIndex, S> values_;
};

// Total function on the units: an element of C(X).
template <class S>
class BasicUnitFunction {
 public:
  explicit BasicUnitFunction(GroupoidPtr parent, S fill = S(0))
      : parent_(std::move(parent)),
        values_(parent_->unit_count(), fill) {}

  const GroupoidPtr& parent() const { return parent_; }
  S at(UnitIndex x) const { return values_[x]; }
  void set(UnitIndex x, const S& v) { values_[x] = v; }
  const std::vector<S>& values() const { return values_; }

 private:
  GroupoidPtr parent_;
  std::vector<S> values_;
};

using Kernel = BasicKernel<std::complex<double>>;
using UnitFunction = BasicUnitFunction<std::complex<double>>;

enum class Side { left, right };

// (f * g)(xi) = sum_{eta in Xi^{r(xi)}} f(eta) g(eta^{-1} xi) lambda^{r(xi)}(eta)
template <class S>
BasicKernel<S> convolve(const BasicKernel<S>& f, const BasicKernel<S>& g) {
  f.require_same_parent(g);
  const FiniteGroupoid& par = *f.parent();
  BasicKernel<S> result(f.parent());
  for (const auto& [eta, fv] : f.entries()) {
    const S lw = scalar::Traits<S>::from_weight(par.left_weight(eta));
    for (const auto& [zeta, gv] : g.entries()) {
      if (par.source(eta) != par.range(zeta)) continue;
      const ArrowIndex xi = par.compose(eta, zeta);
      if (xi == kNoArrow) continue;  // truncation hole
      result.set(xi, result.at(xi) + fv * gv * lw);
    }
  }
  return result;
}

// f^*(xi) = conj f(xi^{-1})
template <class S>
BasicKernel<S> involute(const BasicKernel<S>& f) {
  const FiniteGroupoid& par = *f.parent();
  BasicKernel<S> result(f.parent());
  for (const auto& [a, v] : f.entries())
    result.set(par.inverse(a), scalar::Traits<S>::conjugate(v));
  return result;
}

// Double-centralizer action of C(X): left is (psi o r) f, right is (psi o d) f.
template <class S>
BasicKernel<S> cx_action(const BasicUnitFunction<S>& psi, const BasicKernel<S>& f,
                         Side side) {
  if (psi.parent() != f.parent())
    throw Error(ErrorCode::parent_mismatch, "unit function has a different parent");
  const FiniteGroupoid& par = *f.parent();
  BasicKernel<S> result(f.parent());
  for (const auto& [a, v] : f.entries()) {
    const UnitIndex x = side == Side::left ? par.range(a) : par.source(a);
    result.set(a, psi.at(x) * v);
  }
  return result;
}

// Restriction morphism rho_A onto a precomputed reduction of the parent.
template <class S>
BasicKernel<S> restrict_to(const BasicKernel<S>& f, const Reduction& red) {
  BasicKernel<S> result(red.groupoid);
  for (const auto& [a, v] : f.entries())
    if (red.arrow_map[a] != kNoArrow) result.set(red.arrow_map[a], v);
  return result;
}

template <class S>
BasicKernel<S> restrict_to(const BasicKernel<S>& f, const std::vector<UnitIndex>& units) {
  return restrict_to(f, reduce(*f.parent(), units));
}

// Hahn norm: max of the sup-over-units weighted fiber l^1 norms of f and of
// f o inverse.
double hahn_norm(const Kernel& f);

// Entrywise comparison with absolute tolerance (default matches the kernel
// equality contract).
bool approx_equal(const Kernel& a, const Kernel& b, double tol = 1e-12);

}  // namespace gca
