#include "gca/kernel.hpp"

namespace gca {

double hahn_norm(const Kernel& f) {
  const FiniteGroupoid& g = *f.parent();
  std::vector<double> fiber_sum(g.unit_count(), 0.0);
  std::vector<double> cofiber_sum(g.unit_count(), 0.0);
  for (const auto& [a, v] : f.entries()) {
    const double av = std::abs(v);
    // |f(xi)| d lambda_x over Xi_x
    fiber_sum[g.source(a)] += av * g.weight(a);
    // |f(xi^{-1})| d lambda_x(xi) = |f(eta)| lambda^x over Xi^x
    cofiber_sum[g.range(a)] += av * g.left_weight(a);
  }
  double norm = 0.0;
  for (int x = 0; x < g.unit_count(); ++x)
    norm = std::max({norm, fiber_sum[x], cofiber_sum[x]});
  return norm;
}

bool approx_equal(const Kernel& a, const Kernel& b, double tol) {
  if (a.parent() != b.parent()) return false;
  for (const auto& [idx, v] : a.entries())
    if (std::abs(v - b.at(idx)) > tol) return false;
  for (const auto& [idx, v] : b.entries())
    if (std::abs(v - a.at(idx)) > tol) return false;
  return true;
}

}  // namespace gca
