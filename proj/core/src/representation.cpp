#include "gca/representation.hpp"

#include <algorithm>

namespace gca {

OperatorMatrix regular_rep(const Kernel& f, UnitIndex x) {
  const FiniteGroupoid& g = *f.parent();
  if (x < 0 || x >= g.unit_count())
    throw Error(ErrorCode::unknown_unit, "regular_rep: no such unit");
  const auto fiber = g.source_fiber(x);
  const int n = static_cast<int>(fiber.size());

  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  m.weights.resize(n);
  std::unordered_map<ArrowIndex, int> pos;
  for (int i = 0; i < n; ++i) {
    m.basis.push_back(g.arrow(fiber[i]).id);
    m.weights[i] = g.weight(fiber[i]);
    pos[fiber[i]] = i;
  }

  // (f * u)(xi) = sum_eta f(eta) u(eta^{-1} xi) lambda^{r(xi)}(eta); the
  // column of u(zeta) is hit exactly by eta = xi zeta^{-1}.
  for (const auto& [eta, value] : f.entries()) {
    const std::complex<double> contrib = value * g.left_weight(eta);
    for (ArrowIndex zeta : fiber) {
      if (g.range(zeta) != g.source(eta)) continue;
      const ArrowIndex xi = g.compose(eta, zeta);
      if (xi == kNoArrow) continue;
      m.entries(pos.at(xi), pos.at(zeta)) += contrib;
    }
  }
  return m;
}

int VectorRepSpace::index_of_unit(UnitIndex x) const {
  auto it = std::lower_bound(points.begin(), points.end(), x);
  if (it == points.end() || *it != x) return -1;
  return static_cast<int>(it - points.begin());
}

VectorRepSpace vector_rep_space(const GroupoidPtr& g, UnitIndex z) {
  if (z < 0 || z >= g->unit_count())
    throw Error(ErrorCode::unknown_unit, "vector_rep_space: no such unit");

  VectorRepSpace space;
  space.groupoid = g;
  space.anchor = z;

  std::unordered_map<UnitIndex, ArrowIndex> reach;  // m -> arrow z -> m in Xi_z
  for (ArrowIndex a : g->source_fiber(z)) {
    auto [it, inserted] = reach.emplace(g->range(a), a);
    if (!inserted)
      throw Error(ErrorCode::not_principal,
                  "transport r_z is not injective at unit '" +
                      g->unit_id(g->range(a)) + "'");
  }
  for (const auto& [m, a] : reach) space.points.push_back(m);
  std::sort(space.points.begin(), space.points.end());
  space.transport.reserve(space.points.size());
  space.mu.resize(static_cast<int>(space.points.size()));
  for (std::size_t i = 0; i < space.points.size(); ++i) {
    const ArrowIndex a = reach.at(space.points[i]);
    space.transport.push_back(a);
    space.mu[static_cast<int>(i)] = g->weight(a);
  }
  return space;
}

OperatorMatrix vector_rep(const VectorRepSpace& space, const Kernel& f) {
  if (f.parent() != space.groupoid)
    throw Error(ErrorCode::parent_mismatch, "kernel not on the space's groupoid");
  const FiniteGroupoid& g = *space.groupoid;
  const int n = static_cast<int>(space.points.size());

  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  m.weights = space.mu;
  for (UnitIndex x : space.points) m.basis.push_back(g.unit_id(x));

  // (Pi_0(f) v)(m_i) = sum over arrows eta: m_j -> m_i of
  // f(eta) lambda^{m_i}(eta) v(m_j); arrows between main-orbit units are
  // unique because the isotropy is trivial.
  for (const auto& [eta, value] : f.entries()) {
    const int i = space.index_of_unit(g.range(eta));
    const int j = space.index_of_unit(g.source(eta));
    if (i < 0 || j < 0) continue;  // boundary support is invisible to Pi_0
    m.entries(i, j) += value * g.left_weight(eta);
  }
  return m;
}

OperatorMatrix multiplier_mult(const VectorRepSpace& space, const UnitFunction& psi) {
  if (psi.parent() != space.groupoid)
    throw Error(ErrorCode::parent_mismatch, "unit function not on the space's groupoid");
  const FiniteGroupoid& g = *space.groupoid;
  const int n = static_cast<int>(space.points.size());
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  m.weights = space.mu;
  for (int i = 0; i < n; ++i) {
    m.basis.push_back(g.unit_id(space.points[i]));
    m.entries(i, i) = psi.at(space.points[i]);
  }
  return m;
}

Kernel kernel_from_vector_rep(const VectorRepSpace& space, const OperatorMatrix& m) {
  const FiniteGroupoid& g = *space.groupoid;
  const int n = static_cast<int>(space.points.size());
  if (m.dim() != n)
    throw Error(ErrorCode::bad_model, "matrix dimension does not match the space");
  Kernel f(space.groupoid);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m.entries(i, j) == std::complex<double>{}) continue;
      // the unique arrow m_j -> m_i is transport[i] * transport[j]^{-1}
      const ArrowIndex eta =
          g.compose(space.transport[i], g.inverse(space.transport[j]));
      if (eta == kNoArrow)
        throw Error(ErrorCode::bad_model, "transport composition missing");
      f.set(eta, m.entries(i, j) / g.left_weight(eta));
    }
  }
  return f;
}

}  // namespace gca
