#include "gca/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace gca {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t point_key(const LatticePoint& p) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p[0])) << 32) |
         static_cast<std::uint32_t>(p[1]);
}

int group_dim(const BoundaryGroup& g) {
  if (const auto* lat = std::get_if<LatticeGroup>(&g)) return lat->dim;
  if (const auto* ab = std::get_if<FiniteAbelianGroup>(&g))
    return static_cast<int>(ab->orders.size());
  return 1;
}

int positive_mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

std::string point_name(const LatticePoint& p, int dim) {
  std::string s = "(" + std::to_string(p[0]);
  if (dim == 2) s += "," + std::to_string(p[1]);
  return s + ")";
}

// ---------------------------------------------------------------------------

int CompactificationModel::boundary_index(const std::string& bname) const {
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (boundary[i].name == bname) return static_cast<int>(i);
  return -1;
}

void CompactificationModel::check() const {
  if (dim != 1 && dim != 2)
    throw Error(ErrorCode::bad_model, "model dimension must be 1 or 2");
  if (inner_radius < 0)
    throw Error(ErrorCode::bad_model, "negative inner radius");
  if (boundary.empty())
    throw Error(ErrorCode::bad_model, "model needs at least one boundary point");
  if (fiber_map == FiberMap::sign && (dim != 1 || boundary.size() != 2))
    throw Error(ErrorCode::bad_model,
                "sign fiber map needs dimension 1 and exactly two boundary points");
  if (fiber_map == FiberMap::all && boundary.size() != 1)
    throw Error(ErrorCode::bad_model,
                "'all' fiber map needs exactly one boundary point");
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i].name.empty())
      throw Error(ErrorCode::bad_model, "boundary point with empty name");
    for (std::size_t j = i + 1; j < boundary.size(); ++j)
      if (boundary[i].name == boundary[j].name)
        throw Error(ErrorCode::bad_model,
                    "duplicate boundary point '" + boundary[i].name + "'");
    if (const auto* lat = std::get_if<LatticeGroup>(&boundary[i].group)) {
      if (lat->dim != dim)
        throw Error(ErrorCode::bad_model,
                    "lattice isotropy dimension must match the model dimension");
    } else if (const auto* ab = std::get_if<FiniteAbelianGroup>(&boundary[i].group)) {
      if (ab->orders.empty() || ab->orders.size() > 2)
        throw Error(ErrorCode::bad_model, "abelian isotropy needs one or two factors");
      for (int o : ab->orders)
        if (o < 1) throw Error(ErrorCode::bad_model, "cyclic factor of order < 1");
    } else {
      validate_group_table(std::get<GroupTable>(boundary[i].group));
    }
  }
}

RealizedModel::RealizedModel(CompactificationModel model, int truncation)
    : model_(std::move(model)), truncation_(truncation) {
  model_.check();
  if (truncation_ <= model_.inner_radius)
    throw Error(ErrorCode::bad_model,
                "truncation must exceed the inner radius so fibers are nonempty");
  const int L = truncation_;
  if (model_.dim == 1) {
    for (int x = -L; x <= L; ++x) points_.push_back({x, 0});
  } else {
    for (int x = -L; x <= L; ++x)
      for (int y = -L; y <= L; ++y) points_.push_back({x, y});
  }
  fiber_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    fiber_.push_back(fiber_of_point(points_[i]));
    index_.emplace(point_key(points_[i]), static_cast<int>(i));
  }
}

int RealizedModel::index_of(const LatticePoint& p) const {
  auto it = index_.find(point_key(p));
  return it == index_.end() ? -1 : it->second;
}

int RealizedModel::fiber_of_point(const LatticePoint& p) const {
  if (in_core(p)) return -1;
  switch (model_.fiber_map) {
    case FiberMap::sign:
      return p[0] < 0 ? 0 : 1;
    case FiberMap::all:
      return 0;
  }
  return -1;
}

// ---------------------------------------------------------------------------

NeighborhoodSpec NeighborhoodSpec::ball(const RealizedModel& rm, std::vector<int> e,
                                        int k_radius) {
  NeighborhoodSpec spec;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  spec.boundary_set = std::move(e);
  for (const LatticePoint& p : rm.points())
    if (cheb_norm(p) <= k_radius) spec.excluded.push_back(p);
  return spec;
}

bool membership_neighborhood(const RealizedModel& rm, const NeighborhoodSpec& spec,
                             const XPoint& x) {
  if (x.is_boundary())
    return std::binary_search(spec.boundary_set.begin(), spec.boundary_set.end(),
                              x.boundary);
  const int fiber = rm.fiber_of_point(x.m);
  if (fiber < 0 ||
      !std::binary_search(spec.boundary_set.begin(), spec.boundary_set.end(), fiber))
    return false;
  return !std::binary_search(spec.excluded.begin(), spec.excluded.end(), x.m);
}

ContinuityResult continuity_check(
    const RealizedModel& rm,
    const std::function<std::complex<double>(const XPoint&)>& phi) {
  static constexpr double kLadder[] = {1e-1, 1e-2, 1e-3};
  const int k_max = std::max(rm.model().inner_radius, rm.truncation() / 2);

  for (std::size_t n = 0; n < rm.model().boundary.size(); ++n) {
    const std::complex<double> limit = phi(XPoint::at_boundary(static_cast<int>(n)));
    double max_dev = 0.0;
    LatticePoint worst{0, 0};
    for (int i = 0; i < rm.interior_count(); ++i) {
      if (rm.fiber_of(i) != static_cast<int>(n)) continue;
      const LatticePoint& p = rm.points()[i];
      if (cheb_norm(p) <= k_max) continue;
      const double dev = std::abs(phi(XPoint::interior(p)) - limit);
      if (dev > max_dev) {
        max_dev = dev;
        worst = p;
      }
    }
    for (double eps : kLadder) {
      if (max_dev > eps)
        return {false,
                ContinuityWitness{static_cast<int>(n), eps, worst, max_dev}};
    }
  }
  return {true, std::nullopt};
}

// ---------------------------------------------------------------------------

int BandKernel::bandwidth() const {
  int b = 0;
  for (const auto& [offset, rule] : coefficients) b = std::max(b, cheb_norm(offset));
  return b;
}

std::complex<double> BandKernel::coefficient(const CompactificationModel& cm,
                                             const LatticePoint& offset,
                                             const LatticePoint& m) const {
  auto it = coefficients.find(offset);
  if (it == coefficients.end()) return {};
  const CoefficientRule& rule = it->second;
  if (const auto* c = std::get_if<ConstCoefficient>(&rule)) return c->value;
  if (const auto* s = std::get_if<StepCoefficient>(&rule)) {
    if (cm.dim != 1)
      throw Error(ErrorCode::bad_model, "step coefficients need dimension 1");
    return m[0] <= 0 ? s->left : s->right;
  }
  if (const auto* t = std::get_if<TanhCoefficient>(&rule)) {
    if (cm.dim != 1)
      throw Error(ErrorCode::bad_model, "tanh coefficients need dimension 1");
    return t->base + t->amplitude * std::tanh(m[0] / t->scale);
  }
  if (const auto* d = std::get_if<DecayCoefficient>(&rule)) {
    if (d->limits.size() != cm.boundary.size())
      throw Error(ErrorCode::bad_model, "decay coefficient limit count mismatch");
    const int r = cheb_norm(m);
    if (r <= cm.inner_radius) return d->inner;
    int fiber = 0;
    if (cm.fiber_map == FiberMap::sign) fiber = m[0] < 0 ? 0 : 1;
    const double decay = d->exponential ? std::exp(-r / d->rate)
                                        : std::pow(static_cast<double>(r), -d->rate);
    return d->limits[fiber] + d->amplitude * decay;
  }
  const auto& table = std::get<TableCoefficient>(rule);
  auto found = table.values.find(m);
  return found == table.values.end() ? table.fallback : found->second;
}

std::complex<double> BandKernel::boundary_limit(const CompactificationModel& cm,
                                                const LatticePoint& offset,
                                                int boundary_index) const {
  if (boundary_index < 0 || boundary_index >= static_cast<int>(cm.boundary.size()))
    throw Error(ErrorCode::unknown_unit, "no such boundary point");
  auto it = coefficients.find(offset);
  if (it == coefficients.end()) return {};
  const CoefficientRule& rule = it->second;
  if (const auto* c = std::get_if<ConstCoefficient>(&rule)) return c->value;
  if (const auto* s = std::get_if<StepCoefficient>(&rule)) {
    if (cm.fiber_map != FiberMap::sign)
      throw Error(ErrorCode::bad_model, "step coefficients need the sign fiber map");
    return boundary_index == 0 ? s->left : s->right;
  }
  if (const auto* t = std::get_if<TanhCoefficient>(&rule)) {
    if (cm.fiber_map != FiberMap::sign)
      throw Error(ErrorCode::bad_model, "tanh coefficients need the sign fiber map");
    return boundary_index == 0 ? t->base - t->amplitude : t->base + t->amplitude;
  }
  if (const auto* d = std::get_if<DecayCoefficient>(&rule)) {
    if (d->limits.size() != cm.boundary.size())
      throw Error(ErrorCode::bad_model, "decay coefficient limit count mismatch");
    return d->limits[boundary_index];
  }
  const auto& table = std::get<TableCoefficient>(rule);
  if (table.limits.size() != cm.boundary.size())
    throw Error(ErrorCode::bad_model, "table coefficient limit count mismatch");
  return table.limits[boundary_index];
}

ConvergenceProfile BandKernel::convergence_profile() const {
  ConvergenceProfile profile = ConvergenceProfile::finite_range;
  for (const auto& [offset, rule] : coefficients) {
    if (std::holds_alternative<TanhCoefficient>(rule)) {
      if (profile == ConvergenceProfile::finite_range)
        profile = ConvergenceProfile::exponential;
    } else if (const auto* d = std::get_if<DecayCoefficient>(&rule)) {
      if (d->exponential) {
        if (profile == ConvergenceProfile::finite_range)
          profile = ConvergenceProfile::exponential;
      } else {
        profile = ConvergenceProfile::power_law;
      }
    }
  }
  return profile;
}

// ---------------------------------------------------------------------------

namespace {

// Element enumeration for a boundary group: lattice balls are truncated at
// `radius`, finite groups are complete.
std::vector<LatticePoint> group_elements(const BoundaryGroup& g, int radius) {
  std::vector<LatticePoint> out;
  if (const auto* lat = std::get_if<LatticeGroup>(&g)) {
    if (lat->dim == 1) {
      for (int k = -radius; k <= radius; ++k) out.push_back({k, 0});
    } else {
      for (int k1 = -radius; k1 <= radius; ++k1)
        for (int k2 = -radius; k2 <= radius; ++k2) out.push_back({k1, k2});
    }
  } else if (const auto* ab = std::get_if<FiniteAbelianGroup>(&g)) {
    const int o1 = ab->orders[0];
    const int o2 = ab->orders.size() > 1 ? ab->orders[1] : 1;
    for (int j1 = 0; j1 < o1; ++j1)
      for (int j2 = 0; j2 < o2; ++j2) out.push_back({j1, j2});
  } else {
    const auto& table = std::get<GroupTable>(g);
    for (std::size_t i = 0; i < table.elements.size(); ++i)
      out.push_back({static_cast<int>(i), 0});
  }
  return out;
}

std::string element_name(const BoundaryGroup& g, const LatticePoint& e) {
  if (const auto* table = std::get_if<GroupTable>(&g)) return table->elements[e[0]];
  return point_name(e, group_dim(g));
}

}  // namespace

namespace {

int table_identity(const GroupTable& table) {
  for (std::size_t e = 0; e < table.elements.size(); ++e) {
    bool is_id = true;
    for (std::size_t i = 0; i < table.elements.size(); ++i)
      if (table.product[e][i] != static_cast<int>(i)) { is_id = false; break; }
    if (is_id) return static_cast<int>(e);
  }
  throw Error(ErrorCode::bad_group, "no identity element");
}

int table_inverse(const GroupTable& table, int a) {
  const int id = table_identity(table);
  for (std::size_t e = 0; e < table.elements.size(); ++e)
    if (table.product[a][e] == id && table.product[e][a] == id)
      return static_cast<int>(e);
  throw Error(ErrorCode::bad_group,
              "element '" + table.elements[a] + "' has no inverse");
}

// F|_{Sigma_n} as a map from canonical group elements to values. Lattice
// offsets stay as they are; abelian offsets reduce componentwise.
std::map<LatticePoint, std::complex<double>> boundary_restriction(
    const BandKernel& bk, const CompactificationModel& cm, int boundary_index) {
  const BoundaryGroup& group = cm.boundary[boundary_index].group;
  std::map<LatticePoint, std::complex<double>> out;
  for (const auto& kv : bk.coefficients) {
    const LatticePoint& offset = kv.first;
    const std::complex<double> v = bk.boundary_limit(cm, offset, boundary_index);
    if (v == std::complex<double>{}) continue;
    LatticePoint key = offset;
    if (const auto* ab = std::get_if<FiniteAbelianGroup>(&group)) {
      key[0] = positive_mod(offset[0], ab->orders[0]);
      key[1] = ab->orders.size() > 1 ? positive_mod(offset[1], ab->orders[1]) : 0;
    }
    out[key] += v;
  }
  return out;
}

}  // namespace

OperatorMatrix boundary_operator(const BandKernel& bk, const CompactificationModel& cm,
                                 int boundary_index, int radius) {
  if (boundary_index < 0 || boundary_index >= static_cast<int>(cm.boundary.size()))
    throw Error(ErrorCode::unknown_unit, "no such boundary point");
  const BoundaryGroup& group = cm.boundary[boundary_index].group;
  const bool lattice = std::holds_alternative<LatticeGroup>(group);
  if (lattice && radius < bk.bandwidth())
    throw Error(ErrorCode::radius, "truncation radius below the kernel bandwidth");

  const auto values = boundary_restriction(bk, cm, boundary_index);
  const std::vector<LatticePoint> elems = group_elements(group, radius);
  const int n = static_cast<int>(elems.size());
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  m.weights = Eigen::VectorXd::Ones(n);
  for (const LatticePoint& e : elems) m.basis.push_back(element_name(group, e));

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      LatticePoint diff{0, 0};
      if (lattice) {
        diff = elems[a] - elems[b];
      } else if (const auto* ab = std::get_if<FiniteAbelianGroup>(&group)) {
        diff[0] = positive_mod(elems[a][0] - elems[b][0], ab->orders[0]);
        if (ab->orders.size() > 1)
          diff[1] = positive_mod(elems[a][1] - elems[b][1], ab->orders[1]);
      } else {
        const auto& table = std::get<GroupTable>(group);
        diff[0] = table.product[elems[a][0]][table_inverse(table, elems[b][0])];
      }
      auto it = values.find(diff);
      if (it != values.end()) m.entries(a, b) = it->second;
    }
  }
  return m;
}

SpectrumSet fourier_symbol_spectrum(const BandKernel& bk,
                                    const CompactificationModel& cm,
                                    int boundary_index, int grid) {
  if (boundary_index < 0 || boundary_index >= static_cast<int>(cm.boundary.size()))
    throw Error(ErrorCode::unknown_unit, "no such boundary point");
  const BoundaryGroup& group = cm.boundary[boundary_index].group;
  if (std::holds_alternative<GroupTable>(group))
    throw Error(ErrorCode::not_abelian,
                "table groups have no Fourier symbol; use boundary_operator");

  // Gather the boundary restriction a_k(n).
  std::vector<std::pair<LatticePoint, std::complex<double>>> coeffs;
  for (const auto& [offset, rule] : bk.coefficients) {
    const std::complex<double> v = bk.boundary_limit(cm, offset, boundary_index);
    if (v != std::complex<double>{}) coeffs.emplace_back(offset, v);
  }

  SpectrumSet s;
  if (const auto* lat = std::get_if<LatticeGroup>(&group)) {
    if (grid < 2) throw Error(ErrorCode::config, "symbol grid must have >= 2 points");
    s.kind = SpectrumKind::sampled_range;
    double lip = 0.0;
    for (const auto& [k, v] : coeffs)
      lip += (std::abs(k[0]) + std::abs(k[1])) * std::abs(v);
    s.resolution = lip * (kTwoPi / 2.0) / grid;
    auto value_at = [&](double t1, double t2) {
      std::complex<double> acc;
      for (const auto& [k, v] : coeffs)
        acc += v * std::exp(std::complex<double>(0.0, k[0] * t1 + k[1] * t2));
      return acc;
    };
    if (lat->dim == 1) {
      s.points.reserve(grid);
      for (int t = 0; t < grid; ++t) s.points.push_back(value_at(kTwoPi * t / grid, 0.0));
    } else {
      s.points.reserve(static_cast<std::size_t>(grid) * grid);
      for (int t1 = 0; t1 < grid; ++t1)
        for (int t2 = 0; t2 < grid; ++t2)
          s.points.push_back(value_at(kTwoPi * t1 / grid, kTwoPi * t2 / grid));
    }
  } else {
    const auto& ab = std::get<FiniteAbelianGroup>(group);
    const int o1 = ab.orders[0];
    const int o2 = ab.orders.size() > 1 ? ab.orders[1] : 1;
    s.kind = SpectrumKind::exact_eigenvalues;
    for (int j1 = 0; j1 < o1; ++j1)
      for (int j2 = 0; j2 < o2; ++j2) {
        std::complex<double> acc;
        for (const auto& [k, v] : coeffs) {
          const double phase =
              kTwoPi * (static_cast<double>(j1) * k[0] / o1 +
                        static_cast<double>(j2) * k[1] / o2);
          acc += v * std::exp(std::complex<double>(0.0, phase));
        }
        s.points.push_back(acc);
      }
  }
  return s;
}

OperatorMatrix interior_operator(const BandKernel& bk, const RealizedModel& rm) {
  const int n = rm.interior_count();
  OperatorMatrix m;
  m.entries = Eigen::MatrixXcd::Zero(n, n);
  m.weights = Eigen::VectorXd::Ones(n);
  m.basis.reserve(n);
  for (const LatticePoint& p : rm.points()) m.basis.push_back(point_name(p, rm.dim()));

  for (int i = 0; i < n; ++i) {
    const LatticePoint& p = rm.points()[i];
    for (const auto& [offset, rule] : bk.coefficients) {
      const int j = rm.index_of(p - offset);
      if (j < 0) continue;  // hard cutoff at the window
      m.entries(i, j) += bk.coefficient(rm.model(), offset, p);
    }
  }
  if (bk.self_adjoint && !is_hermitian(m.entries, 1e-14))
    throw Error(ErrorCode::bad_model,
                "kernel declared self-adjoint but the assembled band matrix is not");
  return m;
}

bool band_all_real(const BandKernel& bk, const RealizedModel& rm) {
  for (const LatticePoint& p : rm.points())
    for (const auto& [offset, rule] : bk.coefficients)
      if (bk.coefficient(rm.model(), offset, p).imag() != 0.0) return false;
  return true;
}

Eigen::MatrixXd interior_matrix_real(const BandKernel& bk, const RealizedModel& rm) {
  if (!bk.self_adjoint)
    throw Error(ErrorCode::bad_model, "real fast path needs a self-adjoint kernel");
  if (!band_all_real(bk, rm))
    throw Error(ErrorCode::bad_model, "real fast path needs real coefficients");
  const int n = rm.interior_count();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const LatticePoint& p = rm.points()[i];
    for (const auto& [offset, rule] : bk.coefficients) {
      const int j = rm.index_of(p - offset);
      if (j < 0) continue;
      h(i, j) += bk.coefficient(rm.model(), offset, p).real();
    }
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
    throw Error(ErrorCode::bad_model,
                "kernel declared self-adjoint but the assembled band matrix is not");
  return h;
}

Eigen::VectorXcd band_apply(const BandKernel& bk, const RealizedModel& rm,
                            const Eigen::VectorXcd& x) {
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
  for (int i = 0; i < rm.interior_count(); ++i) {
    const LatticePoint& p = rm.points()[i];
    for (const auto& [offset, rule] : bk.coefficients) {
      const int j = rm.index_of(p - offset);
      if (j < 0) continue;
      y[i] += bk.coefficient(rm.model(), offset, p) * x[j];
    }
  }
  return y;
}

Eigen::VectorXd band_apply(const BandKernel& bk, const RealizedModel& rm,
                           const Eigen::VectorXd& x) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < rm.interior_count(); ++i) {
    const LatticePoint& p = rm.points()[i];
    for (const auto& [offset, rule] : bk.coefficients) {
      const int j = rm.index_of(p - offset);
      if (j < 0) continue;
      y[i] += bk.coefficient(rm.model(), offset, p).real() * x[j];
    }
  }
  return y;
}

// ---------------------------------------------------------------------------

UnitIndex CompactifiedGroupoid::anchor() const {
  const int origin = realized.index_of({0, 0});
  return interior_unit[origin];
}

CompactifiedGroupoid build_compactified_groupoid(const CompactificationModel& cm,
                                                 int truncation) {
  RealizedModel rm(cm, truncation);
  const int n_int = rm.interior_count();

  FiniteGroupoid::Tables t;
  std::vector<UnitIndex> interior_unit(n_int);
  std::vector<UnitIndex> boundary_unit(cm.boundary.size());
  std::vector<XPoint> unit_point;
  for (int i = 0; i < n_int; ++i) {
    interior_unit[i] = static_cast<UnitIndex>(t.units.size());
    t.units.push_back(point_name(rm.points()[i], cm.dim));
    unit_point.push_back(XPoint::interior(rm.points()[i]));
  }
  for (std::size_t b = 0; b < cm.boundary.size(); ++b) {
    boundary_unit[b] = static_cast<UnitIndex>(t.units.size());
    t.units.push_back(cm.boundary[b].name);
    unit_point.push_back(XPoint::at_boundary(static_cast<int>(b)));
  }

  // Interior pair arrows, i-major: arrow (i, j) has r = i, d = j.
  auto pair_arrow = [n_int](int i, int j) { return i * n_int + j; };
  for (int i = 0; i < n_int; ++i)
    for (int j = 0; j < n_int; ++j) {
      t.arrows.push_back({point_name(rm.points()[i], cm.dim) + "<" +
                              point_name(rm.points()[j], cm.dim),
                          interior_unit[j], interior_unit[i]});
      t.weights.push_back(1.0);
    }
  t.inverse.resize(t.arrows.size());
  for (int i = 0; i < n_int; ++i)
    for (int j = 0; j < n_int; ++j) t.inverse[pair_arrow(i, j)] = pair_arrow(j, i);
  for (int i = 0; i < n_int; ++i)
    for (int j = 0; j < n_int; ++j)
      for (int k = 0; k < n_int; ++k)
        t.composition.push_back({pair_arrow(i, j), pair_arrow(j, k), pair_arrow(i, k)});

  // Boundary isotropy fibers.
  std::vector<ArrowIndex> boundary_base(cm.boundary.size());
  std::vector<std::vector<LatticePoint>> boundary_elements(cm.boundary.size());
  for (std::size_t b = 0; b < cm.boundary.size(); ++b) {
    const BoundaryGroup& group = cm.boundary[b].group;
    const UnitIndex unit = boundary_unit[b];
    boundary_base[b] = static_cast<ArrowIndex>(t.arrows.size());
    boundary_elements[b] = group_elements(group, truncation);
    const auto& elems = boundary_elements[b];
    auto elem_index = [&](const LatticePoint& e) -> int {
      auto it = std::find(elems.begin(), elems.end(), e);
      return it == elems.end() ? -1 : static_cast<int>(it - elems.begin());
    };
    for (const LatticePoint& e : elems) {
      t.arrows.push_back(
          {cm.boundary[b].name + ":" + element_name(group, e), unit, unit});
      t.weights.push_back(1.0);
    }
    t.inverse.resize(t.arrows.size(), kNoArrow);
    const int ne = static_cast<int>(elems.size());
    if (const auto* lat = std::get_if<LatticeGroup>(&group)) {
      (void)lat;
      for (int i = 0; i < ne; ++i) {
        t.inverse[boundary_base[b] + i] =
            boundary_base[b] + elem_index({-elems[i][0], -elems[i][1]});
        for (int j = 0; j < ne; ++j) {
          const int k = elem_index(elems[i] + elems[j]);
          if (k >= 0)
            t.composition.push_back({boundary_base[b] + i, boundary_base[b] + j,
                                     boundary_base[b] + k});
        }
      }
      t.truncated_units.push_back(unit);
    } else if (const auto* ab = std::get_if<FiniteAbelianGroup>(&group)) {
      const int o1 = ab->orders[0];
      const int o2 = ab->orders.size() > 1 ? ab->orders[1] : 1;
      for (int i = 0; i < ne; ++i) {
        t.inverse[boundary_base[b] + i] =
            boundary_base[b] + elem_index({positive_mod(-elems[i][0], o1),
                                           positive_mod(-elems[i][1], o2)});
        for (int j = 0; j < ne; ++j) {
          const int k = elem_index({positive_mod(elems[i][0] + elems[j][0], o1),
                                    positive_mod(elems[i][1] + elems[j][1], o2)});
          t.composition.push_back({boundary_base[b] + i, boundary_base[b] + j,
                                   boundary_base[b] + k});
        }
      }
    } else {
      const auto& table = std::get<GroupTable>(group);
      int id = 0;
      for (std::size_t e = 0; e < table.elements.size(); ++e) {
        bool is_id = true;
        for (std::size_t i = 0; i < table.elements.size(); ++i)
          if (table.product[e][i] != static_cast<int>(i)) { is_id = false; break; }
        if (is_id) { id = static_cast<int>(e); break; }
      }
      for (int i = 0; i < ne; ++i) {
        for (int j = 0; j < ne; ++j) {
          if (table.product[i][j] == id) t.inverse[boundary_base[b] + i] = boundary_base[b] + j;
          t.composition.push_back({boundary_base[b] + i, boundary_base[b] + j,
                                   boundary_base[b] + table.product[i][j]});
        }
      }
    }
  }

  CompactifiedGroupoid cg{std::make_shared<FiniteGroupoid>(std::move(t)),
                          std::move(rm),
                          std::move(interior_unit),
                          std::move(boundary_unit),
                          std::move(unit_point)};
  return cg;
}

Kernel kernel_realization(const BandKernel& bk, const CompactifiedGroupoid& cg) {
  const RealizedModel& rm = cg.realized;
  const CompactificationModel& cm = rm.model();
  const FiniteGroupoid& g = *cg.groupoid;
  Kernel f(cg.groupoid);

  const int n_int = rm.interior_count();
  for (int i = 0; i < n_int; ++i) {
    const LatticePoint& p = rm.points()[i];
    for (const auto& [offset, rule] : bk.coefficients) {
      const int j = rm.index_of(p - offset);
      if (j < 0) continue;
      // pair arrows were laid out i-major starting at index 0
      f.set(i * n_int + j, bk.coefficient(cm, offset, p));
    }
  }
  for (std::size_t b = 0; b < cm.boundary.size(); ++b) {
    const BoundaryGroup& group = cm.boundary[b].group;
    if (std::holds_alternative<GroupTable>(group)) continue;  // no lattice offsets
    const int gdim = std::holds_alternative<LatticeGroup>(group)
                         ? std::get<LatticeGroup>(group).dim
                         : static_cast<int>(std::get<FiniteAbelianGroup>(group).orders.size());
    for (const auto& [elem, value] : boundary_restriction(bk, cm, static_cast<int>(b))) {
      const std::string id = cm.boundary[b].name + ":" + point_name(elem, gdim);
      const auto arrow = g.find_arrow(id);
      if (!arrow) continue;  // outside the realized truncation
      f.set(*arrow, value);
    }
  }
  return f;
}

}  // namespace gca
