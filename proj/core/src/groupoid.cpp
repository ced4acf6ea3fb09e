#include "gca/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace gca {

namespace {

std::uint64_t pair_key(ArrowIndex left, ArrowIndex right) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32) |
         static_cast<std::uint32_t>(right);
}

std::string arrow_ref(const FiniteGroupoid& g, ArrowIndex a) {
  return "'" + g.arrow(a).id + "'";
}

}  // namespace

FiniteGroupoid::FiniteGroupoid(Tables tables) : t_(std::move(tables)) {
  const int nu = static_cast<int>(t_.units.size());
  const int na = static_cast<int>(t_.arrows.size());
  if (t_.inverse.size() != t_.arrows.size() || t_.weights.size() != t_.arrows.size())
    throw std::invalid_argument("groupoid tables: inverse/weight size mismatch");

  unit_index_.reserve(t_.units.size());
  for (int i = 0; i < nu; ++i) {
    if (!unit_index_.emplace(t_.units[i], i).second)
      throw std::invalid_argument("duplicate unit id '" + t_.units[i] + "'");
  }
  arrow_index_.reserve(t_.arrows.size());
  for (int i = 0; i < na; ++i) {
    const Arrow& a = t_.arrows[i];
    if (a.source < 0 || a.source >= nu || a.range < 0 || a.range >= nu)
      throw std::invalid_argument("arrow '" + a.id + "' has out-of-range endpoint");
    if (!arrow_index_.emplace(a.id, i).second)
      throw std::invalid_argument("duplicate arrow id '" + a.id + "'");
    if (t_.inverse[i] < 0 || t_.inverse[i] >= na)
      throw std::invalid_argument("arrow '" + a.id + "' has out-of-range inverse");
    if (!(t_.weights[i] > 0.0))
      throw std::invalid_argument("arrow '" + a.id + "' has nonpositive weight");
  }
  compose_.reserve(t_.composition.size());
  for (const auto& row : t_.composition) {
    for (ArrowIndex a : row)
      if (a < 0 || a >= na) throw std::invalid_argument("composition row out of range");
    if (!compose_.emplace(pair_key(row[0], row[1]), row[2]).second)
      throw std::invalid_argument("duplicate composition row");
  }

  source_fibers_.resize(nu);
  range_fibers_.resize(nu);
  for (int i = 0; i < na; ++i) {
    source_fibers_[t_.arrows[i].source].push_back(i);
    range_fibers_[t_.arrows[i].range].push_back(i);
  }

  truncated_.assign(nu, 0);
  for (UnitIndex x : t_.truncated_units) {
    if (x < 0 || x >= nu) throw std::invalid_argument("truncated unit out of range");
    truncated_[x] = 1;
    has_truncated_ = true;
  }

  // Identity arrow detection: the idempotent self-inverse loop at x.
  unit_arrow_.assign(nu, kNoArrow);
  for (int x = 0; x < nu; ++x) {
    for (ArrowIndex a : source_fibers_[x]) {
      if (t_.arrows[a].range != x) continue;
      if (t_.inverse[a] != a) continue;
      if (compose(a, a) != a) continue;
      unit_arrow_[x] = a;
      break;
    }
  }
}

std::optional<UnitIndex> FiniteGroupoid::find_unit(const std::string& id) const {
  auto it = unit_index_.find(id);
  if (it == unit_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ArrowIndex> FiniteGroupoid::find_arrow(const std::string& id) const {
  auto it = arrow_index_.find(id);
  if (it == arrow_index_.end()) return std::nullopt;
  return it->second;
}

ArrowIndex FiniteGroupoid::compose(ArrowIndex left, ArrowIndex right) const {
  auto it = compose_.find(pair_key(left, right));
  return it == compose_.end() ? kNoArrow : it->second;
}

std::span<const ArrowIndex> FiniteGroupoid::source_fiber(UnitIndex x) const {
  return source_fibers_[x];
}

std::span<const ArrowIndex> FiniteGroupoid::range_fiber(UnitIndex x) const {
  return range_fibers_[x];
}

// ---------------------------------------------------------------------------

ValidationReport validate(const FiniteGroupoid& g) {
  ValidationReport report;
  constexpr std::size_t kMaxViolations = 200;
  auto add = [&](const std::string& axiom, const std::string& witness) {
    if (report.violations.size() < kMaxViolations)
      report.violations.push_back({axiom, witness});
  };
  const int na = g.arrow_count();
  const int nu = g.unit_count();

  // A composition at a truncated unit is allowed to be missing.
  auto truncation_hole = [&](ArrowIndex left, ArrowIndex right) {
    return g.is_truncated_unit(g.source(left)) ||
           g.is_truncated_unit(g.source(right));
  };

  for (UnitIndex x = 0; x < nu; ++x) {
    if (g.unit_arrow(x) == kNoArrow)
      add("unit-arrow", "no identity arrow at unit '" + g.unit_id(x) + "'");
  }

  for (ArrowIndex a = 0; a < na; ++a) {
    for (ArrowIndex b = 0; b < na; ++b) {
      const bool composable = g.source(a) == g.range(b);
      const ArrowIndex ab = g.compose(a, b);
      if (!composable && ab != kNoArrow)
        add("composition-domain", arrow_ref(g, a) + " * " + arrow_ref(g, b) +
                                      " defined although d != r");
      if (composable && ab == kNoArrow && !truncation_hole(a, b))
        add("composition-domain",
            arrow_ref(g, a) + " * " + arrow_ref(g, b) + " undefined");
      if (ab != kNoArrow) {
        if (g.source(ab) != g.source(b) || g.range(ab) != g.range(a))
          add("composition-endpoints",
              arrow_ref(g, a) + " * " + arrow_ref(g, b) + " = " + arrow_ref(g, ab));
      }
    }
  }

  // Unit neutrality.
  for (ArrowIndex a = 0; a < na; ++a) {
    const ArrowIndex er = g.unit_arrow(g.range(a));
    const ArrowIndex ed = g.unit_arrow(g.source(a));
    if (er != kNoArrow && g.compose(er, a) != a)
      add("unit-neutrality", "e * " + arrow_ref(g, a) + " != " + arrow_ref(g, a));
    if (ed != kNoArrow && g.compose(a, ed) != a)
      add("unit-neutrality", arrow_ref(g, a) + " * e != " + arrow_ref(g, a));
  }

  // Associativity over all defined triples.
  for (ArrowIndex a = 0; a < na && report.violations.size() < kMaxViolations; ++a) {
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      const ArrowIndex ab = g.compose(a, b);
      for (ArrowIndex c : g.range_fiber(g.source(b))) {
        const ArrowIndex bc = g.compose(b, c);
        if (ab == kNoArrow || bc == kNoArrow) continue;
        const ArrowIndex ab_c = g.compose(ab, c);
        const ArrowIndex a_bc = g.compose(a, bc);
        if (ab_c == kNoArrow || a_bc == kNoArrow) continue;
        if (ab_c != a_bc)
          add("associativity", "(" + arrow_ref(g, a) + arrow_ref(g, b) + ")" +
                                   arrow_ref(g, c) + " != " + arrow_ref(g, a) + "(" +
                                   arrow_ref(g, b) + arrow_ref(g, c) + ")");
      }
    }
  }

  // Involution.
  for (ArrowIndex a = 0; a < na; ++a) {
    const ArrowIndex inv = g.inverse(a);
    if (g.inverse(inv) != a)
      add("involution", "inverse not involutive at " + arrow_ref(g, a));
    if (g.source(inv) != g.range(a) || g.range(inv) != g.source(a))
      add("involution", "inverse endpoints wrong at " + arrow_ref(g, a));
    const ArrowIndex left = g.compose(inv, a);
    if (left != kNoArrow && left != g.unit_arrow(g.source(a)))
      add("inverse-composition",
          arrow_ref(g, inv) + " * " + arrow_ref(g, a) + " is not the unit at d");
    const ArrowIndex right = g.compose(a, inv);
    if (right != kNoArrow && right != g.unit_arrow(g.range(a)))
      add("inverse-composition",
          arrow_ref(g, a) + " * " + arrow_ref(g, inv) + " is not the unit at r");
  }

  // Right invariance of the Haar system: for xi: x -> y, eta |-> eta*xi is a
  // weight-preserving bijection Xi_y -> Xi_x.
  for (ArrowIndex xi = 0; xi < na; ++xi) {
    const UnitIndex x = g.source(xi);
    const UnitIndex y = g.range(xi);
    if (g.is_truncated_unit(x) || g.is_truncated_unit(y)) continue;
    std::set<ArrowIndex> image;
    for (ArrowIndex eta : g.source_fiber(y)) {
      const ArrowIndex ex = g.compose(eta, xi);
      if (ex == kNoArrow) continue;  // already reported as a domain violation
      image.insert(ex);
      const double lhs = g.weight(ex);
      const double rhs = g.weight(eta);
      if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs)))
        add("haar-right-invariance",
            "lambda(" + arrow_ref(g, eta) + " * " + arrow_ref(g, xi) +
                ") != lambda(" + arrow_ref(g, eta) + ")");
    }
    if (image.size() != g.source_fiber(y).size() ||
        image.size() != g.source_fiber(x).size())
      add("haar-right-invariance",
          "right translation by " + arrow_ref(g, xi) + " is not a bijection");
  }

  return report;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<UnitIndex>> orbits(const FiniteGroupoid& g) {
  const int nu = g.unit_count();
  std::vector<int> parent(nu);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Arrow& a : g.arrows()) {
    int u = find(a.source), v = find(a.range);
    if (u != v) parent[std::max(u, v)] = std::min(u, v);
  }
  std::vector<std::vector<UnitIndex>> result;
  std::unordered_map<int, int> root_to_orbit;
  for (int x = 0; x < nu; ++x) {
    int root = find(x);
    auto [it, inserted] = root_to_orbit.emplace(root, result.size());
    if (inserted) result.emplace_back();
    result[it->second].push_back(x);
  }
  return result;
}

OrbitDecomposition orbit_decomposition(const FiniteGroupoid& g,
                                       const std::vector<UnitIndex>& claimed_main) {
  if (claimed_main.empty())
    throw Error(ErrorCode::not_orbit, "claimed main orbit is empty");

  OrbitDecomposition dec;
  dec.orbits = orbits(g);
  dec.orbit_of.assign(g.unit_count(), -1);
  for (int i = 0; i < static_cast<int>(dec.orbits.size()); ++i)
    for (UnitIndex x : dec.orbits[i]) dec.orbit_of[x] = i;

  dec.isotropy.resize(g.unit_count());
  for (UnitIndex x = 0; x < g.unit_count(); ++x)
    for (ArrowIndex a : g.source_fiber(x))
      if (g.range(a) == x) dec.isotropy[x].push_back(a);

  std::vector<UnitIndex> main = claimed_main;
  std::sort(main.begin(), main.end());
  main.erase(std::unique(main.begin(), main.end()), main.end());
  const int orbit_idx = dec.orbit_of[main.front()];
  if (dec.orbits[orbit_idx] != main)
    throw Error(ErrorCode::not_orbit,
                "claimed main set is not a single orbit (orbit of '" +
                    g.unit_id(main.front()) + "' differs)");
  for (UnitIndex x : main) {
    if (dec.isotropy[x].size() != 1)
      throw Error(ErrorCode::isotropy,
                  "unit '" + g.unit_id(x) + "' has isotropy of order " +
                      std::to_string(dec.isotropy[x].size()));
  }

  dec.main_orbit = main;
  for (UnitIndex x = 0; x < g.unit_count(); ++x) {
    if (!std::binary_search(main.begin(), main.end(), x)) {
      dec.boundary.push_back(x);
      if (dec.isotropy[x].size() > 1) dec.flagged_boundary_isotropy.push_back(x);
    }
  }
  return dec;
}

Reduction reduce(const FiniteGroupoid& g, const std::vector<UnitIndex>& units) {
  std::vector<std::uint8_t> keep(g.unit_count(), 0);
  for (UnitIndex x : units) {
    if (x < 0 || x >= g.unit_count())
      throw Error(ErrorCode::unknown_unit, "unit index out of range");
    keep[x] = 1;
  }
  for (const Arrow& a : g.arrows()) {
    if (keep[a.source] != keep[a.range])
      throw Error(ErrorCode::not_invariant,
                  "arrow '" + a.id + "' crosses the unit set boundary");
  }

  Reduction red;
  red.unit_map.assign(g.unit_count(), kNoUnit);
  red.arrow_map.assign(g.arrow_count(), kNoArrow);

  FiniteGroupoid::Tables t;
  for (UnitIndex x = 0; x < g.unit_count(); ++x) {
    if (!keep[x]) continue;
    red.unit_map[x] = static_cast<UnitIndex>(t.units.size());
    t.units.push_back(g.unit_id(x));
    if (g.is_truncated_unit(x)) t.truncated_units.push_back(red.unit_map[x]);
  }
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    const Arrow& arr = g.arrow(a);
    if (!keep[arr.source]) continue;
    red.arrow_map[a] = static_cast<ArrowIndex>(t.arrows.size());
    t.arrows.push_back({arr.id, red.unit_map[arr.source], red.unit_map[arr.range]});
    t.weights.push_back(g.weight(a));
  }
  t.inverse.resize(t.arrows.size());
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    if (red.arrow_map[a] == kNoArrow) continue;
    t.inverse[red.arrow_map[a]] = red.arrow_map[g.inverse(a)];
  }
  for (ArrowIndex a = 0; a < g.arrow_count(); ++a) {
    if (red.arrow_map[a] == kNoArrow) continue;
    for (ArrowIndex b : g.range_fiber(g.source(a))) {
      if (red.arrow_map[b] == kNoArrow) continue;
      const ArrowIndex ab = g.compose(a, b);
      if (ab == kNoArrow) continue;
      t.composition.push_back({red.arrow_map[a], red.arrow_map[b], red.arrow_map[ab]});
    }
  }
  red.groupoid = std::make_shared<FiniteGroupoid>(std::move(t));
  return red;
}

// ---------------------------------------------------------------------------

GroupoidPtr build_pair_groupoid(int n) {
  if (n < 1) throw std::invalid_argument("pair groupoid needs n >= 1");
  FiniteGroupoid::Tables t;
  for (int i = 0; i < n; ++i) t.units.push_back(std::to_string(i));
  auto arrow_at = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // arrow (i,j): d = j, r = i
      t.arrows.push_back({std::to_string(i) + "," + std::to_string(j), j, i});
      t.weights.push_back(1.0);
    }
  t.inverse.resize(t.arrows.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.inverse[arrow_at(i, j)] = arrow_at(j, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        t.composition.push_back({arrow_at(i, j), arrow_at(j, k), arrow_at(i, k)});
  return std::make_shared<FiniteGroupoid>(std::move(t));
}

GroupTable cyclic_group(int order) {
  if (order < 1) throw std::invalid_argument("cyclic group needs order >= 1");
  GroupTable g;
  for (int i = 0; i < order; ++i) g.elements.push_back(std::to_string(i));
  g.product.assign(order, std::vector<int>(order));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) g.product[i][j] = (i + j) % order;
  return g;
}

GroupTable abelian_product(const std::vector<int>& orders) {
  if (orders.empty()) return cyclic_group(1);
  GroupTable g = cyclic_group(orders[0]);
  for (std::size_t k = 1; k < orders.size(); ++k) {
    const GroupTable h = cyclic_group(orders[k]);
    GroupTable prod;
    const int ng = static_cast<int>(g.elements.size());
    const int nh = static_cast<int>(h.elements.size());
    for (int i = 0; i < ng; ++i)
      for (int j = 0; j < nh; ++j)
        prod.elements.push_back(g.elements[i] + "." + h.elements[j]);
    prod.product.assign(ng * nh, std::vector<int>(ng * nh));
    for (int i1 = 0; i1 < ng; ++i1)
      for (int j1 = 0; j1 < nh; ++j1)
        for (int i2 = 0; i2 < ng; ++i2)
          for (int j2 = 0; j2 < nh; ++j2)
            prod.product[i1 * nh + j1][i2 * nh + j2] =
                g.product[i1][i2] * nh + h.product[j1][j2];
    g = std::move(prod);
  }
  return g;
}

GroupTable symmetric_group_s3() {
  // Elements as permutations of {0,1,2} in one-line notation.
  const std::vector<std::array<int, 3>> perms = {
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  GroupTable g;
  for (const auto& p : perms)
    g.elements.push_back(std::to_string(p[0]) + std::to_string(p[1]) +
                         std::to_string(p[2]));
  const int n = static_cast<int>(perms.size());
  g.product.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::array<int, 3> comp{};  // (p_i after p_j)
      for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
      g.product[i][j] =
          static_cast<int>(std::find(perms.begin(), perms.end(), comp) - perms.begin());
    }
  return g;
}

void validate_group_table(const GroupTable& table) {
  const int n = static_cast<int>(table.elements.size());
  if (n == 0) throw Error(ErrorCode::bad_group, "empty element list");
  if (static_cast<int>(table.product.size()) != n)
    throw Error(ErrorCode::bad_group, "product table has wrong row count");
  for (const auto& row : table.product) {
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorCode::bad_group, "product table has wrong column count");
    for (int v : row)
      if (v < 0 || v >= n) throw Error(ErrorCode::bad_group, "product entry out of range");
  }
  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (table.product[e][i] != i || table.product[i][e] != i) { ok = false; break; }
    if (ok) { identity = e; break; }
  }
  if (identity < 0) throw Error(ErrorCode::bad_group, "no identity element");
  for (int i = 0; i < n; ++i) {
    bool has_inverse = false;
    for (int j = 0; j < n; ++j)
      if (table.product[i][j] == identity && table.product[j][i] == identity)
        has_inverse = true;
    if (!has_inverse)
      throw Error(ErrorCode::bad_group,
                  "element '" + table.elements[i] + "' has no inverse");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (table.product[table.product[i][j]][k] !=
            table.product[i][table.product[j][k]])
          throw Error(ErrorCode::bad_group, "product is not associative");
}

namespace {

void append_group_fiber(FiniteGroupoid::Tables& t, UnitIndex unit,
                        const std::string& base_id, const GroupTable& table) {
  validate_group_table(table);
  const int n = static_cast<int>(table.elements.size());
  const int offset = static_cast<int>(t.arrows.size());
  int identity = 0;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (table.product[e][i] != i) { ok = false; break; }
    if (ok) { identity = e; break; }
  }
  for (int i = 0; i < n; ++i) {
    t.arrows.push_back({base_id + ":" + table.elements[i], unit, unit});
    t.weights.push_back(1.0);
  }
  t.inverse.resize(t.arrows.size(), kNoArrow);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t.composition.push_back({offset + i, offset + j, offset + table.product[i][j]});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (table.product[i][j] == identity && table.product[j][i] == identity)
        t.inverse[offset + i] = offset + j;
}

}  // namespace

GroupoidPtr build_group_bundle(const std::vector<std::string>& base,
                               const std::vector<FiberSpec>& fibers) {
  if (base.size() != fibers.size())
    throw std::invalid_argument("group bundle: base/fiber size mismatch");
  FiniteGroupoid::Tables t;
  t.units = base;
  for (std::size_t u = 0; u < base.size(); ++u) {
    const UnitIndex unit = static_cast<UnitIndex>(u);
    if (const GroupTable* table = std::get_if<GroupTable>(&fibers[u])) {
      append_group_fiber(t, unit, base[u], *table);
    } else {
      const ZTruncation& z = std::get<ZTruncation>(fibers[u]);
      if (z.dim < 1 || z.dim > 2)
        throw Error(ErrorCode::bad_model, "Z truncations support dim 1 or 2");
      if (z.radius < 0) throw Error(ErrorCode::bad_model, "negative truncation radius");
      const int offset = static_cast<int>(t.arrows.size());
      std::vector<std::array<int, 2>> pts;
      if (z.dim == 1) {
        for (int k = -z.radius; k <= z.radius; ++k) pts.push_back({k, 0});
      } else {
        for (int k1 = -z.radius; k1 <= z.radius; ++k1)
          for (int k2 = -z.radius; k2 <= z.radius; ++k2) pts.push_back({k1, k2});
      }
      auto name = [&](const std::array<int, 2>& p) {
        std::string s = "(" + std::to_string(p[0]);
        if (z.dim == 2) s += "," + std::to_string(p[1]);
        return s + ")";
      };
      auto index_of = [&](const std::array<int, 2>& p) -> int {
        auto it = std::find(pts.begin(), pts.end(), p);
        return it == pts.end() ? -1 : static_cast<int>(it - pts.begin());
      };
      for (const auto& p : pts) {
        t.arrows.push_back({base[u] + ":" + name(p), unit, unit});
        t.weights.push_back(1.0);
      }
      t.inverse.resize(t.arrows.size(), kNoArrow);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::array<int, 2> neg = {-pts[i][0], -pts[i][1]};
        t.inverse[offset + i] = offset + index_of(neg);
      }
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
          const std::array<int, 2> sum = {pts[i][0] + pts[j][0], pts[i][1] + pts[j][1]};
          const int target = index_of(sum);
          if (target >= 0)
            t.composition.push_back({static_cast<ArrowIndex>(offset + i),
                                     static_cast<ArrowIndex>(offset + j),
                                     static_cast<ArrowIndex>(offset + target)});
        }
      t.truncated_units.push_back(unit);
    }
  }
  return std::make_shared<FiniteGroupoid>(std::move(t));
}

}  // namespace gca
