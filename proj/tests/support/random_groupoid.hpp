#pragma once

// Random finite groupoids for property tests. Every finite groupoid is a
// disjoint union of transitive pieces, and every transitive piece with
// isotropy group G over an orbit O is (O x O) x G with arrows (i, j, g),
// d = j, r = i, (i,j,g)(j,k,h) = (i,k,gh). Right-invariant Haar systems on
// such a piece are exactly lambda(xi) = w(r(xi)) for positive unit weights
// w, so random weights drawn that way satisfy right invariance by
// construction.

#include <random>
#include <string>
#include <vector>

#include "gca/groupoid.hpp"
#include "gca/kernel.hpp"

namespace gca::test {

class GroupoidBuilder {
 public:
  // weights: one positive value per orbit point (the range weight).
  void add_transitive(const std::vector<std::string>& points, const GroupTable& group,
                      const std::vector<double>& weights) {
    FiniteGroupoid::Tables& t = tables_;
    const int base_unit = static_cast<int>(t.units.size());
    const int np = static_cast<int>(points.size());
    const int ng = static_cast<int>(group.elements.size());
    for (const std::string& p : points) t.units.push_back(p);

    int identity = 0;
    for (int e = 0; e < ng; ++e) {
      bool ok = true;
      for (int i = 0; i < ng; ++i)
        if (group.product[e][i] != i) { ok = false; break; }
      if (ok) { identity = e; break; }
    }
    std::vector<int> inverse(ng);
    for (int i = 0; i < ng; ++i)
      for (int j = 0; j < ng; ++j)
        if (group.product[i][j] == identity && group.product[j][i] == identity)
          inverse[i] = j;

    const int base_arrow = static_cast<int>(t.arrows.size());
    auto arrow_at = [&](int i, int j, int g) {
      return base_arrow + (i * np + j) * ng + g;
    };
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int g = 0; g < ng; ++g) {
          t.arrows.push_back({points[i] + "," + points[j] + "," + group.elements[g],
                              static_cast<UnitIndex>(base_unit + j),
                              static_cast<UnitIndex>(base_unit + i)});
          t.weights.push_back(weights[i]);
        }
    t.inverse.resize(t.arrows.size());
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int g = 0; g < ng; ++g)
          t.inverse[arrow_at(i, j, g)] = arrow_at(j, i, inverse[g]);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int k = 0; k < np; ++k)
          for (int g = 0; g < ng; ++g)
            for (int h = 0; h < ng; ++h)
              t.composition.push_back({arrow_at(i, j, g), arrow_at(j, k, h),
                                       arrow_at(i, k, group.product[g][h])});
  }

  GroupoidPtr build() { return std::make_shared<FiniteGroupoid>(std::move(tables_)); }

 private:
  FiniteGroupoid::Tables tables_;
};

inline const std::vector<GroupTable>& group_catalog() {
  static const std::vector<GroupTable> catalog = {
      cyclic_group(1),  cyclic_group(2), cyclic_group(3),
      cyclic_group(4),  abelian_product({2, 2}), symmetric_group_s3()};
  return catalog;
}

struct RandomGroupoidOptions {
  int max_units = 12;
  int max_arrows = 60;
  bool transitive_only = false;
  bool random_weights = true;
};

inline GroupoidPtr random_groupoid(std::mt19937_64& rng,
                                   const RandomGroupoidOptions& opt = {}) {
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  GroupoidBuilder builder;
  int units_left = opt.max_units;
  int arrows_left = opt.max_arrows;
  int piece = 0;
  while (units_left > 0 && arrows_left > 0) {
    const int np = 1 + static_cast<int>(rng() % std::min(units_left, 3));
    std::vector<const GroupTable*> fits;
    for (const GroupTable& g : group_catalog())
      if (np * np * static_cast<int>(g.elements.size()) <= arrows_left)
        fits.push_back(&g);
    if (fits.empty()) break;
    const GroupTable& group = *fits[rng() % fits.size()];

    std::vector<std::string> points;
    std::vector<double> weights;
    for (int i = 0; i < np; ++i) {
      points.push_back("u" + std::to_string(piece) + "_" + std::to_string(i));
      weights.push_back(opt.random_weights ? weight(rng) : 1.0);
    }
    builder.add_transitive(points, group, weights);
    units_left -= np;
    arrows_left -= np * np * static_cast<int>(group.elements.size());
    ++piece;
    if (opt.transitive_only || rng() % 3 == 0) break;
  }
  return builder.build();
}

inline Kernel random_kernel(std::mt19937_64& rng, const GroupoidPtr& g,
                            double density = 0.5) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Kernel f(g);
  for (ArrowIndex a = 0; a < g->arrow_count(); ++a)
    if (coin(rng) < density) f.set(a, {value(rng), value(rng)});
  return f;
}

inline UnitFunction random_unit_function(std::mt19937_64& rng, const GroupoidPtr& g) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  UnitFunction psi(g);
  for (UnitIndex x = 0; x < g->unit_count(); ++x)
    psi.set(x, {value(rng), value(rng)});
  return psi;
}

inline bool same_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  if (a.units() != b.units()) return false;
  if (a.arrow_count() != b.arrow_count()) return false;
  for (ArrowIndex i = 0; i < a.arrow_count(); ++i) {
    if (a.arrow(i).id != b.arrow(i).id || a.arrow(i).source != b.arrow(i).source ||
        a.arrow(i).range != b.arrow(i).range || a.inverse(i) != b.inverse(i) ||
        a.weight(i) != b.weight(i) ||
        a.is_truncated_unit(a.source(i)) != b.is_truncated_unit(b.source(i)))
      return false;
    for (ArrowIndex j = 0; j < a.arrow_count(); ++j)
      if (a.compose(i, j) != b.compose(i, j)) return false;
  }
  return true;
}

}  // namespace gca::test
