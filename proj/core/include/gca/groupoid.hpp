#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gca/error.hpp"

namespace gca {

using UnitIndex = std::int32_t;
using ArrowIndex = std::int32_t;
inline constexpr ArrowIndex kNoArrow = -1;
inline constexpr UnitIndex kNoUnit = -1;

// One arrow xi with source d(xi) and range r(xi).
struct Arrow {
  std::string id;
  UnitIndex source = kNoUnit;  // d
  UnitIndex range = kNoUnit;   // r
};

// Finite groupoid given by explicit tables: opaque ordered identifiers,
// stored composition (partial), stored involution, and a right Haar weight
// lambda_{d(xi)}(xi) per arrow. Immutable after construction; all
// operations on it are pure, so instances are safe to share across threads.
//
// Units whose isotropy fiber is a declared truncation of an infinite group
// are listed in `truncated_units`: their composition tables are allowed to
// be partial, and validate() skips closure requirements there.
class FiniteGroupoid {
 public:
  struct Tables {
    std::vector<std::string> units;
    std::vector<Arrow> arrows;
    std::vector<ArrowIndex> inverse;                    // per arrow
    std::vector<std::array<ArrowIndex, 3>> composition; // {left, right, left*right}
    std::vector<double> weights;                        // per arrow, positive
    std::vector<UnitIndex> truncated_units;
  };

  // Structural checks only (index ranges, id uniqueness, positive weights,
  // duplicate table rows); groupoid axioms are the job of validate().
  explicit FiniteGroupoid(Tables tables);

  int unit_count() const { return static_cast<int>(t_.units.size()); }
  int arrow_count() const { return static_cast<int>(t_.arrows.size()); }
  const std::vector<std::string>& units() const { return t_.units; }
  const std::string& unit_id(UnitIndex x) const { return t_.units[x]; }
  const Arrow& arrow(ArrowIndex a) const { return t_.arrows[a]; }
  const std::vector<Arrow>& arrows() const { return t_.arrows; }

  std::optional<UnitIndex> find_unit(const std::string& id) const;
  std::optional<ArrowIndex> find_arrow(const std::string& id) const;

  UnitIndex source(ArrowIndex a) const { return t_.arrows[a].source; }
  UnitIndex range(ArrowIndex a) const { return t_.arrows[a].range; }

  // kNoArrow when the composition is not defined.
  ArrowIndex compose(ArrowIndex left, ArrowIndex right) const;
  ArrowIndex inverse(ArrowIndex a) const { return t_.inverse[a]; }

  // lambda_{d(a)}(a)
  double weight(ArrowIndex a) const { return t_.weights[a]; }
  // lambda^{r(a)}(a) := lambda_{r(a)}(a^{-1})
  double left_weight(ArrowIndex a) const { return t_.weights[t_.inverse[a]]; }

  // Xi_x = d^{-1}(x), Xi^x = r^{-1}(x), both in stored arrow order.
  std::span<const ArrowIndex> source_fiber(UnitIndex x) const;
  std::span<const ArrowIndex> range_fiber(UnitIndex x) const;

  // The detected identity arrow at x (kNoArrow when absent or ambiguous).
  ArrowIndex unit_arrow(UnitIndex x) const { return unit_arrow_[x]; }

  bool is_truncated_unit(UnitIndex x) const { return truncated_[x] != 0; }
  bool has_truncated_units() const { return has_truncated_; }
  const Tables& tables() const { return t_; }

 private:
  Tables t_;
  std::unordered_map<std::string, UnitIndex> unit_index_;
  std::unordered_map<std::string, ArrowIndex> arrow_index_;
  std::unordered_map<std::uint64_t, ArrowIndex> compose_;
  std::vector<std::vector<ArrowIndex>> source_fibers_;
  std::vector<std::vector<ArrowIndex>> range_fibers_;
  std::vector<ArrowIndex> unit_arrow_;
  std::vector<std::uint8_t> truncated_;
  bool has_truncated_ = false;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

// ---------------------------------------------------------------------------
// Axiom validation. Violations are data: each one names the axiom and a
// witness tuple of identifiers.

struct AxiomViolation {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const FiniteGroupoid& g);

// ---------------------------------------------------------------------------
// Orbits, isotropy, reductions.

struct OrbitDecomposition {
  std::vector<std::vector<UnitIndex>> orbits;  // partition of units, each sorted
  std::vector<int> orbit_of;                   // unit -> index into orbits
  std::vector<std::vector<ArrowIndex>> isotropy;  // per unit, arrows x -> x
  std::vector<UnitIndex> main_orbit;           // the designated orbit M
  std::vector<UnitIndex> boundary;             // N = X \ M
  // Boundary units with nontrivial isotropy; expected for group bundles.
  std::vector<UnitIndex> flagged_boundary_isotropy;
};

// Plain partition into orbits plus isotropy, no designated orbit.
std::vector<std::vector<UnitIndex>> orbits(const FiniteGroupoid& g);

// Confirms `claimed_main` is a single orbit with trivial isotropy.
// Throws E_NOT_ORBIT / E_ISOTROPY.
OrbitDecomposition orbit_decomposition(const FiniteGroupoid& g,
                                       const std::vector<UnitIndex>& claimed_main);

struct Reduction {
  GroupoidPtr groupoid;
  std::vector<UnitIndex> unit_map;    // old -> new, kNoUnit for removed
  std::vector<ArrowIndex> arrow_map;  // old -> new, kNoArrow for removed
};

// Reduction Xi_A for an invariant unit set A. Throws E_NOT_INVARIANT when an
// arrow crosses A and its complement. Arrow/unit identifiers are preserved.
Reduction reduce(const FiniteGroupoid& g, const std::vector<UnitIndex>& units);

// ---------------------------------------------------------------------------
// Canonical builders.

// Pair groupoid over n points: arrows (i,j) with d=j, r=i, (i,j)(j,k)=(i,k),
// counting weights. Arrow ids are "i,j".
GroupoidPtr build_pair_groupoid(int n);

// Finite group as an explicit multiplication table; product[i][j] is the
// index of elements[i]*elements[j].
struct GroupTable {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> product;
};

GroupTable cyclic_group(int order);
GroupTable abelian_product(const std::vector<int>& orders);
GroupTable symmetric_group_s3();

// Throws E_BAD_GROUP naming the failed group axiom.
void validate_group_table(const GroupTable& table);

// Declared truncation of Z^dim to the closed Chebyshev ball of `radius`.
// The resulting fiber is not closed under composition and is flagged.
struct ZTruncation {
  int dim = 1;
  int radius = 1;
};

using FiberSpec = std::variant<GroupTable, ZTruncation>;

// Group bundle over `base`: d = r = q on every arrow, per-fiber counting
// Haar. Arrow ids are "<base>:<element>".
GroupoidPtr build_group_bundle(const std::vector<std::string>& base,
                               const std::vector<FiberSpec>& fibers);

}  // namespace gca
