#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>
#include <variant>

#include "gca/kernel.hpp"
#include "gca/operator_matrix.hpp"
#include "gca/spectral.hpp"

namespace gca {

// Lattice points and group offsets share one coordinate type; the second
// component is 0 in dimension 1.
using LatticePoint = std::array<int, 2>;

inline int cheb_norm(const LatticePoint& p) {
  return std::max(std::abs(p[0]), std::abs(p[1]));
}
inline LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
  return {a[0] - b[0], a[1] - b[1]};
}
inline LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
  return {a[0] + b[0], a[1] + b[1]};
}
std::string point_name(const LatticePoint& p, int dim);

// Boundary isotropy groups: Z^dim, a declared product of cyclic groups, or
// an arbitrary finite group table (the latter only feeds truncated boundary
// operators, never Fourier symbols).
struct LatticeGroup {
  int dim = 1;
};
struct FiniteAbelianGroup {
  std::vector<int> orders;  // at most two cyclic factors
};
using BoundaryGroup = std::variant<LatticeGroup, FiniteAbelianGroup, GroupTable>;

struct ModelBoundaryPoint {
  std::string name;
  BoundaryGroup group = LatticeGroup{1};
};

// How outer lattice points project onto N.
enum class FiberMap {
  sign,  // dim 1, two boundary points: negative side first
  all,   // single boundary point receives the whole outer region
};

// Quotient-type compactification data: interior M = M^in (Chebyshev ball of
// inner_radius) plus the fibered outer region, boundary N, projection p per
// fiber map. Boundary points are understood as limits of their fibers; that
// assertion is only testable through continuity_check.
struct CompactificationModel {
  std::string name = "model";
  int dim = 1;
  int inner_radius = 0;
  FiberMap fiber_map = FiberMap::all;
  std::vector<ModelBoundaryPoint> boundary;
  int default_truncation = 64;

  int boundary_index(const std::string& name) const;  // -1 when absent
  void check() const;  // E_BAD_MODEL on inconsistent data
};

// A point of X = M | N.
struct XPoint {
  int boundary = -1;  // >= 0: boundary point index (m unused)
  LatticePoint m{0, 0};

  static XPoint interior(LatticePoint p) { return {-1, p}; }
  static XPoint at_boundary(int n) { return {n, {0, 0}}; }
  bool is_boundary() const { return boundary >= 0; }
};

// The finite portion of the model realized at truncation L: all lattice
// points with |m| <= L, fiber assignments, and index lookup. Realization is
// pure; independent (n, R, L) evaluations may run concurrently.
class RealizedModel {
 public:
  RealizedModel(CompactificationModel model, int truncation);

  const CompactificationModel& model() const { return model_; }
  int truncation() const { return truncation_; }
  int dim() const { return model_.dim; }
  int interior_count() const { return static_cast<int>(points_.size()); }
  const std::vector<LatticePoint>& points() const { return points_; }

  int index_of(const LatticePoint& p) const;  // -1 when not realized
  // Boundary index of p(m); -1 on M^in.
  int fiber_of(int point_index) const { return fiber_[point_index]; }
  int fiber_of_point(const LatticePoint& p) const;
  bool in_core(const LatticePoint& p) const {
    return cheb_norm(p) <= model_.inner_radius;
  }

 private:
  CompactificationModel model_;
  int truncation_;
  std::vector<LatticePoint> points_;  // lexicographic
  std::vector<int> fiber_;
  std::unordered_map<std::uint64_t, int> index_;
};

inline RealizedModel realize(CompactificationModel model, int truncation) {
  return RealizedModel(std::move(model), truncation);
}

// Base neighborhood A_{E,K} = (p^{-1}(E) \cap K^c) | E.
struct NeighborhoodSpec {
  std::vector<int> boundary_set;       // E as sorted boundary indices
  std::vector<LatticePoint> excluded;  // K, sorted lexicographically

  static NeighborhoodSpec ball(const RealizedModel& rm, std::vector<int> e,
                               int k_radius);
};

bool membership_neighborhood(const RealizedModel& rm, const NeighborhoodSpec& spec,
                             const XPoint& x);

// Continuity of phi: X -> C in the compactification topology, checked at the
// realized truncation: restrictions to the discrete parts are vacuously
// continuous, and along each fiber the values must be asymptotically equal
// to phi(n). Compact sets K are taken from the ladder of realized balls of
// radius <= max(inner_radius, L/2), so at least the outer half of every
// fiber survives as the tail.
struct ContinuityWitness {
  int boundary = -1;
  double epsilon = 0.0;
  LatticePoint at{0, 0};
  double deviation = 0.0;
};
struct ContinuityResult {
  bool continuous = true;
  std::optional<ContinuityWitness> witness;
};
ContinuityResult continuity_check(
    const RealizedModel& rm,
    const std::function<std::complex<double>(const XPoint&)>& phi);

// ---------------------------------------------------------------------------
// Band kernels: variable-coefficient finite-bandwidth kernels over the
// interior lattice with declared boundary limits along each fiber.

struct ConstCoefficient {
  std::complex<double> value;
};
// dim-1 sharp step at the origin: left for m <= 0, right for m > 0.
struct StepCoefficient {
  std::complex<double> left, right;
};
// dim-1: base + amplitude * tanh(m / scale).
struct TanhCoefficient {
  std::complex<double> base, amplitude;
  double scale = 1.0;
};
// limit_{p(m)} + amplitude * |m|^{-rate} (power) or * exp(-|m|/rate).
struct DecayCoefficient {
  std::complex<double> inner;                   // value on M^in
  std::vector<std::complex<double>> limits;     // per boundary point
  std::complex<double> amplitude;
  double rate = 1.0;
  bool exponential = false;
};
struct TableCoefficient {
  std::map<LatticePoint, std::complex<double>> values;
  std::complex<double> fallback;
  std::vector<std::complex<double>> limits;     // per boundary point
};
using CoefficientRule = std::variant<ConstCoefficient, StepCoefficient,
                                     TanhCoefficient, DecayCoefficient,
                                     TableCoefficient>;

// Declared rate of convergence toward the boundary limits; used only to
// choose test truncation sizes.
enum class ConvergenceProfile { finite_range, exponential, power_law };

struct BandKernel {
  std::map<LatticePoint, CoefficientRule> coefficients;  // offset -> a_k(.)
  bool self_adjoint = false;

  int bandwidth() const;
  std::complex<double> coefficient(const CompactificationModel& cm,
                                   const LatticePoint& offset,
                                   const LatticePoint& m) const;
  std::complex<double> boundary_limit(const CompactificationModel& cm,
                                      const LatticePoint& offset,
                                      int boundary_index) const;
  ConvergenceProfile convergence_profile() const;
};

// Truncated boundary convolution operator H_n on the group ball of `radius`
// (the whole group when Sigma_n is finite). E_RADIUS when radius < bandwidth
// on a lattice group.
OperatorMatrix boundary_operator(const BandKernel& bk, const CompactificationModel& cm,
                                 int boundary_index, int radius);

// Sampled (or, for finite abelian groups, exact) closure of the range of the
// symbol sum_k a_k(n) e^{ik.theta}. E_NOT_ABELIAN for table groups.
SpectrumSet fourier_symbol_spectrum(const BandKernel& bk,
                                    const CompactificationModel& cm,
                                    int boundary_index, int grid = 4096);

// H_0 = Pi_0(F) as the variable-coefficient band matrix on l^2(interior),
// hard (Dirichlet-type) cutoff at the truncation window.
OperatorMatrix interior_operator(const BandKernel& bk, const RealizedModel& rm);

// Real symmetric fast path for the verifier; E_BAD_MODEL unless the kernel
// is declared self-adjoint with real coefficients on the window.
Eigen::MatrixXd interior_matrix_real(const BandKernel& bk, const RealizedModel& rm);

bool band_all_real(const BandKernel& bk, const RealizedModel& rm);

// y = H x without materializing the matrix (residual checks, benchmarks).
Eigen::VectorXcd band_apply(const BandKernel& bk, const RealizedModel& rm,
                            const Eigen::VectorXcd& x);
Eigen::VectorXd band_apply(const BandKernel& bk, const RealizedModel& rm,
                           const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Groupoid realization at desk scale: the truncated translation groupoid
// over X = M | N, pair arrows on the interior plus truncated isotropy
// fibers Sigma_n at the boundary.

struct CompactifiedGroupoid {
  GroupoidPtr groupoid;
  RealizedModel realized;
  std::vector<UnitIndex> interior_unit;  // per realized point index
  std::vector<UnitIndex> boundary_unit;  // per boundary point index
  std::vector<XPoint> unit_point;        // per unit index

  UnitIndex anchor() const;  // interior unit closest to the origin
};

CompactifiedGroupoid build_compactified_groupoid(const CompactificationModel& cm,
                                                 int truncation);

// The band kernel as an element of C_c of the compactified groupoid;
// restriction to a boundary unit recovers exactly the boundary data a_k(n).
Kernel kernel_realization(const BandKernel& bk, const CompactifiedGroupoid& cg);

}  // namespace gca
