#pragma once

#include <cstdint>

#include "gca/boundary.hpp"
#include "gca/representation.hpp"
#include "gca/spectral.hpp"

namespace gca {

// All C*-norms below are evaluated as operator norms in the vector
// representation at the session's truncation; the truncation allowance is
// reported by comparing runs along an L ladder, never silently absorbed.

struct GapReport {
  double gap = 0.0;         // dist(supp kappa, sp(F_Q)); inf for kappa == 0
  double resolution = 0.0;  // sampling step of the boundary spectrum
  SpectrumSet boundary_spectrum;
};

// sp(F_Q) as the union of the symbol spectra over the quasi-orbit, plus the
// support gap. Throws E_HYPOTHESIS_FAILS when the gap vanishes and
// E_UNKNOWN_UNIT for names missing from the model.
GapReport check_hypothesis(const BumpFunction& kappa, const BandKernel& bk,
                           const CompactificationModel& cm,
                           const std::vector<std::string>& quasi_orbit,
                           int grid = 4096);

// ---------------------------------------------------------------------------
// Urysohn cutoff at desk scale, on an explicit compactified groupoid.

struct PsiConstruction {
  UnitFunction psi;           // values in [0,2]; 2 on A, 0 on the f0 support
  int truncation_radius = 0;  // rho: f0 keeps both endpoints outside the
                              // A-fiber tails beyond rho
  double tail_norm = 0.0;     // ||f - f0|| surrogate
  double left_norm = 0.0;     // ||psi . f||
  double right_norm = 0.0;    // ||f . psi||
};

// Truncates f away from the boundary set A, takes S0 as the surviving
// support region, and interpolates psi between S0 (0) and A (2) linearly in
// graph distance on the realized X. Throws E_NO_SEPARATION when no
// truncation radius within the window separates S0 from A.
PsiConstruction construct_psi(const CompactifiedGroupoid& cg, double eps,
                              const std::vector<std::string>& boundary_set,
                              const Kernel& f);

// ---------------------------------------------------------------------------
// Large-truncation experiments.

struct LocalizationResult {
  std::vector<std::string> E_names;
  NeighborhoodSpec spec;  // E with K = realized ball of K_radius
  int K_radius = 0;
  int rho = 0;
  double static_norm = 0.0;     // ||1_{W0} kappa(H_L)||
  double sqrt_form = 0.0;       // ||kappa(H) 1_{W0} kappa(H)||^{1/2}
  double psi_kappa_norm = 0.0;  // ||psi|_M kappa(H_L)||
  double psi_f_norms = 0.0;     // ||psi . f|| + ||f . psi||
  double eps = 0.0;
  double gap = 0.0;
  double resolution = 0.0;
};

struct SweepResult {
  std::vector<double> t;
  Eigen::MatrixXd localized_mass;  // t grid x probes, ||1_W0 e^{itH} k(H) u||/||u||
  double max = 0.0;
  int probes = 0;
  std::uint64_t seed = 0;
};

struct ResidualLadder {
  std::vector<int> radii;
  std::vector<double> residuals;  // ||1_T kappa(H) 1_T|| over the Q tail T
};

// Deterministic seeded complex Gaussian probe states, normalized columns.
Eigen::MatrixXcd gaussian_probes(int dim, int count, std::uint64_t seed);

// Holds the realized model and one dense eigendecomposition of H_L, shared
// by every experiment at this truncation. Construction throws
// E_NOT_SELFADJOINT unless the assembled matrix is hermitian. Sessions are
// immutable after construction; concurrent queries are safe.
class VerifierSession {
 public:
  VerifierSession(BandKernel bk, CompactificationModel cm, int truncation);

  const RealizedModel& realized() const { return rm_; }
  const BandKernel& band() const { return bk_; }
  int truncation() const { return rm_.truncation(); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  GapReport hypothesis(const BumpFunction& kappa,
                       const std::vector<std::string>& quasi_orbit,
                       int grid = 4096) const;

  LocalizationResult find_localization_neighborhood(
      double eps, const BumpFunction& kappa,
      const std::vector<std::string>& quasi_orbit, int grid = 4096) const;

  SweepResult propagation_sweep(const LocalizationResult& loc,
                                const BumpFunction& kappa, int probes,
                                std::uint64_t seed, double t_begin, double t_end,
                                double t_step) const;

  // Same sweep over caller-provided probe states (columns, normalized).
  SweepResult propagation_sweep(const LocalizationResult& loc,
                                const BumpFunction& kappa,
                                const Eigen::MatrixXcd& probes, double t_begin,
                                double t_end, double t_step) const;

  ResidualLadder ideal_membership_residual(const BumpFunction& kappa,
                                           const std::vector<std::string>& quasi_orbit,
                                           std::vector<int> radii = {}) const;

  // ||1_rows kappa(H_L)|| for an arbitrary interior row set.
  double localized_norm(const BumpFunction& kappa,
                        const std::vector<int>& rows) const;

 private:
  struct KappaData {
    std::vector<int> support;  // eigenvalue indices with kappa != 0
    Eigen::VectorXd values;
  };
  KappaData kappa_data(const BumpFunction& kappa) const;
  std::vector<int> quasi_orbit_indices(const std::vector<std::string>& names) const;
  std::vector<int> tail_rows(const std::vector<int>& fibers, int radius) const;
  double block_norm(const std::vector<int>& rows, const KappaData& k,
                    const Eigen::VectorXd* row_scale = nullptr) const;
  double corner_norm(const std::vector<int>& rows, const KappaData& k) const;

  BandKernel bk_;
  RealizedModel rm_;
  bool real_path_ = true;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd vectors_real_;
  Eigen::MatrixXcd vectors_cplx_;
};

// Single-shot entry points; each builds a fresh session.
LocalizationResult find_localization_neighborhood(double eps, const BumpFunction& kappa,
                                                  const std::vector<std::string>& quasi_orbit,
                                                  const BandKernel& bk,
                                                  const CompactificationModel& cm,
                                                  int truncation);

ResidualLadder ideal_membership_residual(const BumpFunction& kappa,
                                         const BandKernel& bk,
                                         const CompactificationModel& cm,
                                         int truncation,
                                         const std::vector<std::string>& quasi_orbit,
                                         std::vector<int> radii = {});

}  // namespace gca
