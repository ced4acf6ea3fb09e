#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "gca/operator_matrix.hpp"

namespace gca {

// Continuous piecewise-linear real function of compact support, given by its
// nodes. First and last node values must be zero, abscissae strictly
// increasing; evaluation is exact interpolation.
class BumpFunction {
 public:
  explicit BumpFunction(std::vector<std::pair<double, double>> nodes);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

  // Closed components of supp = closure of {kappa != 0}.
  const std::vector<std::pair<double, double>>& support_components() const {
    return support_;
  }
  double sup_abs() const { return sup_abs_; }
  bool is_zero() const { return support_.empty(); }

 private:
  std::vector<std::pair<double, double>> nodes_;
  std::vector<std::pair<double, double>> support_;
  double sup_abs_ = 0.0;
};

enum class SpectrumKind { exact_eigenvalues, sampled_range };

struct SpectrumSet {
  SpectrumKind kind = SpectrumKind::exact_eigenvalues;
  std::vector<std::complex<double>> points;
  // Value-space sampling resolution; 0 for exact eigenvalue sets. Hausdorff
  // and gap queries are accurate only up to this step.
  double resolution = 0.0;
};

// Eigensystem of a normal matrix in standardized coordinates: unitary column
// eigenvectors, eigenvalues real iff hermitian.
struct Eigensystem {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd vectors;
  bool hermitian = false;
};

// Throws E_NOT_NORMAL; eigenpair residuals are verified against
// 1e-8 * |H| (all pairs up to dimension 1500, a deterministic sample above).
Eigensystem eigensystem(const OperatorMatrix& h);

// All eigenvalues with multiplicity.
SpectrumSet spectrum(const OperatorMatrix& h);

// kappa(H) for normal H, applying kappa to the real coordinate of each
// eigenvalue (the identity on self-adjoint spectra).
OperatorMatrix functional_calculus(const BumpFunction& kappa, const OperatorMatrix& h);

// e^{itH} for self-adjoint H, through the eigendecomposition.
Eigen::MatrixXcd evolution_matrix(const Eigensystem& es, double t);
OperatorMatrix evolution(const OperatorMatrix& h, double t);

// Closed union of boundary spectra; resolution is the max input step.
SpectrumSet essential_spectrum_union(const std::vector<SpectrumSet>& parts);

// Distance between supp(kappa) (a union of real intervals) and S as a subset
// of the plane; 0 means the localization hypothesis fails. Accurate up to
// S.resolution for sampled sets.
double support_gap(const BumpFunction& kappa, const SpectrumSet& s);

double hausdorff_distance(const SpectrumSet& a, const SpectrumSet& b);

// Dense self-adjoint eigensolvers (LAPACK dsyevd/zheevd); input is consumed.
// These back eigensystem() and the verifier's large truncations.
struct SymmetricEigensystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
};
SymmetricEigensystem dense_symmetric_eig(Eigen::MatrixXd a);

struct HermitianEigensystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd vectors;
};
HermitianEigensystem dense_hermitian_eig(Eigen::MatrixXcd a);

// Eigenvalues only, ascending.
Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a);
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd a);

}  // namespace gca
