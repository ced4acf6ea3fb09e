#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "gca/error.hpp"

namespace gca {

// A finite matrix over a labeled basis (arrows of a fiber, or interior
// points), together with the positive measure weighting the inner product
// <u,v> = sum_i conj(u_i) v_i w_i. Spectral routines operate on the
// standardized matrix W^{1/2} A W^{-1/2}, which represents the same operator
// in an orthonormal basis; weighted adjoints are W^{-1} A^H W.
struct OperatorMatrix {
  std::vector<std::string> basis;
  Eigen::MatrixXcd entries;
  Eigen::VectorXd weights;

  int dim() const { return static_cast<int>(entries.rows()); }

  bool unit_weights(double tol = 0.0) const {
    for (int i = 0; i < weights.size(); ++i)
      if (std::abs(weights[i] - 1.0) > tol) return false;
    return true;
  }

  Eigen::MatrixXcd standardized() const;
  OperatorMatrix weighted_adjoint() const;
};

OperatorMatrix identity_like(const OperatorMatrix& shape);

// Largest singular value (of the standardized matrix for OperatorMatrix).
double operator_norm(const Eigen::MatrixXcd& m);
double operator_norm(const OperatorMatrix& m);

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12);
bool is_hermitian(const OperatorMatrix& m, double tol = 1e-12);

// Hermitian short-circuit, otherwise commutator test on the standardized
// matrix with Frobenius threshold tol * max(1, |A|_F^2).
bool is_normal(const OperatorMatrix& m, double tol = 1e-10);

}  // namespace gca
