#include "gca/operator_matrix.hpp"

#include <Eigen/SVD>

namespace gca {

Eigen::MatrixXcd OperatorMatrix::standardized() const {
  if (unit_weights()) return entries;
  const Eigen::ArrayXd sqrt_w = weights.array().sqrt();
  Eigen::MatrixXcd out = entries;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      out(i, j) *= sqrt_w[i] / sqrt_w[j];
  return out;
}

OperatorMatrix OperatorMatrix::weighted_adjoint() const {
  OperatorMatrix out{basis, entries.adjoint(), weights};
  if (!unit_weights()) {
    for (int i = 0; i < out.entries.rows(); ++i)
      for (int j = 0; j < out.entries.cols(); ++j)
        out.entries(i, j) *= weights[j] / weights[i];
  }
  return out;
}

OperatorMatrix identity_like(const OperatorMatrix& shape) {
  return {shape.basis,
          Eigen::MatrixXcd::Identity(shape.dim(), shape.dim()),
          shape.weights};
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double operator_norm(const OperatorMatrix& m) {
  return operator_norm(m.standardized());
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_hermitian(const OperatorMatrix& m, double tol) {
  return is_hermitian(m.standardized(), tol);
}

bool is_normal(const OperatorMatrix& m, double tol) {
  const Eigen::MatrixXcd a = m.standardized();
  if (is_hermitian(a, 1e-12)) return true;
  const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
  const double scale = std::max(1.0, a.squaredNorm());
  return comm.norm() <= tol * scale;
}

}  // namespace gca
