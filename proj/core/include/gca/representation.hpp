#pragma once

#include "gca/kernel.hpp"
#include "gca/operator_matrix.hpp"

namespace gca {

// Regular representation Pi_x: the matrix of u |-> f * u on l^2(Xi_x;
// lambda_x), in the stored arrow order of the fiber.
OperatorMatrix regular_rep(const Kernel& f, UnitIndex x);

// The space l^2(M; mu) of the vector representation: a principal orbit M,
// an anchor z in M, the transport bijection r_z: Xi_z -> M and the
// transported measure mu = r_z(lambda_z).
struct VectorRepSpace {
  GroupoidPtr groupoid;
  UnitIndex anchor = kNoUnit;
  std::vector<UnitIndex> points;      // M, ascending unit order
  std::vector<ArrowIndex> transport;  // r_z^{-1}(points[i]) in Xi_z
  Eigen::VectorXd mu;

  int index_of_unit(UnitIndex x) const;  // -1 when x not in M
};

// Throws E_UNKNOWN_UNIT for a bad anchor and E_NOT_PRINCIPAL when the
// transport is not a bijection (nontrivial isotropy on the orbit).
VectorRepSpace vector_rep_space(const GroupoidPtr& g, UnitIndex z);

// Pi_0(f) = R_z^{-1} Pi_z(f) R_z on l^2(M; mu); unitarily equivalent to the
// regular representation at the anchor.
OperatorMatrix vector_rep(const VectorRepSpace& space, const Kernel& f);

// Pi_0 extended to C(X): multiplication by psi|_M, a diagonal matrix.
OperatorMatrix multiplier_mult(const VectorRepSpace& space, const UnitFunction& psi);

// Inverse of vector_rep on kernels supported in Xi_M: reconstructs the
// unique kernel with the given matrix (exact on pair groupoids).
Kernel kernel_from_vector_rep(const VectorRepSpace& space, const OperatorMatrix& m);

}  // namespace gca
