#include "gca/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace gca {

namespace {

constexpr double kResidualTol = 1e-8;

void check_eigen_residuals(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& lam,
                           const Eigen::MatrixXcd& v) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return;
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-30);
  const double tol = kResidualTol * scale + 1e-14;
  auto fail = [&](int i, double r) {
    throw std::runtime_error("eigensolver residual " + std::to_string(r) +
                             " above tolerance at pair " + std::to_string(i));
  };
  if (n <= 1500) {
    const Eigen::MatrixXcd r = a * v - v * lam.asDiagonal();
    for (int i = 0; i < n; ++i)
      if (r.col(i).norm() > tol) fail(i, r.col(i).norm());
  } else {
    // Deterministic sample including both spectral extremes.
    const int samples = 256;
    for (int k = 0; k < samples; ++k) {
      const int i = static_cast<int>((static_cast<long long>(k) * (n - 1)) / (samples - 1));
      const double r = (a * v.col(i) - lam[i] * v.col(i)).norm();
      if (r > tol) fail(i, r);
    }
  }
}

bool effectively_real(const Eigen::MatrixXcd& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return a.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

Eigen::MatrixXcd unstandardize(const OperatorMatrix& shape, const Eigen::MatrixXcd& m) {
  if (shape.unit_weights()) return m;
  const Eigen::ArrayXd sqrt_w = shape.weights.array().sqrt();
  Eigen::MatrixXcd out = m;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j)
      out(i, j) *= sqrt_w[j] / sqrt_w[i];
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

BumpFunction::BumpFunction(std::vector<std::pair<double, double>> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2)
    throw Error(ErrorCode::config, "bump function needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i - 1].first < nodes_[i].first))
      throw Error(ErrorCode::config, "bump nodes must have strictly increasing abscissae");
  if (nodes_.front().second != 0.0 || nodes_.back().second != 0.0)
    throw Error(ErrorCode::config, "bump function must vanish at its first and last node");

  for (const auto& [x, y] : nodes_) sup_abs_ = std::max(sup_abs_, std::abs(y));

  // Support components: closure of the union of segments that are not
  // identically zero.
  double begin = 0.0, end = 0.0;
  bool open = false;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const bool nonzero = nodes_[i].second != 0.0 || nodes_[i + 1].second != 0.0;
    if (nonzero) {
      if (!open) {
        begin = nodes_[i].first;
        open = true;
      }
      end = nodes_[i + 1].first;
    } else if (open) {
      support_.emplace_back(begin, end);
      open = false;
    }
  }
  if (open) support_.emplace_back(begin, end);
}

double BumpFunction::operator()(double x) const {
  if (x <= nodes_.front().first || x >= nodes_.back().first) return 0.0;
  auto it = std::upper_bound(
      nodes_.begin(), nodes_.end(), x,
      [](double v, const std::pair<double, double>& node) { return v < node.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  const double s = (x - x0) / (x1 - x0);
  return y0 + s * (y1 - y0);
}

// ---------------------------------------------------------------------------

SymmetricEigensystem dense_symmetric_eig(Eigen::MatrixXd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  SymmetricEigensystem out;
  out.eigenvalues.resize(n);
  if (n > 0) {
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(),
                                           n, out.eigenvalues.data());
    if (info != 0)
      throw std::runtime_error("dsyevd failed with info=" + std::to_string(info));
  }
  out.vectors = std::move(a);
  return out;
}

HermitianEigensystem dense_hermitian_eig(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  HermitianEigensystem out;
  out.eigenvalues.resize(n);
  if (n > 0) {
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(),
                                           n, out.eigenvalues.data());
    if (info != 0)
      throw std::runtime_error("zheevd failed with info=" + std::to_string(info));
  }
  out.vectors = std::move(a);
  return out;
}

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n > 0) {
    const lapack_int info =
        LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0)
      throw std::runtime_error("dsyev failed with info=" + std::to_string(info));
  }
  return w;
}

Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n > 0) {
    const lapack_int info =
        LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0)
      throw std::runtime_error("zheev failed with info=" + std::to_string(info));
  }
  return w;
}

Eigensystem eigensystem(const OperatorMatrix& h) {
  Eigen::MatrixXcd a = h.standardized();
  Eigensystem es;
  if (is_hermitian(a)) {
    es.hermitian = true;
    if (effectively_real(a)) {
      SymmetricEigensystem sys = dense_symmetric_eig(a.real());
      es.eigenvalues = sys.eigenvalues.cast<std::complex<double>>();
      es.vectors = sys.vectors.cast<std::complex<double>>();
    } else {
      HermitianEigensystem sys = dense_hermitian_eig(a);
      es.eigenvalues = sys.eigenvalues.cast<std::complex<double>>();
      es.vectors = std::move(sys.vectors);
    }
  } else {
    if (!is_normal(h))
      throw Error(ErrorCode::not_normal, "matrix is not normal (commutator check)");
    // For a normal matrix the Schur form is diagonal and the Schur basis is
    // an orthonormal eigenbasis.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(a, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
      throw std::runtime_error("complex Schur decomposition failed");
    es.eigenvalues = schur.matrixT().diagonal();
    es.vectors = schur.matrixU();
    es.hermitian = false;
  }
  check_eigen_residuals(a, es.eigenvalues, es.vectors);
  return es;
}

SpectrumSet spectrum(const OperatorMatrix& h) {
  const Eigensystem es = eigensystem(h);
  SpectrumSet s;
  s.kind = SpectrumKind::exact_eigenvalues;
  s.points.assign(es.eigenvalues.data(), es.eigenvalues.data() + es.eigenvalues.size());
  std::sort(s.points.begin(), s.points.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
            });
  return s;
}

OperatorMatrix functional_calculus(const BumpFunction& kappa, const OperatorMatrix& h) {
  const Eigensystem es = eigensystem(h);
  const int n = static_cast<int>(es.eigenvalues.size());

  std::vector<int> hit;
  for (int i = 0; i < n; ++i)
    if (kappa(es.eigenvalues[i].real()) != 0.0) hit.push_back(i);

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(n, n);
  if (!hit.empty()) {
    Eigen::MatrixXcd sub(n, static_cast<int>(hit.size()));
    Eigen::VectorXcd vals(static_cast<int>(hit.size()));
    for (std::size_t k = 0; k < hit.size(); ++k) {
      sub.col(static_cast<int>(k)) = es.vectors.col(hit[k]);
      vals[static_cast<int>(k)] = kappa(es.eigenvalues[hit[k]].real());
    }
    result = sub * vals.asDiagonal() * sub.adjoint();
  }
  return {h.basis, unstandardize(h, result), h.weights};
}

Eigen::MatrixXcd evolution_matrix(const Eigensystem& es, double t) {
  const int n = static_cast<int>(es.eigenvalues.size());
  Eigen::VectorXcd phases(n);
  for (int i = 0; i < n; ++i)
    phases[i] = std::exp(std::complex<double>(0.0, t * es.eigenvalues[i].real()));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

OperatorMatrix evolution(const OperatorMatrix& h, double t) {
  const Eigensystem es = eigensystem(h);
  if (!es.hermitian)
    throw Error(ErrorCode::not_selfadjoint, "evolution needs a self-adjoint generator");
  return {h.basis, unstandardize(h, evolution_matrix(es, t)), h.weights};
}

SpectrumSet essential_spectrum_union(const std::vector<SpectrumSet>& parts) {
  SpectrumSet out;
  out.kind = SpectrumKind::exact_eigenvalues;
  for (const SpectrumSet& p : parts) {
    if (p.kind == SpectrumKind::sampled_range) out.kind = SpectrumKind::sampled_range;
    out.resolution = std::max(out.resolution, p.resolution);
    out.points.insert(out.points.end(), p.points.begin(), p.points.end());
  }
  return out;
}

double support_gap(const BumpFunction& kappa, const SpectrumSet& s) {
  const auto& comps = kappa.support_components();
  if (comps.empty() || s.points.empty())
    return std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  for (const std::complex<double>& p : s.points) {
    for (const auto& [a, b] : comps) {
      const double dx = p.real() < a ? a - p.real() : (p.real() > b ? p.real() - b : 0.0);
      gap = std::min(gap, std::hypot(dx, p.imag()));
    }
  }
  return gap;
}

double hausdorff_distance(const SpectrumSet& a, const SpectrumSet& b) {
  if (a.points.empty() && b.points.empty()) return 0.0;
  if (a.points.empty() || b.points.empty())
    return std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<std::complex<double>>& from,
                     const std::vector<std::complex<double>>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a.points, b.points), directed(b.points, a.points));
}

}  // namespace gca
