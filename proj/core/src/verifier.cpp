#include "gca/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gca {

namespace {

constexpr double kChainSlack = 1e-10;

// Multi-source BFS distances on the realized X: interior lattice adjacency
// |delta|_inf = 1, boundary points adjacent to the outermost shell of their
// fiber. Unreachable nodes keep -1.
std::vector<int> bfs_distance(const RealizedModel& rm,
                              const std::vector<std::uint8_t>& seed) {
  const int n_int = rm.interior_count();
  const int n_all = n_int + static_cast<int>(rm.model().boundary.size());
  std::vector<int> dist(n_all, -1);
  std::deque<int> queue;
  for (int i = 0; i < n_all; ++i)
    if (seed[i]) {
      dist[i] = 0;
      queue.push_back(i);
    }

  const int L = rm.truncation();
  std::vector<LatticePoint> deltas;
  if (rm.dim() == 1) {
    deltas = {{1, 0}, {-1, 0}};
  } else {
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        if (dx != 0 || dy != 0) deltas.push_back({dx, dy});
  }
  // outermost shell per boundary point
  std::vector<std::vector<int>> shell(rm.model().boundary.size());
  for (int i = 0; i < n_int; ++i)
    if (rm.fiber_of(i) >= 0 && cheb_norm(rm.points()[i]) == L)
      shell[rm.fiber_of(i)].push_back(i);

  auto visit = [&](int node, int from_dist) {
    if (dist[node] < 0) {
      dist[node] = from_dist + 1;
      queue.push_back(node);
    }
  };
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop_front();
    if (node < n_int) {
      const LatticePoint& p = rm.points()[node];
      for (const LatticePoint& d : deltas) {
        const int j = rm.index_of(p + d);
        if (j >= 0) visit(j, dist[node]);
      }
      const int fiber = rm.fiber_of(node);
      if (fiber >= 0 && cheb_norm(p) == L) visit(n_int + fiber, dist[node]);
    } else {
      for (int j : shell[node - n_int]) visit(j, dist[node]);
    }
  }
  return dist;
}

struct Urysohn {
  Eigen::VectorXd interior;      // per realized point, in [0, 2]
  std::vector<double> boundary;  // per boundary point
};

// psi = 2 d(., S0) / (d(., S0) + d(., A)): 0 on S0, 2 on A, linear in graph
// distance across the collar. S0 is everything outside the A-fiber tails
// beyond rho.
Urysohn urysohn_cutoff(const RealizedModel& rm, const std::vector<int>& a_sorted,
                       int rho) {
  const int n_int = rm.interior_count();
  const int n_all = n_int + static_cast<int>(rm.model().boundary.size());
  std::vector<std::uint8_t> in_s0(n_all, 0), in_a(n_all, 0);
  for (int i = 0; i < n_int; ++i) {
    const int fiber = rm.fiber_of(i);
    const bool tail = fiber >= 0 &&
                      std::binary_search(a_sorted.begin(), a_sorted.end(), fiber) &&
                      cheb_norm(rm.points()[i]) > rho;
    in_s0[i] = tail ? 0 : 1;
  }
  for (std::size_t b = 0; b < rm.model().boundary.size(); ++b) {
    const bool in = std::binary_search(a_sorted.begin(), a_sorted.end(),
                                       static_cast<int>(b));
    in_a[n_int + b] = in ? 1 : 0;
    in_s0[n_int + b] = in ? 0 : 1;
  }

  const std::vector<int> d_s0 = bfs_distance(rm, in_s0);
  const std::vector<int> d_a = bfs_distance(rm, in_a);
  auto value = [&](int node) -> double {
    if (in_s0[node]) return 0.0;
    if (in_a[node]) return 2.0;
    if (d_s0[node] < 0 || d_a[node] < 0) return 0.0;
    return 2.0 * d_s0[node] / static_cast<double>(d_s0[node] + d_a[node]);
  };
  Urysohn out;
  out.interior.resize(n_int);
  for (int i = 0; i < n_int; ++i) out.interior[i] = value(i);
  for (std::size_t b = 0; b < rm.model().boundary.size(); ++b)
    out.boundary.push_back(value(n_int + static_cast<int>(b)));
  return out;
}

SpectrumSet table_group_spectrum(const BandKernel& bk, const CompactificationModel& cm,
                                 int boundary_index) {
  // Finite non-abelian isotropy: the spectrum of the full group convolution
  // matrix, no Fourier transform involved.
  const OperatorMatrix op = boundary_operator(bk, cm, boundary_index, 0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op.entries,
                                                     /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue computation failed for a table group");
  SpectrumSet s;
  s.kind = SpectrumKind::exact_eigenvalues;
  const auto& vals = solver.eigenvalues();
  s.points.assign(vals.data(), vals.data() + vals.size());
  return s;
}

}  // namespace

GapReport check_hypothesis(const BumpFunction& kappa, const BandKernel& bk,
                           const CompactificationModel& cm,
                           const std::vector<std::string>& quasi_orbit, int grid) {
  if (quasi_orbit.empty())
    throw Error(ErrorCode::unknown_unit, "empty quasi-orbit");
  std::vector<SpectrumSet> parts;
  for (const std::string& name : quasi_orbit) {
    const int n = cm.boundary_index(name);
    if (n < 0)
      throw Error(ErrorCode::unknown_unit, "no boundary point named '" + name + "'");
    if (std::holds_alternative<GroupTable>(cm.boundary[n].group))
      parts.push_back(table_group_spectrum(bk, cm, n));
    else
      parts.push_back(fourier_symbol_spectrum(bk, cm, n, grid));
  }
  GapReport report;
  report.boundary_spectrum = essential_spectrum_union(parts);
  report.resolution = report.boundary_spectrum.resolution;
  report.gap = support_gap(kappa, report.boundary_spectrum);
  if (!(report.gap > 0.0))
    throw Error(ErrorCode::hypothesis_fails,
                "supp(kappa) meets the boundary spectrum (gap 0)");
  return report;
}

Eigen::MatrixXcd gaussian_probes(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    // (0, 1], exactly reproducible across platforms
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  };
  Eigen::MatrixXcd probes(dim, count);
  for (int p = 0; p < count; ++p) {
    for (int i = 0; i < dim; ++i) {
      const double r = std::sqrt(-2.0 * std::log(uniform()));
      const double phi = 2.0 * M_PI * uniform();
      probes(i, p) = std::complex<double>(r * std::cos(phi), r * std::sin(phi));
    }
    probes.col(p).normalize();
  }
  return probes;
}

// ---------------------------------------------------------------------------

VerifierSession::VerifierSession(BandKernel bk, CompactificationModel cm,
                                 int truncation)
    : bk_(std::move(bk)), rm_(std::move(cm), truncation) {
  real_path_ = bk_.self_adjoint && band_all_real(bk_, rm_);
  if (real_path_) {
    SymmetricEigensystem sys = dense_symmetric_eig(interior_matrix_real(bk_, rm_));
    eigenvalues_ = std::move(sys.eigenvalues);
    vectors_real_ = std::move(sys.vectors);
  } else {
    OperatorMatrix h = interior_operator(bk_, rm_);
    if (!is_hermitian(h.entries, 1e-12))
      throw Error(ErrorCode::not_selfadjoint,
                  "verifier experiments need a self-adjoint interior operator");
    HermitianEigensystem sys = dense_hermitian_eig(std::move(h.entries));
    eigenvalues_ = std::move(sys.eigenvalues);
    vectors_cplx_ = std::move(sys.vectors);
  }

  // Spot-check eigenpair residuals through the band action.
  const int n = rm_.interior_count();
  const double scale = std::max(eigenvalues_.cwiseAbs().maxCoeff(), 1e-30);
  const int samples = std::min(n, 64);
  for (int s = 0; s < samples; ++s) {
    const int i = static_cast<int>((static_cast<long long>(s) * (n - 1)) /
                                   std::max(samples - 1, 1));
    double residual;
    if (real_path_) {
      const Eigen::VectorXd v = vectors_real_.col(i);
      residual = (band_apply(bk_, rm_, v) - eigenvalues_[i] * v).norm();
    } else {
      const Eigen::VectorXcd v = vectors_cplx_.col(i);
      residual = (band_apply(bk_, rm_, v) - eigenvalues_[i] * v).norm();
    }
    if (residual > 1e-8 * scale)
      throw std::runtime_error("eigenpair residual above tolerance: " +
                               std::to_string(residual));
  }
}

VerifierSession::KappaData VerifierSession::kappa_data(const BumpFunction& kappa) const {
  KappaData k;
  std::vector<double> vals;
  for (int i = 0; i < eigenvalues_.size(); ++i) {
    const double v = kappa(eigenvalues_[i]);
    if (v != 0.0) {
      k.support.push_back(i);
      vals.push_back(v);
    }
  }
  k.values = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
  return k;
}

std::vector<int> VerifierSession::quasi_orbit_indices(
    const std::vector<std::string>& names) const {
  if (names.empty()) throw Error(ErrorCode::unknown_unit, "empty quasi-orbit");
  std::vector<int> idx;
  for (const std::string& name : names) {
    const int n = rm_.model().boundary_index(name);
    if (n < 0)
      throw Error(ErrorCode::unknown_unit, "no boundary point named '" + name + "'");
    idx.push_back(n);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

std::vector<int> VerifierSession::tail_rows(const std::vector<int>& fibers,
                                            int radius) const {
  std::vector<int> rows;
  for (int i = 0; i < rm_.interior_count(); ++i) {
    const int fiber = rm_.fiber_of(i);
    if (fiber >= 0 && std::binary_search(fibers.begin(), fibers.end(), fiber) &&
        cheb_norm(rm_.points()[i]) > radius)
      rows.push_back(i);
  }
  return rows;
}

double VerifierSession::block_norm(const std::vector<int>& rows, const KappaData& k,
                                   const Eigen::VectorXd* row_scale) const {
  const int nr = static_cast<int>(rows.size());
  const int ns = static_cast<int>(k.support.size());
  if (nr == 0 || ns == 0) return 0.0;
  if (real_path_) {
    Eigen::MatrixXd c(nr, ns);
    for (int j = 0; j < ns; ++j)
      for (int i = 0; i < nr; ++i)
        c(i, j) = vectors_real_(rows[i], k.support[j]) * k.values[j];
    if (row_scale)
      for (int i = 0; i < nr; ++i) c.row(i) *= (*row_scale)[i];
    const Eigen::MatrixXd gram =
        nr <= ns ? Eigen::MatrixXd(c * c.transpose()) : Eigen::MatrixXd(c.transpose() * c);
    const Eigen::VectorXd eigs = symmetric_eigenvalues(gram);
    return std::sqrt(std::max(eigs[eigs.size() - 1], 0.0));
  }
  Eigen::MatrixXcd c(nr, ns);
  for (int j = 0; j < ns; ++j)
    for (int i = 0; i < nr; ++i)
      c(i, j) = vectors_cplx_(rows[i], k.support[j]) * k.values[j];
  if (row_scale)
    for (int i = 0; i < nr; ++i) c.row(i) *= (*row_scale)[i];
  const Eigen::MatrixXcd gram =
      nr <= ns ? Eigen::MatrixXcd(c * c.adjoint()) : Eigen::MatrixXcd(c.adjoint() * c);
  const Eigen::VectorXd eigs = hermitian_eigenvalues(gram);
  return std::sqrt(std::max(eigs[eigs.size() - 1], 0.0));
}

double VerifierSession::corner_norm(const std::vector<int>& rows,
                                    const KappaData& k) const {
  // ||1_rows kappa(H) 1_rows|| = max |eig| of A diag(kappa) A^H.
  const int nr = static_cast<int>(rows.size());
  const int ns = static_cast<int>(k.support.size());
  if (nr == 0 || ns == 0) return 0.0;
  if (real_path_) {
    Eigen::MatrixXd a(nr, ns);
    for (int j = 0; j < ns; ++j)
      for (int i = 0; i < nr; ++i) a(i, j) = vectors_real_(rows[i], k.support[j]);
    const Eigen::MatrixXd m = a * k.values.asDiagonal() * a.transpose();
    const Eigen::VectorXd eigs = symmetric_eigenvalues(m);
    return std::max(std::abs(eigs[0]), std::abs(eigs[eigs.size() - 1]));
  }
  Eigen::MatrixXcd a(nr, ns);
  for (int j = 0; j < ns; ++j)
    for (int i = 0; i < nr; ++i) a(i, j) = vectors_cplx_(rows[i], k.support[j]);
  const Eigen::MatrixXcd m =
      a * k.values.cast<std::complex<double>>().asDiagonal() * a.adjoint();
  const Eigen::VectorXd eigs = hermitian_eigenvalues(m);
  return std::max(std::abs(eigs[0]), std::abs(eigs[eigs.size() - 1]));
}

double VerifierSession::localized_norm(const BumpFunction& kappa,
                                       const std::vector<int>& rows) const {
  return block_norm(rows, kappa_data(kappa));
}

GapReport VerifierSession::hypothesis(const BumpFunction& kappa,
                                      const std::vector<std::string>& quasi_orbit,
                                      int grid) const {
  return check_hypothesis(kappa, bk_, rm_.model(), quasi_orbit, grid);
}

LocalizationResult VerifierSession::find_localization_neighborhood(
    double eps, const BumpFunction& kappa, const std::vector<std::string>& quasi_orbit,
    int grid) const {
  if (!(eps > 0.0)) throw Error(ErrorCode::config, "eps must be positive");
  const GapReport gr = hypothesis(kappa, quasi_orbit, grid);
  const std::vector<int> q = quasi_orbit_indices(quasi_orbit);
  const KappaData k = kappa_data(kappa);

  // Smallest truncation radius rho whose tail contribution is below eps/4;
  // nested tails make the tail norm monotone, so bisection applies.
  const int rho_min = rm_.model().inner_radius;
  const int rho_max = rm_.truncation() - 4;
  if (rho_max < rho_min)
    throw Error(ErrorCode::no_separation, "truncation window too small");
  auto tail_fn = [&](int rho) { return 2.0 * block_norm(tail_rows(q, rho), k); };
  const double threshold = eps / 4.0;
  int rho;
  if (tail_fn(rho_min) <= threshold) {
    rho = rho_min;
  } else if (tail_fn(rho_max) > threshold) {
    throw Error(ErrorCode::no_separation,
                "tail norm " + std::to_string(tail_fn(rho_max)) +
                    " above eps/4 at the largest usable radius " +
                    std::to_string(rho_max) + "; increase the truncation");
  } else {
    int lo = rho_min, hi = rho_max;
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (tail_fn(mid) <= threshold ? hi : lo) = mid;
    }
    rho = hi;
  }

  const Urysohn psi = urysohn_cutoff(rm_, q, rho);
  std::vector<int> w0;
  for (int i = 0; i < rm_.interior_count(); ++i)
    if (psi.interior[i] > 1.0) w0.push_back(i);
  if (w0.empty())
    throw Error(ErrorCode::no_separation, "empty localized neighborhood");

  int k_radius = rm_.truncation();
  for (int i : w0) k_radius = std::min(k_radius, cheb_norm(rm_.points()[i]));
  k_radius -= 1;
  // W0 must coincide with the (E, ball) realization it reports.
  if (w0 != tail_rows(q, k_radius))
    throw std::logic_error("localized neighborhood is not radial");

  LocalizationResult loc;
  loc.eps = eps;
  for (int n : q) loc.E_names.push_back(rm_.model().boundary[n].name);
  loc.spec = NeighborhoodSpec::ball(rm_, q, k_radius);
  loc.K_radius = k_radius;
  loc.rho = rho;
  loc.gap = gr.gap;
  loc.resolution = gr.resolution;
  loc.static_norm = block_norm(w0, k);

  // ||kappa(H) 1_W0 kappa(H)||^{1/2} = ||C^T C||^{1/2} for C = 1_W0 kappa(H),
  // evaluated through the supp(kappa)-side gram.
  {
    const int ns = static_cast<int>(k.support.size());
    if (ns == 0 || w0.empty()) {
      loc.sqrt_form = 0.0;
    } else if (real_path_) {
      Eigen::MatrixXd c(static_cast<int>(w0.size()), ns);
      for (int j = 0; j < ns; ++j)
        for (std::size_t i = 0; i < w0.size(); ++i)
          c(static_cast<int>(i), j) = vectors_real_(w0[i], k.support[j]) * k.values[j];
      const Eigen::VectorXd eigs = symmetric_eigenvalues(c.transpose() * c);
      loc.sqrt_form = std::sqrt(std::max(eigs[eigs.size() - 1], 0.0));
    } else {
      Eigen::MatrixXcd c(static_cast<int>(w0.size()), ns);
      for (int j = 0; j < ns; ++j)
        for (std::size_t i = 0; i < w0.size(); ++i)
          c(static_cast<int>(i), j) = vectors_cplx_(w0[i], k.support[j]) * k.values[j];
      const Eigen::VectorXd eigs = hermitian_eigenvalues(c.adjoint() * c);
      loc.sqrt_form = std::sqrt(std::max(eigs[eigs.size() - 1], 0.0));
    }
  }

  // ||psi|_M kappa(H)||: scaled rows where psi is positive.
  {
    std::vector<int> rows;
    std::vector<double> scales;
    for (int i = 0; i < rm_.interior_count(); ++i)
      if (psi.interior[i] > 0.0) {
        rows.push_back(i);
        scales.push_back(psi.interior[i]);
      }
    const Eigen::VectorXd scale_vec =
        Eigen::Map<Eigen::VectorXd>(scales.data(), static_cast<int>(scales.size()));
    loc.psi_kappa_norm = block_norm(rows, k, &scale_vec);
  }
  loc.psi_f_norms = 2.0 * loc.psi_kappa_norm;  // kappa(H) is self-adjoint

  // Proof chain, verified on every run.
  if (loc.static_norm > loc.sqrt_form + kChainSlack ||
      loc.sqrt_form > loc.psi_kappa_norm + kChainSlack ||
      loc.psi_kappa_norm > eps + kChainSlack)
    throw std::logic_error("localization proof chain violated");
  return loc;
}

SweepResult VerifierSession::propagation_sweep(const LocalizationResult& loc,
                                               const BumpFunction& kappa, int probes,
                                               std::uint64_t seed, double t_begin,
                                               double t_end, double t_step) const {
  if (probes < 1) throw Error(ErrorCode::config, "probe count must be positive");
  SweepResult sweep = propagation_sweep(
      loc, kappa, gaussian_probes(rm_.interior_count(), probes, seed), t_begin,
      t_end, t_step);
  sweep.seed = seed;
  return sweep;
}

SweepResult VerifierSession::propagation_sweep(const LocalizationResult& loc,
                                               const BumpFunction& kappa,
                                               const Eigen::MatrixXcd& u,
                                               double t_begin, double t_end,
                                               double t_step) const {
  if (u.rows() != rm_.interior_count())
    throw Error(ErrorCode::config, "probe dimension does not match the interior");
  const int probes = static_cast<int>(u.cols());
  if (probes < 1) throw Error(ErrorCode::config, "probe count must be positive");
  if (!(t_step > 0.0) || t_end < t_begin)
    throw Error(ErrorCode::config, "bad time grid");
  const KappaData k = kappa_data(kappa);
  const std::vector<int> q = quasi_orbit_indices(loc.E_names);
  const std::vector<int> rows = tail_rows(q, loc.K_radius);
  const int n = rm_.interior_count();
  const int nr = static_cast<int>(rows.size());
  const int ns = static_cast<int>(k.support.size());

  SweepResult sweep;
  sweep.probes = probes;
  sweep.seed = 0;
  for (double t = t_begin; t <= t_end + 1e-12; t += t_step) sweep.t.push_back(t);
  const int nt = static_cast<int>(sweep.t.size());
  sweep.localized_mass = Eigen::MatrixXd::Zero(nt, probes);
  if (nr > 0 && ns > 0) {
    // coefficients of the probes in the eigenbasis, restricted to supp kappa
    Eigen::MatrixXcd coeff(ns, probes);
    Eigen::MatrixXcd rows_block(nr, ns);  // 1_W0-rows of the eigenvectors, scaled
    if (real_path_) {
      Eigen::MatrixXd sub(n, ns);
      for (int j = 0; j < ns; ++j) sub.col(j) = vectors_real_.col(k.support[j]);
      coeff = (sub.transpose() * u.real()).cast<std::complex<double>>();
      coeff += std::complex<double>(0, 1) *
               (sub.transpose() * u.imag()).cast<std::complex<double>>();
      for (int j = 0; j < ns; ++j)
        for (int i = 0; i < nr; ++i)
          rows_block(i, j) = vectors_real_(rows[i], k.support[j]) * k.values[j];
    } else {
      Eigen::MatrixXcd sub(n, ns);
      for (int j = 0; j < ns; ++j) sub.col(j) = vectors_cplx_.col(k.support[j]);
      coeff = sub.adjoint() * u;
      for (int j = 0; j < ns; ++j)
        for (int i = 0; i < nr; ++i)
          rows_block(i, j) = vectors_cplx_(rows[i], k.support[j]) * k.values[j];
    }

    Eigen::MatrixXcd phased_coeff(ns, probes);
    for (int ti = 0; ti < nt; ++ti) {
      for (int j = 0; j < ns; ++j) {
        const std::complex<double> phase =
            std::exp(std::complex<double>(0.0, sweep.t[ti] * eigenvalues_[k.support[j]]));
        phased_coeff.row(j) = coeff.row(j) * phase;
      }
      const Eigen::MatrixXcd localized = rows_block * phased_coeff;
      for (int p = 0; p < probes; ++p)
        sweep.localized_mass(ti, p) = localized.col(p).norm();
    }
  }
  sweep.max = sweep.localized_mass.size() > 0 ? sweep.localized_mass.maxCoeff() : 0.0;

  // Operator-norm domination, exact up to eigensolver roundoff.
  const double static_norm = block_norm(rows, k);
  if (sweep.max > static_norm + kChainSlack)
    throw std::logic_error("sweep max exceeds the static norm");
  return sweep;
}

ResidualLadder VerifierSession::ideal_membership_residual(
    const BumpFunction& kappa, const std::vector<std::string>& quasi_orbit,
    std::vector<int> radii) const {
  const std::vector<int> q = quasi_orbit_indices(quasi_orbit);
  const KappaData k = kappa_data(kappa);
  if (radii.empty()) {
    const int L = rm_.truncation();
    radii = {L / 8, L / 4, 3 * L / 8, L / 2};
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  ResidualLadder ladder;
  for (int r : radii) {
    ladder.radii.push_back(r);
    ladder.residuals.push_back(corner_norm(tail_rows(q, r), k));
  }
  return ladder;
}

// ---------------------------------------------------------------------------

LocalizationResult find_localization_neighborhood(double eps, const BumpFunction& kappa,
                                                  const std::vector<std::string>& quasi_orbit,
                                                  const BandKernel& bk,
                                                  const CompactificationModel& cm,
                                                  int truncation) {
  return VerifierSession(bk, cm, truncation)
      .find_localization_neighborhood(eps, kappa, quasi_orbit);
}

ResidualLadder ideal_membership_residual(const BumpFunction& kappa, const BandKernel& bk,
                                         const CompactificationModel& cm, int truncation,
                                         const std::vector<std::string>& quasi_orbit,
                                         std::vector<int> radii) {
  return VerifierSession(bk, cm, truncation)
      .ideal_membership_residual(kappa, quasi_orbit, std::move(radii));
}

// ---------------------------------------------------------------------------

PsiConstruction construct_psi(const CompactifiedGroupoid& cg, double eps,
                              const std::vector<std::string>& boundary_set,
                              const Kernel& f) {
  if (!(eps > 0.0)) throw Error(ErrorCode::config, "eps must be positive");
  if (f.parent() != cg.groupoid)
    throw Error(ErrorCode::parent_mismatch, "kernel not on the compactified groupoid");
  const RealizedModel& rm = cg.realized;

  std::vector<int> a_idx;
  for (const std::string& name : boundary_set) {
    const int b = rm.model().boundary_index(name);
    if (b < 0)
      throw Error(ErrorCode::unknown_unit, "no boundary point named '" + name + "'");
    a_idx.push_back(b);
  }
  if (a_idx.empty()) throw Error(ErrorCode::unknown_unit, "empty boundary set");
  std::sort(a_idx.begin(), a_idx.end());
  a_idx.erase(std::unique(a_idx.begin(), a_idx.end()), a_idx.end());

  // Norm surrogate: the vector representation on the interior.
  const VectorRepSpace space = vector_rep_space(cg.groupoid, cg.anchor());
  if (static_cast<int>(space.points.size()) != rm.interior_count())
    throw std::logic_error("vector representation does not cover the interior");
  const Eigen::MatrixXcd f_mat = vector_rep(space, f).entries;

  auto tail_of = [&](int rho) {
    std::vector<int> rows;
    for (int i = 0; i < rm.interior_count(); ++i) {
      const int fiber = rm.fiber_of(i);
      if (fiber >= 0 && std::binary_search(a_idx.begin(), a_idx.end(), fiber) &&
          cheb_norm(rm.points()[i]) > rho)
        rows.push_back(i);
    }
    return rows;
  };
  auto tail_fn = [&](int rho) {
    const std::vector<int> rows = tail_of(rho);
    if (rows.empty()) return 0.0;
    Eigen::MatrixXcd row_block(static_cast<int>(rows.size()), f_mat.cols());
    Eigen::MatrixXcd col_block(f_mat.rows(), static_cast<int>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      row_block.row(static_cast<int>(i)) = f_mat.row(rows[i]);
      col_block.col(static_cast<int>(i)) = f_mat.col(rows[i]);
    }
    return operator_norm(row_block) + operator_norm(col_block);
  };

  const int rho_min = rm.model().inner_radius;
  const int rho_max = rm.truncation() - 4;
  if (rho_max < rho_min)
    throw Error(ErrorCode::no_separation, "truncation window too small");
  const double threshold = eps / 4.0;
  int rho;
  if (tail_fn(rho_min) <= threshold) {
    rho = rho_min;
  } else if (tail_fn(rho_max) > threshold) {
    throw Error(ErrorCode::no_separation,
                "kernel tails toward the boundary set exceed eps/4 at every "
                "usable truncation radius");
  } else {
    int lo = rho_min, hi = rho_max;
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      (tail_fn(mid) <= threshold ? hi : lo) = mid;
    }
    rho = hi;
  }

  const Urysohn u = urysohn_cutoff(rm, a_idx, rho);
  PsiConstruction out{UnitFunction(cg.groupoid), rho, tail_fn(rho), 0.0, 0.0};
  for (int i = 0; i < rm.interior_count(); ++i)
    out.psi.set(cg.interior_unit[i], u.interior[i]);
  for (std::size_t b = 0; b < rm.model().boundary.size(); ++b)
    out.psi.set(cg.boundary_unit[b], u.boundary[b]);

  Eigen::MatrixXcd left = f_mat, right = f_mat;
  for (int i = 0; i < rm.interior_count(); ++i) {
    left.row(i) *= u.interior[i];
    right.col(i) *= u.interior[i];
  }
  out.left_norm = operator_norm(left);
  out.right_norm = operator_norm(right);
  if (out.left_norm + out.right_norm > eps + kChainSlack)
    throw std::logic_error("psi construction exceeded its eps bound");
  return out;
}

}  // namespace gca
