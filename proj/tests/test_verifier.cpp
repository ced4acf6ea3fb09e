#include <doctest.h>

#include "gca/verifier.hpp"

using namespace gca;
using cplx = std::complex<double>;

namespace {

CompactificationModel z_line_model() {
  CompactificationModel cm;
  cm.name = "z_line";
  cm.dim = 1;
  cm.inner_radius = 0;
  cm.fiber_map = FiberMap::sign;
  cm.boundary = {{"minus_inf", LatticeGroup{1}}, {"plus_inf", LatticeGroup{1}}};
  return cm;
}

BandKernel free_band() {
  BandKernel bk;
  bk.self_adjoint = true;
  bk.coefficients[{1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{-1, 0}] = ConstCoefficient{1.0};
  return bk;
}

BandKernel step_band(double height = 4.0) {
  BandKernel bk = free_band();
  bk.coefficients[{0, 0}] = StepCoefficient{height, 0.0};
  return bk;
}

const BumpFunction kTent35({{3.0, 0.0}, {3.5, 1.0}, {4.5, 1.0}, {5.0, 0.0}});

}  // namespace

TEST_CASE("hypothesis gate: gap, overlap, union over a two-point quasi-orbit") {
  const CompactificationModel cm = z_line_model();

  const GapReport plus = check_hypothesis(kTent35, step_band(), cm, {"plus_inf"});
  CHECK(plus.gap == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(plus.resolution > 0.0);

  // supp kappa = [1,3] meets sp(F_plus) = [-2,2]
  const BumpFunction low({{1.0, 0.0}, {2.0, 1.0}, {3.0, 0.0}});
  try {
    check_hypothesis(low, step_band(), cm, {"plus_inf"});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::hypothesis_fails);
  }

  // far-separated bands [8,12] and [-2,2]: kappa in between clears both
  const BumpFunction mid({{4.0, 0.0}, {5.0, 1.0}, {6.0, 0.0}});
  const GapReport both =
      check_hypothesis(mid, step_band(10.0), cm, {"minus_inf", "plus_inf"});
  CHECK(both.gap == doctest::Approx(2.0).epsilon(1e-9));

  try {
    check_hypothesis(mid, step_band(), cm, {"nowhere"});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_unit);
  }
}

TEST_CASE("construct_psi separates a finite support window from the ends") {
  const CompactifiedGroupoid cg = build_compactified_groupoid(z_line_model(), 24);
  Kernel f(cg.groupoid);
  // band of width one supported on |m| <= 2
  const int n_int = cg.realized.interior_count();
  for (int i = 0; i < n_int; ++i) {
    const LatticePoint& p = cg.realized.points()[i];
    if (std::abs(p[0]) > 2) continue;
    const int j = cg.realized.index_of({p[0] - 1, 0});
    if (j >= 0 && std::abs(p[0] - 1) <= 2) {
      f.set(i * n_int + j, 1.0);
      f.set(j * n_int + i, 1.0);
    }
  }

  const PsiConstruction psi =
      construct_psi(cg, 0.5, {"minus_inf", "plus_inf"}, f);
  CHECK(psi.tail_norm == 0.0);
  CHECK(psi.left_norm + psi.right_norm <= 0.5);
  // psi vanishes on the support window and reaches 2 at both ends
  for (int i = 0; i < n_int; ++i) {
    const int m = cg.realized.points()[i][0];
    const double v = psi.psi.at(cg.interior_unit[i]).real();
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
    if (std::abs(m) <= psi.truncation_radius) CHECK(v == 0.0);
  }
  CHECK(psi.psi.at(cg.boundary_unit[0]) == cplx{2.0});
  CHECK(psi.psi.at(cg.boundary_unit[1]) == cplx{2.0});
}

TEST_CASE("construct_psi: heavy tails need a larger truncation") {
  auto diagonal_decay = [](const CompactifiedGroupoid& cg) {
    Kernel f(cg.groupoid);
    const int n_int = cg.realized.interior_count();
    for (int i = 0; i < n_int; ++i)
      f.set(i * n_int + i, std::exp(-std::abs(cg.realized.points()[i][0])));
    return f;
  };

  // 1/(1+m) tails are too slow for a small window at eps = 0.1
  {
    const CompactifiedGroupoid cg = build_compactified_groupoid(z_line_model(), 12);
    Kernel f(cg.groupoid);
    const int n_int = cg.realized.interior_count();
    for (int i = 0; i < n_int; ++i)
      f.set(i * n_int + i, 1.0 / (1.0 + std::abs(cg.realized.points()[i][0])));
    try {
      construct_psi(cg, 0.1, {"plus_inf"}, f);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::no_separation);
    }
  }

  // exponential tails separate once the truncation is generous enough,
  // and halving eps at least halves the reported norms
  const CompactifiedGroupoid cg = build_compactified_groupoid(z_line_model(), 24);
  const Kernel f = diagonal_decay(cg);
  double previous = -1.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    const PsiConstruction psi = construct_psi(cg, eps, {"plus_inf"}, f);
    const double reported = psi.left_norm + psi.right_norm;
    CHECK(reported <= eps);
    if (previous >= 0.0) CHECK(reported <= previous / 2.0 + 1e-12);
    previous = reported;
  }
}

TEST_CASE("find_localization_neighborhood on the desk-scale step model") {
  const VerifierSession session(step_band(), z_line_model(), 200);
  const LocalizationResult loc =
      session.find_localization_neighborhood(0.25, kTent35, {"plus_inf"});

  CHECK(loc.E_names == std::vector<std::string>{"plus_inf"});
  CHECK(loc.static_norm <= 0.25);
  CHECK(loc.K_radius > 0);
  CHECK(loc.K_radius < 200);
  CHECK(loc.rho <= loc.K_radius);
  // logged chain: static <= sqrt form <= psi-kappa <= eps
  CHECK(loc.static_norm <= loc.sqrt_form + 1e-10);
  CHECK(loc.sqrt_form <= loc.psi_kappa_norm + 1e-10);
  CHECK(loc.psi_kappa_norm <= 0.25 + 1e-12);
  CHECK(loc.psi_f_norms <= 0.25 + 1e-12);
  // a-priori bound
  CHECK(loc.static_norm <= kTent35.sup_abs() + 1e-12);

  // shrinking eps never shrinks K
  const LocalizationResult tighter =
      session.find_localization_neighborhood(0.05, kTent35, {"plus_inf"});
  CHECK(tighter.K_radius >= loc.K_radius);

  // membership of the returned neighborhood matches its tail description
  for (int i = 0; i < session.realized().interior_count(); ++i) {
    const LatticePoint& p = session.realized().points()[i];
    const bool in =
        membership_neighborhood(session.realized(), loc.spec, XPoint::interior(p));
    CHECK(in == (session.realized().fiber_of(i) == 1 && p[0] > loc.K_radius));
  }
}

TEST_CASE("zero bump and the a-priori regime") {
  const VerifierSession session(step_band(), z_line_model(), 60);
  const BumpFunction zero({{0.0, 0.0}, {1.0, 0.0}});
  const LocalizationResult loc =
      session.find_localization_neighborhood(0.1, zero, {"plus_inf"});
  CHECK(loc.static_norm == 0.0);
  CHECK(loc.psi_kappa_norm == 0.0);

  // eps = 2 sup|kappa|: any neighborhood is acceptable a priori
  const LocalizationResult wide =
      session.find_localization_neighborhood(2.0 * kTent35.sup_abs(), kTent35,
                                             {"plus_inf"});
  CHECK(wide.static_norm <= kTent35.sup_abs() + 1e-12);
}

TEST_CASE("propagation sweep: domination, t = 0, and annihilated probes") {
  const VerifierSession session(step_band(), z_line_model(), 80);
  const LocalizationResult loc =
      session.find_localization_neighborhood(0.2, kTent35, {"plus_inf"});

  const SweepResult sweep =
      session.propagation_sweep(loc, kTent35, 6, 99, 0.0, 10.0, 0.5);
  CHECK(sweep.t.size() == 21);
  CHECK(sweep.probes == 6);
  CHECK(sweep.max <= loc.static_norm + 1e-10);
  for (int p = 0; p < 6; ++p)
    CHECK(sweep.localized_mass(0, p) <= loc.static_norm + 1e-12);

  // a probe lying in an eigenspace with kappa(lambda) = 0 is annihilated
  const OperatorMatrix h = interior_operator(step_band(), session.realized());
  const Eigensystem es = eigensystem(h);
  int idx = -1;
  for (int i = 0; i < es.eigenvalues.size(); ++i)
    if (kTent35(es.eigenvalues[i].real()) == 0.0) idx = i;
  REQUIRE(idx >= 0);
  Eigen::MatrixXcd probe = es.vectors.col(idx);
  const SweepResult dead = session.propagation_sweep(loc, kTent35, probe, 0.0, 5.0, 1.0);
  CHECK(dead.max <= 1e-12);
}

TEST_CASE("deterministic probes") {
  const Eigen::MatrixXcd a = gaussian_probes(32, 4, 7);
  const Eigen::MatrixXcd b = gaussian_probes(32, 4, 7);
  CHECK((a - b).norm() == 0.0);
  const Eigen::MatrixXcd c = gaussian_probes(32, 4, 8);
  CHECK((a - c).norm() > 1e-3);
  for (int p = 0; p < 4; ++p) CHECK(a.col(p).norm() == doctest::Approx(1.0));
}

TEST_CASE("ideal membership residuals") {
  // free model, kappa outside [-2,2]: kappa(H_L) vanishes identically
  {
    const VerifierSession session(free_band(), z_line_model(), 120);
    std::vector<int> all;
    for (int i = 0; i < session.realized().interior_count(); ++i) all.push_back(i);
    CHECK(session.localized_norm(kTent35, all) <= 1e-8);
    const ResidualLadder ladder =
        session.ideal_membership_residual(kTent35, {"plus_inf"});
    for (double r : ladder.residuals) CHECK(r <= 1e-8);
  }
  // step model: residuals decrease along the radius ladder
  {
    const VerifierSession session(step_band(), z_line_model(), 120);
    const ResidualLadder ladder =
        session.ideal_membership_residual(kTent35, {"plus_inf"});
    REQUIRE(ladder.radii.size() == 4);
    for (std::size_t i = 1; i < ladder.residuals.size(); ++i)
      CHECK(ladder.residuals[i] <= ladder.residuals[i - 1] + 1e-6);
    const BumpFunction zero({{0.0, 0.0}, {1.0, 0.0}});
    for (double r : session.ideal_membership_residual(zero, {"plus_inf"}).residuals)
      CHECK(r == 0.0);
  }
}

TEST_CASE("localized norms are monotone under shrinking neighborhoods") {
  const VerifierSession session(step_band(), z_line_model(), 100);
  auto tail = [&](int radius) {
    std::vector<int> rows;
    for (int i = 0; i < session.realized().interior_count(); ++i) {
      const LatticePoint& p = session.realized().points()[i];
      if (session.realized().fiber_of(i) == 1 && p[0] > radius) rows.push_back(i);
    }
    return rows;
  };
  double previous = 1e300;
  for (int radius : {5, 20, 40, 60}) {
    const double norm = session.localized_norm(kTent35, tail(radius));
    CHECK(norm <= previous + 1e-12);
    previous = norm;
  }
}

TEST_CASE("truncation stability of the static norm") {
  const LocalizationResult a =
      find_localization_neighborhood(0.1, kTent35, {"plus_inf"}, step_band(),
                                     z_line_model(), 100);
  const LocalizationResult b =
      find_localization_neighborhood(0.1, kTent35, {"plus_inf"}, step_band(),
                                     z_line_model(), 200);
  CHECK(std::abs(a.static_norm - b.static_norm) <= 5e-2);
}

TEST_CASE("non-self-adjoint interior operators are rejected by the session") {
  BandKernel bk;
  bk.self_adjoint = false;
  bk.coefficients[{1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{-1, 0}] = ConstCoefficient{2.0};
  try {
    VerifierSession session(bk, z_line_model(), 16);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_selfadjoint);
  }
}

TEST_CASE("complex hermitian kernels take the dense hermitian path") {
  BandKernel bk;
  bk.self_adjoint = true;
  bk.coefficients[{1, 0}] = ConstCoefficient{cplx{0.0, 1.0}};
  bk.coefficients[{-1, 0}] = ConstCoefficient{cplx{0.0, -1.0}};
  const VerifierSession session(bk, z_line_model(), 60);
  // symbol is 2 sin(theta) in disguise: spectrum still [-2, 2]
  const GapReport gap = session.hypothesis(kTent35, {"plus_inf"});
  CHECK(gap.gap == doctest::Approx(1.0).epsilon(1e-6));
  const LocalizationResult loc =
      session.find_localization_neighborhood(0.3, kTent35, {"plus_inf"});
  CHECK(loc.static_norm <= 0.3);
  const SweepResult sweep = session.propagation_sweep(loc, kTent35, 4, 3, 0.0, 4.0, 1.0);
  CHECK(sweep.max <= loc.static_norm + 1e-10);
}
