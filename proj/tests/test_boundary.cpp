#include <doctest.h>

#include <random>

#include "gca/boundary.hpp"
#include "gca/representation.hpp"
#include "support/oracles.hpp"

using namespace gca;
using cplx = std::complex<double>;

namespace {

// M = Z with two ends, p = sign, Sigma = Z at both ends.
CompactificationModel z_line_model() {
  CompactificationModel cm;
  cm.name = "z_line";
  cm.dim = 1;
  cm.inner_radius = 0;
  cm.fiber_map = FiberMap::sign;
  cm.boundary = {{"minus_inf", LatticeGroup{1}}, {"plus_inf", LatticeGroup{1}}};
  return cm;
}

CompactificationModel one_point_model() {
  CompactificationModel cm;
  cm.name = "one_point";
  cm.dim = 1;
  cm.inner_radius = 0;
  cm.fiber_map = FiberMap::all;
  cm.boundary = {{"infinity", LatticeGroup{1}}};
  return cm;
}

CompactificationModel z2_model() {
  CompactificationModel cm;
  cm.name = "z2_plane";
  cm.dim = 2;
  cm.inner_radius = 0;
  cm.fiber_map = FiberMap::all;
  cm.boundary = {{"infinity", LatticeGroup{2}}};
  return cm;
}

BandKernel free_band() {
  BandKernel bk;
  bk.self_adjoint = true;
  bk.coefficients[{1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{-1, 0}] = ConstCoefficient{1.0};
  return bk;
}

BandKernel step_band() {
  BandKernel bk = free_band();
  bk.coefficients[{0, 0}] = StepCoefficient{4.0, 0.0};
  return bk;
}

}  // namespace

TEST_CASE("compactified translation groupoid: orbits, validation, reduction") {
  const CompactifiedGroupoid cg = build_compactified_groupoid(z_line_model(), 3);
  const FiniteGroupoid& g = *cg.groupoid;
  // 7 interior points + 2 boundary points
  CHECK(g.unit_count() == 9);
  CHECK(validate(g).ok());

  std::vector<UnitIndex> interior(cg.interior_unit.begin(), cg.interior_unit.end());
  const OrbitDecomposition dec = orbit_decomposition(g, interior);
  CHECK(dec.orbits.size() == 3);  // interior + one singleton per end
  CHECK(dec.boundary.size() == 2);
  CHECK(dec.flagged_boundary_isotropy.size() == 2);

  // reduction to the boundary is a group bundle
  const Reduction red = reduce(g, dec.boundary);
  for (const Arrow& a : red.groupoid->arrows()) CHECK(a.source == a.range);

  // minimal truncation still validates
  CHECK(validate(*build_compactified_groupoid(z_line_model(), 1).groupoid).ok());
  // degenerate single boundary point
  CHECK(validate(*build_compactified_groupoid(one_point_model(), 2).groupoid).ok());
}

TEST_CASE("realize rejects inconsistent models") {
  CHECK_THROWS_AS(realize(z_line_model(), 0), Error);
  CompactificationModel bad = z_line_model();
  bad.boundary.pop_back();
  CHECK_THROWS_AS(realize(bad, 4), Error);
  CompactificationModel dup = z_line_model();
  dup.boundary[1].name = "minus_inf";
  CHECK_THROWS_AS(realize(dup, 4), Error);
}

TEST_CASE("neighborhood membership and the base intersection identity") {
  const RealizedModel rm = realize(z_line_model(), 12);

  const NeighborhoodSpec plus = NeighborhoodSpec::ball(rm, {1}, 5);
  CHECK(membership_neighborhood(rm, plus, XPoint::at_boundary(1)));
  CHECK_FALSE(membership_neighborhood(rm, plus, XPoint::at_boundary(0)));
  CHECK(membership_neighborhood(rm, plus, XPoint::interior({7, 0})));
  CHECK_FALSE(membership_neighborhood(rm, plus, XPoint::interior({4, 0})));  // in K
  CHECK_FALSE(membership_neighborhood(rm, plus, XPoint::interior({-7, 0})));  // p(m) not in E

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto random_spec = [&]() {
      std::vector<int> e;
      for (int b = 0; b < 2; ++b)
        if (rng() % 2) e.push_back(b);
      NeighborhoodSpec spec = NeighborhoodSpec::ball(rm, e, static_cast<int>(rng() % 8));
      // sprinkle extra excluded points so K is not just a ball
      for (int extra = 0; extra < 3; ++extra) {
        const LatticePoint p{static_cast<int>(rng() % 25) - 12, 0};
        spec.excluded.push_back(p);
      }
      std::sort(spec.excluded.begin(), spec.excluded.end());
      spec.excluded.erase(std::unique(spec.excluded.begin(), spec.excluded.end()),
                          spec.excluded.end());
      return spec;
    };
    const NeighborhoodSpec s1 = random_spec();
    const NeighborhoodSpec s2 = random_spec();
    // A_{E1,K1} cap A_{E2,K2} = A_{E1 cap E2, K1 cup K2}
    NeighborhoodSpec meet;
    std::set_intersection(s1.boundary_set.begin(), s1.boundary_set.end(),
                          s2.boundary_set.begin(), s2.boundary_set.end(),
                          std::back_inserter(meet.boundary_set));
    std::set_union(s1.excluded.begin(), s1.excluded.end(), s2.excluded.begin(),
                   s2.excluded.end(), std::back_inserter(meet.excluded));
    auto check_point = [&](const XPoint& x) {
      const bool lhs = membership_neighborhood(rm, s1, x) &&
                       membership_neighborhood(rm, s2, x);
      CHECK(lhs == membership_neighborhood(rm, meet, x));
    };
    for (const LatticePoint& p : rm.points()) check_point(XPoint::interior(p));
    check_point(XPoint::at_boundary(0));
    check_point(XPoint::at_boundary(1));
  }
}

TEST_CASE("continuity criterion at the realized truncation") {
  const RealizedModel rm = realize(z_line_model(), 16);

  SUBCASE("constants are continuous") {
    const auto result =
        continuity_check(rm, [](const XPoint&) { return cplx{3.0, -1.0}; });
    CHECK(result.continuous);
  }
  SUBCASE("tanh with matching limits is continuous at every ladder level") {
    const auto result = continuity_check(rm, [](const XPoint& x) {
      if (x.is_boundary()) return cplx{x.boundary == 0 ? -1.0 : 1.0, 0.0};
      return cplx{std::tanh(static_cast<double>(x.m[0])), 0.0};
    });
    CHECK(result.continuous);
  }
  SUBCASE("parity oscillation fails with a witness") {
    const auto result = continuity_check(rm, [](const XPoint& x) {
      if (x.is_boundary()) return cplx{0.3, 0.0};
      return cplx{x.m[0] % 2 == 0 ? 1.0 : -1.0, 0.0};
    });
    REQUIRE_FALSE(result.continuous);
    REQUIRE(result.witness.has_value());
    CHECK(result.witness->epsilon == 1e-1);
    CHECK(result.witness->deviation > 0.5);
    CHECK(cheb_norm(result.witness->at) > 8);
  }
}

TEST_CASE("boundary operators on lattice ends") {
  const CompactificationModel cm = z_line_model();
  const BandKernel bk = free_band();

  const OperatorMatrix adj = boundary_operator(bk, cm, 1, 5);
  REQUIRE(adj.dim() == 11);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 11; ++j)
      CHECK(adj.entries(i, j) == (std::abs(i - j) == 1 ? cplx{1.0} : cplx{0.0}));

  BandKernel scalar;
  scalar.coefficients[{0, 0}] = ConstCoefficient{cplx{0.0, 2.5}};
  const OperatorMatrix c = boundary_operator(scalar, cm, 0, 3);
  CHECK((c.entries - cplx{0.0, 2.5} * Eigen::MatrixXcd::Identity(7, 7)).norm() <
        1e-15);

  try {
    boundary_operator(bk, cm, 1, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::radius);
  }
}

TEST_CASE("Fourier symbols: free band, constant, shifted") {
  const CompactificationModel cm = z_line_model();

  const SpectrumSet free = fourier_symbol_spectrum(free_band(), cm, 1);
  CHECK(free.kind == SpectrumKind::sampled_range);
  CHECK(free.points.size() == 4096);
  double lo = 1e9, hi = -1e9;
  for (const cplx& p : free.points) {
    CHECK(std::abs(p.imag()) < 1e-12);
    lo = std::min(lo, p.real());
    hi = std::max(hi, p.real());
  }
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(lo == doctest::Approx(-2.0).epsilon(1e-9));
  // dense coverage of [-2,2]
  for (double x = -2.0; x <= 2.0; x += 0.01) {
    double best = 1e9;
    for (const cplx& p : free.points) best = std::min(best, std::abs(p - x));
    CHECK(best <= free.resolution + 1e-9);
  }

  BandKernel scalar;
  scalar.coefficients[{0, 0}] = ConstCoefficient{cplx{3.0, 0.0}};
  const SpectrumSet pt = fourier_symbol_spectrum(scalar, cm, 0, 64);
  for (const cplx& p : pt.points) CHECK(std::abs(p - 3.0) < 1e-14);

  const SpectrumSet shifted = fourier_symbol_spectrum(step_band(), cm, 0);
  double slo = 1e9, shi = -1e9;
  for (const cplx& p : shifted.points) {
    slo = std::min(slo, p.real());
    shi = std::max(shi, p.real());
  }
  // minus end has the potential 4: band [2, 6]
  CHECK(slo == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(shi == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("finite abelian symbols agree with the circulant spectrum") {
  CompactificationModel cm = one_point_model();
  cm.boundary[0].group = FiniteAbelianGroup{{5}};

  BandKernel bk;
  bk.self_adjoint = true;
  bk.coefficients[{1, 0}] = ConstCoefficient{cplx{0.5, -0.25}};
  bk.coefficients[{-1, 0}] = ConstCoefficient{cplx{0.5, 0.25}};
  bk.coefficients[{0, 0}] = ConstCoefficient{1.0};

  const SpectrumSet sym = fourier_symbol_spectrum(bk, cm, 0);
  CHECK(sym.kind == SpectrumKind::exact_eigenvalues);
  REQUIRE(sym.points.size() == 5);

  const OperatorMatrix conv = boundary_operator(bk, cm, 0, 0);
  REQUIRE(conv.dim() == 5);
  const SpectrumSet eig = spectrum(conv);

  auto key = [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::vector<cplx> s1 = sym.points, s2 = eig.points;
  std::sort(s1.begin(), s1.end(), key);
  std::sort(s2.begin(), s2.end(), key);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(s1[i] - s2[i]) < 1e-12);
}

TEST_CASE("table groups have no Fourier symbol") {
  CompactificationModel cm = one_point_model();
  cm.boundary[0].group = symmetric_group_s3();
  BandKernel bk;
  bk.coefficients[{1, 0}] = ConstCoefficient{1.0};
  try {
    fourier_symbol_spectrum(bk, cm, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_abelian);
  }
  // the truncated (here: full) convolution operator still works
  const OperatorMatrix op = boundary_operator(bk, cm, 0, 0);
  CHECK(op.dim() == 6);
}

TEST_CASE("truncated boundary operators converge to the symbol range") {
  const CompactificationModel cm = z_line_model();
  const BandKernel bk = free_band();
  const SpectrumSet symbol = fourier_symbol_spectrum(bk, cm, 1);
  double previous = 1e9;
  for (int radius : {16, 32, 64}) {
    const double d =
        hausdorff_distance(spectrum(boundary_operator(bk, cm, 1, radius)), symbol);
    CHECK(d < previous + 1e-3);
    previous = d;
  }
  // the gap between consecutive truncation eigenvalues is ~ 2 pi / (2R+2)
  CHECK(previous < M_PI / 65 + symbol.resolution);
}

TEST_CASE("interior operators assemble band matrices with a hard cutoff") {
  const RealizedModel rm = realize(z_line_model(), 8);

  SUBCASE("constant coefficients give a Toeplitz band matrix") {
    const OperatorMatrix h = interior_operator(free_band(), rm);
    REQUIRE(h.dim() == 17);
    for (int i = 0; i < 17; ++i)
      for (int j = 0; j < 17; ++j)
        CHECK(h.entries(i, j) == (std::abs(i - j) == 1 ? cplx{1.0} : cplx{0.0}));
  }
  SUBCASE("step potential gives a Jacobi matrix") {
    const OperatorMatrix h = interior_operator(step_band(), rm);
    for (int i = 0; i < 17; ++i) {
      const int m = i - 8;
      CHECK(h.entries(i, i) == (m <= 0 ? cplx{4.0} : cplx{0.0}));
    }
    CHECK(is_hermitian(h.entries, 0.0));
  }
  SUBCASE("hermiticity violations are rejected in self-adjoint mode") {
    BandKernel bad;
    bad.self_adjoint = true;
    bad.coefficients[{1, 0}] = ConstCoefficient{1.0};
    bad.coefficients[{-1, 0}] = ConstCoefficient{2.0};
    try {
      interior_operator(bad, rm);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::bad_model);
    }
  }
  SUBCASE("band_apply agrees with the assembled matrix") {
    const OperatorMatrix h = interior_operator(step_band(), rm);
    std::mt19937_64 rng(6);
    Eigen::VectorXcd x(17);
    for (int i = 0; i < 17; ++i)
      x[i] = cplx{static_cast<double>(rng() % 17) - 8.0,
                  static_cast<double>(rng() % 9) - 4.0};
    CHECK((band_apply(step_band(), rm, x) - h.entries * x).norm() < 1e-12);
  }
  SUBCASE("real fast path matches the complex assembly") {
    const Eigen::MatrixXd hr = interior_matrix_real(step_band(), rm);
    const OperatorMatrix hc = interior_operator(step_band(), rm);
    CHECK((hr.cast<cplx>() - hc.entries).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("constant-coefficient truncations stay in the symbol hull and cover it") {
  const CompactificationModel cm = z_line_model();
  const BandKernel bk = free_band();
  const double declared_c = 10.0;
  for (int L : {16, 32, 64}) {
    const SpectrumSet sp = spectrum(interior_operator(bk, realize(cm, L)));
    double cover = 0.0;
    for (double x = -2.0; x <= 2.0; x += 1e-3) {
      double best = 1e9;
      for (const cplx& p : sp.points) best = std::min(best, std::abs(p - x));
      cover = std::max(cover, best);
    }
    for (const cplx& p : sp.points) {
      CHECK(p.real() > -2.0 - 1e-12);
      CHECK(p.real() < 2.0 + 1e-12);
    }
    CHECK(cover <= declared_c / (2 * L + 1));
  }
}

TEST_CASE("kernel realization restricts to the declared boundary data") {
  const CompactificationModel cm = z_line_model();
  const CompactifiedGroupoid cg = build_compactified_groupoid(cm, 4);
  const BandKernel bk = step_band();
  const Kernel f = kernel_realization(bk, cg);

  // interior entries match the coefficients through the vector representation
  const VectorRepSpace space = vector_rep_space(cg.groupoid, cg.anchor());
  const OperatorMatrix h0 = vector_rep(space, f);
  const OperatorMatrix direct = interior_operator(bk, cg.realized);
  CHECK((h0.entries - direct.entries).cwiseAbs().maxCoeff() < 1e-14);

  // restriction to a boundary point recovers a_k(n) exactly
  for (int b = 0; b < 2; ++b) {
    const Kernel fb = restrict_to(f, std::vector<UnitIndex>{cg.boundary_unit[b]});
    const FiniteGroupoid& gb = *fb.parent();
    std::size_t nonzero_limits = 0;
    for (const auto& [offset, rule] : bk.coefficients) {
      const auto arrow =
          gb.find_arrow(cm.boundary[b].name + ":" + point_name(offset, 1));
      REQUIRE(arrow.has_value());
      const cplx limit = bk.boundary_limit(cm, offset, b);
      CHECK(std::abs(fb.at(*arrow) - limit) < 1e-15);
      if (limit != cplx{}) ++nonzero_limits;
    }
    // nothing else is supported there (a_0 vanishes at the plus end)
    CHECK(fb.support_size() == nonzero_limits);
  }
}

TEST_CASE("two-dimensional models: symbol range, assembly, membership") {
  const CompactificationModel cm = z2_model();
  BandKernel bk;
  bk.self_adjoint = true;
  bk.coefficients[{1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{-1, 0}] = ConstCoefficient{1.0};
  bk.coefficients[{0, 1}] = ConstCoefficient{1.0};
  bk.coefficients[{0, -1}] = ConstCoefficient{1.0};

  const SpectrumSet sym = fourier_symbol_spectrum(bk, cm, 0, 128);
  CHECK(sym.points.size() == 128 * 128);
  double lo = 1e9, hi = -1e9;
  for (const cplx& p : sym.points) {
    lo = std::min(lo, p.real());
    hi = std::max(hi, p.real());
  }
  CHECK(lo == doctest::Approx(-4.0).epsilon(1e-8));
  CHECK(hi == doctest::Approx(4.0).epsilon(1e-8));

  const RealizedModel rm = realize(cm, 3);
  CHECK(rm.interior_count() == 49);
  const OperatorMatrix h = interior_operator(bk, rm);
  CHECK(is_hermitian(h.entries, 0.0));
  // row of the origin has 4 neighbors
  const int origin = rm.index_of({0, 0});
  CHECK(h.entries.row(origin).cwiseAbs().sum() == doctest::Approx(4.0));

  const NeighborhoodSpec spec = NeighborhoodSpec::ball(rm, {0}, 2);
  CHECK(membership_neighborhood(rm, spec, XPoint::interior({3, -3})));
  CHECK_FALSE(membership_neighborhood(rm, spec, XPoint::interior({1, 1})));

  const CompactifiedGroupoid cg = build_compactified_groupoid(cm, 2);
  CHECK(validate(*cg.groupoid).ok());
}

TEST_CASE("declared convergence profiles pick test truncation sizes") {
  BandKernel finite = free_band();
  finite.coefficients[{0, 0}] = StepCoefficient{4.0, 0.0};
  CHECK(finite.convergence_profile() == ConvergenceProfile::finite_range);

  BandKernel expo = free_band();
  expo.coefficients[{0, 0}] = TanhCoefficient{2.0, 1.0, 3.0};
  CHECK(expo.convergence_profile() == ConvergenceProfile::exponential);

  BandKernel slow = free_band();
  slow.coefficients[{0, 0}] =
      DecayCoefficient{4.0, {4.0, 4.0}, 1.0, 1.0, /*exponential=*/false};
  CHECK(slow.convergence_profile() == ConvergenceProfile::power_law);

  // profile tag -> truncation needed for the boundary limits to be reached
  // within 1e-2 along the fibers
  auto needed_truncation = [](ConvergenceProfile p) {
    switch (p) {
      case ConvergenceProfile::finite_range: return 16;
      case ConvergenceProfile::exponential: return 32;
      case ConvergenceProfile::power_law: return 256;
    }
    return 256;
  };
  const CompactificationModel cm = z_line_model();
  for (const BandKernel* bk : {&finite, &expo, &slow}) {
    const RealizedModel rm = realize(cm, needed_truncation(bk->convergence_profile()));
    const LatticePoint edge{rm.truncation(), 0};
    const cplx at_edge = bk->coefficient(cm, {0, 0}, edge);
    const cplx limit = bk->boundary_limit(cm, {0, 0}, 1);
    CHECK(std::abs(at_edge - limit) <= 1e-2);
  }
}

TEST_CASE("a nonzero inner core stays outside every fiber") {
  CompactificationModel cm = z2_model();
  cm.inner_radius = 1;
  const RealizedModel rm = realize(cm, 4);
  int core = 0, outer = 0;
  for (int i = 0; i < rm.interior_count(); ++i) {
    if (rm.fiber_of(i) < 0) {
      ++core;
      CHECK(cheb_norm(rm.points()[i]) <= 1);
    } else {
      ++outer;
    }
  }
  CHECK(core == 9);
  CHECK(core + outer == 81);
  // core points never belong to a base neighborhood
  const NeighborhoodSpec spec = NeighborhoodSpec::ball(rm, {0}, 0);
  CHECK_FALSE(membership_neighborhood(rm, spec, XPoint::interior({0, 1})));
  CHECK(membership_neighborhood(rm, spec, XPoint::interior({2, 0})));
}
