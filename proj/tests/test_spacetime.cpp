#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "zk/errors.hpp"
#include "zk/probes.hpp"
#include "zk/spacetime.hpp"

using namespace zk;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("space-time lattice construction and indexing") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  CHECK_THROWS_AS(SpaceTimeField(g, 7, 4.0), ConfigError);
  CHECK_THROWS_AS(SpaceTimeField(g, 2, 4.0), ConfigError);
  CHECK_THROWS_AS(SpaceTimeField(g, 8, 0.0), ConfigError);

  SpaceTimeField F(g, 8, 2 * kPi);
  CHECK(F.size() == 8 * 8 * 8);
  CHECK(F.dtau() == doctest::Approx(1.0));
  CHECK(F.tau(7) == doctest::Approx(-1.0));
  F.mode(-3, 2, -1) = Complex(1.5, -0.5);
  CHECK(F.coeffs[F.idx(5, 2, 7)] == Complex(1.5, -0.5));
  CHECK(F.mode(-3, 2, -1) == Complex(1.5, -0.5));
}

TEST_CASE("xsb_norm: single-mode closed form") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  SpaceTimeField F(g, 8, 2 * kPi);  // dxi = deta = dtau = 1
  const Complex c(0.8, -0.6);
  F.mode(2, -1, 3) = c;
  BourgainParams p{0.1, 0.5, 0.4, 0.0};
  const double xi = 2.0, eta = -1.0, tau = 3.0;
  const double mod = tau - xi * xi * xi - eta * eta * eta;
  const double w = std::exp(p.sigma * (std::abs(xi) + std::abs(eta))) *
                   std::pow(1.0 + xi * xi + eta * eta, p.s / 2.0) *
                   std::pow(1.0 + mod * mod, p.b / 2.0);
  CHECK(xsb_norm(F, p) == doctest::Approx(w * std::abs(c)).epsilon(1e-12));
}

TEST_CASE("xsb_norm with zero weights equals the lattice L2 norm") {
  Grid2D g = Grid2D::unchecked(8, 8, 4 * kPi, 2 * kPi);
  SpaceTimeField F = random_spacetime_field(g, 8, 4.0, 4, 11, 0);
  const double a = xsb_norm(F, BourgainParams{0.0, 0.0, 0.0, 0.0});
  CHECK(a == doctest::Approx(l2_norm(F)).epsilon(1e-13));
}

TEST_CASE("xsb_norm overflow guard") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  SpaceTimeField F(g, 8, 4.0);
  F.mode(1, 0, 0) = Complex(1.0, 0.0);
  BourgainParams p{200.0, 0.0, 0.0, 0.0};  // 200 * 8 > 700
  CHECK_THROWS_AS(xsb_norm(F, p), std::range_error);
}

TEST_CASE("project_QL keeps modulation ~ L and rejects non-dyadic L") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  SpaceTimeField F(g, 16, 2 * kPi);  // dtau = 1
  // xi = eta = 0 modes: modulation equals tau exactly.
  F.mode(0, 0, 4) = Complex(1.0, 0.0);  // |mod| = 4
  F.mode(0, 0, 1) = Complex(1.0, 0.0);  // |mod| = 1
  F.mode(0, 0, 0) = Complex(1.0, 0.0);  // |mod| = 0
  SpaceTimeField P4 = project_QL(F, ProjectionSpec{1, 4});
  CHECK(P4.mode(0, 0, 4) == Complex(1.0, 0.0));  // psi_4(4) = 1
  CHECK(P4.mode(0, 0, 1) == Complex(0.0, 0.0));  // psi_4(1) = 0
  CHECK(P4.mode(0, 0, 0) == Complex(0.0, 0.0));
  SpaceTimeField P1 = project_QL(F, ProjectionSpec{1, 1});
  CHECK(P1.mode(0, 0, 0) == Complex(1.0, 0.0));  // psi_1 = psi
  CHECK(P1.mode(0, 0, 4) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(project_QL(F, ProjectionSpec{1, 3}), ConfigError);
}

TEST_CASE("dyadic QL levels telescope to the identity") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  SpaceTimeField F = random_spacetime_field(g, 8, 2 * kPi, 3, 5, 0);
  // max |mod| on this lattice is well below 2*2048.
  SpaceTimeField sum(g, 8, 2 * kPi);
  for (int L = 1; L <= 2048; L *= 2) {
    SpaceTimeField P = project_QL(F, ProjectionSpec{1, L});
    for (std::size_t i = 0; i < sum.coeffs.size(); ++i)
      sum.coeffs[i] += P.coeffs[i];
  }
  // psi_1 counts the |mod| <= 2 region once; psi covers |mod| <= 1 as well,
  // so the dyadic sum alone reproduces F wherever psi_1(mod) + sum = 1.
  double worst = 0.0;
  for (std::size_t i = 0; i < sum.coeffs.size(); ++i)
    worst = std::max(worst, std::abs(sum.coeffs[i] - F.coeffs[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("mixed norm (2,2) is the Parseval pair of the lattice L2") {
  Grid2D g = Grid2D::unchecked(8, 8, 4 * kPi, 2 * kPi);
  SpaceTimeField F = random_spacetime_field(g, 8, 4.0, 4, 19, 0);
  CHECK(mixed_norm_LpLq(F, 2.0, 2.0) ==
        doctest::Approx(l2_norm(F)).epsilon(1e-12));
  CHECK_THROWS_AS(
      mixed_norm_LpLq(F, std::numeric_limits<double>::infinity(), 2.0),
      ConfigError);
}

TEST_CASE("mixed norm: single mode has constant modulus") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 4 * kPi);
  SpaceTimeField F(g, 8, 4.0);
  const Complex c(1.2, 0.7);
  F.mode(1, -2, 3) = c;
  const double measure = g.dxi() * g.deta() * F.dtau();
  const double amp = std::abs(c) * measure / std::pow(2.0 * kPi, 1.5);
  const double p = 6.0, q = 3.0;
  const double expect = amp * std::pow(g.Lx * g.Ly, 1.0 / q) *
                        std::pow(F.T_window, 1.0 / p);
  CHECK(mixed_norm_LpLq(F, p, q) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("B_theta: two-mode closed form and 0^0 = 1") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);  // dxi = deta = 1
  SpaceTimeField u(g, 8, 4.0), v(g, 8, 4.0);
  const Complex cu(2.0, 1.0), cv(-1.0, 3.0);
  u.mode(2, 1, 0) = cu;
  v.mode(1, -3, 1) = cv;
  SpaceTimeField out = b_theta_apply(u, v, 0.5);
  // min(|gamma - gamma_1|_1, |gamma_1|_1) = min(2+1, 1+3) = 3
  const Complex expect = std::pow(3.0, 0.5) * cu * cv;
  CHECK(std::abs(out.mode(3, -2, 1) - expect) < 1e-14);

  SpaceTimeField w(g, 8, 4.0);
  w.mode(0, 0, 0) = Complex(1.0, 0.0);  // |gamma_1|_1 = 0
  SpaceTimeField z = b_theta_apply(u, w, 0.0);
  CHECK(z.mode(2, 1, 0) == cu);  // kernel 0^0 := 1

  SpaceTimeField bad(Grid2D::unchecked(8, 8, 4 * kPi, 2 * kPi), 8, 4.0);
  CHECK_THROWS_AS(b_theta_apply(u, bad, 0.5), IntegrityError);
}

TEST_CASE("B_0 equals the plain convolution on band-limited fields") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  SpaceTimeField u = random_spacetime_field(g, 8, 4.0, 2, 7, 0);
  SpaceTimeField v = random_spacetime_field(g, 8, 4.0, 2, 8, 0);
  SpaceTimeField direct = b_theta_apply(u, v, 0.0);
  SpaceTimeField fast = convolve_spacetime(u, v);
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.coeffs.size(); ++i)
    worst = std::max(worst, std::abs(direct.coeffs[i] - fast.coeffs[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("windowed free solution: time Parseval against the psi window") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  SpectralField2D u0(g);
  const Complex c(0.4, 0.9);
  u0.mode(2, -1) = c;
  const int nt = 64;
  const double T = 4.0;
  SpaceTimeField F = windowed_free_solution(u0, nt, T);
  double spec = 0.0;
  for (const auto& cc : F.coeffs) spec += std::norm(cc);
  spec *= g.dxi() * g.deta() * F.dtau();
  double riemann = 0.0;
  for (int j = 0; j < nt; ++j) {
    const double t = (j < nt / 2 ? j : j - nt) * (T / nt);
    const double w = window_psi(t);
    riemann += w * w * (T / nt);
  }
  const double expect = std::norm(c) * g.dxi() * g.deta() * riemann;
  CHECK(spec == doctest::Approx(expect).epsilon(1e-12));
  CHECK(riemann > 2.0);
  CHECK(riemann < 4.0);
}

TEST_CASE("Strichartz QL probe: deterministic, finite, sane levels") {
  Grid2D g = Grid2D::unchecked(8, 8, 2 * kPi, 2 * kPi);
  StrichartzReport a = strichartz_QL_probe(4.0, 3, 42, g, 16, 4.0);
  StrichartzReport b = strichartz_QL_probe(4.0, 3, 42, g, 16, 4.0);
  CHECK(a.q == doctest::Approx(4.0));
  REQUIRE(a.levels == std::vector<int>{1, 4, 16, 64});
  REQUIRE(a.max_ratio_per_level.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::isfinite(a.max_ratio_per_level[i]));
    CHECK(a.max_ratio_per_level[i] == b.max_ratio_per_level[i]);
  }
  CHECK(a.max_ratio > 0.0);
  CHECK(a.stability_factor >= 1.0);
  CHECK_THROWS_AS(strichartz_QL_probe(3.0, 1, 1, g, 16, 4.0), ConfigError);
}
