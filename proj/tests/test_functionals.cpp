#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <string>

#include "doctest.h"
#include "zk/errors.hpp"
#include "zk/functionals.hpp"
#include "zk/probes.hpp"

using namespace zk;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Real field from a physical-space formula.
SpectralField2D from_formula(const Grid2D& g,
                             const std::function<double(double, double)>& f) {
  std::vector<double> s(g.size());
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      s[g.idx(ix, iy)] = f(ix * g.hx(), iy * g.hy());
  return forward_transform(s, g);
}

int count_columns(const std::string& line) {
  return int(std::count(line.begin(), line.end(), ',')) + 1;
}
}  // namespace

TEST_CASE("gevrey norm: sigma = 0 reduces to Sobolev / L2") {
  Grid2D g(32, 32, 4 * kPi, 4 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 1.3, 21, 0);
  const double l2 = gevrey_norm(u, GevreyParams{0.0, 0.0});
  CHECK(l2 * l2 == doctest::Approx(mass(u)).epsilon(1e-13));
  CHECK(M_sigma(u, 0.0) == doctest::Approx(mass(u)).epsilon(1e-13));
  CHECK_THROWS_AS(gevrey_norm(u, GevreyParams{-0.1, 0.0}), ConfigError);
  CHECK_THROWS_AS(gevrey_norm(u, GevreyParams{1e6, 0.0}), std::range_error);
}

TEST_CASE("gevrey norm: single-mode closed form") {
  Grid2D g(32, 32, 2 * kPi, 2 * kPi);  // dxi = deta = 1
  SpectralField2D u(g);
  u.mode(3, -2) = Complex(0.6, 0.8);
  u.mode(-3, 2) = Complex(0.6, -0.8);
  GevreyParams p{0.2, 1.5};
  const double w = std::exp(p.sigma * 5.0) * std::pow(1.0 + 9.0 + 4.0, p.s / 2.0);
  const double expect = w * std::sqrt(2.0) * 1.0;  // |c| = 1, two modes
  CHECK(gevrey_norm(u, p) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("mass of a cosine is A^2 Lx Ly / 2") {
  Grid2D g(64, 32, 8 * kPi, 4 * kPi);
  const double A = 1.7;
  SpectralField2D u =
      from_formula(g, [&](double x, double) { return A * std::cos(x); });
  CHECK(mass(u) == doctest::Approx(A * A * g.Lx * g.Ly / 2.0).epsilon(1e-12));
}

TEST_CASE("cubic and quartic integrals against trigonometric oracles") {
  Grid2D g(64, 32, 2 * kPi, 2 * kPi);
  const double A = 0.9, B = -1.2;
  SpectralField2D u = from_formula(g, [&](double x, double) {
    return A * std::cos(x) + B * std::cos(2.0 * x);
  });
  // int u^3 = 3 A^2 B * (Lx/4) * Ly (only the c1^2 c2 cross term survives)
  const double i3 = 3.0 * A * A * B * (g.Lx / 4.0) * g.Ly;
  CHECK(integral_power(u, 3) == doctest::Approx(i3).epsilon(1e-12));
  // int (A cos x)^4 = (3/8) A^4 Lx Ly
  SpectralField2D v =
      from_formula(g, [&](double x, double) { return A * std::cos(x); });
  const double i4 = 3.0 / 8.0 * std::pow(A, 4) * g.Lx * g.Ly;
  CHECK(integral_power(v, 4) == doctest::Approx(i4).epsilon(1e-12));
  CHECK(integral_fourth_power(v) == doctest::Approx(i4).epsilon(1e-12));
  CHECK(integral_power(v, 2) == doctest::Approx(mass(v)).epsilon(1e-14));
  CHECK_THROWS_AS(integral_power(v, 5), ConfigError);
}

TEST_CASE("energy: closed form for a single cosine") {
  Grid2D g(64, 64, 2 * kPi, 2 * kPi);
  const double A = 0.8;
  SpectralField2D u =
      from_formula(g, [&](double x, double) { return A * std::cos(2.0 * x); });
  const double grad = 0.5 * 4.0 * (A * A * g.Lx * g.Ly / 2.0);  // k0^2 = 4
  // k = 1: int u^3 of a pure cosine vanishes.
  EquationSpec zk1(1, 1, EquationForm::Symmetrized);
  CHECK(energy(u, zk1) == doctest::Approx(grad).epsilon(1e-12));
  // k = 2: E = grad - mu/4 int u^4.
  EquationSpec mzk(2, -1, EquationForm::Symmetrized);
  const double i4 = 3.0 / 8.0 * std::pow(A, 4) * g.Lx * g.Ly;
  CHECK(energy(u, mzk) == doctest::Approx(grad + i4 / 4.0).epsilon(1e-12));
}

TEST_CASE("modified energy: domain checks and cross-term oracle") {
  Grid2D g(32, 32, 2 * kPi, 2 * kPi);
  SpectralField2D u = random_smooth_field(g, 6, 0.7, 5, 0);
  CHECK_THROWS_AS(modified_energy(u, EquationSpec(1, 1, EquationForm::Symmetrized)),
                  ConfigError);
  CHECK_THROWS_AS(modified_energy(u, EquationSpec(2, 1, EquationForm::Original)),
                  ConfigError);
  // Diagonal wave u = A cos(x + y): int u_x u_y = A^2 Lx Ly / 2 = int |u_x|^2.
  const double A = 1.1;
  SpectralField2D d =
      from_formula(g, [&](double x, double y) { return A * std::cos(x + y); });
  EquationSpec mzk(2, -1, EquationForm::Symmetrized);
  const double half_mass = A * A * g.Lx * g.Ly / 2.0;
  const double i4 = 3.0 / 8.0 * std::pow(A, 4) * g.Lx * g.Ly;
  // grad = (xi^2+eta^2)=2 times mass/..; cross = xi*eta=1 times the same sum.
  const double expect = 0.5 * 2.0 * half_mass - 0.5 * half_mass + (1.0 / 4.0) *
                        EquationSpec::coef_a() * i4;
  CHECK(modified_energy(d, mzk) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("E_sigma at sigma = 0 matches mass + 2 * modified energy") {
  Grid2D g(32, 32, 4 * kPi, 4 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 0.9, 13, 0);
  for (int mu : {1, -1}) {
    EquationSpec spec(2, mu, EquationForm::Symmetrized);
    const double lhs = E_sigma(u, 0.0, spec);
    const double rhs = mass(u) + 2.0 * modified_energy(u, spec);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("M_sigma and the Gevrey H^1 part grow with sigma") {
  Grid2D g(32, 32, 4 * kPi, 4 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 0.9, 17, 0);
  double prev_m = M_sigma(u, 0.0);
  for (double s : {0.05, 0.1, 0.2}) {
    const double m = M_sigma(u, s);
    CHECK(m > prev_m);
    prev_m = m;
  }
}

TEST_CASE("diagnostics CSV header and row stay in sync") {
  const std::vector<double> sigmas{0.001, 0.01, 0.1};
  const std::string header = diagnostics_csv_header(sigmas);
  CHECK(header ==
        "t,mass,energy,mod_energy,M_sigma@0.001,M_sigma@0.01,M_sigma@0.1,"
        "E_sigma@0.001,E_sigma@0.01,E_sigma@0.1,sigma_hat");
  DiagnosticsRecord r;
  r.t = 0.5;
  r.m_sigma = {1.0, 2.0, 3.0};
  r.e_sigma = {4.0, 5.0, 6.0};
  r.sigma_hat = 0.25;
  const std::string row = diagnostics_csv_row(r);
  CHECK(count_columns(row) == count_columns(header));
  std::istringstream is(row);
  double first;
  is >> first;
  CHECK(first == 0.5);
}
