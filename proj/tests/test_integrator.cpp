#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "zk/errors.hpp"
#include "zk/functionals.hpp"
#include "zk/integrator.hpp"
#include "zk/probes.hpp"

using namespace zk;

namespace {
constexpr double kPi = 3.14159265358979323846;

double linf_diff(const SpectralField2D& A, const SpectralField2D& B) {
  double worst = 0.0;
  for (std::size_t i = 0; i < A.coeffs.size(); ++i)
    worst = std::max(worst, std::abs(A.coeffs[i] - B.coeffs[i]));
  return worst;
}
}  // namespace

TEST_CASE("integrator config validation") {
  IntegratorConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = IntegratorConfig{};
  c.t_end = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = IntegratorConfig{};
  c.diag_stride = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_NOTHROW(IntegratorConfig{}.validate());
}

TEST_CASE("linear propagator: exact unit-modulus phases") {
  Grid2D g(64, 64, 32 * kPi, 32 * kPi);
  SpectralField2D F(g);
  for (auto& c : F.coeffs) c = Complex(1.0, 0.0);
  for (double t : {1e-3, 0.37, 2.0, -5.1}) {
    for (auto form : {EquationForm::Symmetrized, EquationForm::Original}) {
      SpectralField2D P = linear_propagator(F, t, form);
      for (const auto& c : P.coeffs) CHECK(std::abs(c) == 1.0);
    }
  }
}

TEST_CASE("linear propagator phase convention: du/dt = +i(xi^3+eta^3)u") {
  Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  SpectralField2D F(g);
  F.mode(2, -3) = Complex(1.0, 0.0);
  const double t = 0.1;
  SpectralField2D P = linear_propagator(F, t, EquationForm::Symmetrized);
  const Complex expect = std::polar(1.0, t * (8.0 - 27.0));
  CHECK(std::abs(P.mode(2, -3) - expect) < 1e-14);
  SpectralField2D Po = linear_propagator(F, t, EquationForm::Original);
  const Complex eo = std::polar(1.0, t * 2.0 * (4.0 + 9.0));
  CHECK(std::abs(Po.mode(2, -3) - eo) < 1e-14);
}

TEST_CASE("linear propagator group property and mass conservation") {
  Grid2D g(32, 32, 4 * kPi, 4 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 1.0, 2);
  const double m0 = mass(u);
  SpectralField2D v = u;
  for (int i = 0; i < 200; ++i)
    v = linear_propagator(v, 1e-2, EquationForm::Symmetrized);
  CHECK(std::abs(mass(v) - m0) / m0 < 1e-13);
  SpectralField2D w = linear_propagator(u, 2.0, EquationForm::Symmetrized);
  CHECK(linf_diff(v, w) < 1e-10);  // 200 x 0.01 = 2.0
}

TEST_CASE("IF-RK4 with mu=0 reduces to the exact propagator") {
  Grid2D g(32, 32, 4 * kPi, 4 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 1.0, 4);
  u = dealias(u, 2);
  EquationSpec spec(1, 0, EquationForm::Symmetrized);
  const double dt = 0.05;
  SpectralField2D stepped = step_ifrk4(u, spec, dt);
  SpectralField2D exact = linear_propagator(u, dt, EquationForm::Symmetrized);
  exact = dealias(exact, 2);
  CHECK(linf_diff(stepped, exact) < 1e-14);
}

TEST_CASE("fourth-order self convergence on a short nonlinear run") {
  Grid2D g(64, 64, 8 * kPi, 8 * kPi);
  SpectralField2D u0 = random_smooth_field(g, 6, 0.4, 9);
  EquationSpec spec(1, 1, EquationForm::Symmetrized);
  const double T = 0.2;
  auto advance = [&](double dt) {
    SpectralField2D u = dealias(u0, 2);
    const int n = int(std::lround(T / dt));
    for (int i = 0; i < n; ++i) u = step_ifrk4(u, spec, dt);
    return u;
  };
  SpectralField2D a = advance(4e-3), b = advance(2e-3), c = advance(1e-3);
  const double e1 = linf_diff(a, b), e2 = linf_diff(b, c);
  const double slope = std::log2(e1 / e2);
  CHECK(slope > 3.5);
  CHECK(slope < 4.5);
}

TEST_CASE("evolve: hooks fire at stride, t=0 and t_end") {
  Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  SpectralField2D u = random_smooth_field(g, 4, 0.1, 1);
  EquationSpec spec(1, 1, EquationForm::Symmetrized);
  IntegratorConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-2;
  cfg.diag_stride = 4;
  std::vector<double> times;
  evolve(u, spec, cfg,
         {[&](const SpectralField2D& F, const StepReport&) {
           times.push_back(F.time_tag);
         }});
  REQUIRE(times.size() == 4);  // t = 0, 4dt, 8dt, 10dt
  CHECK(times[0] == 0.0);
  CHECK(times[1] == doctest::Approx(4e-3));
  CHECK(times[2] == doctest::Approx(8e-3));
  CHECK(times[3] == doctest::Approx(1e-2));
}

TEST_CASE("evolve with t_end=0 reports the initial state only") {
  Grid2D g(16, 16, 2 * kPi, 2 * kPi);
  SpectralField2D u = random_smooth_field(g, 4, 0.1, 1);
  EquationSpec spec(1, 1, EquationForm::Symmetrized);
  IntegratorConfig cfg;
  cfg.t_end = 0.0;
  Trajectory traj = evolve(u, spec, cfg);
  CHECK(traj.reports.size() == 1);
  CHECK(traj.completed);
  CHECK(linf_diff(traj.final_state, dealias(u, 2)) == 0.0);
}

TEST_CASE("resolvability guard rejects oversized dt") {
  Grid2D g(32, 32, 2 * kPi, 2 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 10.0, 2);
  EquationSpec spec(1, 1, EquationForm::Symmetrized);
  IntegratorConfig cfg;
  cfg.dt = 10.0;
  cfg.t_end = 20.0;
  CHECK_THROWS_AS(evolve(u, spec, cfg), ConfigError);
}

TEST_CASE("blow-up raises BlowUpError with the last good time") {
  Grid2D g(32, 32, 2 * kPi, 2 * kPi);
  SpectralField2D u = random_smooth_field(g, 6, 0.1, 3);
  u.mode(1, 1) = Complex(std::numeric_limits<double>::infinity(), 0.0);
  EquationSpec spec(2, -1, EquationForm::Symmetrized);
  IntegratorConfig cfg;
  cfg.dt = 2e-4;
  cfg.t_end = 5.0;
  try {
    evolve(u, spec, cfg);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.t_last_good >= 0.0);
    CHECK(e.t_last_good < 5.0);
  }
}

TEST_CASE("step report flags resolution loss") {
  Grid2D g(32, 32, 2 * kPi, 2 * kPi);
  SpectralField2D u(g);
  // energize the octave below the dealias cutoff so the noise floor is high
  for (int my = -8; my <= 8; ++my)
    for (int mx = -8; mx <= 8; ++mx)
      if (std::max(std::abs(mx), std::abs(my)) > 4) {
        u.mode(mx, my) = Complex(0.01, 0.0);
        u.mode(-mx, -my) = Complex(0.01, 0.0);
      }
  u.mode(1, 0) = u.mode(-1, 0) = Complex(1.0, 0.0);
  EquationSpec spec(1, 1, EquationForm::Symmetrized);
  StepReport rep;
  step_ifrk4(u, spec, 1e-4, &rep);
  CHECK(rep.resolution_warning);
  CHECK(rep.noise_floor > 0.0);
  CHECK_FALSE(rep.nan_flag);
}
