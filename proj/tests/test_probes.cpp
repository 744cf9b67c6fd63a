#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "zk/errors.hpp"
#include "zk/probes.hpp"

using namespace zk;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("probe parameter validation") {
  ProbeParams p;
  CHECK_NOTHROW(p.validate());
  p.trials = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ProbeParams{};
  p.band = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ProbeParams{};
  p.theta = 0.25;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ProbeParams{};
  p.alpha = 0.76;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ProbeParams{};
  p.sigma = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("exp(x)-1 inequality: no violations, deterministic") {
  ProbeReport a = exp_minus_one_check(0.249, 100000, 33);
  CHECK(a.violation_count == 0);
  CHECK(a.passed);
  CHECK(a.samples == 100000);
  CHECK(a.max_ratio <= 1.0 + 1e-12);
  ProbeReport b = exp_minus_one_check(0.249, 100000, 33);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(a.to_json() == b.to_json());
  CHECK_THROWS_AS(exp_minus_one_check(1.5, 10, 1), ConfigError);
}

TEST_CASE("min-exponential inequality: all sign patterns, no violations") {
  ProbeReport rep = min_exp_inequality_check(0.249, 0.1, 100000, 5);
  CHECK(rep.violation_count == 0);
  CHECK(rep.passed);
  CHECK(rep.max_ratio <= 1.0 + 1e-12);
  CHECK_THROWS_AS(min_exp_inequality_check(-0.1, 0.1, 10, 1), ConfigError);
  CHECK_THROWS_AS(min_exp_inequality_check(0.2, 0.0, 10, 1), ConfigError);
}

TEST_CASE("min-kernel bound with C = 2: no violations") {
  ProbeReport rep = min_kernel_bound_check(100000, 9);
  CHECK(rep.violation_count == 0);
  CHECK(rep.passed);
  CHECK(rep.max_ratio <= 1.0 + 1e-12);
}

TEST_CASE("random smooth fields are real, normalized, band-limited") {
  Grid2D g(64, 64, 16 * kPi, 16 * kPi);
  SpectralField2D u = random_smooth_field(g, 8, 0.7, 11, 2);
  CHECK(hermitian_defect(u) < 1e-14);
  CHECK(std::sqrt(mass(u)) == doctest::Approx(0.7).epsilon(1e-12));
  for (int m = 9; m < 32; m += 7) {
    CHECK(u.mode(m, 0) == Complex(0.0, 0.0));
    CHECK(u.mode(0, m) == Complex(0.0, 0.0));
  }
  SpectralField2D v = random_smooth_field(g, 8, 0.7, 11, 2);
  CHECK(u.coeffs == v.coeffs);  // same seed/stream: bit-identical
  SpectralField2D w = random_smooth_field(g, 8, 0.7, 11, 3);
  CHECK(u.coeffs != w.coeffs);
}

TEST_CASE("single-mode multilinear ratios match the closed form") {
  Grid2D g = Grid2D::unchecked(16, 16, 2 * kPi, 2 * kPi);
  double probe = 0.0;
  const double closed2 = multilinear_single_mode_ratio(
      2, 0.0, {{{2, 1, 0}, {1, -3, 2}}}, g, 16, 2 * kPi, &probe);
  CHECK(std::abs(probe - closed2) < 1e-10 * closed2);
  double probe3 = 0.0;
  const double closed3 = multilinear_single_mode_ratio(
      3, 0.25, {{{1, 1, 0}, {2, -1, 1}, {-1, 2, 0}}}, g, 16, 2 * kPi, &probe3);
  CHECK(std::abs(probe3 - closed3) < 1e-10 * closed3);
  CHECK_THROWS_AS(multilinear_single_mode_ratio(2, 0.0, {{{1, 1, 0}}}, g, 16,
                                                2 * kPi, nullptr),
                  ConfigError);
}

TEST_CASE("bilinear probe: finite, deterministic, quantiles populated") {
  ProbeParams p;
  p.trials = 5;
  p.band = 4;
  p.s = 0.0;
  p.seed = 17;
  ProbeReport a = bilinear_probe(p);
  CHECK(a.passed);
  CHECK(std::isfinite(a.max_ratio));
  CHECK(a.max_ratio > 0.0);
  REQUIRE(a.ratio_quantiles.size() == 3);
  CHECK(a.ratio_quantiles[0] <= a.ratio_quantiles[2]);
  CHECK(a.ratio_samples.size() == 5);
  CHECK(std::is_sorted(a.ratio_samples.begin(), a.ratio_samples.end()));
  CHECK(a.stability_factor >= 1.0);
  ProbeReport b = bilinear_probe(p);
  CHECK(a.to_json() == b.to_json());
  p.s = -0.3;
  CHECK_THROWS_AS(bilinear_probe(p), ConfigError);
}

TEST_CASE("trilinear probe requires s >= 1/4 and runs clean") {
  ProbeParams p;
  p.trials = 3;
  p.band = 3;
  p.s = 0.25;
  ProbeReport rep = trilinear_probe(p);
  CHECK(rep.passed);
  CHECK(std::isfinite(rep.max_ratio));
  CHECK(rep.ratio_samples.size() == 3);
  p.s = 0.0;
  CHECK_THROWS_AS(trilinear_probe(p), ConfigError);
}

TEST_CASE("commutator scaling probes clear their exponent thresholds") {
  Grid2D g(64, 64, 32 * kPi, 32 * kPi);
  ProbeParams p;
  p.seed = 3;
  ProbeReport f = commutator_scaling_probe(CommutatorKind::F, p, g);
  CHECK(f.passed);
  CHECK(f.slope >= p.theta - 0.05);
  ProbeReport gr = commutator_scaling_probe(CommutatorKind::G, p, g);
  CHECK(gr.passed);
  CHECK(gr.slope >= p.alpha - 0.05);
  p.sigma_list = {1e-2, 1e-1};
  CHECK_THROWS_AS(commutator_scaling_probe(CommutatorKind::F, p, g),
                  ConfigError);
}

TEST_CASE("almost-conservation probe: positive scaling slope on a short run") {
  AlmostConservationConfig cfg;
  cfg.grid = Grid2D(32, 32, 8 * kPi, 8 * kPi);
  cfg.T_short = 0.1;
  cfg.dt = 2e-3;
  cfg.amplitude = 0.4;
  const std::vector<double> sigmas{1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1};
  ProbeReport m = almost_conservation_probe(ConservedKind::M, cfg, sigmas, 0.05);
  CHECK(m.name == "almost_conservation_M");
  CHECK(m.slope > 0.05);
  CHECK(m.passed);
  CHECK(m.stability_factor >= 1.0);
}

TEST_CASE("probe report JSON carries the full schema") {
  ProbeReport rep = exp_minus_one_check(0.5, 100, 1);
  const std::string j = rep.to_json();
  for (const char* key :
       {"\"name\"", "\"samples\"", "\"violation_count\"", "\"max_ratio\"",
        "\"ratio_quantiles\"", "\"slope\"", "\"stability_factor\"",
        "\"stability_flag\"", "\"passed\""}) {
    CHECK(j.find(key) != std::string::npos);
  }
}
