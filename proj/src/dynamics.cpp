#include "zk/dynamics.hpp"

#include <cmath>

namespace zk {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kPi = 3.14159265358979323846;

// True when every coefficient above the degree-2 dealias cutoff is zero.
// For such inputs a same-grid pointwise square is alias-free on all modes
// the subsequent degree-2 dealias retains (classical 2/3 rule), so the
// padded product can be skipped.
bool within_two_thirds_band(const SpectralField2D& F) {
  const Grid2D& g = F.grid;
  const double cutoff = dealias_cutoff(2);
  for (int iy = 0; iy < g.ny; ++iy) {
    const double ry = std::abs(g.mode_y(iy)) / double(g.ny / 2);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double rx = std::abs(g.mode_x(ix)) / double(g.nx / 2);
      if (std::max(rx, ry) > cutoff &&
          F.coeffs[g.idx(ix, iy)] != Complex(0.0, 0.0)) {
        return false;
      }
    }
  }
  return true;
}

// Same-grid square: only valid (and only used) for inputs supported within
// the 2/3 band and consumers that dealias the result at degree 2 — aliased
// contributions then land exclusively on modes the dealias zeroes.
SpectralField2D square_on_grid(const SpectralField2D& F) {
  const Grid2D& g = F.grid;
  std::vector<Complex> a = F.coeffs;
  fft2_backward_raw(g, a);
  for (auto& v : a) v *= v;
  fft2_forward_raw(g, a);
  const double beta = g.dxi() * g.deta() / (2.0 * kPi);
  const double scale = beta / double(g.size());
  SpectralField2D out(g, F.time_tag);
  for (std::size_t i = 0; i < a.size(); ++i) out.coeffs[i] = a[i] * scale;
  return out;
}

SpectralField2D nonlinear_power(const SpectralField2D& F, int degree) {
  // Alias-free powers via padded products (fast same-grid square when the
  // input's band makes that exactly equivalent after the caller's dealias).
  if (degree == 2) {
    if (within_two_thirds_band(F)) return square_on_grid(F);
    return multiply_fields(F, F);
  }
  return multiply_fields(multiply_fields(F, F), F);
}

void check_finite(const SpectralField2D& F, double t) {
  for (const auto& c : F.coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw BlowUpError("non-finite value in nonlinear product", t);
    }
  }
}

}  // namespace

EquationSpec::EquationSpec(int k_, int mu_, EquationForm form_)
    : k(k_), mu(mu_), form(form_) {
  if (k != 1 && k != 2) throw ConfigError("k must be 1 or 2");
  if (mu != 1 && mu != -1 && mu != 0) throw ConfigError("mu must be +-1 (or 0 in tests)");
}

double EquationSpec::coef_a() { return std::pow(2.0, -2.0 / 3.0); }
double EquationSpec::coef_b() { return std::sqrt(3.0) * std::pow(2.0, -2.0 / 3.0); }

CoordinateMap::CoordinateMap() {
  const double a = EquationSpec::coef_a();
  const double b = EquationSpec::coef_b();
  forward = {a, b, a, -b};
  determinant = -2.0 * a * b;
  // adj([[a, b], [a, -b]]) = [[-b, -b], [-a, a]]
  inverse = {-b / determinant, -b / determinant, -a / determinant,
             a / determinant};
}

std::array<double, 2> coordinate_map_apply(const std::array<double, 2>& p,
                                           const CoordinateMap& m,
                                           MapDirection direction) {
  const auto& M =
      direction == MapDirection::Forward ? m.forward : m.inverse;
  return {M[0] * p[0] + M[1] * p[1], M[2] * p[0] + M[3] * p[1]};
}

SpectralField2D rhs_nonlinear(const SpectralField2D& F,
                              const EquationSpec& spec) {
  const int degree = spec.nonlinearity_degree();
  if (spec.mu == 0) {
    SpectralField2D zero(F.grid, F.time_tag);
    return zero;
  }
  SpectralField2D pw = nonlinear_power(F, degree);
  check_finite(pw, F.time_tag);

  const double mu = spec.mu;
  SpectralField2D out(F.grid, F.time_tag);
  if (spec.form == EquationForm::Symmetrized) {
    const double a = EquationSpec::coef_a();
    out = apply_multiplier(pw, [mu, a](const WaveVector& wv) {
      return -mu * a * kI * (wv.xi + wv.eta);
    });
  } else {
    out = apply_multiplier(pw, [mu](const WaveVector& wv) {
      return -mu * kI * wv.xi;
    });
  }
  return dealias(out, degree);
}

SpectralField2D rhs(const SpectralField2D& F, const EquationSpec& spec) {
  SpectralField2D out = rhs_nonlinear(F, spec);
  const Grid2D& g = F.grid;
  // Linear symbol fixed so the free evolution is coeff * e^{it(xi^3+eta^3)}
  // in symmetrized form (the W(t) phase convention; pinned by a unit test).
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix), eta = g.eta(iy);
      Complex lin;
      if (spec.form == EquationForm::Symmetrized) {
        lin = kI * (xi * xi * xi + eta * eta * eta);
      } else {
        lin = kI * xi * (xi * xi + eta * eta);
      }
      out.coeffs[g.idx(ix, iy)] += lin * F.coeffs[g.idx(ix, iy)];
    }
  }
  return out;
}

namespace {

SpectralField2D commutator_impl(const SpectralField2D& U, double sigma,
                                const EquationSpec& spec, int degree) {
  if (sigma < 0.0) throw ConfigError("commutator: sigma must be >= 0");
  const double mu = spec.mu;
  const double a = EquationSpec::coef_a();

  SpectralField2D direct = nonlinear_power(U, degree);
  SpectralField2D unsmoothed = exp_smooth(U, sigma, -1);
  SpectralField2D smoothed =
      exp_smooth(nonlinear_power(unsmoothed, degree), sigma, +1);

  SpectralField2D bracket(U.grid, U.time_tag);
  for (std::size_t i = 0; i < bracket.coeffs.size(); ++i) {
    bracket.coeffs[i] = direct.coeffs[i] - smoothed.coeffs[i];
  }
  SpectralField2D out =
      apply_multiplier(bracket, [mu, a](const WaveVector& wv) {
        return mu * a * kI * (wv.xi + wv.eta);
      });
  return dealias(out, degree);
}

}  // namespace

SpectralField2D commutator_F(const SpectralField2D& U, double sigma,
                             const EquationSpec& spec) {
  if (spec.k != 1) throw ConfigError("commutator_F requires k=1");
  return commutator_impl(U, sigma, spec, 2);
}

SpectralField2D commutator_G(const SpectralField2D& U, double sigma,
                             const EquationSpec& spec) {
  if (spec.k != 2) throw ConfigError("commutator_G requires k=2");
  return commutator_impl(U, sigma, spec, 3);
}

}  // namespace zk
