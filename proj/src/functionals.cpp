#include "zk/functionals.hpp"

#include <cmath>
#include <sstream>

namespace zk {

double gevrey_norm(const SpectralField2D& F, const GevreyParams& p) {
  const Grid2D& g = F.grid;
  if (p.sigma < 0.0) throw ConfigError("gevrey_norm: sigma must be >= 0");
  if (p.sigma * g.max_l1_freq() > 700.0) {
    throw std::range_error("gevrey_norm: sigma exceeds the overflow guard");
  }
  const double measure = g.dxi() * g.deta();
  double acc = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix), eta = g.eta(iy);
      const double w = std::exp(p.sigma * (std::abs(xi) + std::abs(eta))) *
                       std::pow(1.0 + xi * xi + eta * eta, p.s / 2.0);
      acc += w * w * std::norm(F.coeffs[g.idx(ix, iy)]);
    }
  }
  return std::sqrt(acc * measure);
}

double mass(const SpectralField2D& F) {
  const double measure = F.grid.dxi() * F.grid.deta();
  double acc = 0.0;
  for (const auto& c : F.coeffs) acc += std::norm(c);
  return acc * measure;
}

double integral_power(const SpectralField2D& F, int m) {
  if (m < 2 || m > 4) throw ConfigError("integral_power: m must be 2, 3, or 4");
  if (m == 2) return mass(F);
  if (m == 4) return integral_fourth_power(F);
  // m == 3: int u^3 = <u^2, u>_{L^2} by Parseval; u^2 is exact on u's band.
  const SpectralField2D u2 = multiply_fields(F, F);
  const double measure = F.grid.dxi() * F.grid.deta();
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    acc += (u2.coeffs[i] * std::conj(F.coeffs[i])).real();
  }
  return acc * measure;
}

double integral_fourth_power(const SpectralField2D& F) {
  // int U^4 = ||U^2||_{L^2}^2; U^2 exact on the padded grid by Parseval.
  const SpectralField2D sq = multiply_fields(F, F);
  return mass(sq);
}

double energy(const SpectralField2D& F, const EquationSpec& spec) {
  const Grid2D& g = F.grid;
  const double measure = g.dxi() * g.deta();
  double grad = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix), eta = g.eta(iy);
      grad += (xi * xi + eta * eta) * std::norm(F.coeffs[g.idx(ix, iy)]);
    }
  }
  grad *= measure;
  const double mu = spec.mu;
  const double pot = integral_power(F, spec.k + 2);
  return 0.5 * grad - mu / double(spec.k + 2) * pot;
}

namespace {

// int u_x u_y = sum xi*eta |c|^2 * measure (real by Hermitian symmetry).
double cross_term(const SpectralField2D& F) {
  const Grid2D& g = F.grid;
  double acc = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      acc += g.xi(ix) * g.eta(iy) * std::norm(F.coeffs[g.idx(ix, iy)]);
    }
  }
  return acc * g.dxi() * g.deta();
}

}  // namespace

double modified_energy(const SpectralField2D& F, const EquationSpec& spec) {
  if (spec.form != EquationForm::Symmetrized || spec.k != 2) {
    throw ConfigError("modified_energy requires the symmetrized form with k=2");
  }
  const Grid2D& g = F.grid;
  const double measure = g.dxi() * g.deta();
  double grad = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix), eta = g.eta(iy);
      grad += (xi * xi + eta * eta) * std::norm(F.coeffs[g.idx(ix, iy)]);
    }
  }
  grad *= measure;
  const double mu = spec.mu;
  const double a = EquationSpec::coef_a();
  return 0.5 * grad - 0.5 * cross_term(F) -
         mu * a / 4.0 * integral_fourth_power(F);
}

double M_sigma(const SpectralField2D& F, double sigma) {
  const double n = gevrey_norm(F, GevreyParams{sigma, 0.0});
  return n * n;
}

double E_sigma(const SpectralField2D& F, double sigma,
               const EquationSpec& spec) {
  const SpectralField2D U = exp_smooth(F, sigma, +1);
  const double g1 = gevrey_norm(F, GevreyParams{sigma, 1.0});
  const double mu = spec.mu;
  const double a = EquationSpec::coef_a();
  return g1 * g1 - cross_term(U) - mu * a / 2.0 * integral_fourth_power(U);
}

std::string diagnostics_csv_header(const std::vector<double>& sigma_list) {
  std::ostringstream os;
  os << "t,mass,energy,mod_energy";
  for (double s : sigma_list) os << ",M_sigma@" << s;
  for (double s : sigma_list) os << ",E_sigma@" << s;
  os << ",sigma_hat";
  return os.str();
}

std::string diagnostics_csv_row(const DiagnosticsRecord& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.t << ',' << r.mass_v << ',' << r.energy_v << ',' << r.mod_energy_v;
  for (double v : r.m_sigma) os << ',' << v;
  for (double v : r.e_sigma) os << ',' << v;
  os << ',' << r.sigma_hat;
  return os.str();
}

}  // namespace zk
