#pragma once

// Norms and conserved / almost-conserved functionals: H^s and Gevrey norms,
// mass, energy, the symmetrized modified energy, and the smoothed
// quantities M_sigma, E_sigma.

#include <string>
#include <vector>

#include "zk/dynamics.hpp"
#include "zk/spacetime.hpp"

namespace zk {

// || e^{sigma|gamma|} <gamma>^s f^ ||_{l^2} with the Parseval measure.
// sigma = 0 reduces exactly to the H^s norm; (0,0) is the spatial L^2 norm.
double gevrey_norm(const SpectralField2D& F, const GevreyParams& p);

// M(u) = integral u^2, via Parseval.
double mass(const SpectralField2D& F);

// E(u) = 1/2 integral |grad u|^2 - mu/(k+2) integral u^{k+2}.
double energy(const SpectralField2D& F, const EquationSpec& spec);

// Symmetrized-form conserved energy for k=2:
// 1/2 int |grad u|^2 - 1/2 int u_x u_y - (mu a / 4) int u^4.
double modified_energy(const SpectralField2D& F, const EquationSpec& spec);

// M_sigma = ||u||^2_{G^{sigma,0}}.
double M_sigma(const SpectralField2D& F, double sigma);

// E_sigma = ||u||^2_{G^{sigma,1}} - int U_x U_y - (mu a / 2)||U||^4_{L^4}
// with U = e^{sigma|D|}u.
double E_sigma(const SpectralField2D& F, double sigma,
               const EquationSpec& spec);

// int U^4 evaluated alias-free: U^2 on a 2x padded grid, then Parseval.
double integral_fourth_power(const SpectralField2D& F);

// int u^m by real-space quadrature on a 2x padded grid (exact for
// dealiased fields with m <= 4).
double integral_power(const SpectralField2D& F, int m);

struct DiagnosticsRecord {
  double t = 0.0;
  double mass_v = 0.0;
  double energy_v = 0.0;
  double mod_energy_v = 0.0;
  std::vector<double> m_sigma;       // per configured sigma
  std::vector<double> e_sigma;       // per configured sigma
  std::vector<double> gevrey_norms;  // per configured (sigma, s) pair
  double sigma_hat = 0.0;
};

// CSV header/row for the diagnostics schema (columns per the configured
// sigma lists). The first output line of any diagnostics file is a schema
// tag, written by the harness.
std::string diagnostics_csv_header(const std::vector<double>& sigma_list);
std::string diagnostics_csv_row(const DiagnosticsRecord& r);

}  // namespace zk
