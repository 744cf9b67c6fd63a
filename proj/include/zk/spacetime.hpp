#pragma once

// Space-time fields over the (xi, eta, tau) lattice, the discrete
// X^{sigma,s,b} norm, modulation projections Q_L, mixed-norm evaluation for
// Strichartz probes, and the min-weight bilinear operator B_theta.

#include "zk/spectral.hpp"

namespace zk {

struct GevreyParams {
  double sigma = 0.0;
  double s = 0.0;
};

struct BourgainParams {
  double sigma = 0.0;
  double s = 0.0;
  double b = 0.5;
  double eps = 0.0;
};

// Complex coefficients over the 3D frequency lattice. tau spacing is
// 2*pi/T_window; storage index (it*ny + iy)*nx + ix with FFT wraparound
// ordering on every axis.
struct SpaceTimeField {
  Grid2D grid;
  int nt = 0;
  double T_window = 4.0;
  std::vector<Complex> coeffs;

  SpaceTimeField() = default;
  SpaceTimeField(const Grid2D& g, int nt_, double T_window_);

  std::size_t size() const { return grid.size() * std::size_t(nt); }
  std::size_t idx(int ix, int iy, int it) const {
    return (std::size_t(it) * grid.ny + iy) * grid.nx + ix;
  }
  double dtau() const;
  int mode_t(int it) const { return it < nt / 2 ? it : it - nt; }
  double tau(int it) const { return mode_t(it) * dtau(); }

  Complex& mode(int mx, int my, int mt);
  const Complex& mode(int mx, int my, int mt) const;
};

// psi(t) W(t) u0 sampled on nt times over one T_window period and
// transformed in time (unitary convention). The discrete surrogate for the
// windowed free solution.
SpaceTimeField windowed_free_solution(const SpectralField2D& u0, int nt,
                                      double T_window = 4.0);

// || e^{sigma|gamma|} <gamma>^s <tau - xi^3 - eta^3>^b u^ ||_{l^2} with the
// lattice measure dxi*deta*dtau.
double xsb_norm(const SpaceTimeField& F, const BourgainParams& p);

// Q_L: smooth restriction to modulation |tau - xi^3 - eta^3| ~ L.
SpaceTimeField project_QL(const SpaceTimeField& F, const ProjectionSpec& spec);

// Mixed space-time norm L^p_t L^q_{x,y} of the (complex) physical-space
// signal, by grid quadrature.
double mixed_norm_LpLq(const SpaceTimeField& F, double p, double q);

// Space-time L^2 with the lattice measure (Parseval pair of mixed (2,2)).
double l2_norm(const SpaceTimeField& F);

struct StrichartzReport {
  double p = 0.0, q = 0.0;
  std::vector<int> levels;
  std::vector<double> max_ratio_per_level;
  double max_ratio = 0.0;
  double stability_factor = 0.0;  // max/min of per-level max ratios
};

// Ratio ||Q_L u||_{LpLq} / (L^{2/(3p)+1/q} ||Q_L u||_{L2}) over random
// modulation-localized fields at L in {1,4,16,64}. Report-only.
StrichartzReport strichartz_QL_probe(double p, int trials, std::uint64_t seed,
                                     const Grid2D& grid, int nt,
                                     double T_window = 4.0);

// B_theta(u,v): plain coefficient convolution against the kernel
// [min(|gamma-gamma_1|_1, |gamma_1|_1)]^theta, with 0^0 := 1. Direct sum,
// no wraparound; intended for small lattices.
SpaceTimeField b_theta_apply(const SpaceTimeField& u, const SpaceTimeField& v,
                             double theta);

// Plain coefficient convolution of two space-time fields via padded FFT
// (no lattice-measure factor). Inputs must be band-limited so that the sum
// of active modes stays below Nyquist on each axis.
SpaceTimeField convolve_spacetime(const SpaceTimeField& u,
                                  const SpaceTimeField& v);

}  // namespace zk
