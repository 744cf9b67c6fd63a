#pragma once

// Spectral core: periodic grids, unitary Fourier transforms, wave-vector
// weights, general multipliers, dealiasing, the Gevrey smoothing operator
// e^{+-sigma|D|}, and smooth dyadic frequency projections.

#include <complex>
#include <functional>
#include <vector>

#include "zk/errors.hpp"

namespace zk {

using Complex = std::complex<double>;

// Periodic rectangle [0,Lx) x [0,Ly) sampled on nx x ny points.
// Represented integer modes per axis: {-n/2, ..., n/2-1}.
struct Grid2D {
  int nx = 0, ny = 0;
  double Lx = 0.0, Ly = 0.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double Lx_, double Ly_);

  // Internal probe lattices may use non-power-of-two even sizes; simulation
  // grids go through the validating constructor.
  static Grid2D unchecked(int nx_, int ny_, double Lx_, double Ly_);

  std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
  std::size_t idx(int ix, int iy) const {
    return std::size_t(iy) * std::size_t(nx) + std::size_t(ix);
  }

  // Mode spacing (radians per space unit).
  double dxi() const;
  double deta() const;
  // Grid spacing in real space.
  double hx() const { return Lx / nx; }
  double hy() const { return Ly / ny; }

  // Integer mode number at storage index (FFT wraparound order).
  int mode_x(int ix) const { return ix < nx / 2 ? ix : ix - nx; }
  int mode_y(int iy) const { return iy < ny / 2 ? iy : iy - ny; }
  double xi(int ix) const { return mode_x(ix) * dxi(); }
  double eta(int iy) const { return mode_y(iy) * deta(); }

  // Largest |xi|+|eta| on the represented lattice.
  double max_l1_freq() const;

  bool operator==(const Grid2D& o) const {
    return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
  }
};

// A single frequency pair with the symmetrizing-map weights.
struct WaveVector {
  double xi = 0.0, eta = 0.0;
  double l1() const;       // |gamma| = |xi| + |eta|
  double norm() const;     // ||gamma|| = (xi^2 + eta^2)^(1/2)
  double bracket() const;  // <gamma> = (1 + ||gamma||^2)^(1/2)
};

// Fourier coefficients of a (usually real) field, unitary 1/(2pi) convention:
//   coeffs(m) ~ (1/2pi) * integral f(x,y) e^{-i gamma_m . (x,y)} dx dy.
// Parseval weight for the coefficient lattice is dxi*deta.
struct SpectralField2D {
  Grid2D grid;
  std::vector<Complex> coeffs;
  double time_tag = 0.0;

  SpectralField2D() = default;
  explicit SpectralField2D(const Grid2D& g, double t = 0.0)
      : grid(g), coeffs(g.size(), Complex(0.0, 0.0)), time_tag(t) {}

  Complex& at(int ix, int iy) { return coeffs[grid.idx(ix, iy)]; }
  const Complex& at(int ix, int iy) const { return coeffs[grid.idx(ix, iy)]; }

  // Access by integer mode numbers in {-n/2,...,n/2-1}.
  Complex& mode(int mx, int my);
  const Complex& mode(int mx, int my) const;

  double max_abs() const;
};

// Dyadic localization levels (powers of two).
struct ProjectionSpec {
  int N = 1;  // spatial dyadic level
  int L = 1;  // modulation dyadic level
};

bool is_power_of_two(int n);

// --- transforms ---

// Real samples (row-major, x fastest) -> spectral coefficients.
SpectralField2D forward_transform(const std::vector<double>& samples,
                                  const Grid2D& grid, double time_tag = 0.0);

// Spectral coefficients -> real samples. Checks Hermitian symmetry to a
// relative tolerance of 1e-10 and throws IntegrityError beyond it.
std::vector<double> inverse_transform(const SpectralField2D& F);

// Complex-to-complex helpers used internally and by the space-time module.
void fft2_forward_raw(const Grid2D& g, std::vector<Complex>& data);
void fft2_backward_raw(const Grid2D& g, std::vector<Complex>& data);

// Max deviation from coeffs(-m) = conj(coeffs(m)), relative to max |coeff|.
double hermitian_defect(const SpectralField2D& F);

// --- pointwise multipliers and smoothing ---

SpectralField2D apply_multiplier(
    const SpectralField2D& F,
    const std::function<Complex(const WaveVector&)>& m);

// e^{sign * sigma * (|xi|+|eta|)}. Overflow guard: for sign=+1 requires
// sigma * max|gamma|_1 <= 700.
SpectralField2D exp_smooth(const SpectralField2D& F, double sigma, int sign);

double exp_smooth_guard_cap(const Grid2D& g);  // 700 / max|gamma|_1

// Zero all modes with max(|mx|/(nx/2), |my|/(ny/2)) > cutoff, where the
// cutoff is 2/3 for quadratic (degree 2) and 1/2 for cubic (degree 3)
// nonlinearities.
SpectralField2D dealias(const SpectralField2D& F, int nonlinearity_degree);
double dealias_cutoff(int nonlinearity_degree);

// Exact (alias-free) spectral product of two fields: real-space multiply
// on a 2x zero-padded grid, transformed back and truncated to the original
// grid. No dealias mask is applied here.
SpectralField2D multiply_fields(const SpectralField2D& A,
                                const SpectralField2D& B);

// --- smooth cut-off window and dyadic projections ---

// psi(t): 1 on |t|<=1, 0 on |t|>=2, mollified polynomial transition in
// between (quintic smoothstep convolved once with a box kernel).
double window_psi(double t);

// psi_1 = psi, psi_N(t) = psi(t/N) - psi(2t/N) for N >= 2; telescoping
// partition of unity over dyadic N.
double window_psi_N(double t, double N);

// P_N: smooth restriction to the dyadic annulus ||gamma|| ~ N.
SpectralField2D project_PN(const SpectralField2D& F,
                           const ProjectionSpec& spec);

}  // namespace zk
