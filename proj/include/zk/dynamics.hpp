#pragma once

// Right-hand sides of the generalized ZK equation in original and
// symmetrized form, the symmetrizing coordinate change, and the Gevrey
// commutator defects F(U), G(U).

#include <array>

#include "zk/spectral.hpp"

namespace zk {

enum class EquationForm { Original, Symmetrized };

// k=1: ZK (quadratic nonlinearity), k=2: mZK (cubic).
// mu=+1 focusing, mu=-1 defocusing.
struct EquationSpec {
  int k = 1;
  int mu = 1;
  EquationForm form = EquationForm::Symmetrized;

  EquationSpec() = default;
  EquationSpec(int k_, int mu_, EquationForm form_);

  int nonlinearity_degree() const { return k + 1; }
  static double coef_a();       // 2^(-2/3)
  static double coef_b();       // sqrt(3) * 2^(-2/3)
};

// The linear change of variables x -> ax+by, y -> ax-by that symmetrizes
// the dispersive symbol.
struct CoordinateMap {
  // Row-major 2x2 matrices.
  std::array<double, 4> forward;
  std::array<double, 4> inverse;
  double determinant;

  CoordinateMap();
};

enum class MapDirection { Forward, Inverse };

std::array<double, 2> coordinate_map_apply(const std::array<double, 2>& p,
                                           const CoordinateMap& m,
                                           MapDirection direction);

// du/dt for the active form:
//   original:    du/dt = -d_x(Laplacian u) - mu d_x u^{k+1}
//   symmetrized: du/dt = -(d_x^3 + d_y^3)u - mu a (d_x + d_y) u^{k+1}
// The nonlinear product is formed alias-free (padded) and the output is
// dealiased for degree k+1. Throws BlowUpError on non-finite products.
SpectralField2D rhs(const SpectralField2D& F, const EquationSpec& spec);

// Nonlinear part only (linear dispersive term omitted); used by the
// integrating-factor stepper, which applies the linear flow exactly.
SpectralField2D rhs_nonlinear(const SpectralField2D& F,
                              const EquationSpec& spec);

// F(U) = mu a (d_x+d_y)[U^2 - e^{sigma|D|}((e^{-sigma|D|}U)^2)], eq-exact in
// the truncated-spectrum sense. Identically zero for sigma = 0.
SpectralField2D commutator_F(const SpectralField2D& U, double sigma,
                             const EquationSpec& spec);

// G(U) = mu a (d_x+d_y)[U^3 - e^{sigma|D|}((e^{-sigma|D|}U)^3)].
SpectralField2D commutator_G(const SpectralField2D& U, double sigma,
                             const EquationSpec& spec);

}  // namespace zk
