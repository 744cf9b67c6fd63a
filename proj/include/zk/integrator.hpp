#pragma once

// Exact linear propagator W(t) and fourth-order integrating-factor RK4
// stepping for the full nonlinear flow, plus evolution orchestration.

#include <functional>
#include <vector>

#include "zk/dynamics.hpp"

namespace zk {

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double safety = 0.5;   // bounds dt * max|nonlinear rhs| <= 0.5 * safety^0
  int diag_stride = 10;  // steps between diagnostic callbacks

  void validate() const;
};

struct StepReport {
  double t = 0.0;
  double max_coeff = 0.0;
  double noise_floor = 0.0;  // median |coeff| over the octave below the
                             // dealias cutoff (mode ratio in (1/4, 1/2])
  bool nan_flag = false;
  bool resolution_warning = false;  // noise_floor > 1e-10 * max_coeff
};

// Multiply every coefficient by the unit-modulus phase e^{it(xi^3+eta^3)}
// (symmetrized form) or e^{it xi(xi^2+eta^2)} (original form). Phases are
// normalized to unit modulus exactly.
SpectralField2D linear_propagator(const SpectralField2D& F, double t,
                                  EquationForm form = EquationForm::Symmetrized);

// One classical RK4 step on the integrating-factor variable v = W(-t)u.
// Reduces to the exact linear propagator when the nonlinearity vanishes.
SpectralField2D step_ifrk4(const SpectralField2D& F, const EquationSpec& spec,
                           double dt, StepReport* report = nullptr);

struct Trajectory {
  std::vector<StepReport> reports;
  std::vector<SpectralField2D> checkpoints;  // per diag_stride, plus final
  SpectralField2D final_state;
  bool completed = false;
};

using DiagnosticHook =
    std::function<void(const SpectralField2D&, const StepReport&)>;

// Step u0 to cfg.t_end, invoking hooks every diag_stride steps (and at t=0
// and t_end). On blow-up rethrows with the partial trajectory retained in
// the output parameter when provided.
Trajectory evolve(const SpectralField2D& u0, const EquationSpec& spec,
                  const IntegratorConfig& cfg,
                  const std::vector<DiagnosticHook>& hooks = {},
                  bool keep_checkpoints = false);

}  // namespace zk
