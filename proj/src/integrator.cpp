#include "zk/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zk {

namespace {

std::vector<Complex> build_phase_table(const Grid2D& g, double t,
                                       EquationForm form) {
  std::vector<Complex> ph(g.size());
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double xi = g.xi(ix), eta = g.eta(iy);
      const double theta = form == EquationForm::Symmetrized
                               ? t * (xi * xi * xi + eta * eta * eta)
                               : t * xi * (xi * xi + eta * eta);
      Complex p = std::polar(1.0, theta);
      const double r = std::abs(p);
      if (r != 1.0) p /= r;
      ph[g.idx(ix, iy)] = p;
    }
  }
  return ph;
}

// Repeated fixed-dt stepping reuses one table; keyed on the exact arguments.
const std::vector<Complex>& phase_table(const Grid2D& g, double t,
                                        EquationForm form) {
  thread_local Grid2D cached_grid;
  thread_local double cached_t = 0.0;
  thread_local EquationForm cached_form = EquationForm::Symmetrized;
  thread_local std::vector<Complex> cached;
  if (cached.empty() || !(cached_grid == g) || cached_t != t ||
      cached_form != form) {
    cached = build_phase_table(g, t, form);
    cached_grid = g;
    cached_t = t;
    cached_form = form;
  }
  return cached;
}

StepReport make_report(const SpectralField2D& F) {
  StepReport rep;
  rep.t = F.time_tag;
  rep.max_coeff = F.max_abs();
  const Grid2D& g = F.grid;
  std::vector<double> top;
  bool bad = false;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Complex c = F.coeffs[g.idx(ix, iy)];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) bad = true;
      const double rx = std::abs(g.mode_x(ix)) / double(g.nx / 2);
      const double ry = std::abs(g.mode_y(iy)) / double(g.ny / 2);
      const double r2 = std::max(rx, ry);
      if (r2 > 0.25 && r2 <= 0.5) top.push_back(std::abs(c));
    }
  }
  if (!top.empty()) {
    auto mid = top.begin() + top.size() / 2;
    std::nth_element(top.begin(), mid, top.end());
    rep.noise_floor = *mid;
  }
  rep.nan_flag = bad;
  rep.resolution_warning =
      rep.max_coeff > 0.0 && rep.noise_floor > 1e-10 * rep.max_coeff;
  return rep;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("integrator: dt must be > 0");
  if (!(t_end >= 0.0)) throw ConfigError("integrator: t_end must be >= 0");
  if (!(safety > 0.0 && safety <= 1.0)) {
    throw ConfigError("integrator: safety must be in (0,1]");
  }
  if (diag_stride < 1) throw ConfigError("integrator: diag_stride must be >= 1");
}

SpectralField2D linear_propagator(const SpectralField2D& F, double t,
                                  EquationForm form) {
  const auto& ph = phase_table(F.grid, t, form);
  SpectralField2D out(F.grid, F.time_tag + t);
  for (std::size_t i = 0; i < ph.size(); ++i) {
    out.coeffs[i] = F.coeffs[i] * ph[i];
  }
  return out;
}

SpectralField2D step_ifrk4(const SpectralField2D& F, const EquationSpec& spec,
                           double dt, StepReport* report) {
  const Grid2D& g = F.grid;
  const auto& Eh = phase_table(g, dt / 2.0, spec.form);
  const std::size_t n = g.size();

  auto apply = [&](const std::vector<Complex>& ph, const SpectralField2D& u) {
    SpectralField2D v(g, u.time_tag);
    for (std::size_t i = 0; i < n; ++i) v.coeffs[i] = u.coeffs[i] * ph[i];
    return v;
  };
  auto axpy = [&](const SpectralField2D& u, double c,
                  const SpectralField2D& k) {
    SpectralField2D v = u;
    for (std::size_t i = 0; i < n; ++i) v.coeffs[i] += c * k.coeffs[i];
    return v;
  };

  // Classical integrating-factor RK4 (half-step phases E, full step E^2).
  const SpectralField2D k1 = rhs_nonlinear(F, spec);
  const SpectralField2D Eu = apply(Eh, F);
  const SpectralField2D k2 = rhs_nonlinear(apply(Eh, axpy(F, dt / 2.0, k1)), spec);
  const SpectralField2D k3 = rhs_nonlinear(axpy(Eu, dt / 2.0, k2), spec);
  const SpectralField2D E2u = apply(Eh, Eu);
  const SpectralField2D k4 =
      rhs_nonlinear(apply(Eh, axpy(Eu, dt, k3)), spec);

  SpectralField2D out(g, F.time_tag + dt);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex acc = Eh[i] * (Eh[i] * k1.coeffs[i] +
                                 2.0 * (k2.coeffs[i] + k3.coeffs[i])) +
                        k4.coeffs[i];
    out.coeffs[i] = E2u.coeffs[i] + (dt / 6.0) * acc;
  }
  out = dealias(out, spec.nonlinearity_degree());

  if (report) {
    *report = make_report(out);
    if (report->nan_flag) {
      throw BlowUpError("NaN/Inf during RK4 stage", F.time_tag);
    }
  }
  return out;
}

Trajectory evolve(const SpectralField2D& u0, const EquationSpec& spec,
                  const IntegratorConfig& cfg,
                  const std::vector<DiagnosticHook>& hooks,
                  bool keep_checkpoints) {
  cfg.validate();
  Trajectory traj;
  SpectralField2D u = dealias(u0, spec.nonlinearity_degree());
  u.time_tag = 0.0;

  // Resolvability guard on the nonlinear stage.
  {
    const SpectralField2D n0 = rhs_nonlinear(u, spec);
    const double rate = cfg.dt * n0.max_abs();
    if (rate > 0.5) {
      std::ostringstream os;
      os << "integrator guard: dt*max|nonlinear rhs| = " << rate
         << " exceeds 0.5; reduce dt";
      throw ConfigError(os.str());
    }
  }

  StepReport rep = make_report(u);
  traj.reports.push_back(rep);
  for (const auto& h : hooks) h(u, rep);
  if (keep_checkpoints) traj.checkpoints.push_back(u);

  const long n_steps = std::lround(cfg.t_end / cfg.dt);
  const double dt = n_steps > 0 ? cfg.t_end / double(n_steps) : cfg.dt;
  for (long step = 1; step <= n_steps; ++step) {
    try {
      u = step_ifrk4(u, spec, dt, &rep);
    } catch (const BlowUpError&) {
      traj.final_state = u;
      traj.completed = false;
      throw;
    }
    u.time_tag = step * dt;  // avoid accumulated additions
    rep.t = u.time_tag;
    if (step % cfg.diag_stride == 0 || step == n_steps) {
      traj.reports.push_back(rep);
      for (const auto& h : hooks) h(u, rep);
      if (keep_checkpoints) traj.checkpoints.push_back(u);
    }
  }
  traj.final_state = u;
  traj.completed = true;
  return traj;
}

}  // namespace zk
