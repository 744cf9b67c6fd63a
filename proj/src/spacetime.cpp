#include "zk/spacetime.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "zk/integrator.hpp"
#include "zk/rng.hpp"

namespace zk {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mutex& planner_mutex3() {
  static std::mutex m;
  return m;
}

void fft3_raw(const SpaceTimeField& shape, std::vector<Complex>& data,
              int direction) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex3());
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    plan = fftw_plan_dft_3d(shape.nt, shape.grid.ny, shape.grid.nx, p, p,
                            direction, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex3());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

SpaceTimeField::SpaceTimeField(const Grid2D& g, int nt_, double T_window_)
    : grid(g), nt(nt_), T_window(T_window_) {
  if (nt < 4 || nt % 2 != 0) {
    throw ConfigError("SpaceTimeField: nt must be even and >= 4");
  }
  if (!(T_window > 0.0)) throw ConfigError("SpaceTimeField: T_window must be > 0");
  coeffs.assign(size(), Complex(0, 0));
}

double SpaceTimeField::dtau() const { return 2.0 * kPi / T_window; }

Complex& SpaceTimeField::mode(int mx, int my, int mt) {
  const int ix = mx >= 0 ? mx : mx + grid.nx;
  const int iy = my >= 0 ? my : my + grid.ny;
  const int it = mt >= 0 ? mt : mt + nt;
  return coeffs[idx(ix, iy, it)];
}

const Complex& SpaceTimeField::mode(int mx, int my, int mt) const {
  const int ix = mx >= 0 ? mx : mx + grid.nx;
  const int iy = my >= 0 ? my : my + grid.ny;
  const int it = mt >= 0 ? mt : mt + nt;
  return coeffs[idx(ix, iy, it)];
}

SpaceTimeField windowed_free_solution(const SpectralField2D& u0, int nt,
                                      double T_window) {
  SpaceTimeField F(u0.grid, nt, T_window);
  const Grid2D& g = u0.grid;
  const double dt = T_window / nt;
  // Sample at t_j in [-T/2, T/2); the half-period shift only changes the
  // tau-coefficient phases, not any norm computed here.
  for (int it = 0; it < nt; ++it) {
    const double t_shifted =
        (it < nt / 2 ? it : it - nt) * dt;  // wrapped to [-T/2, T/2)
    const double w = window_psi(t_shifted);
    const SpectralField2D slice = linear_propagator(u0, t_shifted);
    for (std::size_t i = 0; i < g.size(); ++i) {
      F.coeffs[std::size_t(it) * g.size() + i] = w * slice.coeffs[i];
    }
  }
  // Unitary time transform: (1/sqrt(2pi)) * integral over one period.
  std::vector<Complex> col(nt);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int it = 0; it < nt; ++it) col[it] = F.coeffs[std::size_t(it) * g.size() + i];
    std::vector<Complex> out(nt, Complex(0, 0));
    for (int mt = 0; mt < nt; ++mt) {
      Complex acc(0, 0);
      for (int it = 0; it < nt; ++it) {
        const double ang = -2.0 * kPi * mt * it / nt;
        acc += col[it] * std::polar(1.0, ang);
      }
      out[mt] = acc * (T_window / (std::sqrt(2.0 * kPi) * nt));
    }
    for (int it = 0; it < nt; ++it) F.coeffs[std::size_t(it) * g.size() + i] = out[it];
  }
  return F;
}

double xsb_norm(const SpaceTimeField& F, const BourgainParams& p) {
  const Grid2D& g = F.grid;
  if (p.sigma * g.max_l1_freq() > 700.0) {
    throw std::range_error("xsb_norm: sigma exceeds the overflow guard");
  }
  const double measure = g.dxi() * g.deta() * F.dtau();
  double acc = 0.0;
  for (int it = 0; it < F.nt; ++it) {
    const double tau = F.tau(it);
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix), eta = g.eta(iy);
        const double mod = tau - xi * xi * xi - eta * eta * eta;
        const double w = std::exp(p.sigma * (std::abs(xi) + std::abs(eta))) *
                         std::pow(1.0 + xi * xi + eta * eta, p.s / 2.0) *
                         std::pow(1.0 + mod * mod, p.b / 2.0);
        const double a = std::abs(F.coeffs[F.idx(ix, iy, it)]);
        acc += w * w * a * a;
      }
    }
  }
  return std::sqrt(acc * measure);
}

SpaceTimeField project_QL(const SpaceTimeField& F, const ProjectionSpec& spec) {
  if (!is_power_of_two(spec.L)) {
    throw ConfigError("project_QL: L must be a power of two");
  }
  SpaceTimeField out = F;
  const Grid2D& g = F.grid;
  const double L = spec.L;
  for (int it = 0; it < F.nt; ++it) {
    const double tau = F.tau(it);
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const double xi = g.xi(ix), eta = g.eta(iy);
        const double mod = tau - xi * xi * xi - eta * eta * eta;
        out.coeffs[F.idx(ix, iy, it)] *= window_psi_N(mod, L);
      }
    }
  }
  return out;
}

double l2_norm(const SpaceTimeField& F) {
  const double measure = F.grid.dxi() * F.grid.deta() * F.dtau();
  double acc = 0.0;
  for (const auto& c : F.coeffs) acc += std::norm(c);
  return std::sqrt(acc * measure);
}

double mixed_norm_LpLq(const SpaceTimeField& F, double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q)) {
    throw ConfigError("mixed_norm_LpLq: p and q must be finite");
  }
  std::vector<Complex> buf = F.coeffs;
  fft3_raw(F, buf, FFTW_BACKWARD);
  const Grid2D& g = F.grid;
  const double spec_measure = g.dxi() * g.deta() * F.dtau();
  const double scale = spec_measure / std::pow(2.0 * kPi, 1.5);
  const double cell_xy = g.hx() * g.hy();
  const double cell_t = F.T_window / F.nt;
  double acc_t = 0.0;
  for (int it = 0; it < F.nt; ++it) {
    double acc_xy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = std::abs(buf[std::size_t(it) * g.size() + i]) * scale;
      acc_xy += std::pow(a, q);
    }
    const double lq = std::pow(acc_xy * cell_xy, 1.0 / q);
    acc_t += std::pow(lq, p);
  }
  return std::pow(acc_t * cell_t, 1.0 / p);
}

StrichartzReport strichartz_QL_probe(double p, int trials, std::uint64_t seed,
                                     const Grid2D& grid, int nt,
                                     double T_window) {
  if (p < 4.0) throw ConfigError("strichartz_QL_probe: requires p >= 4 (finite)");
  const double q = 2.0 * p / (p - 2.0);
  StrichartzReport rep;
  rep.p = p;
  rep.q = q;
  rep.levels = {1, 4, 16, 64};
  for (int L : rep.levels) {
    double worst = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      RngStream rng(seed, std::uint64_t(L) * 1000003u + trial);
      SpaceTimeField F(grid, nt, T_window);
      for (auto& c : F.coeffs) c = Complex(rng.normal(), rng.normal());
      F = project_QL(F, ProjectionSpec{1, L});
      const double denom = l2_norm(F);
      if (denom == 0.0) continue;
      const double lhs = mixed_norm_LpLq(F, p, q);
      const double exponent = 2.0 / (3.0 * p) + 1.0 / q;
      const double ratio = lhs / (std::pow(double(L), exponent) * denom);
      worst = std::max(worst, ratio);
    }
    rep.max_ratio_per_level.push_back(worst);
  }
  double lo = 1e300, hi = 0.0;
  for (double r : rep.max_ratio_per_level) {
    if (r > 0.0) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  rep.max_ratio = hi;
  rep.stability_factor = lo < hi ? hi / lo : 1.0;
  return rep;
}

SpaceTimeField b_theta_apply(const SpaceTimeField& u, const SpaceTimeField& v,
                             double theta) {
  if (!(u.grid == v.grid) || u.nt != v.nt || u.T_window != v.T_window) {
    throw IntegrityError("b_theta_apply: lattice mismatch");
  }
  SpaceTimeField out(u.grid, u.nt, u.T_window);
  const Grid2D& g = u.grid;
  auto kernel = [theta](double m) {
    // 0^0 defined as 1 (continuity in theta at fixed nonzero arguments).
    if (m == 0.0 && theta == 0.0) return 1.0;
    return std::pow(m, theta);
  };
  const int hx = g.nx / 2, hy = g.ny / 2, ht = u.nt / 2;
  for (int mx = -hx; mx < hx; ++mx) {
    for (int my = -hy; my < hy; ++my) {
      for (int mt = -ht; mt < ht; ++mt) {
        Complex acc(0, 0);
        for (int jx = -hx; jx < hx; ++jx) {
          const int rx = mx - jx;
          if (rx < -hx || rx >= hx) continue;
          for (int jy = -hy; jy < hy; ++jy) {
            const int ry = my - jy;
            if (ry < -hy || ry >= hy) continue;
            for (int jt = -ht; jt < ht; ++jt) {
              const int rt = mt - jt;
              if (rt < -ht || rt >= ht) continue;
              const Complex cv = v.mode(jx, jy, jt);
              if (cv == Complex(0, 0)) continue;
              const Complex cu = u.mode(rx, ry, rt);
              if (cu == Complex(0, 0)) continue;
              const double l1_u = std::abs(rx * g.dxi()) + std::abs(ry * g.deta());
              const double l1_v = std::abs(jx * g.dxi()) + std::abs(jy * g.deta());
              acc += kernel(std::min(l1_u, l1_v)) * cu * cv;
            }
          }
        }
        out.mode(mx, my, mt) = acc;
      }
    }
  }
  return out;
}

SpaceTimeField convolve_spacetime(const SpaceTimeField& u,
                                  const SpaceTimeField& v) {
  if (!(u.grid == v.grid) || u.nt != v.nt || u.T_window != v.T_window) {
    throw IntegrityError("convolve_spacetime: lattice mismatch");
  }
  std::vector<Complex> a = u.coeffs, b = v.coeffs;
  fft3_raw(u, a, FFTW_BACKWARD);
  fft3_raw(u, b, FFTW_BACKWARD);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  fft3_raw(u, a, FFTW_FORWARD);
  SpaceTimeField out(u.grid, u.nt, u.T_window);
  const double scale = 1.0 / double(u.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.coeffs[i] = a[i] * scale;
  return out;
}

}  // namespace zk
