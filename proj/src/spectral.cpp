#include "zk/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace zk {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHermitianTol = 1e-10;
constexpr double kExpGuard = 700.0;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Steppers alternate between the base grid and the 2x padded grid, so cache
// one plan pair per distinct size (per thread; the planner itself is the
// only thread-unsafe part of FFTW).
struct PlanEntry {
  fftw_plan fwd = nullptr, bwd = nullptr;
  std::vector<Complex> buf;
};

struct PlanCache {
  std::map<std::pair<int, int>, PlanEntry> entries;

  ~PlanCache() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    for (auto& [key, e] : entries) {
      if (e.fwd) fftw_destroy_plan(e.fwd);
      if (e.bwd) fftw_destroy_plan(e.bwd);
    }
  }

  PlanEntry& ensure(const Grid2D& g) {
    PlanEntry& e = entries[{g.nx, g.ny}];
    if (!e.fwd) {
      std::lock_guard<std::mutex> lk(planner_mutex());
      e.buf.assign(g.size(), Complex(0, 0));
      auto* p = reinterpret_cast<fftw_complex*>(e.buf.data());
      // Row-major with x fastest: FFTW dims are (ny, nx).
      e.fwd = fftw_plan_dft_2d(g.ny, g.nx, p, p, FFTW_FORWARD, FFTW_MEASURE);
      e.bwd = fftw_plan_dft_2d(g.ny, g.nx, p, p, FFTW_BACKWARD, FFTW_MEASURE);
    }
    return e;
  }
};

PlanCache& plan_cache() {
  thread_local PlanCache cache;
  return cache;
}

}  // namespace

Grid2D::Grid2D(int nx_, int ny_, double Lx_, double Ly_)
    : nx(nx_), ny(ny_), Lx(Lx_), Ly(Ly_) {
  if (nx < 8 || ny < 8 || !is_power_of_two(nx) || !is_power_of_two(ny)) {
    std::ostringstream os;
    os << "grid dimensions must be powers of two >= 8, got " << nx << "x" << ny;
    throw ConfigError(os.str());
  }
  if (!(Lx > 0.0) || !(Ly > 0.0)) {
    throw ConfigError("box side lengths must be positive");
  }
}

Grid2D Grid2D::unchecked(int nx_, int ny_, double Lx_, double Ly_) {
  Grid2D g;
  g.nx = nx_;
  g.ny = ny_;
  g.Lx = Lx_;
  g.Ly = Ly_;
  return g;
}

double Grid2D::dxi() const { return 2.0 * kPi / Lx; }
double Grid2D::deta() const { return 2.0 * kPi / Ly; }

double Grid2D::max_l1_freq() const {
  return (nx / 2) * dxi() + (ny / 2) * deta();
}

double WaveVector::l1() const { return std::abs(xi) + std::abs(eta); }
double WaveVector::norm() const { return std::hypot(xi, eta); }
double WaveVector::bracket() const {
  return std::sqrt(1.0 + xi * xi + eta * eta);
}

Complex& SpectralField2D::mode(int mx, int my) {
  int ix = mx >= 0 ? mx : mx + grid.nx;
  int iy = my >= 0 ? my : my + grid.ny;
  return coeffs[grid.idx(ix, iy)];
}

const Complex& SpectralField2D::mode(int mx, int my) const {
  int ix = mx >= 0 ? mx : mx + grid.nx;
  int iy = my >= 0 ? my : my + grid.ny;
  return coeffs[grid.idx(ix, iy)];
}

double SpectralField2D::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft2_forward_raw(const Grid2D& g, std::vector<Complex>& data) {
  auto& e = plan_cache().ensure(g);
  std::copy(data.begin(), data.end(), e.buf.begin());
  fftw_execute(e.fwd);
  std::copy(e.buf.begin(), e.buf.end(), data.begin());
}

void fft2_backward_raw(const Grid2D& g, std::vector<Complex>& data) {
  auto& e = plan_cache().ensure(g);
  std::copy(data.begin(), data.end(), e.buf.begin());
  fftw_execute(e.bwd);
  std::copy(e.buf.begin(), e.buf.end(), data.begin());
}

SpectralField2D forward_transform(const std::vector<double>& samples,
                                  const Grid2D& grid, double time_tag) {
  if (samples.size() != grid.size()) {
    std::ostringstream os;
    os << "sample array size " << samples.size() << " does not match grid "
       << grid.nx << "x" << grid.ny;
    throw ConfigError(os.str());
  }
  SpectralField2D F(grid, time_tag);
  for (std::size_t i = 0; i < samples.size(); ++i) F.coeffs[i] = samples[i];
  fft2_forward_raw(grid, F.coeffs);
  // Quadrature of (1/2pi) integral f e^{-i gamma x} dA.
  const double scale = grid.Lx * grid.Ly / (2.0 * kPi * grid.size());
  for (auto& c : F.coeffs) c *= scale;
  return F;
}

double hermitian_defect(const SpectralField2D& F) {
  const Grid2D& g = F.grid;
  double worst = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    const int jy = (g.ny - iy) % g.ny;
    for (int ix = 0; ix < g.nx; ++ix) {
      const int jx = (g.nx - ix) % g.nx;
      worst = std::max(worst, std::abs(F.coeffs[g.idx(ix, iy)] -
                                       std::conj(F.coeffs[g.idx(jx, jy)])));
    }
  }
  const double m = F.max_abs();
  return m > 0.0 ? worst / m : 0.0;
}

std::vector<double> inverse_transform(const SpectralField2D& F) {
  const double defect = hermitian_defect(F);
  if (defect > kHermitianTol) {
    std::ostringstream os;
    os << "Hermitian symmetry broken: relative defect " << defect
       << " exceeds " << kHermitianTol;
    throw IntegrityError(os.str());
  }
  std::vector<Complex> buf = F.coeffs;
  fft2_backward_raw(F.grid, buf);
  const double scale = F.grid.dxi() * F.grid.deta() / (2.0 * kPi);
  std::vector<double> out(F.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real() * scale;
  return out;
}

SpectralField2D apply_multiplier(
    const SpectralField2D& F,
    const std::function<Complex(const WaveVector&)>& m) {
  SpectralField2D out(F.grid, F.time_tag);
  const Grid2D& g = F.grid;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const WaveVector wv{g.xi(ix), g.eta(iy)};
      const Complex mv = m(wv);
      if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag())) {
        std::ostringstream os;
        os << "non-finite multiplier at mode (" << g.mode_x(ix) << ","
           << g.mode_y(iy) << "), frequency (" << wv.xi << "," << wv.eta
           << ")";
        throw NumericError(os.str());
      }
      out.coeffs[g.idx(ix, iy)] = mv * F.coeffs[g.idx(ix, iy)];
    }
  }
  return out;
}

double exp_smooth_guard_cap(const Grid2D& g) {
  return kExpGuard / g.max_l1_freq();
}

SpectralField2D exp_smooth(const SpectralField2D& F, double sigma, int sign) {
  if (sigma < 0.0) throw ConfigError("exp_smooth: sigma must be >= 0");
  if (sign != 1 && sign != -1) throw ConfigError("exp_smooth: sign must be +-1");
  if (sign == 1 && sigma * F.grid.max_l1_freq() > kExpGuard) {
    std::ostringstream os;
    os << "exp_smooth overflow guard: sigma*max|gamma|_1 = "
       << sigma * F.grid.max_l1_freq() << " > " << kExpGuard
       << "; reduce sigma below " << exp_smooth_guard_cap(F.grid)
       << " or truncate the field to a smaller band";
    throw std::range_error(os.str());
  }
  SpectralField2D out(F.grid, F.time_tag);
  const Grid2D& g = F.grid;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double l1 = std::abs(g.xi(ix)) + std::abs(g.eta(iy));
      out.coeffs[g.idx(ix, iy)] =
          F.coeffs[g.idx(ix, iy)] * std::exp(sign * sigma * l1);
    }
  }
  return out;
}

double dealias_cutoff(int nonlinearity_degree) {
  switch (nonlinearity_degree) {
    case 2:
      return 2.0 / 3.0;
    case 3:
      return 1.0 / 2.0;
    default:
      throw ConfigError("dealias: nonlinearity degree must be 2 or 3");
  }
}

SpectralField2D dealias(const SpectralField2D& F, int nonlinearity_degree) {
  const double cutoff = dealias_cutoff(nonlinearity_degree);
  SpectralField2D out = F;
  const Grid2D& g = F.grid;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double rx = std::abs(g.mode_x(ix)) / double(g.nx / 2);
      const double ry = std::abs(g.mode_y(iy)) / double(g.ny / 2);
      if (std::max(rx, ry) > cutoff) out.coeffs[g.idx(ix, iy)] = 0.0;
    }
  }
  return out;
}

SpectralField2D multiply_fields(const SpectralField2D& A,
                                const SpectralField2D& B) {
  if (!(A.grid == B.grid)) throw IntegrityError("multiply_fields: grid mismatch");
  const Grid2D& g = A.grid;
  const Grid2D pg(2 * g.nx, 2 * g.ny, g.Lx, g.Ly);

  auto pad = [&](const SpectralField2D& F) {
    std::vector<Complex> big(pg.size(), Complex(0, 0));
    for (int iy = 0; iy < g.ny; ++iy) {
      const int my = g.mode_y(iy);
      const int py = my >= 0 ? my : my + pg.ny;
      for (int ix = 0; ix < g.nx; ++ix) {
        const int mx = g.mode_x(ix);
        const int px = mx >= 0 ? mx : mx + pg.nx;
        big[pg.idx(px, py)] = F.coeffs[g.idx(ix, iy)];
      }
    }
    return big;
  };

  std::vector<Complex> a = pad(A), b = pad(B);
  fft2_backward_raw(pg, a);
  fft2_backward_raw(pg, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  fft2_forward_raw(pg, a);
  // One inverse-measure factor per field plus the forward renormalization:
  // product coefficients are beta * (c * d) with beta = dxi*deta/(2pi).
  const double beta = g.dxi() * g.deta() / (2.0 * kPi);
  const double scale = beta / pg.size();
  SpectralField2D out(g, A.time_tag);
  for (int iy = 0; iy < g.ny; ++iy) {
    const int my = g.mode_y(iy);
    const int py = my >= 0 ? my : my + pg.ny;
    for (int ix = 0; ix < g.nx; ++ix) {
      const int mx = g.mode_x(ix);
      const int px = mx >= 0 ? mx : mx + pg.nx;
      out.coeffs[g.idx(ix, iy)] = a[pg.idx(px, py)] * scale;
    }
  }
  return out;
}

namespace {

// Antiderivative of the clamped quintic smoothstep Q(u) = u^3(10-15u+6u^2).
double smoothstep_antideriv(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 0.5 + (u - 1.0);
  const double u4 = u * u * u * u;
  return u4 * (2.5 - 3.0 * u + u * u);
}

constexpr double kMollifyHalfWidth = 0.05;

// Transition function on [0,1]: the quintic smoothstep, compressed to
// [h, 1-h] and convolved once with a box kernel of half-width h. Goes from
// exactly 0 at u<=0 to exactly 1 at u>=1.
double mollified_transition(double u) {
  const double h = kMollifyHalfWidth;
  const double scale = 1.0 - 2.0 * h;
  auto prim = [&](double v) {
    return scale * smoothstep_antideriv((v - h) / scale);
  };
  return (prim(u + h) - prim(u - h)) / (2.0 * h);
}

}  // namespace

double window_psi(double t) {
  const double a = std::abs(t);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - mollified_transition(a - 1.0);
}

double window_psi_N(double t, double N) {
  if (N <= 1.0) return window_psi(t);
  return window_psi(t / N) - window_psi(2.0 * t / N);
}

SpectralField2D project_PN(const SpectralField2D& F,
                           const ProjectionSpec& spec) {
  if (!is_power_of_two(spec.N)) {
    throw ConfigError("project_PN: N must be a power of two");
  }
  const double N = spec.N;
  return apply_multiplier(F, [N](const WaveVector& wv) {
    return Complex(window_psi_N(wv.norm(), N), 0.0);
  });
}

}  // namespace zk
