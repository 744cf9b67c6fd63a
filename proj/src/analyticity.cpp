#include "zk/analyticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace zk {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::domain_error("Rational: division by zero");
  return Rational(num * o.den, den * o.num);
}
bool Rational::operator<(const Rational& o) const {
  return num * o.den < o.num * den;
}

Rational epsilon_of_s(const Rational& s) {
  if (s <= Rational(-1, 4)) {
    throw std::domain_error("epsilon_of_s requires s > -1/4");
  }
  const Rational cap(1, 24);
  const Rational lin = s / Rational(6) + Rational(1, 24);
  return lin < cap ? lin : cap;
}

double epsilon_of_s(double s) {
  if (s <= -0.25) throw std::domain_error("epsilon_of_s requires s > -1/4");
  return std::min(1.0 / 24.0, s / 6.0 + 1.0 / 24.0);
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0, r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double denom = n * sxx - sx * sx;
  f.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += e * e;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.rms = std::sqrt(ss_res / n);
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

RadiusEstimate estimate_radius(const SpectralField2D& F,
                               const RadiusFitConfig& cfg) {
  const Grid2D& g = F.grid;
  const double gmax = F.max_abs();
  if (gmax == 0.0) throw ConfigError("estimate_radius: field is zero");
  const double shell_width = std::min(g.dxi(), g.deta());
  const double floor = cfg.noise_floor_factor * gmax;
  const double guard_cap = exp_smooth_guard_cap(g);

  // Shell envelope: max |coeff| per |gamma|_1 band, with the |gamma|_1
  // coordinate at which the max occurs.
  std::map<int, std::pair<double, double>> shells;  // index -> (env, coord)
  bool any_below_floor = false;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double l1 = std::abs(g.xi(ix)) + std::abs(g.eta(iy));
      const double a = std::abs(F.coeffs[g.idx(ix, iy)]);
      const int shell = int(std::floor(l1 / shell_width));
      auto it = shells.find(shell);
      if (it == shells.end()) {
        shells.emplace(shell, std::make_pair(a, l1));
      } else if (a > it->second.first) {
        it->second = {a, l1};
      }
    }
  }

  std::vector<int> usable;
  for (const auto& [shell, ec] : shells) {
    if (ec.first >= floor) {
      usable.push_back(shell);
    } else {
      any_below_floor = true;
    }
  }
  std::sort(usable.begin(), usable.end());

  RadiusEstimate est;
  est.floor_hit = any_below_floor;

  // An entire (band-limited) spectrum ends in a cliff: the last usable
  // envelope sits far above the floor. No decay rate is fittable; report
  // the guard cap.
  if (any_below_floor && !usable.empty() &&
      shells.at(usable.back()).first > 1e3 * floor) {
    est.sigma_hat = guard_cap;
    est.quality_warning = true;
    return est;
  }

  auto fit_on = [&](const std::vector<int>& idxs) {
    std::vector<double> xs, ys;
    for (int s : idxs) {
      xs.push_back(shells.at(s).second);
      ys.push_back(std::log(shells.at(s).first));
    }
    return least_squares(xs, ys);
  };

  // The drop fractions are taken over the full shell count; when the noise
  // floor already truncated the top of the band, the high-side drop collapses
  // and the usable tail (the most informative part of the decay) is kept.
  const int n = int(usable.size());
  const int n_total = int(shells.size());
  const int lo = std::min(int(std::floor(cfg.drop_low_fraction * n_total)), n);
  const int hi =
      std::min(n_total - int(std::floor(cfg.drop_high_fraction * n_total)), n);
  std::vector<int> window(usable.begin() + lo, usable.begin() + std::max(lo, hi));

  if (int(window.size()) < cfg.min_shells) {
    est.floor_hit = true;
    est.quality_warning = true;
    if (n >= 2) {
      const LineFit f = fit_on(usable);  // widest available band
      est.sigma_hat = std::max(-f.slope, 0.0);
      est.residual = f.rms;
      est.window_lo = usable.front();
      est.window_hi = usable.back();
    } else {
      est.sigma_hat = guard_cap;
    }
    return est;
  }

  const LineFit f = fit_on(window);
  est.sigma_hat = std::min(std::max(-f.slope, 0.0), guard_cap);
  est.residual = f.rms;
  est.window_lo = window.front();
  est.window_hi = window.back();
  return est;
}

double lifespan_T0(double norm_sq, double c0, double d) {
  if (norm_sq < 0.0) throw std::domain_error("lifespan_T0: norm_sq must be >= 0");
  if (!(c0 > 0.0)) throw std::domain_error("lifespan_T0: c0 must be > 0");
  if (!(d > 1.0)) throw std::domain_error("lifespan_T0: d must be > 1");
  return c0 / std::pow(1.0 + norm_sq, d);
}

double continuation_delta(double M0, double c0, double d) {
  if (M0 < 0.0) throw std::domain_error("continuation_delta: M0 must be >= 0");
  return c0 / std::pow(1.0 + 2.0 * M0, d);
}

double continuation_delta_mzk(double E0, double c0, double d) {
  if (E0 < 0.0) throw std::domain_error("continuation_delta_mzk: E0 must be >= 0");
  return c0 / std::pow(1.0 + 4.0 * E0, d);
}

double condition2_sigma(double T, double delta, double M0, double theta,
                        double C) {
  if (theta == 0.0) throw std::domain_error("condition2_sigma: theta must be > 0");
  if (!(T > 0.0 && delta > 0.0 && M0 > 0.0 && C > 0.0)) {
    throw std::domain_error("condition2_sigma: arguments must be positive");
  }
  const double base =
      delta / (2.0 * T * C * std::pow(2.0, 1.5) * std::sqrt(M0));
  return std::pow(base, 1.0 / theta);
}

double condition2_sigma_mzk(double T, double delta, double E0, double alpha,
                            double C) {
  if (alpha == 0.0) throw std::domain_error("condition2_sigma_mzk: alpha must be > 0");
  if (!(T > 0.0 && delta > 0.0 && E0 > 0.0 && C > 0.0)) {
    throw std::domain_error("condition2_sigma_mzk: arguments must be positive");
  }
  const double base = delta / (16.0 * T * C * E0 * (1.0 + E0));
  return std::pow(base, 1.0 / alpha);
}

double BoundCurve::exponent() const {
  return kind == BoundKind::ZK_minus4_eps ? -4.0 + eps : -4.0 / 3.0;
}

double bound_curve_eval(const BoundCurve& curve, double T) {
  return std::min(curve.sigma0, curve.c * std::pow(T, curve.exponent()));
}

DecayFit fit_decay_exponent(
    const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 4) {
    throw ConfigError("fit_decay_exponent: need at least 4 points");
  }
  std::vector<double> x, y;
  for (const auto& [T, sigma] : pts) {
    if (!(T > 0.0 && sigma > 0.0)) {
      throw ConfigError("fit_decay_exponent: entries must be positive");
    }
    x.push_back(std::log(T));
    y.push_back(std::log(sigma));
  }
  const LineFit f = least_squares(x, y);
  return DecayFit{f.slope, std::exp(f.intercept), f.r2};
}

ContinuationLedger make_continuation_ledger(
    const std::string& kind, double M0, double c0, double d,
    double theta_or_alpha, double C, double sigma0,
    const std::vector<double>& T_values, double s_level) {
  ContinuationLedger L;
  L.kind = kind;
  L.c0 = c0;
  L.d = d;
  L.C = C;
  L.sigma0 = sigma0;
  L.M0 = M0;
  const bool mzk = kind == "mzk";
  if (mzk) {
    L.alpha = theta_or_alpha;
    L.delta = continuation_delta_mzk(M0, c0, d);
    L.s_embedding_surrogate = s_level != 1.0;
  } else if (kind == "zk") {
    L.theta = theta_or_alpha;
    L.delta = continuation_delta(M0, c0, d);
    L.s_embedding_surrogate = s_level != 0.0;
  } else {
    throw ConfigError("ledger kind must be 'zk' or 'mzk'");
  }
  L.T0 = lifespan_T0(M0, c0, d);

  double worst = 0.0;
  for (double T : T_values) {
    const double sigma =
        mzk ? condition2_sigma_mzk(T, L.delta, M0, L.alpha, C)
            : condition2_sigma(T, L.delta, M0, L.theta, C);
    L.T_values.push_back(T);
    L.sigma_schedule.push_back(std::min(sigma, sigma0));
    const double steps = std::floor(T / L.delta);
    // delta can be astronomically small for rough data; saturate the count.
    L.n_steps.push_back(steps < 9e18 ? long(steps)
                                     : std::numeric_limits<long>::max());
    const double lhs =
        mzk ? 16.0 * T / L.delta * C * std::pow(sigma, L.alpha) * M0 * (1.0 + M0)
            : 2.0 * T / L.delta * C * std::pow(sigma, L.theta) *
                  std::pow(2.0, 1.5) * std::sqrt(M0);
    worst = std::max(worst, std::abs(lhs - 1.0));
  }
  L.condition2_margin = worst;
  return L;
}

std::string ContinuationLedger::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"kind\":\"" << kind << "\",\"c0\":" << c0 << ",\"d\":" << d
     << ",\"theta\":" << theta << ",\"alpha\":" << alpha << ",\"C\":" << C
     << ",\"sigma0\":" << sigma0 << ",\"M0\":" << M0 << ",\"T0\":" << T0
     << ",\"delta\":" << delta << ",\"condition2_margin\":"
     << condition2_margin << ",\"s_embedding_surrogate\":"
     << (s_embedding_surrogate ? "true" : "false") << ",\"schedule\":[";
  for (std::size_t i = 0; i < T_values.size(); ++i) {
    if (i) os << ',';
    os << "{\"T\":" << T_values[i] << ",\"sigma\":" << sigma_schedule[i]
       << ",\"n_steps\":" << n_steps[i] << '}';
  }
  os << "]}";
  return os.str();
}

}  // namespace zk
