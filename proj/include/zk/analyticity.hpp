#pragma once

// Radius-of-analyticity estimation from spectral decay, the epsilon(s) law,
// lifespan and continuation-step formulas, and the lower-bound curves
// sigma(T).

#include <cstdint>
#include <string>
#include <vector>

#include "zk/spectral.hpp"

namespace zk {

// Exact rational arithmetic for the epsilon(s) law.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1);

  double value() const { return double(num) / double(den); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
};

// epsilon(s) = min(1/24, s/6 + 1/24), defined for s > -1/4.
Rational epsilon_of_s(const Rational& s);
double epsilon_of_s(double s);

struct RadiusFitConfig {
  double noise_floor_factor = 1e-13;  // relative to the largest coefficient
  double drop_low_fraction = 0.20;    // low-frequency shells discarded
  double drop_high_fraction = 0.10;   // high-frequency shells discarded
  int min_shells = 5;
};

struct RadiusEstimate {
  double sigma_hat = 0.0;
  int window_lo = 0, window_hi = 0;  // shell-index range used by the fit
  double residual = 0.0;             // RMS of the log-envelope fit
  bool floor_hit = false;
  bool quality_warning = false;
};

// Fits -d/d|gamma|_1 log(shell envelope): shells are |gamma|_1 bands of one
// lattice-spacing width, envelope is the shell max. Band-limited (entire)
// inputs report sigma_hat at the overflow guard cap.
RadiusEstimate estimate_radius(const SpectralField2D& F,
                               const RadiusFitConfig& cfg = {});

// T0 = c0 / (1 + norm_sq)^d.
double lifespan_T0(double norm_sq, double c0, double d);

// delta = c0 / (1 + 2 M0)^d (ZK, mass-based step).
double continuation_delta(double M0, double c0, double d);

// delta = c0 / (1 + 4 E0)^d (mZK, energy-based step).
double continuation_delta_mzk(double E0, double c0, double d);

// sigma* solving (2T/delta) C sigma^theta 2^(3/2) M0^(1/2) = 1.
double condition2_sigma(double T, double delta, double M0, double theta,
                        double C);

// sigma* solving 2^4 (T/delta) C sigma^alpha E0 (1 + E0) = 1.
double condition2_sigma_mzk(double T, double delta, double E0, double alpha,
                            double C);

enum class BoundKind { ZK_minus4_eps, mZK_minus4_3 };

struct BoundCurve {
  BoundKind kind = BoundKind::ZK_minus4_eps;
  double c = 1.0;       // prefactor
  double eps = 1e-3;    // the epsilon in T^{-4+eps} (ZK kind only)
  double sigma0 = 1.0;  // initial radius; the curve clamps at min(sigma0, .)

  double exponent() const;
};

double bound_curve_eval(const BoundCurve& curve, double T);

struct DecayFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

// Least squares on (log T, log sigma); needs >= 4 positive points.
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& pts);

struct ContinuationLedger {
  std::string kind;  // "zk" or "mzk"
  double c0 = 1.0;
  double d = 24.0;
  double theta = 0.0;  // ZK exponent
  double alpha = 0.0;  // mZK exponent
  double C = 1.0;
  double sigma0 = 1.0;
  double M0 = 0.0;  // M_{sigma0}(0) for ZK; E_{sigma0}(0) for mZK
  double T0 = 0.0;
  double delta = 0.0;
  std::vector<double> T_values;
  std::vector<double> sigma_schedule;  // sigma(T) per T
  std::vector<long> n_steps;           // floor(T/delta) per T
  double condition2_margin = 0.0;      // max |LHS(sigma*) - 1| over rows
  bool s_embedding_surrogate = false;  // set when s is not the native level

  std::string to_json() const;
};

// Assemble the section-5 bookkeeping for a sweep of horizon times T.
// For kind "zk": M0 is the mass-level quantity and theta the exponent; the
// native normalization is s=0. For "mzk": M0 holds E_{sigma0}(0), alpha the
// exponent, native s=1.
ContinuationLedger make_continuation_ledger(const std::string& kind,
                                            double M0, double c0, double d,
                                            double theta_or_alpha, double C,
                                            double sigma0,
                                            const std::vector<double>& T_values,
                                            double s_level);

}  // namespace zk
