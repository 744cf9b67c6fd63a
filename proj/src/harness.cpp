#include "zk/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "zk/errors.hpp"
#include "zk/functionals.hpp"
#include "zk/harness.hpp"
#include "zk/probes.hpp"

namespace zk {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw IntegrityError("cannot write '" + path + "'");
  out << body;
  if (!out) throw IntegrityError("write failed for '" + path + "'");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double wrap_centered(double x, double L) {
  double r = std::fmod(x, L);
  if (r < -L / 2) r += L;
  if (r >= L / 2) r -= L;
  return r;
}

DiagnosticsRecord make_record(const SpectralField2D& F, const RunConfig& cfg) {
  DiagnosticsRecord rec;
  rec.t = F.time_tag;
  rec.mass_v = mass(F);
  rec.energy_v = energy(F, cfg.equation);
  rec.mod_energy_v =
      (cfg.equation.form == EquationForm::Symmetrized && cfg.equation.k == 2)
          ? modified_energy(F, cfg.equation)
          : std::nan("");
  for (double s : cfg.gevrey_sigma_list) {
    double mv, ev;
    try {
      mv = M_sigma(F, s);
      ev = E_sigma(F, s, cfg.equation);
    } catch (const std::range_error&) {
      mv = ev = std::nan("");  // sigma beyond the exp-weight guard
    }
    rec.m_sigma.push_back(mv);
    rec.e_sigma.push_back(ev);
  }
  rec.sigma_hat = estimate_radius(F).sigma_hat;
  return rec;
}

// Histogram CSV (20 log-spaced bins) for reports that carry raw ratios.
void write_ratio_histogram(const std::string& path,
                           const std::vector<ProbeReport>& reports) {
  std::ostringstream os;
  os << "zk-ratio-histogram v1\n";
  os << "report,bin_lo,bin_hi,count\n";
  os.precision(17);
  bool any = false;
  for (const auto& rep : reports) {
    std::vector<double> v;
    for (double r : rep.ratio_samples)
      if (r > 0 && std::isfinite(r)) v.push_back(r);
    if (v.size() < 2) continue;
    any = true;
    const double lo = std::log(v.front()), hi = std::log(v.back());
    const int nbins = 20;
    const double w = (hi - lo) / nbins > 0 ? (hi - lo) / nbins : 1.0;
    std::vector<long> counts(nbins, 0);
    for (double r : v) {
      int b = std::min(nbins - 1, int((std::log(r) - lo) / w));
      ++counts[std::max(0, b)];
    }
    for (int b = 0; b < nbins; ++b)
      os << rep.name << ',' << std::exp(lo + b * w) << ','
         << std::exp(lo + (b + 1) * w) << ',' << counts[b] << "\n";
  }
  if (any) write_text(path, os.str());
}

}  // namespace

void prepare_output_dir(const std::string& dir, bool force) {
  fs::path p(dir);
  std::error_code ec;
  if (fs::exists(p, ec) && fs::is_directory(p, ec) && !fs::is_empty(p, ec) &&
      !force) {
    throw ConfigError("output directory '" + dir +
                      "' exists and is not empty (use --force to overwrite)");
  }
  fs::create_directories(p, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + dir +
                      "': " + ec.message());
}

SpectralField2D soliton_field(const Grid2D& grid, double K, double x0) {
  std::vector<double> samples(grid.size());
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double x = ix * grid.hx();
      const double c = std::cosh(K * wrap_centered(x - x0, grid.Lx));
      samples[grid.idx(ix, iy)] = 6.0 * K * K / (c * c);
    }
  }
  return forward_transform(samples, grid);
}

SpectralField2D build_initial_data(const RunConfig& cfg) {
  const InitialData& id = cfg.initial_data;
  const Grid2D& g = cfg.grid;
  if (id.kind == "soliton") return soliton_field(g, id.K, id.x0);
  if (id.kind == "random")
    return random_smooth_field(g, id.band, id.amplitude, id.seed);
  if (id.kind == "file") return load_checkpoint(id.path);
  // gaussian, centered in the box
  std::vector<double> samples(g.size());
  const double cx = g.Lx / 2, cy = g.Ly / 2;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double dx = wrap_centered(ix * g.hx() - cx, g.Lx);
      const double dy = wrap_centered(iy * g.hy() - cy, g.Ly);
      samples[g.idx(ix, iy)] =
          id.amplitude *
          std::exp(-(dx * dx + dy * dy) / (2.0 * id.width * id.width));
    }
  }
  return forward_transform(samples, g);
}

double soliton_shape_error(const SpectralField2D& u, double K, double x0,
                           double t) {
  const Grid2D& g = u.grid;
  const double center = x0 + 4.0 * K * K * t;
  const SpectralField2D ex = soliton_field(g, K, center);

  // Cross-correlation surface via the spectral product u^ * conj(ex^).
  SpectralField2D prod(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    prod.coeffs[i] = u.coeffs[i] * std::conj(ex.coeffs[i]);
  std::vector<double> corr = inverse_transform(prod);
  std::size_t best = 0;
  for (std::size_t i = 1; i < corr.size(); ++i)
    if (corr[i] > corr[best]) best = i;
  const int by = int(best / g.nx), bx = int(best % g.nx);

  // Parabolic refinement of the x shift around the peak.
  auto cx = [&](int ix) {
    return corr[g.idx(((ix % g.nx) + g.nx) % g.nx, by)];
  };
  const double c0 = cx(bx - 1), c1 = cx(bx), c2 = cx(bx + 1);
  const double denom = c0 - 2 * c1 + c2;
  const double frac = denom != 0.0 ? 0.5 * (c0 - c2) / denom : 0.0;
  const double sx = (bx + frac) * g.hx();
  const double sy = double(by) * g.hy();

  double num = 0.0, den = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Complex phase =
          std::polar(1.0, -(g.xi(ix) * sx + g.eta(iy) * sy));
      const Complex d =
          u.coeffs[g.idx(ix, iy)] - ex.coeffs[g.idx(ix, iy)] * phase;
      num += std::norm(d);
      den += std::norm(ex.coeffs[g.idx(ix, iy)]);
    }
  }
  if (den == 0.0) throw NumericError("soliton_shape_error: zero reference");
  return std::sqrt(num / den);
}

SimulateSummary simulate_run(const RunConfig& cfg, bool force) {
  prepare_output_dir(cfg.output_dir, force);
  const std::string dir = cfg.output_dir + "/";

  RunManifest man;
  man.config_hash = cfg.config_hash();
  man.started_at = timestamp_utc();

  write_text(dir + "config.resolved", cfg.to_text());
  man.files.push_back("config.resolved");

  SpectralField2D u0 = build_initial_data(cfg);
  save_checkpoint(dir + "checkpoint_initial", u0, cfg.equation);
  man.files.push_back("checkpoint_initial.modes");
  man.files.push_back("checkpoint_initial.json");

  std::ostringstream csv;
  csv << "zk-diagnostics v1\n"
      << diagnostics_csv_header(cfg.gevrey_sigma_list) << "\n";

  SimulateSummary sum;
  SpectralField2D last = u0;
  DiagnosticHook hook = [&](const SpectralField2D& F, const StepReport&) {
    DiagnosticsRecord rec = make_record(F, cfg);
    csv << diagnostics_csv_row(rec) << "\n";
    last = F;
    sum.t_final = rec.t;
    sum.mass_final = rec.mass_v;
    sum.sigma_hat_final = rec.sigma_hat;
  };

  try {
    Trajectory traj = evolve(u0, cfg.equation, cfg.integrator, {hook});
    last = traj.final_state;
    sum.ok = true;
  } catch (const BlowUpError& e) {
    sum.ok = false;
    sum.error = e.what();
    man.status = "blowup";
  }

  write_text(dir + "diagnostics.csv", csv.str());
  man.files.push_back("diagnostics.csv");
  save_checkpoint(dir + "checkpoint_final", last, cfg.equation);
  man.files.push_back("checkpoint_final.modes");
  man.files.push_back("checkpoint_final.json");

  if (cfg.initial_data.kind == "soliton" &&
      cfg.equation.form == EquationForm::Original && cfg.equation.k == 1 &&
      cfg.equation.mu == 1 && sum.ok) {
    sum.shape_error = soliton_shape_error(last, cfg.initial_data.K,
                                          cfg.initial_data.x0, sum.t_final);
  }

  if (sum.ok) man.status = "complete";
  man.finished_at = timestamp_utc();
  man.write_atomic(dir + "manifest.json");
  return sum;
}

int run_simulate(const RunConfig& cfg, bool force) {
  SimulateSummary sum = simulate_run(cfg, force);
  std::cout << "simulate: t=" << sum.t_final << " mass=" << sum.mass_final
            << " sigma_hat=" << sum.sigma_hat_final << "\n";
  if (sum.shape_error >= 0.0)
    std::cout << "soliton shape error: " << sum.shape_error << "\n";
  if (!sum.ok) {
    std::cout << "simulate: FAILED (" << sum.error << ")\n";
    return 1;
  }
  return 0;
}

int run_radius_track(const RunConfig& cfg, bool force) {
  prepare_output_dir(cfg.output_dir, force);
  const std::string dir = cfg.output_dir + "/";

  RunManifest man;
  man.config_hash = cfg.config_hash();
  man.started_at = timestamp_utc();

  SpectralField2D u0 = build_initial_data(cfg);

  const bool is_mzk = cfg.equation.k == 2;
  const double sigma0 = cfg.ledger_sigma0;
  double level0;  // M_{sigma0}(0) for ZK, E_{sigma0}(0) for mZK
  try {
    level0 = is_mzk ? E_sigma(u0, sigma0, cfg.equation) : M_sigma(u0, sigma0);
  } catch (const std::range_error& e) {
    throw ConfigError(std::string("radius-track: sigma0 too large for the "
                                  "grid (") +
                      e.what() + ")");
  }
  ContinuationLedger ledger = make_continuation_ledger(
      is_mzk ? "mzk" : "zk", level0, cfg.ledger_c0, cfg.ledger_d,
      is_mzk ? cfg.ledger_alpha : cfg.ledger_theta, cfg.ledger_C, sigma0,
      cfg.ledger_T_values, cfg.gevrey_s);
  write_text(dir + "ledger.json", ledger.to_json() + "\n");
  man.files.push_back("ledger.json");

  BoundCurve zk_curve{BoundKind::ZK_minus4_eps, cfg.ledger_C,
                      1.0 / cfg.ledger_theta - 4.0, sigma0};
  BoundCurve mzk_curve{BoundKind::mZK_minus4_3, cfg.ledger_C, 0.0, sigma0};

  std::ostringstream csv;
  csv << "zk-radius v1\n";
  csv << "T,sigma_hat,bound_zk,bound_mzk,sigma_ledger\n";
  csv.precision(17);
  std::vector<std::pair<double, double>> pts;

  DiagnosticHook hook = [&](const SpectralField2D& F, const StepReport&) {
    const double T = F.time_tag;
    if (T <= 0.0) return;
    const double sh = estimate_radius(F).sigma_hat;
    const double sl =
        is_mzk ? condition2_sigma_mzk(T, ledger.delta, level0,
                                      cfg.ledger_alpha, cfg.ledger_C)
               : condition2_sigma(T, ledger.delta, level0, cfg.ledger_theta,
                                  cfg.ledger_C);
    csv << T << ',' << sh << ',' << bound_curve_eval(zk_curve, T) << ','
        << bound_curve_eval(mzk_curve, T) << ',' << sl << "\n";
    if (sh > 0.0) pts.emplace_back(T, sh);
  };

  int status = 0;
  try {
    evolve(u0, cfg.equation, cfg.integrator, {hook});
    man.status = "complete";
  } catch (const BlowUpError& e) {
    std::cout << "radius-track: blow-up at t=" << e.t_last_good << "\n";
    man.status = "blowup";
    status = 1;
  }

  if (pts.size() >= 4) {
    DecayFit fit = fit_decay_exponent(pts);
    csv << "# fit exponent=" << fit.exponent
        << " prefactor=" << fit.prefactor << " r2=" << fit.r_squared << "\n";
    std::cout << "radius-track: fitted decay exponent " << fit.exponent
              << " (r2=" << fit.r_squared << ")\n";
  } else {
    csv << "# fit skipped: fewer than 4 usable points\n";
  }
  write_text(dir + "radius.csv", csv.str());
  man.files.push_back("radius.csv");
  man.finished_at = timestamp_utc();
  man.write_atomic(dir + "manifest.json");
  return status;
}

int run_probe(const RunConfig& cfg, const std::string& which, bool force) {
  static const std::vector<std::string> known = {
      "scalar",     "bilinear",           "trilinear",
      "commutator", "almost_conservation", "strichartz"};
  if (std::find(known.begin(), known.end(), which) == known.end())
    throw ConfigError("unknown probe '" + which +
                      "' (expected scalar, bilinear, trilinear, commutator, "
                      "almost_conservation, or strichartz)");

  prepare_output_dir(cfg.output_dir, force);
  const std::string dir = cfg.output_dir + "/";
  RunManifest man;
  man.config_hash = cfg.config_hash();
  man.started_at = timestamp_utc();

  const ProbeParams& p = cfg.probes;
  std::vector<ProbeReport> reports;
  json extra;

  if (which == "scalar") {
    reports.push_back(exp_minus_one_check(p.theta, p.trials, p.seed));
    reports.push_back(
        min_exp_inequality_check(p.theta, p.sigma, p.trials, p.seed));
    reports.push_back(min_kernel_bound_check(p.trials, p.seed));
  } else if (which == "bilinear") {
    reports.push_back(bilinear_probe(p));
  } else if (which == "trilinear") {
    ProbeParams q = p;
    if (q.s < 0.25) q.s = 0.25;
    reports.push_back(trilinear_probe(q));
  } else if (which == "commutator") {
    Grid2D g(64, 64, 32 * kPi, 32 * kPi);
    reports.push_back(commutator_scaling_probe(CommutatorKind::F, p, g));
    reports.push_back(commutator_scaling_probe(CommutatorKind::G, p, g));
  } else if (which == "almost_conservation") {
    AlmostConservationConfig ac;
    ac.seed = p.seed;
    const bool is_mzk = cfg.equation.k == 2;
    reports.push_back(almost_conservation_probe(
        is_mzk ? ConservedKind::E : ConservedKind::M, ac, p.sigma_list,
        (is_mzk ? p.alpha : p.theta) - 0.05));
  } else {  // strichartz
    Grid2D g = Grid2D::unchecked(16, 16, 2 * kPi, 2 * kPi);
    StrichartzReport sr = strichartz_QL_probe(
        4.0, std::min(p.trials, 20), p.seed, g, 128, 4.0);
    extra["p"] = sr.p;
    extra["q"] = sr.q;
    extra["levels"] = sr.levels;
    extra["max_ratio_per_level"] = sr.max_ratio_per_level;
    extra["max_ratio"] = sr.max_ratio;
    extra["stability_factor"] = sr.stability_factor;
    ProbeReport rep;
    rep.name = "strichartz_QL";
    rep.samples = std::min(p.trials, 20) * long(sr.levels.size());
    rep.max_ratio = sr.max_ratio;
    rep.stability_factor = sr.stability_factor;
    rep.stability_flag = sr.stability_factor > 4.0;
    rep.passed = std::isfinite(sr.max_ratio) && sr.max_ratio > 0.0;
    reports.push_back(rep);
  }

  bool all_passed = true;
  json jreports = json::array();
  for (const auto& rep : reports) {
    all_passed = all_passed && rep.passed;
    jreports.push_back(json::parse(rep.to_json()));
  }
  json doc;
  doc["probe"] = which;
  doc["seed"] = p.seed;
  doc["trials"] = p.trials;
  doc["reports"] = jreports;
  if (!extra.is_null()) doc["detail"] = extra;
  doc["passed"] = all_passed;
  write_text(dir + "probe_" + which + ".json", doc.dump(2) + "\n");
  man.files.push_back("probe_" + which + ".json");
  write_ratio_histogram(dir + "probe_" + which + "_ratios.csv", reports);
  if (fs::exists(dir + "probe_" + which + "_ratios.csv"))
    man.files.push_back("probe_" + which + "_ratios.csv");

  for (const auto& rep : reports)
    std::cout << "probe " << rep.name << ": "
              << (rep.passed ? "pass" : "FAIL")
              << " (max_ratio=" << rep.max_ratio
              << ", violations=" << rep.violation_count << ")\n";

  man.status = all_passed ? "complete" : "failed";
  man.finished_at = timestamp_utc();
  man.write_atomic(dir + "manifest.json");
  return all_passed ? 0 : 1;
}

int run_sweep(const RunConfig& cfg, const std::string& axis,
              const std::vector<std::string>& values, bool force) {
  if (values.empty()) throw ConfigError("sweep: no values given");
  prepare_output_dir(cfg.output_dir, force);
  const std::string dir = cfg.output_dir + "/";

  RunManifest man;
  man.config_hash = cfg.config_hash();
  man.started_at = timestamp_utc();

  struct Row {
    std::string value;
    std::string status;
    SimulateSummary sum;
  };
  std::vector<std::future<Row>> futs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    futs.push_back(std::async(std::launch::async, [&, i]() {
      Row row;
      row.value = values[i];
      try {
        RunConfig sub = config_with_value(cfg, axis, values[i]);
        sub = config_with_value(sub, "output.dir",
                                dir + "run_" + std::to_string(i));
        row.sum = simulate_run(sub, force);
        row.status = row.sum.ok ? "complete" : "blowup";
      } catch (const std::exception& e) {
        row.status = "failed";
        row.sum.error = e.what();
      }
      return row;
    }));
  }

  std::ostringstream csv;
  csv << "zk-sweep v1\n";
  csv << "index,axis,value,status,t_final,final_mass,final_sigma_hat\n";
  int failures = 0;
  for (std::size_t i = 0; i < futs.size(); ++i) {
    Row row = futs[i].get();
    csv << i << ',' << axis << ',' << row.value << ',' << row.status;
    if (row.status == "complete") {
      csv << ',' << fmt(row.sum.t_final) << ',' << fmt(row.sum.mass_final)
          << ',' << fmt(row.sum.sigma_hat_final) << "\n";
    } else {
      ++failures;
      csv << ",,,\n";
      std::cout << "sweep " << axis << "=" << row.value << ": " << row.status
                << " (" << row.sum.error << ")\n";
    }
    man.files.push_back("run_" + std::to_string(i) + "/");
  }
  if (failures > 0) csv << "# " << failures << " run(s) failed\n";
  write_text(dir + "sweep.csv", csv.str());
  man.files.push_back("sweep.csv");
  man.status = failures == 0 ? "complete" : "partial";
  man.finished_at = timestamp_utc();
  man.write_atomic(dir + "manifest.json");
  std::cout << "sweep: " << (values.size() - failures) << "/" << values.size()
            << " runs complete\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace zk
