#pragma once

// Command implementations behind the CLI: simulate, radius-track, probe,
// sweep. Each owns an output directory and writes a manifest.

#include <string>
#include <vector>

#include "zk/config.hpp"

namespace zk {

// Creates dir (recursively). An existing non-empty dir without force is an
// error, so runs never silently clobber earlier output.
void prepare_output_dir(const std::string& dir, bool force);

SpectralField2D build_initial_data(const RunConfig& cfg);

// 6 K^2 sech^2(K (x - x0)) line soliton (original-form ZK, k=1, mu=+1),
// speed 4 K^2, periodized over the box.
SpectralField2D soliton_field(const Grid2D& grid, double K, double x0);

// Relative L^2 distance between u and the exact soliton at time t after
// recentering via the cross-correlation peak (parabolic sub-grid refine).
double soliton_shape_error(const SpectralField2D& u, double K, double x0,
                           double t);

struct SimulateSummary {
  bool ok = false;
  double t_final = 0.0;
  double mass_final = 0.0;
  double sigma_hat_final = 0.0;
  double shape_error = -1.0;  // soliton runs only
  std::string error;
};

SimulateSummary simulate_run(const RunConfig& cfg, bool force);

int run_simulate(const RunConfig& cfg, bool force);
int run_radius_track(const RunConfig& cfg, bool force);
int run_probe(const RunConfig& cfg, const std::string& which, bool force);
int run_sweep(const RunConfig& cfg, const std::string& axis,
              const std::vector<std::string>& values, bool force);

}  // namespace zk
