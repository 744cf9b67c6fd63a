#pragma once

// Run configuration (sectioned key-value text), checkpoint files, and run
// manifests.

#include <map>
#include <string>
#include <vector>

#include "zk/analyticity.hpp"
#include "zk/dynamics.hpp"
#include "zk/integrator.hpp"
#include "zk/probes.hpp"

namespace zk {

struct InitialData {
  std::string kind = "gaussian";  // gaussian | soliton | random | file
  double amplitude = 1.0;
  double width = 4.0;
  double K = 0.5;
  double x0 = 0.0;
  std::uint64_t seed = 1;
  int band = 8;
  std::string path;
};

struct RunConfig {
  EquationSpec equation{1, 1, EquationForm::Symmetrized};
  Grid2D grid{256, 256, 32 * 3.14159265358979323846,
              32 * 3.14159265358979323846};
  IntegratorConfig integrator;
  std::vector<double> gevrey_sigma_list = {0.001, 0.01, 0.1};
  double gevrey_s = 0.0;
  ProbeParams probes;
  // Ledger constants are explicit inputs; no canonical defaults exist.
  double ledger_C = 1.0;
  double ledger_c0 = 1.0;
  double ledger_d = 24.0;
  double ledger_theta = 0.249;
  double ledger_alpha = 0.75;
  double ledger_sigma0 = 1.0;
  std::vector<double> ledger_T_values = {2, 4, 8, 16, 32};
  InitialData initial_data;
  std::string output_dir = "out";

  // Raw key-value view (defaults filled); canonical for hashing/serialize.
  std::map<std::string, std::string> raw;

  std::string to_text() const;
  std::uint64_t config_hash() const;
};

// Parse sectioned key-value text; unknown keys, type mismatches, and
// invariant violations raise ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// New config with one scalar key (as "section.key") replaced; revalidates.
RunConfig config_with_value(const RunConfig& cfg, const std::string& key,
                            const std::string& value);

// --- checkpoint files: versioned mode-table dump + JSON sidecar ---

void save_checkpoint(const std::string& basename, const SpectralField2D& F,
                     const EquationSpec& spec);
SpectralField2D load_checkpoint(const std::string& basename,
                                EquationSpec* spec_out = nullptr);

// --- run manifest ---

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string code_version = "zklab 1.0";
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> files;
  std::string status = "incomplete";

  void write_atomic(const std::string& path) const;
};

std::string timestamp_utc();

}  // namespace zk
