#include "zk/config.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "zk/errors.hpp"

namespace zk {
namespace {

using json = nlohmann::json;

// Every key the parser accepts, with its default (as text). Anything not
// listed here is a hard error so typos surface immediately.
const std::vector<std::pair<std::string, std::string>>& key_table() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"equation.k", "1"},
      {"equation.mu", "1"},
      {"equation.form", "symmetrized"},
      {"grid.nx", "256"},
      {"grid.ny", "256"},
      {"grid.Lx", "100.53096491487338"},
      {"grid.Ly", "100.53096491487338"},
      {"integrator.dt", "0.001"},
      {"integrator.t_end", "1.0"},
      {"integrator.safety", "0.5"},
      {"integrator.diag_stride", "10"},
      {"gevrey.sigma_list", "0.001,0.01,0.1"},
      {"gevrey.s", "0"},
      {"probes.trials", "200"},
      {"probes.seed", "1"},
      {"probes.band", "16"},
      {"probes.sigma_list", "0.01,0.05,0.1"},
      {"probes.theta", "0.249"},
      {"probes.alpha", "0.75"},
      {"probes.s", "0"},
      {"probes.sigma", "0.05"},
      {"ledger.C", "1"},
      {"ledger.c0", "1"},
      {"ledger.d", "24"},
      {"ledger.theta", "0.249"},
      {"ledger.alpha", "0.75"},
      {"ledger.sigma0", "1"},
      {"ledger.T_values", "2,4,8,16,32"},
      {"initial_data.kind", "gaussian"},
      {"initial_data.amplitude", "1.0"},
      {"initial_data.width", "4.0"},
      {"initial_data.K", "0.5"},
      {"initial_data.x0", "0.0"},
      {"initial_data.seed", "1"},
      {"initial_data.band", "8"},
      {"initial_data.path", ""},
      {"output.dir", "out"},
  };
  return table;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": expected a comma-separated list");
  return out;
}

RunConfig build_from_raw(std::map<std::string, std::string> raw) {
  // Fill defaults for anything not given.
  for (const auto& [key, def] : key_table())
    if (!raw.count(key)) raw[key] = def;

  RunConfig cfg;
  auto geti = [&](const char* k) { return parse_int(k, raw.at(k)); };
  auto getd = [&](const char* k) { return parse_double(k, raw.at(k)); };
  auto getl = [&](const char* k) { return parse_list(k, raw.at(k)); };

  long k = geti("equation.k");
  if (k != 1 && k != 2) throw ConfigError("equation.k: must be 1 or 2");
  long mu = geti("equation.mu");
  if (mu != -1 && mu != 0 && mu != 1)
    throw ConfigError("equation.mu: must be -1, 0, or +1");
  const std::string& form = raw.at("equation.form");
  EquationForm f;
  if (form == "symmetrized")
    f = EquationForm::Symmetrized;
  else if (form == "original")
    f = EquationForm::Original;
  else
    throw ConfigError("equation.form: must be 'symmetrized' or 'original'");
  cfg.equation = EquationSpec(static_cast<int>(k), static_cast<int>(mu), f);

  try {
    cfg.grid = Grid2D(static_cast<int>(geti("grid.nx")),
                      static_cast<int>(geti("grid.ny")), getd("grid.Lx"),
                      getd("grid.Ly"));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  cfg.integrator.dt = getd("integrator.dt");
  cfg.integrator.t_end = getd("integrator.t_end");
  cfg.integrator.safety = getd("integrator.safety");
  cfg.integrator.diag_stride =
      static_cast<int>(geti("integrator.diag_stride"));
  try {
    cfg.integrator.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }

  cfg.gevrey_sigma_list = getl("gevrey.sigma_list");
  for (double s : cfg.gevrey_sigma_list)
    if (s < 0) throw ConfigError("gevrey.sigma_list: entries must be >= 0");
  cfg.gevrey_s = getd("gevrey.s");

  cfg.probes.trials = static_cast<int>(geti("probes.trials"));
  cfg.probes.seed = static_cast<std::uint64_t>(geti("probes.seed"));
  cfg.probes.band = static_cast<int>(geti("probes.band"));
  cfg.probes.sigma_list = getl("probes.sigma_list");
  cfg.probes.theta = getd("probes.theta");
  cfg.probes.alpha = getd("probes.alpha");
  cfg.probes.s = getd("probes.s");
  cfg.probes.sigma = getd("probes.sigma");
  try {
    cfg.probes.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("probes: ") + e.what());
  }

  cfg.ledger_C = getd("ledger.C");
  cfg.ledger_c0 = getd("ledger.c0");
  cfg.ledger_d = getd("ledger.d");
  cfg.ledger_theta = getd("ledger.theta");
  cfg.ledger_alpha = getd("ledger.alpha");
  cfg.ledger_sigma0 = getd("ledger.sigma0");
  cfg.ledger_T_values = getl("ledger.T_values");
  if (cfg.ledger_C <= 0 || cfg.ledger_c0 <= 0 || cfg.ledger_sigma0 <= 0)
    throw ConfigError("ledger: C, c0, sigma0 must be positive");
  if (cfg.ledger_theta <= 0 || cfg.ledger_theta >= 0.25)
    throw ConfigError("ledger.theta: must lie in (0, 1/4)");
  if (cfg.ledger_alpha <= 0 || cfg.ledger_alpha >= 1)
    throw ConfigError("ledger.alpha: must lie in (0, 1)");

  cfg.initial_data.kind = raw.at("initial_data.kind");
  if (cfg.initial_data.kind != "gaussian" &&
      cfg.initial_data.kind != "soliton" &&
      cfg.initial_data.kind != "random" && cfg.initial_data.kind != "file")
    throw ConfigError(
        "initial_data.kind: must be gaussian, soliton, random, or file");
  cfg.initial_data.amplitude = getd("initial_data.amplitude");
  cfg.initial_data.width = getd("initial_data.width");
  if (cfg.initial_data.width <= 0)
    throw ConfigError("initial_data.width: must be positive");
  cfg.initial_data.K = getd("initial_data.K");
  if (cfg.initial_data.K <= 0)
    throw ConfigError("initial_data.K: must be positive");
  cfg.initial_data.x0 = getd("initial_data.x0");
  cfg.initial_data.seed =
      static_cast<std::uint64_t>(geti("initial_data.seed"));
  cfg.initial_data.band = static_cast<int>(geti("initial_data.band"));
  if (cfg.initial_data.band < 1)
    throw ConfigError("initial_data.band: must be >= 1");
  cfg.initial_data.path = raw.at("initial_data.path");
  if (cfg.initial_data.kind == "file" && cfg.initial_data.path.empty())
    throw ConfigError("initial_data.path: required when kind = file");

  cfg.output_dir = raw.at("output.dir");
  if (cfg.output_dir.empty()) throw ConfigError("output.dir: must not be empty");

  cfg.raw = std::move(raw);
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto& table = key_table();
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                        "' appears before any [section]");
    std::string full = section + "." + key;
    bool known = std::any_of(table.begin(), table.end(),
                             [&](const auto& p) { return p.first == full; });
    if (!known)
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        full + "'");
    if (raw.count(full))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        full + "'");
    raw[full] = value;
  }
  return build_from_raw(std::move(raw));
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig config_with_value(const RunConfig& cfg, const std::string& key,
                            const std::string& value) {
  const auto& table = key_table();
  bool known = std::any_of(table.begin(), table.end(),
                           [&](const auto& p) { return p.first == key; });
  if (!known) throw ConfigError("unknown key '" + key + "'");
  auto raw = cfg.raw;
  raw[key] = value;
  return build_from_raw(std::move(raw));
}

std::string RunConfig::to_text() const {
  // Emit in the fixed key-table order, grouped by section.
  std::ostringstream out;
  std::string section;
  for (const auto& [key, def] : key_table()) {
    std::size_t dot = key.find('.');
    std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << "\n";
      out << "[" << sec << "]\n";
      section = sec;
    }
    auto it = raw.find(key);
    out << key.substr(dot + 1) << " = " << (it != raw.end() ? it->second : def)
        << "\n";
  }
  return out.str();
}

std::uint64_t RunConfig::config_hash() const {
  // FNV-1a over the canonical serialization.
  std::string text = to_text();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// --- checkpoints ---

void save_checkpoint(const std::string& basename, const SpectralField2D& F,
                     const EquationSpec& spec) {
  const Grid2D& g = F.grid;
  {
    std::ofstream out(basename + ".modes");
    if (!out) throw IntegrityError("cannot write '" + basename + ".modes'");
    out << "zk-checkpoint v1\n";
    out.precision(17);
    for (int my = -g.ny / 2; my < g.ny / 2; ++my)
      for (int mx = -g.nx / 2; mx < g.nx / 2; ++mx) {
        std::complex<double> c = F.mode(mx, my);
        out << mx << " " << my << " " << c.real() << " " << c.imag() << "\n";
      }
    if (!out) throw IntegrityError("write failed for '" + basename + ".modes'");
  }
  json side;
  side["format"] = "zk-checkpoint";
  side["version"] = 1;
  side["grid"] = {{"nx", g.nx}, {"ny", g.ny}, {"Lx", g.Lx}, {"Ly", g.Ly}};
  side["equation"] = {{"k", spec.k},
                      {"mu", spec.mu},
                      {"form", spec.form == EquationForm::Symmetrized
                                   ? "symmetrized"
                                   : "original"}};
  side["t"] = F.time_tag;
  std::ofstream js(basename + ".json");
  if (!js) throw IntegrityError("cannot write '" + basename + ".json'");
  js << side.dump(2) << "\n";
}

SpectralField2D load_checkpoint(const std::string& basename,
                                EquationSpec* spec_out) {
  std::ifstream js(basename + ".json");
  if (!js) throw IntegrityError("cannot open '" + basename + ".json'");
  json side = json::parse(js, nullptr, /*allow_exceptions=*/true);
  if (side.value("format", "") != "zk-checkpoint" || side.value("version", 0) != 1)
    throw IntegrityError("'" + basename + ".json': unrecognized checkpoint format");
  Grid2D g(side["grid"]["nx"], side["grid"]["ny"], side["grid"]["Lx"],
           side["grid"]["Ly"]);
  if (spec_out) {
    std::string form = side["equation"]["form"];
    *spec_out = EquationSpec(side["equation"]["k"], side["equation"]["mu"],
                             form == "symmetrized" ? EquationForm::Symmetrized
                                                   : EquationForm::Original);
  }
  SpectralField2D F(g);
  F.time_tag = side["t"];

  std::ifstream in(basename + ".modes");
  if (!in) throw IntegrityError("cannot open '" + basename + ".modes'");
  std::string header;
  std::getline(in, header);
  if (header != "zk-checkpoint v1")
    throw IntegrityError("'" + basename + ".modes': bad header '" + header + "'");
  long count = 0;
  int mx, my;
  double re, im;
  while (in >> mx >> my >> re >> im) {
    if (mx < -g.nx / 2 || mx >= g.nx / 2 || my < -g.ny / 2 || my >= g.ny / 2)
      throw IntegrityError("'" + basename + ".modes': mode (" +
                           std::to_string(mx) + "," + std::to_string(my) +
                           ") outside grid");
    F.mode(mx, my) = {re, im};
    ++count;
  }
  if (count != static_cast<long>(g.size()))
    throw IntegrityError("'" + basename + ".modes': expected " +
                         std::to_string(g.size()) + " modes, got " +
                         std::to_string(count));
  return F;
}

// --- manifest ---

std::string timestamp_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::write_atomic(const std::string& path) const {
  json j;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(config_hash));
  j["config_hash"] = hex;
  j["code_version"] = code_version;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["files"] = files;
  j["status"] = status;
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw IntegrityError("cannot write '" + tmp + "'");
    out << j.dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IntegrityError("rename '" + tmp + "' -> '" + path +
                         "' failed: " + std::strerror(errno));
}

}  // namespace zk
