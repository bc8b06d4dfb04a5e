#include "fracheat_app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fracheat/evolve.hpp>

namespace fracheat::app {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Kernel: return "kernel";
    case Kind::Evolve: return "evolve";
    case Kind::DiracLimit: return "dirac-limit";
    case Kind::Selfsim: return "selfsim";
    case Kind::Verify: return "verify";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  for (Kind k : {Kind::Kernel, Kind::Evolve, Kind::DiracLimit, Kind::Selfsim, Kind::Verify})
    if (s == kind_name(k)) return k;
  throw ConfigError("unknown experiment kind '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, int line) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw ConfigError("key '" + key + "': not a number: '" + v + "'", line, key);
  return x;
}

long to_long(const std::string& v, const std::string& key, int line) {
  long x = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("key '" + key + "': not an integer: '" + v + "'", line, key);
  return x;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError("key '" + key + "': not a boolean: '" + v + "'", line, key);
}

std::vector<double> to_list(const std::string& v, const std::string& key, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(item, key, line));
  }
  if (out.empty()) throw ConfigError("key '" + key + "': empty list", line, key);
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& k, auto member) {
      t[k] = [member](ExperimentConfig& c, const std::string& key, const std::string& v, int line) {
        c.*member = to_double(v, key, line);
      };
    };
    auto integer = [&t](const std::string& k, auto member) {
      t[k] = [member](ExperimentConfig& c, const std::string& key, const std::string& v, int line) {
        c.*member = static_cast<int>(to_long(v, key, line));
      };
    };
    auto tol = [&t](const std::string& k, double Tolerances::*member) {
      t["tolerances." + k] = [member](ExperimentConfig& c, const std::string& key, const std::string& v, int line) {
        c.tol.*member = to_double(v, key, line);
      };
    };
    t["kind"] = [](ExperimentConfig& c, const std::string& key, const std::string& v, int line) {
      try {
        c.kind = parse_kind(v);
        c.kind_set = true;
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line, key);
      }
    };
    t["alpha"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) { c.params.alpha = to_double(v, k, l); };
    t["beta"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) { c.params.beta = to_double(v, k, l); };
    t["p"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) { c.params.p = to_double(v, k, l); };
    t["dim"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) {
      c.params.dim = static_cast<int>(to_long(v, k, l));
    };
    num("L", &ExperimentConfig::L);
    integer("M", &ExperimentConfig::M);
    num("t0", &ExperimentConfig::t0);
    num("T", &ExperimentConfig::T);
    integer("K", &ExperimentConfig::K);
    num("gamma", &ExperimentConfig::gamma);
    t["k_list"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) { c.k_list = to_list(v, k, l); };
    t["checkpoints"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) {
      c.checkpoints = to_list(v, k, l);
    };
    tol("kernel_inner", &Tolerances::kernel_inner);
    tol("kernel_outer", &Tolerances::kernel_outer);
    tol("margin", &Tolerances::margin);
    tol("negativity", &Tolerances::negativity);
    tol("barrier", &Tolerances::barrier);
    tol("residual", &Tolerances::residual);
    t["split"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) {
      if (v != "absorption-outer" && v != "diffusion-outer")
        throw ConfigError("key 'split': expected absorption-outer or diffusion-outer", l, k);
      c.split = v;
    };
    t["general_absorption"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) {
      c.general_absorption = to_bool(v, k, l);
    };
    integer("rk_substeps", &ExperimentConfig::rk_substeps);
    num("absorption_coeff", &ExperimentConfig::absorption_coeff);
    num("r_max", &ExperimentConfig::r_max);
    num("K0", &ExperimentConfig::K0);
    num("zoom", &ExperimentConfig::zoom);
    num("doublings_per_cycle", &ExperimentConfig::doublings_per_cycle);
    integer("cycles", &ExperimentConfig::cycles);
    integer("steps_per_cycle", &ExperimentConfig::steps_per_cycle);
    num("fit_r1", &ExperimentConfig::fit_r1);
    num("fit_r2", &ExperimentConfig::fit_r2);
    t["out"] = [](ExperimentConfig& c, const std::string&, const std::string& v, int) { c.out = v; };
    t["seed"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) {
      const long s = to_long(v, k, l);
      if (s < 0) throw ConfigError("key 'seed': must be nonnegative", l, k);
      c.seed = static_cast<std::uint64_t>(s);
    };
    integer("workers", &ExperimentConfig::workers);
    t["quick"] = [](ExperimentConfig& c, const std::string& k, const std::string& v, int l) { c.quick = to_bool(v, k, l); };
    return t;
  }();
  return table;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value, int line) {
  const auto& t = setters();
  const auto it = t.find(key);
  if (it == t.end()) throw ConfigError("unknown key '" + key + "'", line, key);
  it->second(cfg, key, value, line);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source + ":" + std::to_string(line) + ": expected key = value", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line) + ": empty key", line);
    if (!seen.insert(key).second)
      throw ConfigError(source + ":" + std::to_string(line) + ": duplicate key '" + key + "'", line, key);
    try {
      apply_setting(cfg, key, value, line);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line) + ": " + e.what(), line, key);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.string());
}

double ExperimentConfig::mesh_gamma() const {
  return gamma > 0.0 ? gamma : TimeMesh::default_gamma(params.beta);
}

void ExperimentConfig::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0)) throw ConfigError(std::string("key '") + key + "' must be positive", 0, key);
  };
  positive(L, "L");
  positive(T, "T");
  positive(t0, "t0");
  positive(r_max, "r_max");
  if (M < 64 || (M & (M - 1)) != 0) throw ConfigError("key 'M' must be a power of two >= 64", 0, "M");
  if (!(t0 < T)) throw ConfigError("t0 must be below T", 0, "t0");
  if (K < 1) throw ConfigError("key 'K' must be at least 1", 0, "K");
  if (gamma < 0.0) throw ConfigError("key 'gamma' must be >= 1 or 0 for the default", 0, "gamma");
  if (gamma > 0.0 && gamma < 1.0) throw ConfigError("key 'gamma' must be >= 1", 0, "gamma");
  positive(tol.kernel_inner, "tolerances.kernel_inner");
  positive(tol.kernel_outer, "tolerances.kernel_outer");
  positive(tol.margin, "tolerances.margin");
  positive(tol.negativity, "tolerances.negativity");
  positive(tol.barrier, "tolerances.barrier");
  positive(tol.residual, "tolerances.residual");
  for (double k : k_list) positive(k, "k_list");
  for (double t : checkpoints)
    if (!(t > t0 && t <= T)) throw ConfigError("checkpoints must lie in (t0, T]", 0, "checkpoints");
  if (absorption_coeff < 0.0) throw ConfigError("key 'absorption_coeff' must be nonnegative", 0, "absorption_coeff");
  if (rk_substeps < 1) throw ConfigError("key 'rk_substeps' must be positive", 0, "rk_substeps");
  positive(K0, "K0");
  if (!(zoom > 1.0)) throw ConfigError("key 'zoom' must exceed 1", 0, "zoom");
  if (doublings_per_cycle < 0.0) throw ConfigError("key 'doublings_per_cycle' must be nonnegative", 0, "doublings_per_cycle");
  if (cycles < 1) throw ConfigError("key 'cycles' must be positive", 0, "cycles");
  if (steps_per_cycle < 1) throw ConfigError("key 'steps_per_cycle' must be positive", 0, "steps_per_cycle");
  positive(fit_r1, "fit_r1");
  positive(fit_r2, "fit_r2");
  if (workers < 1) throw ConfigError("key 'workers' must be positive", 0, "workers");
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw ConfigError("output directory '" + out.string() + "' is not writable: " + ec.message(), 0, "out");
}

}  // namespace fracheat::app
