#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <fracheat/params.hpp>

namespace fracheat::app {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : std::runtime_error(what), line(line), key(std::move(key)) {}
  int line;
  std::string key;
};

enum class Kind { Kernel, Evolve, DiracLimit, Selfsim, Verify };

const char* kind_name(Kind k);
Kind parse_kind(const std::string& s);

struct Tolerances {
  double kernel_inner = 1e-6;
  double kernel_outer = 1e-4;
  double margin = 1e-3;       // barrier violation
  double negativity = 1e-10;  // relative undershoot before abort
  double barrier = 1e-8;      // w-barrier minimum, relative to max w
  double residual = 5e-2;     // self-similar residual
};

// Keys are listed in tools/config_schema.md.
struct ExperimentConfig {
  Kind kind = Kind::Evolve;
  bool kind_set = false;  // kind given explicitly in the file
  ModelParams params{0.5, 0.0, 1.4, 1};

  double L = 200.0;
  int M = 4096;
  double t0 = 0.1;
  double T = 1.0;
  int K = 200;
  double gamma = 0.0;  // 0 picks the default grading for beta

  std::vector<double> k_list{1.0};
  std::vector<double> checkpoints{1.0};
  Tolerances tol;

  std::string split = "absorption-outer";
  bool general_absorption = false;
  int rk_substeps = 16;
  double absorption_coeff = 1.0;

  // kernel
  double r_max = 100.0;

  // selfsim / continuation
  double K0 = 0.1;
  double doublings_per_cycle = 0.0;  // 0 uses zoom
  double zoom = 2.0;
  int cycles = 20;
  int steps_per_cycle = 40;
  double fit_r1 = 3.0;
  double fit_r2 = 12.0;

  std::filesystem::path out = "fracheat-out";
  std::uint64_t seed = 1;
  int workers = 1;
  bool quick = false;

  void validate() const;
  double mesh_gamma() const;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);
// single key = value, as from a file line
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value, int line = 0);

}  // namespace fracheat::app
