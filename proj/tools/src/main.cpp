#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <fracheat/evolve.hpp>
#include <fracheat/field_io.hpp>
#include <fracheat/kernel.hpp>
#include <fracheat/params.hpp>
#include <fracheat/selfsim.hpp>

#include "fracheat_app/config.hpp"
#include "fracheat_app/experiments.hpp"

namespace {

enum Exit { kPass = 0, kUsage = 1, kFail = 2, kAbort = 3 };

int report_error(const char* name, const std::exception& e, int code) {
  std::cerr << "fracheat: " << name << ": " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fracheat;
  using namespace fracheat::app;

  CLI::App app{"fracheat: fractional heat equation with time-weighted absorption"};
  app.require_subcommand(1);
  std::optional<std::string> config_path, out_dir;
  std::optional<int> workers;
  bool quick = false;
  std::vector<std::string> sets;

  for (Kind k : {Kind::Kernel, Kind::Evolve, Kind::DiracLimit, Kind::Selfsim, Kind::Verify}) {
    auto* sub = app.add_subcommand(kind_name(k));
    sub->add_option("--config", config_path, "config file (key = value)")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);
    sub->add_flag("--quick", quick, "reduced resolutions");
    sub->add_option("--set", sets, "override one key, key=value");
  }
  app.get_subcommand("kernel")->description("kernel profile and closed-form comparison");
  app.get_subcommand("evolve")->description("Dirac-datum evolution with barrier margins");
  app.get_subcommand("dirac-limit")->description("monotone family in k and regime trend");
  app.get_subcommand("selfsim")->description("self-similar continuation and profile residual");
  app.get_subcommand("verify")->description("acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  ExperimentConfig cfg;
  try {
    const Kind kind = parse_kind(app.get_subcommands().front()->get_name());
    if (config_path) {
      cfg = load_config(*config_path);
      if (cfg.kind_set && cfg.kind != kind)
        throw ConfigError(std::string("config kind '") + kind_name(cfg.kind) + "' does not match subcommand", 0, "kind");
    }
    cfg.kind = kind;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value: '" + s + "'");
      apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1), 0);
    }
    if (out_dir) cfg.out = *out_dir;
    if (workers) cfg.workers = *workers;
    if (quick) cfg.quick = true;
    cfg.validate();
  } catch (const ConfigError& e) {
    return report_error("ConfigError", e, kUsage);
  }

  try {
    const auto rep = run_experiment(cfg, [](const std::string& line) { std::cout << line << std::endl; });
    if (cfg.kind == Kind::Verify) {
      for (const auto& c : rep.checks)
        for (const auto& m : c.values)
          if (!m.ok()) std::cout << "    " << c.name << ": " << m.name << " = " << m.value << " [" << m.provenance << "]\n";
    } else {
      std::cout << summary_lines(rep);
    }
    std::printf("%s %s (%.1f s)\n", rep.passed() ? "PASS" : "FAIL", kind_name(cfg.kind), rep.runtime);
    return rep.passed() ? kPass : kFail;
  } catch (const NumericalAbort& e) {
    std::cerr << "fracheat: NumericalAbort at step " << e.step() << ": " << e.what() << '\n';
    return kAbort;
  } catch (const MonotonicityViolation& e) {
    return report_error("MonotonicityViolation", e, kFail);
  } catch (const BoxTooSmall& e) {
    return report_error("BoxTooSmall", e, kUsage);
  } catch (const OutOfBox& e) {
    return report_error("OutOfBox", e, kUsage);
  } catch (const DomainError& e) {
    return report_error("DomainError", e, kUsage);
  } catch (const FieldIoError& e) {
    return report_error("FieldIoError", e, kUsage);
  } catch (const ConfigError& e) {
    return report_error("ConfigError", e, kUsage);
  } catch (const std::exception& e) {
    return report_error("error", e, kUsage);
  }
}
