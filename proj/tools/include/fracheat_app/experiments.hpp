#pragma once

#include <functional>
#include <string>

#include "fracheat_app/config.hpp"
#include "fracheat_app/report.hpp"

namespace fracheat::app {

// Each runner writes its plot data plus report.json into cfg.out.
// Column schemas are listed in tools/config_schema.md.
Report run_kernel(const ExperimentConfig& cfg);
Report run_evolve(const ExperimentConfig& cfg);
Report run_dirac_limit(const ExperimentConfig& cfg);
Report run_selfsim(const ExperimentConfig& cfg);
// progress fires once per finished criterion
Report run_verify(const ExperimentConfig& cfg, const std::function<void(const std::string&)>& progress = {});

Report run_experiment(const ExperimentConfig& cfg, const std::function<void(const std::string&)>& progress = {});

}  // namespace fracheat::app
