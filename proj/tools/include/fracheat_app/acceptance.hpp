#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracheat_app/report.hpp"

namespace fracheat::app {

struct AcceptanceOptions {
  bool quick = false;
  int workers = 1;
  std::uint64_t seed = 12345;  // random fields of the composition check
  std::optional<std::filesystem::path> cache_dir;
  // plot data of the individual criteria goes here when set
  std::optional<std::filesystem::path> out;
};

struct Criterion {
  int id;
  const char* title;
  Check (*run)(const AcceptanceOptions&);
};

const std::vector<Criterion>& acceptance_criteria();

// runs the selected ids (all when empty); on_done fires after each criterion
Report run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& ids = {},
                      const std::function<void(const Check&, double seconds)>& on_done = {});

}  // namespace fracheat::app
