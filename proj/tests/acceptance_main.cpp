// Acceptance suite: one PASS/FAIL line per criterion.
// usage: fracheat_acceptance [--quick] [--out DIR] [--workers N] [id ...]
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fracheat/kernel.hpp>

#include "fracheat_app/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace fracheat::app;
  CLI::App app{"acceptance criteria"};
  AcceptanceOptions opt;
  std::string out;
  std::vector<int> ids;
  app.add_flag("--quick", opt.quick, "reduced resolutions");
  app.add_option("--workers", opt.workers)->check(CLI::PositiveNumber);
  app.add_option("--out", out, "plot data and verify.json");
  app.add_option("ids", ids, "criteria to run (default all)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);
  opt.cache_dir = fracheat::default_cache_dir();
  if (!out.empty()) opt.out = out;

  const auto rep = run_acceptance(opt, ids, [](const Check& c, double sec) {
    std::printf("%s %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), sec);
    for (const auto& m : c.values) {
      if (m.relation == Relation::Info) {
        std::printf("    %s = %.6g\n", m.name.c_str(), m.value);
        continue;
      }
      std::printf("    %s %s = %.6g (tol %.3g) [%s]\n", m.ok() ? "ok  " : "BAD ", m.name.c_str(), m.value, m.tolerance,
                  m.provenance.c_str());
    }
    if (!c.note.empty()) std::printf("    note: %s\n", c.note.c_str());
    std::fflush(stdout);
  });
  if (opt.out) write_json(rep.to_json(), *opt.out / "verify.json");
  std::printf("%s acceptance (%.1f s)\n", rep.passed() ? "PASS" : "FAIL", rep.runtime);
  return rep.passed() ? 0 : 2;
}
