#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fracheat_app/config.hpp"
#include "fracheat_app/report.hpp"

using namespace fracheat::app;

TEST_CASE("config parse") {
  std::istringstream in(
      "# comment\n"
      "kind = dirac-limit\n"
      "alpha = 0.75   # inline\n"
      "dim = 2\n"
      "k_list = 1, 2, 4\n"
      "tolerances.margin = 1e-4\n"
      "general_absorption = yes\n");
  const auto cfg = parse_config(in, "t.cfg");
  CHECK(cfg.kind == Kind::DiracLimit);
  CHECK(cfg.kind_set);
  CHECK(cfg.params.alpha == 0.75);
  CHECK(cfg.params.dim == 2);
  CHECK(cfg.k_list == std::vector<double>{1, 2, 4});
  CHECK(cfg.tol.margin == 1e-4);
  CHECK(cfg.general_absorption);
}

TEST_CASE("config errors carry line and key") {
  auto fails = [](const std::string& text, int line, const std::string& key) {
    std::istringstream in(text);
    try {
      parse_config(in, "t.cfg");
    } catch (const ConfigError& e) {
      CHECK(e.line == line);
      CHECK(e.key == key);
      return;
    }
    FAIL("no error for: " << text);
  };
  fails("alpha = 0.5\nbogus = 1\n", 2, "bogus");
  fails("alpha = 0.5\nalpha = 0.6\n", 2, "alpha");
  fails("\n\nM = 12.5\n", 3, "M");
  fails("kind = fly\n", 1, "kind");
  fails("k_list = 1, x\n", 1, "k_list");
  fails("novalue\n", 1, "");
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.out = std::filesystem::temp_directory_path() / "fracheat_cfg_test";
  CHECK_NOTHROW(cfg.validate());
  cfg.M = 1000;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.M = 256;
  cfg.tol.residual = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.tol.residual = 1e-2;
  cfg.checkpoints = {5.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.checkpoints = {1.0};
  cfg.params.alpha = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  std::filesystem::remove_all(cfg.out);
}

TEST_CASE("report json") {
  Report r;
  r.kind = "evolve";
  Check c("margins");
  c.expect(at_most("m", 1e-5, 1e-3, "PAPER"));
  c.expect(within("w", 3.9, 4.0, 0.5));
  c.info("nan value", NAN);
  r.checks.push_back(c);
  r.runtime = 12.0;
  auto j = r.to_json();
  CHECK(j["passed"] == true);
  CHECK(j["checks"][0]["values"][0]["tolerance"] == 1e-3);
  CHECK(j["checks"][0]["values"][0]["provenance"] == "PAPER");
  CHECK(j["checks"][0]["values"][2]["value"] == "nan");
  CHECK_FALSE(j.contains("runtime"));
  Check bad("bad");
  bad.expect(at_least("x", 0.1, 0.2));
  r.checks.push_back(bad);
  CHECK_FALSE(r.passed());
  CHECK(summary_lines(r).find("FAIL bad") != std::string::npos);
}
