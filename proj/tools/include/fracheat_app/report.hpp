#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fracheat::app {

enum class Relation { AtMost, AtLeast, Within, Info };

// provenance: "DERIVED" (independent oracle or run output), "PAPER" (statement of the
// source), "TRIVIAL" (holds by construction)
struct Measurement {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::AtMost;
  std::string provenance = "DERIVED";
  double target = 0.0;  // Within: |value - target| <= tolerance

  bool ok() const;
};

struct Check {
  Check() = default;
  explicit Check(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  std::string note;
  std::vector<Measurement> values;

  // appends and folds into pass
  Check& expect(Measurement m);
  Check& info(const std::string& name, double value, const std::string& provenance = "DERIVED");
};

struct Report {
  std::string kind;
  std::vector<Check> checks;
  double runtime = 0.0;  // seconds; kept out of the JSON so reruns compare equal

  bool passed() const;
  nlohmann::json to_json() const;
};

Measurement at_most(std::string name, double value, double tol, std::string prov = "DERIVED");
Measurement at_least(std::string name, double value, double tol, std::string prov = "DERIVED");
Measurement within(std::string name, double value, double target, double tol, std::string prov = "DERIVED");

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
// one "PASS|FAIL name" line per check plus the failing measurements
std::string summary_lines(const Report& r);

}  // namespace fracheat::app
