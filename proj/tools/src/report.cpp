#include "fracheat_app/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracheat::app {

namespace {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::AtMost: return "<=";
    case Relation::AtLeast: return ">=";
    case Relation::Within: return "within";
    case Relation::Info: return "info";
  }
  return "?";
}

// JSON has no NaN/Inf
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool Measurement::ok() const {
  switch (relation) {
    case Relation::AtMost: return value <= tolerance;
    case Relation::AtLeast: return value >= tolerance;
    case Relation::Within: return std::abs(value - target) <= tolerance;
    case Relation::Info: return true;
  }
  return false;
}

Check& Check::expect(Measurement m) {
  if (!m.ok()) pass = false;
  values.push_back(std::move(m));
  return *this;
}

Check& Check::info(const std::string& n, double value, const std::string& provenance) {
  Measurement m;
  m.name = n;
  m.value = value;
  m.relation = Relation::Info;
  m.provenance = provenance;
  values.push_back(std::move(m));
  return *this;
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["passed"] = passed();
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["status"] = c.pass ? "pass" : "fail";
    if (!c.note.empty()) jc["note"] = c.note;
    auto& vals = jc["values"] = nlohmann::json::array();
    for (const auto& m : c.values) {
      nlohmann::json jm;
      jm["name"] = m.name;
      jm["value"] = num(m.value);
      jm["relation"] = relation_name(m.relation);
      if (m.relation != Relation::Info) jm["tolerance"] = num(m.tolerance);
      if (m.relation == Relation::Within) jm["target"] = num(m.target);
      jm["provenance"] = m.provenance;
      jm["ok"] = m.ok();
      vals.push_back(std::move(jm));
    }
    arr.push_back(std::move(jc));
  }
  return j;
}

Measurement at_most(std::string name, double value, double tol, std::string prov) {
  return {std::move(name), value, tol, Relation::AtMost, std::move(prov), 0.0};
}

Measurement at_least(std::string name, double value, double tol, std::string prov) {
  return {std::move(name), value, tol, Relation::AtLeast, std::move(prov), 0.0};
}

Measurement within(std::string name, double value, double target, double tol, std::string prov) {
  return {std::move(name), value, tol, Relation::Within, std::move(prov), target};
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string summary_lines(const Report& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << '\n';
    for (const auto& m : c.values) {
      if (m.ok()) continue;
      os << "    " << m.name << " = " << fmt(m.value) << ' ' << relation_name(m.relation) << ' ';
      if (m.relation == Relation::Within) os << fmt(m.target) << " +- ";
      os << fmt(m.tolerance) << " [" << m.provenance << "]\n";
    }
  }
  return os.str();
}

}  // namespace fracheat::app
