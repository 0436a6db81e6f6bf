#include "nsv/claims/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nsv/solvers/trajectory.hpp"

namespace nsv {

const char* const kReportPreamble =
    "Discrete evaluation on smooth grid functions. Solutions that are merely square "
    "integrable are outside what a grid can represent, so every verdict below speaks about "
    "the discretized fields at the stated resolution only.";

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

double scaled_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

IdentityReport evaluate_identity(std::string name, double lhs, double rhs, double tolerance,
                                 std::string notes) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = scaled_residual(lhs, rhs);
  r.tolerance = tolerance;
  r.verdict = r.residual <= tolerance ? Verdict::holds : Verdict::fails;
  r.notes = std::move(notes);
  return r;
}

IdentityReport not_applicable(std::string name, std::string notes) {
  IdentityReport r;
  r.name = std::move(name);
  r.verdict = Verdict::not_applicable;
  r.notes = std::move(notes);
  return r;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["identity"] = r.name;
  j["t"] = r.t;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  j["extras"] = nlohmann::json::object();
  for (const auto& [k, v] : r.extras) j["extras"][k] = v;
  return j;
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_report_json(const std::filesystem::path& path, const std::vector<IdentityReport>& reports,
                       const nlohmann::json& config) {
  nlohmann::json doc;
  doc["preamble"] = kReportPreamble;
  doc["config"] = config;
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) doc["reports"].push_back(to_json(r));
  write_atomically(path, doc.dump(2) + "\n");
}

void write_report_csv(const std::filesystem::path& path, const std::vector<IdentityReport>& reports) {
  std::ostringstream os;
  os << "t,identity,lhs,rhs,residual,tolerance,verdict\n";
  for (const auto& r : reports) {
    os << format_real(r.t) << ',' << r.name << ',' << format_real(r.lhs) << ','
       << format_real(r.rhs) << ',' << format_real(r.residual) << ',' << format_real(r.tolerance)
       << ',' << to_string(r.verdict) << '\n';
  }
  write_atomically(path, os.str());
}

}  // namespace nsv
