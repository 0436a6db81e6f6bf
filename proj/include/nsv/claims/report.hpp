#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nsv {

enum class Verdict { holds, fails, not_applicable };

const char* to_string(Verdict v);

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs| / max(1, |lhs|, |rhs|)
  double tolerance = 0.0;
  Verdict verdict = Verdict::holds;
  std::string notes;
  double t = 0.0;  // sample time the report refers to
  std::map<std::string, double> extras;
};

double scaled_residual(double lhs, double rhs);

// Residual and verdict filled in from lhs, rhs and tolerance.
IdentityReport evaluate_identity(std::string name, double lhs, double rhs, double tolerance,
                                 std::string notes = {});
IdentityReport not_applicable(std::string name, std::string notes);

nlohmann::json to_json(const IdentityReport& r);

// Text written at the top of every report document.
extern const char* const kReportPreamble;

// JSON document {preamble, config, reports: [...]} written atomically.
void write_report_json(const std::filesystem::path& path, const std::vector<IdentityReport>& reports,
                       const nlohmann::json& config);

// One row per report: t,identity,lhs,rhs,residual,tolerance,verdict.
void write_report_csv(const std::filesystem::path& path, const std::vector<IdentityReport>& reports);

// Writes text to a sibling temporary file and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace nsv
