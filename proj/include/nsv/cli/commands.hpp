#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "nsv/cli/config.hpp"

namespace nsv {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAbort = 2, kExitIdentityFailure = 3 };

// Runs the full solver, writes diagnostics.csv, snapshots/ and manifest.json.
int cmd_run(const RunPlan& plan, const std::filesystem::path& out);

// Runs each plan (up to `jobs` at a time) and writes identity reports. A
// single plan writes into `out`, several into one subdirectory each.
int cmd_verify(const std::vector<RunPlan>& plans, const std::filesystem::path& out, int jobs = 1);

// Reduced versus full solver experiment; exit 0 whenever both complete.
int cmd_uniqueness(const RunPlan& plan, const std::filesystem::path& out);

// Identity reports for one stored field, or for a pair (v, w).
int cmd_identities(const std::filesystem::path& field,
                   const std::optional<std::filesystem::path>& second,
                   const std::filesystem::path& out);

// Column order of diagnostics.csv.
extern const char* const kDiagnosticsHeader;

}  // namespace nsv
