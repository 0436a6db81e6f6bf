#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsv/solvers/config.hpp"

namespace nsv {

// Bad or missing configuration; the message carries "<source>:<line>:" when
// the problem can be attributed to a line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ScenarioKind { shear, taylor_green, two_mode, ansatz_custom, random_solenoidal };

const char* to_string(ScenarioKind k);

struct Scenario {
  ScenarioKind kind = ScenarioKind::taylor_green;
  std::uint64_t seed = 0;
  int max_mode = 4;        // random_solenoidal
  int wavenumber = 1;      // shear
  double inject_inflow = 0.0;  // bounded box, verify only

  std::array<int, 3> ansatz_direction{1, 0, 0};
  std::array<int, 3> ansatz_wave{0, 1, 0};
  std::vector<double> ansatz_amplitudes{1.0};
  std::vector<double> ansatz_phases{0.0};

  bool periodic = true;
  int dims = 2;
  int cells = 32;
  double length = 0.0;  // 0 selects the scenario default

  std::string forcing_shape = "none";
  double forcing_amplitude = 0.0;
  double forcing_decay = 1.0;

  std::string boundary_datum;  // empty selects the scenario default
  double boundary_decay = 2.0;

  int sample_every = 1;
};

struct OutputOptions {
  bool snapshots = true;
  int confirm_cells = 0;  // uniqueness rerun resolution, 0 for none
};

struct RunPlan {
  std::string source;
  Scenario scenario;
  SolverConfig solver;
  OutputOptions output;
  nlohmann::json echo;  // every key as given, sorted
};

// Flat `section.key = value` lines with `#` comments. Unknown or repeated
// keys, malformed values and out-of-range numbers raise ConfigError naming
// the key and its line.
RunPlan parse_config_text(const std::string& text, const std::string& source = "<config>");
RunPlan parse_config(const std::filesystem::path& path);

}  // namespace nsv
