#include "nsv/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nsv {

namespace {

const std::set<std::string> kKeys = {
    "scenario.name",      "scenario.seed",         "scenario.max_mode",
    "scenario.wavenumber", "scenario.inject_inflow", "ansatz.direction",
    "ansatz.wave",        "ansatz.amplitudes",     "ansatz.phases",
    "grid.domain",        "grid.dims",             "grid.n",
    "grid.length",        "fluid.viscosity",       "forcing.shape",
    "forcing.amplitude",  "forcing.decay_exponent", "boundary.datum",
    "boundary.decay_exponent", "time.dt",          "time.t_end",
    "time.sample_every",  "solver.integrator",     "solver.dealias",
    "solver.cfl_guard",   "output.snapshots",      "uniqueness.confirm_cells",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  Reader(std::string source, std::map<std::string, Entry> entries)
      : source_(std::move(source)), entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": " + key + " " + what);
    throw ConfigError(source_ + ":" + std::to_string(it->second.line) + ": " + key + " " + what);
  }

  const std::string& raw(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
    return it->second.value;
  }

  double real(const std::string& key) const {
    double x = 0.0;
    if (!parse_number(raw(key), x)) fail(key, "expects a real number, got '" + raw(key) + "'");
    return x;
  }
  double real(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }

  long long integer(const std::string& key) const {
    long long x = 0;
    if (!parse_number(raw(key), x)) fail(key, "expects an integer, got '" + raw(key) + "'");
    return x;
  }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::uint64_t uint64(const std::string& key) const {
    std::uint64_t x = 0;
    if (!parse_number(raw(key), x)) {
      fail(key, "expects an unsigned 64-bit integer, got '" + raw(key) + "'");
    }
    return x;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    if (v == "true") return true;
    if (v == "false") return false;
    fail(key, "expects true or false, got '" + v + "'");
  }

  std::string choice(const std::string& key, const std::vector<std::string>& options,
                     const std::string& fallback) const {
    if (!has(key)) return fallback;
    const std::string& v = raw(key);
    for (const auto& o : options) {
      if (o == v) return v;
    }
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    fail(key, "must be one of {" + list + "}, got '" + v + "'");
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& w : split_words(raw(key))) {
      double x = 0.0;
      if (!parse_number(w, x)) fail(key, "expects real numbers, got '" + w + "'");
      out.push_back(x);
    }
    if (out.empty()) fail(key, "expects at least one value");
    return out;
  }

  std::array<int, 3> int3(const std::string& key) const {
    const auto words = split_words(raw(key));
    std::array<int, 3> out{0, 0, 0};
    if (words.size() < 2 || words.size() > 3) fail(key, "expects 2 or 3 integers");
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!parse_number(words[i], out[i])) fail(key, "expects integers, got '" + words[i] + "'");
    }
    return out;
  }

  nlohmann::json echo() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, e] : entries_) j[k] = e.value;
    return j;
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

ScenarioKind parse_kind(const std::string& s) {
  if (s == "shear") return ScenarioKind::shear;
  if (s == "taylor_green") return ScenarioKind::taylor_green;
  if (s == "two_mode") return ScenarioKind::two_mode;
  if (s == "ansatz_custom") return ScenarioKind::ansatz_custom;
  return ScenarioKind::random_solenoidal;
}

}  // namespace

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::shear: return "shear";
    case ScenarioKind::taylor_green: return "taylor_green";
    case ScenarioKind::two_mode: return "two_mode";
    case ScenarioKind::ansatz_custom: return "ansatz_custom";
    case ScenarioKind::random_solenoidal: return "random_solenoidal";
  }
  return "?";
}

RunPlan parse_config_text(const std::string& text, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    if (!kKeys.count(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + key + " has no value");
    const auto [it, fresh] = entries.emplace(key, Entry{value, number});
    if (!fresh) {
      throw ConfigError(where + "duplicate key '" + key + "' (first set on line " +
                        std::to_string(it->second.line) + ")");
    }
  }

  const Reader r(source, std::move(entries));
  RunPlan plan;
  plan.source = source;
  plan.echo = r.echo();
  Scenario& s = plan.scenario;

  s.kind = parse_kind(r.choice(
      "scenario.name", {"shear", "taylor_green", "two_mode", "ansatz_custom", "random_solenoidal"},
      r.raw("scenario.name")));

  s.periodic = r.choice("grid.domain", {"periodic", "box"}, "periodic") == "periodic";
  const long long dims = r.integer("grid.dims", 2);
  if (dims != 2 && dims != 3) r.fail("grid.dims", "must be 2 or 3");
  s.dims = static_cast<int>(dims);
  const long long n = r.integer("grid.n");
  if (n < 8 || n > 4096) r.fail("grid.n", "must lie in [8, 4096]");
  if (s.periodic && !is_power_of_two(static_cast<int>(n))) {
    r.fail("grid.n", "must be a power of two on a periodic grid");
  }
  s.cells = static_cast<int>(n);
  s.length = r.real("grid.length", 0.0);
  if (r.has("grid.length") && !(s.length > 0.0)) r.fail("grid.length", "must be > 0");

  if (!s.periodic && (s.kind == ScenarioKind::two_mode || s.kind == ScenarioKind::ansatz_custom ||
                      s.kind == ScenarioKind::random_solenoidal)) {
    r.fail("scenario.name", std::string("'") + to_string(s.kind) +
                                "' requires grid.domain = periodic");
  }

  if (s.kind == ScenarioKind::random_solenoidal) {
    s.seed = r.uint64("scenario.seed");
    const long long m = r.integer("scenario.max_mode", 4);
    if (m < 1 || 2 * m >= s.cells / 2) r.fail("scenario.max_mode", "must lie in [1, n/4)");
    s.max_mode = static_cast<int>(m);
  } else {
    for (const char* k : {"scenario.seed", "scenario.max_mode"}) {
      if (r.has(k)) r.fail(k, "only applies to scenario.name = random_solenoidal");
    }
  }
  if (r.has("scenario.wavenumber")) {
    if (s.kind != ScenarioKind::shear) r.fail("scenario.wavenumber", "only applies to shear");
    const long long k = r.integer("scenario.wavenumber");
    if (k < 1 || 2 * k >= s.cells) r.fail("scenario.wavenumber", "must lie in [1, n/2)");
    s.wavenumber = static_cast<int>(k);
  }
  if (r.has("scenario.inject_inflow")) {
    if (s.periodic) r.fail("scenario.inject_inflow", "requires grid.domain = box");
    s.inject_inflow = r.real("scenario.inject_inflow");
    if (!(s.inject_inflow > 0.0)) r.fail("scenario.inject_inflow", "must be > 0");
  }

  const bool ansatz = s.kind == ScenarioKind::ansatz_custom;
  for (const char* k : {"ansatz.direction", "ansatz.wave", "ansatz.amplitudes", "ansatz.phases"}) {
    if (r.has(k) && !ansatz) r.fail(k, "only applies to scenario.name = ansatz_custom");
  }
  if (ansatz) {
    s.ansatz_direction = r.has("ansatz.direction") ? r.int3("ansatz.direction") : s.ansatz_direction;
    s.ansatz_wave = r.has("ansatz.wave") ? r.int3("ansatz.wave") : s.ansatz_wave;
    if (s.dims == 2 && (s.ansatz_direction[2] != 0 || s.ansatz_wave[2] != 0)) {
      r.fail(r.has("ansatz.wave") ? "ansatz.wave" : "ansatz.direction",
             "needs a zero third entry on a 2D grid");
    }
    long long dot = 0, uu = 0, qq = 0;
    for (int d = 0; d < 3; ++d) {
      dot += static_cast<long long>(s.ansatz_direction[d]) * s.ansatz_wave[d];
      uu += static_cast<long long>(s.ansatz_direction[d]) * s.ansatz_direction[d];
      qq += static_cast<long long>(s.ansatz_wave[d]) * s.ansatz_wave[d];
    }
    if (uu == 0) r.fail("ansatz.direction", "must be nonzero");
    if (qq == 0) r.fail("ansatz.wave", "must be nonzero");
    if (dot != 0) r.fail("ansatz.wave", "must be orthogonal to ansatz.direction");
    if (r.has("ansatz.amplitudes")) s.ansatz_amplitudes = r.reals("ansatz.amplitudes");
    s.ansatz_phases = r.has("ansatz.phases") ? r.reals("ansatz.phases")
                                             : std::vector<double>(s.ansatz_amplitudes.size(), 0.0);
    if (s.ansatz_phases.size() != s.ansatz_amplitudes.size()) {
      r.fail("ansatz.phases", "must have as many entries as ansatz.amplitudes");
    }
  }

  SolverConfig& c = plan.solver;
  c.viscosity = r.real("fluid.viscosity");
  if (!(c.viscosity > 0.0)) r.fail("fluid.viscosity", "must be > 0 (got " + r.raw("fluid.viscosity") + ")");
  c.dt = r.real("time.dt");
  if (!(c.dt > 0.0)) r.fail("time.dt", "must be > 0");
  c.t_end = r.real("time.t_end");
  if (!(c.t_end >= c.dt)) r.fail("time.t_end", "must be >= time.dt");
  const double ratio = c.t_end / c.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    r.fail("time.t_end", "must be an integer multiple of time.dt");
  }
  const long long every = r.integer("time.sample_every", 1);
  if (every < 1) r.fail("time.sample_every", "must be >= 1");
  s.sample_every = static_cast<int>(every);

  const std::string integ = r.choice("solver.integrator", {"rk4", "imex_cn", "explicit_euler"}, "rk4");
  c.integrator = integ == "rk4" ? Integrator::rk4
                 : integ == "imex_cn" ? Integrator::imex_cn
                                      : Integrator::explicit_euler;
  c.dealias = r.choice("solver.dealias", {"two_thirds", "none"}, "two_thirds") == "none"
                  ? DealiasPolicy::none
                  : DealiasPolicy::two_thirds;
  c.cfl_guard = r.real("solver.cfl_guard", 0.5);
  if (!(c.cfl_guard > 0.0 && c.cfl_guard <= 1.0)) r.fail("solver.cfl_guard", "must lie in (0, 1]");

  s.forcing_shape = r.choice("forcing.shape", {"none", "shear"}, "none");
  s.forcing_amplitude = r.real("forcing.amplitude", s.forcing_shape == "none" ? 0.0 : 1.0);
  if (s.forcing_shape == "none" && s.forcing_amplitude != 0.0) {
    r.fail("forcing.amplitude", "needs forcing.shape other than none");
  }
  s.forcing_decay = r.real("forcing.decay_exponent", 1.0);
  if (!(s.forcing_decay >= 0.0)) r.fail("forcing.decay_exponent", "must be >= 0");

  for (const char* k : {"boundary.datum", "boundary.decay_exponent"}) {
    if (r.has(k) && s.periodic) r.fail(k, "requires grid.domain = box");
  }
  if (!s.periodic) {
    s.boundary_datum = r.choice("boundary.datum", {"no_slip", "exact", "decaying"}, "");
    s.boundary_decay = r.real("boundary.decay_exponent", 2.0);
    if (!(s.boundary_decay >= 0.0)) r.fail("boundary.decay_exponent", "must be >= 0");
  }

  plan.output.snapshots = r.boolean("output.snapshots", true);
  const long long confirm = r.integer("uniqueness.confirm_cells", 0);
  if (confirm != 0) {
    if (confirm < 4 || confirm > 4096 || (s.periodic && !is_power_of_two(static_cast<int>(confirm)))) {
      r.fail("uniqueness.confirm_cells", "must be 0 or a valid grid.n");
    }
  }
  plan.output.confirm_cells = static_cast<int>(confirm);
  return plan;
}

RunPlan parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

}  // namespace nsv
