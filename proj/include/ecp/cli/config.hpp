#pragma once

// Run configuration for the command-line tool.
//
// Sources, lowest to highest precedence: built-in defaults, a named preset,
// a config file, command-line flags. Every key is known in advance; anything
// else is rejected.
//
// Config file grammar (one entry per line):
//
//   line    := blank | comment | entry
//   comment := '#' any-text
//   entry   := key ws* '=' ws* value ws* [comment]
//   value   := number | word | number (',' number)*
//
// Keys are case-sensitive and may appear at most once per file.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecp/errors.hpp"
#include "ecp/io/table.hpp"
#include "ecp/lattice.hpp"

namespace ecp::cli {

enum class Mode {
  force_sweep,
  hopping_sweep,
  detuning_sweep,
  decay_profile,
  thermal_sweep,
  oracle_check,
  dispersion_dump,
};

enum class Format { csv, json };

inline constexpr std::pair<Mode, std::string_view> mode_names[] = {
    {Mode::force_sweep, "force-sweep"},       {Mode::hopping_sweep, "hopping-sweep"},
    {Mode::detuning_sweep, "detuning-sweep"}, {Mode::decay_profile, "decay-profile"},
    {Mode::thermal_sweep, "thermal-sweep"},   {Mode::oracle_check, "oracle-check"},
    {Mode::dispersion_dump, "dispersion-dump"},
};

inline std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : mode_names)
    if (m == mode) return name;
  return "?";
}

enum class ValueKind { number, integer, number_list, integer_list, word };

struct KeySpec {
  std::string_view name;
  ValueKind kind;
  std::optional<std::string_view> default_value;
  std::string_view help;
};

// clang-format off
inline constexpr KeySpec known_keys[] = {
    {"mode",         ValueKind::word,         std::nullopt,  "force-sweep | hopping-sweep | detuning-sweep | decay-profile | thermal-sweep | oracle-check | dispersion-dump"},
    {"preset",       ValueKind::word,         std::nullopt,  "fig2 | fig3 | fig4 | fig5"},
    {"format",       ValueKind::word,         "csv",         "csv | json"},
    {"output",       ValueKind::word,         std::nullopt,  "output file; default $ECP_OUTPUT_DIR/<mode>.<format>, else stdout"},
    {"omega",        ValueKind::number,       "2",           "chain site energy"},
    {"J",            ValueKind::number_list,  "0.3",         "hopping strength(s), >= 0"},
    {"delta",        ValueKind::number_list,  "-1",          "detuning(s) eps0 - omega"},
    {"eps0",         ValueKind::number,       std::nullopt,  "impurity energy; alternative to delta"},
    {"lambda",       ValueKind::number,       "0.01",        "impurity-chain coupling"},
    {"N",            ValueKind::integer,      "400",         "ring half-length (2N+1 sites)"},
    {"R",            ValueKind::integer,      "1",           "fixed separation for hopping/detuning sweeps"},
    {"rmin",         ValueKind::integer,      "1",           "first separation of R sweeps"},
    {"rmax",         ValueKind::integer,      "10",          "last separation of R sweeps"},
    {"jmin",         ValueKind::number,       "0",           "hopping-sweep start"},
    {"jmax",         ValueKind::number,       "0.45",        "hopping-sweep end"},
    {"jsteps",       ValueKind::integer,      "50",          "hopping-sweep point count"},
    {"dmin",         ValueKind::number,       "-4",          "detuning-sweep start"},
    {"dmax",         ValueKind::number,       "-1.25",       "detuning-sweep end"},
    {"dsteps",       ValueKind::integer,      "56",          "detuning-sweep point count"},
    {"amin",         ValueKind::number,       "-0.99",       "decay-profile start (band parameter a)"},
    {"amax",         ValueKind::number,       "-0.01",       "decay-profile end"},
    {"asteps",       ValueKind::integer,      "99",          "decay-profile point count"},
    {"temperatures", ValueKind::number_list,  "0,0.1,1",     "thermal-sweep temperatures, ascending"},
    {"nlist",        ValueKind::integer_list, std::nullopt,  "thermal-sweep ring half-lengths (required for thermal-sweep unless N is given)"},
    {"matrix_dump",  ValueKind::word,         std::nullopt,  "oracle-check: write the first ED matrix as triplets to this path"},
};
// clang-format on

inline const KeySpec* find_key(std::string_view name) {
  for (const auto& k : known_keys)
    if (k.name == name) return &k;
  return nullptr;
}

struct Preset {
  std::string_view name;
  std::vector<std::pair<std::string_view, std::string_view>> values;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig2",
       {{"mode", "force-sweep"}, {"lambda", "0.01"}, {"delta", "-1"}, {"J", "0.3,0.4"},
        {"rmin", "1"}, {"rmax", "10"}, {"R", "1"}, {"jmin", "0"}, {"jmax", "0.45"}, {"jsteps", "50"}}},
      {"fig3",
       {{"mode", "force-sweep"}, {"lambda", "0.01"}, {"J", "0.6"}, {"delta", "-2,-3"},
        {"rmin", "1"}, {"rmax", "10"}, {"R", "1"}, {"dmin", "-4"}, {"dmax", "-1.25"}, {"dsteps", "56"}}},
      {"fig4",
       {{"mode", "decay-profile"}, {"delta", "-1"}, {"amin", "-0.99"}, {"amax", "-0.01"}, {"asteps", "99"}}},
      // Chain length is left open; the preset sweeps three.
      {"fig5",
       {{"mode", "thermal-sweep"}, {"lambda", "0.1"}, {"delta", "-1"}, {"J", "0.3"},
        {"temperatures", "0,0.1,1"}, {"nlist", "100,200,400"}, {"rmin", "1"}, {"rmax", "10"}}},
  };
  return table;
}

enum class Source { default_value, preset, file, flag };

inline std::string_view to_string(Source s) {
  switch (s) {
    case Source::default_value: return "default";
    case Source::preset: return "preset";
    case Source::file: return "file";
    case Source::flag: return "flag";
  }
  return "?";
}

struct RawValue {
  std::string text;
  Source source = Source::default_value;
  /// Where the value came from, for error messages ("run.cfg:3", "--J", ...).
  std::string origin;
};

struct ProvenanceEntry {
  std::string key;
  std::string value;
  Source source;
};

struct RunConfig {
  Mode mode = Mode::force_sweep;
  Format format = Format::csv;
  std::optional<std::string> output;
  std::optional<std::string> preset;
  std::optional<std::string> matrix_dump;

  double omega = 2.0;
  std::vector<double> J;
  std::vector<double> delta;
  double lambda = 0.01;
  int N = 400;
  bool N_explicit = false;
  int R = 1;
  int rmin = 1;
  int rmax = 10;
  double jmin = 0.0, jmax = 0.45;
  int jsteps = 50;
  double dmin = -4.0, dmax = -1.25;
  int dsteps = 56;
  double amin = -0.99, amax = -0.01;
  int asteps = 99;
  std::vector<double> temperatures;
  std::vector<int> nlist;

  /// Every key that has a value, in known_keys order.
  std::vector<ProvenanceEntry> provenance;
  /// Non-fatal regime warnings (e.g. weak-coupling ratio above 0.1).
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& item : io::split(text, ',')) out.push_back(trim(item));
  return out;
}

inline double as_number(const RawValue& v, std::string_view key) {
  try {
    return io::parse_double(trim(v.text));
  } catch (const config_error&) {
    throw config_error(v.origin + ": key '" + std::string(key) + "' expects a number, got '" + v.text + "'");
  }
}

inline int as_integer(const RawValue& v, std::string_view key) {
  try {
    const auto value = io::parse_integer(trim(v.text));
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
      throw config_error("out of range");
    return static_cast<int>(value);
  } catch (const config_error&) {
    throw config_error(v.origin + ": key '" + std::string(key) + "' expects an integer, got '" + v.text + "'");
  }
}

template <typename T, typename Parse>
std::vector<T> as_list(const RawValue& v, std::string_view key, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(v.text)) {
    if (item.empty())
      throw config_error(v.origin + ": key '" + std::string(key) + "' has an empty list item");
    out.push_back(parse(RawValue{item, v.source, v.origin}, key));
  }
  return out;
}

inline std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  if (steps == 1) return {lo};
  for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  return out;
}

inline void check_symmetric(const RunConfig& cfg, double J, double delta, int N, int R,
                            std::vector<std::string>& warnings) {
  const auto sys = SymmetricSystem::from_detuning(cfg.omega, J, delta, cfg.lambda, N, std::min(R, N));
  const auto report = validate_regime(sys.chain(), sys.impurities());
  if (report.weak_coupling == check_level::failure) throw regime_violation(report.describe());
  if (report.has_warnings()) {
    std::ostringstream w;
    w << "weak-coupling ratio " << report.coupling_ratio << " exceeds " << weak_coupling_warning_ratio
      << " at J = " << J << ", delta = " << delta;
    if (std::find(warnings.begin(), warnings.end(), w.str()) == warnings.end()) warnings.push_back(w.str());
  }
}

}  // namespace detail

using RawMap = std::map<std::string, RawValue, std::less<>>;

/// Parses config-file text into raw key/value pairs. `origin` names the file in errors.
inline RawMap parse_config_text(std::string_view text, std::string_view origin) {
  RawMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw config_error(where + ": expected 'key = value'");
    const auto key = detail::trim(std::string_view(body).substr(0, eq));
    const auto value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw config_error(where + ": missing key");
    if (!find_key(key)) throw config_error(where + ": unknown key '" + key + "'");
    if (value.empty()) throw config_error(where + ": key '" + key + "' has no value");
    if (out.count(key)) throw config_error(where + ": duplicate key '" + key + "'");
    out[key] = RawValue{value, Source::file, where};
  }
  return out;
}

/// Resolves raw values from every source into a validated RunConfig.
/// Throws config_error for malformed or missing values and regime_violation
/// (or a subclass) when the physics lies outside the supported regime.
inline RunConfig resolve_config(const RawMap& file_values,
                                const std::vector<std::pair<std::string, std::string>>& flags) {
  RawMap flag_values;
  for (const auto& [key, value] : flags) {
    if (!find_key(key)) throw config_error("--" + key + ": unknown key");
    flag_values[key] = RawValue{value, Source::flag, "--" + key};
  }

  RawMap merged;
  for (const auto& k : known_keys)
    if (k.default_value)
      merged[std::string(k.name)] = RawValue{std::string(*k.default_value), Source::default_value, "default"};

  std::optional<RawValue> preset_choice;
  if (auto it = file_values.find("preset"); it != file_values.end()) preset_choice = it->second;
  if (auto it = flag_values.find("preset"); it != flag_values.end()) preset_choice = it->second;
  if (preset_choice) {
    const Preset* chosen = nullptr;
    for (const auto& p : presets())
      if (p.name == detail::trim(preset_choice->text)) chosen = &p;
    if (!chosen) throw config_error(preset_choice->origin + ": unknown preset '" + preset_choice->text + "'");
    for (const auto& [key, value] : chosen->values)
      merged[std::string(key)] =
          RawValue{std::string(value), Source::preset, "preset " + std::string(chosen->name)};
  }
  for (const auto& [key, value] : file_values) merged[key] = value;
  for (const auto& [key, value] : flag_values) merged[key] = value;

  RunConfig cfg;
  for (const auto& k : known_keys)
    if (auto it = merged.find(k.name); it != merged.end())
      cfg.provenance.push_back({std::string(k.name), detail::trim(it->second.text), it->second.source});

  auto get = [&](std::string_view key) -> const RawValue* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };
  auto number = [&](std::string_view key) { return detail::as_number(*get(key), key); };
  auto integer = [&](std::string_view key) { return detail::as_integer(*get(key), key); };

  const RawValue* mode = get("mode");
  if (!mode) throw config_error("no mode given (use --mode or a preset)");
  {
    const auto name = detail::trim(mode->text);
    bool found = false;
    for (const auto& [m, n] : mode_names)
      if (n == name) {
        cfg.mode = m;
        found = true;
      }
    if (!found) throw config_error(mode->origin + ": unknown mode '" + name + "'");
  }
  {
    const auto fmt = detail::trim(get("format")->text);
    if (fmt == "csv")
      cfg.format = Format::csv;
    else if (fmt == "json")
      cfg.format = Format::json;
    else
      throw config_error(get("format")->origin + ": unknown format '" + fmt + "'");
  }
  if (auto v = get("output")) cfg.output = detail::trim(v->text);
  if (preset_choice) cfg.preset = detail::trim(preset_choice->text);
  if (auto v = get("matrix_dump")) cfg.matrix_dump = detail::trim(v->text);

  cfg.omega = number("omega");
  cfg.J = detail::as_list<double>(*get("J"), "J", detail::as_number);
  cfg.lambda = number("lambda");
  cfg.N = integer("N");
  cfg.N_explicit = get("N")->source != Source::default_value;
  cfg.R = integer("R");
  cfg.rmin = integer("rmin");
  cfg.rmax = integer("rmax");
  cfg.jmin = number("jmin");
  cfg.jmax = number("jmax");
  cfg.jsteps = integer("jsteps");
  cfg.dmin = number("dmin");
  cfg.dmax = number("dmax");
  cfg.dsteps = integer("dsteps");
  cfg.amin = number("amin");
  cfg.amax = number("amax");
  cfg.asteps = integer("asteps");
  cfg.temperatures = detail::as_list<double>(*get("temperatures"), "temperatures", detail::as_number);
  if (auto v = get("nlist")) cfg.nlist = detail::as_list<int>(*v, "nlist", detail::as_integer);

  if (auto eps0 = get("eps0")) {
    if (get("delta")->source != Source::default_value)
      throw config_error(eps0->origin + ": give either eps0 or delta, not both");
    cfg.delta = {detail::as_number(*eps0, "eps0") - cfg.omega};
  } else {
    cfg.delta = detail::as_list<double>(*get("delta"), "delta", detail::as_number);
  }

  // Type-level invariants are configuration errors.
  for (double J : cfg.J) ChainParams{cfg.omega, J, std::max(cfg.N, 1)}.validate();
  if (cfg.N < 1) throw config_error(get("N")->origin + ": N must be >= 1");
  for (int n : cfg.nlist)
    if (n < 1) throw config_error(get("nlist")->origin + ": every N must be >= 1");
  if (cfg.R < 1) throw config_error(get("R")->origin + ": R must be >= 1");
  if (cfg.rmin < 1 || cfg.rmin > cfg.rmax)
    throw config_error("need 1 <= rmin <= rmax, got rmin = " + std::to_string(cfg.rmin) +
                       ", rmax = " + std::to_string(cfg.rmax));
  if (cfg.jsteps < 1 || cfg.dsteps < 1 || cfg.asteps < 1)
    throw config_error("jsteps, dsteps and asteps must be >= 1");
  for (std::size_t i = 0; i < cfg.temperatures.size(); ++i) {
    if (!(cfg.temperatures[i] >= 0.0)) throw config_error(get("temperatures")->origin + ": temperatures must be >= 0");
    if (i > 0 && cfg.temperatures[i] < cfg.temperatures[i - 1])
      throw config_error(get("temperatures")->origin + ": temperatures must be ascending");
  }

  // Physics regime per mode.
  switch (cfg.mode) {
    case Mode::force_sweep:
      if (cfg.rmax > cfg.N - 1) throw config_error("force-sweep needs rmax <= N - 1");
      for (double J : cfg.J)
        for (double d : cfg.delta) detail::check_symmetric(cfg, J, d, cfg.N, cfg.rmin, cfg.warnings);
      break;
    case Mode::hopping_sweep:
      if (cfg.jmin < 0.0 || cfg.jmin > cfg.jmax) throw config_error("need 0 <= jmin <= jmax");
      for (double d : cfg.delta)
        for (double J : {cfg.jmin, cfg.jmax}) detail::check_symmetric(cfg, J, d, cfg.N, cfg.R, cfg.warnings);
      break;
    case Mode::detuning_sweep:
      if (cfg.dmin > cfg.dmax) throw config_error("need dmin <= dmax");
      for (double J : cfg.J)
        for (double d : {cfg.dmin, cfg.dmax}) detail::check_symmetric(cfg, J, d, cfg.N, cfg.R, cfg.warnings);
      break;
    case Mode::decay_profile:
      if (!(cfg.amin > -1.0) || cfg.amin > cfg.amax || cfg.amax > 0.0)
        throw regime_violation("decay-profile needs -1 < amin <= amax <= 0");
      for (double d : cfg.delta)
        if (!(d < 0.0)) throw regime_violation("decay-profile needs delta < 0");
      break;
    case Mode::thermal_sweep: {
      if (cfg.nlist.empty()) {
        if (!cfg.N_explicit)
          throw config_error("thermal-sweep needs the ring size: give nlist or N explicitly");
        cfg.nlist = {cfg.N};
      }
      if (cfg.temperatures.empty()) throw config_error("thermal-sweep needs at least one temperature");
      const int n_min = *std::min_element(cfg.nlist.begin(), cfg.nlist.end());
      if (cfg.rmax + 1 > n_min) throw config_error("thermal-sweep needs rmax + 1 <= every N");
      for (double J : cfg.J)
        for (double d : cfg.delta) detail::check_symmetric(cfg, J, d, n_min, cfg.rmin, cfg.warnings);
      break;
    }
    case Mode::oracle_check:
      if (4 * cfg.rmax > cfg.N) throw config_error("oracle-check needs rmax <= N/4");
      for (double J : cfg.J) {
        if (J == 0.0) throw regime_violation("oracle-check quadrature needs J > 0");
        for (double d : cfg.delta) detail::check_symmetric(cfg, J, d, cfg.N, cfg.rmin, cfg.warnings);
      }
      break;
    case Mode::dispersion_dump:
      break;
  }
  return cfg;
}

inline RunConfig load_config(const std::optional<std::filesystem::path>& file,
                             const std::vector<std::pair<std::string, std::string>>& flags) {
  RawMap file_values;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw config_error("cannot read config file '" + file->string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    file_values = parse_config_text(text.str(), file->string());
  }
  return resolve_config(file_values, flags);
}

}  // namespace ecp::cli
