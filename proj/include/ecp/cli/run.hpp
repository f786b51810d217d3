#pragma once

// Evaluation of a RunConfig into a result table, and emission of that table.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ecp/casimir.hpp"
#include "ecp/cli/config.hpp"
#include "ecp/errors.hpp"
#include "ecp/io/table.hpp"
#include "ecp/lattice.hpp"
#include "ecp/oracle.hpp"
#include "ecp/parallel.hpp"
#include "ecp/perturbation.hpp"
#include "ecp/thermal.hpp"

namespace ecp::cli {

inline constexpr std::string_view tool_name = "ecp-nanowire";
inline constexpr std::string_view tool_version = "1.0.0";
inline constexpr std::string_view output_dir_env = "ECP_OUTPUT_DIR";

enum exit_code : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_config = 2,
  exit_regime = 3,
  exit_convergence = 4,
};

using Row = std::vector<io::Cell>;

namespace detail {

inline std::int64_t cell_int(int v) { return static_cast<std::int64_t>(v); }

inline SymmetricSystem system_for(const RunConfig& cfg, double J, double delta, int N, int R = 1) {
  return SymmetricSystem::from_detuning(cfg.omega, J, delta, cfg.lambda, N, R);
}

inline std::vector<Row> concat(std::vector<std::vector<Row>> blocks) {
  std::vector<Row> rows;
  for (auto& block : blocks)
    for (auto& row : block) rows.push_back(std::move(row));
  return rows;
}

struct SeriesKey {
  double J;
  double delta;
};

inline std::vector<SeriesKey> series(const RunConfig& cfg) {
  std::vector<SeriesKey> out;
  for (double J : cfg.J)
    for (double d : cfg.delta) out.push_back({J, d});
  return out;
}

inline Row point_row(const SymmetricSystem& sys, int R) {
  const double E = cp_energy(sys, R);
  const double f = ecp_force(sys, R);
  return {sys.chain().J, sys.Delta(), sys.a(), cell_int(R), E, f, std::abs(f), decay_rate(sys.a())};
}

inline void force_sweep(const RunConfig& cfg, io::Table& t) {
  t.columns = {"J", "delta", "lambda", "R", "E_cp", "f", "abs_f"};
  const auto keys = series(cfg);
  t.rows = concat(parallel_map(keys.size(), [&](std::size_t i) {
    const auto sys = system_for(cfg, keys[i].J, keys[i].delta, cfg.N);
    std::vector<Row> rows;
    for (const auto& p : force_curve(sys, cfg.rmin, cfg.rmax).records)
      rows.push_back({keys[i].J, keys[i].delta, cfg.lambda, cell_int(p.R), p.energy, p.force, std::abs(p.force)});
    return rows;
  }));
}

inline void hopping_sweep(const RunConfig& cfg, io::Table& t) {
  t.columns = {"J", "delta", "a", "R", "E_cp", "f", "abs_f", "gamma"};
  const auto Js = linspace(cfg.jmin, cfg.jmax, cfg.jsteps);
  std::vector<SeriesKey> points;
  for (double d : cfg.delta)
    for (double J : Js) points.push_back({J, d});
  t.rows = parallel_map(points.size(), [&](std::size_t i) {
    return point_row(system_for(cfg, points[i].J, points[i].delta, cfg.N, cfg.R), cfg.R);
  });
}

inline void detuning_sweep(const RunConfig& cfg, io::Table& t) {
  t.columns = {"J", "delta", "a", "R", "E_cp", "f", "abs_f", "gamma"};
  const auto deltas = linspace(cfg.dmin, cfg.dmax, cfg.dsteps);
  std::vector<SeriesKey> points;
  for (double J : cfg.J)
    for (double d : deltas) points.push_back({J, d});
  t.rows = parallel_map(points.size(), [&](std::size_t i) {
    return point_row(system_for(cfg, points[i].J, points[i].delta, cfg.N, cfg.R), cfg.R);
  });
}

inline void decay_sweep(const RunConfig& cfg, io::Table& t) {
  t.columns = {"delta", "a", "J", "gamma", "Rc", "amplitude", "b_continuum"};
  const auto as = linspace(cfg.amin, cfg.amax, cfg.asteps);
  for (double d : cfg.delta)
    for (double a : as) {
      const double J = a * d / 2.0;
      const auto sys = system_for(cfg, J, d, cfg.N);
      const auto profile = decay_profile(sys);
      const double gap = sys.chain().band_bottom() - sys.eps0();
      const double b = std::sqrt(gap / J);
      t.rows.push_back({d, a, J, profile.gamma, profile.Rc, profile.amplitude, b});
    }
}

inline void thermal_sweep(const RunConfig& cfg, io::Table& t) {
  t.columns = {"J", "delta", "N", "T", "R", "E_T", "f_T", "abs_f_T"};
  struct Task {
    SeriesKey key;
    int N;
  };
  std::vector<Task> tasks;
  for (const auto& key : series(cfg))
    for (int N : cfg.nlist) tasks.push_back({key, N});

  struct Block {
    std::vector<Row> rows;
    std::vector<std::string> violations;
  };
  auto blocks = parallel_map(tasks.size(), [&](std::size_t i) {
    const auto& task = tasks[i];
    const auto sys = system_for(cfg, task.key.J, task.key.delta, task.N);
    Block block;
    for (double T : cfg.temperatures)
      for (int R = cfg.rmin; R <= cfg.rmax; ++R) {
        const double E = thermal_energy(sys, T, R);
        const double f = thermal_force(sys, T, R);
        block.rows.push_back({task.key.J, task.key.delta, cell_int(task.N), T, cell_int(R), E, f, std::abs(f)});
      }
    for (int R = cfg.rmin; R <= cfg.rmax; ++R) {
      const auto sweep = force_vs_temperature(sys, R, cfg.temperatures);
      for (auto idx : sweep.violations) {
        std::ostringstream msg;
        msg << "|f_T| increases from T = " << cfg.temperatures[idx - 1] << " to T = " << cfg.temperatures[idx]
            << " at J = " << task.key.J << ", delta = " << task.key.delta << ", N = " << task.N << ", R = " << R;
        block.violations.push_back(msg.str());
      }
    }
    return block;
  });
  for (auto& b : blocks) {
    for (auto& r : b.rows) t.rows.push_back(std::move(r));
    for (auto& v : b.violations) t.metadata.push_back({"warning", v});
  }
}

inline constexpr double oracle_quadrature_tolerance = 1e-9;
inline constexpr double oracle_ksum_tolerance = 1e-8;
inline constexpr double oracle_ed_tolerance = 1e-2;
inline constexpr double oracle_overlap_threshold = 0.999;

inline void oracle_check(const RunConfig& cfg, io::Table& t) {
  t.columns = {"J", "delta", "lambda", "N", "R", "check", "reference", "value", "rel_err", "tolerance", "pass"};
  const auto keys = series(cfg);

  if (cfg.matrix_dump && !keys.empty()) {
    const auto sys = system_for(cfg, keys.front().J, keys.front().delta, cfg.N, cfg.rmin);
    std::ofstream out(*cfg.matrix_dump);
    if (!out) throw config_error("cannot write matrix dump '" + *cfg.matrix_dump + "'");
    write_triplets(out, build_matrix(sys.chain(), sys.impurities()));
  }

  const int R_ref = ed_reference_separation(ChainParams{cfg.omega, 0.0, cfg.N});
  auto references = parallel_map(keys.size(), [&](std::size_t i) {
    const auto sys = system_for(cfg, keys[i].J, keys[i].delta, cfg.N, R_ref);
    return exact_diagonalize(build_matrix(sys.chain(), sys.impurities())).ground_energy;
  });

  struct Task {
    std::size_t series;
    int R;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < keys.size(); ++s)
    for (int R = cfg.rmin; R <= cfg.rmax; ++R) tasks.push_back({s, R});

  auto blocks = parallel_map(tasks.size(), [&](std::size_t i) {
    const auto& key = keys[tasks[i].series];
    const int R = tasks[i].R;
    const auto sys = system_for(cfg, key.J, key.delta, cfg.N, R);
    std::vector<Row> rows;
    auto add = [&](std::string_view check, double reference, double value, double rel_err, double tolerance) {
      rows.push_back({key.J, key.delta, cfg.lambda, cell_int(cfg.N), cell_int(R), std::string(check), reference,
                      value, rel_err, tolerance, std::string(rel_err < tolerance ? "pass" : "fail")});
    };
    auto rel = [](double ref, double value) { return std::abs(value - ref) / std::abs(ref); };

    const double closed = cp_energy(sys, R);
    const double quad = cp_energy_quadrature(sys, R);
    add("quadrature_vs_closed", closed, quad, rel(closed, quad), oracle_quadrature_tolerance);

    const auto [plus, minus] = symmetric_spectrum_closed(sys);
    const auto ksum = symmetric_spectrum_ksum(sys);
    add("ksum_Eplus_vs_closed", plus, ksum.Eplus, rel(plus, ksum.Eplus), oracle_ksum_tolerance);
    add("ksum_Eminus_vs_closed", minus, ksum.Eminus, rel(minus, ksum.Eminus), oracle_ksum_tolerance);

    const auto ed = exact_diagonalize(build_matrix(sys.chain(), sys.impurities()));
    const auto estimate = cp_energy_from_ground(sys, R, ed.ground_energy, references[tasks[i].series]);
    add("ed_cp_energy", closed, estimate.energy, rel(closed, estimate.energy), oracle_ed_tolerance);
    const double split = minus - plus;
    add("ed_splitting", split, ed.splitting(), rel(split, ed.splitting()), oracle_ed_tolerance);
    add("ed_ground_overlap", 1.0, ed.ground_impurity_overlap, 1.0 - ed.ground_impurity_overlap,
        1.0 - oracle_overlap_threshold);
    return rows;
  });
  t.rows = concat(std::move(blocks));

  std::size_t passed = 0;
  const auto pass_col = t.column_index("pass");
  for (const auto& row : t.rows)
    if (std::get<std::string>(row[pass_col]) == "pass") ++passed;
  t.metadata.push_back({"summary", std::to_string(passed) + "/" + std::to_string(t.rows.size()) + " checks passed"});
}

inline void dispersion_dump(const RunConfig& cfg, io::Table& t) {
  t.columns = {"J", "n", "k", "omega_k"};
  for (double J : cfg.J) {
    const ChainParams chain{cfg.omega, J, cfg.N};
    const auto modes = brillouin_modes(chain);
    for (std::size_t i = 0; i < modes.size(); ++i)
      t.rows.push_back({J, cell_int(static_cast<int>(i) - cfg.N), modes[i], dispersion(chain, modes[i])});
  }
}

}  // namespace detail

/// Evaluates the configured mode. The header block echoes the tool, version,
/// mode and every parameter with its source; rows are in deterministic sweep order.
inline io::Table run(const RunConfig& cfg) {
  io::Table t;
  t.metadata.push_back({"tool", std::string(tool_name)});
  t.metadata.push_back({"version", std::string(tool_version)});
  t.metadata.push_back({"mode", std::string(to_string(cfg.mode))});
  // Destination path is not echoed.
  for (const auto& p : cfg.provenance) {
    if (p.key == "output") continue;
    t.metadata.push_back({"param " + p.key, p.value + " (" + std::string(to_string(p.source)) + ")"});
  }
  for (const auto& w : cfg.warnings) t.metadata.push_back({"warning", w});

  switch (cfg.mode) {
    case Mode::force_sweep: detail::force_sweep(cfg, t); break;
    case Mode::hopping_sweep: detail::hopping_sweep(cfg, t); break;
    case Mode::detuning_sweep: detail::detuning_sweep(cfg, t); break;
    case Mode::decay_profile: detail::decay_sweep(cfg, t); break;
    case Mode::thermal_sweep: detail::thermal_sweep(cfg, t); break;
    case Mode::oracle_check: detail::oracle_check(cfg, t); break;
    case Mode::dispersion_dump: detail::dispersion_dump(cfg, t); break;
  }
  return t;
}

inline void write_table(std::ostream& out, const RunConfig& cfg, const io::Table& table) {
  if (cfg.format == Format::json)
    io::write_json(out, table);
  else
    io::write_csv(out, table);
}

/// Output destination: explicit `output`, else $ECP_OUTPUT_DIR/<mode>.<ext>,
/// else empty (standard output).
inline std::optional<std::filesystem::path> output_path(const RunConfig& cfg) {
  if (cfg.output) return std::filesystem::path(*cfg.output);
  if (const char* dir = std::getenv(output_dir_env.data()); dir && *dir) {
    return std::filesystem::path(dir) /
           (std::string(to_string(cfg.mode)) + (cfg.format == Format::json ? ".json" : ".csv"));
  }
  return std::nullopt;
}

/// Maps a library exception onto the documented process exit status.
inline int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const config_error*>(&e)) return exit_config;
  if (dynamic_cast<const regime_violation*>(&e)) return exit_regime;
  if (dynamic_cast<const dimension_error*>(&e)) return exit_regime;
  if (dynamic_cast<const convergence_error*>(&e)) return exit_convergence;
  return exit_internal;
}

}  // namespace ecp::cli
