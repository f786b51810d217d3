#pragma once

// Canonical ensemble over the effective single-electron spectrum {E+, E-, E_k}
// of a finite ring. N is always taken from the system: the 2N+1 band states
// compete with the two bound states in the partition function.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ecp/casimir.hpp"
#include "ecp/errors.hpp"
#include "ecp/kahan.hpp"
#include "ecp/lattice.hpp"
#include "ecp/perturbation.hpp"

namespace ecp {

struct ThermalEnsemble {
  double temperature = 0.0;
  /// +infinity at T = 0.
  double beta = std::numeric_limits<double>::infinity();
  SymmetricSpectrum spectrum;
  /// eps0 + R-independent shift; energies are accumulated relative to it.
  double reference = 0.0;
  double min_energy = 0.0;
  /// sum_i exp(-beta (E_i - min_energy)); the physical Z is this times exp(-beta min_energy).
  double reduced_partition = 1.0;
  /// Boltzmann weights ordered as [+, -, modes in brillouin_modes() order].
  std::vector<double> weights;

  double weight_plus() const { return weights[0]; }
  double weight_minus() const { return weights[1]; }

  double log_partition_function() const {
    return std::log(reduced_partition) - beta * min_energy;
  }
  /// May under/overflow for large beta; prefer log_partition_function().
  double partition_function() const { return std::exp(log_partition_function()); }

  double energy(std::size_t i) const {
    if (i == 0) return spectrum.Eplus;
    if (i == 1) return spectrum.Eminus;
    return spectrum.Ek[i - 2].energy;
  }
  std::size_t size() const { return weights.size(); }

  /// Tr(rho H_eff) - reference.
  double mean_excess = 0.0;

  double mean_energy() const { return reference + mean_excess; }
};

/// E+ and E- from the closed forms, E_k per mode of the finite ring.
inline ThermalEnsemble make_ensemble(const SymmetricSystem& sys, double T) {
  if (!(T >= 0.0) || !std::isfinite(T))
    throw config_error("temperature must be finite and >= 0, got " + std::to_string(T));
  if (sys.R() > sys.chain().N)
    throw dimension_error("separation R = " + std::to_string(sys.R()) + " exceeds N = " +
                          std::to_string(sys.chain().N));

  ThermalEnsemble ens;
  ens.temperature = T;
  ens.beta = T == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / T;

  const double a = sys.a();
  check_band_parameter(a);
  const double lambda2 = sys.lambda() * sys.lambda();
  double shift = 0.0;
  double exchange = 0.0;
  if (a == 0.0) {
    shift = lambda2 / sys.Delta();
  } else {
    shift = bound_level_shift(sys);
    exchange = shift * std::pow(decay_ratio(a), sys.R());
  }
  ens.reference = sys.eps0() + shift;
  ens.spectrum.Eplus = ens.reference + exchange;
  ens.spectrum.Eminus = ens.reference - exchange;
  ens.spectrum.Ek = band_mode_energies(sys);

  const std::size_t n = 2 + ens.spectrum.Ek.size();
  std::vector<double> excess(n);
  excess[0] = exchange;
  excess[1] = -exchange;
  for (std::size_t i = 2; i < n; ++i) excess[i] = ens.spectrum.Ek[i - 2].energy - ens.reference;

  double min_excess = excess[0];
  for (double e : excess) min_excess = std::min(min_excess, e);
  ens.min_energy = ens.reference + min_excess;

  ens.weights.assign(n, 0.0);
  kahan_accumulator<double> z;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 0.0;
    if (std::isinf(ens.beta))
      w = excess[i] == min_excess ? 1.0 : 0.0;
    else
      w = std::exp(-ens.beta * (excess[i] - min_excess));
    ens.weights[i] = w;
    z += w;
  }
  ens.reduced_partition = z.value();
  kahan_accumulator<double> mean;
  for (std::size_t i = 0; i < n; ++i) {
    ens.weights[i] /= ens.reduced_partition;
    mean += ens.weights[i] * excess[i];
  }
  ens.mean_excess = mean.value();
  return ens;
}

/// E_T(R) = Tr(rho_T H_eff) at separation R.
inline double thermal_energy(const SymmetricSystem& sys, double T, int R) {
  if (R < 1) throw dimension_error("separation R must be >= 1");
  return make_ensemble(sys.with_separation(R), T).mean_energy();
}

/// f_T(R) = -[E_T(R+1) - E_T(R)]. Differenced on energies relative to the
/// R-independent reference, so the T = 0 value matches ecp_force to rounding.
inline double thermal_force(const SymmetricSystem& sys, double T, int R) {
  if (R < 1 || R + 1 > sys.chain().N)
    throw dimension_error("thermal force needs 1 <= R <= N - 1; got R = " + std::to_string(R));
  const double near = make_ensemble(sys.with_separation(R), T).mean_excess;
  const double far = make_ensemble(sys.with_separation(R + 1), T).mean_excess;
  return -(far - near);
}

struct TemperaturePoint {
  double T;
  double force;
};

struct TemperatureSweep {
  std::vector<TemperaturePoint> records;
  /// Indices i where |f(T_i)| > |f(T_{i-1})|.
  std::vector<std::size_t> violations;

  bool monotone() const { return violations.empty(); }
};

inline TemperatureSweep force_vs_temperature(const SymmetricSystem& sys, int R,
                                             const std::vector<double>& temperatures) {
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    if (!(temperatures[i] >= 0.0)) throw config_error("temperatures must be >= 0");
    if (i > 0 && temperatures[i] < temperatures[i - 1])
      throw config_error("temperatures must be sorted ascending");
  }
  TemperatureSweep sweep;
  sweep.records.reserve(temperatures.size());
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    sweep.records.push_back({temperatures[i], thermal_force(sys, temperatures[i], R)});
    if (i > 0 && std::abs(sweep.records[i].force) > std::abs(sweep.records[i - 1].force))
      sweep.violations.push_back(i);
  }
  return sweep;
}

}  // namespace ecp
