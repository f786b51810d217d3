#pragma once

// Zero-temperature Casimir-Polder energy between the impurities, the discrete
// force f(R) = -[E(R+1) - E(R)], its exponential decay rate, and the
// quadratic-dispersion (continuum) approximation.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ecp/errors.hpp"
#include "ecp/lattice.hpp"
#include "ecp/perturbation.hpp"

namespace ecp {

namespace detail {

inline void check_separation(int R) {
  if (R < 1) throw dimension_error("separation R must be >= 1, got " + std::to_string(R));
}

}  // namespace detail

/// E_cp(R) = (lambda^2/Delta) (1 - a^2)^(-1/2) q^R; exactly 0 at J = 0.
inline double cp_energy(const SymmetricSystem& sys, int R) {
  detail::check_separation(R);
  const double a = sys.a();
  check_band_parameter(a);
  if (a == 0.0) return 0.0;
  return bound_level_shift(sys) * std::pow(decay_ratio(a), R);
}

/// Negative means attractive: the energy drops as the impurities approach.
inline double ecp_force(const SymmetricSystem& sys, int R) {
  detail::check_separation(R);
  const double a = sys.a();
  check_band_parameter(a);
  if (a == 0.0) return 0.0;
  const double q = decay_ratio(a);
  return -bound_level_shift(sys) * std::pow(q, R) * (q - 1.0);
}

struct DecayProfile {
  /// +infinity when a = 0 (no hopping).
  double gamma = 0.0;
  /// Characteristic length 1/gamma, 0 when gamma is infinite.
  double Rc = 0.0;
  /// f(R) = amplitude * exp(-gamma R).
  double amplitude = 0.0;

  bool infinite_decay() const { return std::isinf(gamma); }
  double force_at(int R) const { return infinite_decay() ? 0.0 : amplitude * std::exp(-gamma * R); }
};

/// Gamma = ln(1/q) as a function of the band parameter alone.
inline double decay_rate(double a) {
  check_band_parameter(a);
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(std::sqrt((1.0 - a) * (1.0 + a)) + 1.0) - std::log(-a);
}

inline DecayProfile decay_profile(const SymmetricSystem& sys) {
  const double a = sys.a();
  DecayProfile out;
  out.gamma = decay_rate(a);
  out.Rc = out.infinite_decay() ? 0.0 : 1.0 / out.gamma;
  const double shift = a == 0.0 ? sys.lambda() * sys.lambda() / sys.Delta() : bound_level_shift(sys);
  out.amplitude = -shift * (decay_ratio(a) - 1.0);
  return out;
}

struct ContinuumEnergy {
  double energy;
  /// Inverse decay length sqrt((omega - 2J - eps0) / J).
  double b;
};

/// Quadratic-dispersion approximation -(lambda^2 / (2 J b)) exp(-b R), valid
/// when the impurity sits close to the band bottom compared to the bandwidth.
inline ContinuumEnergy cp_energy_continuum(const SymmetricSystem& sys, int R) {
  detail::check_separation(R);
  const double J = sys.chain().J;
  if (J == 0.0) throw invalid_regime("continuum approximation needs J > 0");
  const double gap = sys.chain().band_bottom() - sys.eps0();
  if (gap == 0.0) throw band_edge_error("continuum decay constant b vanishes at the band edge");
  if (gap < 0.0) throw regime_violation("impurity level inside the band");
  const double b = std::sqrt(gap / J);
  const double lambda2 = sys.lambda() * sys.lambda();
  return {-lambda2 / (2.0 * J * b) * std::exp(-b * R), b};
}

struct ForcePoint {
  int R;
  double energy;
  double force;

  friend bool operator==(const ForcePoint&, const ForcePoint&) = default;
};

struct ForceCurve {
  std::vector<ForcePoint> records;

  friend bool operator==(const ForceCurve&, const ForceCurve&) = default;
};

/// Closed-form E_cp and f at every integer R in [Rmin, Rmax], Rmax <= N - 1.
inline ForceCurve force_curve(const SymmetricSystem& sys, int Rmin, int Rmax) {
  if (Rmin < 1 || Rmin > Rmax || Rmax > sys.chain().N - 1)
    throw dimension_error("force curve needs 1 <= Rmin <= Rmax <= N - 1; got [" +
                          std::to_string(Rmin) + ", " + std::to_string(Rmax) + "] with N = " +
                          std::to_string(sys.chain().N));
  ForceCurve curve;
  curve.records.reserve(static_cast<std::size_t>(Rmax - Rmin + 1));
  for (int R = Rmin; R <= Rmax; ++R) curve.records.push_back({R, cp_energy(sys, R), ecp_force(sys, R)});
  return curve;
}

}  // namespace ecp
