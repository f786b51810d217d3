#pragma once

// Second-order (Schrieffer-Wolff) effective Hamiltonian of the impurity pair
// in the single-electron subspace. The general two-impurity coefficients are
// finite Brillouin-zone sums; the symmetric pair additionally has closed forms
// valid for N -> infinity.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "ecp/errors.hpp"
#include "ecp/kahan.hpp"
#include "ecp/lattice.hpp"

namespace ecp {

struct EffectiveCoefficients {
  double shift1 = 0.0;
  double shift2 = 0.0;
  /// Coefficient of d1^dag d2; the d2^dag d1 coefficient is its conjugate.
  std::complex<double> hop12{0.0, 0.0};
  /// Per-mode level shift of c_k^dag c_k, aligned with brillouin_modes().
  std::vector<double> band_shift;

  std::complex<double> hop21() const { return std::conj(hop12); }
};

inline EffectiveCoefficients effective_coefficients(const ChainParams& chain,
                                                    const ImpurityConfig& imps) {
  require_regime(chain, imps);

  const double norm = 1.0 / std::sqrt(static_cast<double>(chain.sites()));
  const double g1 = imps.lambda0 * norm;
  const double g2 = imps.lambdaR * norm;
  const auto modes = brillouin_modes(chain);

  EffectiveCoefficients out;
  out.band_shift.reserve(modes.size());
  kahan_accumulator<double> shift1, shift2;
  kahan_accumulator<std::complex<double>> hop;
  for (const double k : modes) {
    const double omega_k = dispersion(chain, k);
    const double inv1 = 1.0 / (imps.eps1 - omega_k);
    const double inv2 = 1.0 / (imps.eps2 - omega_k);
    shift1 += g1 * g1 * inv1;
    shift2 += g2 * g2 * inv2;
    const std::complex<double> phase = std::polar(1.0, -k * imps.R);
    hop += 0.5 * g1 * g2 * (inv1 + inv2) * phase;
    out.band_shift.push_back(-g1 * g1 * inv1 - g2 * g2 * inv2);
  }
  out.shift1 = shift1.value();
  out.shift2 = shift2.value();
  out.hop12 = hop.value();
  return out;
}

/// Throws unless a = 2J/Delta lies in (-1, 0].
inline void check_band_parameter(double a) {
  if (!(a > -1.0)) throw band_edge_error("band parameter a = " + std::to_string(a) + " has |a| >= 1");
  if (a > 0.0) throw regime_violation("band parameter a = " + std::to_string(a) + " is positive");
}

/// q = (sqrt(1 - a^2) - 1) / a in the cancellation-free form -a / (sqrt(1 - a^2) + 1).
/// q in [0, 1) for a in (-1, 0]; q = 0 at a = 0.
inline double decay_ratio(double a) {
  check_band_parameter(a);
  if (a == 0.0) return 0.0;
  return -a / (std::sqrt((1.0 - a) * (1.0 + a)) + 1.0);
}

/// Infinite-chain value of the R-independent second-order shift (lambda^2/Delta)/sqrt(1 - a^2).
inline double bound_level_shift(const SymmetricSystem& sys) {
  const double a = sys.a();
  check_band_parameter(a);
  return sys.lambda() * sys.lambda() / sys.Delta() / std::sqrt((1.0 - a) * (1.0 + a));
}

struct ModeEnergy {
  double k;
  double energy;
};

struct SymmetricSpectrum {
  double Eplus = 0.0;
  double Eminus = 0.0;
  std::vector<ModeEnergy> Ek;
};

/// Band-mode energies Omega_k + 2 g^2 / (Omega_k - eps0) over the 2N+1 modes.
inline std::vector<ModeEnergy> band_mode_energies(const SymmetricSystem& sys) {
  const auto& chain = sys.chain();
  const double g2 = sys.lambda() * sys.lambda() / chain.sites();
  std::vector<ModeEnergy> out;
  out.reserve(static_cast<std::size_t>(chain.sites()));
  for (const double k : brillouin_modes(chain)) {
    const double omega_k = dispersion(chain, k);
    out.push_back({k, omega_k + 2.0 * g2 / (omega_k - sys.eps0())});
  }
  return out;
}

/// E+, E- and E_k as finite sums over the 2N+1 modes of the ring.
inline SymmetricSpectrum symmetric_spectrum_ksum(const SymmetricSystem& sys) {
  const auto& chain = sys.chain();
  require_regime(chain, sys.impurities());

  const double g2 = sys.lambda() * sys.lambda() / chain.sites();
  kahan_accumulator<double> local, exchange;
  for (const double k : brillouin_modes(chain)) {
    const double denom = sys.Delta() + 2.0 * chain.J * std::cos(k);
    local += g2 / denom;
    // Imaginary parts cancel pairwise between k and -k.
    exchange += g2 * std::cos(k * sys.R()) / denom;
  }
  SymmetricSpectrum out;
  out.Eplus = sys.eps0() + (local.value() + exchange.value());
  out.Eminus = sys.eps0() + (local.value() - exchange.value());
  out.Ek = band_mode_energies(sys);
  return out;
}

/// N -> infinity closed forms of E+ and E-.
inline std::pair<double, double> symmetric_spectrum_closed(const SymmetricSystem& sys) {
  const double a = sys.a();
  check_band_parameter(a);
  if (a == 0.0) {
    const double level = sys.eps0() + sys.lambda() * sys.lambda() / sys.Delta();
    return {level, level};
  }
  const double shift = bound_level_shift(sys);
  const double exchange = shift * std::pow(decay_ratio(a), sys.R());
  return {sys.eps0() + shift + exchange, sys.eps0() + shift - exchange};
}

}  // namespace ecp
