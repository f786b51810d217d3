#pragma once

// Tight-binding ring with two side-coupled impurities: parameters, regime
// checks, dispersion and the discrete Brillouin zone.
//
// Energies are dimensionless (impurity energy unit = 1), the lattice constant
// is 1 and separations are integers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ecp/errors.hpp"

namespace ecp {

/// Ring of 2N+1 sites (indices -N..N) with site energy omega and hopping J.
struct ChainParams {
  double omega = 2.0;
  double J = 0.0;
  int N = 1;

  int sites() const { return 2 * N + 1; }
  double band_bottom() const { return omega - 2.0 * J; }
  double band_top() const { return omega + 2.0 * J; }

  void validate() const {
    if (!std::isfinite(omega) || !std::isfinite(J))
      throw config_error("chain parameters must be finite");
    if (J < 0.0) throw config_error("hopping J must be >= 0, got " + std::to_string(J));
    if (N < 1) throw config_error("half-length N must be >= 1, got " + std::to_string(N));
  }
};

/// Impurity 1 sits next to site 0, impurity 2 next to site R.
struct ImpurityConfig {
  double eps1 = 1.0;
  double eps2 = 1.0;
  double lambda0 = 0.0;
  double lambdaR = 0.0;
  int R = 1;

  static ImpurityConfig symmetric(double eps0, double lambda, int R) {
    return {eps0, eps0, lambda, lambda, R};
  }
};

inline double dispersion(const ChainParams& chain, double k) {
  return chain.omega - 2.0 * chain.J * std::cos(k);
}

/// k_n = 2 pi n / (2N+1), n = -N..N, strictly increasing.
inline std::vector<double> brillouin_modes(const ChainParams& chain) {
  const int n_sites = chain.sites();
  std::vector<double> modes;
  modes.reserve(static_cast<std::size_t>(n_sites));
  for (int n = -chain.N; n <= chain.N; ++n)
    modes.push_back(2.0 * std::numbers::pi * n / n_sites);
  return modes;
}

enum class check_level { pass, warning, failure };

inline const char* to_string(check_level level) {
  switch (level) {
    case check_level::pass: return "pass";
    case check_level::warning: return "warning";
    case check_level::failure: return "failure";
  }
  return "?";
}

/// Weak-coupling ratio thresholds. Second-order error scales as ratio^2.
inline constexpr double weak_coupling_warning_ratio = 0.1;
inline constexpr double weak_coupling_failure_ratio = 0.5;

struct RegimeReport {
  bool below_band = false;
  /// max|lambda| / ((omega - 2J) - max eps); +inf when not below band.
  double coupling_ratio = 0.0;
  check_level weak_coupling = check_level::pass;
  bool within_chain = false;

  bool ok() const { return below_band && within_chain && weak_coupling != check_level::failure; }
  bool has_warnings() const { return weak_coupling == check_level::warning; }

  std::string describe() const {
    std::ostringstream out;
    out << "below-band: " << (below_band ? "pass" : "failure")
        << "; weak-coupling ratio " << coupling_ratio << ": " << to_string(weak_coupling)
        << "; separation within chain: " << (within_chain ? "pass" : "failure");
    return out.str();
  }
};

inline RegimeReport validate_regime(const ChainParams& chain, const ImpurityConfig& imps) {
  RegimeReport report;
  const double eps_max = std::max(imps.eps1, imps.eps2);
  const double gap = chain.band_bottom() - eps_max;
  report.below_band = gap > 0.0;
  const double lambda_max = std::max(std::abs(imps.lambda0), std::abs(imps.lambdaR));
  report.coupling_ratio =
      report.below_band ? lambda_max / gap : std::numeric_limits<double>::infinity();
  if (!report.below_band || report.coupling_ratio > weak_coupling_failure_ratio)
    report.weak_coupling = check_level::failure;
  else if (report.coupling_ratio > weak_coupling_warning_ratio)
    report.weak_coupling = check_level::warning;
  report.within_chain = imps.R >= 1 && imps.R <= chain.N;
  return report;
}

inline void require_regime(const ChainParams& chain, const ImpurityConfig& imps) {
  chain.validate();
  const auto report = validate_regime(chain, imps);
  if (!report.within_chain)
    throw dimension_error("separation R = " + std::to_string(imps.R) + " must lie in [1, N = " +
                          std::to_string(chain.N) + "]");
  if (!report.ok()) throw regime_violation(report.describe());
}

/// eps1 = eps2 = eps0, lambda0 = lambdaR = lambda. Construction enforces
/// Delta = eps0 - omega < -2J, so the band parameter a = 2J/Delta lies in (-1, 0].
class SymmetricSystem {
public:
  static SymmetricSystem make(const ChainParams& chain, double eps0, double lambda, int R = 1) {
    chain.validate();
    if (!std::isfinite(eps0) || !std::isfinite(lambda))
      throw config_error("impurity parameters must be finite");
    if (R < 1) throw dimension_error("separation R must be >= 1, got " + std::to_string(R));
    if (eps0 == chain.band_bottom() && chain.J > 0.0)
      throw band_edge_error("impurity level sits on the band edge omega - 2J");
    if (eps0 >= chain.band_bottom())
      throw regime_violation("impurity level eps0 = " + std::to_string(eps0) +
                             " is not below the band bottom " +
                             std::to_string(chain.band_bottom()));
    return SymmetricSystem(chain, eps0, lambda, R);
  }

  /// Shorthand used by sweeps: omega fixed, eps0 = omega + Delta.
  static SymmetricSystem from_detuning(double omega, double J, double Delta, double lambda,
                                       int N = 1000, int R = 1) {
    return make(ChainParams{omega, J, N}, omega + Delta, lambda, R);
  }

  const ChainParams& chain() const { return chain_; }
  double eps0() const { return eps0_; }
  double lambda() const { return lambda_; }
  int R() const { return R_; }
  double Delta() const { return eps0_ - chain_.omega; }
  double a() const { return 2.0 * chain_.J / Delta(); }

  ImpurityConfig impurities() const { return ImpurityConfig::symmetric(eps0_, lambda_, R_); }

  SymmetricSystem with_separation(int R) const { return make(chain_, eps0_, lambda_, R); }
  SymmetricSystem with_lambda(double lambda) const { return make(chain_, eps0_, lambda, R_); }
  SymmetricSystem with_length(int N) const {
    return make(ChainParams{chain_.omega, chain_.J, N}, eps0_, lambda_, R_);
  }

private:
  SymmetricSystem(const ChainParams& chain, double eps0, double lambda, int R)
      : chain_(chain), eps0_(eps0), lambda_(lambda), R_(R) {}

  ChainParams chain_;
  double eps0_;
  double lambda_;
  int R_;
};

}  // namespace ecp
