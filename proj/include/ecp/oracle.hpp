#pragma once

// Brute-force cross-checks for the perturbative results: exact diagonalization
// of the single-electron Hamiltonian on the periodic ring, and direct
// trapezoidal quadrature of the Brillouin-zone integral behind E_cp.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ecp/casimir.hpp"
#include "ecp/errors.hpp"
#include "ecp/lattice.hpp"
#include "ecp/linalg/symmetric_eigen.hpp"
#include "ecp/perturbation.hpp"

namespace ecp {

/// Position-basis Hamiltonian. Basis order: impurity 1, impurity 2, sites -N..N.
struct SingleElectronMatrix {
  linalg::DenseSymmetricMatrix entries;
  std::vector<std::string> basis_labels;

  std::size_t dim() const { return entries.size(); }

  static constexpr std::size_t imp1 = 0;
  static constexpr std::size_t imp2 = 1;
  static std::size_t site_index(int j, int N) { return static_cast<std::size_t>(2 + j + N); }
};

inline SingleElectronMatrix build_matrix(const ChainParams& chain, const ImpurityConfig& imps) {
  chain.validate();
  if (imps.R < 1 || imps.R > chain.N)
    throw dimension_error("impurity 2 site R = " + std::to_string(imps.R) +
                          " is not on the chain [1, " + std::to_string(chain.N) + "]");
  const int N = chain.N;
  const int n_sites = chain.sites();
  SingleElectronMatrix m{linalg::DenseSymmetricMatrix(static_cast<std::size_t>(n_sites + 2)), {}};
  m.basis_labels.reserve(m.dim());
  m.basis_labels.emplace_back("imp1");
  m.basis_labels.emplace_back("imp2");
  for (int j = -N; j <= N; ++j) m.basis_labels.push_back("site:" + std::to_string(j));

  auto& h = m.entries;
  h(SingleElectronMatrix::imp1, SingleElectronMatrix::imp1) = imps.eps1;
  h(SingleElectronMatrix::imp2, SingleElectronMatrix::imp2) = imps.eps2;
  for (int j = -N; j <= N; ++j) {
    const auto i = SingleElectronMatrix::site_index(j, N);
    h(i, i) = chain.omega;
    // Periodic ring: site N bonds to site -N.
    const int next = j == N ? -N : j + 1;
    h.set_symmetric(i, SingleElectronMatrix::site_index(next, N), -chain.J);
  }
  h.set_symmetric(SingleElectronMatrix::imp1, SingleElectronMatrix::site_index(0, N), imps.lambda0);
  h.set_symmetric(SingleElectronMatrix::imp2, SingleElectronMatrix::site_index(imps.R, N), imps.lambdaR);
  return m;
}

struct EDResult {
  double ground_energy = 0.0;
  double first_excited = 0.0;
  /// |<ground| (|imp1> + |imp2>)/sqrt(2)>|^2
  double ground_impurity_overlap = 0.0;
  std::vector<double> eigenvalues;

  double splitting() const { return first_excited - ground_energy; }
};

inline EDResult exact_diagonalize(const SingleElectronMatrix& m) {
  if (m.dim() < 3) throw dimension_error("exact diagonalization needs dim >= 3");
  auto pair = linalg::lowest_eigenpair(m.entries);
  EDResult out;
  out.ground_energy = pair.eigenvalues[0];
  out.first_excited = pair.eigenvalues[1];
  const double amp = (pair.ground_vector[SingleElectronMatrix::imp1] +
                      pair.ground_vector[SingleElectronMatrix::imp2]) /
                     std::sqrt(2.0);
  out.ground_impurity_overlap = std::min(1.0, amp * amp);
  out.eigenvalues = std::move(pair.eigenvalues);
  return out;
}

/// Number of eigenvalues strictly below the band bottom.
inline std::size_t count_below(const EDResult& ed, double threshold) {
  std::size_t count = 0;
  for (double e : ed.eigenvalues)
    if (e < threshold) ++count;
  return count;
}

struct EdEnergyEstimate {
  double energy = 0.0;
  /// Estimated size of the O(lambda^4) and ring-image contamination.
  double systematic = 0.0;
  /// systematic > 5% of |energy|
  bool warning = false;
};

inline constexpr double ed_systematic_warning_fraction = 0.05;

/// Separation used as the effectively infinite reference by cp_energy_ed.
inline int ed_reference_separation(const ChainParams& chain) { return chain.N / 2; }

/// Combines ED ground energies at R and at the reference separation into the
/// baseline-subtracted estimate, with its systematic-error budget.
inline EdEnergyEstimate cp_energy_from_ground(const SymmetricSystem& sys, int R, double ground_at_R,
                                              double ground_at_ref) {
  const auto& chain = sys.chain();
  const int R_ref = ed_reference_separation(chain);
  EdEnergyEstimate out;
  out.energy = (ground_at_R - ground_at_ref) + cp_energy(sys, R_ref);

  const double a = sys.a();
  if (a != 0.0) {
    const double gap = chain.band_bottom() - sys.eps0();
    const double quartic = (sys.lambda() / gap) * (sys.lambda() / gap);
    const double q = decay_ratio(a);
    const double shift = std::abs(bound_level_shift(sys));
    const int ring = chain.sites();
    out.systematic = quartic * (std::abs(cp_energy(sys, R)) + std::abs(cp_energy(sys, R_ref))) +
                     shift * (std::pow(q, ring - R) + std::pow(q, ring - R_ref));
  }
  out.warning =
      out.systematic > 0.0 && out.systematic > ed_systematic_warning_fraction * std::abs(out.energy);
  return out;
}

inline void check_ed_separation(const ChainParams& chain, int R) {
  if (R < 1 || 4 * R > chain.N)
    throw dimension_error("ED estimate needs 1 <= R <= N/4; got R = " + std::to_string(R) +
                          ", N = " + std::to_string(chain.N));
}

/// E_ground(R) - E_ground(R_ref) + E_cp(R_ref) with R_ref = N/2 as the
/// effectively infinite separation. Requires R <= N/4 so the image term
/// wrapping around the ring stays negligible.
inline EdEnergyEstimate cp_energy_ed(const SymmetricSystem& sys, int R) {
  const auto& chain = sys.chain();
  check_ed_separation(chain, R);
  const int R_ref = ed_reference_separation(chain);
  const double at_R = exact_diagonalize(build_matrix(chain, sys.with_separation(R).impurities())).ground_energy;
  const double at_ref =
      exact_diagonalize(build_matrix(chain, sys.with_separation(R_ref).impurities())).ground_energy;
  return cp_energy_from_ground(sys, R, at_R, at_ref);
}

struct QuadratureResult {
  double value = 0.0;
  double imaginary = 0.0;
  std::size_t points = 0;
};

inline constexpr double quadrature_tolerance = 1e-12;
inline constexpr std::size_t quadrature_max_points = std::size_t{1} << 22;

/// (lambda^2 / 2pi) * integral over [-pi, pi] of exp(-ikR) / (Delta + 2J cos k),
/// by the periodic trapezoid rule in extended precision, doubling the point
/// count until successive estimates agree to quadrature_tolerance. R = 0 gives
/// the R-independent level shift.
template <typename Real = boost::multiprecision::cpp_bin_float_quad>
QuadratureResult cp_quadrature(const SymmetricSystem& sys, int R) {
  using std::cos;
  using std::sin;
  using std::abs;
  if (R < 0) throw dimension_error("quadrature separation must be >= 0");
  const double a = sys.a();
  check_band_parameter(a);
  if (a == 0.0) throw invalid_regime("quadrature requires J > 0 (a in (-1, 0))");

  const Real pi = boost::math::constants::pi<Real>();
  const Real lambda2 = Real(sys.lambda()) * Real(sys.lambda());
  const Real Delta = Real(sys.Delta());
  const Real twoJ = Real(2.0 * sys.chain().J);

  auto estimate = [&](std::size_t M, Real& imag) {
    Real re = 0, im = 0;
    for (std::size_t j = 0; j < M; ++j) {
      const Real k = -pi + 2 * pi * Real(j) / Real(M);
      const Real f = lambda2 / (Delta + twoJ * cos(k));
      re += f * cos(k * R);
      im -= f * sin(k * R);
    }
    imag = im / Real(M);
    return Real(re / Real(M));
  };

  std::size_t M = 16;
  while (M < 4 * static_cast<std::size_t>(R)) M *= 2;
  Real imag = 0;
  Real previous = estimate(M, imag);
  for (;;) {
    M *= 2;
    if (M > quadrature_max_points) {
      std::ostringstream msg;
      msg << "trapezoid quadrature did not reach relative tolerance " << quadrature_tolerance
          << " within " << quadrature_max_points << " points";
      throw convergence_error(msg.str());
    }
    const Real current = estimate(M, imag);
    if (abs(current - previous) <= Real(quadrature_tolerance) * abs(current)) {
      if (abs(imag) > Real(quadrature_tolerance) * abs(current))
        throw convergence_error("imaginary part of the quadrature did not vanish");
      return {static_cast<double>(current), static_cast<double>(imag), M};
    }
    previous = current;
  }
}

template <typename Real = boost::multiprecision::cpp_bin_float_quad>
double cp_energy_quadrature(const SymmetricSystem& sys, int R) {
  return cp_quadrature<Real>(sys, R).value;
}

/// Upper-triangle triplets "row col value" (0-based, diagonal always written),
/// preceded by '#' comment lines naming the dimension and basis.
inline void write_triplets(std::ostream& out, const SingleElectronMatrix& m) {
  out << "# dim " << m.dim() << '\n';
  out << "# basis";
  for (const auto& label : m.basis_labels) out << ' ' << label;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j) {
      const double v = m.entries(i, j);
      if (i == j || v != 0.0) out << i << ' ' << j << ' ' << v << '\n';
    }
  out.precision(old_precision);
}

inline linalg::DenseSymmetricMatrix read_triplets(std::istream& in) {
  std::string line;
  std::size_t dim = 0;
  linalg::DenseSymmetricMatrix m;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string hash, key;
      fields >> hash >> key;
      if (key == "dim") {
        fields >> dim;
        m = linalg::DenseSymmetricMatrix(dim);
      }
      continue;
    }
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(fields >> i >> j >> v) || i >= dim || j >= dim)
      throw config_error("malformed triplet on line " + std::to_string(line_no));
    m.set_symmetric(i, j, v);
  }
  return m;
}

}  // namespace ecp
