#pragma once

// Dense real-symmetric eigensolver: Householder reduction to tridiagonal form,
// implicit-shift QL for the eigenvalues (tql1 lineage), and inverse iteration
// on the tridiagonal for selected eigenvectors, back-transformed through the
// stored reflectors. Deterministic: no threading, fixed operation order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ecp/errors.hpp"

namespace ecp::linalg {

/// Row-major dense square matrix; symmetry is the caller's contract and is
/// checked by is_symmetric().
class DenseSymmetricMatrix {
public:
  DenseSymmetricMatrix() = default;
  explicit DenseSymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Sets (i, j) and (j, i).
  void set_symmetric(std::size_t i, std::size_t j, double value) {
    (*this)(i, j) = value;
    (*this)(j, i) = value;
  }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// T = Q^T A Q with Q = H_0 H_1 ... H_{n-3}, H_k = I - beta_k v_k v_k^T acting on rows k+1..n-1.
struct TridiagonalReduction {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n-1, offdiag[i] couples i and i+1
  std::vector<std::vector<double>> reflectors;
  std::vector<double> betas;

  std::size_t size() const { return diag.size(); }

  /// x <- Q x for a vector expressed in the tridiagonal basis.
  void back_transform(std::span<double> x) const {
    for (std::size_t k = reflectors.size(); k-- > 0;) {
      const auto& v = reflectors[k];
      if (betas[k] == 0.0) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * x[k + 1 + i];
      const double scale = betas[k] * dot;
      for (std::size_t i = 0; i < v.size(); ++i) x[k + 1 + i] -= scale * v[i];
    }
  }
};

inline TridiagonalReduction householder_tridiagonalize(DenseSymmetricMatrix a) {
  const std::size_t n = a.size();
  TridiagonalReduction out;
  out.diag.assign(n, 0.0);
  out.offdiag.assign(n > 0 ? n - 1 : 0, 0.0);
  if (n == 0) return out;

  std::vector<double> p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the sub-column
    std::vector<double> v(m);
    double tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      if (i > 0) tail += v[i] * v[i];
    }
    out.diag[k] = a(k, k);
    double beta = 0.0;
    if (tail == 0.0) {
      out.offdiag[k] = v[0];
    } else {
      const double norm = std::sqrt(v[0] * v[0] + tail);
      const double alpha = v[0] > 0.0 ? -norm : norm;
      v[0] -= alpha;
      beta = 2.0 / (v[0] * v[0] + tail);
      out.offdiag[k] = alpha;

      // Trailing block update A <- H A H via the symmetric rank-2 form.
      double pv = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const auto row = a.row(k + 1 + i).subspan(k + 1, m);
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
        p[i] = beta * s;
        pv += p[i] * v[i];
      }
      const double half = 0.5 * beta * pv;
      for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - half * v[i];
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a(k + 1 + i, k + 1 + j) -= v[i] * w[j] + w[i] * v[j];
    }
    out.reflectors.push_back(std::move(v));
    out.betas.push_back(beta);
  }
  if (n >= 2) {
    out.diag[n - 2] = a(n - 2, n - 2);
    out.offdiag[n - 2] = a(n - 1, n - 2);
  }
  out.diag[n - 1] = a(n - 1, n - 1);
  return out;
}

/// Off-diagonal residual accepted when the QL sweep budget runs out.
inline constexpr double ql_fallback_tolerance = 1e-12;
inline constexpr int ql_max_sweeps = 60;

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::span<const double> off) {
  const std::size_t n = d.size();
  if (n == 0) return d;
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == ql_max_sweeps) {
        const double scale = std::abs(d[l]) + std::abs(d[l + 1]);
        const double residual = scale > 0.0 ? std::abs(e[l]) / scale : std::abs(e[l]);
        if (residual <= ql_fallback_tolerance) {
          e[l] = 0.0;
          break;
        }
        std::ostringstream msg;
        msg << "QL iteration did not converge for eigenvalue index " << l << " after "
            << ql_max_sweeps << " sweeps; relative off-diagonal residual " << residual
            << " exceeds " << ql_fallback_tolerance;
        throw convergence_error(msg.str());
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

/// Unit eigenvector of the tridiagonal (diag, off) for a converged eigenvalue,
/// by inverse iteration with partial-pivoting LU of (T - shift I).
inline std::vector<double> tridiagonal_eigenvector(std::span<const double> diag,
                                                   std::span<const double> off, double shift,
                                                   int iterations = 3) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (n == 1) return {1.0};

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i] - shift);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < n) row += std::abs(off[i]);
    norm = std::max(norm, row);
  }
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(norm, 1e-300);

  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), mult(n, 0.0);
  std::vector<char> swapped(n, 0);
  double cur_d = diag[0] - shift;
  double cur_s = off[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double low = off[i];
    const double next_d = diag[i + 1] - shift;
    const double next_s = i + 2 < n ? off[i + 1] : 0.0;
    if (std::abs(low) > std::abs(cur_d)) {
      u0[i] = low;
      u1[i] = next_d;
      u2[i] = next_s;
      mult[i] = cur_d / low;
      swapped[i] = 1;
      cur_d = cur_s - mult[i] * next_d;
      cur_s = -mult[i] * next_s;
    } else {
      if (cur_d == 0.0) cur_d = tiny;
      u0[i] = cur_d;
      u1[i] = cur_s;
      mult[i] = low / cur_d;
      cur_d = next_d - mult[i] * cur_s;
      cur_s = next_s;
    }
  }
  u0[n - 1] = cur_d == 0.0 ? tiny : cur_d;

  // Deterministic, non-symmetric start vector.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);

  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult[i] * x[i];
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = x[i];
      if (i + 1 < n) s -= u1[i] * x[i + 1];
      if (i + 2 < n) s -= u2[i] * x[i + 2];
      x[i] = s / u0[i];
    }
    const double len = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    if (!(len > 0.0) || !std::isfinite(len))
      throw convergence_error("inverse iteration produced a degenerate vector");
    for (double& xi : x) xi /= len;
  }
  return x;
}

struct Eigenpair {
  double value;
  std::vector<double> vector;
};

inline std::vector<double> symmetric_eigenvalues(const DenseSymmetricMatrix& a) {
  const auto t = householder_tridiagonalize(a);
  return tridiagonal_eigenvalues(t.diag, t.offdiag);
}

/// All eigenvalues (ascending) plus the eigenvector of the lowest one.
struct LowestEigenpairResult {
  std::vector<double> eigenvalues;
  std::vector<double> ground_vector;
};

inline LowestEigenpairResult lowest_eigenpair(const DenseSymmetricMatrix& a) {
  const auto t = householder_tridiagonalize(a);
  LowestEigenpairResult out;
  out.eigenvalues = tridiagonal_eigenvalues(t.diag, t.offdiag);
  if (out.eigenvalues.empty()) return out;
  out.ground_vector = tridiagonal_eigenvector(t.diag, t.offdiag, out.eigenvalues.front());
  t.back_transform(out.ground_vector);
  return out;
}

}  // namespace ecp::linalg
