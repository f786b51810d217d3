#pragma once

#include <stdexcept>
#include <string>

namespace ecp {

/// Root of every error thrown by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Physical parameters outside the below-band / weak-coupling regime.
class regime_violation : public error {
public:
  using error::error;
};

/// |a| >= 1: the impurity level touches the band edge and 1/sqrt(1-a^2) diverges.
class band_edge_error : public regime_violation {
public:
  using regime_violation::regime_violation;
};

/// Operation undefined for the given (otherwise valid) regime, e.g. the continuum form at J = 0.
class invalid_regime : public regime_violation {
public:
  using regime_violation::regime_violation;
};

/// Site index or separation outside the chain.
class dimension_error : public error {
public:
  using error::error;
};

/// Iterative numerics (eigensolver, adaptive quadrature) missed their tolerance.
class convergence_error : public error {
public:
  using error::error;
};

class config_error : public error {
public:
  using error::error;
};

}  // namespace ecp
