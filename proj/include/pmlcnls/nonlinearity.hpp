#pragma once

#include <memory>
#include <string_view>

#include "pmlcnls/model.hpp"

namespace pmlcnls {

enum class NonlinearityKind {
  None,          // linear problem
  CubicQuintic,  // |u_j|^2 u_j + eps_q |u_j|^4 u_j, components uncoupled
  Cme2,          // two-component coupled cubic-quintic system
};

std::string_view to_string(NonlinearityKind kind);
NonlinearityKind nonlinearity_from_string(std::string_view name);

/// Pointwise polynomial nonlinearity N(u).
class Nonlinearity {
 public:
  virtual ~Nonlinearity() = default;
  virtual NonlinearityKind kind() const = 0;
  /// out = scale * N(u) for every component; out must have u's shape.
  virtual void evaluate(const ComplexState& u, ComplexState& out, cplx scale) const = 0;
};

/// Throws ConfigError if the kind does not fit the component count.
std::unique_ptr<Nonlinearity> make_nonlinearity(NonlinearityKind kind, double eps_q,
                                                int n_components);

/// Default kind for a system: None if gamma == 0, Cme2 for two components,
/// CubicQuintic otherwise.
NonlinearityKind default_nonlinearity(const CnlsCoefficients& coeffs);

/// gamma * N(u) with the given kind.
ComplexState evaluate_nonlinearity(const ComplexState& u, const CnlsCoefficients& coeffs,
                                   NonlinearityKind kind);
ComplexState evaluate_nonlinearity(const ComplexState& u, const CnlsCoefficients& coeffs);

}  // namespace pmlcnls
