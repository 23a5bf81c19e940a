#include "pmlcnls/nonlinearity.hpp"

#include <string>

#include "pmlcnls/errors.hpp"
#include "pmlcnls/kernels.hpp"

namespace pmlcnls {

std::string_view to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::None:
      return "none";
    case NonlinearityKind::CubicQuintic:
      return "cubic_quintic";
    case NonlinearityKind::Cme2:
      return "cme2";
  }
  return "none";
}

NonlinearityKind nonlinearity_from_string(std::string_view name) {
  if (name == "none") return NonlinearityKind::None;
  if (name == "cubic_quintic") return NonlinearityKind::CubicQuintic;
  if (name == "cme2") return NonlinearityKind::Cme2;
  throw ConfigError("unknown nonlinearity '" + std::string(name) + "'");
}

namespace {

class NoNonlinearity final : public Nonlinearity {
 public:
  NonlinearityKind kind() const override { return NonlinearityKind::None; }
  void evaluate(const ComplexState&, ComplexState& out, cplx) const override {
    out.fill(cplx{});
  }
};

class CubicQuintic final : public Nonlinearity {
 public:
  explicit CubicQuintic(double eps_q) : eps_q_(eps_q) {}
  NonlinearityKind kind() const override { return NonlinearityKind::CubicQuintic; }
  void evaluate(const ComplexState& u, ComplexState& out, cplx scale) const override {
    const auto& k = kernels::active();
    for (int j = 0; j < u.n_components(); ++j) {
      k.cubic_quintic(u.component(j).data(), out.component(j).data(), u.grid().size(), scale,
                      eps_q_);
    }
  }

 private:
  double eps_q_;
};

class Cme2 final : public Nonlinearity {
 public:
  explicit Cme2(double eps_q) : eps_q_(eps_q) {}
  NonlinearityKind kind() const override { return NonlinearityKind::Cme2; }
  void evaluate(const ComplexState& u, ComplexState& out, cplx scale) const override {
    kernels::active().cme2(u.component(0).data(), u.component(1).data(),
                           out.component(0).data(), out.component(1).data(), u.grid().size(),
                           scale, eps_q_);
  }

 private:
  double eps_q_;
};

}  // namespace

std::unique_ptr<Nonlinearity> make_nonlinearity(NonlinearityKind kind, double eps_q,
                                                int n_components) {
  switch (kind) {
    case NonlinearityKind::None:
      return std::make_unique<NoNonlinearity>();
    case NonlinearityKind::CubicQuintic:
      return std::make_unique<CubicQuintic>(eps_q);
    case NonlinearityKind::Cme2:
      if (n_components != 2) {
        throw ConfigError("cme2 nonlinearity needs exactly 2 components, got " +
                          std::to_string(n_components));
      }
      return std::make_unique<Cme2>(eps_q);
  }
  throw ConfigError("unknown nonlinearity");
}

NonlinearityKind default_nonlinearity(const CnlsCoefficients& coeffs) {
  if (coeffs.gamma() == 0.0) return NonlinearityKind::None;
  return coeffs.n_components() == 2 ? NonlinearityKind::Cme2 : NonlinearityKind::CubicQuintic;
}

ComplexState evaluate_nonlinearity(const ComplexState& u, const CnlsCoefficients& coeffs,
                                   NonlinearityKind kind) {
  if (u.n_components() != coeffs.n_components()) {
    throw ConfigError("nonlinearity: state and coefficients disagree on component count");
  }
  const auto n = make_nonlinearity(kind, coeffs.eps_q(), u.n_components());
  ComplexState out(u.layout(), u.grid(), u.n_components());
  n->evaluate(u, out, cplx(coeffs.gamma(), 0.0));
  return out;
}

ComplexState evaluate_nonlinearity(const ComplexState& u, const CnlsCoefficients& coeffs) {
  const NonlinearityKind kind = coeffs.n_components() == 2 ? NonlinearityKind::Cme2
                                                            : NonlinearityKind::CubicQuintic;
  return evaluate_nonlinearity(u, coeffs, kind);
}

}  // namespace pmlcnls
