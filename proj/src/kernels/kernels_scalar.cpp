#include "pmlcnls/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmlcnls::kernels {
namespace {

void axpy(double a, const cplx* x, cplx* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

double norm_sq(const cplx* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::norm(x[k]);
  return s;
}

double diff_norm_sq(const cplx* x, const cplx* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::norm(x[k] - y[k]);
  return s;
}

double max_abs(const cplx* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(x[k]);
    if (std::isnan(a)) return std::numeric_limits<double>::quiet_NaN();
    m = std::max(m, a);
  }
  return m;
}

void cme2(const cplx* u1, const cplx* u2, cplx* out1, cplx* out2, std::size_t n, cplx scale,
          double eps_q) {
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = u1[k];
    const cplx b = u2[k];
    const double na = std::norm(a);
    const double nb = std::norm(b);
    out1[k] = scale * (a * (na + 2.0 * nb + eps_q * na * na) + b * b * std::conj(a));
    out2[k] = scale * (b * (nb + 2.0 * na + eps_q * nb * nb) + a * a * std::conj(b));
  }
}

void cubic_quintic(const cplx* u, cplx* out, std::size_t n, cplx scale, double eps_q) {
  for (std::size_t k = 0; k < n; ++k) {
    const double nu = std::norm(u[k]);
    out[k] = scale * (u[k] * (nu + eps_q * nu * nu));
  }
}

void stencil_rows(const cplx* const* rows, const double* w, cplx* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int r = 0; r < 5; ++r) {
      if (rows[r] != nullptr) s += w[r] * rows[r][k];
    }
    out[k] = s;
  }
}

void stencil_line(const cplx* in, const double* w, cplx* out, std::size_t n) {
  const auto ni = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t k = 0; k < ni; ++k) {
    cplx s = 0.0;
    for (std::ptrdiff_t r = 0; r < 5; ++r) {
      const std::ptrdiff_t m = k + r - 2;
      if (m >= 0 && m < ni) s += w[r] * in[m];
    }
    out[k] = s;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, "scalar",     &axpy,         &norm_sq,
                                 &diff_norm_sq, &max_abs,   &cme2,         &cubic_quintic,
                                 &stencil_rows, &stencil_line};
  return table;
}

}  // namespace pmlcnls::kernels
