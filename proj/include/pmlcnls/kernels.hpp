#pragma once

// Data-parallel inner loops with a portable scalar reference and an AVX2/FMA
// variant. The variant is picked once at startup from CPUID; both tables are
// always reachable so tests can compare them element by element.

#include <complex>
#include <cstddef>
#include <string_view>

namespace pmlcnls::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  /// y += a * x
  void (*axpy)(double a, const cplx* x, cplx* y, std::size_t n);
  /// sum |x|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  /// sum |x - y|^2
  double (*diff_norm_sq)(const cplx* x, const cplx* y, std::size_t n);
  /// max |x|; NaN if any entry is NaN
  double (*max_abs)(const cplx* x, std::size_t n);

  /// Two-component cubic-quintic coupling, scaled by `scale`:
  ///   out1 = scale * (u1 (|u1|^2 + 2|u2|^2 + eps_q |u1|^4) + u2^2 conj(u1)), same for out2.
  void (*cme2)(const cplx* u1, const cplx* u2, cplx* out1, cplx* out2, std::size_t n,
               cplx scale, double eps_q);
  /// out = scale * (|u|^2 u + eps_q |u|^4 u)
  void (*cubic_quintic)(const cplx* u, cplx* out, std::size_t n, cplx scale, double eps_q);

  /// out[k] = sum_r w[r] * rows[r][k] for five rows; a null row counts as zero.
  void (*stencil_rows)(const cplx* const* rows, const double* w, cplx* out, std::size_t n);
  /// Five-point stencil along a contiguous line with two zero ghosts per side:
  /// out[k] = sum_r w[r] * in[k + r - 2].
  void (*stencil_line)(const cplx* in, const double* w, cplx* out, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the AVX2 variant is not compiled in.
const KernelTable* avx2_table();
bool cpu_supports_avx2();

/// Table used by the solver. Defaults to AVX2 when compiled and supported,
/// unless PMLCNLS_FORCE_SCALAR is set in the environment.
const KernelTable& active();
/// Overrides the selection; returns false if the ISA is unavailable.
bool select(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace pmlcnls::kernels
