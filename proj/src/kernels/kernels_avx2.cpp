// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPUID check. Two complex doubles per 256-bit register, interleaved (re, im).

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmlcnls/kernels.hpp"

namespace pmlcnls::kernels {
namespace {

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d ar = _mm256_movedup_pd(a);
  const __m256d ai = _mm256_permute_pd(a, 0xF);
  const __m256d bs = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

inline __m256d conj2(__m256d a) { return _mm256_xor_pd(a, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0)); }

// |z|^2 broadcast into both lanes of each complex
inline __m256d norm2(__m256d a) {
  const __m256d sq = _mm256_mul_pd(a, a);
  return _mm256_hadd_pd(sq, sq);
}

inline __m256d broadcast(cplx z) { return _mm256_set_pd(z.imag(), z.real(), z.imag(), z.real()); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void axpy(double a, const cplx* x, cplx* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) store2(y + k, _mm256_fmadd_pd(va, load2(x + k), load2(y + k)));
  for (; k < n; ++k) y[k] += a * x[k];
}

double norm_sq(const cplx* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = load2(x + k);
    const __m256d b = load2(x + k + 2);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += std::norm(x[k]);
  return s;
}

double diff_norm_sq(const cplx* x, const cplx* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d d = _mm256_sub_pd(load2(x + k), load2(y + k));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += std::norm(x[k] - y[k]);
  return s;
}

double max_abs(const cplx* x, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  __m256d nan_seen = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d a = norm2(load2(x + k));
    nan_seen = _mm256_or_pd(nan_seen, _mm256_cmp_pd(a, a, _CMP_UNORD_Q));
    m = _mm256_max_pd(m, a);
  }
  if (_mm256_movemask_pd(nan_seen) != 0) return std::numeric_limits<double>::quiet_NaN();
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double best = std::sqrt(std::max(lanes[0], lanes[2]));
  for (; k < n; ++k) {
    const double a = std::abs(x[k]);
    if (std::isnan(a)) return a;
    best = std::max(best, a);
  }
  return best;
}

void cme2(const cplx* u1, const cplx* u2, cplx* out1, cplx* out2, std::size_t n, cplx scale,
          double eps_q) {
  const __m256d vs = broadcast(scale);
  const __m256d ve = _mm256_set1_pd(eps_q);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d a = load2(u1 + k);
    const __m256d b = load2(u2 + k);
    const __m256d na = norm2(a);
    const __m256d nb = norm2(b);
    // na + 2 nb + eps na^2
    const __m256d fa = _mm256_fmadd_pd(_mm256_mul_pd(ve, na), na, _mm256_fmadd_pd(two, nb, na));
    const __m256d fb = _mm256_fmadd_pd(_mm256_mul_pd(ve, nb), nb, _mm256_fmadd_pd(two, na, nb));
    const __m256d r1 = _mm256_add_pd(_mm256_mul_pd(a, fa), cmul(cmul(b, b), conj2(a)));
    const __m256d r2 = _mm256_add_pd(_mm256_mul_pd(b, fb), cmul(cmul(a, a), conj2(b)));
    store2(out1 + k, cmul(vs, r1));
    store2(out2 + k, cmul(vs, r2));
  }
  if (k < n) scalar_table().cme2(u1 + k, u2 + k, out1 + k, out2 + k, n - k, scale, eps_q);
}

void cubic_quintic(const cplx* u, cplx* out, std::size_t n, cplx scale, double eps_q) {
  const __m256d vs = broadcast(scale);
  const __m256d ve = _mm256_set1_pd(eps_q);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d a = load2(u + k);
    const __m256d na = norm2(a);
    const __m256d f = _mm256_fmadd_pd(_mm256_mul_pd(ve, na), na, na);
    store2(out + k, cmul(vs, _mm256_mul_pd(a, f)));
  }
  if (k < n) scalar_table().cubic_quintic(u + k, out + k, n - k, scale, eps_q);
}

void stencil_rows(const cplx* const* rows, const double* w, cplx* out, std::size_t n) {
  int active[5];
  int count = 0;
  for (int r = 0; r < 5; ++r) {
    if (rows[r] != nullptr && w[r] != 0.0) active[count++] = r;
  }
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m256d s = _mm256_setzero_pd();
    for (int c = 0; c < count; ++c) {
      const int r = active[c];
      s = _mm256_fmadd_pd(_mm256_set1_pd(w[r]), load2(rows[r] + k), s);
    }
    store2(out + k, s);
  }
  for (; k < n; ++k) {
    cplx s = 0.0;
    for (int c = 0; c < count; ++c) s += w[active[c]] * rows[active[c]][k];
    out[k] = s;
  }
}

void stencil_line(const cplx* in, const double* w, cplx* out, std::size_t n) {
  if (n < 6) {
    scalar_table().stencil_line(in, w, out, n);
    return;
  }
  const __m256d w0 = _mm256_set1_pd(w[0]);
  const __m256d w1 = _mm256_set1_pd(w[1]);
  const __m256d w2 = _mm256_set1_pd(w[2]);
  const __m256d w3 = _mm256_set1_pd(w[3]);
  const __m256d w4 = _mm256_set1_pd(w[4]);
  auto edge = [&](std::size_t k) {
    cplx s = 0.0;
    for (std::size_t r = 0; r < 5; ++r) {
      const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(k + r) - 2;
      if (m >= 0 && m < static_cast<std::ptrdiff_t>(n)) s += w[r] * in[m];
    }
    out[k] = s;
  };
  edge(0);
  edge(1);
  std::size_t k = 2;
  for (; k + 2 <= n - 2; k += 2) {
    __m256d s = _mm256_mul_pd(w0, load2(in + k - 2));
    s = _mm256_fmadd_pd(w1, load2(in + k - 1), s);
    s = _mm256_fmadd_pd(w2, load2(in + k), s);
    s = _mm256_fmadd_pd(w3, load2(in + k + 1), s);
    s = _mm256_fmadd_pd(w4, load2(in + k + 2), s);
    store2(out + k, s);
  }
  for (; k < n; ++k) edge(k);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::Avx2,    "avx2",        &axpy, &norm_sq,      &diff_norm_sq,
                                 &max_abs,     &cme2,         &cubic_quintic,      &stencil_rows,
                                 &stencil_line};
  return &table;
}

}  // namespace pmlcnls::kernels
