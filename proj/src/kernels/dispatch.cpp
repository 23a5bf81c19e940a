#include <atomic>
#include <cstdlib>

#include "pmlcnls/kernels.hpp"

namespace pmlcnls::kernels {

#ifndef PMLCNLS_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_supports_avx2() {
#if defined(PMLCNLS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* initial_choice() {
  if (std::getenv("PMLCNLS_FORCE_SCALAR") == nullptr && cpu_supports_avx2()) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(Isa isa) {
  if (isa == Isa::Scalar) {
    current().store(&scalar_table());
    return true;
  }
  if (!cpu_supports_avx2()) return false;
  current().store(avx2_table());
  return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace pmlcnls::kernels
