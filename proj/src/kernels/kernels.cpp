#include "dusty/kernels/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace dusty::kernels {

#ifdef DUSTY_HAVE_AVX2
const KernelTable* avx2_table_impl();
#endif

bool avx2_available() {
#ifdef DUSTY_HAVE_AVX2
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_table() {
#ifdef DUSTY_HAVE_AVX2
  if (avx2_available()) return avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const KernelTable* pick_default() {
  if (std::getenv("DUSTY_NO_SIMD") != nullptr) return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

const KernelTable*& active_ptr() {
  static const KernelTable* p = pick_default();
  return p;
}

}  // namespace

const KernelTable& active() { return *active_ptr(); }

Backend active_backend() {
  return active_ptr() == &scalar_table() ? Backend::scalar : Backend::avx2;
}

void set_backend(Backend b) {
  if (b == Backend::scalar) {
    active_ptr() = &scalar_table();
    return;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr) throw std::runtime_error("avx2 backend not available");
  active_ptr() = t;
}

}  // namespace dusty::kernels
