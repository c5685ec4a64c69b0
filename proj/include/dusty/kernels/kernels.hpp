#pragma once

#include <cstddef>

// Hot arithmetic loops behind a runtime-dispatched table: a scalar reference
// backend plus an AVX2 backend selected from CPUID at startup (override with
// DUSTY_NO_SIMD=1 in the environment, or set_backend() in tests).
//
// Equivalence contract, checked by tests/test_kernels.cpp:
//  * elementwise entries, min_sqdist3 and the optimizer updates produce
//    bit-identical results on every backend (same per-element operation
//    sequence, no FMA contraction);
//  * dot / sum / sum_abs / sum_sq / mean_abs_diff use backend-specific
//    accumulation order: deterministic within a backend, equal across
//    backends up to float rounding of the reduction.
// Transcendentals (tanh, exp, log) stay in ordinary scalar code elsewhere.

namespace dusty::kernels {

enum class Backend { scalar, avx2 };

struct KernelTable {
  // elementwise, out may alias inputs
  void (*add)(const float* a, const float* b, float* out, std::size_t n);
  void (*sub)(const float* a, const float* b, float* out, std::size_t n);
  void (*mul)(const float* a, const float* b, float* out, std::size_t n);
  void (*mul_scalar)(const float* a, float s, float* out, std::size_t n);
  void (*add_scalar)(const float* a, float s, float* out, std::size_t n);
  void (*axpy)(float a, const float* x, float* y, std::size_t n);  // y += a*x
  void (*madd)(const float* a, const float* b, float* y, std::size_t n);  // y += a*b
  void (*leaky_relu)(const float* x, float slope, float* out, std::size_t n);
  // out += g * (x >= 0 ? 1 : slope)
  void (*leaky_relu_grad)(const float* x, const float* g, float slope,
                          float* out, std::size_t n);
  // out = m*x + (1-m)*c
  void (*lerp_mask)(const float* m, const float* x, float c, float* out,
                    std::size_t n);
  void (*clamp)(const float* x, float lo, float hi, float* out, std::size_t n);
  // fused Adam step; inv_bc1/inv_bc2 are precomputed 1/(1-beta^t) factors
  void (*adam_update)(float* p, float* m, float* v, const float* g,
                      std::size_t n, float lr, float beta1, float beta2,
                      float inv_bc1, float inv_bc2, float eps);
  void (*ema_update)(float* ema, const float* live, float decay,
                     std::size_t n);

  // reductions
  float (*dot)(const float* a, const float* b, std::size_t n);
  float (*sum)(const float* a, std::size_t n);
  float (*sum_abs)(const float* a, std::size_t n);
  float (*sum_sq)(const float* a, std::size_t n);
  float (*mean_abs_diff)(const float* a, const float* b, std::size_t n);

  // nearest-neighbor inner loop: min over i of (xs[i]-qx)^2+(ys[i]-qy)^2+(zs[i]-qz)^2
  float (*min_sqdist3)(const float* xs, const float* ys, const float* zs,
                       std::size_t n, float qx, float qy, float qz);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when the build or CPU lacks AVX2

bool avx2_available();
Backend active_backend();
void set_backend(Backend b);  // throws if backend unavailable

const KernelTable& active();

// convenience wrappers through the active table
inline void add(const float* a, const float* b, float* o, std::size_t n) { active().add(a, b, o, n); }
inline void sub(const float* a, const float* b, float* o, std::size_t n) { active().sub(a, b, o, n); }
inline void mul(const float* a, const float* b, float* o, std::size_t n) { active().mul(a, b, o, n); }
inline void mul_scalar(const float* a, float s, float* o, std::size_t n) { active().mul_scalar(a, s, o, n); }
inline void add_scalar(const float* a, float s, float* o, std::size_t n) { active().add_scalar(a, s, o, n); }
inline void axpy(float a, const float* x, float* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void madd(const float* a, const float* b, float* y, std::size_t n) { active().madd(a, b, y, n); }
inline void leaky_relu(const float* x, float s, float* o, std::size_t n) { active().leaky_relu(x, s, o, n); }
inline void leaky_relu_grad(const float* x, const float* g, float s, float* o, std::size_t n) { active().leaky_relu_grad(x, g, s, o, n); }
inline void lerp_mask(const float* m, const float* x, float c, float* o, std::size_t n) { active().lerp_mask(m, x, c, o, n); }
inline void clamp(const float* x, float lo, float hi, float* o, std::size_t n) { active().clamp(x, lo, hi, o, n); }
inline void adam_update(float* p, float* m, float* v, const float* g, std::size_t n, float lr, float b1, float b2, float ibc1, float ibc2, float eps) { active().adam_update(p, m, v, g, n, lr, b1, b2, ibc1, ibc2, eps); }
inline void ema_update(float* e, const float* l, float d, std::size_t n) { active().ema_update(e, l, d, n); }
inline float dot(const float* a, const float* b, std::size_t n) { return active().dot(a, b, n); }
inline float sum(const float* a, std::size_t n) { return active().sum(a, n); }
inline float sum_abs(const float* a, std::size_t n) { return active().sum_abs(a, n); }
inline float sum_sq(const float* a, std::size_t n) { return active().sum_sq(a, n); }
inline float mean_abs_diff(const float* a, const float* b, std::size_t n) { return active().mean_abs_diff(a, b, n); }
inline float min_sqdist3(const float* xs, const float* ys, const float* zs, std::size_t n, float qx, float qy, float qz) { return active().min_sqdist3(xs, ys, zs, n, qx, qy, qz); }

}  // namespace dusty::kernels
