#include "dusty/kernels/kernels.hpp"

#include <cmath>

// Reference backend. Every loop is the plain per-element formula; the AVX2
// backend mirrors these operation sequences exactly for the entries the
// bitwise contract covers.

namespace dusty::kernels {
namespace {

void k_add(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void k_sub(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void k_mul(const float* a, const float* b, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void k_mul_scalar(const float* a, float s, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void k_add_scalar(const float* a, float s, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s;
}

void k_axpy(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}

void k_madd(const float* a, const float* b, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + a[i] * b[i];
}

void k_leaky_relu(const float* x, float slope, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] >= 0.0f ? x[i] : x[i] * slope;
}

void k_leaky_relu_grad(const float* x, const float* g, float slope, float* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = out[i] + g[i] * (x[i] >= 0.0f ? 1.0f : slope);
}

void k_lerp_mask(const float* m, const float* x, float c, float* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = m[i] * x[i] + (1.0f - m[i]) * c;
}

void k_clamp(const float* x, float lo, float hi, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    float v = x[i];
    v = v < lo ? lo : v;
    v = v > hi ? hi : v;
    out[i] = v;
  }
}

void k_adam_update(float* p, float* m, float* v, const float* g, std::size_t n,
                   float lr, float beta1, float beta2, float inv_bc1,
                   float inv_bc2, float eps) {
  for (std::size_t i = 0; i < n; ++i) {
    const float gi = g[i];
    m[i] = beta1 * m[i] + (1.0f - beta1) * gi;
    v[i] = beta2 * v[i] + (1.0f - beta2) * (gi * gi);
    const float mhat = m[i] * inv_bc1;
    const float vhat = v[i] * inv_bc2;
    p[i] = p[i] - lr * (mhat / (std::sqrt(vhat) + eps));
  }
}

void k_ema_update(float* ema, const float* live, float decay, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    ema[i] = decay * ema[i] + (1.0f - decay) * live[i];
}

float k_dot(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

float k_sum(const float* a, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

float k_sum_abs(const float* a, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

float k_sum_sq(const float* a, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

float k_mean_abs_diff(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return n > 0 ? acc / static_cast<float>(n) : 0.0f;
}

float k_min_sqdist3(const float* xs, const float* ys, const float* zs,
                    std::size_t n, float qx, float qy, float qz) {
  float best = 3.4028235e38f;
  for (std::size_t i = 0; i < n; ++i) {
    const float dx = xs[i] - qx;
    const float dy = ys[i] - qy;
    const float dz = zs[i] - qz;
    const float d = (dx * dx + dy * dy) + dz * dz;
    best = d < best ? d : best;
  }
  return best;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      k_add,         k_sub,          k_mul,       k_mul_scalar,
      k_add_scalar,  k_axpy,         k_madd,      k_leaky_relu,
      k_leaky_relu_grad, k_lerp_mask, k_clamp,    k_adam_update,
      k_ema_update,  k_dot,          k_sum,       k_sum_abs,
      k_sum_sq,      k_mean_abs_diff, k_min_sqdist3,
  };
  return t;
}

}  // namespace dusty::kernels
