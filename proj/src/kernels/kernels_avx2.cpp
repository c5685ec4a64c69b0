#ifdef DUSTY_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

#include "dusty/kernels/kernels.hpp"

// AVX2 backend. Entries under the bitwise contract use only per-lane
// mul/add/sub/min/max/sqrt/div/blend so each element sees the exact operation
// sequence of the scalar reference; FMA appears only in the reductions.

namespace dusty::kernels {
namespace {

inline float hsum8(__m256 v) {
  // fixed tree order: (l0+l4)+(l2+l6) style pairwise reduction
  const __m128 lo = _mm256_castps256_ps128(v);
  const __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_add_ps(lo, hi);              // l0+l4, l1+l5, l2+l6, l3+l7
  __m128 sh = _mm_movehl_ps(s, s);            // l2+l6, l3+l7
  s = _mm_add_ps(s, sh);                      // pairs
  sh = _mm_shuffle_ps(s, s, 0x1);
  s = _mm_add_ss(s, sh);
  return _mm_cvtss_f32(s);
}

inline float hmin8(__m256 v) {
  const __m128 lo = _mm256_castps256_ps128(v);
  const __m128 hi = _mm256_extractf128_ps(v, 1);
  __m128 s = _mm_min_ps(lo, hi);
  __m128 sh = _mm_movehl_ps(s, s);
  s = _mm_min_ps(s, sh);
  sh = _mm_shuffle_ps(s, s, 0x1);
  s = _mm_min_ss(s, sh);
  return _mm_cvtss_f32(s);
}

void k_add(const float* a, const float* b, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void k_sub(const float* a, const float* b, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void k_mul(const float* a, const float* b, float* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void k_mul_scalar(const float* a, float s, float* out, std::size_t n) {
  const __m256 vs = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i), vs));
  for (; i < n; ++i) out[i] = a[i] * s;
}

void k_add_scalar(const float* a, float s, float* out, std::size_t n) {
  const __m256 vs = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i), vs));
  for (; i < n; ++i) out[i] = a[i] + s;
}

void k_axpy(float a, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 t = _mm256_mul_ps(va, _mm256_loadu_ps(x + i));
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), t));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void k_madd(const float* a, const float* b, float* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 t = _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
    _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_loadu_ps(y + i), t));
  }
  for (; i < n; ++i) y[i] = y[i] + a[i] * b[i];
}

void k_leaky_relu(const float* x, float slope, float* out, std::size_t n) {
  const __m256 vs = _mm256_set1_ps(slope);
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    const __m256 neg = _mm256_mul_ps(v, vs);
    const __m256 ge = _mm256_cmp_ps(v, zero, _CMP_GE_OQ);
    _mm256_storeu_ps(out + i, _mm256_blendv_ps(neg, v, ge));
  }
  for (; i < n; ++i) out[i] = x[i] >= 0.0f ? x[i] : x[i] * slope;
}

void k_leaky_relu_grad(const float* x, const float* g, float slope, float* out,
                       std::size_t n) {
  const __m256 vs = _mm256_set1_ps(slope);
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    const __m256 ge = _mm256_cmp_ps(v, zero, _CMP_GE_OQ);
    const __m256 f = _mm256_blendv_ps(vs, one, ge);
    const __m256 t = _mm256_mul_ps(_mm256_loadu_ps(g + i), f);
    _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(out + i), t));
  }
  for (; i < n; ++i) out[i] = out[i] + g[i] * (x[i] >= 0.0f ? 1.0f : slope);
}

void k_lerp_mask(const float* m, const float* x, float c, float* out,
                 std::size_t n) {
  const __m256 one = _mm256_set1_ps(1.0f);
  const __m256 vc = _mm256_set1_ps(c);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vm = _mm256_loadu_ps(m + i);
    const __m256 kept = _mm256_mul_ps(vm, _mm256_loadu_ps(x + i));
    const __m256 dropped = _mm256_mul_ps(_mm256_sub_ps(one, vm), vc);
    _mm256_storeu_ps(out + i, _mm256_add_ps(kept, dropped));
  }
  for (; i < n; ++i) out[i] = m[i] * x[i] + (1.0f - m[i]) * c;
}

void k_clamp(const float* x, float lo, float hi, float* out, std::size_t n) {
  const __m256 vlo = _mm256_set1_ps(lo);
  const __m256 vhi = _mm256_set1_ps(hi);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    v = _mm256_max_ps(v, vlo);
    v = _mm256_min_ps(v, vhi);
    _mm256_storeu_ps(out + i, v);
  }
  for (; i < n; ++i) {
    float v = x[i];
    v = v < lo ? lo : v;
    v = v > hi ? hi : v;
    out[i] = v;
  }
}

void k_adam_update(float* p, float* m, float* v, const float* g, std::size_t n,
                   float lr, float beta1, float beta2, float inv_bc1,
                   float inv_bc2, float eps) {
  const __m256 vb1 = _mm256_set1_ps(beta1);
  const __m256 vb2 = _mm256_set1_ps(beta2);
  const __m256 vib1 = _mm256_set1_ps(1.0f - beta1);
  const __m256 vib2 = _mm256_set1_ps(1.0f - beta2);
  const __m256 vbc1 = _mm256_set1_ps(inv_bc1);
  const __m256 vbc2 = _mm256_set1_ps(inv_bc2);
  const __m256 vlr = _mm256_set1_ps(lr);
  const __m256 veps = _mm256_set1_ps(eps);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 gi = _mm256_loadu_ps(g + i);
    __m256 mi = _mm256_add_ps(_mm256_mul_ps(vb1, _mm256_loadu_ps(m + i)),
                              _mm256_mul_ps(vib1, gi));
    __m256 vi = _mm256_add_ps(_mm256_mul_ps(vb2, _mm256_loadu_ps(v + i)),
                              _mm256_mul_ps(vib2, _mm256_mul_ps(gi, gi)));
    _mm256_storeu_ps(m + i, mi);
    _mm256_storeu_ps(v + i, vi);
    const __m256 mhat = _mm256_mul_ps(mi, vbc1);
    const __m256 vhat = _mm256_mul_ps(vi, vbc2);
    const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), veps);
    const __m256 step = _mm256_mul_ps(vlr, _mm256_div_ps(mhat, denom));
    _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), step));
  }
  for (; i < n; ++i) {
    const float gi = g[i];
    m[i] = beta1 * m[i] + (1.0f - beta1) * gi;
    v[i] = beta2 * v[i] + (1.0f - beta2) * (gi * gi);
    const float mhat = m[i] * inv_bc1;
    const float vhat = v[i] * inv_bc2;
    p[i] = p[i] - lr * (mhat / (std::sqrt(vhat) + eps));
  }
}

void k_ema_update(float* ema, const float* live, float decay, std::size_t n) {
  const __m256 vd = _mm256_set1_ps(decay);
  const __m256 vid = _mm256_set1_ps(1.0f - decay);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 t = _mm256_add_ps(_mm256_mul_ps(vd, _mm256_loadu_ps(ema + i)),
                                   _mm256_mul_ps(vid, _mm256_loadu_ps(live + i)));
    _mm256_storeu_ps(ema + i, t);
  }
  for (; i < n; ++i) ema[i] = decay * ema[i] + (1.0f - decay) * live[i];
}

float k_dot(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  __m256 acc2 = _mm256_setzero_ps();
  __m256 acc3 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 16), _mm256_loadu_ps(b + i + 16), acc2);
    acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 24), _mm256_loadu_ps(b + i + 24), acc3);
  }
  for (; i + 8 <= n; i += 8)
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  float total = hsum8(_mm256_add_ps(_mm256_add_ps(acc0, acc1), _mm256_add_ps(acc2, acc3)));
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

float k_sum(const float* a, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(a + i));
  float total = hsum8(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

float k_sum_abs(const float* a, std::size_t n) {
  const __m256 absmask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    acc = _mm256_add_ps(acc, _mm256_and_ps(_mm256_loadu_ps(a + i), absmask));
  float total = hsum8(acc);
  for (; i < n; ++i) total += std::fabs(a[i]);
  return total;
}

float k_sum_sq(const float* a, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(a + i);
    acc = _mm256_fmadd_ps(v, v, acc);
  }
  float total = hsum8(acc);
  for (; i < n; ++i) total += a[i] * a[i];
  return total;
}

float k_mean_abs_diff(const float* a, const float* b, std::size_t n) {
  const __m256 absmask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i));
    acc = _mm256_add_ps(acc, _mm256_and_ps(d, absmask));
  }
  float total = hsum8(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return n > 0 ? total / static_cast<float>(n) : 0.0f;
}

float k_min_sqdist3(const float* xs, const float* ys, const float* zs,
                    std::size_t n, float qx, float qy, float qz) {
  const __m256 vqx = _mm256_set1_ps(qx);
  const __m256 vqy = _mm256_set1_ps(qy);
  const __m256 vqz = _mm256_set1_ps(qz);
  __m256 best = _mm256_set1_ps(3.4028235e38f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 dx = _mm256_sub_ps(_mm256_loadu_ps(xs + i), vqx);
    const __m256 dy = _mm256_sub_ps(_mm256_loadu_ps(ys + i), vqy);
    const __m256 dz = _mm256_sub_ps(_mm256_loadu_ps(zs + i), vqz);
    const __m256 d = _mm256_add_ps(
        _mm256_add_ps(_mm256_mul_ps(dx, dx), _mm256_mul_ps(dy, dy)),
        _mm256_mul_ps(dz, dz));
    best = _mm256_min_ps(best, d);
  }
  float b = hmin8(best);
  for (; i < n; ++i) {
    const float dx = xs[i] - qx;
    const float dy = ys[i] - qy;
    const float dz = zs[i] - qz;
    const float d = (dx * dx + dy * dy) + dz * dz;
    b = d < b ? d : b;
  }
  return b;
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable t = {
      k_add,         k_sub,          k_mul,       k_mul_scalar,
      k_add_scalar,  k_axpy,         k_madd,      k_leaky_relu,
      k_leaky_relu_grad, k_lerp_mask, k_clamp,    k_adam_update,
      k_ema_update,  k_dot,          k_sum,       k_sum_abs,
      k_sum_sq,      k_mean_abs_diff, k_min_sqdist3,
  };
  return &t;
}

}  // namespace dusty::kernels

#endif  // DUSTY_HAVE_AVX2
