#include "backend_avx2.hpp"

#ifdef MIXSSL_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

// Vector widths: 8 lanes for float, 4 for double. Tails run scalar with the
// same per-element expressions as the vector body.

namespace mixssl::kernels::avx2 {

namespace {

inline float hsum256(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

inline double hsum256d(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline void scale_row_f32(float* c, int64_t n, float beta) {
  if (beta == 0.0f) {
    for (int64_t j = 0; j < n; ++j) c[j] = 0.0f;
  } else if (beta != 1.0f) {
    const __m256 vb = _mm256_set1_ps(beta);
    int64_t j = 0;
    for (; j + 8 <= n; j += 8) {
      _mm256_storeu_ps(c + j, _mm256_mul_ps(vb, _mm256_loadu_ps(c + j)));
    }
    for (; j < n; ++j) c[j] *= beta;
  }
}

inline void scale_row_f64(double* c, int64_t n, double beta) {
  if (beta == 0.0) {
    for (int64_t j = 0; j < n; ++j) c[j] = 0.0;
  } else if (beta != 1.0) {
    const __m256d vb = _mm256_set1_pd(beta);
    int64_t j = 0;
    for (; j + 4 <= n; j += 4) {
      _mm256_storeu_pd(c + j, _mm256_mul_pd(vb, _mm256_loadu_pd(c + j)));
    }
    for (; j < n; ++j) c[j] *= beta;
  }
}

// crow[0..n) += av * brow[0..n)
inline void axpy_row_f32(int64_t n, float av, const float* brow, float* crow) {
  const __m256 vav = _mm256_set1_ps(av);
  int64_t j = 0;
  for (; j + 16 <= n; j += 16) {
    __m256 c0 = _mm256_loadu_ps(crow + j);
    __m256 c1 = _mm256_loadu_ps(crow + j + 8);
    c0 = _mm256_fmadd_ps(vav, _mm256_loadu_ps(brow + j), c0);
    c1 = _mm256_fmadd_ps(vav, _mm256_loadu_ps(brow + j + 8), c1);
    _mm256_storeu_ps(crow + j, c0);
    _mm256_storeu_ps(crow + j + 8, c1);
  }
  for (; j + 8 <= n; j += 8) {
    __m256 c0 = _mm256_loadu_ps(crow + j);
    c0 = _mm256_fmadd_ps(vav, _mm256_loadu_ps(brow + j), c0);
    _mm256_storeu_ps(crow + j, c0);
  }
  for (; j < n; ++j) crow[j] += av * brow[j];
}

inline void axpy_row_f64(int64_t n, double av, const double* brow, double* crow) {
  const __m256d vav = _mm256_set1_pd(av);
  int64_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256d c0 = _mm256_loadu_pd(crow + j);
    __m256d c1 = _mm256_loadu_pd(crow + j + 4);
    c0 = _mm256_fmadd_pd(vav, _mm256_loadu_pd(brow + j), c0);
    c1 = _mm256_fmadd_pd(vav, _mm256_loadu_pd(brow + j + 4), c1);
    _mm256_storeu_pd(crow + j, c0);
    _mm256_storeu_pd(crow + j + 4, c1);
  }
  for (; j + 4 <= n; j += 4) {
    __m256d c0 = _mm256_loadu_pd(crow + j);
    c0 = _mm256_fmadd_pd(vav, _mm256_loadu_pd(brow + j), c0);
    _mm256_storeu_pd(crow + j, c0);
  }
  for (; j < n; ++j) crow[j] += av * brow[j];
}

inline float dot_row_f32(int64_t k, const float* x, const float* y) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  int64_t p = 0;
  for (; p + 16 <= k; p += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + p), _mm256_loadu_ps(y + p), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(x + p + 8), _mm256_loadu_ps(y + p + 8), acc1);
  }
  for (; p + 8 <= k; p += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + p), _mm256_loadu_ps(y + p), acc0);
  }
  float acc = hsum256(_mm256_add_ps(acc0, acc1));
  for (; p < k; ++p) acc += x[p] * y[p];
  return acc;
}

inline double dot_row_f64(int64_t k, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t p = 0;
  for (; p + 8 <= k; p += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + p), _mm256_loadu_pd(y + p), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + p + 4), _mm256_loadu_pd(y + p + 4), acc1);
  }
  for (; p + 4 <= k; p += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + p), _mm256_loadu_pd(y + p), acc0);
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; p < k; ++p) acc += x[p] * y[p];
  return acc;
}

}  // namespace

void gemm_f32(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, float alpha,
              const float* a, int64_t lda, const float* b, int64_t ldb, float beta, float* c,
              int64_t ldc) {
  for (int64_t i = 0; i < m; ++i) scale_row_f32(c + i * ldc, n, beta);
  if (!trans_a && !trans_b) {
    for (int64_t i = 0; i < m; ++i) {
      float* crow = c + i * ldc;
      for (int64_t p = 0; p < k; ++p) {
        axpy_row_f32(n, alpha * a[i * lda + p], b + p * ldb, crow);
      }
    }
  } else if (!trans_a && trans_b) {
    for (int64_t i = 0; i < m; ++i) {
      const float* arow = a + i * lda;
      float* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) {
        crow[j] += alpha * dot_row_f32(k, arow, b + j * ldb);
      }
    }
  } else if (trans_a && !trans_b) {
    for (int64_t p = 0; p < k; ++p) {
      const float* arow = a + p * lda;
      const float* brow = b + p * ldb;
      for (int64_t i = 0; i < m; ++i) {
        axpy_row_f32(n, alpha * arow[i], brow, c + i * ldc);
      }
    }
  } else {
    for (int64_t i = 0; i < m; ++i) {
      float* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) {
        float acc = 0.0f;
        for (int64_t p = 0; p < k; ++p) acc += a[p * lda + i] * b[j * ldb + p];
        crow[j] += alpha * acc;
      }
    }
  }
}

void gemm_f64(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, double alpha,
              const double* a, int64_t lda, const double* b, int64_t ldb, double beta, double* c,
              int64_t ldc) {
  for (int64_t i = 0; i < m; ++i) scale_row_f64(c + i * ldc, n, beta);
  if (!trans_a && !trans_b) {
    for (int64_t i = 0; i < m; ++i) {
      double* crow = c + i * ldc;
      for (int64_t p = 0; p < k; ++p) {
        axpy_row_f64(n, alpha * a[i * lda + p], b + p * ldb, crow);
      }
    }
  } else if (!trans_a && trans_b) {
    for (int64_t i = 0; i < m; ++i) {
      const double* arow = a + i * lda;
      double* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) {
        crow[j] += alpha * dot_row_f64(k, arow, b + j * ldb);
      }
    }
  } else if (trans_a && !trans_b) {
    for (int64_t p = 0; p < k; ++p) {
      const double* arow = a + p * lda;
      const double* brow = b + p * ldb;
      for (int64_t i = 0; i < m; ++i) {
        axpy_row_f64(n, alpha * arow[i], brow, c + i * ldc);
      }
    }
  } else {
    for (int64_t i = 0; i < m; ++i) {
      double* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int64_t p = 0; p < k; ++p) acc += a[p * lda + i] * b[j * ldb + p];
        crow[j] += alpha * acc;
      }
    }
  }
}

// Mixing is computed in double and rounded once, matching the scalar backend
// bitwise and keeping |mix(x,x,l) - x| within one float ulp.
void mix_f32(int64_t n, float lambda, const float* target, const float* aux, float* out) {
  const double lam = static_cast<double>(lambda);
  const __m256d vl = _mm256_set1_pd(lam);
  const __m256d vw = _mm256_set1_pd(1.0 - lam);
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 t = _mm256_loadu_ps(target + i);
    const __m256 a = _mm256_loadu_ps(aux + i);
    const __m256d tlo = _mm256_cvtps_pd(_mm256_castps256_ps128(t));
    const __m256d thi = _mm256_cvtps_pd(_mm256_extractf128_ps(t, 1));
    const __m256d alo = _mm256_cvtps_pd(_mm256_castps256_ps128(a));
    const __m256d ahi = _mm256_cvtps_pd(_mm256_extractf128_ps(a, 1));
    const __m256d rlo = _mm256_add_pd(_mm256_mul_pd(vw, tlo), _mm256_mul_pd(vl, alo));
    const __m256d rhi = _mm256_add_pd(_mm256_mul_pd(vw, thi), _mm256_mul_pd(vl, ahi));
    _mm256_storeu_ps(out + i,
                     _mm256_set_m128(_mm256_cvtpd_ps(rhi), _mm256_cvtpd_ps(rlo)));
  }
  const double w = 1.0 - lam;
  for (; i < n; ++i) {
    out[i] = static_cast<float>(w * static_cast<double>(target[i]) +
                                lam * static_cast<double>(aux[i]));
  }
}

void mix_f64(int64_t n, double lambda, const double* target, const double* aux, double* out) {
  const __m256d vl = _mm256_set1_pd(lambda);
  const __m256d vw = _mm256_set1_pd(1.0 - lambda);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_loadu_pd(target + i);
    const __m256d a = _mm256_loadu_pd(aux + i);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(vw, t), _mm256_mul_pd(vl, a)));
  }
  const double w = 1.0 - lambda;
  for (; i < n; ++i) out[i] = w * target[i] + lambda * aux[i];
}

void axpby_f32(int64_t n, float alpha, const float* x, float beta, float* y) {
  const __m256 va = _mm256_set1_ps(alpha);
  int64_t i = 0;
  if (beta == 0.0f) {
    for (; i + 8 <= n; i += 8) {
      _mm256_storeu_ps(y + i, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
    }
    for (; i < n; ++i) y[i] = alpha * x[i];
  } else {
    const __m256 vb = _mm256_set1_ps(beta);
    for (; i + 8 <= n; i += 8) {
      const __m256 vy = _mm256_mul_ps(vb, _mm256_loadu_ps(y + i));
      _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), vy));
    }
    for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
  }
}

void axpby_f64(int64_t n, double alpha, const double* x, double beta, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  int64_t i = 0;
  if (beta == 0.0) {
    for (; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = alpha * x[i];
  } else {
    const __m256d vb = _mm256_set1_pd(beta);
    for (; i + 4 <= n; i += 4) {
      const __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
      _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
    }
    for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
  }
}

void relu_forward_f32(int64_t n, const float* x, float* y) {
  const __m256 zero = _mm256_setzero_ps();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_max_ps(zero, _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_forward_f64(int64_t n, const double* x, double* y) {
  const __m256d zero = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward_f32(int64_t n, const float* x, const float* dy, float* dx) {
  const __m256 zero = _mm256_setzero_ps();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(x + i), zero, _CMP_GT_OQ);
    _mm256_storeu_ps(dx + i, _mm256_and_ps(mask, _mm256_loadu_ps(dy + i)));
  }
  for (; i < n; ++i) dx[i] = x[i] > 0.0f ? dy[i] : 0.0f;
}

void relu_backward_f64(int64_t n, const double* x, const double* dy, double* dx) {
  const __m256d zero = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(dx + i, _mm256_and_pd(mask, _mm256_loadu_pd(dy + i)));
  }
  for (; i < n; ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

double reduce_sum_f32(int64_t n, const float* x) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 v = _mm256_loadu_ps(x + i);
    acc0 = _mm256_add_pd(acc0, _mm256_cvtps_pd(_mm256_castps256_ps128(v)));
    acc1 = _mm256_add_pd(acc1, _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1)));
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(x[i]);
  return acc;
}

double reduce_sum_f64(int64_t n, const double* x) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_f32(int64_t n, const float* x, const float* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vx = _mm256_loadu_ps(x + i);
    const __m256 vy = _mm256_loadu_ps(y + i);
    acc0 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(vx)),
                           _mm256_cvtps_pd(_mm256_castps256_ps128(vy)), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(vx, 1)),
                           _mm256_cvtps_pd(_mm256_extractf128_ps(vy, 1)), acc1);
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  return acc;
}

double dot_f64(int64_t n, const double* x, const double* y) {
  return dot_row_f64(n, x, y);
}

double squared_diff_sum_f32(int64_t n, const float* a, const float* b) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 va = _mm256_loadu_ps(a + i);
    const __m256 vb = _mm256_loadu_ps(b + i);
    const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                     _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
    const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                     _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

double squared_diff_sum_f64(int64_t n, const double* a, const double* b) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
    acc1 = _mm256_fmadd_pd(d1, d1, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_fmadd_pd(d0, d0, acc0);
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double abs_diff_sum_f32(int64_t n, const float* a, const float* b) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 va = _mm256_loadu_ps(a + i);
    const __m256 vb = _mm256_loadu_ps(b + i);
    const __m256d d0 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(va)),
                                     _mm256_cvtps_pd(_mm256_castps256_ps128(vb)));
    const __m256d d1 = _mm256_sub_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(va, 1)),
                                     _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1)));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(signmask, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(signmask, d1));
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += std::fabs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return acc;
}

double abs_diff_sum_f64(int64_t n, const double* a, const double* b) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(signmask, d0));
    acc1 = _mm256_add_pd(acc1, _mm256_andnot_pd(signmask, d1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc0 = _mm256_add_pd(acc0, _mm256_andnot_pd(signmask, d0));
  }
  double acc = hsum256d(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

void adamw_update_f32(int64_t n, float* p, const float* g, float* m, float* v, float lr,
                      float beta1, float beta2, float eps, float weight_decay, int64_t step) {
  const double bc1 = 1.0 - std::pow(static_cast<double>(beta1), static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(static_cast<double>(beta2), static_cast<double>(step));
  const float inv_bc1 = static_cast<float>(1.0 / bc1);
  const float inv_bc2 = static_cast<float>(1.0 / bc2);
  const __m256 vb1 = _mm256_set1_ps(beta1);
  const __m256 vb2 = _mm256_set1_ps(beta2);
  const __m256 vomb1 = _mm256_set1_ps(1.0f - beta1);
  const __m256 vomb2 = _mm256_set1_ps(1.0f - beta2);
  const __m256 vibc1 = _mm256_set1_ps(inv_bc1);
  const __m256 vibc2 = _mm256_set1_ps(inv_bc2);
  const __m256 veps = _mm256_set1_ps(eps);
  const __m256 vlr = _mm256_set1_ps(lr);
  const __m256 vwd = _mm256_set1_ps(weight_decay);
  int64_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 vg = _mm256_loadu_ps(g + i);
    __m256 vm = _mm256_loadu_ps(m + i);
    __m256 vv = _mm256_loadu_ps(v + i);
    vm = _mm256_fmadd_ps(vomb1, vg, _mm256_mul_ps(vb1, vm));
    vv = _mm256_fmadd_ps(vomb2, _mm256_mul_ps(vg, vg), _mm256_mul_ps(vb2, vv));
    _mm256_storeu_ps(m + i, vm);
    _mm256_storeu_ps(v + i, vv);
    const __m256 mhat = _mm256_mul_ps(vm, vibc1);
    const __m256 vhat = _mm256_mul_ps(vv, vibc2);
    const __m256 update = _mm256_div_ps(mhat, _mm256_add_ps(_mm256_sqrt_ps(vhat), veps));
    const __m256 vp = _mm256_loadu_ps(p + i);
    __m256 out = _mm256_fnmadd_ps(vlr, update, vp);
    out = _mm256_fnmadd_ps(vwd, vp, out);
    _mm256_storeu_ps(p + i, out);
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
    const float mhat = m[i] * inv_bc1;
    const float vhat = v[i] * inv_bc2;
    const float update = mhat / (std::sqrt(vhat) + eps);
    p[i] = p[i] - lr * update - weight_decay * p[i];
  }
}

void adamw_update_f64(int64_t n, double* p, const double* g, double* m, double* v, double lr,
                      double beta1, double beta2, double eps, double weight_decay, int64_t step) {
  const double inv_bc1 = 1.0 / (1.0 - std::pow(beta1, static_cast<double>(step)));
  const double inv_bc2 = 1.0 / (1.0 - std::pow(beta2, static_cast<double>(step)));
  const __m256d vb1 = _mm256_set1_pd(beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2);
  const __m256d vomb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d vomb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d vibc1 = _mm256_set1_pd(inv_bc1);
  const __m256d vibc2 = _mm256_set1_pd(inv_bc2);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d vwd = _mm256_set1_pd(weight_decay);
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vm = _mm256_loadu_pd(m + i);
    __m256d vv = _mm256_loadu_pd(v + i);
    vm = _mm256_fmadd_pd(vomb1, vg, _mm256_mul_pd(vb1, vm));
    vv = _mm256_fmadd_pd(vomb2, _mm256_mul_pd(vg, vg), _mm256_mul_pd(vb2, vv));
    _mm256_storeu_pd(m + i, vm);
    _mm256_storeu_pd(v + i, vv);
    const __m256d mhat = _mm256_mul_pd(vm, vibc1);
    const __m256d vhat = _mm256_mul_pd(vv, vibc2);
    const __m256d update = _mm256_div_pd(mhat, _mm256_add_pd(_mm256_sqrt_pd(vhat), veps));
    const __m256d vp = _mm256_loadu_pd(p + i);
    __m256d out = _mm256_fnmadd_pd(vlr, update, vp);
    out = _mm256_fnmadd_pd(vwd, vp, out);
    _mm256_storeu_pd(p + i, out);
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = m[i] * inv_bc1;
    const double vhat = v[i] * inv_bc2;
    const double update = mhat / (std::sqrt(vhat) + eps);
    p[i] = p[i] - lr * update - weight_decay * p[i];
  }
}

}  // namespace mixssl::kernels::avx2

#endif  // MIXSSL_HAVE_AVX2
