#pragma once

#include <cmath>
#include <cstdint>

// Scalar reference kernels. These define the semantics the SIMD backends are
// equivalence-tested against.

namespace mixssl::kernels::scalar {

template <typename T>
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, T alpha, const T* a,
          int64_t lda, const T* b, int64_t ldb, T beta, T* c, int64_t ldc) {
  for (int64_t i = 0; i < m; ++i) {
    T* crow = c + i * ldc;
    if (beta == T(0)) {
      for (int64_t j = 0; j < n; ++j) crow[j] = T(0);
    } else if (beta != T(1)) {
      for (int64_t j = 0; j < n; ++j) crow[j] *= beta;
    }
  }
  if (!trans_a && !trans_b) {
    for (int64_t i = 0; i < m; ++i) {
      T* crow = c + i * ldc;
      for (int64_t p = 0; p < k; ++p) {
        const T av = alpha * a[i * lda + p];
        const T* brow = b + p * ldb;
        for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  } else if (!trans_a && trans_b) {
    for (int64_t i = 0; i < m; ++i) {
      const T* arow = a + i * lda;
      T* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) {
        const T* brow = b + j * ldb;
        T acc = T(0);
        for (int64_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
        crow[j] += alpha * acc;
      }
    }
  } else if (trans_a && !trans_b) {
    for (int64_t p = 0; p < k; ++p) {
      const T* arow = a + p * lda;
      const T* brow = b + p * ldb;
      for (int64_t i = 0; i < m; ++i) {
        const T av = alpha * arow[i];
        T* crow = c + i * ldc;
        for (int64_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  } else {
    for (int64_t i = 0; i < m; ++i) {
      T* crow = c + i * ldc;
      for (int64_t j = 0; j < n; ++j) {
        T acc = T(0);
        for (int64_t p = 0; p < k; ++p) acc += a[p * lda + i] * b[j * ldb + p];
        crow[j] += alpha * acc;
      }
    }
  }
}

// Computed in double and rounded once to T, so mix(x, x, l) stays within one
// ulp of x for float pixels.
template <typename T>
void mix(int64_t n, T lambda, const T* target, const T* aux, T* out) {
  const double lam = static_cast<double>(lambda);
  const double w = 1.0 - lam;
  for (int64_t i = 0; i < n; ++i) {
    out[i] = static_cast<T>(w * static_cast<double>(target[i]) +
                            lam * static_cast<double>(aux[i]));
  }
}

template <typename T>
void axpby(int64_t n, T alpha, const T* x, T beta, T* y) {
  if (beta == T(0)) {
    for (int64_t i = 0; i < n; ++i) y[i] = alpha * x[i];
  } else {
    for (int64_t i = 0; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
  }
}

template <typename T>
void relu_forward(int64_t n, const T* x, T* y) {
  for (int64_t i = 0; i < n; ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_backward(int64_t n, const T* x, const T* dy, T* dx) {
  for (int64_t i = 0; i < n; ++i) dx[i] = x[i] > T(0) ? dy[i] : T(0);
}

template <typename T>
double reduce_sum(int64_t n, const T* x) {
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) acc += static_cast<double>(x[i]);
  return acc;
}

template <typename T>
double dot(int64_t n, const T* x, const T* y) {
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    acc += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  }
  return acc;
}

template <typename T>
double squared_diff_sum(int64_t n, const T* a, const T* b) {
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

template <typename T>
double abs_diff_sum(int64_t n, const T* a, const T* b) {
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    acc += std::fabs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
  }
  return acc;
}

template <typename T>
void adamw_update(int64_t n, T* p, const T* g, T* m, T* v, T lr, T beta1, T beta2, T eps,
                  T weight_decay, int64_t step) {
  const double bc1 = 1.0 - std::pow(static_cast<double>(beta1), static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(static_cast<double>(beta2), static_cast<double>(step));
  const T inv_bc1 = static_cast<T>(1.0 / bc1);
  const T inv_bc2 = static_cast<T>(1.0 / bc2);
  const T one_m_b1 = T(1) - beta1;
  const T one_m_b2 = T(1) - beta2;
  for (int64_t i = 0; i < n; ++i) {
    m[i] = beta1 * m[i] + one_m_b1 * g[i];
    v[i] = beta2 * v[i] + one_m_b2 * g[i] * g[i];
    const T mhat = m[i] * inv_bc1;
    const T vhat = v[i] * inv_bc2;
    const T update = mhat / (std::sqrt(vhat) + eps);
    p[i] = p[i] - lr * update - weight_decay * p[i];
  }
}

}  // namespace mixssl::kernels::scalar
