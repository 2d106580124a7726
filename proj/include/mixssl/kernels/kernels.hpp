#pragma once

#include <cstdint>

namespace mixssl::kernels {

// Numeric inner loops behind the tensor/layer code. Every operation has a
// scalar reference implementation and, on x86-64 with AVX2+FMA, a vectorized
// variant. The backend is selected once at runtime (CPU probe, overridable
// via the MIXSSL_KERNELS environment variable or set_backend) and stays fixed
// for the process, so runs are bitwise reproducible on a given machine.
//
// Semantics notes:
//  * All matrices are row-major.
//  * Reductions accumulate in double regardless of T; backends may reassociate,
//    so scalar and SIMD results agree to rounding, not bitwise.
//  * Elementwise kernels apply the same per-element expression in both
//    backends (SIMD may contract mul+add into FMA).

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);

// Resolved once: MIXSSL_KERNELS env override ("scalar"/"avx2"), else the best
// supported backend.
Backend active_backend();

// Test/benchmark override. Throws InvalidInput if unsupported on this CPU.
void set_backend(Backend b);

// C(m,n) = alpha * op(A) * op(B) + beta * C, op controlled by trans flags.
// trans_a: A is (k,m) and used transposed; likewise trans_b: B is (n,k).
template <typename T>
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, T alpha, const T* a,
          int64_t lda, const T* b, int64_t ldb, T beta, T* c, int64_t ldc);

// out[i] = (1 - lambda) * target[i] + lambda * aux[i]
template <typename T>
void mix(int64_t n, T lambda, const T* target, const T* aux, T* out);

// y[i] = alpha * x[i] + beta * y[i]
template <typename T>
void axpby(int64_t n, T alpha, const T* x, T beta, T* y);

template <typename T>
void relu_forward(int64_t n, const T* x, T* y);

// dx[i] = dy[i] * (x[i] > 0)
template <typename T>
void relu_backward(int64_t n, const T* x, const T* dy, T* dx);

template <typename T>
double reduce_sum(int64_t n, const T* x);

template <typename T>
double dot(int64_t n, const T* x, const T* y);

// sum_i ((double)a[i] - (double)b[i])^2
template <typename T>
double squared_diff_sum(int64_t n, const T* a, const T* b);

// sum_i |(double)a[i] - (double)b[i]|
template <typename T>
double abs_diff_sum(int64_t n, const T* a, const T* b);

// One AdamW step with bias correction. Weight decay is decoupled and applied
// as a plain per-step decay (not scaled by the learning rate):
//   m = b1*m + (1-b1)*g;  v = b2*v + (1-b2)*g^2
//   p = p - lr * (m/(1-b1^t)) / (sqrt(v/(1-b2^t)) + eps) - wd * p
template <typename T>
void adamw_update(int64_t n, T* p, const T* g, T* m, T* v, T lr, T beta1, T beta2, T eps,
                  T weight_decay, int64_t step);

}  // namespace mixssl::kernels
