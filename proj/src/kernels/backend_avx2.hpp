#pragma once

#include <cstdint>

// AVX2+FMA kernel entry points (defined in avx2.cpp, which is the only TU
// compiled with -mavx2 -mfma). Callers must check CPU support first.

namespace mixssl::kernels::avx2 {

void gemm_f32(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, float alpha,
              const float* a, int64_t lda, const float* b, int64_t ldb, float beta, float* c,
              int64_t ldc);
void gemm_f64(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, double alpha,
              const double* a, int64_t lda, const double* b, int64_t ldb, double beta, double* c,
              int64_t ldc);

void mix_f32(int64_t n, float lambda, const float* target, const float* aux, float* out);
void mix_f64(int64_t n, double lambda, const double* target, const double* aux, double* out);

void axpby_f32(int64_t n, float alpha, const float* x, float beta, float* y);
void axpby_f64(int64_t n, double alpha, const double* x, double beta, double* y);

void relu_forward_f32(int64_t n, const float* x, float* y);
void relu_forward_f64(int64_t n, const double* x, double* y);
void relu_backward_f32(int64_t n, const float* x, const float* dy, float* dx);
void relu_backward_f64(int64_t n, const double* x, const double* dy, double* dx);

double reduce_sum_f32(int64_t n, const float* x);
double reduce_sum_f64(int64_t n, const double* x);
double dot_f32(int64_t n, const float* x, const float* y);
double dot_f64(int64_t n, const double* x, const double* y);
double squared_diff_sum_f32(int64_t n, const float* a, const float* b);
double squared_diff_sum_f64(int64_t n, const double* a, const double* b);
double abs_diff_sum_f32(int64_t n, const float* a, const float* b);
double abs_diff_sum_f64(int64_t n, const double* a, const double* b);

void adamw_update_f32(int64_t n, float* p, const float* g, float* m, float* v, float lr,
                      float beta1, float beta2, float eps, float weight_decay, int64_t step);
void adamw_update_f64(int64_t n, double* p, const double* g, double* m, double* v, double lr,
                      double beta1, double beta2, double eps, double weight_decay, int64_t step);

}  // namespace mixssl::kernels::avx2
