#include "mixssl/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>
#include <type_traits>

#include "backend_scalar.hpp"
#ifdef MIXSSL_HAVE_AVX2
#include "backend_avx2.hpp"
#endif

#include "mixssl/core/errors.hpp"

namespace mixssl::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(MIXSSL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_backend() {
  if (const char* env = std::getenv("MIXSSL_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!cpu_has_avx2()) throw ConfigError("MIXSSL_KERNELS=avx2 but CPU lacks AVX2/FMA");
      return Backend::Avx2;
    }
    if (std::strcmp(env, "auto") != 0) {
      throw ConfigError(std::string("unknown MIXSSL_KERNELS value: ") + env);
    }
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{resolve_backend()};
  return slot;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw InvalidInput(std::string("kernel backend not supported on this CPU: ") +
                       backend_name(b));
  }
  backend_slot().store(b, std::memory_order_relaxed);
}

#ifdef MIXSSL_HAVE_AVX2
#define MIXSSL_DISPATCH(T, fn, f32name, f64name, ...)                \
  if constexpr (std::is_same_v<T, float>) {                          \
    if (active_backend() == Backend::Avx2)                           \
      return avx2::f32name(__VA_ARGS__);                             \
    return scalar::fn<float>(__VA_ARGS__);                           \
  } else {                                                           \
    if (active_backend() == Backend::Avx2)                           \
      return avx2::f64name(__VA_ARGS__);                             \
    return scalar::fn<double>(__VA_ARGS__);                          \
  }
#else
#define MIXSSL_DISPATCH(T, fn, f32name, f64name, ...) return scalar::fn<T>(__VA_ARGS__);
#endif

template <typename T>
void gemm(bool trans_a, bool trans_b, int64_t m, int64_t n, int64_t k, T alpha, const T* a,
          int64_t lda, const T* b, int64_t ldb, T beta, T* c, int64_t ldc) {
  MIXSSL_DISPATCH(T, gemm, gemm_f32, gemm_f64, trans_a, trans_b, m, n, k, alpha, a, lda, b, ldb,
                  beta, c, ldc)
}

template <typename T>
void mix(int64_t n, T lambda, const T* target, const T* aux, T* out) {
  MIXSSL_DISPATCH(T, mix, mix_f32, mix_f64, n, lambda, target, aux, out)
}

template <typename T>
void axpby(int64_t n, T alpha, const T* x, T beta, T* y) {
  MIXSSL_DISPATCH(T, axpby, axpby_f32, axpby_f64, n, alpha, x, beta, y)
}

template <typename T>
void relu_forward(int64_t n, const T* x, T* y) {
  MIXSSL_DISPATCH(T, relu_forward, relu_forward_f32, relu_forward_f64, n, x, y)
}

template <typename T>
void relu_backward(int64_t n, const T* x, const T* dy, T* dx) {
  MIXSSL_DISPATCH(T, relu_backward, relu_backward_f32, relu_backward_f64, n, x, dy, dx)
}

template <typename T>
double reduce_sum(int64_t n, const T* x) {
  MIXSSL_DISPATCH(T, reduce_sum, reduce_sum_f32, reduce_sum_f64, n, x)
}

template <typename T>
double dot(int64_t n, const T* x, const T* y) {
  MIXSSL_DISPATCH(T, dot, dot_f32, dot_f64, n, x, y)
}

template <typename T>
double squared_diff_sum(int64_t n, const T* a, const T* b) {
  MIXSSL_DISPATCH(T, squared_diff_sum, squared_diff_sum_f32, squared_diff_sum_f64, n, a, b)
}

template <typename T>
double abs_diff_sum(int64_t n, const T* a, const T* b) {
  MIXSSL_DISPATCH(T, abs_diff_sum, abs_diff_sum_f32, abs_diff_sum_f64, n, a, b)
}

template <typename T>
void adamw_update(int64_t n, T* p, const T* g, T* m, T* v, T lr, T beta1, T beta2, T eps,
                  T weight_decay, int64_t step) {
  MIXSSL_DISPATCH(T, adamw_update, adamw_update_f32, adamw_update_f64, n, p, g, m, v, lr, beta1,
                  beta2, eps, weight_decay, step)
}

#undef MIXSSL_DISPATCH

template void gemm<float>(bool, bool, int64_t, int64_t, int64_t, float, const float*, int64_t,
                          const float*, int64_t, float, float*, int64_t);
template void gemm<double>(bool, bool, int64_t, int64_t, int64_t, double, const double*, int64_t,
                           const double*, int64_t, double, double*, int64_t);
template void mix<float>(int64_t, float, const float*, const float*, float*);
template void mix<double>(int64_t, double, const double*, const double*, double*);
template void axpby<float>(int64_t, float, const float*, float, float*);
template void axpby<double>(int64_t, double, const double*, double, double*);
template void relu_forward<float>(int64_t, const float*, float*);
template void relu_forward<double>(int64_t, const double*, double*);
template void relu_backward<float>(int64_t, const float*, const float*, float*);
template void relu_backward<double>(int64_t, const double*, const double*, double*);
template double reduce_sum<float>(int64_t, const float*);
template double reduce_sum<double>(int64_t, const double*);
template double dot<float>(int64_t, const float*, const float*);
template double dot<double>(int64_t, const double*, const double*);
template double squared_diff_sum<float>(int64_t, const float*, const float*);
template double squared_diff_sum<double>(int64_t, const double*, const double*);
template double abs_diff_sum<float>(int64_t, const float*, const float*);
template double abs_diff_sum<double>(int64_t, const double*, const double*);
template void adamw_update<float>(int64_t, float*, const float*, float*, float*, float, float,
                                  float, float, float, int64_t);
template void adamw_update<double>(int64_t, double*, const double*, double*, double*, double,
                                   double, double, double, double, int64_t);

}  // namespace mixssl::kernels
