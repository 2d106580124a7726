#include "mixssl/nn/layers.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "mixssl/core/errors.hpp"
#include "mixssl/kernels/kernels.hpp"

namespace mixssl::nn {

namespace {

template <typename T>
void im2col(const T* x, int64_t channels, int64_t h, int64_t w, int64_t kernel, int64_t stride,
            int64_t padding, int64_t oh, int64_t ow, T* col) {
  for (int64_t c = 0; c < channels; ++c) {
    for (int64_t ky = 0; ky < kernel; ++ky) {
      for (int64_t kx = 0; kx < kernel; ++kx) {
        T* row = col + ((c * kernel + ky) * kernel + kx) * (oh * ow);
        for (int64_t oy = 0; oy < oh; ++oy) {
          const int64_t iy = oy * stride - padding + ky;
          if (iy < 0 || iy >= h) {
            for (int64_t ox = 0; ox < ow; ++ox) row[oy * ow + ox] = T(0);
            continue;
          }
          for (int64_t ox = 0; ox < ow; ++ox) {
            const int64_t ix = ox * stride - padding + kx;
            row[oy * ow + ox] = (ix >= 0 && ix < w) ? x[(c * h + iy) * w + ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, int64_t channels, int64_t h, int64_t w, int64_t kernel,
                int64_t stride, int64_t padding, int64_t oh, int64_t ow, T* x) {
  for (int64_t c = 0; c < channels; ++c) {
    for (int64_t ky = 0; ky < kernel; ++ky) {
      for (int64_t kx = 0; kx < kernel; ++kx) {
        const T* row = col + ((c * kernel + ky) * kernel + kx) * (oh * ow);
        for (int64_t oy = 0; oy < oh; ++oy) {
          const int64_t iy = oy * stride - padding + ky;
          if (iy < 0 || iy >= h) continue;
          for (int64_t ox = 0; ox < ow; ++ox) {
            const int64_t ix = ox * stride - padding + kx;
            if (ix >= 0 && ix < w) x[(c * h + iy) * w + ix] += row[oy * ow + ox];
          }
        }
      }
    }
  }
}

template <typename T>
void check_rank4(const Tensor<T>& x, const char* who) {
  if (x.rank() != 4) {
    throw InvalidInput(std::string(who) + ": expected (batch, channels, h, w), got " +
                       x.shape_str());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Conv2d

template <typename T>
Conv2d<T>::Conv2d(std::string name, int64_t in_ch, int64_t out_ch, int64_t kernel, int64_t stride,
                  int64_t padding)
    : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel), stride_(stride), padding_(padding) {
  weight_ = std::make_shared<Param<T>>(name + ".weight",
                                       Tensor<T>({out_ch, in_ch * kernel * kernel}));
  bias_ = std::make_shared<Param<T>>(name + ".bias", Tensor<T>({out_ch}));
}

template <typename T>
void Conv2d<T>::init(RngStream& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_ch_ * kernel_ * kernel_));
  for (int64_t i = 0; i < weight_->value.numel(); ++i) {
    weight_->value[i] = static_cast<T>(rng.uniform(-bound, bound));
  }
  for (int64_t i = 0; i < bias_->value.numel(); ++i) {
    bias_->value[i] = static_cast<T>(rng.uniform(-bound, bound));
  }
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x, bool training) {
  check_rank4(x, "conv2d");
  if (x.dim(1) != in_ch_) {
    throw InvalidInput("conv2d: channel mismatch, expected " + std::to_string(in_ch_) + ", got " +
                       std::to_string(x.dim(1)));
  }
  const int64_t batch = x.dim(0), h = x.dim(2), w = x.dim(3);
  const int64_t oh = (h + 2 * padding_ - kernel_) / stride_ + 1;
  const int64_t ow = (w + 2 * padding_ - kernel_) / stride_ + 1;
  if (oh < 1 || ow < 1) throw InvalidInput("conv2d: input too small for kernel");

  const int64_t ckk = in_ch_ * kernel_ * kernel_;
  Tensor<T> col({ckk, oh * ow});
  Tensor<T> out({batch, out_ch_, oh, ow});
  for (int64_t b = 0; b < batch; ++b) {
    im2col(x.data() + b * in_ch_ * h * w, in_ch_, h, w, kernel_, stride_, padding_, oh, ow,
           col.data());
    T* out_b = out.data() + b * out_ch_ * oh * ow;
    kernels::gemm<T>(false, false, out_ch_, oh * ow, ckk, T(1), weight_->value.data(), ckk,
                     col.data(), oh * ow, T(0), out_b, oh * ow);
    for (int64_t oc = 0; oc < out_ch_; ++oc) {
      const T bv = bias_->value[oc];
      T* row = out_b + oc * oh * ow;
      for (int64_t i = 0; i < oh * ow; ++i) row[i] += bv;
    }
  }
  if (training) cached_input_ = x;
  return out;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& dy) {
  const Tensor<T>& x = cached_input_;
  const int64_t batch = x.dim(0), h = x.dim(2), w = x.dim(3);
  const int64_t oh = dy.dim(2), ow = dy.dim(3);
  const int64_t ckk = in_ch_ * kernel_ * kernel_;

  Tensor<T> col({ckk, oh * ow});
  Tensor<T> dcol({ckk, oh * ow});
  Tensor<T> dx(x.shape());
  for (int64_t b = 0; b < batch; ++b) {
    const T* x_b = x.data() + b * in_ch_ * h * w;
    const T* dy_b = dy.data() + b * out_ch_ * oh * ow;
    im2col(x_b, in_ch_, h, w, kernel_, stride_, padding_, oh, ow, col.data());
    // dW += dy_b * col^T
    kernels::gemm<T>(false, true, out_ch_, ckk, oh * ow, T(1), dy_b, oh * ow, col.data(), oh * ow,
                     T(1), weight_->grad.data(), ckk);
    for (int64_t oc = 0; oc < out_ch_; ++oc) {
      bias_->grad[oc] += static_cast<T>(kernels::reduce_sum(oh * ow, dy_b + oc * oh * ow));
    }
    // dcol = W^T * dy_b
    kernels::gemm<T>(true, false, ckk, oh * ow, out_ch_, T(1), weight_->value.data(), ckk, dy_b,
                     oh * ow, T(0), dcol.data(), oh * ow);
    col2im_add(dcol.data(), in_ch_, h, w, kernel_, stride_, padding_, oh, ow,
               dx.data() + b * in_ch_ * h * w);
  }
  return dx;
}

template <typename T>
void Conv2d<T>::collect_params(std::vector<ParamPtr<T>>& out) const {
  out.push_back(weight_);
  out.push_back(bias_);
}

// ---------------------------------------------------------------------------
// Linear

template <typename T>
Linear<T>::Linear(std::string name, int64_t in_dim, int64_t out_dim)
    : in_dim_(in_dim), out_dim_(out_dim) {
  weight_ = std::make_shared<Param<T>>(name + ".weight", Tensor<T>({out_dim, in_dim}));
  bias_ = std::make_shared<Param<T>>(name + ".bias", Tensor<T>({out_dim}));
}

template <typename T>
void Linear<T>::init(RngStream& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim_));
  for (int64_t i = 0; i < weight_->value.numel(); ++i) {
    weight_->value[i] = static_cast<T>(rng.uniform(-bound, bound));
  }
  for (int64_t i = 0; i < bias_->value.numel(); ++i) {
    bias_->value[i] = static_cast<T>(rng.uniform(-bound, bound));
  }
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& x, bool training) {
  if (x.rank() != 2 || x.dim(1) != in_dim_) {
    throw InvalidInput("linear: expected (batch, " + std::to_string(in_dim_) + "), got " +
                       x.shape_str());
  }
  const int64_t batch = x.dim(0);
  Tensor<T> y({batch, out_dim_});
  kernels::gemm<T>(false, true, batch, out_dim_, in_dim_, T(1), x.data(), in_dim_,
                   weight_->value.data(), in_dim_, T(0), y.data(), out_dim_);
  for (int64_t b = 0; b < batch; ++b) {
    T* row = y.data() + b * out_dim_;
    for (int64_t j = 0; j < out_dim_; ++j) row[j] += bias_->value[j];
  }
  if (training) cached_input_ = x;
  return y;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& dy) {
  const Tensor<T>& x = cached_input_;
  const int64_t batch = x.dim(0);
  // dW += dy^T * x
  kernels::gemm<T>(true, false, out_dim_, in_dim_, batch, T(1), dy.data(), out_dim_, x.data(),
                   in_dim_, T(1), weight_->grad.data(), in_dim_);
  for (int64_t b = 0; b < batch; ++b) {
    const T* row = dy.data() + b * out_dim_;
    for (int64_t j = 0; j < out_dim_; ++j) bias_->grad[j] += row[j];
  }
  Tensor<T> dx({batch, in_dim_});
  kernels::gemm<T>(false, false, batch, in_dim_, out_dim_, T(1), dy.data(), out_dim_,
                   weight_->value.data(), in_dim_, T(0), dx.data(), in_dim_);
  return dx;
}

template <typename T>
void Linear<T>::collect_params(std::vector<ParamPtr<T>>& out) const {
  out.push_back(weight_);
  out.push_back(bias_);
}

// ---------------------------------------------------------------------------
// Activations

template <typename T>
Tensor<T> ReLU<T>::forward(const Tensor<T>& x, bool training) {
  Tensor<T> y(x.shape());
  kernels::relu_forward(x.numel(), x.data(), y.data());
  if (training) cached_input_ = x;
  return y;
}

template <typename T>
Tensor<T> ReLU<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dx(dy.shape());
  kernels::relu_backward(dy.numel(), cached_input_.data(), dy.data(), dx.data());
  return dx;
}

template <typename T>
Tensor<T> Sigmoid<T>::forward(const Tensor<T>& x, bool training) {
  Tensor<T> y(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) {
    const T v = x[i];
    if (v >= T(0)) {
      y[i] = T(1) / (T(1) + std::exp(-v));
    } else {
      const T e = std::exp(v);
      y[i] = e / (T(1) + e);
    }
  }
  if (training) cached_output_ = y;
  return y;
}

template <typename T>
Tensor<T> Sigmoid<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dx(dy.shape());
  for (int64_t i = 0; i < dy.numel(); ++i) {
    const T s = cached_output_[i];
    dx[i] = dy[i] * s * (T(1) - s);
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Pooling / shape

template <typename T>
Tensor<T> GlobalAvgPool<T>::forward(const Tensor<T>& x, bool training) {
  check_rank4(x, "global_avg_pool");
  const int64_t batch = x.dim(0), channels = x.dim(1), hw = x.dim(2) * x.dim(3);
  Tensor<T> y({batch, channels});
  for (int64_t b = 0; b < batch; ++b) {
    for (int64_t c = 0; c < channels; ++c) {
      y(b, c) = static_cast<T>(kernels::reduce_sum(hw, x.data() + (b * channels + c) * hw) /
                               static_cast<double>(hw));
    }
  }
  if (training) cached_shape_ = x.shape();
  return y;
}

template <typename T>
Tensor<T> GlobalAvgPool<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dx(cached_shape_);
  const int64_t batch = cached_shape_[0], channels = cached_shape_[1],
                hw = cached_shape_[2] * cached_shape_[3];
  const T inv = T(1) / static_cast<T>(hw);
  for (int64_t b = 0; b < batch; ++b) {
    for (int64_t c = 0; c < channels; ++c) {
      const T g = dy(b, c) * inv;
      T* row = dx.data() + (b * channels + c) * hw;
      for (int64_t i = 0; i < hw; ++i) row[i] = g;
    }
  }
  return dx;
}

template <typename T>
Tensor<T> Reshape<T>::forward(const Tensor<T>& x, bool training) {
  if (x.rank() != 2 || x.dim(1) != c_ * h_ * w_) {
    throw InvalidInput("reshape: expected (batch, " + std::to_string(c_ * h_ * w_) + "), got " +
                       x.shape_str());
  }
  if (training) cached_shape_ = x.shape();
  Tensor<T> y = x;
  y.reshape({x.dim(0), c_, h_, w_});
  return y;
}

template <typename T>
Tensor<T> Reshape<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dx = dy;
  dx.reshape(cached_shape_);
  return dx;
}

template <typename T>
Tensor<T> UpsampleNearest2x<T>::forward(const Tensor<T>& x, bool training) {
  (void)training;
  check_rank4(x, "upsample2x");
  const int64_t batch = x.dim(0), channels = x.dim(1), h = x.dim(2), w = x.dim(3);
  Tensor<T> y({batch, channels, 2 * h, 2 * w});
  for (int64_t bc = 0; bc < batch * channels; ++bc) {
    const T* src = x.data() + bc * h * w;
    T* dst = y.data() + bc * 4 * h * w;
    for (int64_t yy = 0; yy < 2 * h; ++yy) {
      const T* srow = src + (yy / 2) * w;
      T* drow = dst + yy * 2 * w;
      for (int64_t xx = 0; xx < 2 * w; ++xx) drow[xx] = srow[xx / 2];
    }
  }
  return y;
}

template <typename T>
Tensor<T> UpsampleNearest2x<T>::backward(const Tensor<T>& dy) {
  const int64_t batch = dy.dim(0), channels = dy.dim(1), h = dy.dim(2) / 2, w = dy.dim(3) / 2;
  Tensor<T> dx({batch, channels, h, w});
  for (int64_t bc = 0; bc < batch * channels; ++bc) {
    const T* src = dy.data() + bc * 4 * h * w;
    T* dst = dx.data() + bc * h * w;
    for (int64_t yy = 0; yy < 2 * h; ++yy) {
      const T* srow = src + yy * 2 * w;
      T* drow = dst + (yy / 2) * w;
      for (int64_t xx = 0; xx < 2 * w; ++xx) drow[xx / 2] += srow[xx];
    }
  }
  return dx;
}

template <typename T>
Tensor<T> MaxPool2d<T>::forward(const Tensor<T>& x, bool training) {
  check_rank4(x, "maxpool2d");
  const int64_t batch = x.dim(0), channels = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int64_t oh = (h + 2 * padding_ - kernel_) / stride_ + 1;
  const int64_t ow = (w + 2 * padding_ - kernel_) / stride_ + 1;
  if (oh < 1 || ow < 1) throw InvalidInput("maxpool2d: input too small");
  Tensor<T> y({batch, channels, oh, ow});
  std::vector<int64_t> argmax;
  if (training) argmax.resize(static_cast<size_t>(y.numel()));
  int64_t oidx = 0;
  for (int64_t bc = 0; bc < batch * channels; ++bc) {
    const T* src = x.data() + bc * h * w;
    for (int64_t oy = 0; oy < oh; ++oy) {
      for (int64_t ox = 0; ox < ow; ++ox, ++oidx) {
        T best = -std::numeric_limits<T>::infinity();
        int64_t best_idx = -1;
        for (int64_t ky = 0; ky < kernel_; ++ky) {
          const int64_t iy = oy * stride_ - padding_ + ky;
          if (iy < 0 || iy >= h) continue;
          for (int64_t kx = 0; kx < kernel_; ++kx) {
            const int64_t ix = ox * stride_ - padding_ + kx;
            if (ix < 0 || ix >= w) continue;
            const T v = src[iy * w + ix];
            if (v > best) {
              best = v;
              best_idx = bc * h * w + iy * w + ix;
            }
          }
        }
        y[oidx] = best;
        if (training) argmax[static_cast<size_t>(oidx)] = best_idx;
      }
    }
  }
  if (training) {
    cached_input_shape_ = x.shape();
    cached_argmax_ = std::move(argmax);
  }
  return y;
}

template <typename T>
Tensor<T> MaxPool2d<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dx(cached_input_shape_);
  for (int64_t i = 0; i < dy.numel(); ++i) {
    const int64_t src = cached_argmax_[static_cast<size_t>(i)];
    if (src >= 0) dx[src] += dy[i];
  }
  return dx;
}

// ---------------------------------------------------------------------------
// BatchNorm2d

template <typename T>
BatchNorm2d<T>::BatchNorm2d(std::string name, int64_t channels, T momentum, T eps)
    : channels_(channels), momentum_(momentum), eps_(eps) {
  gamma_ = std::make_shared<Param<T>>(name + ".gamma", Tensor<T>({channels}, T(1)));
  beta_ = std::make_shared<Param<T>>(name + ".beta", Tensor<T>({channels}));
  running_mean_ = std::make_shared<Tensor<T>>(std::vector<int64_t>{channels});
  running_var_ = std::make_shared<Tensor<T>>(std::vector<int64_t>{channels}, T(1));
}

template <typename T>
Tensor<T> BatchNorm2d<T>::forward(const Tensor<T>& x, bool training) {
  check_rank4(x, "batchnorm2d");
  if (x.dim(1) != channels_) throw InvalidInput("batchnorm2d: channel mismatch");
  const int64_t batch = x.dim(0), h = x.dim(2), w = x.dim(3);
  const int64_t hw = h * w;
  const int64_t n = batch * hw;
  Tensor<T> y(x.shape());

  if (!training) {
    for (int64_t c = 0; c < channels_; ++c) {
      const T mean = (*running_mean_)[c];
      const T invstd = T(1) / std::sqrt((*running_var_)[c] + eps_);
      const T g = gamma_->value[c], bb = beta_->value[c];
      for (int64_t b = 0; b < batch; ++b) {
        const T* src = x.data() + (b * channels_ + c) * hw;
        T* dst = y.data() + (b * channels_ + c) * hw;
        for (int64_t i = 0; i < hw; ++i) dst[i] = g * (src[i] - mean) * invstd + bb;
      }
    }
    return y;
  }

  cached_xhat_ = Tensor<T>(x.shape());
  cached_invstd_.assign(static_cast<size_t>(channels_), T(0));
  cached_shape_ = x.shape();
  for (int64_t c = 0; c < channels_; ++c) {
    double sum = 0.0, sumsq = 0.0;
    for (int64_t b = 0; b < batch; ++b) {
      const T* src = x.data() + (b * channels_ + c) * hw;
      for (int64_t i = 0; i < hw; ++i) {
        sum += static_cast<double>(src[i]);
        sumsq += static_cast<double>(src[i]) * static_cast<double>(src[i]);
      }
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
    const T invstd = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps_)));
    cached_invstd_[static_cast<size_t>(c)] = invstd;
    const T g = gamma_->value[c], bb = beta_->value[c];
    const T m = static_cast<T>(mean);
    for (int64_t b = 0; b < batch; ++b) {
      const T* src = x.data() + (b * channels_ + c) * hw;
      T* xh = cached_xhat_.data() + (b * channels_ + c) * hw;
      T* dst = y.data() + (b * channels_ + c) * hw;
      for (int64_t i = 0; i < hw; ++i) {
        xh[i] = (src[i] - m) * invstd;
        dst[i] = g * xh[i] + bb;
      }
    }
    const double unbiased = n > 1 ? var * static_cast<double>(n) / static_cast<double>(n - 1) : var;
    (*running_mean_)[c] =
        (T(1) - momentum_) * (*running_mean_)[c] + momentum_ * static_cast<T>(mean);
    (*running_var_)[c] =
        (T(1) - momentum_) * (*running_var_)[c] + momentum_ * static_cast<T>(unbiased);
  }
  return y;
}

template <typename T>
Tensor<T> BatchNorm2d<T>::backward(const Tensor<T>& dy) {
  const int64_t batch = cached_shape_[0], hw = cached_shape_[2] * cached_shape_[3];
  const int64_t n = batch * hw;
  Tensor<T> dx(cached_shape_);
  for (int64_t c = 0; c < channels_; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (int64_t b = 0; b < batch; ++b) {
      const T* dy_p = dy.data() + (b * channels_ + c) * hw;
      const T* xh = cached_xhat_.data() + (b * channels_ + c) * hw;
      for (int64_t i = 0; i < hw; ++i) {
        sum_dy += static_cast<double>(dy_p[i]);
        sum_dy_xhat += static_cast<double>(dy_p[i]) * static_cast<double>(xh[i]);
      }
    }
    gamma_->grad[c] += static_cast<T>(sum_dy_xhat);
    beta_->grad[c] += static_cast<T>(sum_dy);
    const T g = gamma_->value[c];
    const T invstd = cached_invstd_[static_cast<size_t>(c)];
    const T k1 = static_cast<T>(sum_dy / static_cast<double>(n));
    const T k2 = static_cast<T>(sum_dy_xhat / static_cast<double>(n));
    for (int64_t b = 0; b < batch; ++b) {
      const T* dy_p = dy.data() + (b * channels_ + c) * hw;
      const T* xh = cached_xhat_.data() + (b * channels_ + c) * hw;
      T* dx_p = dx.data() + (b * channels_ + c) * hw;
      for (int64_t i = 0; i < hw; ++i) {
        dx_p[i] = g * invstd * (dy_p[i] - k1 - xh[i] * k2);
      }
    }
  }
  return dx;
}

template <typename T>
void BatchNorm2d<T>::collect_params(std::vector<ParamPtr<T>>& out) const {
  out.push_back(gamma_);
  out.push_back(beta_);
}

// ---------------------------------------------------------------------------
// Residual

template <typename T>
Tensor<T> Residual<T>::forward(const Tensor<T>& x, bool training) {
  Tensor<T> a = inner_.forward(x, training);
  Tensor<T> b = shortcut_ ? shortcut_->forward(x, training) : x;
  if (!a.same_shape(b)) throw InvalidInput("residual: branch shape mismatch");
  Tensor<T> sum = std::move(a);
  kernels::axpby(sum.numel(), T(1), b.data(), T(1), sum.data());
  if (!final_relu_) return sum;
  Tensor<T> y(sum.shape());
  kernels::relu_forward(sum.numel(), sum.data(), y.data());
  if (training) cached_sum_ = std::move(sum);
  return y;
}

template <typename T>
Tensor<T> Residual<T>::backward(const Tensor<T>& dy) {
  Tensor<T> dsum = dy;
  if (final_relu_) {
    dsum = Tensor<T>(dy.shape());
    kernels::relu_backward(dy.numel(), cached_sum_.data(), dy.data(), dsum.data());
  }
  Tensor<T> dx = inner_.backward(dsum);
  if (shortcut_) {
    Tensor<T> ds = shortcut_->backward(dsum);
    kernels::axpby(dx.numel(), T(1), ds.data(), T(1), dx.data());
  } else {
    kernels::axpby(dx.numel(), T(1), dsum.data(), T(1), dx.data());
  }
  return dx;
}

template <typename T>
void Residual<T>::collect_params(std::vector<ParamPtr<T>>& out) const {
  inner_.collect_params(out);
  if (shortcut_) shortcut_->collect_params(out);
}

template <typename T>
void Residual<T>::init(RngStream& rng) {
  inner_.init(rng);
  if (shortcut_) shortcut_->init(rng);
}

template class Conv2d<float>;
template class Conv2d<double>;
template class Linear<float>;
template class Linear<double>;
template class ReLU<float>;
template class ReLU<double>;
template class Sigmoid<float>;
template class Sigmoid<double>;
template class GlobalAvgPool<float>;
template class GlobalAvgPool<double>;
template class Reshape<float>;
template class Reshape<double>;
template class UpsampleNearest2x<float>;
template class UpsampleNearest2x<double>;
template class MaxPool2d<float>;
template class MaxPool2d<double>;
template class BatchNorm2d<float>;
template class BatchNorm2d<double>;
template class Residual<float>;
template class Residual<double>;

}  // namespace mixssl::nn
