#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mixssl/core/rng.hpp"
#include "mixssl/core/tensor.hpp"

namespace mixssl::nn {

template <typename T>
struct Param {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;

  Param(std::string n, Tensor<T> v) : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
};

template <typename T>
using ParamPtr = std::shared_ptr<Param<T>>;

// Buffer shared between clones but not optimized (batch-norm running stats).
template <typename T>
using BufferPtr = std::shared_ptr<Tensor<T>>;

// Layer with explicit backward. forward(x, training=true) caches whatever
// backward needs; forward(x, training=false) writes no member state and is
// safe on shared instances. backward must follow a training-mode forward and
// accumulates (+=) into parameter gradients.
template <typename T>
class Layer {
public:
  virtual ~Layer() = default;
  virtual Tensor<T> forward(const Tensor<T>& x, bool training) = 0;
  virtual Tensor<T> backward(const Tensor<T>& dy) = 0;
  virtual void collect_params(std::vector<ParamPtr<T>>& out) const { (void)out; }
  virtual void init(RngStream& rng) { (void)rng; }
  // Copy with shared parameter/buffer storage and private activation caches.
  virtual std::unique_ptr<Layer<T>> clone() const = 0;
};

template <typename T>
class Sequential : public Layer<T> {
public:
  Sequential() = default;
  Sequential(const Sequential& other) {
    layers_.reserve(other.layers_.size());
    for (const auto& l : other.layers_) layers_.push_back(l->clone());
  }
  Sequential(Sequential&&) noexcept = default;
  Sequential& operator=(Sequential&&) noexcept = default;

  void add(std::unique_ptr<Layer<T>> layer) { layers_.push_back(std::move(layer)); }
  bool empty() const { return layers_.empty(); }
  size_t size() const { return layers_.size(); }

  Tensor<T> forward(const Tensor<T>& x, bool training) override {
    Tensor<T> h = x;
    for (auto& l : layers_) h = l->forward(h, training);
    return h;
  }

  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> g = dy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
  }

  void collect_params(std::vector<ParamPtr<T>>& out) const override {
    for (const auto& l : layers_) l->collect_params(out);
  }

  void init(RngStream& rng) override {
    for (auto& l : layers_) l->init(rng);
  }

  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<Sequential<T>>(*this);
  }

private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

template <typename T>
class Conv2d : public Layer<T> {
public:
  Conv2d(std::string name, int64_t in_ch, int64_t out_ch, int64_t kernel, int64_t stride,
         int64_t padding);
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  void collect_params(std::vector<ParamPtr<T>>& out) const override;
  void init(RngStream& rng) override;
  std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Conv2d<T>>(*this); }

private:
  int64_t in_ch_, out_ch_, kernel_, stride_, padding_;
  ParamPtr<T> weight_;  // (out_ch, in_ch * k * k)
  ParamPtr<T> bias_;    // (out_ch)
  Tensor<T> cached_input_;
};

template <typename T>
class Linear : public Layer<T> {
public:
  Linear(std::string name, int64_t in_dim, int64_t out_dim);
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  void collect_params(std::vector<ParamPtr<T>>& out) const override;
  void init(RngStream& rng) override;
  std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Linear<T>>(*this); }

private:
  int64_t in_dim_, out_dim_;
  ParamPtr<T> weight_;  // (out_dim, in_dim)
  ParamPtr<T> bias_;
  Tensor<T> cached_input_;
};

template <typename T>
class ReLU : public Layer<T> {
public:
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<ReLU<T>>(*this); }

private:
  Tensor<T> cached_input_;
};

template <typename T>
class Sigmoid : public Layer<T> {
public:
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Sigmoid<T>>(*this); }

private:
  Tensor<T> cached_output_;
};

// (B, C, H, W) -> (B, C)
template <typename T>
class GlobalAvgPool : public Layer<T> {
public:
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<GlobalAvgPool<T>>(*this);
  }

private:
  std::vector<int64_t> cached_shape_;
};

// Per-sample (B, F) -> (B, c, h, w) with F = c*h*w.
template <typename T>
class Reshape : public Layer<T> {
public:
  Reshape(int64_t c, int64_t h, int64_t w) : c_(c), h_(h), w_(w) {}
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Reshape<T>>(*this); }

private:
  int64_t c_, h_, w_;
  std::vector<int64_t> cached_shape_;
};

template <typename T>
class UpsampleNearest2x : public Layer<T> {
public:
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<UpsampleNearest2x<T>>(*this);
  }
};

template <typename T>
class MaxPool2d : public Layer<T> {
public:
  MaxPool2d(int64_t kernel, int64_t stride, int64_t padding)
      : kernel_(kernel), stride_(stride), padding_(padding) {}
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<MaxPool2d<T>>(*this);
  }

private:
  int64_t kernel_, stride_, padding_;
  std::vector<int64_t> cached_input_shape_;
  std::vector<int64_t> cached_argmax_;
};

// Channel-wise batch normalization over (B, H, W). Training mode normalizes
// with batch statistics and updates shared running stats; eval mode uses the
// frozen running stats only (per-sample purity at inference).
template <typename T>
class BatchNorm2d : public Layer<T> {
public:
  BatchNorm2d(std::string name, int64_t channels, T momentum = T(0.1), T eps = T(1e-5));
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  void collect_params(std::vector<ParamPtr<T>>& out) const override;
  std::unique_ptr<Layer<T>> clone() const override {
    return std::make_unique<BatchNorm2d<T>>(*this);
  }

private:
  int64_t channels_;
  T momentum_, eps_;
  ParamPtr<T> gamma_, beta_;
  BufferPtr<T> running_mean_, running_var_;
  Tensor<T> cached_xhat_;
  std::vector<T> cached_invstd_;
  std::vector<int64_t> cached_shape_;
};

// y = relu?(inner(x) + shortcut(x)); empty shortcut means identity.
template <typename T>
class Residual : public Layer<T> {
public:
  Residual(Sequential<T> inner, std::optional<Sequential<T>> shortcut, bool final_relu)
      : inner_(std::move(inner)), shortcut_(std::move(shortcut)), final_relu_(final_relu) {}
  Residual(const Residual& other)
      : inner_(other.inner_), shortcut_(other.shortcut_), final_relu_(other.final_relu_),
        cached_sum_(other.cached_sum_) {}
  Tensor<T> forward(const Tensor<T>& x, bool training) override;
  Tensor<T> backward(const Tensor<T>& dy) override;
  void collect_params(std::vector<ParamPtr<T>>& out) const override;
  void init(RngStream& rng) override;
  std::unique_ptr<Layer<T>> clone() const override { return std::make_unique<Residual<T>>(*this); }

private:
  Sequential<T> inner_;
  std::optional<Sequential<T>> shortcut_;
  bool final_relu_;
  Tensor<T> cached_sum_;
};

}  // namespace mixssl::nn
