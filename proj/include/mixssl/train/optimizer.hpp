#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixssl/nn/layers.hpp"

namespace mixssl::train {

struct OptimizerSpec {
  std::string kind = "adamw";
  double learning_rate = 1e-4;
  double weight_decay = 1e-4;
  int64_t batch_size = 64;
  int64_t epochs = 20;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::string schedule = "constant";  // hook; only "constant" implemented

  void validate() const;
};

// Adam with decoupled weight decay. The decay is a plain per-step rate, not
// scaled by the learning rate, so lr = 0 leaves parameters untouched except
// for the decay term.
template <typename T>
class AdamW {
public:
  AdamW() = default;
  AdamW(std::vector<nn::ParamPtr<T>> params, OptimizerSpec spec);

  void step();
  void zero_grad();

  int64_t step_count() const { return step_count_; }
  const std::vector<nn::ParamPtr<T>>& params() const { return params_; }

  struct State {
    std::vector<std::string> names;
    std::vector<Tensor<T>> m;
    std::vector<Tensor<T>> v;
    int64_t step_count = 0;
  };
  State export_state() const;
  void import_state(const State& state);

private:
  std::vector<nn::ParamPtr<T>> params_;
  std::vector<Tensor<T>> m_, v_;
  OptimizerSpec spec_;
  int64_t step_count_ = 0;
};

using AdamWF = AdamW<float>;

}  // namespace mixssl::train
