#include "mixssl/train/optimizer.hpp"

#include "mixssl/core/errors.hpp"
#include "mixssl/kernels/kernels.hpp"

namespace mixssl::train {

void OptimizerSpec::validate() const {
  if (kind != "adamw") throw ConfigError("unknown optimizer kind: " + kind);
  if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate must be >= 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("adam betas must lie in [0,1)");
  }
  if (!(eps > 0.0)) throw ConfigError("adam eps must be > 0");
  if (schedule != "constant") throw ConfigError("unsupported lr schedule: " + schedule);
}

template <typename T>
AdamW<T>::AdamW(std::vector<nn::ParamPtr<T>> params, OptimizerSpec spec)
    : params_(std::move(params)), spec_(std::move(spec)) {
  spec_.validate();
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

template <typename T>
void AdamW<T>::step() {
  ++step_count_;
  for (size_t i = 0; i < params_.size(); ++i) {
    nn::Param<T>& p = *params_[i];
    kernels::adamw_update<T>(p.value.numel(), p.value.data(), p.grad.data(), m_[i].data(),
                             v_[i].data(), static_cast<T>(spec_.learning_rate),
                             static_cast<T>(spec_.beta1), static_cast<T>(spec_.beta2),
                             static_cast<T>(spec_.eps), static_cast<T>(spec_.weight_decay),
                             step_count_);
  }
}

template <typename T>
void AdamW<T>::zero_grad() {
  for (auto& p : params_) p->grad.fill(T(0));
}

template <typename T>
typename AdamW<T>::State AdamW<T>::export_state() const {
  State s;
  s.step_count = step_count_;
  for (size_t i = 0; i < params_.size(); ++i) {
    s.names.push_back(params_[i]->name);
    s.m.push_back(m_[i]);
    s.v.push_back(v_[i]);
  }
  return s;
}

template <typename T>
void AdamW<T>::import_state(const State& state) {
  if (state.names.size() != params_.size()) {
    throw IncompatibleCheckpoint("optimizer state parameter count mismatch");
  }
  for (size_t i = 0; i < params_.size(); ++i) {
    if (state.names[i] != params_[i]->name || !state.m[i].same_shape(params_[i]->value)) {
      throw IncompatibleCheckpoint("optimizer state does not match parameter " +
                                   params_[i]->name);
    }
  }
  m_ = state.m;
  v_ = state.v;
  step_count_ = state.step_count;
}

template class AdamW<float>;
template class AdamW<double>;

}  // namespace mixssl::train
