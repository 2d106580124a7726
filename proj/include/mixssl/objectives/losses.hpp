#pragma once

#include <map>
#include <string>
#include <vector>

#include "mixssl/core/tensor.hpp"
#include "mixssl/data/mixup.hpp"
#include "mixssl/nn/model.hpp"

namespace mixssl::objectives {

struct LossWeights {
  double gamma = 1.0;  // weight of the transparency term
  void validate() const;
};

// Which pretext objectives are active. R = image reconstruction,
// T = transparency prediction, C = contrastive, A = auxiliary-label
// prediction.
struct PretextSelection {
  bool reconstruction = true;
  bool transparency = true;
  bool contrastive = false;
  bool aux_label = false;
  double temperature = 0.5;  // contrastive temperature

  void validate() const;
  std::string to_string() const;                        // e.g. "R,T"
  static PretextSelection parse(const std::string& s);  // "R,T,C,A" subsets
  nn::Components components(bool with_classifier = false) const;
};

struct LossReport {
  int64_t step = 0;
  double reconstruction = 0.0;
  double transparency = 0.0;
  double total = 0.0;
  std::map<std::string, double> extras;

  bool finite() const;
};

// Mean squared error over batch and pixels. Zero iff inputs identical.
template <typename T>
double reconstruction_loss(const Tensor<T>& reconstructed, const Tensor<T>& target);

// dL/d(reconstructed)
template <typename T>
Tensor<T> reconstruction_loss_grad(const Tensor<T>& reconstructed, const Tensor<T>& target);

// Mean absolute error between predicted and actual mix ratios, both in [0,1].
template <typename T>
double transparency_loss(const Tensor<T>& predicted, const Tensor<T>& actual);

template <typename T>
Tensor<T> transparency_loss_grad(const Tensor<T>& predicted, const Tensor<T>& actual);

// Symmetric InfoNCE on row-aligned pairs: rows are L2-normalized, similarities
// are cross-view only (negatives = other rows of the opposite view), and the
// two softmax directions are averaged. Requires batch >= 2.
template <typename T>
double contrastive_loss(const Tensor<T>& embeddings_a, const Tensor<T>& embeddings_b,
                        double temperature);

template <typename T>
double contrastive_loss_with_grad(const Tensor<T>& embeddings_a, const Tensor<T>& embeddings_b,
                                  double temperature, Tensor<T>* grad_a, Tensor<T>* grad_b);

// Mean cross-entropy of logits against the auxiliary-image class labels.
template <typename T>
double aux_label_loss(const Tensor<T>& logits, const std::vector<int>& labels);

template <typename T>
double aux_label_loss_with_grad(const Tensor<T>& logits, const std::vector<int>& labels,
                                Tensor<T>* grad_logits);

enum class GradMode { ValueOnly, Backward };

// Runs encode -> (decode, predict_transparency, project, classify_aux) per the
// selection and assembles the weighted pretext loss:
//   total = L_reconstruct + gamma * L_transparency (+ contrastive + aux terms).
// GradMode::Backward backpropagates through every active path, accumulating
// into the bundle's parameter gradients (callers zero them first).
// GradMode::ValueOnly runs in eval mode and leaves the bundle untouched.
template <typename T>
LossReport pretrain_loss(nn::ModelBundle<T>& bundle, const data::MixedBatch& batch,
                         const LossWeights& weights, const PretextSelection& selection,
                         GradMode mode = GradMode::ValueOnly);

}  // namespace mixssl::objectives
