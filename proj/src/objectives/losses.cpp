#include "mixssl/objectives/losses.hpp"

#include <algorithm>
#include <cmath>

#include "mixssl/core/errors.hpp"
#include "mixssl/kernels/kernels.hpp"

namespace mixssl::objectives {

void LossWeights::validate() const {
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
}

void PretextSelection::validate() const {
  if (!reconstruction && !transparency && !contrastive && !aux_label) {
    throw ConfigError("pretext selection must not be empty");
  }
  if (!(temperature > 0.0)) throw ConfigError("contrastive temperature must be > 0");
}

std::string PretextSelection::to_string() const {
  std::string s;
  auto append = [&s](const char* tag) {
    if (!s.empty()) s += ",";
    s += tag;
  };
  if (reconstruction) append("R");
  if (transparency) append("T");
  if (contrastive) append("C");
  if (aux_label) append("A");
  return s;
}

PretextSelection PretextSelection::parse(const std::string& s) {
  PretextSelection sel;
  sel.reconstruction = sel.transparency = false;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string tok = s.substr(pos, end - pos);
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok == "R" || tok == "r") {
      sel.reconstruction = true;
    } else if (tok == "T" || tok == "t") {
      sel.transparency = true;
    } else if (tok == "C" || tok == "c") {
      sel.contrastive = true;
    } else if (tok == "A" || tok == "a") {
      sel.aux_label = true;
    } else if (!tok.empty()) {
      throw ConfigError("unknown pretext objective '" + tok + "' (expected subset of R,T,C,A)");
    }
    pos = end + 1;
  }
  sel.validate();
  return sel;
}

nn::Components PretextSelection::components(bool with_classifier) const {
  nn::Components c;
  c.decoder = reconstruction;
  c.transparency = transparency;
  c.projection = contrastive;
  c.aux_classifier = aux_label;
  c.classifier = with_classifier;
  return c;
}

bool LossReport::finite() const {
  if (!std::isfinite(total) || !std::isfinite(reconstruction) || !std::isfinite(transparency)) {
    return false;
  }
  for (const auto& [k, v] : extras) {
    (void)k;
    if (!std::isfinite(v)) return false;
  }
  return true;
}

template <typename T>
double reconstruction_loss(const Tensor<T>& reconstructed, const Tensor<T>& target) {
  if (!reconstructed.same_shape(target)) {
    throw InvalidInput("reconstruction_loss: shape mismatch " + reconstructed.shape_str() +
                       " vs " + target.shape_str());
  }
  const int64_t n = reconstructed.numel();
  if (n == 0) throw InvalidInput("reconstruction_loss: empty input");
  return kernels::squared_diff_sum(n, reconstructed.data(), target.data()) /
         static_cast<double>(n);
}

template <typename T>
Tensor<T> reconstruction_loss_grad(const Tensor<T>& reconstructed, const Tensor<T>& target) {
  const int64_t n = reconstructed.numel();
  Tensor<T> grad(reconstructed.shape());
  const T scale = T(2) / static_cast<T>(n);
  for (int64_t i = 0; i < n; ++i) grad[i] = scale * (reconstructed[i] - target[i]);
  return grad;
}

template <typename T>
double transparency_loss(const Tensor<T>& predicted, const Tensor<T>& actual) {
  if (predicted.numel() != actual.numel()) {
    throw InvalidInput("transparency_loss: length mismatch");
  }
  const int64_t n = predicted.numel();
  if (n == 0) throw InvalidInput("transparency_loss: empty input");
  for (int64_t i = 0; i < n; ++i) {
    if (!(predicted[i] >= T(0) && predicted[i] <= T(1)) ||
        !(actual[i] >= T(0) && actual[i] <= T(1))) {
      throw InvalidInput("transparency_loss: values outside [0,1]");
    }
  }
  return kernels::abs_diff_sum(n, predicted.data(), actual.data()) / static_cast<double>(n);
}

template <typename T>
Tensor<T> transparency_loss_grad(const Tensor<T>& predicted, const Tensor<T>& actual) {
  const int64_t n = predicted.numel();
  Tensor<T> grad(predicted.shape());
  const T scale = T(1) / static_cast<T>(n);
  for (int64_t i = 0; i < n; ++i) {
    const T d = predicted[i] - actual[i];
    grad[i] = d > T(0) ? scale : (d < T(0) ? -scale : T(0));
  }
  return grad;
}

namespace {

// Row-wise L2 normalization; also returns the norms for the backward pass.
template <typename T>
Tensor<T> normalize_rows(const Tensor<T>& x, std::vector<double>* norms) {
  const int64_t rows = x.dim(0), cols = x.dim(1);
  Tensor<T> z(x.shape());
  norms->resize(static_cast<size_t>(rows));
  for (int64_t i = 0; i < rows; ++i) {
    const T* src = x.data() + i * cols;
    const double norm = std::sqrt(kernels::dot(cols, src, src)) + 1e-12;
    (*norms)[static_cast<size_t>(i)] = norm;
    T* dst = z.data() + i * cols;
    for (int64_t j = 0; j < cols; ++j) dst[j] = static_cast<T>(src[j] / norm);
  }
  return z;
}

// d(a/||a||) pullback: da = (dz - z * <z, dz>) / ||a||
template <typename T>
void denormalize_grad(const Tensor<T>& z, const std::vector<double>& norms, Tensor<T>* grad) {
  const int64_t rows = z.dim(0), cols = z.dim(1);
  for (int64_t i = 0; i < rows; ++i) {
    const T* zr = z.data() + i * cols;
    T* gr = grad->data() + i * cols;
    const double zdg = kernels::dot(cols, zr, gr);
    const double inv = 1.0 / norms[static_cast<size_t>(i)];
    for (int64_t j = 0; j < cols; ++j) {
      gr[j] = static_cast<T>((static_cast<double>(gr[j]) - static_cast<double>(zr[j]) * zdg) *
                             inv);
    }
  }
}

template <typename T>
double contrastive_core(const Tensor<T>& embeddings_a, const Tensor<T>& embeddings_b,
                        double temperature, Tensor<T>* grad_a, Tensor<T>* grad_b) {
  if (embeddings_a.rank() != 2 || !embeddings_a.same_shape(embeddings_b)) {
    throw InvalidInput("contrastive_loss: embeddings must share shape (batch, dim)");
  }
  const int64_t batch = embeddings_a.dim(0), dim = embeddings_a.dim(1);
  if (batch < 2) throw InvalidInput("contrastive_loss: batch size must be >= 2");
  if (!(temperature > 0.0)) throw InvalidInput("contrastive_loss: temperature must be > 0");

  std::vector<double> norms_a, norms_b;
  Tensor<T> za = normalize_rows(embeddings_a, &norms_a);
  Tensor<T> zb = normalize_rows(embeddings_b, &norms_b);

  // S[i][j] = <za_i, zb_j> / temperature, in double for the softmax algebra.
  std::vector<double> sim(static_cast<size_t>(batch * batch));
  for (int64_t i = 0; i < batch; ++i) {
    for (int64_t j = 0; j < batch; ++j) {
      sim[static_cast<size_t>(i * batch + j)] =
          kernels::dot(dim, za.data() + i * dim, zb.data() + j * dim) / temperature;
    }
  }

  auto logsumexp = [&](int64_t fixed, bool row) {
    double mx = -1e300;
    for (int64_t k = 0; k < batch; ++k) {
      const double v = row ? sim[static_cast<size_t>(fixed * batch + k)]
                           : sim[static_cast<size_t>(k * batch + fixed)];
      mx = std::max(mx, v);
    }
    double s = 0.0;
    for (int64_t k = 0; k < batch; ++k) {
      const double v = row ? sim[static_cast<size_t>(fixed * batch + k)]
                           : sim[static_cast<size_t>(k * batch + fixed)];
      s += std::exp(v - mx);
    }
    return mx + std::log(s);
  };

  double loss = 0.0;
  std::vector<double> lse_row(static_cast<size_t>(batch)), lse_col(static_cast<size_t>(batch));
  for (int64_t i = 0; i < batch; ++i) {
    lse_row[static_cast<size_t>(i)] = logsumexp(i, true);
    lse_col[static_cast<size_t>(i)] = logsumexp(i, false);
    const double s_ii = sim[static_cast<size_t>(i * batch + i)];
    loss += (lse_row[static_cast<size_t>(i)] - s_ii) + (lse_col[static_cast<size_t>(i)] - s_ii);
  }
  loss /= static_cast<double>(2 * batch);

  if (!grad_a || !grad_b) return loss;

  // dL/dS = (softmax_row - I)/(2B) + (softmax_col - I)/(2B)
  std::vector<double> ds(static_cast<size_t>(batch * batch));
  const double inv2b = 1.0 / static_cast<double>(2 * batch);
  for (int64_t i = 0; i < batch; ++i) {
    for (int64_t j = 0; j < batch; ++j) {
      const double s = sim[static_cast<size_t>(i * batch + j)];
      double g = std::exp(s - lse_row[static_cast<size_t>(i)]) +
                 std::exp(s - lse_col[static_cast<size_t>(j)]);
      if (i == j) g -= 2.0;
      ds[static_cast<size_t>(i * batch + j)] = g * inv2b;
    }
  }

  *grad_a = Tensor<T>(embeddings_a.shape());
  *grad_b = Tensor<T>(embeddings_b.shape());
  const double inv_t = 1.0 / temperature;
  for (int64_t i = 0; i < batch; ++i) {
    for (int64_t j = 0; j < batch; ++j) {
      const double g = ds[static_cast<size_t>(i * batch + j)] * inv_t;
      const T* zb_j = zb.data() + j * dim;
      const T* za_i = za.data() + i * dim;
      T* ga_i = grad_a->data() + i * dim;
      T* gb_j = grad_b->data() + j * dim;
      for (int64_t d = 0; d < dim; ++d) {
        ga_i[d] += static_cast<T>(g * static_cast<double>(zb_j[d]));
        gb_j[d] += static_cast<T>(g * static_cast<double>(za_i[d]));
      }
    }
  }
  denormalize_grad(za, norms_a, grad_a);
  denormalize_grad(zb, norms_b, grad_b);
  return loss;
}

}  // namespace

template <typename T>
double contrastive_loss(const Tensor<T>& embeddings_a, const Tensor<T>& embeddings_b,
                        double temperature) {
  return contrastive_core<T>(embeddings_a, embeddings_b, temperature, nullptr, nullptr);
}

template <typename T>
double contrastive_loss_with_grad(const Tensor<T>& embeddings_a, const Tensor<T>& embeddings_b,
                                  double temperature, Tensor<T>* grad_a, Tensor<T>* grad_b) {
  return contrastive_core<T>(embeddings_a, embeddings_b, temperature, grad_a, grad_b);
}

template <typename T>
double aux_label_loss_with_grad(const Tensor<T>& logits, const std::vector<int>& labels,
                                Tensor<T>* grad_logits) {
  if (logits.rank() != 2) throw InvalidInput("aux_label_loss: logits must be (batch, classes)");
  const int64_t batch = logits.dim(0), classes = logits.dim(1);
  if (static_cast<int64_t>(labels.size()) != batch) {
    throw InvalidInput("aux_label_loss: label count mismatch");
  }
  for (int label : labels) {
    if (label < 0 || label >= classes) throw InvalidInput("aux_label_loss: label out of range");
  }
  if (grad_logits) *grad_logits = Tensor<T>(logits.shape());

  double loss = 0.0;
  const double inv_b = 1.0 / static_cast<double>(batch);
  for (int64_t b = 0; b < batch; ++b) {
    const T* row = logits.data() + b * classes;
    double mx = static_cast<double>(row[0]);
    for (int64_t j = 1; j < classes; ++j) mx = std::max(mx, static_cast<double>(row[j]));
    double denom = 0.0;
    for (int64_t j = 0; j < classes; ++j) denom += std::exp(static_cast<double>(row[j]) - mx);
    const double lse = mx + std::log(denom);
    const int y = labels[static_cast<size_t>(b)];
    loss += lse - static_cast<double>(row[y]);
    if (grad_logits) {
      T* grow = grad_logits->data() + b * classes;
      for (int64_t j = 0; j < classes; ++j) {
        double p = std::exp(static_cast<double>(row[j]) - lse);
        if (j == y) p -= 1.0;
        grow[j] = static_cast<T>(p * inv_b);
      }
    }
  }
  return loss * inv_b;
}

template <typename T>
double aux_label_loss(const Tensor<T>& logits, const std::vector<int>& labels) {
  return aux_label_loss_with_grad<T>(logits, labels, nullptr);
}

template <typename T>
LossReport pretrain_loss(nn::ModelBundle<T>& bundle, const data::MixedBatch& batch,
                         const LossWeights& weights, const PretextSelection& selection,
                         GradMode mode) {
  weights.validate();
  selection.validate();
  if (selection.reconstruction && !bundle.components.decoder) {
    throw ConfigError("pretrain_loss: reconstruction selected but decoder not built");
  }
  if (selection.transparency && !bundle.components.transparency) {
    throw ConfigError("pretrain_loss: transparency selected but head not built");
  }
  if (selection.contrastive && !bundle.components.projection) {
    throw ConfigError("pretrain_loss: contrastive selected but projection head not built");
  }
  if (selection.aux_label && !bundle.components.aux_classifier) {
    throw ConfigError("pretrain_loss: aux_label selected but aux classifier not built");
  }

  const bool training = mode == GradMode::Backward;
  Tensor<T> x = batch.mixed.template cast<T>();
  Tensor<T> features = bundle.encode(x, training);
  Tensor<T> dfeatures;
  if (training) dfeatures = Tensor<T>(features.shape());

  LossReport report;
  double total = 0.0;

  if (selection.reconstruction) {
    Tensor<T> target = batch.target.template cast<T>();
    Tensor<T> recon = bundle.decode(features, training);
    report.reconstruction = reconstruction_loss(recon, target);
    total += report.reconstruction;
    if (training) {
      Tensor<T> drecon = reconstruction_loss_grad(recon, target);
      Tensor<T> df = bundle.decoder.backward(drecon);
      kernels::axpby(dfeatures.numel(), T(1), df.data(), T(1), dfeatures.data());
    }
  }

  if (selection.transparency) {
    Tensor<T> actual({static_cast<int64_t>(batch.lambda.size())});
    for (size_t i = 0; i < batch.lambda.size(); ++i) {
      actual[static_cast<int64_t>(i)] = static_cast<T>(batch.lambda[i]);
    }
    Tensor<T> predicted = bundle.predict_transparency(features, training);
    report.transparency = transparency_loss(predicted, actual);
    total += weights.gamma * report.transparency;
    if (training) {
      Tensor<T> dpred = transparency_loss_grad(predicted, actual);
      for (int64_t i = 0; i < dpred.numel(); ++i) {
        dpred[i] = static_cast<T>(weights.gamma) * dpred[i];
      }
      dpred.reshape({dpred.numel(), 1});
      Tensor<T> df = bundle.transparency_head.backward(dpred);
      kernels::axpby(dfeatures.numel(), T(1), df.data(), T(1), dfeatures.data());
    }
  }

  if (selection.contrastive) {
    if (!batch.second_view) {
      throw ConfigError("pretrain_loss: contrastive objective needs a second view in the batch");
    }
    Tensor<T> v2 = batch.second_view->template cast<T>();
    // Siamese pass: clones share parameters, so gradients from both views
    // accumulate into the same storage.
    nn::ModelBundle<T> twin = bundle.clone_shared();
    Tensor<T> f2 = twin.encode(v2, training);
    Tensor<T> z1 = bundle.project(features, training);
    Tensor<T> z2 = twin.project(f2, training);
    double closs;
    if (training) {
      Tensor<T> dz1, dz2;
      closs = contrastive_loss_with_grad(z1, z2, selection.temperature, &dz1, &dz2);
      Tensor<T> df1 = bundle.projection.backward(dz1);
      kernels::axpby(dfeatures.numel(), T(1), df1.data(), T(1), dfeatures.data());
      Tensor<T> df2 = twin.projection.backward(dz2);
      twin.encoder.backward(df2);
    } else {
      closs = contrastive_loss(z1, z2, selection.temperature);
    }
    report.extras["contrastive"] = closs;
    total += closs;
  }

  if (selection.aux_label) {
    if (!batch.aux_labels) {
      throw ConfigError("pretrain_loss: aux_label objective needs auxiliary labels in the batch");
    }
    Tensor<T> logits = bundle.classify_aux(features, training);
    double aloss;
    if (training) {
      Tensor<T> dlogits;
      aloss = aux_label_loss_with_grad(logits, *batch.aux_labels, &dlogits);
      Tensor<T> df = bundle.aux_classifier.backward(dlogits);
      kernels::axpby(dfeatures.numel(), T(1), df.data(), T(1), dfeatures.data());
    } else {
      aloss = aux_label_loss(logits, *batch.aux_labels);
    }
    report.extras["aux_label"] = aloss;
    total += aloss;
  }

  if (training) bundle.encoder.backward(dfeatures);

  report.total = total;
  return report;
}

#define MIXSSL_INSTANTIATE_LOSSES(T)                                                          \
  template double reconstruction_loss<T>(const Tensor<T>&, const Tensor<T>&);                 \
  template Tensor<T> reconstruction_loss_grad<T>(const Tensor<T>&, const Tensor<T>&);         \
  template double transparency_loss<T>(const Tensor<T>&, const Tensor<T>&);                   \
  template Tensor<T> transparency_loss_grad<T>(const Tensor<T>&, const Tensor<T>&);           \
  template double contrastive_loss<T>(const Tensor<T>&, const Tensor<T>&, double);            \
  template double contrastive_loss_with_grad<T>(const Tensor<T>&, const Tensor<T>&, double,   \
                                                Tensor<T>*, Tensor<T>*);                      \
  template double aux_label_loss<T>(const Tensor<T>&, const std::vector<int>&);               \
  template double aux_label_loss_with_grad<T>(const Tensor<T>&, const std::vector<int>&,      \
                                              Tensor<T>*);                                    \
  template LossReport pretrain_loss<T>(nn::ModelBundle<T>&, const data::MixedBatch&,          \
                                       const LossWeights&, const PretextSelection&, GradMode);

MIXSSL_INSTANTIATE_LOSSES(float)
MIXSSL_INSTANTIATE_LOSSES(double)

#undef MIXSSL_INSTANTIATE_LOSSES

}  // namespace mixssl::objectives
