#include "model/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <numeric>

#include "core/hash.hpp"
#include "core/rng.hpp"
#include "core/softmax.hpp"

namespace ssp::model {
namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorCode::numeric, std::string("non-finite value encountered in ") + what);
}

std::uint64_t hash_doubles(std::span<const double> v, std::uint64_t h) {
  return fnv1a(std::as_bytes(v), h);
}

// z = max(0, W1 x + b1) for one input row; `pre` receives the pre-activation when non-null.
void hidden_row(const Backbone& bb, std::span<const double> x, std::span<double> z, std::span<double> pre) {
  const std::size_t in = bb.input_dim();
  for (std::size_t j = 0; j < bb.hidden_dim(); ++j) {
    const double* w = bb.w1.row(j).data();
    double acc = bb.b1[j];
    for (std::size_t i = 0; i < in; ++i) acc += w[i] * x[i];
    if (!pre.empty()) pre[j] = acc;
    z[j] = acc > 0.0 ? acc : 0.0;
  }
}

void linear_row(const LinearLayer& layer, std::span<const double> z, std::span<double> out) {
  for (std::size_t k = 0; k < layer.out_dim(); ++k) {
    const double* w = layer.weight.row(k).data();
    double acc = layer.bias[k];
    for (std::size_t j = 0; j < layer.in_dim(); ++j) acc += w[j] * z[j];
    out[k] = acc;
  }
}

}  // namespace

LinearLayer zero_layer(std::size_t out, std::size_t in) { return {Matrix(out, in), std::vector<double>(out, 0.0)}; }

LogitMatrix apply_layer(const LinearLayer& layer, const Matrix& inputs) {
  require(inputs.cols() == layer.in_dim(), "linear layer expects " + std::to_string(layer.in_dim()) +
                                               " inputs, found " + std::to_string(inputs.cols()));
  LogitMatrix logits(inputs.rows(), layer.out_dim());
  for (std::size_t i = 0; i < inputs.rows(); ++i) linear_row(layer, inputs.row(i), logits.row(i));
  return logits;
}

double layer_loss(const LinearLayer& layer, const Matrix& inputs, std::span<const int> labels, LinearLayer* grad) {
  require(inputs.rows() == labels.size() && inputs.rows() > 0, "layer_loss: inputs and labels must align");
  require(inputs.cols() == layer.in_dim(), "layer_loss: input dimension mismatch");
  const std::size_t n = inputs.rows(), K = layer.out_dim(), D = layer.in_dim();
  if (grad) *grad = zero_layer(K, D);
  std::vector<double> logits(K), probs(K);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = inputs.row(i);
    linear_row(layer, z, logits);
    const double lse = softmax_into(logits, probs);
    const auto y = static_cast<std::size_t>(labels[i]);
    loss += lse - logits[y];
    if (!grad) continue;
    probs[y] -= 1.0;
    for (std::size_t k = 0; k < K; ++k) {
      const double g = probs[k] * inv_n;
      grad->bias[k] += g;
      double* gw = grad->weight.row(k).data();
      for (std::size_t j = 0; j < D; ++j) gw[j] += g * z[j];
    }
  }
  return loss * inv_n;
}

void validate(const TrainConfig& cfg) {
  require(cfg.epochs >= 1, "epochs must be at least 1");
  require(cfg.batch_size >= 1, "batch_size must be at least 1");
  require(cfg.lr0 >= 0.0 && std::isfinite(cfg.lr0), "lr0 must be finite and non-negative");
}

double cosine_lr(double lr0, std::size_t step, std::size_t total_steps) {
  if (total_steps == 0) return lr0;
  return lr0 * 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / static_cast<double>(total_steps)));
}

Model init_model(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes, std::uint64_t seed) {
  require(hidden_dim >= num_classes, "hidden dimension must be at least the number of classes");
  require(input_dim >= 1 && num_classes >= 2, "init_model: bad dimensions");
  Rng rng(seed);
  Model m;
  m.backbone.w1 = Matrix(hidden_dim, input_dim);
  m.backbone.b1.assign(hidden_dim, 0.0);
  const double s1 = std::sqrt(2.0 / static_cast<double>(input_dim));
  for (double& w : m.backbone.w1.values()) w = s1 * rng.normal();
  m.head = zero_layer(num_classes, hidden_dim);
  const double s2 = std::sqrt(2.0 / static_cast<double>(hidden_dim));
  for (double& w : m.head.weight.values()) w = s2 * rng.normal();
  return m;
}

Matrix flatten(const ImageBatch& batch) {
  Matrix x(batch.n, batch.image_size());
  std::copy(batch.data.begin(), batch.data.end(), x.values().begin());
  return x;
}

EmbeddingMatrix embed_rows(const Backbone& backbone, const Matrix& inputs) {
  require(inputs.cols() == backbone.input_dim(), "backbone expects inputs of size " +
                                                     std::to_string(backbone.input_dim()) + ", found " +
                                                     std::to_string(inputs.cols()));
  EmbeddingMatrix z(inputs.rows(), backbone.hidden_dim());
  for (std::size_t i = 0; i < inputs.rows(); ++i) hidden_row(backbone, inputs.row(i), z.row(i), {});
  return z;
}

ForwardResult forward(const Backbone& backbone, const ClassifierHead& head, const ImageBatch& batch) {
  require(head.in_dim() == backbone.hidden_dim(), "classifier head does not match backbone width");
  ForwardResult r;
  r.embeddings = embed_rows(backbone, flatten(batch));
  r.logits = apply_layer(head, r.embeddings);
  r.probs = softmax_rows(r.logits);
  return r;
}

EmbeddingMatrix embed_dataset(const Backbone& backbone, const ImageBatch& batch) {
  require(backbone.frozen, "embed_dataset requires a frozen backbone");
  return embed_rows(backbone, flatten(batch));
}

double model_loss(const Model& model, const Matrix& inputs, std::span<const int> labels, ModelGradients* grad) {
  const auto& bb = model.backbone;
  const auto& head = model.head;
  require(inputs.rows() == labels.size() && inputs.rows() > 0, "model_loss: inputs and labels must align");
  require(inputs.cols() == bb.input_dim(), "model_loss: input dimension mismatch");
  const std::size_t n = inputs.rows(), D = bb.hidden_dim(), K = head.out_dim(), in = bb.input_dim();
  if (grad) {
    grad->w1 = Matrix(D, in);
    grad->b1.assign(D, 0.0);
    grad->head = zero_layer(K, D);
  }
  std::vector<double> pre(D), z(D), logits(K), probs(K), dz(D);
  const double inv_n = 1.0 / static_cast<double>(n);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = inputs.row(i);
    hidden_row(bb, x, z, pre);
    linear_row(head, z, logits);
    const double lse = softmax_into(logits, probs);
    const auto y = static_cast<std::size_t>(labels[i]);
    loss += lse - logits[y];
    if (!grad) continue;
    probs[y] -= 1.0;
    std::fill(dz.begin(), dz.end(), 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const double g = probs[k] * inv_n;
      grad->head.bias[k] += g;
      double* gw = grad->head.weight.row(k).data();
      const double* w = head.weight.row(k).data();
      for (std::size_t j = 0; j < D; ++j) {
        gw[j] += g * z[j];
        dz[j] += g * w[j];
      }
    }
    for (std::size_t j = 0; j < D; ++j) {
      if (pre[j] <= 0.0) continue;
      grad->b1[j] += dz[j];
      double* gw = grad->w1.row(j).data();
      for (std::size_t c = 0; c < in; ++c) gw[c] += dz[j] * x[c];
    }
  }
  return loss * inv_n;
}

TrainTrace train_classifier(Model& model, const data::Dataset& train, const TrainConfig& cfg) {
  validate(cfg);
  require(!model.backbone.frozen, "train_classifier: backbone is frozen");
  require(train.images.n > 0, "train_classifier: empty dataset");
  require(train.images.image_size() == model.backbone.input_dim(), "train_classifier: image size does not match model");

  const std::size_t n = train.images.n;
  const std::size_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = steps_per_epoch * static_cast<std::size_t>(cfg.epochs);
  const Matrix all = flatten(train.images);

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  TrainTrace trace;
  ModelGradients grad;
  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size, ++step) {
      const std::size_t b = std::min(cfg.batch_size, n - start);
      Matrix x(b, all.cols());
      std::vector<int> y(b);
      for (std::size_t r = 0; r < b; ++r) {
        const auto src = all.row(order[start + r]);
        std::copy(src.begin(), src.end(), x.row(r).begin());
        y[r] = train.labels.labels[order[start + r]];
      }
      const double loss = model_loss(model, x, y, &grad);
      check_finite(loss, "classifier training loss");
      epoch_loss += loss * static_cast<double>(b);

      const double lr = cosine_lr(cfg.lr0, step, total_steps);
      trace.final_lr = lr;
      auto sgd = [lr](std::vector<double>& p, const std::vector<double>& g) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
      };
      sgd(model.backbone.w1.values(), grad.w1.values());
      sgd(model.backbone.b1, grad.b1);
      sgd(model.head.weight.values(), grad.head.weight.values());
      sgd(model.head.bias, grad.head.bias);
    }
    trace.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
  }
  return trace;
}

double accuracy(const LogitMatrix& logits, const LabelVector& labels) {
  require(logits.rows() == labels.size() && logits.rows() > 0, "accuracy: size mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    hits += static_cast<int>(argmax_row(logits.row(i))) == labels.labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(logits.rows());
}

std::uint64_t parameter_hash(const Backbone& backbone) {
  std::uint64_t h = hash_doubles(backbone.w1.values(), 0xCBF29CE484222325ULL);
  return hash_doubles(backbone.b1, h);
}

std::uint64_t parameter_hash(const LinearLayer& layer) {
  std::uint64_t h = hash_doubles(layer.weight.values(), 0xCBF29CE484222325ULL);
  return hash_doubles(layer.bias, h);
}

void append_layer(NamedTensors& sections, const std::string& prefix, const LinearLayer& layer) {
  sections.emplace_back(prefix + ".weight", to_tensor(layer.weight));
  sections.emplace_back(prefix + ".bias", to_tensor(std::span<const double>(layer.bias)));
}

LinearLayer layer_from(const NamedTensors& sections, const std::string& prefix) {
  LinearLayer layer;
  layer.weight = matrix_from(find_section(sections, prefix + ".weight"));
  const auto& b = find_section(sections, prefix + ".bias").f32();
  layer.bias.assign(b.begin(), b.end());
  require(layer.bias.size() == layer.weight.rows(), "layer '" + prefix + "' bias length does not match weight rows");
  return layer;
}

NamedTensors to_sections(const Model& model) {
  NamedTensors s;
  append_layer(s, "backbone", {model.backbone.w1, model.backbone.b1});
  append_layer(s, "classifier", model.head);
  return s;
}

Model model_from(const NamedTensors& sections) {
  Model m;
  auto bb = layer_from(sections, "backbone");
  m.backbone.w1 = std::move(bb.weight);
  m.backbone.b1 = std::move(bb.bias);
  m.backbone.frozen = true;
  m.head = layer_from(sections, "classifier");
  require(m.head.in_dim() == m.backbone.hidden_dim(), "checkpoint classifier does not match backbone width");
  return m;
}

}  // namespace ssp::model
