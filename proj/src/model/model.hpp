#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/sspb.hpp"
#include "core/types.hpp"
#include "data/dataset.hpp"

namespace ssp::model {

/// Fully connected layer followed by softmax: logits = W z + b.
struct LinearLayer {
  Matrix weight;  // out x in
  std::vector<double> bias;

  std::size_t in_dim() const noexcept { return weight.cols(); }
  std::size_t out_dim() const noexcept { return weight.rows(); }
  bool operator==(const LinearLayer&) const = default;
};

LinearLayer zero_layer(std::size_t out, std::size_t in);

/// logits for every row of `inputs`.
LogitMatrix apply_layer(const LinearLayer& layer, const Matrix& inputs);

/// Mean cross-entropy of softmax(layer(inputs)) against `labels`. When `grad` is non-null it
/// receives the gradient of that mean with respect to the layer's parameters.
double layer_loss(const LinearLayer& layer, const Matrix& inputs, std::span<const int> labels, LinearLayer* grad);

/// Single hidden ReLU layer: z = max(0, W1 x + b1).
struct Backbone {
  Matrix w1;  // hidden x input
  std::vector<double> b1;
  bool frozen = false;

  std::size_t input_dim() const noexcept { return w1.cols(); }
  std::size_t hidden_dim() const noexcept { return w1.rows(); }
};

using ClassifierHead = LinearLayer;

struct TrainConfig {
  int epochs = 30;
  std::size_t batch_size = 32;
  double lr0 = 0.05;
  std::uint64_t seed = 1;
};

void validate(const TrainConfig& cfg);

/// Cosine annealing without restarts, evaluated per optimizer step.
double cosine_lr(double lr0, std::size_t step, std::size_t total_steps);

struct Model {
  Backbone backbone;
  ClassifierHead head;
};

/// Weights ~ N(0, 2 / fan_in) from one Rng stream (backbone first), biases zero.
Model init_model(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_classes, std::uint64_t seed);

struct ForwardResult {
  EmbeddingMatrix embeddings;
  LogitMatrix logits;
  ProbMatrix probs;
};

ForwardResult forward(const Backbone& backbone, const ClassifierHead& head, const ImageBatch& batch);

/// Embeddings only; requires a frozen backbone.
EmbeddingMatrix embed_dataset(const Backbone& backbone, const ImageBatch& batch);

/// Flattens images into rows of doubles.
Matrix flatten(const ImageBatch& batch);
EmbeddingMatrix embed_rows(const Backbone& backbone, const Matrix& inputs);

struct ModelGradients {
  Matrix w1;
  std::vector<double> b1;
  LinearLayer head;
};

/// Mean cross-entropy of the full network on `inputs` (rows), with optional gradients.
double model_loss(const Model& model, const Matrix& inputs, std::span<const int> labels, ModelGradients* grad);

struct TrainTrace {
  std::vector<double> epoch_loss;
  double final_lr = 0.0;
};

/// Mini-batch SGD on mean cross-entropy; the model from the final epoch is kept.
TrainTrace train_classifier(Model& model, const data::Dataset& train, const TrainConfig& cfg);

double accuracy(const LogitMatrix& logits, const LabelVector& labels);

/// FNV-1a over the backbone's parameter bytes.
std::uint64_t parameter_hash(const Backbone& backbone);
std::uint64_t parameter_hash(const LinearLayer& layer);

NamedTensors to_sections(const Model& model);
Model model_from(const NamedTensors& sections);
void append_layer(NamedTensors& sections, const std::string& prefix, const LinearLayer& layer);
LinearLayer layer_from(const NamedTensors& sections, const std::string& prefix);

}  // namespace ssp::model
