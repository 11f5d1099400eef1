#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "data/dataset.hpp"
#include "model/model.hpp"
#include "transforms/transforms.hpp"

namespace ssp::probing {

/// One linear classifier over frozen embeddings, predicting which transform was applied.
struct ProbingHead {
  std::string task_name;
  model::LinearLayer layer;  // k x D

  std::size_t transform_count() const noexcept { return layer.out_dim(); }
  bool operator==(const ProbingHead&) const = default;
};

/// Frozen-backbone embeddings of every transformed copy of a batch, sample-major:
/// row i * k + j holds transform j applied to sample i.
struct TaskEmbeddings {
  std::string task_name;
  std::size_t transform_count = 0;
  EmbeddingMatrix rows;

  std::size_t sample_count() const noexcept { return transform_count ? rows.rows() / transform_count : 0; }
};

TaskEmbeddings embed_task(const model::Backbone& frozen, const ImageBatch& batch, const transforms::ProbingTask& task);

/// Keeps the listed transform indices (the first must be 0) and relabels them 0..m-1.
TaskEmbeddings select_transforms(const TaskEmbeddings& full, const std::vector<std::size_t>& keep);

struct HeadTraining {
  ProbingHead head;
  double train_accuracy = 0.0;  // on the transform labels after the last epoch
  std::vector<double> epoch_loss;
};

/// Zero-initialized head trained by mini-batch SGD with cosine annealing. Mini-batches hold
/// `batch_size` original samples together with all of their transformed copies.
HeadTraining train_probing_head(const TaskEmbeddings& train, const model::TrainConfig& cfg);

/// Embeds the transformed training images with the frozen backbone, then trains.
HeadTraining train_probing_head(const model::Backbone& frozen, const data::Dataset& train,
                                const transforms::ProbingTask& task, const model::TrainConfig& cfg);

/// Trains one head per task. Heads share nothing, so `parallel` does not change results.
std::vector<HeadTraining> train_probing_heads(const std::vector<TaskEmbeddings>& tasks, const model::TrainConfig& cfg,
                                              bool parallel);

/// Softmax mass on the identity label for each (untransformed) embedding row.
ScoreVector probing_confidence(const ProbingHead& head, const EmbeddingMatrix& embeddings);
ScoreVector probing_confidence(const ProbingHead& head, const model::Backbone& frozen, const ImageBatch& batch);

/// Per-task confidence vectors, aligned with a list of heads.
struct ProbingConfidence {
  std::vector<std::string> tasks;
  std::vector<ScoreVector> values;

  std::size_t task_count() const noexcept { return values.size(); }
  std::size_t sample_count() const noexcept { return values.empty() ? 0 : values.front().size(); }
};

ProbingConfidence probing_confidences(const std::vector<ProbingHead>& heads, const EmbeddingMatrix& embeddings);

/// Untrained head with every parameter drawn from N(0,1).
ProbingHead random_head(const std::string& task_name, std::size_t transform_count, std::size_t embedding_dim,
                        std::uint64_t seed);

}  // namespace ssp::probing
