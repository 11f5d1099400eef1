#include "probing/probing.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "core/rng.hpp"
#include "core/softmax.hpp"

namespace ssp::probing {

TaskEmbeddings embed_task(const model::Backbone& frozen, const ImageBatch& batch, const transforms::ProbingTask& task) {
  auto [expanded, labels] = transforms::apply_task(batch, task);
  return {task.name, task.size(), model::embed_dataset(frozen, expanded)};
}

TaskEmbeddings select_transforms(const TaskEmbeddings& full, const std::vector<std::size_t>& keep) {
  require(keep.size() >= 2 && keep.front() == 0, "transform selection must start with the identity and keep >= 2");
  for (auto j : keep) require(j < full.transform_count, "transform selection index out of range");
  const std::size_t n = full.sample_count(), k = keep.size(), d = full.rows.cols();
  TaskEmbeddings out{full.task_name, k, EmbeddingMatrix(n * k, d)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto src = full.rows.row(i * full.transform_count + keep[j]);
      std::copy(src.begin(), src.end(), out.rows.row(i * k + j).begin());
    }
  }
  return out;
}

HeadTraining train_probing_head(const TaskEmbeddings& train, const model::TrainConfig& cfg) {
  model::validate(cfg);
  const std::size_t k = train.transform_count, d = train.rows.cols();
  require(k >= 2, "probing task needs at least two transforms");
  require(train.rows.rows() % k == 0 && train.rows.rows() > 0, "task embeddings are not a whole number of samples");
  const std::size_t n = train.sample_count();
  const std::size_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps = steps_per_epoch * static_cast<std::size_t>(cfg.epochs);

  HeadTraining result;
  result.head = {train.task_name, model::zero_layer(k, d)};
  auto& layer = result.head.layer;

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  model::LinearLayer grad;
  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size, ++step) {
      const std::size_t b = std::min(cfg.batch_size, n - start);
      Matrix x(b * k, d);
      std::vector<int> y(b * k);
      for (std::size_t r = 0; r < b; ++r) {
        for (std::size_t j = 0; j < k; ++j) {
          const auto src = train.rows.row(order[start + r] * k + j);
          std::copy(src.begin(), src.end(), x.row(r * k + j).begin());
          y[r * k + j] = static_cast<int>(j);
        }
      }
      const double loss = model::layer_loss(layer, x, y, &grad);
      if (!std::isfinite(loss)) fail(ErrorCode::numeric, "non-finite probing loss for task '" + train.task_name + "'");
      epoch_loss += loss * static_cast<double>(b);
      const double lr = model::cosine_lr(cfg.lr0, step, total_steps);
      for (std::size_t i = 0; i < layer.weight.values().size(); ++i) {
        layer.weight.values()[i] -= lr * grad.weight.values()[i];
      }
      for (std::size_t i = 0; i < layer.bias.size(); ++i) layer.bias[i] -= lr * grad.bias[i];
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
  }

  const auto logits = model::apply_layer(layer, train.rows);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < logits.rows(); ++r) hits += argmax_row(logits.row(r)) == r % k;
  result.train_accuracy = static_cast<double>(hits) / static_cast<double>(logits.rows());
  return result;
}

HeadTraining train_probing_head(const model::Backbone& frozen, const data::Dataset& train,
                                const transforms::ProbingTask& task, const model::TrainConfig& cfg) {
  return train_probing_head(embed_task(frozen, train.images, task), cfg);
}

std::vector<HeadTraining> train_probing_heads(const std::vector<TaskEmbeddings>& tasks, const model::TrainConfig& cfg,
                                              bool parallel) {
  std::vector<HeadTraining> out;
  if (!parallel) {
    for (const auto& t : tasks) out.push_back(train_probing_head(t, cfg));
    return out;
  }
  std::vector<std::future<HeadTraining>> jobs;
  for (const auto& t : tasks) {
    jobs.push_back(std::async(std::launch::async, [&t, &cfg] { return train_probing_head(t, cfg); }));
  }
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

ScoreVector probing_confidence(const ProbingHead& head, const EmbeddingMatrix& embeddings) {
  require(embeddings.cols() == head.layer.in_dim(),
          "probing head '" + head.task_name + "' expects embeddings of size " + std::to_string(head.layer.in_dim()) +
              ", found " + std::to_string(embeddings.cols()));
  const auto logits = model::apply_layer(head.layer, embeddings);
  ScoreVector conf(embeddings.rows());
  std::vector<double> probs(head.transform_count());
  for (std::size_t i = 0; i < embeddings.rows(); ++i) {
    softmax_into(logits.row(i), probs);
    conf[i] = probs[0];
  }
  return conf;
}

ScoreVector probing_confidence(const ProbingHead& head, const model::Backbone& frozen, const ImageBatch& batch) {
  return probing_confidence(head, model::embed_dataset(frozen, batch));
}

ProbingConfidence probing_confidences(const std::vector<ProbingHead>& heads, const EmbeddingMatrix& embeddings) {
  ProbingConfidence pc;
  for (const auto& h : heads) {
    pc.tasks.push_back(h.task_name);
    pc.values.push_back(probing_confidence(h, embeddings));
  }
  return pc;
}

ProbingHead random_head(const std::string& task_name, std::size_t transform_count, std::size_t embedding_dim,
                        std::uint64_t seed) {
  Rng rng(seed);
  ProbingHead head{task_name, model::zero_layer(transform_count, embedding_dim)};
  for (double& w : head.layer.weight.values()) w = rng.normal();
  for (double& b : head.layer.bias) b = rng.normal();
  return head;
}

}  // namespace ssp::probing
