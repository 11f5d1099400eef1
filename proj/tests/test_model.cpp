#include <cmath>

#include "core/rng.hpp"
#include "core/softmax.hpp"
#include "data/dataset.hpp"
#include "model/model.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ssp;
using namespace ssp::model;

namespace {

Matrix random_inputs(Rng& rng, std::size_t n, std::size_t d) {
  Matrix x(n, d);
  for (double& v : x.values()) v = rng.uniform();
  return x;
}

// Checks every listed coordinate of `params` against central differences of `loss`.
void check_gradient(std::vector<double>& params, const std::vector<double>& analytic, const std::function<double()>& loss,
                    const std::vector<std::size_t>& coords, const char* what) {
  double worst = 0.0;
  for (std::size_t i : coords) {
    const double numeric = oracle::central_difference(loss, params[i]);
    worst = std::max(worst, oracle::relative_error(numeric, analytic[i]));
  }
  INFO(what << " worst relative error " << worst);
  CHECK(worst < 1e-4);
}

std::vector<std::size_t> all_coords(std::size_t n) {
  std::vector<std::size_t> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = i;
  return c;
}

}  // namespace

TEST_CASE("init_model contract") {
  const auto a = init_model(1024, 64, 10, 7);
  const auto b = init_model(1024, 64, 10, 7);
  CHECK(a.backbone.w1 == b.backbone.w1);
  CHECK(a.head == b.head);
  CHECK(a.backbone.w1.rows() == 64);
  CHECK(a.backbone.w1.cols() == 1024);
  CHECK(a.head.weight.rows() == 10);
  CHECK(std::all_of(a.backbone.b1.begin(), a.backbone.b1.end(), [](double v) { return v == 0.0; }));
  CHECK(std::all_of(a.head.bias.begin(), a.head.bias.end(), [](double v) { return v == 0.0; }));
  double sq = 0.0;
  for (double v : a.backbone.w1.values()) sq += v * v;
  CHECK(sq / 65536.0 == doctest::Approx(2.0 / 1024.0).epsilon(0.03));
  CHECK(init_model(1024, 64, 10, 8).backbone.w1 != a.backbone.w1);
  CHECK_ERROR_CODE(init_model(16, 4, 10, 1), ErrorCode::invalid_input);
}

TEST_CASE("forward pass") {
  Model m = init_model(4, 3, 2, 1);
  ImageBatch b(2, 1, 2, 2);
  b.data = {0.1f, 0.9f, 0.3f, 0.2f, 1.0f, 0.0f, 0.5f, 0.5f};
  SUBCASE("zero parameters give uniform probabilities") {
    Model z = m;
    for (double& v : z.backbone.w1.values()) v = 0.0;
    for (double& v : z.head.weight.values()) v = 0.0;
    const auto out = forward(z.backbone, z.head, b);
    for (double v : out.logits.values()) CHECK(v == 0.0);
    for (double v : out.probs.values()) CHECK(v == doctest::Approx(0.5));
  }
  SUBCASE("shapes, ReLU and dimension checks") {
    const auto out = forward(m.backbone, m.head, b);
    CHECK(out.embeddings.rows() == 2);
    CHECK(out.embeddings.cols() == 3);
    CHECK(out.logits.cols() == 2);
    for (double v : out.embeddings.values()) CHECK(v >= 0.0);
    ImageBatch wrong(1, 1, 3, 3);
    CHECK_ERROR_CODE(forward(m.backbone, m.head, wrong), ErrorCode::invalid_input);
  }
}

TEST_CASE("gradient checks against central differences on 5-sample batches") {
  Rng rng(2024);
  Model m = init_model(12, 6, 4, 3);
  for (double& v : m.backbone.b1) v = 0.1 * rng.normal();
  for (double& v : m.head.bias) v = 0.1 * rng.normal();
  const Matrix x = random_inputs(rng, 5, 12);
  const std::vector<int> y{0, 3, 1, 2, 3};

  ModelGradients g;
  model_loss(m, x, y, &g);
  auto loss = [&] { return model_loss(m, x, y, nullptr); };

  check_gradient(m.backbone.w1.values(), g.w1.values(), loss, all_coords(g.w1.values().size()), "backbone W1");
  check_gradient(m.backbone.b1, g.b1, loss, all_coords(g.b1.size()), "backbone b1");
  check_gradient(m.head.weight.values(), g.head.weight.values(), loss, all_coords(g.head.weight.values().size()),
                 "classifier W");
  check_gradient(m.head.bias, g.head.bias, loss, all_coords(g.head.bias.size()), "classifier b");

  SUBCASE("full-size backbone, sampled coordinates") {
    Model big = init_model(1024, 64, 10, 5);
    const Matrix xb = random_inputs(rng, 5, 1024);
    const std::vector<int> yb{9, 0, 4, 4, 7};
    ModelGradients gb;
    model_loss(big, xb, yb, &gb);
    auto big_loss = [&] { return model_loss(big, xb, yb, nullptr); };
    std::vector<std::size_t> coords;
    for (int i = 0; i < 300; ++i) coords.push_back(rng.below(gb.w1.values().size()));
    check_gradient(big.backbone.w1.values(), gb.w1.values(), big_loss, coords, "backbone W1 (64x1024)");
    check_gradient(big.head.weight.values(), gb.head.weight.values(), big_loss, all_coords(640), "classifier W (10x64)");
  }
  SUBCASE("probing head layer") {
    LinearLayer head{Matrix(4, 6), std::vector<double>(4)};
    for (double& v : head.weight.values()) v = 0.5 * rng.normal();
    for (double& v : head.bias) v = 0.5 * rng.normal();
    const Matrix z = random_inputs(rng, 5, 6);
    const std::vector<int> t{0, 1, 2, 3, 0};
    LinearLayer gh;
    layer_loss(head, z, t, &gh);
    auto head_loss = [&] { return layer_loss(head, z, t, nullptr); };
    check_gradient(head.weight.values(), gh.weight.values(), head_loss, all_coords(24), "probing W");
    check_gradient(head.bias, gh.bias, head_loss, all_coords(4), "probing b");
  }
}

TEST_CASE("cosine schedule") {
  CHECK(cosine_lr(0.1, 0, 100) == doctest::Approx(0.1));
  CHECK(cosine_lr(0.1, 50, 100) == doctest::Approx(0.05));
  CHECK(cosine_lr(0.1, 99, 100) < 0.01 * 0.1);
}

TEST_CASE("classifier training") {
  const auto pool = data::generate_id_dataset(data::GenConfig{1, 30, 0.3, 4}, data::Split::train);
  SUBCASE("lr0 = 0 leaves parameters unchanged") {
    Model m = init_model(1024, 16, 10, 1);
    const Model before = m;
    train_classifier(m, pool, TrainConfig{2, 16, 0.0, 1});
    CHECK(m.backbone.w1 == before.backbone.w1);
    CHECK(m.head == before.head);
  }
  SUBCASE("loss decreases and training is bit-reproducible") {
    Model a = init_model(1024, 16, 10, 1);
    Model b = a;
    const auto ta = train_classifier(a, pool, TrainConfig{5, 16, 0.05, 1});
    const auto tb = train_classifier(b, pool, TrainConfig{5, 16, 0.05, 1});
    CHECK(ta.epoch_loss.size() == 5);
    CHECK(ta.epoch_loss.back() < ta.epoch_loss.front());
    CHECK(ta.epoch_loss == tb.epoch_loss);
    CHECK(parameter_hash(a.backbone) == parameter_hash(b.backbone));
    CHECK(ta.final_lr < 0.01 * 0.05);
  }
  SUBCASE("a frozen backbone refuses training, embedding needs freezing") {
    Model m = init_model(1024, 16, 10, 1);
    CHECK_ERROR_CODE(embed_dataset(m.backbone, pool.images), ErrorCode::invalid_input);
    m.backbone.frozen = true;
    const auto h = parameter_hash(m.backbone);
    const auto z = embed_dataset(m.backbone, pool.images);
    CHECK(z.rows() == pool.images.n);
    CHECK(z.cols() == 16);
    CHECK(parameter_hash(m.backbone) == h);
    CHECK_ERROR_CODE(train_classifier(m, pool, TrainConfig{1, 16, 0.05, 1}), ErrorCode::invalid_input);
  }
  SUBCASE("invalid configs") {
    Model m = init_model(1024, 16, 10, 1);
    CHECK_ERROR_CODE(train_classifier(m, pool, TrainConfig{0, 16, 0.05, 1}), ErrorCode::invalid_input);
    CHECK_ERROR_CODE(train_classifier(m, pool, TrainConfig{1, 16, -1.0, 1}), ErrorCode::invalid_input);
  }
}

TEST_CASE("identical inputs embed to identical rows") {
  Model m = init_model(4, 3, 2, 1);
  m.backbone.frozen = true;
  ImageBatch b(2, 1, 2, 2);
  b.data = {0.1f, 0.2f, 0.3f, 0.4f, 0.1f, 0.2f, 0.3f, 0.4f};
  const auto z = embed_dataset(m.backbone, b);
  CHECK(std::equal(z.row(0).begin(), z.row(0).end(), z.row(1).begin()));
}

TEST_CASE("checkpoint sections round trip at float precision") {
  Model m = init_model(8, 4, 3, 2);
  const auto sections = to_sections(m);
  CHECK(sections.size() == 4);
  const auto back = model_from(sections);
  CHECK(back.backbone.frozen);
  for (std::size_t i = 0; i < m.backbone.w1.values().size(); ++i) {
    CHECK(back.backbone.w1.values()[i] == static_cast<double>(static_cast<float>(m.backbone.w1.values()[i])));
  }
  NamedTensors partial(sections.begin(), sections.begin() + 2);
  CHECK_ERROR_CODE(model_from(partial), ErrorCode::missing_input);
}

TEST_CASE("default backbone on the default dataset reaches 80% test accuracy") {
  const auto pool = data::generate_id_dataset(data::GenConfig{1, 250, 0.3, 4}, data::Split::train);
  const auto train = data::carve_validation(pool, 0.2).first;
  const auto test = data::generate_id_dataset(data::GenConfig{1, 200, 0.3, 4}, data::Split::test);
  Model m = init_model(1024, 64, 10, 1);
  train_classifier(m, train, TrainConfig{10, 32, 0.05, 1});
  m.backbone.frozen = true;
  const double acc = accuracy(apply_layer(m.head, embed_dataset(m.backbone, test.images)), test.labels);
  MESSAGE("default backbone test accuracy " << acc);
  CHECK(acc >= 0.80);
}
