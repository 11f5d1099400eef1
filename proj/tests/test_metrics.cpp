#include <cmath>

#include "core/rng.hpp"
#include "core/softmax.hpp"
#include "metrics/metrics.hpp"
#include "metrics/report.hpp"
#include "model/model.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ssp;
using namespace ssp::metrics;

TEST_CASE("auroc examples") {
  CHECK(auroc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, Flags{0, 0, 1, 1}) == doctest::Approx(0.75));
  CHECK(auroc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, Flags{0, 0, 1, 1}) == 1.0);
  CHECK(auroc(std::vector<double>{0.5, 0.5, 0.5}, Flags{1, 0, 1}) == 0.5);
  CHECK_ERROR_CODE(auroc(std::vector<double>{0.1, 0.2}, Flags{1, 1}), ErrorCode::undefined_metric);
  CHECK_ERROR_CODE(auroc(std::vector<double>{0.1}, Flags{1, 0}), ErrorCode::invalid_input);
  const auto roc = roc_curve(std::vector<double>{0.1, 0.4, 0.35, 0.8}, Flags{0, 0, 1, 1});
  CHECK(roc.front().fpr == 0.0);
  CHECK(roc.front().tpr == 0.0);
  CHECK(roc.back().fpr == 1.0);
  CHECK(roc.back().tpr == 1.0);
}

TEST_CASE("aupr examples") {
  CHECK(aupr(std::vector<double>{0.9, 0.8, 0.7}, Flags{1, 0, 1}) == doctest::Approx(5.0 / 6.0));
  CHECK(aupr(std::vector<double>{0.9, 0.8, 0.1}, Flags{1, 1, 0}) == 1.0);
  CHECK(aupr(std::vector<double>{5, 4, 3, 2, 1}, Flags{0, 0, 0, 0, 1}) == doctest::Approx(0.2));
  CHECK_ERROR_CODE(aupr(std::vector<double>{0.1, 0.2}, Flags{0, 0}), ErrorCode::undefined_metric);
  SUBCASE("aupr_err treats low confidence errors as positives") {
    const std::vector<double> conf{0.9, 0.8, 0.3, 0.2};
    const Flags ok{1, 1, 0, 0};
    CHECK(aupr_err(conf, ok) == 1.0);
    CHECK(aupr_succ(conf, ok) == 1.0);
    CHECK(aupr_err(std::vector<double>{0.2, 0.9}, Flags{1, 0}) == doctest::Approx(0.5));
  }
}

TEST_CASE("fpr_at_95_tpr examples") {
  CHECK(fpr_at_95_tpr(std::vector<double>{0.9, 0.8, 0.2, 0.1}, Flags{1, 1, 0, 0}) == 0.0);
  CHECK(fpr_at_95_tpr(std::vector<double>{0.5, 0.5, 0.5, 0.5}, Flags{1, 1, 0, 0}) == 1.0);
  // 20 positives at 1.0, 19 at 0.9, one negative at 0.95 and nine at 0.
  std::vector<double> s;
  Flags pos;
  for (int i = 0; i < 20; ++i) s.push_back(1.0), pos.push_back(1);
  for (int i = 0; i < 19; ++i) s.push_back(0.9), pos.push_back(1);
  s.push_back(0.95), pos.push_back(0);
  for (int i = 0; i < 9; ++i) s.push_back(0.0), pos.push_back(0);
  CHECK(fpr_at_95_tpr(s, pos) == doctest::Approx(0.1));
}

TEST_CASE("metric oracle suite on random tied instances") {
  Rng rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = oracle::random_instance(rng);
    CHECK(std::abs(auroc(in.scores, in.positive) - oracle::pairwise_auroc(in.scores, in.positive)) <= 1e-9);
    CHECK(aupr(in.scores, in.positive) == doctest::Approx(oracle::enumerated_aupr(in.scores, in.positive)).epsilon(1e-12));
    CHECK(fpr_at_95_tpr(in.scores, in.positive) == oracle::enumerated_fpr95(in.scores, in.positive));
  }
}

TEST_CASE("ranking metrics are invariant under increasing transforms") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = oracle::random_instance(rng);
    for (int kind = 0; kind < 3; ++kind) {
      std::vector<double> t = in.scores;
      for (double& v : t) v = kind == 0 ? 2.0 * v + 3.0 : kind == 1 ? std::tanh(v) : v + 17.5;
      CHECK(std::abs(auroc(t, in.positive) - auroc(in.scores, in.positive)) <= 1e-12);
      CHECK(std::abs(aupr(t, in.positive) - aupr(in.scores, in.positive)) <= 1e-12);
      CHECK(std::abs(fpr_at_95_tpr(t, in.positive) - fpr_at_95_tpr(in.scores, in.positive)) <= 1e-12);
    }
  }
}

TEST_CASE("auroc of negated untied scores is the complement") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s;
    Flags pos;
    for (int i = 0; i < 40; ++i) {
      s.push_back(rng.uniform());
      pos.push_back(rng.uniform() < 0.5);
    }
    pos[0] = 1;
    pos[1] = 0;
    std::vector<double> neg = s;
    for (double& v : neg) v = -v;
    CHECK(auroc(s, pos) + auroc(neg, pos) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ece and mce") {
  CHECK(ece(std::vector<double>{1.0, 1.0}, Flags{1, 1}) == 0.0);
  CHECK(mce(std::vector<double>{1.0, 1.0}, Flags{1, 1}) == 0.0);
  SUBCASE("one bin with gap 0.2") {
    const std::vector<double> c(5, 0.8);
    const Flags ok{1, 1, 1, 0, 0};
    CHECK(ece(c, ok) == doctest::Approx(0.2));
    CHECK(mce(c, ok) == doctest::Approx(0.2));
  }
  SUBCASE("two equal bins with gaps 0.1 and 0.3") {
    // Bin A: confidence 0.9, accuracy 1.0. Bin B: confidence 0.3, accuracy 0.0.
    const std::vector<double> c{0.9, 0.9, 0.3, 0.3};
    const Flags ok{1, 1, 0, 0};
    CHECK(ece(c, ok) == doctest::Approx(0.2));
    CHECK(mce(c, ok) == doctest::Approx(0.3));
  }
  SUBCASE("right-closed bins") {
    const auto bins = reliability_bins(std::vector<double>{0.0, 1.0 / 15.0, 1.0}, Flags{0, 1, 1}, 15);
    CHECK(bins[0].count == 2);
    CHECK(bins[14].count == 1);
  }
  SUBCASE("MCE >= ECE on random inputs") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> c;
      Flags ok;
      for (int i = 0; i < 60; ++i) {
        c.push_back(rng.uniform());
        ok.push_back(rng.uniform() < c.back());
      }
      for (std::size_t m : {std::size_t{1}, 1 + rng.below(20)}) CHECK(mce(c, ok, m) >= ece(c, ok, m));
      const std::size_t m = 1 + rng.below(20);
      CHECK(ece(c, ok, m) >= 0.0);
      CHECK(mce(c, ok, m) <= 1.0);
    }
  }
}

TEST_CASE("nll and brier") {
  const LabelVector y{{0, 1}, 2};
  CHECK(nll(ProbMatrix(2, 2, {1.0, 0.0, 0.0, 1.0}), y) == 0.0);
  CHECK(nll(ProbMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}), y) == doctest::Approx(std::log(2.0)));
  CHECK(nll(ProbMatrix(1, 2, {0.0, 1.0}), LabelVector{{0}, 2}) == doctest::Approx(-std::log(1e-12)));
  CHECK(brier(ProbMatrix(2, 2, {1.0, 0.0, 0.0, 1.0}), y) == 0.0);
  CHECK(brier(ProbMatrix(2, 2, {0.5, 0.5, 0.5, 0.5}), y) == doctest::Approx(0.5));
  CHECK(brier(ProbMatrix(1, 3, {0.7, 0.2, 0.1}), LabelVector{{0}, 3}) == doctest::Approx(0.14));
  CHECK_ERROR_CODE(nll(ProbMatrix(1, 2, {0.5, 0.5}), LabelVector{{0, 1}, 2}), ErrorCode::invalid_input);
}

TEST_CASE("nll of softmax logits equals the training cross-entropy") {
  Rng rng(31);
  model::LinearLayer layer{Matrix(5, 8), std::vector<double>(5)};
  for (double& v : layer.weight.values()) v = rng.normal();
  Matrix x(30, 8);
  for (double& v : x.values()) v = rng.normal();
  std::vector<int> y;
  LabelVector labels{{}, 5};
  for (int i = 0; i < 30; ++i) {
    y.push_back(static_cast<int>(rng.below(5)));
    labels.labels.push_back(y.back());
  }
  const double train_ce = model::layer_loss(layer, x, y, nullptr);
  CHECK(std::abs(nll(softmax_rows(model::apply_layer(layer, x)), labels) - train_ce) <= 1e-9);
}

TEST_CASE("binned correlation and correlations") {
  SUBCASE("accuracy increasing with bin index gives rho 1") {
    std::vector<double> c;
    Flags ok;
    for (int b = 0; b < 10; ++b) {
      for (int i = 0; i < 10; ++i) {
        c.push_back((b + 0.5) / 10.0);
        ok.push_back(i < b + 1);
      }
    }
    const auto r = binned_correlation(c, ok, 10);
    CHECK(r.bins.size() == 10);
    CHECK(r.spearman == doctest::Approx(1.0));
  }
  SUBCASE("constant accuracy gives rho 0") {
    const std::vector<double> c{0.05, 0.15, 0.25, 0.35};
    const auto r = binned_correlation(c, Flags{1, 1, 1, 1}, 4);
    CHECK(r.spearman == 0.0);
  }
  SUBCASE("empty bins are skipped") {
    const auto r = binned_correlation(std::vector<double>{0.05, 0.95, 1.0}, Flags{0, 1, 1}, 2);
    CHECK(r.bins.size() == 2);
    CHECK(r.bins[1].count == 2);
  }
  CHECK_ERROR_CODE(binned_correlation(std::vector<double>{0.5}, Flags{1}, 10), ErrorCode::invalid_input);
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}) == doctest::Approx(1.0));
  CHECK(spearman(std::vector<double>{1, 2, 2, 3}, std::vector<double>{4, 3, 3, 1}) == doctest::Approx(-1.0));
  CHECK(point_biserial(std::vector<double>{0.1, 0.2, 0.8, 0.9}, Flags{0, 0, 1, 1}) > 0.9);
  CHECK(point_biserial(std::vector<double>{0.5, 0.5}, Flags{0, 1}) == 0.0);
}

TEST_CASE("reports") {
  const std::vector<double> conf{0.9, 0.8, 0.3, 0.2};
  const Flags ok{1, 1, 0, 0};
  const auto r = misclassification_report(conf, ok);
  CHECK(*r.auroc == 1.0);
  CHECK(*r.fpr_at_95tpr == 0.0);
  CHECK_FALSE(r.ece.has_value());
  const ReportTable t{"Misclassification detection",
                      {Column::fpr_at_95tpr, Column::aupr_err, Column::aupr_succ, Column::auroc},
                      {{"MSP", r}, {"MSP+SSP", r}}};
  const auto csv = to_csv(t);
  CHECK(csv.rfind("method,fpr_at_95tpr,aupr_err,aupr_succ,auroc\n", 0) == 0);
  CHECK(csv.find("MSP,0.0000000000,1.0000000000,1.0000000000,1.0000000000\n") != std::string::npos);
  const auto md = to_markdown(t);
  CHECK(md.find("### Misclassification detection") != std::string::npos);
  CHECK(md.find("100.00") != std::string::npos);

  const auto cal = calibration_report(ProbMatrix(2, 2, {0.8, 0.2, 0.4, 0.6}), LabelVector{{0, 0}, 2}, 15);
  CHECK(cal.nll.has_value());
  CHECK(*cal.brier == doctest::Approx((0.04 + 0.04 + 0.36 + 0.36) / 2.0));
  CHECK(correctness(Matrix(2, 2, {0.8, 0.2, 0.4, 0.6}), LabelVector{{0, 0}, 2}) == Flags{1, 0});
}
