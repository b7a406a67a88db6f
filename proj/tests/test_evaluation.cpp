#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tdabc/evaluation.hpp"

using namespace tdabc;

namespace {

LabeledDataset blobs(const std::vector<int>& sizes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.3);
  LabeledDataset d;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    for (int i = 0; i < sizes[c]; ++i) {
      d.points.push_back({static_cast<double>(c) + n(rng), n(rng)});
      d.labels.push_back(static_cast<LabelId>(c));
    }
  return d;
}

void check_close(const MetricReport& r, const oracle::Metrics& m) {
  CHECK(r.acc() == doctest::Approx(m.acc).epsilon(1e-12));
  CHECK(r.pr() == doctest::Approx(m.pr).epsilon(1e-12));
  CHECK(r.re() == doctest::Approx(m.re).epsilon(1e-12));
  CHECK(r.tnr() == doctest::Approx(m.tnr).epsilon(1e-12));
  CHECK(r.fpr() == doctest::Approx(m.fpr).epsilon(1e-12));
  CHECK(r.f1() == doctest::Approx(m.f1).epsilon(1e-12));
  CHECK(r.mcc() == doctest::Approx(m.mcc).epsilon(1e-12));
  CHECK(r.gmean() == doctest::Approx(m.gmean).epsilon(1e-12));
  CHECK(r.cerr() == doctest::Approx(m.cerr).epsilon(1e-12));
}

}  // namespace

TEST_CASE("per-label counts") {
  const std::vector<LabelId> y{0, 0, 1, 1}, yh{0, 1, 1, 1};
  const auto c = per_label_counts(y, yh, 2, CountMode::Paper);
  CHECK(c[0] == LabelCounts{1, 0, 2, 1});
  CHECK(c[1] == LabelCounts{2, 1, 1, 0});
  CHECK_THROWS(per_label_counts(y, std::vector<LabelId>{0, 1}, 2, CountMode::Paper));
  CHECK_THROWS(per_label_counts(y, std::vector<LabelId>{0, 1, 2, 1}, 2, CountMode::Paper));
}

TEST_CASE("paper-mode FN counts errors that do not involve the label") {
  std::vector<LabelId> y, yh;
  for (LabelId a = 0; a < 3; ++a)
    for (LabelId b = 0; b < 3; ++b) {
      y.push_back(a);
      yh.push_back(b);
    }
  const auto paper = per_label_counts(y, yh, 3, CountMode::Paper);
  const auto standard = per_label_counts(y, yh, 3, CountMode::Standard);
  for (LabelId l = 0; l < 3; ++l) {
    long unrelated = 0;
    for (std::size_t i = 0; i < y.size(); ++i) unrelated += y[i] != yh[i] && y[i] != l && yh[i] != l;
    CHECK(paper[l].fn - standard[l].fn == unrelated);
    CHECK(paper[l].tp + paper[l].fp + paper[l].tn + paper[l].fn == static_cast<long>(y.size()));
  }
}

TEST_CASE("metric examples") {
  const std::vector<LabelId> y{0, 0, 1, 1};
  const auto perfect = evaluate(y, y, 2, CountMode::Paper);
  for (double v : {perfect.acc(), perfect.pr(), perfect.re(), perfect.tnr(), perfect.f1(), perfect.gmean(),
                   perfect.mcc()})
    CHECK(v == 1.0);
  CHECK(perfect.fpr() == 0.0);
  CHECK(perfect.cerr() == 0.0);

  const auto r = evaluate(y, std::vector<LabelId>{0, 1, 1, 1}, 2, CountMode::Paper);
  CHECK(r.acc() == 0.75);
  CHECK(r.cerr() == 0.25);

  const auto constant = evaluate(y, std::vector<LabelId>{0, 0, 0, 0}, 2, CountMode::Paper);
  CHECK(constant.gmean() == 0.0);
  CHECK(constant.mcc() == 0.0);
}

TEST_CASE("metrics agree with the table formulas") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int labels = 2 + trial % 4;
    const std::size_t n = 5 + static_cast<std::size_t>(trial % 17);
    std::uniform_int_distribution<int> pick(0, labels - 1);
    std::vector<int> y(n), yh(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = pick(gen);
      yh[i] = trial % 5 == 0 ? y[i] : pick(gen);
    }
    for (bool paper : {true, false}) {
      const auto r = evaluate(y, yh, labels, paper ? CountMode::Paper : CountMode::Standard);
      check_close(r, oracle::metrics(y, yh, labels, paper));
      for (double v : {r.acc(), r.pr(), r.re(), r.tnr(), r.fpr(), r.f1(), r.gmean()}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      CHECK(r.mcc() >= -1.0);
      CHECK(r.mcc() <= 1.0);
      std::size_t right = 0;
      for (std::size_t i = 0; i < n; ++i) right += y[i] == yh[i];
      CHECK(r.cerr() + static_cast<double>(right) / static_cast<double>(n) == doctest::Approx(1.0));
      for (const auto& c : r.counts)
        if (c.tn + c.fp > 0) {
          const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
          const double fpr = static_cast<double>(c.fp) / static_cast<double>(c.tn + c.fp);
          CHECK(tnr + fpr == doctest::Approx(1.0));
        }
    }
  }
}

TEST_CASE("confusion matrix") {
  const std::vector<LabelId> y{0, 0, 1, 1}, yh{0, 1, 1, 1};
  CHECK(confusion_matrix(y, yh, 2) == ConfusionMatrix{{1, 1}, {0, 2}});
  CHECK(confusion_matrix(y, y, 2) == ConfusionMatrix{{2, 0}, {0, 2}});
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<LabelId> a(40), b(40);
    for (std::size_t i = 0; i < 40; ++i) {
      a[i] = pick(gen);
      b[i] = pick(gen);
    }
    const auto m = confusion_matrix(a, b, 4);
    long total = 0;
    for (const auto& row : m)
      for (long v : row) total += v;
    CHECK(total == 40);
    const auto standard = per_label_counts(a, b, 4, CountMode::Standard);
    CHECK(counts_from_confusion(m) == standard);
    const auto from_m = compute_metrics(counts_from_confusion(m), a, b, CountMode::Standard);
    CHECK(from_m.values == evaluate(a, b, 4, CountMode::Standard).values);
  }
}

TEST_CASE("fold construction") {
  const auto iris_like = blobs({50, 50, 50}, 1);
  CvPlan plan;
  const auto folds = make_folds(iris_like, plan);
  CHECK(folds.size() == 50);
  CHECK(folds_per_repeat(150, 0.1) == 10);
  for (int r = 0; r < plan.repeats; ++r) {
    std::vector<int> seen(150, 0);
    for (const auto& f : folds)
      if (f.repeat == r)
        for (auto i : f.test) ++seen[i];
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
  const auto skewed = blobs({60, 10, 50, 100, 80}, 2);
  const auto sf = make_folds(skewed, plan);
  const auto counts = skewed.class_counts();
  for (const auto& f : sf) {
    CHECK(f.train.size() + f.test.size() == skewed.size());
    std::vector<int> in(5, 0);
    for (auto i : f.test) ++in[skewed.labels[i]];
    for (std::size_t c = 0; c < 5; ++c) {
      const double expected = static_cast<double>(counts[c]) * static_cast<double>(f.test.size()) / 300.0;
      CHECK(std::abs(in[c] - expected) <= 1.0 + 1e-9);
    }
  }
  CvPlan bad;
  bad.fold_fraction = 1.0;
  bad.repeats = 1;
  CHECK_THROWS_AS(make_folds(iris_like, bad), InputError);
  bad = CvPlan{};
  bad.repeats = 0;
  CHECK_THROWS_AS(make_folds(iris_like, bad), InputError);
}

TEST_CASE("repeated cross-validation") {
  const auto data = blobs({50, 50, 50}, 3);
  ClassifierConfig knn;
  knn.kind = ClassifierKind::Knn;
  CvPlan plan;
  plan.seed = 5;
  const auto a = repeated_cv(data, knn, plan);
  CHECK(a.executions == 50);
  CHECK(a.truth.size() == 750);
  CHECK(a.predicted.size() == 750);
  const auto b = repeated_cv(data, knn, plan, 4);
  CHECK(a.truth == b.truth);
  CHECK(a.predicted == b.predicted);

  ClassifierConfig t;
  t.kind = ClassifierKind::TdabcR;
  t.q = 3;
  const auto c = repeated_cv(data, t, plan, 1);
  const auto d = repeated_cv(data, t, plan, 3);
  CHECK(c.predicted == d.predicted);
  CHECK(c.chosen_epsilons == d.chosen_epsilons);
  CHECK(c.diagrams.has_value());
  CHECK(c.samples.size() == 750);
}

TEST_CASE("folds missing a class are logged, not fatal") {
  const auto data = blobs({30, 1}, 4);
  ClassifierConfig knn;
  knn.kind = ClassifierKind::Knn;
  knn.k = 3;
  CvPlan plan;
  plan.repeats = 1;
  const auto r = repeated_cv(data, knn, plan);
  CHECK_FALSE(r.warnings.empty());
  CHECK(r.truth.size() == 31);
}
