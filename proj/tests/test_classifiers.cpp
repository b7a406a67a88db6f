#include <doctest.h>

#include <json.hpp>
#include <random>

#include "oracles.hpp"
#include "tdabc/classifiers.hpp"

using namespace tdabc;

namespace {

LabeledDataset two_clusters(std::uint64_t seed, std::size_t per_cluster = 10) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LabeledDataset d;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < per_cluster; ++i) {
      d.points.push_back({c * 100.0 + u(rng), u(rng)});
      d.labels.push_back(c);
    }
  d.label_names = {"A", "B"};
  return d;
}

ClassifierConfig tdabc_config(ClassifierKind kind, SublevelChoice s = SublevelChoice::Death, int q = 3) {
  ClassifierConfig c;
  c.kind = kind;
  c.sublevel = s;
  c.q = q;
  return c;
}

}  // namespace

TEST_CASE("well separated clusters") {
  const auto data = two_clusters(1);
  const std::vector<Point> test{{0.5, 0.5}};
  for (auto kind : {ClassifierKind::TdabcR, ClassifierKind::TdabcM, ClassifierKind::TdabcA})
    for (auto s : {SublevelChoice::Birth, SublevelChoice::Middle, SublevelChoice::Death}) {
      const auto r = tdabc_predict(data, test, tdabc_config(kind, s));
      REQUIRE(r.predicted.size() == 1);
      CHECK(r.predicted[0] == 0);
      CHECK(r.chosen_interval.has_value());
      CHECK(r.chosen_epsilon.has_value());
    }
}

TEST_CASE("one training point and one test point") {
  LabeledDataset train;
  train.points = {{0.0, 0.0}};
  train.labels = {0};
  train.label_names = {"only", "other"};
  const std::vector<Point> test{{3.0, 4.0}};
  const auto r = tdabc_predict(train, test, tdabc_config(ClassifierKind::TdabcA, SublevelChoice::Death, 1));
  CHECK(r.predicted == std::vector<LabelId>{0});
}

TEST_CASE("tdabc_predict guards") {
  const auto data = two_clusters(2, 2);
  const std::vector<Point> test{{0.5, 0.5}};
  CHECK_THROWS_AS(tdabc_predict(data, {}, tdabc_config(ClassifierKind::TdabcA)), InputError);
  CHECK_THROWS_AS(tdabc_predict(LabeledDataset{}, test, tdabc_config(ClassifierKind::TdabcA)), InputError);
  CHECK_THROWS_AS(tdabc_predict(data, test, tdabc_config(ClassifierKind::TdabcA, SublevelChoice::Death, 5)),
                  InputError);
}

TEST_CASE("semi-supervised: fewer training than test points") {
  const auto all = two_clusters(3, 12);
  LabeledDataset train;
  std::vector<Point> test;
  std::vector<LabelId> truth;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i % 6 == 0) {
      train.points.push_back(all.points[i]);
      train.labels.push_back(all.labels[i]);
    } else {
      test.push_back(all.points[i]);
      truth.push_back(all.labels[i]);
    }
  }
  train.label_names = all.label_names;
  const auto r = tdabc_predict(train, test, tdabc_config(ClassifierKind::TdabcM));
  CHECK(r.predicted == truth);
}

TEST_CASE("edge collapse does not change predictions") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 8; ++trial) {
    LabeledDataset train;
    const auto pts = oracle::random_cloud(gen, 40, 2);
    for (std::size_t i = 0; i < 30; ++i) {
      train.points.push_back(pts[i]);
      train.labels.push_back(pts[i][0] + pts[i][1] > 1.0 ? 1 : 0);
    }
    train.label_names = {"lo", "hi"};
    const std::vector<Point> test(pts.begin() + 30, pts.end());
    for (auto kind : {ClassifierKind::TdabcR, ClassifierKind::TdabcM, ClassifierKind::TdabcA}) {
      auto on = tdabc_config(kind, SublevelChoice::Death, 3);
      on.seed = static_cast<std::uint64_t>(trial);
      auto off = on;
      off.use_edge_collapse = false;
      const auto a = tdabc_predict(train, test, on);
      const auto b = tdabc_predict(train, test, off);
      CHECK(a.predicted == b.predicted);
      CHECK(*a.chosen_interval == *b.chosen_interval);
    }
  }
}

TEST_CASE("tdabc is deterministic per seed") {
  const auto data = two_clusters(5);
  const std::vector<Point> test{{50.0, 0.5}, {0.2, 0.2}, {100.5, 0.1}};
  auto cfg = tdabc_config(ClassifierKind::TdabcR);
  cfg.seed = 9;
  const auto a = tdabc_predict(data, test, cfg);
  const auto b = tdabc_predict(data, test, cfg);
  CHECK(a.predicted == b.predicted);
  CHECK(*a.chosen_epsilon == *b.chosen_epsilon);
}

TEST_CASE("k-NN") {
  LabeledDataset train;
  train.points = {{0.0}, {1.0}, {2.0}, {10.0}};
  train.labels = {0, 0, 1, 1};
  CHECK(knn_predict(train, std::vector<Point>{{10.0}}, 1).predicted == std::vector<LabelId>{1});
  CHECK(knn_predict(train, std::vector<Point>{{0.9}}, 3).predicted == std::vector<LabelId>{0});
  CHECK_THROWS_AS(knn_predict(train, std::vector<Point>{{0.0}}, 5), InputError);
  // Two votes each: the smaller label id wins.
  CHECK(knn_predict(train, std::vector<Point>{{5.0}}, 4).predicted == std::vector<LabelId>{0});
}

TEST_CASE("weighted k-NN") {
  LabeledDataset train;
  train.points = {{-1.0}, {0.25}, {1.0}};
  train.labels = {0, 1, 0};
  CHECK(wknn_predict(train, std::vector<Point>{{0.0}}, 3).predicted == std::vector<LabelId>{1});
  CHECK(knn_predict(train, std::vector<Point>{{0.0}}, 3).predicted == std::vector<LabelId>{0});
  LabeledDataset same;
  same.points = {{0.0}, {1.0}, {2.0}};
  same.labels = {2, 2, 2};
  same.label_names = {"a", "b", "c"};
  CHECK(wknn_predict(same, std::vector<Point>{{7.0}}, 3).predicted == std::vector<LabelId>{2});
  // An exact coincidence outvotes any number of near neighbours.
  LabeledDataset dup;
  dup.points = {{0.0}, {0.01}, {-0.01}};
  dup.labels = {1, 0, 0};
  CHECK(wknn_predict(dup, std::vector<Point>{{0.0}}, 3).predicted == std::vector<LabelId>{1});
}

TEST_CASE("1-NN agrees with the brute-force oracle") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::random_cloud(gen, 30, 3);
    LabeledDataset train;
    train.points.assign(pts.begin(), pts.begin() + 20);
    for (std::size_t i = 0; i < 20; ++i) train.labels.push_back(static_cast<LabelId>(i % 4));
    const std::vector<Point> test(pts.begin() + 20, pts.end());
    const auto r = knn_predict(train, test, 1);
    for (std::size_t t = 0; t < test.size(); ++t)
      CHECK(r.predicted[t] == train.labels[oracle::nearest(train.points, test[t])]);
  }
}

TEST_CASE("config JSON") {
  ClassifierConfig c;
  c.kind = ClassifierKind::TdabcM;
  c.q = 8;
  c.sublevel = SublevelChoice::Middle;
  c.max_filtration = 1.5;
  c.links = LinkComplex::Collapsed;
  const auto back = ClassifierConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK(back.name() == "TDABC-M");
  CHECK_THROWS_AS(ClassifierConfig::from_json(R"({"kind":"TDABC-A","bogus":1})"), InputError);
  CHECK_THROWS_AS(ClassifierConfig::from_json(R"({"kind":"TDABC-A","q":0})"), InputError);
  CHECK_THROWS_AS(ClassifierConfig::from_json(R"({"kind":"k-NN","k":0})"), InputError);
  CHECK(parse_classifier_kind("wknn") == ClassifierKind::Wknn);
  CHECK(parse_classifier_kind("A") == ClassifierKind::TdabcA);
}

TEST_CASE("prediction outputs") {
  PredictionResult r;
  r.predicted = {1, 0};
  r.assignments.resize(2);
  const std::vector<LabelId> truth{1, 1};
  CHECK(prediction_csv(r, truth) == "index,true,predicted\n0,1,1\n1,1,0\n");
  const auto j = nlohmann::json::parse(prediction_json(r));
  CHECK(j["chosen_interval"].is_null());
}

TEST_CASE("sublevel levels") {
  const PersistenceInterval d{1, 0.2, 0.6};
  CHECK(sublevel_epsilon(d, SublevelChoice::Birth) == 0.2);
  CHECK(sublevel_epsilon(d, SublevelChoice::Middle) == doctest::Approx(0.4));
  CHECK(sublevel_epsilon(d, SublevelChoice::Death) == 0.6);
}
