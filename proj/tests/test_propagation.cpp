#include <doctest.h>

#include <json.hpp>
#include <random>
#include <set>

#include "oracles.hpp"
#include "tdabc/propagation.hpp"

using namespace tdabc;

namespace {

TrainingLabels make_labels(std::vector<LabelId> l, int n) { return TrainingLabels{std::move(l), n}; }

// Vertex 0 unlabeled, joined to 1 (label 0) at 0.5 and 2 (label 1) at 1.0.
FilteredComplex star_graph() {
  FilteredComplex k(1);
  for (Vertex v = 0; v < 3; ++v) k.insert(Simplex{v}, 0.0);
  k.insert(Simplex{0, 1}, 0.5);
  k.insert(Simplex{0, 2}, 1.0);
  return k;
}

}  // namespace

TEST_CASE("association") {
  const auto labels = make_labels({0, 1, TrainingLabels::kUnlabeled, 0}, 2);
  const std::vector<Vertex> ab{0, 1}, none{2}, abc{0, 3, 2};
  CHECK(association(ab, labels) == LabelVector{1, 1});
  CHECK(association(none, labels) == LabelVector{0, 0});
  CHECK(association(abc, labels) == LabelVector{2, 0});
  // Linearity over vertices.
  LabelVector sum(2, 0.0);
  for (Vertex v : abc) {
    const std::vector<Vertex> one{v};
    const auto a = association(one, labels);
    sum[0] += a[0];
    sum[1] += a[1];
  }
  CHECK(sum == association(abc, labels));
}

TEST_CASE("extension weights by the connecting coface") {
  const auto k = star_graph();
  const auto labels = make_labels({TrainingLabels::kUnlabeled, 0, 1}, 2);
  std::size_t link_size = 0;
  CHECK(extension(0, k.restrict(kInfinity), labels, &link_size) == LabelVector{2.0, 1.0});
  CHECK(link_size == 2);
  CHECK(extension(0, k.restrict(0.1), labels) == LabelVector{0.0, 0.0});
  CHECK_THROWS(extension(7, k.restrict(1.0), labels));
}

TEST_CASE("equal vote counts are separated by weights") {
  // Two neighbours per label; label 1's are farther away.
  FilteredComplex k(1);
  k.insert(Simplex{0, 1}, 0.2);
  k.insert(Simplex{0, 2}, 0.3);
  k.insert(Simplex{0, 3}, 0.4);
  k.insert(Simplex{0, 4}, 0.5);
  const auto labels = make_labels({TrainingLabels::kUnlabeled, 0, 0, 1, 1}, 2);
  std::mt19937_64 rng(0);
  const auto a = label(0, k.restrict(1.0), labels, rng);
  CHECK(a.label == 0);
  CHECK_FALSE(a.was_tie);
}

TEST_CASE("decide") {
  std::mt19937_64 rng(0);
  LabelAssignment a;
  a.scores = {2.0, 1.0};
  decide(a, rng);
  CHECK(a.label == 0);
  CHECK(a.probabilities[0] == doctest::Approx(2.0 / 3.0));
  CHECK(a.probabilities[1] == doctest::Approx(1.0 / 3.0));
  std::set<LabelId> seen;
  for (std::uint64_t s = 0; s < 64; ++s) {
    std::mt19937_64 r(s);
    LabelAssignment t;
    t.scores = {1.0, 1.0};
    decide(t, r);
    CHECK(t.was_tie);
    seen.insert(t.label);
  }
  CHECK(seen == std::set<LabelId>{0, 1});
}

TEST_CASE("empty link falls back to the nearest labeled point") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = oracle::random_cloud(gen, 12, 2);
    const DistanceMatrix d(pts);
    std::vector<LabelId> l(12);
    for (std::size_t i = 0; i < 12; ++i) l[i] = static_cast<LabelId>(i % 3);
    l[0] = TrainingLabels::kUnlabeled;
    const auto labels = make_labels(l, 3);
    std::mt19937_64 rng(1);
    FallbackPolicy policy;
    policy.escalate = false;
    policy.distances = &d;
    const RipsSublevel view(d, 0.0, 2);
    const auto a = label(0, view, labels, rng, policy);
    CHECK(a.fallback_used == Fallback::NearestNeighbor);
    std::vector<std::vector<double>> train(pts.begin() + 1, pts.end());
    CHECK(a.label == l[1 + oracle::nearest(train, pts[0])]);
  }
}

TEST_CASE("escalation picks the first level with a labeled neighbour") {
  const auto k = star_graph();
  const auto labels = make_labels({TrainingLabels::kUnlabeled, 0, 1}, 2);
  std::mt19937_64 rng(0);
  const auto a = label(0, k.restrict(0.1), labels, rng);
  CHECK(a.fallback_used == Fallback::EscalatedLevel);
  CHECK(a.epsilon == 0.5);
  CHECK(a.label == 0);
  FallbackPolicy capped;
  capped.max_eps = 0.4;
  const auto b = label(0, k.restrict(0.1), labels, rng, capped);
  CHECK(b.fallback_used == Fallback::NearestNeighbor);
  CHECK(b.label == 0);
}

TEST_CASE("no labeled vertex is an error") {
  const auto k = star_graph();
  std::mt19937_64 rng(0);
  CHECK_THROWS(label(0, k.restrict(1.0), make_labels({-1, -1, -1}, 2), rng));
}

TEST_CASE("implicit and materialized Rips links agree") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = oracle::random_cloud(gen, 10, 3);
    const DistanceMatrix d(pts);
    RipsOptions o;
    o.max_dimension = 3;
    o.max_filtration = 1.0;
    const auto k = build_rips(d, o);
    std::vector<LabelId> l(10);
    for (std::size_t i = 0; i < 10; ++i) l[i] = i % 4 == 0 ? TrainingLabels::kUnlabeled : static_cast<LabelId>(i % 2);
    const auto labels = make_labels(l, 2);
    for (double eps : {0.3, 0.6, 1.0}) {
      const RipsSublevel implicit(d, eps, 3);
      for (Vertex v = 0; v < 10; ++v) {
        std::size_t n1 = 0, n2 = 0;
        const auto a = extension(v, k.restrict(eps), labels, &n1);
        const auto b = extension(v, implicit, labels, &n2);
        CHECK(n1 == n2);
        for (std::size_t c = 0; c < 2; ++c) CHECK(a[c] == doctest::Approx(b[c]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("extension properties") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 15; ++trial) {
    const auto pts = oracle::random_cloud(gen, 9, 2);
    auto scaled = pts;
    const double c = 2.5;
    for (auto& p : scaled)
      for (auto& x : p) x *= c;
    const DistanceMatrix d(pts), ds(scaled);
    std::vector<LabelId> l(9);
    for (std::size_t i = 0; i < 9; ++i) l[i] = i < 2 ? TrainingLabels::kUnlabeled : static_cast<LabelId>(i % 3);
    const auto labels = make_labels(l, 3);
    RipsOptions o;
    o.max_dimension = 2;
    o.max_filtration = 0.8;
    const auto k = build_rips(d, o);
    for (Vertex v = 0; v < 9; ++v) {
      // Scale covariance.
      const auto a = extension(v, RipsSublevel(d, 0.6, 2), labels);
      const auto b = extension(v, RipsSublevel(ds, 0.6 * c, 2), labels);
      for (std::size_t j = 0; j < 3; ++j) CHECK(b[j] == doctest::Approx(a[j] / c));
      // Whole complex == restriction to the top level.
      const auto values = k.filtration_values();
      CHECK(extension(v, k.restrict(kInfinity), labels) == extension(v, k.restrict(values.back()), labels));
      // Growing epsilon never empties a link.
      bool had = false;
      for (Filtration eps : values) {
        const auto link = k.restrict(eps).link(Simplex{v});
        if (had) CHECK_FALSE(link.empty());
        had = had || !link.empty();
      }
    }
  }
}

TEST_CASE("useful simplices") {
  const std::vector<bool> train{true, true, false, false}, test{false, false, true, true};
  const std::vector<Vertex> two_one{0, 1, 2}, one_one{0, 2}, all_test{2, 3};
  CHECK(is_useful(two_one, train, test));
  CHECK_FALSE(is_useful(one_one, train, test));
  CHECK_FALSE(is_useful(all_test, train, test));
  const auto k = star_graph();
  CHECK(count_useful(k.restrict(1.0), {false, true, true}, {true, false, false}) == 2);
}

TEST_CASE("explanation record") {
  LabelAssignment a;
  a.label = 1;
  a.scores = {0.5, 2.0};
  a.link_size = 4;
  const auto j = nlohmann::json::parse(explanation_json(3, a));
  CHECK(j["vertex"] == 3);
  CHECK(j["chosen_label"] == 1);
  CHECK(j["link_size"] == 4);
  CHECK(j["fallback_used"] == "none");
}

TEST_CASE("cached link weights give the same extension") {
  std::mt19937_64 gen(44);
  const auto pts = oracle::random_cloud(gen, 25, 3);
  const DistanceMatrix d(pts);
  RipsLinkCache cache;
  std::vector<LabelId> l(25);
  for (std::size_t i = 0; i < 25; ++i) l[i] = i % 5 == 0 ? TrainingLabels::kUnlabeled : static_cast<LabelId>(i % 3);
  for (int round = 0; round < 2; ++round) {
    std::shuffle(l.begin(), l.end(), gen);
    const auto labels = make_labels(l, 3);
    for (double eps : {0.3, 0.5}) {
      const RipsSublevel view(d, eps, 4);
      for (Vertex v = 0; v < 25; ++v) {
        std::size_t a = 0, b = 0;
        CHECK(extension(v, view, labels, &a, &cache) == extension(v, view, labels, &b));
        CHECK(a == b);
        CHECK(cache.get(v, view) == cache.get(v, view));
      }
    }
  }
  const DistanceMatrix other(pts);
  CHECK_THROWS(cache.get(0, RipsSublevel(other, 0.3, 4)));
}
