#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tdabc/persistence.hpp"

using namespace tdabc;

namespace {

std::vector<oracle::Interval> flatten(const DiagramSet& d) {
  std::vector<oracle::Interval> out;
  for (const auto& i : d.all()) out.push_back({i.dim, i.birth, i.death});
  std::sort(out.begin(), out.end());
  return out;
}

oracle::Cells cells_of(const FilteredComplex& k) {
  oracle::Cells out;
  k.for_each_simplex([&](std::span<const Vertex> vs, Filtration v) {
    out[oracle::Cell(vs.begin(), vs.end())] = v;
  });
  return out;
}

FilteredComplex rips(const std::vector<Point>& pts, int q, double eps) {
  RipsOptions o;
  o.max_dimension = q;
  o.max_filtration = eps;
  return build_rips(pts, o);
}

std::mt19937_64 rng_for_test(std::uint64_t s) { return std::mt19937_64(s); }

}  // namespace

TEST_CASE("single vertex") {
  const auto d = compute_persistence(rips({{0.0}}, 1, 1.0));
  REQUIRE(d[0].size() == 1);
  CHECK(d[0][0].birth == 0.0);
  CHECK(d[0][0].infinite());
}

TEST_CASE("two points") {
  const auto d = compute_persistence(rips({{0.0}, {2.5}}, 1, 3.0));
  REQUIRE(d[0].size() == 2);
  CHECK(d[0][0] == PersistenceInterval{0, 0.0, 2.5});
  CHECK(d[0][1].infinite());
}

TEST_CASE("unit square") {
  const auto d = compute_persistence(rips({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 2, 2.0));
  REQUIRE(d.size() == 2);
  std::vector<PersistenceInterval> h1;
  for (const auto& i : d[1])
    if (!i.zero_life()) h1.push_back(i);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0].birth == 1.0);
  CHECK(h1[0].death == std::sqrt(2.0));
  int finite = 0, infinite = 0;
  for (const auto& i : d[0]) {
    if (i.infinite()) ++infinite;
    else if (i.death == 1.0) ++finite;
  }
  CHECK(infinite == 1);
  CHECK(finite == 3);
  CHECK(d.max_eps == std::sqrt(2.0));
  const auto set = get_persistence_interval_set(d);
  REQUIRE(set.size() == 1);
  CHECK(set[0] == h1[0]);
}

TEST_CASE("theta transform") {
  CHECK(theta_transform({0, 0.0, kInfinity}, 2.5) == PersistenceInterval{0, 0.0, 2.5});
  CHECK(theta_transform({1, 0.3, 0.9}, 2.5) == PersistenceInterval{1, 0.3, 0.9});
  CHECK(theta_transform({1, 1.0, kInfinity}, 3.0).life() == 2.0);
}

TEST_CASE("interval set selection by dimension") {
  DiagramSet d;
  d.diagrams = {{{0, 0, kInfinity}}, {{1, 0.1, 0.2}}, {{2, 0.3, 0.5}}};
  CHECK(get_persistence_interval_set(d) == std::vector<PersistenceInterval>{{2, 0.3, 0.5}});
  d.diagrams = {{{0, 0, kInfinity}, {0, 0, 1}}, {}, {}};
  CHECK(get_persistence_interval_set(d).size() == 2);
  d.diagrams = {{}, {}};
  CHECK_THROWS_AS(get_persistence_interval_set(d), std::invalid_argument);
  // Zero-life intervals do not count as content.
  d.diagrams = {{{0, 0, kInfinity}}, {{1, 0.4, 0.4}}};
  CHECK(get_persistence_interval_set(d).front().dim == 0);
  CHECK(get_persistence_interval_set(d, true).front().dim == 1);
}

TEST_CASE("interval selection strategies") {
  const std::vector<PersistenceInterval> D{{1, 0, 1}, {1, 0.5, 3}, {1, 2, kInfinity}};
  std::mt19937_64 rng(1);
  CHECK(select_interval(D, SelectionStrategy::MaxInt, 4.0, rng) == PersistenceInterval{1, 0.5, 3});
  CHECK(select_interval(D, SelectionStrategy::AvgInt, 4.0, rng) == PersistenceInterval{1, 2, 4});
  for (auto s : {SelectionStrategy::MaxInt, SelectionStrategy::AvgInt, SelectionStrategy::RandInt})
    CHECK(select_interval({{1, 0.2, 0.7}}, s, 4.0, rng) == PersistenceInterval{1, 0.2, 0.7});
  CHECK_THROWS(select_interval({}, SelectionStrategy::MaxInt, 1.0, rng));

  // MaxInt maximizes life after theta; RandInt draws from the whole set.
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::set<PersistenceInterval> seen;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PersistenceInterval> set;
    for (int i = 0; i < 5; ++i) {
      const double b = u(gen);
      set.push_back({1, b, u(gen) < 0.2 ? kInfinity : b + u(gen)});
    }
    const auto m = select_interval(set, SelectionStrategy::MaxInt, 3.0, gen);
    for (const auto& i : set) CHECK(m.life() >= theta_transform(i, 3.0).life());
    if (trial == 0)
      for (int k = 0; k < 200; ++k) seen.insert(select_interval(set, SelectionStrategy::RandInt, 3.0, gen));
  }
  CHECK(seen.size() == 5);
  // Ties resolve to the smallest birth.
  CHECK(select_interval({{1, 0.5, 1.5}, {1, 0.2, 1.2}}, SelectionStrategy::MaxInt, 3.0, rng) ==
        PersistenceInterval{1, 0.2, 1.2});
}

TEST_CASE("strategy names") {
  CHECK(parse_strategy("R") == SelectionStrategy::RandInt);
  CHECK(parse_strategy("maxint") == SelectionStrategy::MaxInt);
  CHECK(parse_strategy("A") == SelectionStrategy::AvgInt);
  CHECK_THROWS_AS(parse_strategy("Z"), InputError);
}

TEST_CASE("diagrams match textbook reduction") {
  auto rng = rng_for_test(77);
  for (int trial = 0; trial < 60; ++trial) {
    const auto pts = oracle::random_cloud(rng, 4 + trial % 8, 2 + trial % 3, trial % 3 == 0);
    const int q = 1 + trial % 3;
    const auto k = rips(pts, q, trial % 3 == 0 ? 3.0 : 0.8);
    const auto d = compute_persistence(k);
    CHECK(flatten(d) == oracle::persistence(cells_of(k), std::max(q, 1)));
  }
}

TEST_CASE("diagram intervals agree with Betti numbers") {
  auto rng = rng_for_test(91);
  for (int trial = 0; trial < 25; ++trial) {
    const auto pts = oracle::random_cloud(rng, 6 + trial % 6, 2 + trial % 2);
    const int q = 2 + trial % 2;
    const auto k = rips(pts, q, 0.9);
    const auto cells = cells_of(k);
    const auto d = compute_persistence(k);
    for (Filtration eps : k.filtration_values())
      for (int dim = 0; dim < q; ++dim) {
        std::size_t alive = 0;
        for (const auto& i : d[static_cast<std::size_t>(dim)]) alive += i.birth <= eps && eps < i.death;
        CHECK(alive == oracle::betti(cells, dim, eps));
      }
  }
}

TEST_CASE("D0 has one infinite bar per component") {
  const std::vector<Point> pts{{0, 0}, {0.1, 0}, {5, 5}, {5.1, 5}, {9, 0}};
  const auto d = compute_persistence(rips(pts, 2, 1.0));
  CHECK(std::count_if(d[0].begin(), d[0].end(), [](const auto& i) { return i.infinite(); }) == 3);
}

TEST_CASE("small perturbations move endpoints by at most twice the shift") {
  auto rng = rng_for_test(5);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = oracle::random_cloud(rng, 10, 2);
    auto moved = pts;
    const double delta = 1e-4;
    for (auto& p : moved)
      for (auto& x : p) x += delta * jitter(rng) / std::sqrt(2.0);
    const auto a = compute_persistence(rips(pts, 2, 2.0));
    const auto b = compute_persistence(rips(moved, 2, 2.0));
    // D^0 deaths are the minimum spanning tree lengths, matched in order.
    std::vector<double> da, db;
    for (const auto& i : a[0]) da.push_back(i.death);
    for (const auto& i : b[0]) db.push_back(i.death);
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    REQUIRE(da.size() == db.size());
    for (std::size_t i = 0; i + 1 < da.size(); ++i) CHECK(std::abs(da[i] - db[i]) <= 2 * delta + 1e-12);
  }
}

TEST_CASE("diagram csv round trip") {
  DiagramSet d;
  d.diagrams = {{{0, 0, 0.25}, {0, 0, kInfinity}}, {{1, 0.5, 0.75}}};
  const auto text = diagram_csv(d);
  CHECK(text == "dim,birth,death\n0,0,0.25\n0,0,inf\n1,0.5,0.75\n");
  CHECK(parse_diagram_csv(text).diagrams == d.diagrams);
  CHECK_THROWS_AS(parse_diagram_csv("dim,birth,death\n0,x,1\n"), InputError);
}
