#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "tdabc/complex.hpp"
#include "tdabc/dataset.hpp"
#include "tdabc/report.hpp"

using namespace tdabc;

TEST_CASE("circles without noise lie on the two circles") {
  const auto d = gen_circles(50, 0, 7);
  REQUIRE(d.size() == 50);
  CHECK(d.class_counts() == std::vector<int>{25, 25});
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = std::hypot(d.points[i][0], d.points[i][1]);
    CHECK(r == doctest::Approx(d.labels[i] == 0 ? 1.0 : 0.5).epsilon(1e-12));
  }
}

TEST_CASE("circles with Table 1 noise keep the class split") {
  const auto d = gen_circles(50, 3, 1);
  CHECK(d.dims() == 2);
  CHECK(d.class_counts() == std::vector<int>{25, 25});
  CHECK_THROWS_AS(gen_circles(1, 0, 0), InputError);
}

TEST_CASE("four-point circles follow equal angular spacing") {
  const auto d = gen_circles(4, 0, 0);
  // Two outer points at angles 0 and pi: distance 2; inner likewise: 1.
  CHECK(euclidean_distance(d.points[0], d.points[1]) == doctest::Approx(2.0));
  CHECK(euclidean_distance(d.points[2], d.points[3]) == doctest::Approx(1.0));
  CHECK(d.labels == std::vector<LabelId>{0, 0, 1, 1});
}

TEST_CASE("moons") {
  const auto d = gen_moons(200, 10, 3);
  CHECK(d.size() == 200);
  CHECK(d.class_counts() == std::vector<int>{100, 100});

  const auto two = gen_moons(2, 0, 0);
  CHECK(two.points[0][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(two.points[0][1] == doctest::Approx(1.0));
  CHECK(two.points[1][0] == doctest::Approx(1.0));
  CHECK(two.points[1][1] == doctest::Approx(-0.5));

  const auto clean = gen_moons(200, 0, 0);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const auto& p = clean.points[i];
    if (clean.labels[i] == 0) {
      CHECK(p[1] >= 0.0);
      CHECK(std::hypot(p[0], p[1]) == doctest::Approx(1.0));
    } else {
      CHECK(std::hypot(p[0] - 1.0, p[1] - 0.5) == doctest::Approx(1.0));
      CHECK(p[1] <= 0.5);
    }
  }
}

TEST_CASE("swiss roll bands") {
  const auto d = gen_swissroll(300, 6, 10, 2);
  CHECK(d.dims() == 3);
  CHECK(d.class_counts() == std::vector<int>(6, 50));
  CHECK_THROWS_AS(gen_swissroll(301, 6, 0, 0), InputError);

  const auto clean = gen_swissroll(300, 6, 0, 2);
  double prev_band_max = 0.0;
  for (int c = 0; c < 6; ++c) {
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < clean.size(); ++i) {
      if (clean.labels[i] != c) continue;
      const auto& p = clean.points[i];
      const double t = std::hypot(p[0], p[2]);
      CHECK(p[0] == doctest::Approx(t * std::cos(t)));
      CHECK(p[2] == doctest::Approx(t * std::sin(t)));
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    CHECK(lo >= prev_band_max);  // contiguous, non-overlapping bands
    prev_band_max = hi;
  }

  const auto six = gen_swissroll(6, 6, 0, 5);
  for (std::size_t i = 1; i < six.size(); ++i)
    CHECK(std::hypot(six.points[i][0], six.points[i][2]) > std::hypot(six.points[i - 1][0], six.points[i - 1][2]));
}

TEST_CASE("normal mixture") {
  NormalMixtureSpec spec;
  spec.dims = 350;
  spec.sizes = {60, 10, 50, 100, 80};
  spec.means = {0, 0.3, 0.18, 0.67, 0};
  spec.stdevs = {0.486};
  const auto d = gen_normal_mixture(spec, 4);
  CHECK(d.size() == 300);
  CHECK(d.dims() == 350);
  CHECK(d.class_counts() == spec.sizes);

  NormalMixtureSpec one{1, {1}, {0}, {1}};
  CHECK(gen_normal_mixture(one, 0).size() == 1);

  NormalMixtureSpec big{1, {100000}, {0.67}, {0.486}};
  const auto b = gen_normal_mixture(big, 9);
  double mean = 0.0;
  for (const auto& p : b.points) mean += p[0];
  mean /= 100000.0;
  CHECK(std::abs(mean - 0.67) <= 3.0 * 0.486 / std::sqrt(100000.0));

  CHECK_THROWS_AS(gen_normal_mixture(NormalMixtureSpec{}, 0), InputError);
  NormalMixtureSpec bad{2, {3, 4}, {0}, {1}};
  CHECK_THROWS_AS(gen_normal_mixture(bad, 0), InputError);
}

TEST_CASE("sphere") {
  NormalMixtureSpec spec;
  spec.sizes = {500, 100, 25, 16, 12};
  spec.stdevs = {0.147};
  const auto d = gen_sphere(spec, 1);
  CHECK(d.size() == 653);
  CHECK(d.class_counts() == spec.sizes);
  CHECK(d.dims() == 3);

  NormalMixtureSpec single;
  single.sizes = {1};
  single.stdevs = {1e-300};
  const auto s = gen_sphere(single, 3);
  const Point c = fibonacci_sphere_point(0, 1);
  for (int k = 0; k < 3; ++k) CHECK(s.points[0][k] == doctest::Approx(c[k] * 0.3));

  // Centers are the scaled Fibonacci points: spacing follows the radius.
  for (std::size_t i = 0; i < 5; ++i) {
    const Point p = fibonacci_sphere_point(i, 5);
    CHECK(std::hypot(p[0], p[1], p[2]) == doctest::Approx(1.0));
  }
  NormalMixtureSpec tight;
  tight.sizes = {1, 1, 1};
  tight.stdevs = {1e-300};
  tight.sphere_radius = 2.0;
  const auto t = gen_sphere(tight, 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(euclidean_distance(t.points[i], t.points[j]) ==
            doctest::Approx(2.0 * euclidean_distance(fibonacci_sphere_point(i, 3), fibonacci_sphere_point(j, 3))));
}

TEST_CASE("generators are deterministic per seed") {
  CHECK(gen_moons(50, 10, 11).points == gen_moons(50, 10, 11).points);
  CHECK(gen_moons(50, 10, 11).points != gen_moons(50, 10, 12).points);
  CHECK(generate(default_generator_spec("sphere", 5)).points == generate(default_generator_spec("sphere", 5)).points);
}

TEST_CASE("generate validates parameters by name") {
  GeneratorSpec spec = default_generator_spec("circles", 0);
  spec.raw_params["n_samples"] = "abc";
  try {
    generate(spec);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("n_samples") != std::string::npos);
  }
  spec = default_generator_spec("circles", 0);
  spec.raw_params["bogus"] = "1";
  CHECK_THROWS_AS(generate(spec), InputError);
  CHECK_THROWS_AS(default_generator_spec("nope", 0), InputError);
  CHECK(generate(default_generator_spec("circles", 0)).size() == 50);
  CHECK(generate(default_generator_spec("sphere", 0)).size() == 653);
  CHECK(generate(default_generator_spec("swissroll", 0)).size() == 300);
  CHECK(generate(default_generator_spec("normdist", 0)).size() == 300);
}

TEST_CASE("csv parsing") {
  const auto one = parse_csv("1.0,2.0,A\n");
  CHECK(one.size() == 1);
  CHECK(one.num_classes() == 1);
  CHECK(one.points[0] == Point{1.0, 2.0});

  const auto named = parse_csv("a;lab;b\n1;x;2\n3;y;4\n5;x;6\n", {';', ColumnRef{std::string("lab")}, {}});
  CHECK(named.labels == std::vector<LabelId>{0, 1, 0});
  CHECK(named.label_names == std::vector<std::string>{"x", "y"});
  CHECK(named.points[1] == Point{3, 4});

  CHECK_THROWS_AS(parse_csv(""), InputError);
  try {
    parse_csv("x,y,l\n1,2,a\n1,2\n");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  try {
    parse_csv("x,y,l\n1,2,a\n1,oops,b\n");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
}

TEST_CASE("bundled real datasets") {
  const std::filesystem::path root = TDABC_SOURCE_DIR;
  const auto iris = load_csv(root / "data/iris.csv");
  CHECK(iris.size() == 150);
  CHECK(iris.dims() == 4);
  CHECK(iris.class_counts() == std::vector<int>{50, 50, 50});
  const auto wine = load_csv(root / "data/wine.csv");
  CHECK(wine.size() == 178);
  CHECK(wine.dims() == 13);
  CHECK(wine.class_counts() == std::vector<int>{59, 71, 48});
}

TEST_CASE("csv round trip") {
  const auto d = gen_swissroll(30, 3, 10, 8);
  const auto back = parse_csv(to_csv(d));
  CHECK(back.points == d.points);
  CHECK(back.labels == d.labels);
  CHECK(back.label_names == d.label_names);
}
