#include <doctest.h>

#include <random>

#include "rsinr/error.hpp"
#include "rsinr/scene.hpp"
#include "support.hpp"

using namespace rsinr;
using rsinr::test::bar_scene;
using rsinr::test::box_scene;
using rsinr::test::constant_scene;
using rsinr::test::sinusoid_scene;

TEST_SUITE("scene") {

TEST_CASE("constant scene returns its value everywhere") {
  const SceneModel s = constant_scene(0.7, 32, 32, {0.0, 1.0});
  for (double t : {0.0, 0.31, 1.0}) {
    CHECK(sample_intensity(s, 0, 0, t)[0] == 0.7);
    CHECK(sample_intensity(s, 31, 17, t)[0] == 0.7);
  }
}

TEST_CASE("zero-velocity sinusoid is time invariant") {
  const SceneModel s = sinusoid_scene(0.0);
  for (int x = 0; x < 16; ++x) {
    CHECK(sample_intensity(s, x, 3, 1.7)[0] == sample_intensity(s, x, 3, 0.0)[0]);
  }
  CHECK(sample_intensity(s, 2, 0, 0.0)[0] == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("sampled stack interpolates linearly between frames") {
  StackParams p;
  p.timestamps = {0.0, 1.0};
  p.frames = {std::vector<float>(4, 0.2f), std::vector<float>(4, 0.6f)};
  const SceneModel s = make_scene({{2, 2, 1}, {}, p});
  const double a = static_cast<float>(0.2);
  const double b = static_cast<float>(0.6);
  CHECK(sample_intensity(s, 1, 1, 0.5)[0] == doctest::Approx(0.4).epsilon(1e-7));
  CHECK(sample_intensity(s, 1, 1, 0.5)[0] == 0.5 * a + 0.5 * b);
}

TEST_CASE("sampled stack reproduces stored frames at stored timestamps") {
  StackParams p;
  p.timestamps = {0.0, 0.3, 1.1};
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (int i = 0; i < 3; ++i) {
    std::vector<float> f(4 * 5 * 3);
    for (float& v : f) v = u(rng);
    p.frames.push_back(f);
  }
  const SceneModel s = make_scene({{4, 5, 3}, {}, p});
  CHECK(s.time_domain().t_min == 0.0);
  CHECK(s.time_domain().t_max == 1.1);
  for (int i = 0; i < 3; ++i) {
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 5; ++x) {
        const auto v = sample_intensity(s, x, y, p.timestamps[i]);
        for (int c = 0; c < 3; ++c) CHECK(v[c] == static_cast<double>(p.frames[i][(y * 5 + x) * 3 + c]));
      }
    }
  }
}

TEST_CASE("make_scene validation") {
  SUBCASE("valid constant") { CHECK_NOTHROW(constant_scene(0.7, 32, 32, {0.0, 1.0})); }
  SUBCASE("sinusoid leaving [0,1] is rejected") {
    CHECK_THROWS_AS(make_scene({{8, 8, 1}, {}, SinusoidParams{0.5, 0.6, 0.0, 8.0}}), ValidationError);
  }
  SUBCASE("empty stack is rejected") {
    CHECK_THROWS_AS(make_scene({{8, 8, 1}, {}, StackParams{}}), ValidationError);
  }
  SUBCASE("unknown kind") { CHECK_THROWS_AS(scene_kind_from_string("spiral"), ValidationError); }
  SUBCASE("out-of-range constant") { CHECK_THROWS_AS(constant_scene(1.2), ValidationError); }
  SUBCASE("box foreground outside range") {
    BoxParams p;
    p.foreground = -0.1;
    CHECK_THROWS_AS(make_scene({{8, 8, 1}, {}, p}), ValidationError);
  }
  SUBCASE("bad channel count") {
    CHECK_THROWS_AS(make_scene({{8, 8, 2}, {}, ConstantParams{0.5}}), ValidationError);
  }
  SUBCASE("unordered stack timestamps") {
    StackParams p;
    p.timestamps = {1.0, 0.5};
    p.frames = {std::vector<float>(4, 0.1f), std::vector<float>(4, 0.2f)};
    CHECK_THROWS_AS(make_scene({{2, 2, 1}, {}, p}), ValidationError);
  }
}

TEST_CASE("scene kind names round-trip") {
  for (auto k : {SceneKind::constant, SceneKind::translating_sinusoid, SceneKind::translating_box,
                 SceneKind::rotating_bar, SceneKind::sampled_stack}) {
    CHECK(scene_kind_from_string(to_string(k)) == k);
  }
}

TEST_CASE("out-of-domain samples name the coordinate") {
  const SceneModel s = constant_scene(0.5, 4, 6, {0.0, 1.0});
  auto message = [&](double x, double y, double t) {
    try {
      sample_intensity(s, x, y, t);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(6.0, 0, 0).rfind("x =", 0) == 0);
  CHECK(message(-0.5, 0, 0).rfind("x =", 0) == 0);
  CHECK(message(0, 4.0, 0).rfind("y =", 0) == 0);
  CHECK(message(0, 0, 1.5).rfind("t =", 0) == 0);
  CHECK(message(5, 3, 1.0).empty());
}

TEST_CASE("intensity stays in [0, 1] for every kind") {
  StackParams stack;
  stack.timestamps = {0.0, 2.0};
  stack.frames = {std::vector<float>(16 * 16, 0.0f), std::vector<float>(16 * 16, 1.0f)};
  const std::vector<SceneModel> scenes{
      constant_scene(1.0, 16, 16), make_scene({{16, 16, 1}, {0.0, 2.0}, SinusoidParams{0.5, 0.5, 13.0, 5.0}}),
      box_scene(9.0, 16, 16, 2.0), bar_scene(2.5), make_scene({{16, 16, 1}, {}, stack})};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 15.0), ut(0.0, 2.0);
  for (const auto& s : scenes) {
    for (int i = 0; i < 1000; ++i) {
      const double v = sample_intensity(s, ux(rng), ux(rng), ut(rng))[0];
      CHECK((v >= 0.0 && v <= 1.0));
    }
  }
}

TEST_CASE("translating scenes satisfy the shift identity") {
  const double v = 6.0;
  const SceneModel sin_s = sinusoid_scene(v, 8, 32, 7.0);
  const SceneModel box_s = box_scene(v, 16, 32, 1.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(8.0, 31.0), uy(0.0, 7.0), ut(0.5, 2.0), ud(0.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double x = ux(rng), y = uy(rng), t = ut(rng), dt = ud(rng);
    for (const SceneModel* s : {&sin_s, &box_s}) {
      const double a = sample_intensity(*s, x, y, t)[0];
      const double b = sample_intensity(*s, x - v * dt, y, t - dt)[0];
      worst = std::max(worst, std::abs(a - b));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("box and bar return base intensity far from the shape") {
  const SceneModel box = box_scene(0.0, 16, 32);
  CHECK(sample_intensity(box, 30, 5, 0.0)[0] == 0.2);
  CHECK(sample_intensity(box, 6, 5, 0.0)[0] == 0.8);
  const SceneModel bar = bar_scene(0.0, 16, 16, 0.0);
  CHECK(sample_intensity(bar, 7.5, 7.5, 0.0)[0] == 0.9);
}

TEST_CASE("sampling is deterministic") {
  const SceneModel s = bar_scene(1.3);
  for (int i = 0; i < 20; ++i) {
    const double x = 0.37 * i, t = 0.05 * i;
    CHECK(sample_intensity(s, x, 4.2, t) == sample_intensity(s, x, 4.2, t));
  }
}

}
