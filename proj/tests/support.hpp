#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "rsinr/formation.hpp"
#include "rsinr/scene.hpp"

namespace rsinr::test {

inline SceneModel constant_scene(double value, int h = 8, int w = 8, TimeDomain d = {0.0, 2.0}, int ch = 1) {
  return make_scene({{h, w, ch}, d, ConstantParams{value}});
}

inline SceneModel sinusoid_scene(double velocity, int h = 8, int w = 16, double wavelength = 8.0,
                                 TimeDomain d = {0.0, 2.0}, double base = 0.5, double amplitude = 0.4) {
  return make_scene({{h, w, 1}, d, SinusoidParams{base, amplitude, velocity, wavelength}});
}

inline SceneModel box_scene(double velocity, int h = 16, int w = 32, double softness = 0.0,
                            TimeDomain d = {0.0, 2.0}) {
  BoxParams p;
  p.base = 0.2;
  p.foreground = 0.8;
  p.x0 = 4.0;
  p.y0 = 0.0;
  p.box_width = 8.0;
  p.box_height = h;
  p.velocity = velocity;
  p.edge_softness = softness;
  return make_scene({{h, w, 1}, d, p});
}

inline SceneModel bar_scene(double angular_velocity, int h = 16, int w = 16, double softness = 1.0,
                            TimeDomain d = {0.0, 2.0}) {
  BarParams p;
  p.base = 0.1;
  p.foreground = 0.9;
  p.cx = (w - 1) / 2.0;
  p.cy = (h - 1) / 2.0;
  p.half_width = 2.0;
  p.angle0 = 0.3;
  p.angular_velocity = angular_velocity;
  p.edge_softness = softness;
  return make_scene({{h, w, 1}, d, p});
}

inline double max_abs_diff(const Frame& a, const Frame& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline Frame uniform_frame(Geometry g, double v) {
  Frame f(g, ExposureSpec::global(0.0));
  std::fill(f.data.begin(), f.data.end(), v);
  return f;
}

inline Frame random_frame(Geometry g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Frame f(g, ExposureSpec::global(0.0));
  for (double& v : f.data) v = u(rng);
  return f;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rsinr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace rsinr::test

#include "rsinr/train.hpp"

namespace rsinr::test {

/// Translating-box synthesis config over [0, 1.25] with the default rolling
/// exposure (0, 1, 0.25).
inline SynthesisConfig box_synthesis(int size, double velocity = 8.0) {
  SynthesisConfig s;
  BoxParams b;
  b.base = 0.2;
  b.foreground = 0.8;
  b.x0 = size * 0.2;
  b.y0 = 0.0;
  b.box_width = size * 0.3;
  b.box_height = size;
  b.velocity = velocity;
  s.scene = {{size, size, 1}, {0.0, 1.25}, b};
  return s;
}

inline ModelConfig tiny_model(Fusion fusion = Fusion::add, Embedding embedding = Embedding::learned) {
  ModelConfig c;
  c.features = 8;
  c.hidden = 16;
  c.blocks = 1;
  c.fusion = fusion;
  c.embedding = embedding;
  return c;
}

}  // namespace rsinr::test
