#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rsinr/formation.hpp"
#include "support.hpp"

namespace rsinr::test {

/// Pixel-wise sum of two fields, for the linearity property.
class SumField final : public IntensityField {
 public:
  SumField(const IntensityField& a, const IntensityField& b) : a_(a), b_(b) {
    if (!(a.geometry() == b.geometry())) throw std::invalid_argument("SumField: geometries differ");
  }
  Geometry geometry() const override { return a_.geometry(); }
  TimeDomain time_domain() const override { return a_.time_domain(); }
  void sample_unchecked(double x, double y, double t, std::span<double> out) const override {
    double u = 0.0, v = 0.0;
    a_.sample_unchecked(x, y, t, {&u, 1});
    b_.sample_unchecked(x, y, t, {&v, 1});
    out[0] = u + v;
  }

 private:
  const IntensityField& a_;
  const IntensityField& b_;
};

/// Exact time average of b + a*sin(k(x - v s)) over s in [t, t + T].
inline double sinusoid_average(double x, double t, double T, double v, double lambda, double b, double a) {
  const double k = 2.0 * std::numbers::pi / lambda;
  return b + a * (std::cos(k * (x - v * (t + T))) - std::cos(k * (x - v * t))) / (k * v * T);
}

inline double max_blur_error(int samples) {
  const double v = 8.0, lambda = 8.0, T = 0.25, t = 0.1;
  const SceneModel s = sinusoid_scene(v, 4, 16, lambda);
  const Frame f = render_gs_blur(s, t, T, samples);
  double worst = 0.0;
  for (int h = 0; h < 4; ++h) {
    for (int w = 0; w < 16; ++w) {
      worst = std::max(worst, std::abs(f.at(h, w) - sinusoid_average(w, t, T, v, lambda, 0.5, 0.4)));
    }
  }
  return worst;
}

}  // namespace rsinr::test
