#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsinr/events.hpp"

namespace rsinr::test {

struct PixelEvents {
  std::vector<double> times;
  std::vector<int> polarities;
};

/// Brute-force reference-crossing simulation of one pixel on a dense grid of
/// `substeps` per dt. The reference moves by exactly C per event and each
/// event time is linearly interpolated inside its fine step.
inline PixelEvents dense_pixel_oracle(const IntensityField& field, int x, int y, double t0, double t1, double dt,
                                      double C, int substeps = 100) {
  const int ch = field.geometry().channels;
  std::vector<double> buf(ch);
  auto log_i = [&](double t) {
    field.sample_unchecked(x, y, t, buf);
    double s = 0.0;
    for (double v : buf) s += v;
    return std::log(std::max(s / ch, 1e-4));
  };
  const double fine = dt / substeps;
  const long n = std::lround(std::ceil((t1 - t0) / fine - 1e-6));
  PixelEvents out;
  double ref = log_i(t0);
  double ta = t0, la = ref;
  for (long k = 1; k <= n; ++k) {
    const double tb = k == n ? t1 : t0 + k * fine;
    const double lb = log_i(tb);
    for (;;) {
      const double d = lb - ref;
      if (std::abs(d) < C * (1.0 - 1e-9)) break;
      const int p = d > 0 ? 1 : -1;
      ref += p * C;
      const double frac = std::clamp((ref - la) / (lb - la), 0.0, 1.0);
      out.times.push_back(ta + frac * (tb - ta));
      out.polarities.push_back(p);
    }
    ta = tb;
    la = lb;
  }
  return out;
}

inline PixelEvents pixel_events(const EventStream& s, int x, int y) {
  PixelEvents out;
  for (const Event& e : s.events) {
    if (e.x == x && e.y == y) {
      out.times.push_back(e.t);
      out.polarities.push_back(e.p);
    }
  }
  return out;
}

}  // namespace rsinr::test
