#include "rsinr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rsinr/error.hpp"

namespace rsinr {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << what << " = " << v << " outside [0, 1]";
    throw ValidationError(os.str());
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " is not finite");
}

/// Blend factor for a soft edge at signed distance `inside` from the boundary
/// (positive = inside the shape).
double coverage(double inside, double softness) {
  if (softness <= 0.0) return inside >= 0.0 ? 1.0 : 0.0;
  return std::clamp(inside / softness + 0.5, 0.0, 1.0);
}

void sample_stack(const StackParams& stack, const Geometry& g, double x, double y, double t,
                  std::span<double> out) {
  const int col = std::clamp(static_cast<int>(std::lround(x)), 0, g.width - 1);
  const int row = std::clamp(static_cast<int>(std::lround(y)), 0, g.height - 1);
  const std::size_t offset = (static_cast<std::size_t>(row) * g.width + col) * g.channels;
  const auto& ts = stack.timestamps;

  auto upper = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t hi = static_cast<std::size_t>(upper - ts.begin());
  if (hi == 0) hi = 1;
  if (hi >= ts.size() || ts[hi - 1] == t) {
    const std::size_t idx = std::min(hi, ts.size()) - 1;
    for (int c = 0; c < g.channels; ++c) out[c] = stack.frames[idx][offset + c];
    return;
  }
  const std::size_t lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  for (int c = 0; c < g.channels; ++c) {
    const double a = stack.frames[lo][offset + c];
    const double b = stack.frames[hi][offset + c];
    out[c] = a + w * (b - a);
  }
}

}  // namespace

std::string to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::constant: return "constant";
    case SceneKind::translating_sinusoid: return "translating-sinusoid";
    case SceneKind::translating_box: return "translating-box";
    case SceneKind::rotating_bar: return "rotating-bar";
    case SceneKind::sampled_stack: return "sampled-stack";
  }
  return "unknown";
}

SceneKind scene_kind_from_string(const std::string& name) {
  for (auto k : {SceneKind::constant, SceneKind::translating_sinusoid, SceneKind::translating_box,
                 SceneKind::rotating_bar, SceneKind::sampled_stack}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown scene kind '" + name + "'");
}

SceneKind SceneModel::kind() const { return static_cast<SceneKind>(desc_.params.index()); }

void SceneModel::sample_unchecked(double x, double y, double t, std::span<double> out) const {
  const Geometry& g = desc_.geometry;
  double v = 0.0;
  std::visit(
      Overloaded{
          [&](const ConstantParams& p) { v = p.value; },
          [&](const SinusoidParams& p) {
            v = p.base + p.amplitude * std::sin(2.0 * std::numbers::pi * (x - p.velocity * t) / p.wavelength);
          },
          [&](const BoxParams& p) {
            const double left = p.x0 + p.velocity * t;
            const double dx = std::min(x - left, left + p.box_width - x);
            const double dy = std::min(y - p.y0, p.y0 + p.box_height - y);
            const double k = coverage(dx, p.edge_softness) * coverage(dy, p.edge_softness);
            v = p.base + (p.foreground - p.base) * k;
          },
          [&](const BarParams& p) {
            const double angle = p.angle0 + p.angular_velocity * t;
            const double dist = std::abs(-(x - p.cx) * std::sin(angle) + (y - p.cy) * std::cos(angle));
            v = p.base + (p.foreground - p.base) * coverage(p.half_width - dist, p.edge_softness);
          },
          [&](const StackParams& p) {
            sample_stack(p, g, x, y, t, out);
            v = -1.0;
          },
      },
      desc_.params);
  if (v >= 0.0) std::fill(out.begin(), out.begin() + g.channels, v);
}

SceneModel make_scene(SceneDescription desc) {
  Geometry& g = desc.geometry;
  if (g.height < 1 || g.width < 1) throw ValidationError("scene geometry must be at least 1x1");
  if (g.channels != 1 && g.channels != 3) throw ValidationError("scene channels must be 1 or 3");

  if (auto* stack = std::get_if<StackParams>(&desc.params)) {
    if (stack->frames.empty()) throw ValidationError("sampled-stack scene has no frames");
    if (stack->frames.size() != stack->timestamps.size())
      throw ValidationError("sampled-stack frame and timestamp counts differ");
    for (std::size_t i = 0; i < stack->frames.size(); ++i) {
      require_finite(stack->timestamps[i], "stack timestamp");
      if (i > 0 && !(stack->timestamps[i] > stack->timestamps[i - 1]))
        throw ValidationError("sampled-stack timestamps must be strictly increasing");
      if (stack->frames[i].size() != g.elements())
        throw ValidationError("sampled-stack frame " + std::to_string(i) + " does not match scene geometry");
      for (float f : stack->frames[i]) require_unit(f, "stack intensity");
    }
    desc.time_domain = {stack->timestamps.front(), stack->timestamps.back()};
  } else {
    require_finite(desc.time_domain.t_min, "t_min");
    require_finite(desc.time_domain.t_max, "t_max");
    if (desc.time_domain.t_max < desc.time_domain.t_min) throw ValidationError("time domain has t_max < t_min");
  }

  std::visit(Overloaded{
                 [](const ConstantParams& p) { require_unit(p.value, "value"); },
                 [](const SinusoidParams& p) {
                   require_finite(p.velocity, "velocity");
                   if (!(p.wavelength > 0.0) || !std::isfinite(p.wavelength))
                     throw ValidationError("wavelength must be positive");
                   if (!(p.amplitude >= 0.0)) throw ValidationError("amplitude must be non-negative");
                   require_unit(p.base - p.amplitude, "base - amplitude");
                   require_unit(p.base + p.amplitude, "base + amplitude");
                 },
                 [](const BoxParams& p) {
                   require_unit(p.base, "base");
                   require_unit(p.foreground, "foreground");
                   for (double v : {p.x0, p.y0, p.velocity}) require_finite(v, "box parameter");
                   if (!(p.box_width > 0.0) || !(p.box_height > 0.0))
                     throw ValidationError("box dimensions must be positive");
                   if (!(p.edge_softness >= 0.0)) throw ValidationError("edge_softness must be non-negative");
                 },
                 [](const BarParams& p) {
                   require_unit(p.base, "base");
                   require_unit(p.foreground, "foreground");
                   for (double v : {p.cx, p.cy, p.angle0, p.angular_velocity}) require_finite(v, "bar parameter");
                   if (!(p.half_width > 0.0)) throw ValidationError("bar half_width must be positive");
                   if (!(p.edge_softness >= 0.0)) throw ValidationError("edge_softness must be non-negative");
                 },
                 [](const StackParams&) {},
             },
             desc.params);
  return SceneModel(std::move(desc));
}

std::vector<double> sample_intensity(const IntensityField& field, double x, double y, double t) {
  const Geometry g = field.geometry();
  const TimeDomain td = field.time_domain();
  if (!(x >= 0.0 && x <= g.width - 1)) {
    std::ostringstream os;
    os << "x = " << x << " outside columns [0, " << g.width - 1 << "]";
    throw DomainError(os.str());
  }
  if (!(y >= 0.0 && y <= g.height - 1)) {
    std::ostringstream os;
    os << "y = " << y << " outside rows [0, " << g.height - 1 << "]";
    throw DomainError(os.str());
  }
  if (!td.contains(t)) {
    std::ostringstream os;
    os << "t = " << t << " outside time domain [" << td.t_min << ", " << td.t_max << "]";
    throw DomainError(os.str());
  }
  std::vector<double> out(g.channels);
  field.sample_unchecked(x, y, t, out);
  return out;
}

}  // namespace rsinr
