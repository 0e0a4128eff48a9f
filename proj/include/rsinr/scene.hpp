#pragma once

#include <array>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rsinr {

/// Image geometry: rows, columns, channels (1 or 3).
struct Geometry {
  int height = 0;
  int width = 0;
  int channels = 1;

  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
  std::size_t elements() const { return pixels() * channels; }
  bool operator==(const Geometry&) const = default;
};

struct TimeDomain {
  double t_min = 0.0;
  double t_max = 1.0;

  bool contains(double t) const { return t >= t_min && t <= t_max; }
};

/// Anything that can be point-sampled as intensity over (x, y, t).
///
/// The formation and event modules render from this interface so that tests
/// can plug in synthetic fields (sums of scenes, log-ramps) next to the
/// built-in scene kinds.
class IntensityField {
 public:
  virtual ~IntensityField() = default;

  virtual Geometry geometry() const = 0;
  virtual TimeDomain time_domain() const = 0;

  /// Writes one intensity per channel into `out` (size == channels).
  /// x is the column, y the row; pixel centers sit at integer coordinates.
  /// Implementations must not validate bounds; callers do.
  virtual void sample_unchecked(double x, double y, double t, std::span<double> out) const = 0;
};

enum class SceneKind { constant, translating_sinusoid, translating_box, rotating_bar, sampled_stack };

std::string to_string(SceneKind kind);
SceneKind scene_kind_from_string(const std::string& name);

struct ConstantParams {
  double value = 0.5;
};

/// I(x, t) = base + amplitude * sin(2*pi*(x - velocity*t) / wavelength)
struct SinusoidParams {
  double base = 0.5;
  double amplitude = 0.4;
  double velocity = 0.0;    // px/s along +x
  double wavelength = 8.0;  // px
};

/// Axis-aligned box moving along +x. `edge_softness` > 0 replaces the hard
/// edge by a linear ramp of that width (px) centered on the edge.
struct BoxParams {
  double base = 0.2;
  double foreground = 0.8;
  double x0 = 0.0;  // left edge at t = 0
  double y0 = 0.0;  // top edge
  double box_width = 8.0;
  double box_height = 8.0;
  double velocity = 0.0;  // px/s
  double edge_softness = 0.0;
};

/// Infinite bar through (cx, cy) at angle angle0 + angular_velocity * t.
struct BarParams {
  double base = 0.2;
  double foreground = 0.8;
  double cx = 0.0;
  double cy = 0.0;
  double half_width = 2.0;
  double angle0 = 0.0;            // rad
  double angular_velocity = 0.0;  // rad/s
  double edge_softness = 0.0;
};

/// Temporally ordered frames, stored in single precision, channel-interleaved
/// row-major (H*W*Ch values per frame).
struct StackParams {
  std::vector<double> timestamps;
  std::vector<std::vector<float>> frames;
};

using SceneParams = std::variant<ConstantParams, SinusoidParams, BoxParams, BarParams, StackParams>;

struct SceneDescription {
  Geometry geometry;
  TimeDomain time_domain;
  SceneParams params;
};

/// Validated, immutable continuous scene. Analytic kinds evaluate in double
/// precision; the sampled stack interpolates linearly in time.
class SceneModel final : public IntensityField {
 public:
  Geometry geometry() const override { return desc_.geometry; }
  TimeDomain time_domain() const override { return desc_.time_domain; }
  SceneKind kind() const;
  const SceneDescription& description() const { return desc_; }

  void sample_unchecked(double x, double y, double t, std::span<double> out) const override;

 private:
  explicit SceneModel(SceneDescription desc) : desc_(std::move(desc)) {}
  friend SceneModel make_scene(SceneDescription desc);

  SceneDescription desc_;
};

/// Validates a description and builds the scene. Parameters that would take
/// intensity outside [0, 1] are rejected. For a sampled stack the time domain
/// is taken from the first and last timestamps.
SceneModel make_scene(SceneDescription desc);

/// Bounds-checked point sample. Throws DomainError naming the offending
/// coordinate when (x, y) is outside the image or t outside the time domain.
std::vector<double> sample_intensity(const IntensityField& field, double x, double y, double t);

}  // namespace rsinr
