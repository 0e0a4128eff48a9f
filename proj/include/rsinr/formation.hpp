#pragma once

#include <span>
#include <vector>

#include "rsinr/scene.hpp"

namespace rsinr {

enum class ShutterPattern { global, rolling };

/// Exposure of one frame. For a global shutter `t_end` is stored equal to
/// `t_start`; for a rolling shutter row h starts at
/// t_start + (t_end - t_start) * h / H and every row integrates for t_exp.
struct ExposureSpec {
  ShutterPattern pattern = ShutterPattern::global;
  double t_start = 0.0;
  double t_end = 0.0;
  double t_exp = 0.0;

  static ExposureSpec global(double t, double t_exp = 0.0);
  static ExposureSpec rolling(double t_s, double t_e, double t_exp = 0.0);

  /// Latest instant touched by any row: t_end + t_exp.
  double window_end() const { return t_end + t_exp; }
  bool operator==(const ExposureSpec&) const = default;
};

/// Per-pixel exposure-start timestamps (H x W, row-major).
struct TimestampMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  double at(int h, int w) const { return values[static_cast<std::size_t>(h) * width + w]; }
};

/// H x W x Ch intensities, row-major and channel-interleaved. Values are held
/// in double precision in memory; the RSF1 file format stores float32.
struct Frame {
  Geometry geometry;
  std::vector<double> data;
  ExposureSpec exposure;

  Frame() = default;
  Frame(Geometry g, ExposureSpec e) : geometry(g), data(g.elements(), 0.0), exposure(e) {}

  double& at(int h, int w, int c = 0) {
    return data[(static_cast<std::size_t>(h) * geometry.width + w) * geometry.channels + c];
  }
  double at(int h, int w, int c = 0) const {
    return data[(static_cast<std::size_t>(h) * geometry.width + w) * geometry.channels + c];
  }
};

/// Exposure start of row h: t_s + (t_e - t_s) * h / H. Row H-1 does not
/// reach t_e.
double row_start_time(double t_s, double t_e, int h, int height);

TimestampMap gs_timestamp_map(double t_g, int height, int width);
TimestampMap rs_timestamp_map(double t_s, double t_e, int height, int width);
TimestampMap timestamp_map(const ExposureSpec& spec, int height, int width);

/// Default quadrature samples per exposure window.
inline constexpr int kDefaultBlurSamples = 64;

Frame render_gs_sharp(const IntensityField& field, double t);

/// Midpoint-rule average of `samples` sharp frames over [t, t + t_exp]:
/// sample times t + (i + 0.5) * t_exp / samples.
Frame render_gs_blur(const IntensityField& field, double t, double t_exp, int samples = kDefaultBlurSamples);

Frame render_rs_sharp(const IntensityField& field, double t_s, double t_e);

/// Row h is the midpoint-rule average of row h over [t_s^h, t_s^h + t_exp].
Frame render_rs_blur(const IntensityField& field, double t_s, double t_e, double t_exp,
                     int samples = kDefaultBlurSamples);

struct StampedFrame {
  double t = 0.0;
  Frame frame;
};

/// Builds an RS sharp frame by copying row h from the stack frame whose
/// timestamp is nearest to t_s^h (ties go to the earlier frame).
Frame assemble_rs_from_gs_stack(std::span<const StampedFrame> stack, double t_s, double t_e);

/// Element-wise arithmetic mean, accumulated in double. The result carries the
/// first frame's exposure spec.
Frame average_frames(std::span<const Frame> frames);

}  // namespace rsinr
