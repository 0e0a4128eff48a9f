#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsinr/scene.hpp"

namespace rsinr {

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  double t = 0.0;
  std::int8_t p = 1;

  bool operator==(const Event&) const = default;
};

struct EventStream {
  int height = 0;
  int width = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double threshold = 0.0;
  std::vector<Event> events;
};

/// Intensities are clamped to this floor before taking the log.
inline constexpr double kLogIntensityFloor = 1e-4;
inline constexpr int kDefaultTemporalBins = 8;

/// Ideal DVS: each pixel keeps a reference log-intensity initialised at
/// log I(t0). At every step of size dt (the last one shortened to end at t1),
/// while |log I - ref| >= C an event of that sign is emitted and ref moves by
/// exactly +-C. Event times are linearly interpolated to the crossing instant
/// within the step. Multi-channel fields are reduced to their channel mean.
/// The stream is sorted by (t, y, x, p).
EventStream simulate_events(const IntensityField& field, double t0, double t1, double dt, double threshold);

/// H x W x M signed counts, channel-interleaved (bins innermost).
struct CountImageStack {
  int height = 0;
  int width = 0;
  int bins = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<std::int32_t> counts;

  std::int32_t at(int h, int w, int m) const {
    return counts[(static_cast<std::size_t>(h) * width + w) * bins + m];
  }
};

/// Bin index = min(floor((t - t0) / (t1 - t0) * M), M - 1). Events outside
/// [t0, t1] or outside the image are skipped.
CountImageStack voxelize(const EventStream& stream, int bins);

struct StreamViolation {
  enum class Kind { ordering, bounds, polarity, window };
  Kind kind;
  std::size_t index;
  std::string message;
};

/// Empty result means the stream is valid.
std::vector<StreamViolation> validate_stream(const EventStream& stream);

/// EVT1: "EVT1", H and W as u32 LE, count as u64 LE, then per event
/// x u16, y u16, t f64, p i8 (all LE). Window and threshold are not part of
/// the file; the reader leaves them zero.
void write_evt(std::ostream& os, const EventStream& stream);
void write_evt(const std::filesystem::path& path, const EventStream& stream);
EventStream read_evt(std::istream& is);
EventStream read_evt(const std::filesystem::path& path);

/// CSV with a header line "x,y,t,p"; t printed with round-trip precision.
void write_events_csv(std::ostream& os, const EventStream& stream);
std::vector<Event> read_events_csv(std::istream& is);

}  // namespace rsinr
