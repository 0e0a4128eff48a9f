#include "rsinr/events.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "binary_io.hpp"
#include "rsinr/error.hpp"
#include "rsinr/parallel.hpp"

namespace rsinr {

namespace {

// Relative slack on the threshold test so that a crossing landing exactly on
// a step boundary is not lost to rounding in the accumulated reference.
constexpr double kThresholdSlack = 1e-9;

double log_intensity(const IntensityField& field, int x, int y, double t, std::vector<double>& scratch) {
  field.sample_unchecked(x, y, t, scratch);
  double sum = 0.0;
  for (double v : scratch) sum += v;
  return std::log(std::max(sum / static_cast<double>(scratch.size()), kLogIntensityFloor));
}

}  // namespace

EventStream simulate_events(const IntensityField& field, double t0, double t1, double dt, double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) throw ValidationError("contrast threshold must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("event sampling step must be positive");
  if (!(t1 >= t0)) throw DomainError("event window has t1 < t0");
  const TimeDomain td = field.time_domain();
  if (!(t0 >= td.t_min && t1 <= td.t_max)) {
    std::ostringstream os;
    os << "event window [" << t0 << ", " << t1 << "] outside scene time domain [" << td.t_min << ", " << td.t_max
       << "]";
    throw DomainError(os.str());
  }
  const Geometry g = field.geometry();
  if (g.width > std::numeric_limits<std::uint16_t>::max() + 1 || g.height > std::numeric_limits<std::uint16_t>::max() + 1)
    throw ValidationError("geometry too large for 16-bit event coordinates");

  const auto steps = static_cast<std::size_t>(std::max(0.0, std::ceil((t1 - t0) / dt - 1e-9)));
  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) times[k] = t0 + static_cast<double>(k) * dt;
  times[steps] = t1;

  const double slack = threshold * kThresholdSlack;
  std::vector<std::vector<Event>> per_pixel(g.pixels());
  parallel_for(g.pixels(), [&](std::size_t pixel) {
    const int x = static_cast<int>(pixel % g.width);
    const int y = static_cast<int>(pixel / g.width);
    std::vector<double> scratch(g.channels);
    auto& out = per_pixel[pixel];
    double prev = log_intensity(field, x, y, times[0], scratch);
    double ref = prev;
    for (std::size_t k = 1; k <= steps; ++k) {
      const double cur = log_intensity(field, x, y, times[k], scratch);
      const double delta = cur - ref;
      if (std::abs(delta) >= threshold - slack) {
        const double sign = delta > 0.0 ? 1.0 : -1.0;
        while (sign * (cur - ref) >= threshold - slack) {
          ref += sign * threshold;
          double frac = cur == prev ? 1.0 : (ref - prev) / (cur - prev);
          frac = std::clamp(frac, 0.0, 1.0);
          const double t = times[k - 1] + frac * (times[k] - times[k - 1]);
          out.push_back({static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), t,
                         static_cast<std::int8_t>(sign > 0 ? 1 : -1)});
        }
      }
      prev = cur;
    }
  });

  EventStream stream{g.height, g.width, t0, t1, threshold, {}};
  std::size_t total = 0;
  for (const auto& v : per_pixel) total += v.size();
  stream.events.reserve(total);
  for (const auto& v : per_pixel) stream.events.insert(stream.events.end(), v.begin(), v.end());
  std::stable_sort(stream.events.begin(), stream.events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.y != b.y) return a.y < b.y;
    if (a.x != b.x) return a.x < b.x;
    return a.p < b.p;
  });
  return stream;
}

CountImageStack voxelize(const EventStream& stream, int bins) {
  if (bins < 1) throw ValidationError("temporal bin count must be >= 1");
  if (!(stream.t1 > stream.t0)) throw DomainError("cannot voxelize an empty time window (t1 <= t0)");
  CountImageStack stack{stream.height, stream.width, bins, stream.t0, stream.t1, {}};
  stack.counts.assign(static_cast<std::size_t>(stream.height) * stream.width * bins, 0);
  const double span = stream.t1 - stream.t0;
  for (const Event& e : stream.events) {
    if (e.t < stream.t0 || e.t > stream.t1 || e.x >= stream.width || e.y >= stream.height) continue;
    const int bin = std::min(static_cast<int>(std::floor((e.t - stream.t0) / span * bins)), bins - 1);
    stack.counts[(static_cast<std::size_t>(e.y) * stream.width + e.x) * bins + bin] += e.p;
  }
  return stack;
}

std::vector<StreamViolation> validate_stream(const EventStream& stream) {
  std::vector<StreamViolation> out;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const Event& e = stream.events[i];
    if (i > 0 && e.t < stream.events[i - 1].t) {
      out.push_back({StreamViolation::Kind::ordering, i, "timestamp decreases"});
    }
    if (e.x >= stream.width || e.y >= stream.height) {
      std::ostringstream os;
      os << "(" << e.x << ", " << e.y << ") outside " << stream.width << "x" << stream.height;
      out.push_back({StreamViolation::Kind::bounds, i, os.str()});
    }
    if (e.p != 1 && e.p != -1) {
      out.push_back({StreamViolation::Kind::polarity, i, "polarity " + std::to_string(e.p) + " not in {-1, +1}"});
    }
    if (e.t < stream.t0 || e.t > stream.t1) {
      out.push_back({StreamViolation::Kind::window, i, "timestamp outside stream window"});
    }
  }
  return out;
}

void write_evt(std::ostream& os, const EventStream& stream) {
  os.write("EVT1", 4);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(stream.height));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(stream.width));
  detail::put<std::uint64_t>(os, static_cast<std::uint64_t>(stream.events.size()));
  for (const Event& e : stream.events) {
    detail::put<std::uint16_t>(os, e.x);
    detail::put<std::uint16_t>(os, e.y);
    detail::put<double>(os, e.t);
    detail::put<std::int8_t>(os, e.p);
  }
  if (!os) throw IoError("failed writing EVT1 stream");
}

void write_evt(const std::filesystem::path& path, const EventStream& stream) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_evt(os, stream);
}

EventStream read_evt(std::istream& is) {
  detail::expect_magic(is, "EVT1", 4, "EVT1 stream");
  EventStream s;
  s.height = static_cast<int>(detail::get<std::uint32_t>(is, "EVT1 header"));
  s.width = static_cast<int>(detail::get<std::uint32_t>(is, "EVT1 header"));
  const auto count = detail::get<std::uint64_t>(is, "EVT1 header");
  s.events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  for (std::uint64_t i = 0; i < count; ++i) {
    Event e;
    e.x = detail::get<std::uint16_t>(is, "EVT1 event");
    e.y = detail::get<std::uint16_t>(is, "EVT1 event");
    e.t = detail::get<double>(is, "EVT1 event");
    e.p = detail::get<std::int8_t>(is, "EVT1 event");
    s.events.push_back(e);
  }
  return s;
}

EventStream read_evt(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_evt(is);
}

void write_events_csv(std::ostream& os, const EventStream& stream) {
  os << "x,y,t,p\n";
  os << std::setprecision(17);
  for (const Event& e : stream.events) os << e.x << ',' << e.y << ',' << e.t << ',' << int{e.p} << '\n';
}

std::vector<Event> read_events_csv(std::istream& is) {
  std::vector<Event> out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,t,p", 0) != 0) throw IoError("event CSV is missing its header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    unsigned x = 0, y = 0;
    double t = 0.0;
    int p = 0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> x >> c1 >> y >> c2 >> t >> c3 >> p) || c1 != ',' || c2 != ',' || c3 != ',')
      throw IoError("malformed event CSV line: " + line);
    out.push_back({static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), t, static_cast<std::int8_t>(p)});
  }
  return out;
}

}  // namespace rsinr
