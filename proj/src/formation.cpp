#include "rsinr/formation.hpp"

#include <cmath>
#include <sstream>

#include "rsinr/error.hpp"
#include "rsinr/parallel.hpp"

namespace rsinr {

namespace {

void require_geometry(int height, int width) {
  if (height < 1 || width < 1) throw ValidationError("timestamp map geometry must be at least 1x1");
}

void require_interval(double t_s, double t_e) {
  if (!(t_e > t_s)) {
    std::ostringstream os;
    os << "rolling exposure needs t_e > t_s (got t_s = " << t_s << ", t_e = " << t_e << ")";
    throw DomainError(os.str());
  }
}

void require_window(const IntensityField& field, double lo, double hi) {
  const TimeDomain td = field.time_domain();
  if (!(lo >= td.t_min && hi <= td.t_max)) {
    std::ostringstream os;
    os << "exposure window [" << lo << ", " << hi << "] outside scene time domain [" << td.t_min << ", "
       << td.t_max << "]";
    throw DomainError(os.str());
  }
}

void require_samples(int samples) {
  if (samples < 1) throw ValidationError("blur sample count must be >= 1");
}

void require_exposure(double t_exp) {
  if (!(t_exp >= 0.0) || !std::isfinite(t_exp)) throw DomainError("t_exp must be finite and >= 0");
}

/// Fills row h of `out` with the average of `samples` point samples taken at
/// t0 + (i + 0.5) * t_exp / samples (or the single instant t0 if t_exp == 0).
/// A running mean keeps constant inputs exact.
void render_row(const IntensityField& field, int h, double t0, double t_exp, int samples, Frame& out) {
  const Geometry g = out.geometry;
  std::vector<double> value(g.channels);
  double* row = out.data.data() + static_cast<std::size_t>(h) * g.width * g.channels;
  if (t_exp == 0.0) {
    for (int w = 0; w < g.width; ++w) {
      field.sample_unchecked(w, h, t0, value);
      for (int c = 0; c < g.channels; ++c) row[w * g.channels + c] = value[c];
    }
    return;
  }
  std::vector<double> acc(static_cast<std::size_t>(g.width) * g.channels, 0.0);
  const double step = t_exp / samples;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (i + 0.5) * step;
    for (int w = 0; w < g.width; ++w) {
      field.sample_unchecked(w, h, t, value);
      for (int c = 0; c < g.channels; ++c) {
        double& m = acc[w * g.channels + c];
        m += (value[c] - m) / (i + 1);
      }
    }
  }
  std::copy(acc.begin(), acc.end(), row);
}

}  // namespace

ExposureSpec ExposureSpec::global(double t, double t_exp) {
  if (!std::isfinite(t)) throw DomainError("exposure time must be finite");
  if (!(t_exp >= 0.0) || !std::isfinite(t_exp)) throw DomainError("t_exp must be finite and >= 0");
  return {ShutterPattern::global, t, t, t_exp};
}

ExposureSpec ExposureSpec::rolling(double t_s, double t_e, double t_exp) {
  if (!std::isfinite(t_s) || !std::isfinite(t_e) || !(t_e > t_s)) {
    std::ostringstream os;
    os << "rolling exposure needs t_e > t_s (got t_s = " << t_s << ", t_e = " << t_e << ")";
    throw DomainError(os.str());
  }
  if (!(t_exp >= 0.0) || !std::isfinite(t_exp)) throw DomainError("t_exp must be finite and >= 0");
  return {ShutterPattern::rolling, t_s, t_e, t_exp};
}

double row_start_time(double t_s, double t_e, int h, int height) { return t_s + (t_e - t_s) * h / height; }

TimestampMap gs_timestamp_map(double t_g, int height, int width) {
  require_geometry(height, width);
  return {height, width, std::vector<double>(static_cast<std::size_t>(height) * width, t_g)};
}

TimestampMap rs_timestamp_map(double t_s, double t_e, int height, int width) {
  require_geometry(height, width);
  require_interval(t_s, t_e);
  TimestampMap map{height, width, std::vector<double>(static_cast<std::size_t>(height) * width)};
  for (int h = 0; h < height; ++h) {
    const double t = row_start_time(t_s, t_e, h, height);
    std::fill_n(map.values.begin() + static_cast<std::ptrdiff_t>(h) * width, width, t);
  }
  return map;
}

TimestampMap timestamp_map(const ExposureSpec& spec, int height, int width) {
  return spec.pattern == ShutterPattern::global ? gs_timestamp_map(spec.t_start, height, width)
                                                : rs_timestamp_map(spec.t_start, spec.t_end, height, width);
}

Frame render_gs_sharp(const IntensityField& field, double t) { return render_gs_blur(field, t, 0.0, 1); }

Frame render_gs_blur(const IntensityField& field, double t, double t_exp, int samples) {
  require_samples(samples);
  require_exposure(t_exp);
  require_window(field, t, t + t_exp);
  Frame out(field.geometry(), ExposureSpec::global(t, t_exp));
  parallel_for(static_cast<std::size_t>(out.geometry.height),
               [&](std::size_t h) { render_row(field, static_cast<int>(h), t, t_exp, samples, out); });
  return out;
}

Frame render_rs_sharp(const IntensityField& field, double t_s, double t_e) {
  return render_rs_blur(field, t_s, t_e, 0.0, 1);
}

Frame render_rs_blur(const IntensityField& field, double t_s, double t_e, double t_exp, int samples) {
  require_samples(samples);
  require_exposure(t_exp);
  require_interval(t_s, t_e);
  require_window(field, t_s, t_e + t_exp);
  Frame out(field.geometry(), ExposureSpec::rolling(t_s, t_e, t_exp));
  const int height = out.geometry.height;
  parallel_for(static_cast<std::size_t>(height), [&](std::size_t h) {
    const int row = static_cast<int>(h);
    render_row(field, row, row_start_time(t_s, t_e, row, height), t_exp, samples, out);
  });
  return out;
}

Frame assemble_rs_from_gs_stack(std::span<const StampedFrame> stack, double t_s, double t_e) {
  if (stack.empty()) throw ValidationError("cannot assemble an RS frame from an empty stack");
  require_interval(t_s, t_e);
  const Geometry g = stack.front().frame.geometry;
  for (const auto& s : stack) {
    if (!(s.frame.geometry == g)) throw ValidationError("stack frames have mismatched geometry");
  }
  Frame out(g, ExposureSpec::rolling(t_s, t_e, 0.0));
  const std::size_t row_len = static_cast<std::size_t>(g.width) * g.channels;
  for (int h = 0; h < g.height; ++h) {
    const double target = row_start_time(t_s, t_e, h, g.height);
    std::size_t best = 0;
    double best_dist = std::abs(stack[0].t - target);
    for (std::size_t i = 1; i < stack.size(); ++i) {
      const double d = std::abs(stack[i].t - target);
      if (d < best_dist || (d == best_dist && stack[i].t < stack[best].t)) {
        best = i;
        best_dist = d;
      }
    }
    const auto src = stack[best].frame.data.begin() + static_cast<std::ptrdiff_t>(h * row_len);
    std::copy(src, src + static_cast<std::ptrdiff_t>(row_len), out.data.begin() + static_cast<std::ptrdiff_t>(h * row_len));
  }
  return out;
}

Frame average_frames(std::span<const Frame> frames) {
  if (frames.empty()) throw ValidationError("cannot average an empty frame list");
  const Geometry g = frames.front().geometry;
  for (const auto& f : frames) {
    if (!(f.geometry == g)) throw ValidationError("average_frames: mismatched geometry");
  }
  Frame out(g, frames.front().exposure);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += (frames[i].data[k] - out.data[k]) / n;
  }
  return out;
}

}  // namespace rsinr
