#include "rsinr/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binary_io.hpp"
#include "rsinr/error.hpp"

namespace rsinr {

void write_rsf(std::ostream& os, const Frame& frame) {
  const Geometry& g = frame.geometry;
  os.write("RSF1", 4);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.height));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.width));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.channels));
  for (double v : frame.data) detail::put<float>(os, static_cast<float>(v));
  if (!os) throw IoError("failed writing RSF1 frame");
}

void write_rsf(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_rsf(os, frame);
}

Frame read_rsf(std::istream& is) {
  detail::expect_magic(is, "RSF1", 4, "RSF1 frame");
  Geometry g;
  g.height = static_cast<int>(detail::get<std::uint32_t>(is, "RSF1 header"));
  g.width = static_cast<int>(detail::get<std::uint32_t>(is, "RSF1 header"));
  g.channels = static_cast<int>(detail::get<std::uint32_t>(is, "RSF1 header"));
  if (g.height < 1 || g.width < 1 || (g.channels != 1 && g.channels != 3))
    throw IoError("RSF1 frame has invalid geometry");
  Frame frame(g, ExposureSpec::global(0.0));
  for (double& v : frame.data) v = detail::get<float>(is, "RSF1 payload");
  return frame;
}

Frame read_rsf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_rsf(is);
}

void write_preview(const std::filesystem::path& path, const Frame& frame) {
  const Geometry& g = frame.geometry;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << (g.channels == 1 ? "P5" : "P6") << "\n" << g.width << " " << g.height << "\n255\n";
  for (double v : frame.data) {
    const auto byte = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    os.put(static_cast<char>(byte));
  }
  if (!os) throw IoError("failed writing preview " + path.string());
}

}  // namespace rsinr
