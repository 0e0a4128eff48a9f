#pragma once

#include <filesystem>
#include <iosfwd>

#include "rsinr/formation.hpp"

namespace rsinr {

/// RSF1: "RSF1", then H, W, Ch as u32 LE, then H*W*Ch float32 LE values
/// (row-major, channel-interleaved).
void write_rsf(std::ostream& os, const Frame& frame);
void write_rsf(const std::filesystem::path& path, const Frame& frame);

/// The returned frame carries a default (global, t = 0) exposure spec.
Frame read_rsf(std::istream& is);
Frame read_rsf(const std::filesystem::path& path);

/// 8-bit binary PGM (Ch = 1) or PPM (Ch = 3) preview, values rounded from
/// [0, 1] to 0..255.
void write_preview(const std::filesystem::path& path, const Frame& frame);

}  // namespace rsinr
