#pragma once

#include "rsinr/formation.hpp"

namespace rsinr {

inline constexpr double kPsnrCap = 99.0;

/// 10 * log10(1 / MSE) with peak 1.0, capped at 99 dB (identical frames).
double psnr(const Frame& a, const Frame& b);

/// Mean SSIM over all valid 11x11 window positions (Gaussian weights,
/// sigma 1.5, K1 = 0.01, K2 = 0.03, peak 1.0); colour frames average the
/// per-channel scores. Frames must be at least 11x11.
double ssim(const Frame& a, const Frame& b);

}  // namespace rsinr
