#pragma once

#include <span>
#include <vector>

#include "rsinr/formation.hpp"

namespace rsinr {

struct LossConfig {
  double lambda_b = 1.0;
  double lambda_re = 1.0;
  double epsilon = 1e-3;
  int gt_frames = 5;   // GS supervision timestamps per sample
  int rs_samples = 9;  // RS sharp predictions averaged into the reconstructed blur frame
};

void validate(const LossConfig& cfg);

/// Mean over all elements of sqrt((a - b)^2 + eps^2).
double charbonnier(const Frame& a, const Frame& b, double epsilon);

/// d charbonnier(a, b) / d a, element-wise.
std::vector<double> charbonnier_gradient(const Frame& a, const Frame& b, double epsilon);

/// lambda_b * charbonnier(average_frames(pred_rs), input_rs_blur)
///   + lambda_re * mean_k charbonnier(pred_gs[k], gt_gs[k])
double total_loss(std::span<const Frame> pred_gs, std::span<const Frame> gt_gs, std::span<const Frame> pred_rs,
                  const Frame& input_rs_blur, const LossConfig& cfg);

struct LossTerms {
  double blur = 0.0;
  double reconstruction = 0.0;
  double total = 0.0;
};

/// Same value as total_loss, with the two weighted terms reported separately.
LossTerms loss_terms(std::span<const Frame> pred_gs, std::span<const Frame> gt_gs, std::span<const Frame> pred_rs,
                     const Frame& input_rs_blur, const LossConfig& cfg);

/// RS sharp queries whose average reconstructs the input blur frame: the
/// whole RS window shifted by (i + 0.5) * t_exp / count, i = 0..count-1.
std::vector<ExposureSpec> blur_reconstruction_queries(const ExposureSpec& input, int count);

/// GS supervision timestamps: `count` points uniformly covering
/// [t_s, t_e + t_exp], both endpoints included for count >= 2, the midpoint
/// for count == 1.
std::vector<double> uniform_timestamps(double t_lo, double t_hi, int count);

}  // namespace rsinr
