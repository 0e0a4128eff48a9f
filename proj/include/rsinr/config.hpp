#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "rsinr/train.hpp"

namespace rsinr {

/// Parsed run configuration. Files are INI-style key = value documents:
///
///   seed = 7
///   [scene]     kind, height, width, channels, t_min, t_max + kind parameters
///   [exposure]  t_s, t_e, t_exp
///   [events]    threshold, dt, bins
///   [synth]     blur_samples, gt_frames
///   [model]     features, hidden, blocks, fusion, embed
///   [loss]      lambda_b, lambda_re, epsilon, rs_samples
///   [train]     iterations, eval_period, lr, beta1, beta2, delta
///
/// Every section is optional; unknown keys are rejected. The model's bin
/// count and image channels follow [events] and [scene]; the loss's
/// gt_frames follows [synth].
struct RunConfig {
  std::uint64_t seed = 0;
  bool has_scene = false;
  SynthesisConfig synthesis;
  ModelConfig model;
  LossConfig loss;
  Schedule schedule;
};

/// Relative sampled-stack frame paths resolve against `base_dir`.
RunConfig parse_config(std::istream& is, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical JSON text (stable key order, round-trip number precision) of a
/// scene description; its SHA-256 is the scene config hash.
std::string canonical_scene_json(const SceneDescription& scene);
std::string scene_config_hash(const SceneDescription& scene);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rsinr
