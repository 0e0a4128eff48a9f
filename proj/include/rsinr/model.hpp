#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rsinr/events.hpp"
#include "rsinr/formation.hpp"
#include "rsinr/loss.hpp"

namespace rsinr {

/// How the temporal tensor is combined with the spatial-temporal
/// representation before decoding.
enum class Fusion : std::uint8_t { add = 0, multiply = 1, concat = 2 };
enum class Embedding : std::uint8_t { learned = 0, sinusoid = 1 };

std::string to_string(Fusion f);
std::string to_string(Embedding e);
Fusion fusion_from_string(const std::string& name);
Embedding embedding_from_string(const std::string& name);

struct ModelConfig {
  int features = 32;       // C: channels of the representation and temporal tensors
  int hidden = 64;         // D: decoder width
  int blocks = 3;          // K: residual fusion blocks in the encoder
  int bins = kDefaultTemporalBins;  // M: count-image bins
  int image_channels = 1;  // Ch
  Fusion fusion = Fusion::add;
  Embedding embedding = Embedding::learned;
  std::uint64_t seed = 0;

  bool operator==(const ModelConfig&) const = default;
};

void validate(const ModelConfig& config);

/// Number of learnable scalars; depends on everything but the seed.
std::size_t parameter_count(const ModelConfig& config);

/// All learnable weights in one flat vector. Layer order: image lift conv,
/// event head convs (2), residual blocks (2 convs each), time embedding
/// (learned mode only), decoder layers (5). Each layer stores its weight
/// matrix (fan_in x fan_out, row-major) followed by its bias. Convolution
/// fan_in rows are ordered (ky, kx, input channel).
struct ModelParams {
  ModelConfig config;
  std::vector<double> values;

  bool operator==(const ModelParams&) const = default;
};

/// Weights drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)) with a seeded
/// mt19937_64; biases zero.
ModelParams init_params(ModelConfig config, std::uint64_t seed);

std::vector<double> flatten(const ModelParams& params);
ModelParams unflatten(const ModelConfig& config, std::span<const double> flat);

/// H x W x C feature grid, channels innermost.
struct FeatureGrid {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> values;

  double at(int h, int w, int c) const {
    return values[(static_cast<std::size_t>(h) * width + w) * channels + c];
  }
};

using StrTensor = FeatureGrid;
using TemporalTensor = FeatureGrid;

struct TimeWindow {
  double t_lo = 0.0;
  double t_hi = 1.0;
};

/// The whole exposure window of an RS blur input: [t_s, t_e + t_exp].
TimeWindow exposure_window(const ExposureSpec& input);

/// theta = residual blocks(lift(frame) + sigmoid(event head(counts / max|counts|))).
StrTensor encode(const Frame& rs_blur, const CountImageStack& counts, const ModelParams& params);

/// Normalizes timestamps to [0, 1] over `window`, then applies the affine
/// 1 -> C map (learned) or interleaved sin/cos at frequencies 2^k (sinusoid).
TemporalTensor embed_time(const TimestampMap& map, const ModelParams& params, TimeWindow window);

/// Per-pixel 5-layer decoder on the fused features; sigmoid output.
Frame decode(const StrTensor& theta, const TemporalTensor& temporal, const ModelParams& params);

/// Encodes once, then answers any number of exposure queries.
class InferenceSession {
 public:
  explicit InferenceSession(ModelParams params);

  /// The input frame's exposure spec defines the queryable window.
  void encode(const Frame& rs_blur, const CountImageStack& counts);

  /// GS or RS sharp frame for `query`. The query's [t_start, t_end] must lie
  /// inside the encoded window.
  Frame query(const ExposureSpec& query);

  const StrTensor& representation() const { return theta_; }
  TimeWindow window() const { return window_; }
  std::size_t encoder_invocations() const { return encoder_calls_; }
  std::size_t decoder_invocations() const { return decoder_calls_; }
  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  StrTensor theta_;
  TimeWindow window_;
  bool encoded_ = false;
  std::size_t encoder_calls_ = 0;
  std::size_t decoder_calls_ = 0;
};

struct ForwardResult {
  std::vector<Frame> frames;
  std::size_t encoder_invocations = 0;
  std::size_t decoder_invocations = 0;
};

ForwardResult forward_full(const Frame& rs_blur, const CountImageStack& counts, const ModelParams& params,
                           std::span<const ExposureSpec> queries);

/// One supervised example: RS blur input (with its rolling exposure spec),
/// count images over the exposure window, and GS ground truth frames whose
/// exposure.t_start is the supervision timestamp.
struct TrainingSample {
  Frame rs_blur;
  CountImageStack counts;
  std::vector<Frame> gt_gs;
};

struct LossEvaluation {
  double total = 0.0;
  double blur_term = 0.0;
  double reconstruction_term = 0.0;
  std::vector<double> gradient;
};

/// Total loss averaged over the batch and its exact reverse-mode gradient
/// with respect to every entry of params.values. Throws DivergenceError on a
/// non-finite loss.
LossEvaluation loss_gradients(const ModelParams& params, std::span<const TrainingSample> batch,
                              const LossConfig& loss);

/// CKPT1: "CKPT1\0\0\0", u32 features, hidden, blocks, bins, image_channels,
/// u8 fusion, u8 embedding, u16 zero, u64 seed, u64 count, count x f64 (LE).
void write_checkpoint(std::ostream& os, const ModelParams& params);
void write_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams read_checkpoint(std::istream& is);
ModelParams read_checkpoint(const std::filesystem::path& path);

}  // namespace rsinr
