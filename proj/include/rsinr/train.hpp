#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "rsinr/model.hpp"
#include "rsinr/optimizer.hpp"
#include "rsinr/scene.hpp"

namespace rsinr {

/// Everything needed to render one supervised example from a scene.
struct SynthesisConfig {
  SceneDescription scene;
  ExposureSpec exposure = ExposureSpec::rolling(0.0, 1.0, 0.25);
  double event_threshold = 0.2;
  double event_dt = 1e-3;
  int bins = kDefaultTemporalBins;
  int blur_samples = kDefaultBlurSamples;
  int gt_frames = 5;
};

/// Uniformly spaced GS timestamps over the input's whole exposure window.
std::vector<double> gt_timestamps(const ExposureSpec& input, int count);

/// RS blur input, events over [t_s, t_e + t_exp] binned into count images,
/// and GS sharp ground truth at gt_timestamps().
TrainingSample synthesize_sample(const SynthesisConfig& cfg);

struct Schedule {
  int iterations = 2000;
  int eval_period = 0;  // 0 disables periodic evaluation
  std::uint64_t seed = 0;
  AdamHyper adam;
};

struct IterationRecord {
  int iteration = 0;
  double total = 0.0;
  double reconstruction = 0.0;
  double blur = 0.0;
  double wall_seconds = 0.0;
};

struct EvalRecord {
  int iteration = 0;
  std::vector<double> times;
  std::vector<double> psnr;
  std::vector<double> ssim;  // NaN when the frame is smaller than the SSIM window
  double mean_psnr = 0.0;
  double mean_ssim = std::numeric_limits<double>::quiet_NaN();
};

struct TrainLog {
  std::vector<IterationRecord> iterations;
  std::vector<EvalRecord> evaluations;
};

struct TrainResult {
  ModelParams params;
  TrainLog log;
};

/// PSNR/SSIM of GS queries at the sample's GT timestamps.
EvalRecord evaluate(const ModelParams& params, const TrainingSample& sample, int iteration = 0);

/// Same metrics with the raw RS blur input standing in for every prediction.
EvalRecord evaluate_input_baseline(const TrainingSample& sample);

/// Full-batch Adam on a single sample. Parameters are initialised from
/// schedule.seed. Throws DivergenceError on a non-finite loss, with the
/// iteration in the message.
TrainResult train(const TrainingSample& sample, const ModelConfig& model, const LossConfig& loss,
                  const Schedule& schedule);
TrainResult train(const SynthesisConfig& data, const ModelConfig& model, const LossConfig& loss,
                  const Schedule& schedule);

/// One JSON object per line, fixed field order, no timing fields, so that
/// seed-fixed runs produce identical bytes.
void write_train_log(std::ostream& os, const TrainLog& log);
/// Per-iteration wall-clock seconds, kept apart from the deterministic log.
void write_train_timing(std::ostream& os, const TrainLog& log);

}  // namespace rsinr
