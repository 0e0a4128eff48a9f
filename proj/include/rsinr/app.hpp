#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rsinr/config.hpp"
#include "rsinr/model.hpp"
#include "rsinr/train.hpp"

namespace rsinr::app {

namespace fs = std::filesystem;

struct ManifestFile {
  std::string path;  // relative to the manifest directory
  std::string sha256;
};

struct GtEntry {
  double t = 0.0;
  ManifestFile file;
};

/// Dataset descriptor written by `synth` as manifest.json.
struct Manifest {
  fs::path directory;  // where manifest.json lives; not serialized
  std::uint64_t seed = 0;
  std::string scene_config;  // canonical scene JSON text
  std::string scene_config_hash;
  Geometry geometry;
  ExposureSpec exposure;
  double event_threshold = 0.0;
  double event_dt = 0.0;
  int bins = 0;
  int blur_samples = 0;
  std::uint64_t event_count = 0;
  ManifestFile rs_blur;
  ManifestFile events;
  std::vector<GtEntry> gt;
};

inline constexpr const char* kManifestFormat = "rsinr-manifest-1";

/// Parses manifest.json and re-validates it: referenced files exist and match
/// their stored hashes, GT timestamps lie in [t_s, t_e + t_exp], and the scene
/// hash matches the embedded scene config.
Manifest load_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const Manifest& m);

/// Input frame, count images (binned over the exposure window) and GT frames.
TrainingSample load_sample(const Manifest& m);

struct SynthOptions {
  fs::path config;
  fs::path out;
  std::optional<std::uint64_t> seed;
};

/// Writes rs_blur.rsf, events.evt, events.csv, gt_###.rsf, 8-bit previews
/// and manifest.json into `out`.
Manifest run_synth(const SynthOptions& opts);

struct TrainOptions {
  std::optional<fs::path> config;
  std::optional<fs::path> manifest;
  fs::path out;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
};

struct TrainSummary {
  int iterations = 0;
  double baseline_psnr = 0.0;
  double final_psnr = 0.0;
  double gain_db = 0.0;
  double final_loss = 0.0;
  fs::path checkpoint;
};

/// Trains from a manifest (preferred) or synthesizes from [scene] in the
/// config. Writes checkpoint.ckpt, train_log.jsonl, train_timing.jsonl and
/// train_summary.json.
TrainSummary run_train(const TrainOptions& opts);

struct InferOptions {
  fs::path checkpoint;
  fs::path manifest;
  fs::path out;
  int multiple = 0;               // used when `times` is empty
  std::vector<double> times;
};

struct InferSummary {
  std::size_t encoder_invocations = 0;
  std::size_t decoder_invocations = 0;
  std::vector<double> times;
};

/// Query timestamps for an interpolation multiple: N points uniformly
/// spanning the window with both endpoints (N >= 2) or the midpoint (N = 1).
std::vector<double> query_times(TimeWindow window, int multiple);

/// Writes gs_###.rsf, previews and frames.json (the index read by `eval`).
InferSummary run_infer(const InferOptions& opts);

struct EvalOptions {
  fs::path predictions;  // directory containing frames.json
  fs::path manifest;
  fs::path report;
};

struct FrameScore {
  double t = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;  // NaN for frames smaller than the SSIM window
};

struct EvalSummary {
  std::vector<FrameScore> frames;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
};

inline constexpr double kTimestampMatchTolerance = 1e-9;

EvalSummary run_eval(const EvalOptions& opts);

struct BenchRecord {
  int multiple = 0;
  double encode_ms = 0.0;
  double decode_ms = 0.0;
  double total_ms = 0.0;
  double per_frame_ms = 0.0;
};

struct AffineFit {
  double intercept = 0.0;  // t_enc
  double slope = 0.0;      // t_dec
  double r_squared = 0.0;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  AffineFit fit;
};

/// Least-squares fit y = intercept + slope * x.
AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y);

/// Times encode and decode phases for every multiple. For each multiple the
/// repetition with the median total is reported, so total == encode + decode.
BenchReport bench(const ModelParams& params, const Frame& rs_blur, const CountImageStack& counts,
                  std::vector<int> multiples, int repetitions);

struct BenchOptions {
  fs::path checkpoint;
  fs::path manifest;
  fs::path report;
  std::vector<int> multiples{1, 2, 4, 8, 16, 31};
  int repetitions = 5;
};

BenchReport run_bench(const BenchOptions& opts);

}  // namespace rsinr::app
