#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsinr/rsinr.h"

namespace {

enum Exit : int { kOk = 0, kInternal = 1, kInvalid = 2, kThreshold = 3, kDivergence = 4 };

int exit_code(rsinr_status s) {
  switch (s) {
    case RSINR_OK:
      return kOk;
    case RSINR_ERR_DIVERGENCE:
      return kDivergence;
    case RSINR_ERR_INTERNAL:
      return kInternal;
    default:
      return kInvalid;
  }
}

int report_failure(const char* command, rsinr_status s) {
  std::fprintf(stderr, "rsinr %s: %s\n", command, rsinr_last_error());
  return exit_code(s);
}

const char* c_str_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Rolling-shutter correction and frame interpolation from events"};
  cli.require_subcommand(1);

  std::string config, out, manifest, checkpoint, pred, report;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int iterations = -1;
  int multiple = 0;
  int repetitions = 5;
  std::vector<double> times;
  std::vector<int> multiples;
  std::optional<double> require_gain, require_r2;

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Key-value config file");
    sub->add_option("--seed", seed, "Seed overriding the config");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  };

  CLI::App* synth = cli.add_subcommand("synth", "Render RS blur input, events and GT frames");
  add_shared(synth);
  synth->get_option("--config")->required();
  synth->get_option("--out")->required();

  CLI::App* train = cli.add_subcommand("train", "Fit the model and write a checkpoint");
  add_shared(train);
  train->get_option("--out")->required();
  train->add_option("--manifest", manifest, "Dataset written by synth");
  train->add_option("--iterations", iterations, "Override the configured iteration count")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--require-gain", require_gain, "Exit 3 unless PSNR gain over the input reaches this (dB)");

  CLI::App* infer = cli.add_subcommand("infer", "Decode GS frames at uniform or explicit timestamps");
  add_shared(infer);
  infer->get_option("--out")->required();
  infer->add_option("--checkpoint", checkpoint)->required();
  infer->add_option("--manifest", manifest)->required();
  auto* multiple_opt = infer->add_option("--multiple", multiple, "Number of uniformly spaced frames")
                           ->check(CLI::PositiveNumber);
  auto* times_opt = infer->add_option("--times", times, "Explicit query timestamps")->delimiter(',');
  multiple_opt->excludes(times_opt);

  CLI::App* eval = cli.add_subcommand("eval", "Score predicted frames against ground truth");
  add_shared(eval);
  eval->add_option("--pred", pred, "Directory written by infer")->required();
  eval->add_option("--manifest", manifest)->required();
  eval->add_option("--report", report, "Report path (default <out>/eval_report.json)");

  CLI::App* bench = cli.add_subcommand("bench", "Time encode-once inference over interpolation multiples");
  add_shared(bench);
  bench->add_option("--checkpoint", checkpoint)->required();
  bench->add_option("--manifest", manifest)->required();
  bench->add_option("--report", report, "Report path (default <out>/bench_report.json)");
  bench->add_option("--multiples", multiples, "Interpolation multiples")->delimiter(',');
  bench->add_option("--repetitions", repetitions)->check(CLI::Range(3, 1000));
  bench->add_option("--require-r2", require_r2, "Exit 3 unless the affine fit reaches this R^2");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  rsinr_set_threads(threads);
  const bool has_seed = seed.has_value();
  const std::uint64_t seed_value = seed.value_or(0);

  if (synth->parsed()) {
    rsinr_synth_options o{config.c_str(), out.c_str(), has_seed, seed_value};
    rsinr_synth_summary s{};
    if (rsinr_status st = rsinr_cmd_synth(&o, &s)) return report_failure("synth", st);
    std::printf("wrote %s/manifest.json: %llu events, %zu GT frames, seed %llu\n", out.c_str(),
                static_cast<unsigned long long>(s.event_count), s.gt_count,
                static_cast<unsigned long long>(s.seed));
    return kOk;
  }

  if (train->parsed()) {
    if (config.empty() && manifest.empty()) {
      std::fprintf(stderr, "rsinr train: --config or --manifest is required\n");
      return kInvalid;
    }
    rsinr_train_options o{c_str_or_null(config), c_str_or_null(manifest), out.c_str(), has_seed, seed_value,
                          iterations};
    rsinr_train_summary s{};
    if (rsinr_status st = rsinr_cmd_train(&o, &s)) return report_failure("train", st);
    std::printf("iterations %d  final loss %.6g\n", s.iterations, s.final_loss);
    std::printf("input PSNR %.3f dB  model PSNR %.3f dB  gain %+.3f dB\n", s.baseline_psnr, s.final_psnr,
                s.gain_db);
    if (require_gain && !(s.gain_db >= *require_gain)) {
      std::fprintf(stderr, "rsinr train: gain %.3f dB below required %.3f dB\n", s.gain_db, *require_gain);
      return kThreshold;
    }
    return kOk;
  }

  if (infer->parsed()) {
    if (times.empty() && multiple == 0) {
      std::fprintf(stderr, "rsinr infer: --multiple or --times is required\n");
      return kInvalid;
    }
    rsinr_infer_options o{checkpoint.c_str(), manifest.c_str(), out.c_str(), multiple, times.data(), times.size()};
    rsinr_infer_summary s{};
    if (rsinr_status st = rsinr_cmd_infer(&o, &s)) return report_failure("infer", st);
    std::printf("wrote %zu frames to %s (encoder calls %zu, decoder calls %zu)\n", s.frame_count, out.c_str(),
                s.encoder_invocations, s.decoder_invocations);
    return kOk;
  }

  if (eval->parsed()) {
    if (report.empty()) {
      if (out.empty()) {
        std::fprintf(stderr, "rsinr eval: --report or --out is required\n");
        return kInvalid;
      }
      report = out + "/eval_report.json";
    }
    rsinr_eval_options o{pred.c_str(), manifest.c_str(), report.c_str()};
    rsinr_eval_summary s{};
    if (rsinr_status st = rsinr_cmd_eval(&o, &s)) return report_failure("eval", st);
    std::printf("%zu frames  mean PSNR %.3f dB  mean SSIM %.4f\n", s.frame_count, s.mean_psnr, s.mean_ssim);
    return kOk;
  }

  if (bench->parsed()) {
    if (report.empty()) {
      if (out.empty()) {
        std::fprintf(stderr, "rsinr bench: --report or --out is required\n");
        return kInvalid;
      }
      report = out + "/bench_report.json";
    }
    rsinr_bench_options o{checkpoint.c_str(), manifest.c_str(), report.c_str(), multiples.data(), multiples.size(),
                          repetitions};
    rsinr_bench_summary s{};
    if (rsinr_status st = rsinr_cmd_bench(&o, &s)) return report_failure("bench", st);
    std::printf("t_enc %.3f ms  t_dec %.3f ms/frame  R^2 %.5f\n", s.t_enc_ms, s.t_dec_ms, s.r_squared);
    std::printf("per-frame %.3f ms (smallest N) -> %.3f ms (largest N)\n", s.first_per_frame_ms,
                s.last_per_frame_ms);
    if (require_r2 && !(s.r_squared >= *require_r2)) {
      std::fprintf(stderr, "rsinr bench: R^2 %.5f below required %.5f\n", s.r_squared, *require_r2);
      return kThreshold;
    }
    return kOk;
  }
  return kInternal;
}
