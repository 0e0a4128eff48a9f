#include "rsinr/train.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "allocator.hpp"
#include "rsinr/error.hpp"
#include "rsinr/metrics.hpp"

namespace rsinr {

std::vector<double> gt_timestamps(const ExposureSpec& input, int count) {
  return uniform_timestamps(input.t_start, input.window_end(), count);
}

TrainingSample synthesize_sample(const SynthesisConfig& cfg) {
  if (cfg.exposure.pattern != ShutterPattern::rolling) throw ValidationError("input exposure must be rolling");
  const SceneModel scene = make_scene(cfg.scene);
  const ExposureSpec& e = cfg.exposure;

  TrainingSample s;
  s.rs_blur = render_rs_blur(scene, e.t_start, e.t_end, e.t_exp, cfg.blur_samples);
  const EventStream events = simulate_events(scene, e.t_start, e.window_end(), cfg.event_dt, cfg.event_threshold);
  s.counts = voxelize(events, cfg.bins);
  for (double t : gt_timestamps(e, cfg.gt_frames)) s.gt_gs.push_back(render_gs_sharp(scene, t));
  return s;
}

EvalRecord evaluate(const ModelParams& params, const TrainingSample& sample, int iteration) {
  InferenceSession session(params);
  session.encode(sample.rs_blur, sample.counts);
  EvalRecord r;
  r.iteration = iteration;
  const Geometry g = sample.rs_blur.geometry;
  const bool with_ssim = g.height >= 11 && g.width >= 11;
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (const Frame& gt : sample.gt_gs) {
    const Frame pred = session.query(ExposureSpec::global(gt.exposure.t_start));
    r.times.push_back(gt.exposure.t_start);
    r.psnr.push_back(psnr(pred, gt));
    r.ssim.push_back(with_ssim ? ssim(pred, gt) : std::nan(""));
    psnr_sum += r.psnr.back();
    ssim_sum += r.ssim.back();
  }
  const double n = static_cast<double>(sample.gt_gs.size());
  r.mean_psnr = psnr_sum / n;
  r.mean_ssim = with_ssim ? ssim_sum / n : std::nan("");
  return r;
}

EvalRecord evaluate_input_baseline(const TrainingSample& sample) {
  EvalRecord r;
  const Geometry g = sample.rs_blur.geometry;
  const bool with_ssim = g.height >= 11 && g.width >= 11;
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (const Frame& gt : sample.gt_gs) {
    r.times.push_back(gt.exposure.t_start);
    r.psnr.push_back(psnr(sample.rs_blur, gt));
    r.ssim.push_back(with_ssim ? ssim(sample.rs_blur, gt) : std::nan(""));
    psnr_sum += r.psnr.back();
    ssim_sum += r.ssim.back();
  }
  const double n = static_cast<double>(sample.gt_gs.size());
  r.mean_psnr = psnr_sum / n;
  r.mean_ssim = with_ssim ? ssim_sum / n : std::nan("");
  return r;
}

TrainResult train(const TrainingSample& sample, const ModelConfig& model, const LossConfig& loss,
                  const Schedule& schedule) {
  validate(loss);
  detail::keep_large_allocations_on_heap();
  if (schedule.iterations < 0 || schedule.eval_period < 0)
    throw ValidationError("iterations and eval_period must be >= 0");
  TrainResult result{init_params(model, schedule.seed), {}};
  OptimizerState state = make_optimizer_state(result.params.values.size(), schedule.adam);
  const std::span<const TrainingSample> batch(&sample, 1);

  using Clock = std::chrono::steady_clock;
  for (int it = 1; it <= schedule.iterations; ++it) {
    const auto start = Clock::now();
    LossEvaluation eval;
    try {
      eval = loss_gradients(result.params, batch, loss);
    } catch (const DivergenceError& e) {
      throw DivergenceError("iteration " + std::to_string(it) + ": " + e.what());
    }
    adam_step(result.params.values, eval.gradient, state);
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    result.log.iterations.push_back({it, eval.total, eval.reconstruction_term, eval.blur_term, wall});
    if (schedule.eval_period > 0 && (it % schedule.eval_period == 0 || it == schedule.iterations)) {
      result.log.evaluations.push_back(evaluate(result.params, sample, it));
    }
  }
  return result;
}

TrainResult train(const SynthesisConfig& data, const ModelConfig& model, const LossConfig& loss,
                  const Schedule& schedule) {
  if (data.gt_frames != loss.gt_frames) throw ValidationError("synthesis gt_frames differs from loss gt_frames");
  if (data.bins != model.bins) throw ValidationError("synthesis bins differ from model bins");
  return train(synthesize_sample(data), model, loss, schedule);
}

void write_train_log(std::ostream& os, const TrainLog& log) {
  std::size_t e = 0;
  auto flush_evals = [&](int upto) {
    while (e < log.evaluations.size() && log.evaluations[e].iteration <= upto) {
      const EvalRecord& r = log.evaluations[e++];
      nlohmann::ordered_json j;
      j["type"] = "eval";
      j["iteration"] = r.iteration;
      j["times"] = r.times;
      j["psnr"] = r.psnr;
      j["ssim"] = r.ssim;
      j["mean_psnr"] = r.mean_psnr;
      j["mean_ssim"] = r.mean_ssim;
      os << j.dump() << '\n';
    }
  };
  flush_evals(0);
  for (const IterationRecord& r : log.iterations) {
    nlohmann::ordered_json j;
    j["type"] = "iter";
    j["iteration"] = r.iteration;
    j["loss"] = r.total;
    j["l_re"] = r.reconstruction;
    j["l_b"] = r.blur;
    os << j.dump() << '\n';
    flush_evals(r.iteration);
  }
  flush_evals(std::numeric_limits<int>::max());
}

void write_train_timing(std::ostream& os, const TrainLog& log) {
  for (const IterationRecord& r : log.iterations) {
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["wall_seconds"] = r.wall_seconds;
    os << j.dump() << '\n';
  }
}

}  // namespace rsinr
