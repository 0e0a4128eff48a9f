#include "rsinr/rsinr.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "rsinr/app.hpp"
#include "rsinr/error.hpp"
#include "rsinr/events.hpp"
#include "rsinr/formation.hpp"
#include "rsinr/frame_io.hpp"
#include "rsinr/metrics.hpp"
#include "rsinr/model.hpp"
#include "rsinr/parallel.hpp"
#include "rsinr/scene.hpp"

struct rsinr_scene {
  rsinr::SceneModel model;
};

struct rsinr_frame {
  rsinr::Frame frame;
};

struct rsinr_events {
  rsinr::EventStream stream;
};

struct rsinr_model {
  rsinr::InferenceSession session;
  bool encoded = false;
};

namespace {

thread_local std::string g_last_error;

rsinr_status fail(rsinr_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
rsinr_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const rsinr::DomainError& e) {
    return fail(RSINR_ERR_DOMAIN, e.what());
  } catch (const rsinr::ValidationError& e) {
    return fail(RSINR_ERR_VALIDATION, e.what());
  } catch (const rsinr::IoError& e) {
    return fail(RSINR_ERR_IO, e.what());
  } catch (const rsinr::DivergenceError& e) {
    return fail(RSINR_ERR_DIVERGENCE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RSINR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RSINR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RSINR_ERR_INTERNAL, "unknown error");
  }
}

#define RSINR_REQUIRE(cond)                                                     \
  do {                                                                          \
    if (!(cond)) return fail(RSINR_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* rsinr_last_error(void) { return g_last_error.c_str(); }

const char* rsinr_version(void) { return RSINR_VERSION; }

void rsinr_set_threads(int n) { rsinr::set_thread_count(n); }

int rsinr_get_threads(void) { return rsinr::thread_count(); }

rsinr_status rsinr_scene_load(const char* config_path, rsinr_scene** out) {
  RSINR_REQUIRE(config_path && out);
  return guarded([&] {
    const rsinr::RunConfig cfg = rsinr::load_config(config_path);
    if (!cfg.has_scene) return fail(RSINR_ERR_VALIDATION, std::string(config_path) + ": no [scene] section");
    *out = new rsinr_scene{rsinr::make_scene(cfg.synthesis.scene)};
    return RSINR_OK;
  });
}

void rsinr_scene_free(rsinr_scene* scene) { delete scene; }

rsinr_status rsinr_scene_geometry(const rsinr_scene* scene, int* height, int* width, int* channels) {
  RSINR_REQUIRE(scene);
  const rsinr::Geometry g = scene->model.geometry();
  if (height) *height = g.height;
  if (width) *width = g.width;
  if (channels) *channels = g.channels;
  return RSINR_OK;
}

rsinr_status rsinr_scene_time_domain(const rsinr_scene* scene, double* t_min, double* t_max) {
  RSINR_REQUIRE(scene);
  const rsinr::TimeDomain d = scene->model.time_domain();
  if (t_min) *t_min = d.t_min;
  if (t_max) *t_max = d.t_max;
  return RSINR_OK;
}

rsinr_status rsinr_scene_sample(const rsinr_scene* scene, double x, double y, double t, double* out,
                                size_t out_len) {
  RSINR_REQUIRE(scene && out);
  RSINR_REQUIRE(out_len >= static_cast<size_t>(scene->model.geometry().channels));
  return guarded([&] {
    const std::vector<double> v = rsinr::sample_intensity(scene->model, x, y, t);
    std::copy(v.begin(), v.end(), out);
    return RSINR_OK;
  });
}

rsinr_status rsinr_render(const rsinr_scene* scene, rsinr_shutter shutter, double t_s, double t_e, double t_exp,
                          int samples, rsinr_frame** out) {
  RSINR_REQUIRE(scene && out);
  RSINR_REQUIRE(shutter == RSINR_GLOBAL || shutter == RSINR_ROLLING);
  return guarded([&] {
    const auto& f = scene->model;
    rsinr::Frame frame;
    if (shutter == RSINR_GLOBAL) {
      frame = t_exp == 0.0 ? rsinr::render_gs_sharp(f, t_s) : rsinr::render_gs_blur(f, t_s, t_exp, samples);
    } else {
      frame = t_exp == 0.0 ? rsinr::render_rs_sharp(f, t_s, t_e) : rsinr::render_rs_blur(f, t_s, t_e, t_exp, samples);
    }
    *out = new rsinr_frame{std::move(frame)};
    return RSINR_OK;
  });
}

rsinr_status rsinr_frame_read(const char* path, rsinr_frame** out) {
  RSINR_REQUIRE(path && out);
  return guarded([&] {
    *out = new rsinr_frame{rsinr::read_rsf(path)};
    return RSINR_OK;
  });
}

rsinr_status rsinr_frame_write(const rsinr_frame* frame, const char* path) {
  RSINR_REQUIRE(frame && path);
  return guarded([&] {
    rsinr::write_rsf(path, frame->frame);
    return RSINR_OK;
  });
}

void rsinr_frame_free(rsinr_frame* frame) { delete frame; }

rsinr_status rsinr_frame_geometry(const rsinr_frame* frame, int* height, int* width, int* channels) {
  RSINR_REQUIRE(frame);
  const rsinr::Geometry& g = frame->frame.geometry;
  if (height) *height = g.height;
  if (width) *width = g.width;
  if (channels) *channels = g.channels;
  return RSINR_OK;
}

rsinr_status rsinr_frame_copy(const rsinr_frame* frame, double* out, size_t out_len) {
  RSINR_REQUIRE(frame && out);
  RSINR_REQUIRE(out_len >= frame->frame.data.size());
  std::copy(frame->frame.data.begin(), frame->frame.data.end(), out);
  return RSINR_OK;
}

rsinr_status rsinr_psnr(const rsinr_frame* a, const rsinr_frame* b, double* out) {
  RSINR_REQUIRE(a && b && out);
  return guarded([&] {
    *out = rsinr::psnr(a->frame, b->frame);
    return RSINR_OK;
  });
}

rsinr_status rsinr_ssim(const rsinr_frame* a, const rsinr_frame* b, double* out) {
  RSINR_REQUIRE(a && b && out);
  return guarded([&] {
    *out = rsinr::ssim(a->frame, b->frame);
    return RSINR_OK;
  });
}

rsinr_status rsinr_simulate_events(const rsinr_scene* scene, double t0, double t1, double dt, double threshold,
                                   rsinr_events** out) {
  RSINR_REQUIRE(scene && out);
  return guarded([&] {
    *out = new rsinr_events{rsinr::simulate_events(scene->model, t0, t1, dt, threshold)};
    return RSINR_OK;
  });
}

rsinr_status rsinr_events_read(const char* path, rsinr_events** out) {
  RSINR_REQUIRE(path && out);
  return guarded([&] {
    *out = new rsinr_events{rsinr::read_evt(path)};
    return RSINR_OK;
  });
}

rsinr_status rsinr_events_write(const rsinr_events* events, const char* path) {
  RSINR_REQUIRE(events && path);
  return guarded([&] {
    rsinr::write_evt(path, events->stream);
    return RSINR_OK;
  });
}

void rsinr_events_free(rsinr_events* events) { delete events; }

size_t rsinr_events_count(const rsinr_events* events) { return events ? events->stream.events.size() : 0; }

rsinr_status rsinr_events_get(const rsinr_events* events, size_t index, rsinr_event* out) {
  RSINR_REQUIRE(events && out);
  RSINR_REQUIRE(index < events->stream.events.size());
  const rsinr::Event& e = events->stream.events[index];
  *out = {e.x, e.y, e.t, e.p};
  return RSINR_OK;
}

rsinr_status rsinr_model_load(const char* checkpoint_path, rsinr_model** out) {
  RSINR_REQUIRE(checkpoint_path && out);
  return guarded([&] {
    *out = new rsinr_model{rsinr::InferenceSession(rsinr::read_checkpoint(checkpoint_path))};
    return RSINR_OK;
  });
}

void rsinr_model_free(rsinr_model* model) { delete model; }

size_t rsinr_model_parameter_count(const rsinr_model* model) {
  return model ? model->session.params().values.size() : 0;
}

rsinr_status rsinr_model_encode(rsinr_model* model, const rsinr_frame* rs_blur, double t_s, double t_e, double t_exp,
                                const rsinr_events* events) {
  RSINR_REQUIRE(model && rs_blur && events);
  return guarded([&] {
    rsinr::Frame input = rs_blur->frame;
    input.exposure = rsinr::ExposureSpec::rolling(t_s, t_e, t_exp);
    rsinr::EventStream stream = events->stream;
    stream.t0 = t_s;
    stream.t1 = input.exposure.window_end();
    model->session.encode(input, rsinr::voxelize(stream, model->session.params().config.bins));
    model->encoded = true;
    return RSINR_OK;
  });
}

rsinr_status rsinr_model_query(rsinr_model* model, double t, rsinr_frame** out) {
  RSINR_REQUIRE(model && out);
  if (!model->encoded) return fail(RSINR_ERR_VALIDATION, "model has no encoded input; call rsinr_model_encode first");
  return guarded([&] {
    *out = new rsinr_frame{model->session.query(rsinr::ExposureSpec::global(t))};
    return RSINR_OK;
  });
}

rsinr_status rsinr_model_counters(const rsinr_model* model, size_t* encoder_calls, size_t* decoder_calls) {
  RSINR_REQUIRE(model);
  if (encoder_calls) *encoder_calls = model->session.encoder_invocations();
  if (decoder_calls) *decoder_calls = model->session.decoder_invocations();
  return RSINR_OK;
}

rsinr_status rsinr_cmd_synth(const rsinr_synth_options* opts, rsinr_synth_summary* summary) {
  RSINR_REQUIRE(opts && opts->config_path && opts->out_dir);
  return guarded([&] {
    rsinr::app::SynthOptions o;
    o.config = opts->config_path;
    o.out = opts->out_dir;
    if (opts->has_seed) o.seed = opts->seed;
    const rsinr::app::Manifest m = rsinr::app::run_synth(o);
    if (summary) *summary = {m.seed, m.event_count, m.gt.size()};
    return RSINR_OK;
  });
}

rsinr_status rsinr_cmd_train(const rsinr_train_options* opts, rsinr_train_summary* summary) {
  RSINR_REQUIRE(opts && opts->out_dir);
  RSINR_REQUIRE(opts->config_path || opts->manifest_path);
  return guarded([&] {
    rsinr::app::TrainOptions o;
    if (opts->config_path) o.config = opts->config_path;
    if (opts->manifest_path) o.manifest = opts->manifest_path;
    o.out = opts->out_dir;
    if (opts->has_seed) o.seed = opts->seed;
    if (opts->iterations >= 0) o.iterations = opts->iterations;
    const rsinr::app::TrainSummary s = rsinr::app::run_train(o);
    if (summary) *summary = {s.iterations, s.baseline_psnr, s.final_psnr, s.gain_db, s.final_loss};
    return RSINR_OK;
  });
}

rsinr_status rsinr_cmd_infer(const rsinr_infer_options* opts, rsinr_infer_summary* summary) {
  RSINR_REQUIRE(opts && opts->checkpoint_path && opts->manifest_path && opts->out_dir);
  RSINR_REQUIRE(opts->time_count == 0 || opts->times);
  RSINR_REQUIRE(opts->time_count > 0 || opts->multiple >= 1);
  return guarded([&] {
    rsinr::app::InferOptions o;
    o.checkpoint = opts->checkpoint_path;
    o.manifest = opts->manifest_path;
    o.out = opts->out_dir;
    o.multiple = opts->multiple;
    o.times.assign(opts->times, opts->times + opts->time_count);
    const rsinr::app::InferSummary s = rsinr::app::run_infer(o);
    if (summary) *summary = {s.encoder_invocations, s.decoder_invocations, s.times.size()};
    return RSINR_OK;
  });
}

rsinr_status rsinr_cmd_eval(const rsinr_eval_options* opts, rsinr_eval_summary* summary) {
  RSINR_REQUIRE(opts && opts->predictions_dir && opts->manifest_path && opts->report_path);
  return guarded([&] {
    const rsinr::app::EvalSummary s =
        rsinr::app::run_eval({opts->predictions_dir, opts->manifest_path, opts->report_path});
    if (summary) *summary = {s.frames.size(), s.mean_psnr, s.mean_ssim};
    return RSINR_OK;
  });
}

rsinr_status rsinr_cmd_bench(const rsinr_bench_options* opts, rsinr_bench_summary* summary) {
  RSINR_REQUIRE(opts && opts->checkpoint_path && opts->manifest_path && opts->report_path);
  RSINR_REQUIRE(opts->multiple_count == 0 || opts->multiples);
  return guarded([&] {
    rsinr::app::BenchOptions o;
    o.checkpoint = opts->checkpoint_path;
    o.manifest = opts->manifest_path;
    o.report = opts->report_path;
    if (opts->multiple_count > 0) o.multiples.assign(opts->multiples, opts->multiples + opts->multiple_count);
    if (opts->repetitions >= 1) o.repetitions = opts->repetitions;
    const rsinr::app::BenchReport r = rsinr::app::run_bench(o);
    if (summary) {
      *summary = {r.records.size(), r.fit.intercept, r.fit.slope, r.fit.r_squared, r.records.front().per_frame_ms,
                  r.records.back().per_frame_ms};
    }
    return RSINR_OK;
  });
}

}  // extern "C"
