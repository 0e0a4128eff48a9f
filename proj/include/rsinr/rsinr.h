#ifndef RSINR_RSINR_H
#define RSINR_RSINR_H

#include <stddef.h>
#include <stdint.h>

#if defined(RSINR_BUILDING_LIBRARY)
#define RSINR_API __attribute__((visibility("default")))
#else
#define RSINR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsinr_status {
  RSINR_OK = 0,
  RSINR_ERR_INVALID_ARGUMENT = 1, /* null pointer or out-of-range argument */
  RSINR_ERR_DOMAIN = 2,           /* coordinate or timestamp outside its domain */
  RSINR_ERR_IO = 3,
  RSINR_ERR_VALIDATION = 4, /* malformed config, manifest or file content */
  RSINR_ERR_DIVERGENCE = 5, /* non-finite loss or gradient */
  RSINR_ERR_INTERNAL = 6
} rsinr_status;

typedef enum rsinr_shutter { RSINR_GLOBAL = 0, RSINR_ROLLING = 1 } rsinr_shutter;

/* Message for the most recent failure on the calling thread. Never NULL. */
RSINR_API const char* rsinr_last_error(void);
RSINR_API const char* rsinr_version(void);

/* n < 1 selects the machine's hardware concurrency. */
RSINR_API void rsinr_set_threads(int n);
RSINR_API int rsinr_get_threads(void);

/* ---- scenes ---- */

typedef struct rsinr_scene rsinr_scene;

/* Loads the [scene] section of a key-value config file. */
RSINR_API rsinr_status rsinr_scene_load(const char* config_path, rsinr_scene** out);
RSINR_API void rsinr_scene_free(rsinr_scene* scene);
RSINR_API rsinr_status rsinr_scene_geometry(const rsinr_scene* scene, int* height, int* width, int* channels);
RSINR_API rsinr_status rsinr_scene_time_domain(const rsinr_scene* scene, double* t_min, double* t_max);
/* Writes `channels` intensities to out; out_len must be at least channels. */
RSINR_API rsinr_status rsinr_scene_sample(const rsinr_scene* scene, double x, double y, double t, double* out,
                                          size_t out_len);

/* ---- frames ---- */

typedef struct rsinr_frame rsinr_frame;

/* Rolling: t_s..t_e rows. Global: t_s is the exposure start, t_e ignored.
   t_exp == 0 renders sharp frames; samples applies to blurred ones. */
RSINR_API rsinr_status rsinr_render(const rsinr_scene* scene, rsinr_shutter shutter, double t_s, double t_e,
                                    double t_exp, int samples, rsinr_frame** out);
RSINR_API rsinr_status rsinr_frame_read(const char* path, rsinr_frame** out);
RSINR_API rsinr_status rsinr_frame_write(const rsinr_frame* frame, const char* path);
RSINR_API void rsinr_frame_free(rsinr_frame* frame);
RSINR_API rsinr_status rsinr_frame_geometry(const rsinr_frame* frame, int* height, int* width, int* channels);
/* Copies H*W*C values, channel-innermost row-major. */
RSINR_API rsinr_status rsinr_frame_copy(const rsinr_frame* frame, double* out, size_t out_len);
RSINR_API rsinr_status rsinr_psnr(const rsinr_frame* a, const rsinr_frame* b, double* out);
RSINR_API rsinr_status rsinr_ssim(const rsinr_frame* a, const rsinr_frame* b, double* out);

/* ---- events ---- */

typedef struct rsinr_events rsinr_events;

typedef struct rsinr_event {
  uint16_t x;
  uint16_t y;
  double t;
  int8_t p;
} rsinr_event;

RSINR_API rsinr_status rsinr_simulate_events(const rsinr_scene* scene, double t0, double t1, double dt,
                                             double threshold, rsinr_events** out);
RSINR_API rsinr_status rsinr_events_read(const char* path, rsinr_events** out);
RSINR_API rsinr_status rsinr_events_write(const rsinr_events* events, const char* path);
RSINR_API void rsinr_events_free(rsinr_events* events);
RSINR_API size_t rsinr_events_count(const rsinr_events* events);
RSINR_API rsinr_status rsinr_events_get(const rsinr_events* events, size_t index, rsinr_event* out);

/* ---- model ---- */

typedef struct rsinr_model rsinr_model;

RSINR_API rsinr_status rsinr_model_load(const char* checkpoint_path, rsinr_model** out);
RSINR_API void rsinr_model_free(rsinr_model* model);
RSINR_API size_t rsinr_model_parameter_count(const rsinr_model* model);
/* Encodes an RS blur frame (rolling exposure t_s, t_e, t_exp) with the events
   binned over [t_s, t_e + t_exp]. Replaces any previous encoding. */
RSINR_API rsinr_status rsinr_model_encode(rsinr_model* model, const rsinr_frame* rs_blur, double t_s, double t_e,
                                          double t_exp, const rsinr_events* events);
/* Decodes a GS sharp frame at t; requires a prior encode. */
RSINR_API rsinr_status rsinr_model_query(rsinr_model* model, double t, rsinr_frame** out);
RSINR_API rsinr_status rsinr_model_counters(const rsinr_model* model, size_t* encoder_calls, size_t* decoder_calls);

/* ---- commands ---- */

typedef struct rsinr_synth_options {
  const char* config_path;
  const char* out_dir;
  int has_seed;
  uint64_t seed;
} rsinr_synth_options;

typedef struct rsinr_synth_summary {
  uint64_t seed;
  uint64_t event_count;
  size_t gt_count;
} rsinr_synth_summary;

typedef struct rsinr_train_options {
  const char* config_path;   /* may be NULL when manifest_path is set */
  const char* manifest_path; /* may be NULL */
  const char* out_dir;
  int has_seed;
  uint64_t seed;
  int iterations; /* < 0 keeps the configured value */
} rsinr_train_options;

typedef struct rsinr_train_summary {
  int iterations;
  double baseline_psnr;
  double final_psnr;
  double gain_db;
  double final_loss;
} rsinr_train_summary;

typedef struct rsinr_infer_options {
  const char* checkpoint_path;
  const char* manifest_path;
  const char* out_dir;
  int multiple;        /* used when time_count == 0 */
  const double* times; /* explicit query timestamps */
  size_t time_count;
} rsinr_infer_options;

typedef struct rsinr_infer_summary {
  size_t encoder_invocations;
  size_t decoder_invocations;
  size_t frame_count;
} rsinr_infer_summary;

typedef struct rsinr_eval_options {
  const char* predictions_dir;
  const char* manifest_path;
  const char* report_path;
} rsinr_eval_options;

typedef struct rsinr_eval_summary {
  size_t frame_count;
  double mean_psnr;
  double mean_ssim; /* NaN when frames are smaller than the SSIM window */
} rsinr_eval_summary;

typedef struct rsinr_bench_options {
  const char* checkpoint_path;
  const char* manifest_path;
  const char* report_path;
  const int* multiples; /* NULL selects 1,2,4,8,16,31 */
  size_t multiple_count;
  int repetitions; /* < 1 selects the default of 5 */
} rsinr_bench_options;

typedef struct rsinr_bench_summary {
  size_t record_count;
  double t_enc_ms;
  double t_dec_ms;
  double r_squared;
  double first_per_frame_ms; /* smallest multiple */
  double last_per_frame_ms;  /* largest multiple */
} rsinr_bench_summary;

/* Summary pointers may be NULL. */
RSINR_API rsinr_status rsinr_cmd_synth(const rsinr_synth_options* opts, rsinr_synth_summary* summary);
RSINR_API rsinr_status rsinr_cmd_train(const rsinr_train_options* opts, rsinr_train_summary* summary);
RSINR_API rsinr_status rsinr_cmd_infer(const rsinr_infer_options* opts, rsinr_infer_summary* summary);
RSINR_API rsinr_status rsinr_cmd_eval(const rsinr_eval_options* opts, rsinr_eval_summary* summary);
RSINR_API rsinr_status rsinr_cmd_bench(const rsinr_bench_options* opts, rsinr_bench_summary* summary);

#ifdef __cplusplus
}
#endif

#endif
