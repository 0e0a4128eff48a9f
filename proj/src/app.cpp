#include "rsinr/app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "rsinr/error.hpp"
#include "rsinr/frame_io.hpp"
#include "rsinr/metrics.hpp"
#include "allocator.hpp"

namespace rsinr::app {

using json = nlohmann::ordered_json;

namespace {

/// Shortest decimal text that round-trips to `v`.
std::string shortest(double v) {
  char buf[32];
  return {buf, std::to_chars(buf, buf + sizeof buf, v).ptr};
}

std::string indexed_name(const char* prefix, std::size_t i, const char* ext) {
  std::ostringstream os;
  os << prefix << std::setw(3) << std::setfill('0') << i << ext;
  return os.str();
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IoError("failed writing " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

ManifestFile record_file(const fs::path& dir, const std::string& name) {
  return {name, sha256_file(dir / name)};
}

json file_json(const ManifestFile& f, const char* format) {
  json j;
  j["path"] = f.path;
  j["format"] = format;
  j["sha256"] = f.sha256;
  return j;
}

void check_file(const fs::path& dir, const ManifestFile& f) {
  const fs::path p = dir / f.path;
  if (!fs::exists(p)) throw ValidationError("manifest references missing file " + p.string());
  if (sha256_file(p) != f.sha256) throw ValidationError("hash mismatch for " + p.string());
}

void check_model_matches(const ModelParams& params, const Manifest& m) {
  if (params.config.image_channels != m.geometry.channels)
    throw ValidationError("checkpoint image channels do not match the manifest geometry");
  if (params.config.bins != m.bins) throw ValidationError("checkpoint bin count does not match the manifest");
}

}  // namespace

void write_manifest(const fs::path& path, const Manifest& m) {
  json j;
  j["format"] = kManifestFormat;
  j["seed"] = m.seed;
  j["scene_config_hash"] = m.scene_config_hash;
  j["scene_config"] = json::parse(m.scene_config);
  j["geometry"] = {{"height", m.geometry.height}, {"width", m.geometry.width}, {"channels", m.geometry.channels}};
  j["exposure"] = {{"t_s", m.exposure.t_start}, {"t_e", m.exposure.t_end}, {"t_exp", m.exposure.t_exp}};
  j["events"] = {{"threshold", m.event_threshold}, {"dt", m.event_dt}, {"bins", m.bins}, {"count", m.event_count}};
  j["blur_samples"] = m.blur_samples;
  j["files"]["rs_blur"] = file_json(m.rs_blur, "RSF1");
  j["files"]["events"] = file_json(m.events, "EVT1");
  json gt = json::array();
  for (const auto& g : m.gt) {
    json e = file_json(g.file, "RSF1");
    e["t"] = g.t;
    gt.push_back(e);
  }
  j["files"]["gt"] = gt;
  write_json(path, j);
}

Manifest load_manifest(const fs::path& path) {
  const json j = read_json(path);
  Manifest m;
  m.directory = path.parent_path();
  try {
    if (j.at("format").get<std::string>() != kManifestFormat)
      throw ValidationError("unsupported manifest format " + j.at("format").dump());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.scene_config = j.at("scene_config").dump();
    m.scene_config_hash = j.at("scene_config_hash").get<std::string>();
    m.geometry = {j.at("geometry").at("height").get<int>(), j.at("geometry").at("width").get<int>(),
                  j.at("geometry").at("channels").get<int>()};
    const json& e = j.at("exposure");
    m.exposure = ExposureSpec::rolling(e.at("t_s").get<double>(), e.at("t_e").get<double>(), e.at("t_exp").get<double>());
    const json& ev = j.at("events");
    m.event_threshold = ev.at("threshold").get<double>();
    m.event_dt = ev.at("dt").get<double>();
    m.bins = ev.at("bins").get<int>();
    m.event_count = ev.at("count").get<std::uint64_t>();
    m.blur_samples = j.at("blur_samples").get<int>();
    const json& files = j.at("files");
    m.rs_blur = {files.at("rs_blur").at("path").get<std::string>(), files.at("rs_blur").at("sha256").get<std::string>()};
    m.events = {files.at("events").at("path").get<std::string>(), files.at("events").at("sha256").get<std::string>()};
    for (const json& g : files.at("gt")) {
      m.gt.push_back({g.at("t").get<double>(), {g.at("path").get<std::string>(), g.at("sha256").get<std::string>()}});
    }
  } catch (const json::exception& ex) {
    throw ValidationError(path.string() + ": " + ex.what());
  }

  if (sha256_hex(m.scene_config) != m.scene_config_hash)
    throw ValidationError("scene_config_hash does not match the embedded scene config");
  check_file(m.directory, m.rs_blur);
  check_file(m.directory, m.events);
  const double lo = m.exposure.t_start;
  const double hi = m.exposure.window_end();
  for (const auto& g : m.gt) {
    check_file(m.directory, g.file);
    if (g.t < lo || g.t > hi) {
      std::ostringstream os;
      os << "GT timestamp " << g.t << " outside exposure window [" << lo << ", " << hi << "]";
      throw ValidationError(os.str());
    }
  }
  return m;
}

TrainingSample load_sample(const Manifest& m) {
  TrainingSample s;
  s.rs_blur = read_rsf(m.directory / m.rs_blur.path);
  if (!(s.rs_blur.geometry == m.geometry)) throw ValidationError("RS blur frame geometry differs from manifest");
  s.rs_blur.exposure = m.exposure;
  EventStream events = read_evt(m.directory / m.events.path);
  if (events.height != m.geometry.height || events.width != m.geometry.width)
    throw ValidationError("event stream geometry differs from manifest");
  events.t0 = m.exposure.t_start;
  events.t1 = m.exposure.window_end();
  events.threshold = m.event_threshold;
  s.counts = voxelize(events, m.bins);
  for (const auto& g : m.gt) {
    Frame f = read_rsf(m.directory / g.file.path);
    if (!(f.geometry == m.geometry)) throw ValidationError("GT frame geometry differs from manifest");
    f.exposure = ExposureSpec::global(g.t);
    s.gt_gs.push_back(std::move(f));
  }
  return s;
}

Manifest run_synth(const SynthOptions& opts) {
  RunConfig cfg = load_config(opts.config);
  if (opts.seed) cfg.seed = *opts.seed;
  if (!cfg.has_scene) throw ValidationError("synth needs a [scene] section in the config");
  ensure_directory(opts.out);

  const SynthesisConfig& sc = cfg.synthesis;
  const SceneModel scene = make_scene(sc.scene);
  const ExposureSpec& e = sc.exposure;
  if (e.pattern != ShutterPattern::rolling) throw ValidationError("input exposure must be rolling");

  Manifest m;
  m.directory = opts.out;
  m.seed = cfg.seed;
  m.scene_config = canonical_scene_json(scene.description());
  m.scene_config_hash = sha256_hex(m.scene_config);
  m.geometry = scene.geometry();
  m.exposure = e;
  m.event_threshold = sc.event_threshold;
  m.event_dt = sc.event_dt;
  m.bins = sc.bins;
  m.blur_samples = sc.blur_samples;

  const Frame blur = render_rs_blur(scene, e.t_start, e.t_end, e.t_exp, sc.blur_samples);
  write_rsf(opts.out / "rs_blur.rsf", blur);
  write_preview(opts.out / (scene.geometry().channels == 1 ? "rs_blur.pgm" : "rs_blur.ppm"), blur);
  m.rs_blur = record_file(opts.out, "rs_blur.rsf");

  const EventStream events = simulate_events(scene, e.t_start, e.window_end(), sc.event_dt, sc.event_threshold);
  write_evt(opts.out / "events.evt", events);
  {
    std::ofstream csv(opts.out / "events.csv");
    if (!csv) throw IoError("cannot write events.csv");
    write_events_csv(csv, events);
  }
  m.events = record_file(opts.out, "events.evt");
  m.event_count = events.events.size();

  const std::vector<double> times = gt_timestamps(e, sc.gt_frames);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Frame f = render_gs_sharp(scene, times[i]);
    const std::string name = indexed_name("gt_", i, ".rsf");
    write_rsf(opts.out / name, f);
    write_preview(opts.out / indexed_name("gt_", i, scene.geometry().channels == 1 ? ".pgm" : ".ppm"), f);
    m.gt.push_back({times[i], record_file(opts.out, name)});
  }
  write_manifest(opts.out / "manifest.json", m);
  return m;
}

TrainSummary run_train(const TrainOptions& opts) {
  RunConfig cfg;
  if (opts.config) cfg = load_config(*opts.config);
  if (opts.iterations) cfg.schedule.iterations = *opts.iterations;

  TrainingSample sample;
  std::optional<std::uint64_t> seed = opts.seed;
  if (opts.manifest) {
    const Manifest m = load_manifest(*opts.manifest);
    if (!seed && !opts.config) seed = m.seed;
    sample = load_sample(m);
    cfg.model.bins = m.bins;
    cfg.model.image_channels = m.geometry.channels;
    cfg.loss.gt_frames = static_cast<int>(m.gt.size());
  } else if (cfg.has_scene) {
    sample = synthesize_sample(cfg.synthesis);
  } else {
    throw ValidationError("train needs --manifest or a config with a [scene] section");
  }
  if (seed) {
    cfg.seed = *seed;
    cfg.schedule.seed = *seed;
    cfg.model.seed = *seed;
  }
  ensure_directory(opts.out);

  const TrainResult result = train(sample, cfg.model, cfg.loss, cfg.schedule);
  TrainSummary summary;
  summary.iterations = cfg.schedule.iterations;
  summary.checkpoint = opts.out / "checkpoint.ckpt";
  write_checkpoint(summary.checkpoint, result.params);
  {
    std::ofstream log(opts.out / "train_log.jsonl");
    write_train_log(log, result.log);
    std::ofstream timing(opts.out / "train_timing.jsonl");
    write_train_timing(timing, result.log);
    if (!log || !timing) throw IoError("failed writing training logs");
  }

  const EvalRecord baseline = evaluate_input_baseline(sample);
  const EvalRecord final_eval = evaluate(result.params, sample, cfg.schedule.iterations);
  summary.baseline_psnr = baseline.mean_psnr;
  summary.final_psnr = final_eval.mean_psnr;
  summary.gain_db = final_eval.mean_psnr - baseline.mean_psnr;
  summary.final_loss = result.log.iterations.empty() ? std::nan("") : result.log.iterations.back().total;

  json j;
  j["seed"] = cfg.schedule.seed;
  j["iterations"] = summary.iterations;
  j["model"] = {{"features", cfg.model.features}, {"hidden", cfg.model.hidden},
                {"blocks", cfg.model.blocks},     {"bins", cfg.model.bins},
                {"image_channels", cfg.model.image_channels}, {"fusion", to_string(cfg.model.fusion)},
                {"embed", to_string(cfg.model.embedding)}, {"parameters", result.params.values.size()}};
  j["lr"] = cfg.schedule.adam.lr;
  j["final_loss"] = summary.final_loss;
  j["baseline_psnr"] = summary.baseline_psnr;
  j["final_psnr"] = summary.final_psnr;
  j["gain_db"] = summary.gain_db;
  j["final_psnr_per_time"] = final_eval.psnr;
  j["checkpoint_sha256"] = sha256_file(summary.checkpoint);
  write_json(opts.out / "train_summary.json", j);
  return summary;
}

std::vector<double> query_times(TimeWindow window, int multiple) {
  if (multiple < 1) throw ValidationError("interpolation multiple must be >= 1");
  return uniform_timestamps(window.t_lo, window.t_hi, multiple);
}

InferSummary run_infer(const InferOptions& opts) {
  const ModelParams params = read_checkpoint(opts.checkpoint);
  const Manifest m = load_manifest(opts.manifest);
  check_model_matches(params, m);
  const TrainingSample sample = load_sample(m);
  const TimeWindow window = exposure_window(m.exposure);

  std::vector<double> times = opts.times.empty() ? query_times(window, opts.multiple) : opts.times;
  for (double t : times) {
    if (!(t >= window.t_lo && t <= window.t_hi)) {
      std::ostringstream os;
      throw DomainError("query timestamp " + shortest(t) + " outside the valid range [" + shortest(window.t_lo) +
                        ", " + shortest(window.t_hi) + "]");
    }
  }
  ensure_directory(opts.out);

  InferenceSession session(params);
  session.encode(sample.rs_blur, sample.counts);
  json index;
  json frames = json::array();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Frame f = session.query(ExposureSpec::global(times[i]));
    const std::string name = indexed_name("gs_", i, ".rsf");
    write_rsf(opts.out / name, f);
    write_preview(opts.out / indexed_name("gs_", i, m.geometry.channels == 1 ? ".pgm" : ".ppm"), f);
    frames.push_back({{"t", times[i]}, {"path", name}, {"sha256", sha256_file(opts.out / name)}});
  }
  InferSummary summary{session.encoder_invocations(), session.decoder_invocations(), times};
  index["seed"] = params.config.seed;
  index["encoder_invocations"] = summary.encoder_invocations;
  index["decoder_invocations"] = summary.decoder_invocations;
  index["window"] = {window.t_lo, window.t_hi};
  index["frames"] = frames;
  write_json(opts.out / "frames.json", index);
  return summary;
}

EvalSummary run_eval(const EvalOptions& opts) {
  const Manifest m = load_manifest(opts.manifest);
  const json index = read_json(opts.predictions / "frames.json");
  std::vector<std::pair<double, fs::path>> preds;
  try {
    for (const json& f : index.at("frames")) preds.emplace_back(f.at("t").get<double>(), f.at("path").get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError("frames.json: " + std::string(e.what()));
  }
  if (preds.empty()) throw ValidationError("prediction index lists no frames");

  std::vector<const GtEntry*> matched;
  std::vector<double> unmatched;
  for (const auto& [t, path] : preds) {
    const GtEntry* best = nullptr;
    for (const GtEntry& g : m.gt) {
      if (std::abs(g.t - t) <= kTimestampMatchTolerance && (!best || std::abs(g.t - t) < std::abs(best->t - t)))
        best = &g;
    }
    if (!best) unmatched.push_back(t);
    matched.push_back(best);
  }
  if (!unmatched.empty()) {
    std::string msg = "predicted timestamps without ground truth:";
    for (double t : unmatched) msg += ' ' + shortest(t);
    throw ValidationError(msg);
  }

  EvalSummary summary;
  json frames = json::array();
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    fs::path ppath = preds[i].second;
    if (ppath.is_relative()) ppath = opts.predictions / ppath;
    const Frame pred = read_rsf(ppath);
    const Frame gt = read_rsf(m.directory / matched[i]->file.path);
    if (!(pred.geometry == gt.geometry)) throw ValidationError("prediction geometry differs from ground truth");
    FrameScore s;
    s.t = matched[i]->t;
    s.psnr = psnr(pred, gt);
    s.ssim = (gt.geometry.height >= 11 && gt.geometry.width >= 11) ? ssim(pred, gt) : std::nan("");
    psnr_sum += s.psnr;
    ssim_sum += s.ssim;
    summary.frames.push_back(s);
    frames.push_back({{"t", s.t}, {"psnr", s.psnr}, {"ssim", s.ssim}});
  }
  summary.mean_psnr = psnr_sum / static_cast<double>(preds.size());
  summary.mean_ssim = ssim_sum / static_cast<double>(preds.size());

  json report;
  report["seed"] = m.seed;
  report["manifest_scene_hash"] = m.scene_config_hash;
  report["frames"] = frames;
  report["mean_psnr"] = summary.mean_psnr;
  report["mean_ssim"] = summary.mean_ssim;
  if (opts.report.has_parent_path()) ensure_directory(opts.report.parent_path());
  write_json(opts.report, report);
  return summary;
}

AffineFit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw ValidationError("affine fit needs matching, non-empty inputs");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  AffineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

BenchReport bench(const ModelParams& params, const Frame& rs_blur, const CountImageStack& counts,
                  std::vector<int> multiples, int repetitions) {
  if (repetitions < 3) throw ValidationError("bench needs at least 3 repetitions");
  if (multiples.empty()) throw ValidationError("bench needs at least one multiple");
  std::sort(multiples.begin(), multiples.end());
  for (std::size_t i = 0; i < multiples.size(); ++i) {
    if (multiples[i] < 1) throw ValidationError("multiples must be >= 1");
    if (i > 0 && multiples[i] == multiples[i - 1]) throw ValidationError("multiples must be distinct");
  }
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
  const TimeWindow window = exposure_window(rs_blur.exposure);
  detail::keep_large_allocations_on_heap();
  {
    InferenceSession warmup(params);
    warmup.encode(rs_blur, counts);
    warmup.query(ExposureSpec::global(window.t_lo));
  }

  // Rounds visit every multiple in turn so clock drift spreads evenly across N.
  const std::size_t k = multiples.size();
  std::vector<std::vector<double>> enc(k), dec(k);
  for (int r = 0; r < repetitions; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      const std::vector<double> times = query_times(window, multiples[i]);
      InferenceSession session(params);
      const auto t0 = Clock::now();
      session.encode(rs_blur, counts);
      const auto t1 = Clock::now();
      for (double t : times) {
        const Frame f = session.query(ExposureSpec::global(t));
        if (f.data.empty()) throw Error("empty frame");
      }
      const auto t2 = Clock::now();
      enc[i].push_back(ms(t1 - t0));
      dec[i].push_back(ms(t2 - t1));
    }
  }
  auto median = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  };
  BenchReport report;
  for (std::size_t i = 0; i < k; ++i) {
    BenchRecord rec;
    rec.multiple = multiples[i];
    rec.encode_ms = median(enc[i]);
    rec.decode_ms = median(dec[i]);
    rec.total_ms = rec.encode_ms + rec.decode_ms;
    rec.per_frame_ms = rec.total_ms / rec.multiple;
    report.records.push_back(rec);
  }
  std::vector<double> xs, ys;
  for (const auto& r : report.records) {
    xs.push_back(r.multiple);
    ys.push_back(r.total_ms);
  }
  report.fit = fit_affine(xs, ys);
  return report;
}

BenchReport run_bench(const BenchOptions& opts) {
  const ModelParams params = read_checkpoint(opts.checkpoint);
  const Manifest m = load_manifest(opts.manifest);
  check_model_matches(params, m);
  const TrainingSample sample = load_sample(m);
  const BenchReport report = bench(params, sample.rs_blur, sample.counts, opts.multiples, opts.repetitions);

  json j;
  json recs = json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"N", r.multiple},
                    {"encode_ms", r.encode_ms},
                    {"decode_ms", r.decode_ms},
                    {"total_ms", r.total_ms},
                    {"per_frame_ms", r.per_frame_ms}});
  }
  j["seed"] = params.config.seed;
  j["repetitions"] = opts.repetitions;
  j["records"] = recs;
  j["fit"] = {{"t_enc_ms", report.fit.intercept}, {"t_dec_ms", report.fit.slope}, {"r_squared", report.fit.r_squared}};
  if (opts.report.has_parent_path()) ensure_directory(opts.report.parent_path());
  write_json(opts.report, j);
  return report;
}

}  // namespace rsinr::app
