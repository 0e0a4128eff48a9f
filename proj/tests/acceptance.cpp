// Acceptance harness: one PASS/FAIL line per criterion. Pass criterion
// numbers as arguments to run a subset; the exit status counts failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "event_oracle.hpp"
#include "formation_oracle.hpp"
#include "grad_check.hpp"
#include "rsinr/app.hpp"
#include "rsinr/config.hpp"
#include "rsinr/loss.hpp"
#include "rsinr/metrics.hpp"
#include "support.hpp"

using namespace rsinr;
using namespace rsinr::test;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// ---- 1: formation identities -------------------------------------------

SceneModel stack_scene(bool moving) {
  SceneDescription d;
  d.geometry = {8, 16, 1};
  StackParams p;
  p.timestamps = {0.0, 0.7, 1.4, 2.0};
  for (int k = 0; k < 4; ++k) {
    std::vector<float> f(128);
    for (int i = 0; i < 128; ++i) f[i] = static_cast<float>(0.1 + 0.8 * ((i * 37 + (moving ? k * 11 : 0)) % 128) / 127.0);
    p.frames.push_back(f);
  }
  d.params = p;
  return make_scene(d);
}

Outcome formation_identities() {
  // One geometry (8 x 16) so that any two scenes can be summed pixel-wise.
  const std::vector<SceneModel> moving{sinusoid_scene(6.0),  box_scene(5.0, 8, 16, 1.0), box_scene(7.0, 8, 16),
                                       bar_scene(1.5, 8, 16), stack_scene(true),         constant_scene(0.3, 8, 16)};
  const std::vector<SceneModel> still{sinusoid_scene(0.0),  box_scene(0.0, 8, 16, 1.0), box_scene(0.0, 8, 16),
                                      bar_scene(0.0, 8, 16), stack_scene(false),        constant_scene(0.3, 8, 16)};
  struct Spec {
    double t_s, t_e, t_exp;
  };
  const std::vector<Spec> specs{{0.0, 1.0, 0.25}, {0.1, 0.9, 0.0}, {0.2, 1.0, 0.5}, {0.0, 1.5, 0.4}};
  double collapse = 0.0, linearity = 0.0, map_err = 0.0;
  bool rows_exact = true;
  for (const Spec& sp : specs) {
    for (const SceneModel& s : still) {
      const Frame ref = render_gs_sharp(s, sp.t_s);
      collapse = std::max({collapse, max_abs_diff(render_gs_blur(s, sp.t_s, sp.t_exp, 9), ref),
                           max_abs_diff(render_rs_sharp(s, sp.t_s, sp.t_e), ref),
                           max_abs_diff(render_rs_blur(s, sp.t_s, sp.t_e, sp.t_exp, 9), ref)});
    }
    for (const SceneModel& s : moving) {
      const Geometry g = s.geometry();
      const Frame rs = render_rs_sharp(s, sp.t_s, sp.t_e);
      const Frame rb = render_rs_blur(s, sp.t_s, sp.t_e, sp.t_exp, 9);
      for (int h = 0; h < g.height; ++h) {
        const double th = row_start_time(sp.t_s, sp.t_e, h, g.height);
        const Frame gs = render_gs_sharp(s, th);
        const Frame gb = render_gs_blur(s, th, sp.t_exp, 9);
        for (int w = 0; w < g.width; ++w) rows_exact = rows_exact && rs.at(h, w) == gs.at(h, w) && rb.at(h, w) == gb.at(h, w);
      }
      const SumField sum(s, moving.front());
      const Frame fs = render_rs_blur(sum, sp.t_s, sp.t_e, sp.t_exp, 16);
      const Frame fa = render_rs_blur(s, sp.t_s, sp.t_e, sp.t_exp, 16);
      const Frame fb = render_rs_blur(moving.front(), sp.t_s, sp.t_e, sp.t_exp, 16);
      for (std::size_t i = 0; i < fs.data.size(); ++i)
        linearity = std::max(linearity, std::abs(fs.data[i] - fa.data[i] - fb.data[i]));
      const TimestampMap m = rs_timestamp_map(sp.t_s, sp.t_e, g.height, g.width);
      for (int h = 0; h < g.height; ++h) {
        for (int w = 0; w < g.width; ++w) {
          const double want = sp.t_s + (sp.t_e - sp.t_s) * h / g.height;
          map_err = std::max(map_err, std::abs(m.at(h, w) - want));
          if (w > 0) rows_exact = rows_exact && m.at(h, w) == m.at(h, 0);
        }
      }
    }
  }
  const bool pass = collapse <= 1e-12 && linearity <= 1e-12 && map_err <= 1e-12 && rows_exact;
  std::ostringstream os;
  os << moving.size() << " scenes x " << specs.size() << " specs; collapse " << collapse << ", linearity " << linearity
     << ", map " << map_err << ", row slices " << (rows_exact ? "exact" : "MISMATCH");
  return {pass, os.str()};
}

// ---- 2: quadrature ---------------------------------------------------------

Outcome quadrature() {
  const double e8 = max_blur_error(8), e16 = max_blur_error(16), e32 = max_blur_error(32);
  const double r1 = e8 / e16, r2 = e16 / e32;
  const bool pass = r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
  return {pass, fmt("error ratios 8->16 %.4f, 16->32 %.4f", r1, r2)};
}

// ---- 3: event oracle -------------------------------------------------------

Outcome event_oracle() {
  const std::vector<SceneModel> scenes{sinusoid_scene(6.0, 3, 10, 7.0), box_scene(5.0, 4, 12, 1.5),
                                       bar_scene(1.5, 8, 8, 1.0)};
  const double dt = 2e-3, C = 0.15;
  bool counts = true;
  double worst_dt = 0.0;
  std::size_t total = 0;
  for (const auto& s : scenes) {
    const EventStream ev = simulate_events(s, 0.0, 1.0, dt, C);
    total += ev.events.size();
    for (int y = 0; y < s.geometry().height; ++y) {
      for (int x = 0; x < s.geometry().width; ++x) {
        const PixelEvents got = pixel_events(ev, x, y);
        const PixelEvents want = dense_pixel_oracle(s, x, y, 0.0, 1.0, dt, C);
        if (got.times.size() != want.times.size() || got.polarities != want.polarities) {
          counts = false;
          continue;
        }
        for (std::size_t k = 0; k < got.times.size(); ++k)
          worst_dt = std::max(worst_dt, std::abs(got.times[k] - want.times[k]));
      }
    }
  }
  std::ostringstream os;
  os << scenes.size() << " scenes, " << total << " events; counts " << (counts ? "exact" : "DIFFER")
     << ", max timestamp gap " << worst_dt << " (dt " << dt << ")";
  return {counts && worst_dt <= dt, os.str()};
}

// ---- 4: gradient check -----------------------------------------------------

Outcome gradient_check() {
  const TrainingSample s = synthesize_sample(box_synthesis(8));
  double worst = 0.0;
  std::ostringstream os;
  for (Fusion f : {Fusion::add, Fusion::multiply, Fusion::concat}) {
    for (Embedding m : {Embedding::learned, Embedding::sinusoid}) {
      const GradCheck g = finite_difference_check(init_params(tiny_model(f, m), 21), {&s, 1}, LossConfig{}, 50, 99);
      worst = std::max(worst, g.max_relative_error);
      os << to_string(f) << '/' << to_string(m) << ' ' << g.max_relative_error << "; ";
    }
  }
  os << "worst " << worst;
  return {worst < 1e-4, os.str()};
}

// ---- 5: loss decomposition -------------------------------------------------

Outcome loss_consistency() {
  const Geometry g{12, 12, 1};
  std::vector<Frame> gt, pred, rs;
  for (int k = 0; k < 5; ++k) {
    gt.push_back(random_frame(g, 10 + k));
    pred.push_back(random_frame(g, 20 + k));
  }
  for (int k = 0; k < 9; ++k) rs.push_back(random_frame(g, 30 + k));
  const Frame input = random_frame(g, 40);
  LossConfig c;
  c.lambda_b = 0.6;
  c.lambda_re = 1.7;
  double recon = 0.0;
  for (int k = 0; k < 5; ++k) recon += charbonnier(pred[k], gt[k], c.epsilon);
  const double expected = c.lambda_b * charbonnier(average_frames(rs), input, c.epsilon) + c.lambda_re * (recon / 5);
  const double got = total_loss(pred, gt, rs, input, c);
  const std::vector<Frame> same(9, input);
  const double floor = total_loss(gt, gt, same, input, c);
  const double floor_want = (c.lambda_b + c.lambda_re) * c.epsilon;
  const bool pass = got == expected && std::abs(floor - floor_want) <= 1e-15 * floor_want;
  return {pass, fmt("decomposition diff %.3g, perfect-prediction loss %.17g vs %.17g", got - expected, floor, floor_want)};
}

// ---- 6 and 9: desk-scale fit ----------------------------------------------

/// Variance across rows of the first sub-pixel crossing of `level`.
double edge_variance(const Frame& f, double level) {
  std::vector<double> xs;
  for (int h = 0; h < f.geometry.height; ++h) {
    for (int w = 0; w + 1 < f.geometry.width; ++w) {
      const double a = f.at(h, w), b = f.at(h, w + 1);
      if (a < level && b >= level) {
        xs.push_back(w + (level - a) / (b - a));
        break;
      }
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::infinity();
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double v = 0.0;
  for (double x : xs) v += (x - mean) * (x - mean);
  return v / xs.size();
}

struct FitRun {
  double baseline = 0, final = 0, input_edge = 0, pred_edge = 0, loss_head = 0, loss_tail = 0;
};

RunConfig box_config() { return load_config(std::string(RSINR_SOURCE_DIR) + "/configs/acceptance_box.ini"); }

FitRun fit(Embedding embedding) {
  RunConfig cfg = box_config();
  cfg.model.embedding = embedding;
  const TrainingSample sample = synthesize_sample(cfg.synthesis);
  const TrainResult r = train(sample, cfg.model, cfg.loss, cfg.schedule);
  FitRun out;
  out.baseline = evaluate_input_baseline(sample).mean_psnr;
  out.final = evaluate(r.params, sample).mean_psnr;
  const double level = 0.5;
  out.input_edge = edge_variance(sample.rs_blur, level);
  InferenceSession session(r.params);
  session.encode(sample.rs_blur, sample.counts);
  for (const Frame& g : sample.gt_gs) out.pred_edge += edge_variance(session.query(ExposureSpec::global(g.exposure.t_start)), level);
  out.pred_edge /= static_cast<double>(sample.gt_gs.size());
  const auto& it = r.log.iterations;
  const std::size_t w = std::min<std::size_t>(100, it.size() / 2);
  for (std::size_t i = 0; i < w; ++i) {
    out.loss_head += it[i].total / w;
    out.loss_tail += it[it.size() - 1 - i].total / w;
  }
  return out;
}

std::optional<FitRun> learned_run;

Outcome desk_fit() {
  learned_run = fit(Embedding::learned);
  const FitRun& r = *learned_run;
  const double gain = r.final - r.baseline;
  const double reduction = r.input_edge / r.pred_edge;
  const bool pass = gain >= 5.0 && reduction >= 10.0 && r.loss_tail < r.loss_head;
  std::ostringstream os;
  os << "PSNR " << r.baseline << " -> " << r.final << " dB (gain " << gain << ", need >= 5); edge variance "
     << r.input_edge << " -> " << r.pred_edge << " (" << reduction << "x, need >= 10); mean loss first/last 100 "
     << r.loss_head << " / " << r.loss_tail;
  return {pass, os.str()};
}

Outcome embedding_ablation() {
  if (!learned_run) learned_run = fit(Embedding::learned);
  const FitRun sin = fit(Embedding::sinusoid);
  const bool pass = std::isfinite(learned_run->final) && std::isfinite(sin.final);
  std::ostringstream os;
  os << "learned " << learned_run->final << " dB, sinusoid " << sin.final << " dB, delta (learned - sinusoid) "
     << learned_run->final - sin.final << " dB";
  return {pass, os.str()};
}

// ---- 7: encode-once scaling ------------------------------------------------

Outcome scaling() {
  const RunConfig cfg = box_config();
  const TrainingSample s = synthesize_sample(cfg.synthesis);
  const ModelParams p = init_params(cfg.model, 1);
  const app::BenchReport r = app::bench(p, s.rs_blur, s.counts, {1, 2, 4, 8, 16, 31}, 15);
  const double first = r.records.front().per_frame_ms, last = r.records.back().per_frame_ms;
  const bool pass = r.fit.r_squared >= 0.99 && last < first;
  return {pass, fmt("t_enc %.3f ms, t_dec %.3f ms, R^2 %.5f; per-frame N=1 %.3f ms", r.fit.intercept, r.fit.slope,
                    r.fit.r_squared, first) +
                    fmt(", N=31 %.3f ms", last)};
}

// ---- 8: CLI determinism ----------------------------------------------------

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + RSINR_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::map<std::string, std::string> hash_tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "train_timing.jsonl") continue;
    out[std::filesystem::relative(e.path(), root).string()] = sha256_file(e.path());
  }
  return out;
}

Outcome cli_determinism() {
  const std::string cfg = std::string(RSINR_SOURCE_DIR) + "/configs/smoke_sinusoid.ini";
  std::vector<std::map<std::string, std::string>> trees;
  for (const char* run : {"a", "b"}) {
    const auto dir = scratch_dir(std::string("acceptance_cli_") + run);
    const std::string d = dir.string();
    if (cli("synth --config \"" + cfg + "\" --seed 5 --out \"" + d + "/data\"") != 0 ||
        cli("train --config \"" + cfg + "\" --manifest \"" + d + "/data/manifest.json\" --iterations 20 --out \"" + d +
            "/train\"") != 0 ||
        cli("infer --checkpoint \"" + d + "/train/checkpoint.ckpt\" --manifest \"" + d +
            "/data/manifest.json\" --multiple 8 --out \"" + d + "/pred\"") != 0)
      return {false, "a CLI command failed"};
    trees.push_back(hash_tree(dir));
  }
  const bool same = trees[0] == trees[1];
  std::ostringstream os;
  os << trees[0].size() << " output files from synth/train/infer, hashes " << (same ? "identical" : "DIFFER");
  return {same && trees[0].size() > 10, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"formation identities", formation_identities},
      {"quadrature convergence", quadrature},
      {"event oracle equivalence", event_oracle},
      {"gradient check", gradient_check},
      {"loss self-consistency", loss_consistency},
      {"desk-scale end-to-end fit", desk_fit},
      {"encode-once scaling", scaling},
      {"CLI determinism", cli_determinism},
      {"embedding ablation", embedding_ablation},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d %-26s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
