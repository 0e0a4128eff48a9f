#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "rsinr/app.hpp"
#include "rsinr/error.hpp"
#include "rsinr/frame_io.hpp"
#include "rsinr/metrics.hpp"
#include "support.hpp"

using namespace rsinr;
using namespace rsinr::app;
using namespace rsinr::test;
using json = nlohmann::ordered_json;

namespace {

const char* kSmallConfig = R"(seed = 11
[scene]
kind = translating-box
height = 12
width = 12
t_max = 1.25
base = 0.2
foreground = 0.8
x0 = 2
box_width = 4
box_height = 12
velocity = 4
edge_softness = 1
[events]
dt = 0.002
[synth]
blur_samples = 16
[model]
features = 4
hidden = 8
blocks = 1
[train]
iterations = 3
lr = 0.001
)";

std::filesystem::path write_config(const std::filesystem::path& dir, const std::string& text) {
  std::ofstream(dir / "run.ini") << text;
  return dir / "run.ini";
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

json read_json_file(const std::filesystem::path& p) { return json::parse(read_file(p)); }

/// Synthesizes the small dataset once and returns its manifest path.
std::filesystem::path small_dataset() {
  static const std::filesystem::path manifest = [] {
    const auto dir = scratch_dir("app_data");
    run_synth({write_config(dir, kSmallConfig), dir / "data", std::nullopt});
    return dir / "data" / "manifest.json";
  }();
  return manifest;
}

std::filesystem::path small_checkpoint() {
  static const std::filesystem::path ckpt = [] {
    const auto dir = scratch_dir("app_ckpt");
    TrainOptions o;
    o.manifest = small_dataset();
    o.out = dir;
    o.iterations = 3;
    return run_train(o).checkpoint;
  }();
  return ckpt;
}

}  // namespace

TEST_SUITE("app") {

TEST_CASE("synth writes a complete, self-consistent dataset") {
  const auto manifest_path = small_dataset();
  const auto dir = manifest_path.parent_path();
  for (const char* f : {"rs_blur.rsf", "rs_blur.pgm", "events.evt", "events.csv", "gt_000.rsf", "gt_004.rsf",
                        "gt_004.pgm"})
    CHECK(std::filesystem::exists(dir / f));
  const Manifest m = load_manifest(manifest_path);
  CHECK(m.seed == 11);
  CHECK(m.geometry == Geometry{12, 12, 1});
  CHECK(m.exposure == ExposureSpec::rolling(0.0, 1.0, 0.25));
  CHECK(m.bins == 8);
  REQUIRE(m.gt.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(m.gt[i].t == doctest::Approx(1.25 * i / 4));
  CHECK(m.event_count == read_evt(dir / "events.evt").events.size());
  CHECK(m.event_count > 0);

  const json j = read_json_file(manifest_path);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"format", "seed", "scene_config_hash", "scene_config", "geometry", "exposure",
                                         "events", "blur_samples", "files"});
  CHECK(j["files"]["rs_blur"]["format"] == "RSF1");
  CHECK(j["files"]["events"]["format"] == "EVT1");
}

TEST_CASE("synth of a constant scene") {
  const auto dir = scratch_dir("app_const");
  const auto cfg = write_config(dir, "[scene]\nkind = constant\nheight = 6\nwidth = 5\nt_max = 1.25\nvalue = 0.4\n");
  const Manifest m = run_synth({cfg, dir / "out", std::nullopt});
  CHECK(m.event_count == 0);
  const Frame f = read_rsf(dir / "out" / "rs_blur.rsf");
  CHECK(f.data == std::vector<double>(30, static_cast<float>(0.4)));
}

TEST_CASE("synth is byte-deterministic") {
  const auto a = scratch_dir("app_det_a"), b = scratch_dir("app_det_b");
  run_synth({write_config(a, kSmallConfig), a / "out", 5});
  run_synth({write_config(b, kSmallConfig), b / "out", 5});
  for (const auto& entry : std::filesystem::directory_iterator(a / "out")) {
    const auto name = entry.path().filename();
    CHECK(sha256_file(entry.path()) == sha256_file(b / "out" / name));
  }
  CHECK(load_manifest(a / "out" / "manifest.json").seed == 5);
}

TEST_CASE("synth errors") {
  const auto dir = scratch_dir("app_synth_err");
  CHECK_THROWS_AS(run_synth({write_config(dir, "[model]\nfeatures = 4\n"), dir / "out", std::nullopt}),
                  ValidationError);
  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(run_synth({write_config(dir, kSmallConfig), dir / "blocker" / "out", std::nullopt}), IoError);
}

TEST_CASE("manifest integrity checks") {
  const auto src = small_dataset().parent_path();
  const auto dir = scratch_dir("app_tamper");
  std::filesystem::copy(src, dir / "d");
  CHECK_NOTHROW(load_manifest(dir / "d" / "manifest.json"));
  SUBCASE("modified file") {
    std::ofstream(dir / "d" / "gt_002.rsf", std::ios::binary | std::ios::app) << "x";
    CHECK_THROWS_AS(load_manifest(dir / "d" / "manifest.json"), ValidationError);
  }
  SUBCASE("missing file") {
    std::filesystem::remove(dir / "d" / "events.evt");
    CHECK_THROWS_AS(load_manifest(dir / "d" / "manifest.json"), ValidationError);
  }
  SUBCASE("scene hash mismatch") {
    json j = read_json_file(dir / "d" / "manifest.json");
    j["scene_config"]["velocity"] = 5.0;
    std::ofstream(dir / "d" / "manifest.json") << j.dump(2);
    CHECK_THROWS_AS(load_manifest(dir / "d" / "manifest.json"), ValidationError);
  }
  SUBCASE("timestamp outside the window") {
    json j = read_json_file(dir / "d" / "manifest.json");
    j["files"]["gt"][4]["t"] = 1.5;
    std::ofstream(dir / "d" / "manifest.json") << j.dump(2);
    CHECK_THROWS_AS(load_manifest(dir / "d" / "manifest.json"), ValidationError);
  }
}

TEST_CASE("train writes checkpoint, logs and summary") {
  const auto ckpt = small_checkpoint();
  const auto dir = ckpt.parent_path();
  CHECK(read_checkpoint(ckpt).config.seed == 11);
  for (const char* f : {"train_log.jsonl", "train_timing.jsonl", "train_summary.json"})
    CHECK(std::filesystem::exists(dir / f));
  const json s = read_json_file(dir / "train_summary.json");
  CHECK(s["iterations"] == 3);
  CHECK(s["seed"] == 11);
  CHECK(s["checkpoint_sha256"] == sha256_file(ckpt));
}

TEST_CASE("zero-iteration train writes the initialization") {
  const auto dir = scratch_dir("app_train0");
  TrainOptions o;
  o.manifest = small_dataset();
  o.out = dir;
  o.iterations = 0;
  o.seed = 9;
  const TrainSummary s = run_train(o);
  const ModelParams p = read_checkpoint(s.checkpoint);
  CHECK(p == init_params(p.config, 9));
}

TEST_CASE("seed-fixed train gives identical bytes") {
  const auto a = scratch_dir("app_train_a"), b = scratch_dir("app_train_b");
  TrainOptions o;
  o.manifest = small_dataset();
  o.out = a;
  o.iterations = 3;
  run_train(o);
  o.out = b;
  run_train(o);
  for (const char* f : {"checkpoint.ckpt", "train_log.jsonl", "train_summary.json"})
    CHECK(read_file(a / f) == read_file(b / f));
}

TEST_CASE("train from a config synthesizes its own sample") {
  const auto dir = scratch_dir("app_train_cfg");
  TrainOptions o;
  o.config = write_config(dir, kSmallConfig);
  o.out = dir / "out";
  o.iterations = 1;
  const TrainSummary s = run_train(o);
  CHECK(s.iterations == 1);
  CHECK(std::isfinite(s.final_loss));
  CHECK_THROWS_AS(run_train({std::nullopt, std::nullopt, dir / "x", std::nullopt, std::nullopt}), ValidationError);
}

TEST_CASE("infer") {
  const auto ckpt = small_checkpoint();
  SUBCASE("one frame at the window midpoint") {
    const auto dir = scratch_dir("app_infer1");
    const InferSummary s = run_infer({ckpt, small_dataset(), dir, 1, {}});
    REQUIRE(s.times.size() == 1);
    CHECK(s.times[0] == 0.625);
    const json j = read_json_file(dir / "frames.json");
    CHECK(j["frames"][0]["t"] == 0.625);
    CHECK(std::filesystem::exists(dir / "gs_000.rsf"));
  }
  SUBCASE("31 frames encode once") {
    const auto dir = scratch_dir("app_infer31");
    const InferSummary s = run_infer({ckpt, small_dataset(), dir, 31, {}});
    CHECK(s.encoder_invocations == 1);
    CHECK(s.decoder_invocations == 31);
    CHECK(s.times.front() == 0.0);
    CHECK(s.times.back() == 1.25);
    CHECK(read_json_file(dir / "frames.json")["encoder_invocations"] == 1);
  }
  SUBCASE("explicit window boundaries are valid") {
    const auto dir = scratch_dir("app_infer_t");
    const InferSummary s = run_infer({ckpt, small_dataset(), dir, 0, {0.0, 1.25}});
    CHECK(s.times == std::vector<double>{0.0, 1.25});
  }
  SUBCASE("timestamps outside the window are rejected with the range") {
    const auto dir = scratch_dir("app_infer_bad");
    try {
      run_infer({ckpt, small_dataset(), dir, 0, {0.5, 1.3}});
      FAIL("expected rejection");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("[0, 1.25]") != std::string::npos);
    }
  }
  SUBCASE("checkpoint must match the manifest") {
    const auto dir = scratch_dir("app_infer_mismatch");
    ModelConfig c = read_checkpoint(ckpt).config;
    c.bins = 4;
    write_checkpoint(dir / "other.ckpt", init_params(c, 1));
    CHECK_THROWS_AS(run_infer({dir / "other.ckpt", small_dataset(), dir / "o", 3, {}}), ValidationError);
  }
  SUBCASE("infer output is deterministic") {
    const auto a = scratch_dir("app_infer_da"), b = scratch_dir("app_infer_db");
    run_infer({ckpt, small_dataset(), a, 4, {}});
    run_infer({ckpt, small_dataset(), b, 4, {}});
    for (const char* f : {"frames.json", "gs_000.rsf", "gs_003.rsf"}) CHECK(read_file(a / f) == read_file(b / f));
  }
}

TEST_CASE("eval") {
  const auto manifest = small_dataset();
  const auto data = manifest.parent_path();
  const Manifest m = load_manifest(manifest);
  auto write_index = [&](const std::filesystem::path& dir, const std::vector<std::pair<double, std::string>>& f) {
    json j;
    j["frames"] = json::array();
    for (const auto& [t, p] : f) j["frames"].push_back({{"t", t}, {"path", p}});
    std::ofstream(dir / "frames.json") << j.dump();
  };
  SUBCASE("ground truth against itself is perfect") {
    const auto dir = scratch_dir("app_eval_gt");
    std::vector<std::pair<double, std::string>> f;
    for (const auto& g : m.gt) f.emplace_back(g.t, (data / g.file.path).string());
    write_index(dir, f);
    const EvalSummary s = run_eval({dir, manifest, dir / "report.json"});
    CHECK(s.mean_psnr == kPsnrCap);
    CHECK(s.mean_ssim == doctest::Approx(1.0));
    const json r = read_json_file(dir / "report.json");
    CHECK(r["frames"].size() == 5);
    CHECK(r["mean_psnr"] == kPsnrCap);
  }
  SUBCASE("replicated input reproduces the baseline") {
    const auto dir = scratch_dir("app_eval_base");
    std::vector<std::pair<double, std::string>> f;
    for (const auto& g : m.gt) f.emplace_back(g.t, (data / m.rs_blur.path).string());
    write_index(dir, f);
    const EvalSummary s = run_eval({dir, manifest, dir / "report.json"});
    const EvalRecord base = evaluate_input_baseline(load_sample(m));
    CHECK(s.mean_psnr == doctest::Approx(base.mean_psnr).epsilon(1e-12));
    CHECK(s.mean_ssim == doctest::Approx(base.mean_ssim).epsilon(1e-12));
  }
  SUBCASE("unmatched timestamps are listed") {
    const auto dir = scratch_dir("app_eval_bad");
    write_index(dir, {{0.0, (data / m.gt[0].file.path).string()},
                      {0.7, (data / m.gt[1].file.path).string()},
                      {0.3125 + 1e-6, (data / m.gt[1].file.path).string()}});
    try {
      run_eval({dir, manifest, dir / "report.json"});
      FAIL("expected an error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("0.7") != std::string::npos);
      CHECK(msg.find("0.312501") != std::string::npos);
    }
  }
  SUBCASE("infer output evaluates directly") {
    const auto dir = scratch_dir("app_eval_infer");
    run_infer({small_checkpoint(), manifest, dir, 5, {}});
    const EvalSummary s = run_eval({dir, manifest, dir / "report.json"});
    CHECK(s.frames.size() == 5);
    const EvalRecord e = evaluate(read_checkpoint(small_checkpoint()), load_sample(m));
    CHECK(s.mean_psnr == doctest::Approx(e.mean_psnr).epsilon(1e-6));
  }
}

TEST_CASE("affine fit") {
  const AffineFit f = fit_affine({1, 2, 4, 8}, {3.5, 5.5, 9.5, 17.5});
  CHECK(f.intercept == doctest::Approx(1.5));
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_affine({}, {}), ValidationError);
}

TEST_CASE("bench") {
  const TrainingSample s = synthesize_sample(box_synthesis(32));
  const ModelParams p = init_params(ModelConfig{}, 1);
  SUBCASE("single multiple is additive") {
    const BenchReport r = bench(p, s.rs_blur, s.counts, {1}, 3);
    REQUIRE(r.records.size() == 1);
    const BenchRecord& b = r.records[0];
    CHECK(b.total_ms == doctest::Approx(b.encode_ms + b.decode_ms).epsilon(1e-3));
    CHECK(b.encode_ms > 0);
    CHECK(b.decode_ms > 0);
  }
  SUBCASE("scaling over multiples") {
    const BenchReport r = bench(p, s.rs_blur, s.counts, {16, 1, 4, 2, 8}, 3);
    REQUIRE(r.records.size() == 5);
    for (std::size_t i = 1; i < r.records.size(); ++i) {
      CHECK(r.records[i].multiple > r.records[i - 1].multiple);
      CHECK(r.records[i].total_ms >= r.records[i - 1].total_ms);
    }
    CHECK(r.fit.slope > 0);
    CHECK(r.fit.r_squared >= 0.99);
    CHECK(r.records.back().per_frame_ms < r.records.front().per_frame_ms);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(bench(p, s.rs_blur, s.counts, {1, 2}, 2), ValidationError);
    CHECK_THROWS_AS(bench(p, s.rs_blur, s.counts, {0, 2}, 3), ValidationError);
    CHECK_THROWS_AS(bench(p, s.rs_blur, s.counts, {2, 2}, 3), ValidationError);
    CHECK_THROWS_AS(bench(p, s.rs_blur, s.counts, {}, 3), ValidationError);
  }
}

TEST_CASE("bench report file") {
  const auto dir = scratch_dir("app_bench");
  BenchOptions o;
  o.checkpoint = small_checkpoint();
  o.manifest = small_dataset();
  o.report = dir / "bench.json";
  o.multiples = {1, 2, 4};
  o.repetitions = 3;
  run_bench(o);
  const json j = read_json_file(o.report);
  CHECK(j["records"].size() == 3);
  CHECK(j["records"][2]["N"] == 4);
  CHECK(j["fit"].contains("r_squared"));
}

}
