#include "rsinr/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rsinr/error.hpp"
#include "rsinr/frame_io.hpp"

namespace rsinr {

namespace pt = boost::property_tree;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Reads keys from one section and remembers which ones were used, so that
/// leftovers can be reported as unknown.
class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool present() const { return tree_ != nullptr; }

  template <class T>
  T get(const std::string& key, T fallback) {
    used_.insert(key);
    if (!tree_) return fallback;
    auto node = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!node) return fallback;
    return convert<T>(key, node->data());
  }

  template <class T>
  T require(const std::string& key) {
    used_.insert(key);
    auto node = tree_ ? tree_->get_child_optional(pt::ptree::path_type(key, '\0')) : boost::none;
    if (!node) throw ValidationError("[" + name_ + "] is missing required key '" + key + "'");
    return convert<T>(key, node->data());
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!used_.count(key)) throw ValidationError("unknown key '" + key + "' in [" + name_ + "]");
    }
  }

 private:
  template <class T>
  T convert(const std::string& key, const std::string& text) const {
    if constexpr (std::is_same_v<T, std::string>) {
      return text;
    } else {
      std::istringstream is(text);
      T value{};
      is >> value;
      if (!is || !(is >> std::ws).eof())
        throw ValidationError("[" + name_ + "] " + key + " = '" + text + "' is not a valid number");
      return value;
    }
  }

  const pt::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const char* name) {
  auto c = root.get_child_optional(name);
  return c ? &*c : nullptr;
}

StackParams load_stack(const std::string& spec, const std::filesystem::path& base_dir, Geometry& geometry) {
  StackParams stack;
  std::istringstream is(spec);
  std::string item;
  bool first = true;
  while (std::getline(is, item, ',')) {
    const auto start = item.find_first_not_of(" \t");
    const auto end = item.find_last_not_of(" \t");
    if (start == std::string::npos) continue;
    item = item.substr(start, end - start + 1);
    const auto at = item.rfind('@');
    if (at == std::string::npos) throw ValidationError("sampled-stack entry '" + item + "' must be path@time");
    std::filesystem::path path = item.substr(0, at);
    if (path.is_relative()) path = base_dir / path;
    double t = 0.0;
    std::istringstream ts(item.substr(at + 1));
    if (!(ts >> t)) throw ValidationError("sampled-stack entry '" + item + "' has a bad timestamp");
    const Frame f = read_rsf(path);
    if (first) {
      geometry = f.geometry;
      first = false;
    }
    stack.timestamps.push_back(t);
    stack.frames.emplace_back(f.data.begin(), f.data.end());
  }
  return stack;
}

SceneDescription parse_scene(Section& s, const std::filesystem::path& base_dir) {
  SceneDescription d;
  const SceneKind kind = scene_kind_from_string(s.require<std::string>("kind"));
  d.geometry.height = s.get<int>("height", 0);
  d.geometry.width = s.get<int>("width", 0);
  d.geometry.channels = s.get<int>("channels", 1);
  d.time_domain.t_min = s.get<double>("t_min", 0.0);
  d.time_domain.t_max = s.get<double>("t_max", 1.0);
  switch (kind) {
    case SceneKind::constant:
      d.params = ConstantParams{s.require<double>("value")};
      break;
    case SceneKind::translating_sinusoid: {
      SinusoidParams p;
      p.base = s.require<double>("base");
      p.amplitude = s.require<double>("amplitude");
      p.velocity = s.get<double>("velocity", 0.0);
      p.wavelength = s.require<double>("wavelength");
      d.params = p;
      break;
    }
    case SceneKind::translating_box: {
      BoxParams p;
      p.base = s.require<double>("base");
      p.foreground = s.require<double>("foreground");
      p.x0 = s.require<double>("x0");
      p.y0 = s.get<double>("y0", 0.0);
      p.box_width = s.require<double>("box_width");
      p.box_height = s.get<double>("box_height", static_cast<double>(d.geometry.height));
      p.velocity = s.get<double>("velocity", 0.0);
      p.edge_softness = s.get<double>("edge_softness", 0.0);
      d.params = p;
      break;
    }
    case SceneKind::rotating_bar: {
      BarParams p;
      p.base = s.require<double>("base");
      p.foreground = s.require<double>("foreground");
      p.cx = s.get<double>("cx", (d.geometry.width - 1) / 2.0);
      p.cy = s.get<double>("cy", (d.geometry.height - 1) / 2.0);
      p.half_width = s.require<double>("half_width");
      p.angle0 = s.get<double>("angle0", 0.0);
      p.angular_velocity = s.get<double>("angular_velocity", 0.0);
      p.edge_softness = s.get<double>("edge_softness", 0.0);
      d.params = p;
      break;
    }
    case SceneKind::sampled_stack: {
      Geometry g;
      d.params = load_stack(s.require<std::string>("frames"), base_dir, g);
      if ((d.geometry.height && d.geometry.height != g.height) || (d.geometry.width && d.geometry.width != g.width))
        throw ValidationError("sampled-stack frames do not match the declared geometry");
      d.geometry = g;
      break;
    }
  }
  s.reject_unknown();
  return d;
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::filesystem::path& base_dir) {
  pt::ptree root;
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  static const std::set<std::string> kSections{"scene", "exposure", "events", "synth", "model", "loss", "train"};
  RunConfig cfg;
  for (const auto& [key, node] : root) {
    if (node.empty()) {
      if (key != "seed") throw ValidationError("unknown top-level key '" + key + "'");
      continue;
    }
    if (!kSections.count(key)) throw ValidationError("unknown section [" + key + "]");
  }
  Section top(&root, "top-level");
  cfg.seed = top.get<std::uint64_t>("seed", 0);

  Section scene(child(root, "scene"), "scene");
  Section exposure(child(root, "exposure"), "exposure");
  Section events(child(root, "events"), "events");
  Section synth(child(root, "synth"), "synth");
  Section model(child(root, "model"), "model");
  Section loss(child(root, "loss"), "loss");
  Section train(child(root, "train"), "train");

  SynthesisConfig& sc = cfg.synthesis;
  cfg.has_scene = scene.present();
  if (cfg.has_scene) sc.scene = make_scene(parse_scene(scene, base_dir)).description();
  sc.exposure = ExposureSpec::rolling(exposure.get<double>("t_s", 0.0), exposure.get<double>("t_e", 1.0),
                                      exposure.get<double>("t_exp", 0.25));
  sc.event_threshold = events.get<double>("threshold", 0.2);
  sc.event_dt = events.get<double>("dt", 1e-3);
  sc.bins = events.get<int>("bins", kDefaultTemporalBins);
  sc.blur_samples = synth.get<int>("blur_samples", kDefaultBlurSamples);
  sc.gt_frames = synth.get<int>("gt_frames", 5);

  ModelConfig& mc = cfg.model;
  mc.features = model.get<int>("features", mc.features);
  mc.hidden = model.get<int>("hidden", mc.hidden);
  mc.blocks = model.get<int>("blocks", mc.blocks);
  mc.fusion = fusion_from_string(model.get<std::string>("fusion", "add"));
  mc.embedding = embedding_from_string(model.get<std::string>("embed", "learned"));
  mc.bins = sc.bins;
  mc.image_channels = cfg.has_scene ? sc.scene.geometry.channels : 1;
  mc.seed = cfg.seed;

  LossConfig& lc = cfg.loss;
  lc.lambda_b = loss.get<double>("lambda_b", lc.lambda_b);
  lc.lambda_re = loss.get<double>("lambda_re", lc.lambda_re);
  lc.epsilon = loss.get<double>("epsilon", lc.epsilon);
  lc.rs_samples = loss.get<int>("rs_samples", lc.rs_samples);
  lc.gt_frames = sc.gt_frames;

  Schedule& sch = cfg.schedule;
  sch.iterations = train.get<int>("iterations", sch.iterations);
  sch.eval_period = train.get<int>("eval_period", sch.eval_period);
  sch.adam.lr = train.get<double>("lr", sch.adam.lr);
  sch.adam.beta1 = train.get<double>("beta1", sch.adam.beta1);
  sch.adam.beta2 = train.get<double>("beta2", sch.adam.beta2);
  sch.adam.delta = train.get<double>("delta", sch.adam.delta);
  sch.seed = cfg.seed;

  for (Section* s : {&exposure, &events, &synth, &model, &loss, &train}) s->reject_unknown();
  validate(mc);
  validate(lc);
  if (sc.blur_samples < 1 || sc.gt_frames < 1 || sc.bins < 1) throw ValidationError("[synth]/[events] counts must be >= 1");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  return parse_config(is, path.parent_path());
}

std::string canonical_scene_json(const SceneDescription& scene) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(static_cast<SceneKind>(scene.params.index()));
  j["height"] = scene.geometry.height;
  j["width"] = scene.geometry.width;
  j["channels"] = scene.geometry.channels;
  j["t_min"] = scene.time_domain.t_min;
  j["t_max"] = scene.time_domain.t_max;
  std::visit(Overloaded{
                 [&](const ConstantParams& p) { j["value"] = p.value; },
                 [&](const SinusoidParams& p) {
                   j["base"] = p.base;
                   j["amplitude"] = p.amplitude;
                   j["velocity"] = p.velocity;
                   j["wavelength"] = p.wavelength;
                 },
                 [&](const BoxParams& p) {
                   j["base"] = p.base;
                   j["foreground"] = p.foreground;
                   j["x0"] = p.x0;
                   j["y0"] = p.y0;
                   j["box_width"] = p.box_width;
                   j["box_height"] = p.box_height;
                   j["velocity"] = p.velocity;
                   j["edge_softness"] = p.edge_softness;
                 },
                 [&](const BarParams& p) {
                   j["base"] = p.base;
                   j["foreground"] = p.foreground;
                   j["cx"] = p.cx;
                   j["cy"] = p.cy;
                   j["half_width"] = p.half_width;
                   j["angle0"] = p.angle0;
                   j["angular_velocity"] = p.angular_velocity;
                   j["edge_softness"] = p.edge_softness;
                 },
                 [&](const StackParams& p) {
                   j["timestamps"] = p.timestamps;
                   nlohmann::ordered_json hashes = nlohmann::ordered_json::array();
                   for (const auto& f : p.frames) {
                     hashes.push_back(sha256_hex(std::string_view(reinterpret_cast<const char*>(f.data()),
                                                                  f.size() * sizeof(float))));
                   }
                   j["frame_sha256"] = hashes;
                 },
             },
             scene.params);
  return j.dump();
}

std::string scene_config_hash(const SceneDescription& scene) { return sha256_hex(canonical_scene_json(scene)); }

}  // namespace rsinr
