#include "rsinr/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "binary_io.hpp"
#include "layers.hpp"
#include "rsinr/error.hpp"

namespace rsinr {

using nn::Mat;
using nn::Slot;

namespace {

constexpr int kDecoderLayers = 5;

struct Layout {
  Slot lift;
  Slot event1;
  Slot event2;
  std::vector<Slot> block_conv1;
  std::vector<Slot> block_conv2;
  Slot embed;  // fan_out == 0 in sinusoid mode
  Slot decoder[kDecoderLayers];
  std::size_t total = 0;
};

int decoder_input_width(const ModelConfig& c) { return c.fusion == Fusion::concat ? 2 * c.features : c.features; }

Layout make_layout(const ModelConfig& c) {
  Layout l;
  std::size_t offset = 0;
  auto take = [&](int fan_in, int fan_out) {
    Slot s{offset, fan_in, fan_out};
    offset += s.size();
    return s;
  };
  l.lift = take(9 * c.image_channels, c.features);
  l.event1 = take(9 * c.bins, c.features);
  l.event2 = take(9 * c.features, c.features);
  for (int k = 0; k < c.blocks; ++k) {
    l.block_conv1.push_back(take(9 * c.features, c.features));
    l.block_conv2.push_back(take(9 * c.features, c.features));
  }
  l.embed = c.embedding == Embedding::learned ? take(1, c.features) : Slot{offset, 0, 0};
  l.decoder[0] = take(decoder_input_width(c), c.hidden);
  for (int k = 1; k < kDecoderLayers - 1; ++k) l.decoder[k] = take(c.hidden, c.hidden);
  l.decoder[kDecoderLayers - 1] = take(c.hidden, c.image_channels);
  l.total = offset;
  return l;
}

void require_params(const ModelParams& p) {
  validate(p.config);
  if (p.values.size() != parameter_count(p.config))
    throw ValidationError("parameter vector length does not match the model config");
}

Mat frame_matrix(const Frame& f) {
  return nn::ConstMatMap(f.data.data(), static_cast<Eigen::Index>(f.geometry.pixels()), f.geometry.channels);
}

Mat grid_matrix(const FeatureGrid& g) {
  return nn::ConstMatMap(g.values.data(), static_cast<Eigen::Index>(g.height) * g.width, g.channels);
}

FeatureGrid to_grid(const Mat& m, int height, int width) {
  FeatureGrid g{height, width, static_cast<int>(m.cols()), std::vector<double>(m.data(), m.data() + m.size())};
  return g;
}

Mat normalized_counts(const CountImageStack& counts) {
  Mat m(static_cast<Eigen::Index>(counts.height) * counts.width, counts.bins);
  std::int32_t peak = 0;
  for (auto c : counts.counts) peak = std::max(peak, c < 0 ? -c : c);
  const double scale = peak == 0 ? 0.0 : 1.0 / peak;
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = counts.counts[static_cast<std::size_t>(k)] * scale;
  return m;
}

struct BlockTrace {
  Mat col1;
  Mat hidden;  // post-softplus
  Mat col2;
};

struct EncoderTrace {
  Mat col_image;
  Mat col_events;
  Mat event_hidden;  // post-softplus
  Mat col_event_hidden;
  Mat event_gate;    // post-sigmoid
  std::vector<BlockTrace> blocks;
};

void check_encoder_inputs(const Frame& rs_blur, const CountImageStack& counts, const ModelConfig& c) {
  const Geometry& g = rs_blur.geometry;
  if (g.channels != c.image_channels) throw ValidationError("input frame channels do not match the model");
  if (counts.height != g.height || counts.width != g.width)
    throw ValidationError("count images and input frame have different geometry");
  if (counts.bins != c.bins) throw ValidationError("count image bins do not match the model");
  if (counts.counts.size() != g.pixels() * counts.bins) throw ValidationError("count image buffer has wrong size");
}

Mat encode_impl(const Frame& rs_blur, const CountImageStack& counts, const ModelParams& params, const Layout& l,
                EncoderTrace* trace) {
  check_encoder_inputs(rs_blur, counts, params.config);
  const int H = rs_blur.geometry.height;
  const int W = rs_blur.geometry.width;
  const std::span<const double> v = params.values;

  Mat col_image = nn::im2col3x3(frame_matrix(rs_blur), H, W);
  Mat x = nn::affine(col_image, l.lift, v);

  Mat col_events = nn::im2col3x3(normalized_counts(counts), H, W);
  Mat event_hidden = nn::softplus(nn::affine(col_events, l.event1, v));
  Mat col_event_hidden = nn::im2col3x3(event_hidden, H, W);
  Mat gate = nn::sigmoid(nn::affine(col_event_hidden, l.event2, v));
  x += gate;

  if (trace) {
    trace->col_image = std::move(col_image);
    trace->col_events = std::move(col_events);
    trace->event_hidden = std::move(event_hidden);
    trace->col_event_hidden = std::move(col_event_hidden);
    trace->event_gate = std::move(gate);
    trace->blocks.clear();
  }
  for (std::size_t k = 0; k < l.block_conv1.size(); ++k) {
    Mat col1 = nn::im2col3x3(x, H, W);
    Mat hidden = nn::softplus(nn::affine(col1, l.block_conv1[k], v));
    Mat col2 = nn::im2col3x3(hidden, H, W);
    x += nn::affine(col2, l.block_conv2[k], v);
    if (trace) trace->blocks.push_back({std::move(col1), std::move(hidden), std::move(col2)});
  }
  return x;
}

void encode_backward(Mat dtheta, const EncoderTrace& trace, const ModelParams& params, const Layout& l, int H, int W,
                     std::span<double> grad) {
  const std::span<const double> v = params.values;
  const int C = params.config.features;
  for (std::size_t k = l.block_conv1.size(); k-- > 0;) {
    const BlockTrace& b = trace.blocks[k];
    Mat dcol2 = nn::affine_backward(b.col2, dtheta, l.block_conv2[k], v, grad);
    Mat dhidden = nn::softplus_backward(b.hidden, nn::col2im3x3(dcol2, H, W, C));
    Mat dcol1 = nn::affine_backward(b.col1, dhidden, l.block_conv1[k], v, grad);
    dtheta += nn::col2im3x3(dcol1, H, W, C);
  }
  nn::affine_backward(trace.col_image, dtheta, l.lift, v, grad, false);
  Mat dgate_pre = nn::sigmoid_backward(trace.event_gate, dtheta);
  Mat dcol_eh = nn::affine_backward(trace.col_event_hidden, dgate_pre, l.event2, v, grad);
  Mat deh = nn::softplus_backward(trace.event_hidden, nn::col2im3x3(dcol_eh, H, W, C));
  nn::affine_backward(trace.col_events, deh, l.event1, v, grad, false);
}

void check_window(TimeWindow window) {
  if (!(window.t_hi > window.t_lo) || !std::isfinite(window.t_lo) || !std::isfinite(window.t_hi))
    throw DomainError("time normalization window is degenerate");
}

/// Normalized timestamps as a column vector (one row per pixel).
Eigen::VectorXd normalized_times(const TimestampMap& map, TimeWindow window) {
  check_window(window);
  const double span = window.t_hi - window.t_lo;
  const double slack = 1e-12 * std::max(1.0, std::abs(window.t_hi) + std::abs(window.t_lo));
  Eigen::VectorXd tau(static_cast<Eigen::Index>(map.values.size()));
  for (std::size_t k = 0; k < map.values.size(); ++k) {
    const double t = map.values[k];
    if (!(t >= window.t_lo - slack && t <= window.t_hi + slack)) {
      std::ostringstream os;
      os << "timestamp " << t << " outside window [" << window.t_lo << ", " << window.t_hi << "]";
      throw DomainError(os.str());
    }
    tau[static_cast<Eigen::Index>(k)] = (t - window.t_lo) / span;
  }
  return tau;
}

Mat embed_impl(const Eigen::VectorXd& tau, const ModelParams& params, const Layout& l) {
  const ModelConfig& c = params.config;
  Mat T(tau.size(), c.features);
  if (c.embedding == Embedding::learned) {
    const std::span<const double> v = params.values;
    T.noalias() = tau * l.embed.weight(v);
    T.rowwise() += l.embed.bias(v);
  } else {
    for (Eigen::Index p = 0; p < tau.size(); ++p) {
      for (int k = 0; k < c.features / 2; ++k) {
        const double arg = std::ldexp(tau[p], k);
        T(p, 2 * k) = std::sin(arg);
        T(p, 2 * k + 1) = std::cos(arg);
      }
    }
  }
  return T;
}

void embed_backward(const Eigen::VectorXd& tau, const Mat& dT, const ModelParams& params, const Layout& l,
                    std::span<double> grad) {
  if (params.config.embedding != Embedding::learned) return;
  nn::add_column_sums(tau.asDiagonal() * dT, l.embed.weight(grad).data());
  nn::add_column_sums(dT, l.embed.bias(grad).data());
}

Mat fuse(const Mat& theta, const Mat& T, Fusion fusion) {
  switch (fusion) {
    case Fusion::add: return theta + T;
    case Fusion::multiply: return theta.cwiseProduct(T);
    case Fusion::concat: {
      Mat z(theta.rows(), theta.cols() + T.cols());
      z << theta, T;
      return z;
    }
  }
  return {};
}

/// Accumulates dtheta and returns dT.
Mat fuse_backward(const Mat& theta, const Mat& T, const Mat& dz, Fusion fusion, Mat& dtheta) {
  switch (fusion) {
    case Fusion::add:
      dtheta += dz;
      return dz;
    case Fusion::multiply:
      dtheta += dz.cwiseProduct(T);
      return dz.cwiseProduct(theta);
    case Fusion::concat:
      dtheta += dz.leftCols(theta.cols());
      return dz.rightCols(T.cols());
  }
  return {};
}

struct DecoderTrace {
  Mat input;
  Mat activations[kDecoderLayers - 1];  // post-softplus
  Mat output;                           // post-sigmoid
};

Mat decode_impl(const Mat& z, const ModelParams& params, const Layout& l, DecoderTrace* trace) {
  const std::span<const double> v = params.values;
  Mat a = z;
  if (trace) trace->input = z;
  for (int k = 0; k < kDecoderLayers - 1; ++k) {
    a = nn::softplus(nn::affine(a, l.decoder[k], v));
    if (trace) trace->activations[k] = a;
  }
  Mat out = nn::sigmoid(nn::affine(a, l.decoder[kDecoderLayers - 1], v));
  if (trace) trace->output = out;
  return out;
}

Mat decode_backward(const DecoderTrace& trace, const Mat& dout, const ModelParams& params, const Layout& l,
                    std::span<double> grad) {
  const std::span<const double> v = params.values;
  Mat d = nn::sigmoid_backward(trace.output, dout);
  d = nn::affine_backward(trace.activations[kDecoderLayers - 2], d, l.decoder[kDecoderLayers - 1], v, grad);
  for (int k = kDecoderLayers - 2; k >= 0; --k) {
    d = nn::softplus_backward(trace.activations[k], d);
    const Mat& in = k == 0 ? trace.input : trace.activations[k - 1];
    d = nn::affine_backward(in, d, l.decoder[k], v, grad);
  }
  return d;
}

Frame to_frame(const Mat& m, Geometry g, ExposureSpec e) {
  Frame f(g, e);
  std::copy(m.data(), m.data() + m.size(), f.data.begin());
  return f;
}

}  // namespace

std::string to_string(Fusion f) {
  switch (f) {
    case Fusion::add: return "add";
    case Fusion::multiply: return "multiply";
    case Fusion::concat: return "concat";
  }
  return "unknown";
}

std::string to_string(Embedding e) { return e == Embedding::learned ? "learned" : "sinusoid"; }

Fusion fusion_from_string(const std::string& name) {
  for (auto f : {Fusion::add, Fusion::multiply, Fusion::concat}) {
    if (to_string(f) == name) return f;
  }
  throw ValidationError("unknown fusion mode '" + name + "'");
}

Embedding embedding_from_string(const std::string& name) {
  if (name == "learned") return Embedding::learned;
  if (name == "sinusoid") return Embedding::sinusoid;
  throw ValidationError("unknown embedding mode '" + name + "'");
}

void validate(const ModelConfig& c) {
  if (c.features < 1 || c.hidden < 1 || c.blocks < 1 || c.bins < 1)
    throw ValidationError("model dimensions C, D, K, M must all be >= 1");
  if (c.image_channels != 1 && c.image_channels != 3) throw ValidationError("image channels must be 1 or 3");
  if (c.embedding == Embedding::sinusoid && c.features % 2 != 0)
    throw ValidationError("sinusoid embedding needs an even feature count");
  if (static_cast<unsigned>(c.fusion) > 2 || static_cast<unsigned>(c.embedding) > 1)
    throw ValidationError("invalid fusion or embedding mode");
}

std::size_t parameter_count(const ModelConfig& config) {
  validate(config);
  return make_layout(config).total;
}

ModelParams init_params(ModelConfig config, std::uint64_t seed) {
  config.seed = seed;
  validate(config);
  const Layout l = make_layout(config);
  ModelParams p{config, std::vector<double>(l.total, 0.0)};
  std::mt19937_64 rng(seed);
  auto fill = [&](const Slot& s) {
    if (s.fan_out == 0) return;
    const double bound = 1.0 / std::sqrt(static_cast<double>(s.fan_in));
    auto w = s.weight(std::span<double>(p.values));
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      w.data()[k] = (2.0 * u - 1.0) * bound;
    }
  };
  fill(l.lift);
  fill(l.event1);
  fill(l.event2);
  for (std::size_t k = 0; k < l.block_conv1.size(); ++k) {
    fill(l.block_conv1[k]);
    fill(l.block_conv2[k]);
  }
  fill(l.embed);
  for (const Slot& s : l.decoder) fill(s);
  return p;
}

std::vector<double> flatten(const ModelParams& params) { return params.values; }

ModelParams unflatten(const ModelConfig& config, std::span<const double> flat) {
  if (flat.size() != parameter_count(config))
    throw ValidationError("flat vector has " + std::to_string(flat.size()) + " entries, model expects " +
                          std::to_string(parameter_count(config)));
  return {config, std::vector<double>(flat.begin(), flat.end())};
}

TimeWindow exposure_window(const ExposureSpec& input) { return {input.t_start, input.window_end()}; }

StrTensor encode(const Frame& rs_blur, const CountImageStack& counts, const ModelParams& params) {
  require_params(params);
  const Layout l = make_layout(params.config);
  return to_grid(encode_impl(rs_blur, counts, params, l, nullptr), rs_blur.geometry.height, rs_blur.geometry.width);
}

TemporalTensor embed_time(const TimestampMap& map, const ModelParams& params, TimeWindow window) {
  require_params(params);
  const Layout l = make_layout(params.config);
  return to_grid(embed_impl(normalized_times(map, window), params, l), map.height, map.width);
}

Frame decode(const StrTensor& theta, const TemporalTensor& temporal, const ModelParams& params) {
  require_params(params);
  const ModelConfig& c = params.config;
  if (theta.channels != c.features || temporal.channels != c.features)
    throw ValidationError("decode: feature channels do not match the model");
  if (theta.height != temporal.height || theta.width != temporal.width)
    throw ValidationError("decode: representation and temporal tensor differ in shape");
  const Layout l = make_layout(c);
  const Mat z = fuse(grid_matrix(theta), grid_matrix(temporal), c.fusion);
  const Geometry g{theta.height, theta.width, c.image_channels};
  return to_frame(decode_impl(z, params, l, nullptr), g, ExposureSpec{});
}

InferenceSession::InferenceSession(ModelParams params) : params_(std::move(params)) { require_params(params_); }

void InferenceSession::encode(const Frame& rs_blur, const CountImageStack& counts) {
  window_ = exposure_window(rs_blur.exposure);
  check_window(window_);
  theta_ = rsinr::encode(rs_blur, counts, params_);
  encoded_ = true;
  ++encoder_calls_;
}

Frame InferenceSession::query(const ExposureSpec& q) {
  if (!encoded_) throw ValidationError("query before encode");
  const double slack = 1e-12 * std::max(1.0, std::abs(window_.t_hi));
  if (q.t_start < window_.t_lo - slack || q.t_end > window_.t_hi + slack || q.t_end < q.t_start) {
    std::ostringstream os;
    os << "query [" << q.t_start << ", " << q.t_end << "] outside exposure window [" << window_.t_lo << ", "
       << window_.t_hi << "]";
    throw DomainError(os.str());
  }
  const TemporalTensor T = embed_time(timestamp_map(q, theta_.height, theta_.width), params_, window_);
  Frame f = decode(theta_, T, params_);
  f.exposure = q;
  ++decoder_calls_;
  return f;
}

ForwardResult forward_full(const Frame& rs_blur, const CountImageStack& counts, const ModelParams& params,
                           std::span<const ExposureSpec> queries) {
  InferenceSession session(params);
  session.encode(rs_blur, counts);
  ForwardResult r;
  r.frames.reserve(queries.size());
  for (const auto& q : queries) r.frames.push_back(session.query(q));
  r.encoder_invocations = session.encoder_invocations();
  r.decoder_invocations = session.decoder_invocations();
  return r;
}

LossEvaluation loss_gradients(const ModelParams& params, std::span<const TrainingSample> batch,
                              const LossConfig& loss) {
  require_params(params);
  validate(loss);
  if (batch.empty()) throw ValidationError("empty training batch");
  const ModelConfig& c = params.config;
  const Layout l = make_layout(c);

  LossEvaluation result;
  result.gradient.assign(l.total, 0.0);
  std::vector<double> sample_grad(l.total);
  const std::span<double> grad = sample_grad;
  // Samples are evaluated unscaled and averaged at the end so that a batch of
  // identical samples reproduces the single-sample result exactly.

  for (const TrainingSample& sample : batch) {
    std::fill(sample_grad.begin(), sample_grad.end(), 0.0);
    const Geometry g = sample.rs_blur.geometry;
    const int H = g.height;
    const int W = g.width;
    const auto P = static_cast<Eigen::Index>(g.pixels());
    if (static_cast<int>(sample.gt_gs.size()) != loss.gt_frames)
      throw ValidationError("sample has " + std::to_string(sample.gt_gs.size()) + " GT frames, loss expects " +
                            std::to_string(loss.gt_frames));
    for (const Frame& gt : sample.gt_gs) {
      if (!(gt.geometry == g)) throw ValidationError("GT frame geometry differs from the input frame");
    }

    EncoderTrace etrace;
    const Mat theta = encode_impl(sample.rs_blur, sample.counts, params, l, &etrace);
    const TimeWindow window = exposure_window(sample.rs_blur.exposure);

    std::vector<ExposureSpec> queries;
    for (const Frame& gt : sample.gt_gs) queries.push_back(ExposureSpec::global(gt.exposure.t_start));
    const std::vector<ExposureSpec> rs_queries = blur_reconstruction_queries(sample.rs_blur.exposure, loss.rs_samples);
    queries.insert(queries.end(), rs_queries.begin(), rs_queries.end());
    const auto Q = static_cast<Eigen::Index>(queries.size());

    std::vector<Eigen::VectorXd> taus;
    std::vector<Mat> temporals;
    const int zin = decoder_input_width(c);
    Mat z(Q * P, zin);
    for (Eigen::Index q = 0; q < Q; ++q) {
      taus.push_back(normalized_times(timestamp_map(queries[q], H, W), window));
      temporals.push_back(embed_impl(taus.back(), params, l));
      z.middleRows(q * P, P) = fuse(theta, temporals.back(), c.fusion);
    }

    DecoderTrace dtrace;
    const Mat out = decode_impl(z, params, l, &dtrace);

    std::vector<Frame> pred_gs;
    std::vector<Frame> pred_rs;
    for (Eigen::Index q = 0; q < Q; ++q) {
      Frame f = to_frame(out.middleRows(q * P, P), g, queries[q]);
      if (q < loss.gt_frames) {
        pred_gs.push_back(std::move(f));
      } else {
        pred_rs.push_back(std::move(f));
      }
    }
    const LossTerms terms = loss_terms(pred_gs, sample.gt_gs, pred_rs, sample.rs_blur, loss);
    if (!std::isfinite(terms.total)) throw DivergenceError("non-finite loss");
    result.total += terms.total;
    result.blur_term += terms.blur;
    result.reconstruction_term += terms.reconstruction;

    Mat dout(Q * P, c.image_channels);
    auto write_grad = [&](Eigen::Index q, const std::vector<double>& gvec, double scale) {
      nn::ConstMatMap gm(gvec.data(), P, c.image_channels);
      dout.middleRows(q * P, P) = gm * scale;
    };
    for (int k = 0; k < loss.gt_frames; ++k) {
      write_grad(k, charbonnier_gradient(pred_gs[k], sample.gt_gs[k], loss.epsilon),
                 loss.lambda_re / loss.gt_frames);
    }
    const Frame blur_hat = average_frames(pred_rs);
    const std::vector<double> dblur = charbonnier_gradient(blur_hat, sample.rs_blur, loss.epsilon);
    for (int i = 0; i < loss.rs_samples; ++i) {
      write_grad(loss.gt_frames + i, dblur, loss.lambda_b / loss.rs_samples);
    }

    const Mat dz = decode_backward(dtrace, dout, params, l, grad);
    Mat dtheta = Mat::Zero(P, c.features);
    for (Eigen::Index q = 0; q < Q; ++q) {
      const Mat dT = fuse_backward(theta, temporals[q], dz.middleRows(q * P, P), c.fusion, dtheta);
      embed_backward(taus[q], dT, params, l, grad);
    }
    encode_backward(std::move(dtheta), etrace, params, l, H, W, grad);
    for (std::size_t k = 0; k < sample_grad.size(); ++k) result.gradient[k] += sample_grad[k];
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  result.total *= inv;
  result.blur_term *= inv;
  result.reconstruction_term *= inv;
  for (double& gv : result.gradient) gv *= inv;
  for (double gv : result.gradient) {
    if (!std::isfinite(gv)) throw DivergenceError("non-finite gradient");
  }
  return result;
}

namespace {
constexpr char kCheckpointMagic[8] = {'C', 'K', 'P', 'T', '1', '\0', '\0', '\0'};
}

void write_checkpoint(std::ostream& os, const ModelParams& params) {
  require_params(params);
  const ModelConfig& c = params.config;
  os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  for (int v : {c.features, c.hidden, c.blocks, c.bins, c.image_channels})
    detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(v));
  detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(c.fusion));
  detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(c.embedding));
  detail::put<std::uint16_t>(os, 0);
  detail::put<std::uint64_t>(os, c.seed);
  detail::put<std::uint64_t>(os, params.values.size());
  for (double v : params.values) detail::put<double>(os, v);
  if (!os) throw IoError("failed writing checkpoint");
}

void write_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_checkpoint(os, params);
}

ModelParams read_checkpoint(std::istream& is) {
  detail::expect_magic(is, kCheckpointMagic, sizeof(kCheckpointMagic), "CKPT1 checkpoint");
  ModelConfig c;
  c.features = static_cast<int>(detail::get<std::uint32_t>(is, "CKPT1 config"));
  c.hidden = static_cast<int>(detail::get<std::uint32_t>(is, "CKPT1 config"));
  c.blocks = static_cast<int>(detail::get<std::uint32_t>(is, "CKPT1 config"));
  c.bins = static_cast<int>(detail::get<std::uint32_t>(is, "CKPT1 config"));
  c.image_channels = static_cast<int>(detail::get<std::uint32_t>(is, "CKPT1 config"));
  c.fusion = static_cast<Fusion>(detail::get<std::uint8_t>(is, "CKPT1 config"));
  c.embedding = static_cast<Embedding>(detail::get<std::uint8_t>(is, "CKPT1 config"));
  detail::get<std::uint16_t>(is, "CKPT1 config");
  c.seed = detail::get<std::uint64_t>(is, "CKPT1 config");
  validate(c);
  const auto count = detail::get<std::uint64_t>(is, "CKPT1 config");
  if (count != parameter_count(c)) throw IoError("CKPT1 parameter count does not match its config");
  ModelParams p{c, std::vector<double>(count)};
  for (double& v : p.values) v = detail::get<double>(is, "CKPT1 parameters");
  return p;
}

ModelParams read_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_checkpoint(is);
}

}  // namespace rsinr
