#include "rsinr/loss.hpp"

#include <cmath>

#include "rsinr/error.hpp"

namespace rsinr {

namespace {

void require_same(const Frame& a, const Frame& b) {
  if (!(a.geometry == b.geometry)) throw ValidationError("charbonnier: frame geometries differ");
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("charbonnier epsilon must be finite and > 0");
}

}  // namespace

void validate(const LossConfig& cfg) {
  if (!(cfg.lambda_b >= 0.0) || !(cfg.lambda_re >= 0.0)) throw ValidationError("loss weights must be >= 0");
  if (!(cfg.epsilon > 0.0)) throw ValidationError("charbonnier epsilon must be > 0");
  if (cfg.gt_frames < 1 || cfg.rs_samples < 1) throw ValidationError("gt_frames and rs_samples must be >= 1");
}

// hypot and a running mean make identical frames score exactly epsilon.
double charbonnier(const Frame& a, const Frame& b, double epsilon) {
  require_same(a, b);
  require_epsilon(epsilon);
  double mean = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    mean += (std::hypot(a.data[k] - b.data[k], epsilon) - mean) / static_cast<double>(k + 1);
  }
  return mean;
}

std::vector<double> charbonnier_gradient(const Frame& a, const Frame& b, double epsilon) {
  require_same(a, b);
  require_epsilon(epsilon);
  const double n = static_cast<double>(a.data.size());
  std::vector<double> g(a.data.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double d = a.data[k] - b.data[k];
    g[k] = d / std::hypot(d, epsilon) / n;
  }
  return g;
}

LossTerms loss_terms(std::span<const Frame> pred_gs, std::span<const Frame> gt_gs, std::span<const Frame> pred_rs,
                     const Frame& input_rs_blur, const LossConfig& cfg) {
  if (pred_gs.size() != gt_gs.size() || pred_gs.empty())
    throw ValidationError("total_loss: predicted and ground-truth GS lists differ in length or are empty");
  if (pred_rs.empty()) throw ValidationError("total_loss: no RS predictions for the blur term");
  LossTerms t;
  const Frame reconstructed_blur = average_frames(pred_rs);
  t.blur = cfg.lambda_b * charbonnier(reconstructed_blur, input_rs_blur, cfg.epsilon);
  double recon = 0.0;
  for (std::size_t k = 0; k < pred_gs.size(); ++k) recon += charbonnier(pred_gs[k], gt_gs[k], cfg.epsilon);
  t.reconstruction = cfg.lambda_re * (recon / static_cast<double>(pred_gs.size()));
  t.total = t.blur + t.reconstruction;
  return t;
}

double total_loss(std::span<const Frame> pred_gs, std::span<const Frame> gt_gs, std::span<const Frame> pred_rs,
                  const Frame& input_rs_blur, const LossConfig& cfg) {
  return loss_terms(pred_gs, gt_gs, pred_rs, input_rs_blur, cfg).total;
}

std::vector<ExposureSpec> blur_reconstruction_queries(const ExposureSpec& input, int count) {
  if (count < 1) throw ValidationError("blur reconstruction needs at least one RS query");
  if (input.pattern != ShutterPattern::rolling) throw ValidationError("blur reconstruction needs a rolling input");
  std::vector<ExposureSpec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double shift = (i + 0.5) * input.t_exp / count;
    out.push_back(ExposureSpec::rolling(input.t_start + shift, input.t_end + shift, 0.0));
  }
  return out;
}

std::vector<double> uniform_timestamps(double t_lo, double t_hi, int count) {
  if (count < 1) throw ValidationError("need at least one timestamp");
  if (!(t_hi >= t_lo)) throw DomainError("timestamp window has t_hi < t_lo");
  if (count == 1) return {0.5 * (t_lo + t_hi)};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = t_lo + (t_hi - t_lo) * i / (count - 1);
  out.back() = t_hi;
  return out;
}

}  // namespace rsinr
