#include "rsinr/optimizer.hpp"

#include <cmath>

#include "rsinr/error.hpp"

namespace rsinr {

OptimizerState make_optimizer_state(std::size_t parameters, AdamHyper hyper) {
  if (!(hyper.beta1 >= 0.0 && hyper.beta1 < 1.0 && hyper.beta2 >= 0.0 && hyper.beta2 < 1.0))
    throw ValidationError("Adam decay rates must lie in [0, 1)");
  if (!(hyper.lr >= 0.0) || !(hyper.delta > 0.0)) throw ValidationError("Adam lr must be >= 0 and delta > 0");
  return {std::vector<double>(parameters, 0.0), std::vector<double>(parameters, 0.0), 0, hyper};
}

void adam_step(std::span<double> params, std::span<const double> grads, OptimizerState& state) {
  if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size())
    throw ValidationError("adam_step: parameter, gradient and state lengths differ");
  for (double g : grads) {
    if (!std::isfinite(g)) throw DivergenceError("adam_step: non-finite gradient entry");
  }
  const AdamHyper& h = state.hyper;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(h.beta1, t);
  const double correction2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    params[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.delta);
  }
}

}  // namespace rsinr
