#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rsinr {

struct AdamHyper {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double delta = 1e-8;
};

struct OptimizerState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t step = 0;
  AdamHyper hyper;
};

OptimizerState make_optimizer_state(std::size_t parameters, AdamHyper hyper = {});

/// Bias-corrected Adam update, in place. Throws DivergenceError if any
/// gradient entry is non-finite (nothing is modified in that case).
void adam_step(std::span<double> params, std::span<const double> grads, OptimizerState& state);

}  // namespace rsinr
