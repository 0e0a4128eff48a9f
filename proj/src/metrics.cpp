#include "rsinr/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rsinr/error.hpp"

namespace rsinr {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> gaussian_kernel() {
  std::array<double, kWindow> k{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace

double psnr(const Frame& a, const Frame& b) {
  if (!(a.geometry == b.geometry)) throw ValidationError("psnr: frame geometries differ");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) {
    const double d = a.data[k] - b.data[k];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.data.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const Frame& a, const Frame& b) {
  if (!(a.geometry == b.geometry)) throw ValidationError("ssim: frame geometries differ");
  const Geometry g = a.geometry;
  if (g.height < kWindow || g.width < kWindow)
    throw ValidationError("ssim: frame smaller than the 11x11 window");
  const auto kernel = gaussian_kernel();
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  const int rows = g.height - kWindow + 1;
  const int cols = g.width - kWindow + 1;

  double total = 0.0;
  for (int c = 0; c < g.channels; ++c) {
    double channel_sum = 0.0;
    for (int r = 0; r < rows; ++r) {
      for (int q = 0; q < cols; ++q) {
        double mu_a = 0, mu_b = 0, aa = 0, bb = 0, ab = 0;
        for (int i = 0; i < kWindow; ++i) {
          for (int j = 0; j < kWindow; ++j) {
            const double w = kernel[i] * kernel[j];
            const double x = a.at(r + i, q + j, c);
            const double y = b.at(r + i, q + j, c);
            mu_a += w * x;
            mu_b += w * y;
            aa += w * x * x;
            bb += w * y * y;
            ab += w * x * y;
          }
        }
        const double var_a = aa - mu_a * mu_a;
        const double var_b = bb - mu_b * mu_b;
        const double cov = ab - mu_a * mu_b;
        channel_sum += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                       ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      }
    }
    total += channel_sum / (static_cast<double>(rows) * cols);
  }
  return total / g.channels;
}

}  // namespace rsinr
