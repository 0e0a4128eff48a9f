#pragma once

#include <Eigen/Core>
#include <span>

namespace rsinr::nn {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<Mat>;
using ConstMatMap = Eigen::Map<const Mat>;
using RowMap = Eigen::Map<Eigen::RowVectorXd>;
using ConstRowMap = Eigen::Map<const Eigen::RowVectorXd>;

/// A fully connected layer stored as weight (fan_in x fan_out, row-major)
/// followed by bias (fan_out) inside a flat parameter vector.
struct Slot {
  std::size_t offset = 0;
  int fan_in = 0;
  int fan_out = 0;

  std::size_t size() const { return static_cast<std::size_t>(fan_in) * fan_out + fan_out; }
  ConstMatMap weight(std::span<const double> v) const { return {v.data() + offset, fan_in, fan_out}; }
  ConstRowMap bias(std::span<const double> v) const {
    return {v.data() + offset + static_cast<std::size_t>(fan_in) * fan_out, fan_out};
  }
  MatMap weight(std::span<double> v) const { return {v.data() + offset, fan_in, fan_out}; }
  RowMap bias(std::span<double> v) const {
    return {v.data() + offset + static_cast<std::size_t>(fan_in) * fan_out, fan_out};
  }
};

/// Rows are pixels (row-major over H x W); columns are (ky, kx, channel) for
/// a 3x3 neighborhood with zero padding.
Mat im2col3x3(const Mat& in, int height, int width);

/// Adjoint of im2col3x3: scatters column gradients back onto pixels.
Mat col2im3x3(const Mat& dcol, int height, int width, int channels);

/// out = in * W + b
/// out[j] += sum_i m(i, j), summed in row order. Eigen's vectorized reduction
/// peels by address alignment, which would make gradients allocation-dependent.
void add_column_sums(const Mat& m, double* out);

Mat affine(const Mat& in, const Slot& slot, std::span<const double> params);

/// Accumulates dW += in^T * dout, db += colsum(dout) and returns dout * W^T
/// (skipped when `want_input_grad` is false).
Mat affine_backward(const Mat& in, const Mat& dout, const Slot& slot, std::span<const double> params,
                    std::span<double> grad, bool want_input_grad = true);

/// Shifted softplus log(1 + e^x) - log 2: smooth, zero at zero.
Mat softplus(const Mat& x);
/// dx = dy * sigmoid(x), recovered from the output y as 1 - e^-y / 2.
Mat softplus_backward(const Mat& activated, const Mat& dy);

Mat sigmoid(const Mat& x);
/// dx = dy * s * (1 - s), with s the sigmoid output.
Mat sigmoid_backward(const Mat& s, const Mat& dy);

}  // namespace rsinr::nn
