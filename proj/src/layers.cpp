#include "layers.hpp"

#include <numbers>
#include <vector>

namespace rsinr::nn {

Mat im2col3x3(const Mat& in, int height, int width) {
  const auto channels = static_cast<int>(in.cols());
  Mat col = Mat::Zero(in.rows(), 9 * channels);
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      const int p = h * width + w;
      for (int ky = 0; ky < 3; ++ky) {
        const int hh = h + ky - 1;
        if (hh < 0 || hh >= height) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const int ww = w + kx - 1;
          if (ww < 0 || ww >= width) continue;
          col.row(p).segment((ky * 3 + kx) * channels, channels) = in.row(hh * width + ww);
        }
      }
    }
  }
  return col;
}

Mat col2im3x3(const Mat& dcol, int height, int width, int channels) {
  Mat out = Mat::Zero(static_cast<Eigen::Index>(height) * width, channels);
  for (int h = 0; h < height; ++h) {
    for (int w = 0; w < width; ++w) {
      const int p = h * width + w;
      for (int ky = 0; ky < 3; ++ky) {
        const int hh = h + ky - 1;
        if (hh < 0 || hh >= height) continue;
        for (int kx = 0; kx < 3; ++kx) {
          const int ww = w + kx - 1;
          if (ww < 0 || ww >= width) continue;
          out.row(hh * width + ww) += dcol.row(p).segment((ky * 3 + kx) * channels, channels);
        }
      }
    }
  }
  return out;
}

void add_column_sums(const Mat& m, double* out) {
  std::vector<double> acc(static_cast<std::size_t>(m.cols()), 0.0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i).data();
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += row[j];
  }
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] += acc[j];
}

Mat affine(const Mat& in, const Slot& slot, std::span<const double> params) {
  Mat out(in.rows(), slot.fan_out);
  out.noalias() = in * slot.weight(params);
  out.rowwise() += slot.bias(params);
  return out;
}

Mat affine_backward(const Mat& in, const Mat& dout, const Slot& slot, std::span<const double> params,
                    std::span<double> grad, bool want_input_grad) {
  slot.weight(grad).noalias() += in.transpose() * dout;
  add_column_sums(dout, slot.bias(grad).data());
  if (!want_input_grad) return {};
  Mat din(dout.rows(), slot.fan_in);
  din.noalias() = dout * slot.weight(params).transpose();
  return din;
}

Mat softplus(const Mat& x) {
  return (x.array().max(0.0) + (1.0 + (-x.array().abs()).exp()).log() - std::numbers::ln2).matrix();
}

Mat softplus_backward(const Mat& activated, const Mat& dy) {
  return (dy.array() * (1.0 - 0.5 * (-activated.array()).exp())).matrix();
}

Mat sigmoid(const Mat& x) { return (1.0 + (-x.array()).exp()).inverse().matrix(); }

Mat sigmoid_backward(const Mat& s, const Mat& dy) {
  return (dy.array() * s.array() * (1.0 - s.array())).matrix();
}

}  // namespace rsinr::nn
