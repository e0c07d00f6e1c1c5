#include "yieldpaint/layers.hpp"

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace yieldpaint {

namespace {
using MapMat = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using CMapMat =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
}  // namespace

void Layer::require_cache(const char* who) const {
    if (!cache_valid_)
        throw std::runtime_error(std::string(who) +
                                 ": backward without a pending forward cache");
}

// ---------------------------------------------------------------- Dense

Dense::Dense(std::size_t in, std::size_t out)
    : weights(out * in, 0.0),
      bias(out, 0.0),
      in_(in),
      out_(out),
      dweights_(out * in, 0.0),
      dbias_(out, 0.0) {}

Tensor Dense::forward(const Tensor& x, Mode) {
    if (x.rank() != 2 || x.dim(1) != in_)
        throw std::invalid_argument("Dense: expected [N," + std::to_string(in_) + "], got " +
                                    x.shape_string());
    const std::size_t n = x.dim(0);
    Tensor y({n, out_});
    CMapMat xm(x.data.data(), n, in_);
    CMapMat wm(weights.data(), out_, in_);
    MapMat ym(y.data.data(), n, out_);
    ym.noalias() = xm * wm.transpose();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t o = 0; o < out_; ++o) y.at2(i, o) += bias[o];
    cached_input_ = x;
    cache_valid_ = true;
    return y;
}

Tensor Dense::backward(const Tensor& dy) {
    require_cache("Dense");
    cache_valid_ = false;
    const std::size_t n = cached_input_.dim(0);
    if (dy.rank() != 2 || dy.dim(0) != n || dy.dim(1) != out_)
        throw std::invalid_argument("Dense: gradient shape mismatch " + dy.shape_string());

    CMapMat xm(cached_input_.data.data(), n, in_);
    CMapMat dym(dy.data.data(), n, out_);
    MapMat dwm(dweights_.data(), out_, in_);
    dwm.noalias() += dym.transpose() * xm;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t o = 0; o < out_; ++o) dbias_[o] += dy.at2(i, o);

    Tensor dx({n, in_});
    CMapMat wm(weights.data(), out_, in_);
    MapMat dxm(dx.data.data(), n, in_);
    dxm.noalias() = dym * wm;
    return dx;
}

std::vector<ParamView> Dense::params() {
    return {{"weights", &weights, &dweights_}, {"bias", &bias, &dbias_}};
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::size_t in_channels, std::size_t out_channels)
    : weights(out_channels * in_channels * 9, 0.0),
      bias(out_channels, 0.0),
      in_c_(in_channels),
      out_c_(out_channels),
      dweights_(weights.size(), 0.0),
      dbias_(out_channels, 0.0) {}

namespace {

// columns indexed by (n, h, w); rows by (c, ki, kj); zero padding of 1
Eigen::MatrixXd im2col(const Tensor& x) {
    const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    Eigen::MatrixXd col = Eigen::MatrixXd::Zero(c * 9, n * h * w);
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t ic = 0; ic < c; ++ic)
            for (std::size_t ih = 0; ih < h; ++ih)
                for (std::size_t iw = 0; iw < w; ++iw) {
                    const double v = x.at4(in, ic, ih, iw);
                    // scatter into every window that covers (ih, iw)
                    for (int di = -1; di <= 1; ++di) {
                        const long oh = static_cast<long>(ih) + di;
                        if (oh < 0 || oh >= static_cast<long>(h)) continue;
                        for (int dj = -1; dj <= 1; ++dj) {
                            const long ow = static_cast<long>(iw) + dj;
                            if (ow < 0 || ow >= static_cast<long>(w)) continue;
                            const std::size_t row = (ic * 3 + (1 - di)) * 3 + (1 - dj);
                            col(row, (in * h + oh) * w + ow) = v;
                        }
                    }
                }
    return col;
}

}  // namespace

Tensor Conv2d::forward(const Tensor& x, Mode) {
    if (x.rank() != 4 || x.dim(1) != in_c_)
        throw std::invalid_argument("Conv2d: expected [N," + std::to_string(in_c_) +
                                    ",H,W], got " + x.shape_string());
    const std::size_t n = x.dim(0), h = x.dim(2), w = x.dim(3);
    const Eigen::MatrixXd col = im2col(x);
    CMapMat wm(weights.data(), out_c_, in_c_ * 9);
    Eigen::MatrixXd out_mat = wm * col;  // outC x (N*H*W)

    Tensor y({n, out_c_, h, w});
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t oc = 0; oc < out_c_; ++oc)
            for (std::size_t ih = 0; ih < h; ++ih)
                for (std::size_t iw = 0; iw < w; ++iw)
                    y.at4(in, oc, ih, iw) = out_mat(oc, (in * h + ih) * w + iw) + bias[oc];
    cached_input_ = x;
    cache_valid_ = true;
    return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
    require_cache("Conv2d");
    cache_valid_ = false;
    const std::size_t n = cached_input_.dim(0), h = cached_input_.dim(2),
                      w = cached_input_.dim(3);
    if (dy.shape != std::vector<std::size_t>{n, out_c_, h, w})
        throw std::invalid_argument("Conv2d: gradient shape mismatch " + dy.shape_string());

    Eigen::MatrixXd dy_mat(out_c_, n * h * w);
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t oc = 0; oc < out_c_; ++oc)
            for (std::size_t ih = 0; ih < h; ++ih)
                for (std::size_t iw = 0; iw < w; ++iw)
                    dy_mat(oc, (in * h + ih) * w + iw) = dy.at4(in, oc, ih, iw);

    const Eigen::MatrixXd col = im2col(cached_input_);
    MapMat dwm(dweights_.data(), out_c_, in_c_ * 9);
    dwm.noalias() += dy_mat * col.transpose();
    for (std::size_t oc = 0; oc < out_c_; ++oc) dbias_[oc] += dy_mat.row(oc).sum();

    CMapMat wm(weights.data(), out_c_, in_c_ * 9);
    const Eigen::MatrixXd dcol = wm.transpose() * dy_mat;  // (C*9) x (N*H*W)

    // col2im scatter-add
    Tensor dx({n, in_c_, h, w});
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t ic = 0; ic < in_c_; ++ic)
            for (std::size_t oh = 0; oh < h; ++oh)
                for (std::size_t ow = 0; ow < w; ++ow) {
                    const std::size_t q = (in * h + oh) * w + ow;
                    for (int ki = 0; ki < 3; ++ki) {
                        const long ih = static_cast<long>(oh) + ki - 1;
                        if (ih < 0 || ih >= static_cast<long>(h)) continue;
                        for (int kj = 0; kj < 3; ++kj) {
                            const long iw = static_cast<long>(ow) + kj - 1;
                            if (iw < 0 || iw >= static_cast<long>(w)) continue;
                            dx.at4(in, ic, ih, iw) += dcol((ic * 3 + ki) * 3 + kj, q);
                        }
                    }
                }
    return dx;
}

std::vector<ParamView> Conv2d::params() {
    return {{"weights", &weights, &dweights_}, {"bias", &bias, &dbias_}};
}

// ---------------------------------------------------------------- MaxPool2x2

Tensor MaxPool2x2::forward(const Tensor& x, Mode) {
    if (x.rank() != 4) throw std::invalid_argument("MaxPool2x2: expected rank-4 input");
    const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    const std::size_t oh = (h + 1) / 2, ow = (w + 1) / 2;
    Tensor y({n, c, oh, ow});
    in_shape_ = x.shape;
    argmax_.assign(y.numel(), 0);
    std::size_t out_idx = 0;
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t ic = 0; ic < c; ++ic)
            for (std::size_t i = 0; i < oh; ++i)
                for (std::size_t j = 0; j < ow; ++j, ++out_idx) {
                    double best = -std::numeric_limits<double>::infinity();
                    std::size_t best_flat = 0;
                    for (std::size_t di = 0; di < 2 && 2 * i + di < h; ++di)
                        for (std::size_t dj = 0; dj < 2 && 2 * j + dj < w; ++dj) {
                            const double v = x.at4(in, ic, 2 * i + di, 2 * j + dj);
                            if (v > best) {
                                best = v;
                                best_flat =
                                    ((in * c + ic) * h + 2 * i + di) * w + 2 * j + dj;
                            }
                        }
                    y.data[out_idx] = best;
                    argmax_[out_idx] = best_flat;
                }
    cache_valid_ = true;
    return y;
}

Tensor MaxPool2x2::backward(const Tensor& dy) {
    require_cache("MaxPool2x2");
    cache_valid_ = false;
    if (dy.numel() != argmax_.size())
        throw std::invalid_argument("MaxPool2x2: gradient shape mismatch");
    Tensor dx(in_shape_);
    for (std::size_t i = 0; i < dy.numel(); ++i) dx.data[argmax_[i]] += dy.data[i];
    return dx;
}

// ---------------------------------------------------------------- Upsample2x2

Tensor Upsample2x2::forward(const Tensor& x, Mode) {
    if (x.rank() != 4) throw std::invalid_argument("Upsample2x2: expected rank-4 input");
    const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    Tensor y({n, c, 2 * h, 2 * w});
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t ic = 0; ic < c; ++ic)
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < w; ++j) {
                    const double v = x.at4(in, ic, i, j);
                    y.at4(in, ic, 2 * i, 2 * j) = v;
                    y.at4(in, ic, 2 * i, 2 * j + 1) = v;
                    y.at4(in, ic, 2 * i + 1, 2 * j) = v;
                    y.at4(in, ic, 2 * i + 1, 2 * j + 1) = v;
                }
    in_shape_ = x.shape;
    cache_valid_ = true;
    return y;
}

Tensor Upsample2x2::backward(const Tensor& dy) {
    require_cache("Upsample2x2");
    cache_valid_ = false;
    const std::size_t n = in_shape_[0], c = in_shape_[1], h = in_shape_[2], w = in_shape_[3];
    if (dy.shape != std::vector<std::size_t>{n, c, 2 * h, 2 * w})
        throw std::invalid_argument("Upsample2x2: gradient shape mismatch");
    Tensor dx(in_shape_);
    for (std::size_t in = 0; in < n; ++in)
        for (std::size_t ic = 0; ic < c; ++ic)
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    dx.at4(in, ic, i, j) = dy.at4(in, ic, 2 * i, 2 * j) +
                                           dy.at4(in, ic, 2 * i, 2 * j + 1) +
                                           dy.at4(in, ic, 2 * i + 1, 2 * j) +
                                           dy.at4(in, ic, 2 * i + 1, 2 * j + 1);
    return dx;
}

// ---------------------------------------------------------------- BatchNorm

BatchNorm::BatchNorm(std::size_t features, double eps, double mom)
    : gamma(features, 1.0),
      beta(features, 0.0),
      running_mean(features, 0.0),
      running_var(features, 1.0),
      epsilon(eps),
      momentum(mom),
      features_(features),
      dgamma_(features, 0.0),
      dbeta_(features, 0.0) {}

namespace {

// iterate (feature, element) pairs of a [N,F] or [N,C,H,W] tensor
template <typename F>
void bn_for_each(const std::vector<std::size_t>& shape, F&& f) {
    if (shape.size() == 2) {
        for (std::size_t n = 0; n < shape[0]; ++n)
            for (std::size_t c = 0; c < shape[1]; ++c) f(c, n * shape[1] + c);
    } else {
        const std::size_t hw = shape[2] * shape[3];
        for (std::size_t n = 0; n < shape[0]; ++n)
            for (std::size_t c = 0; c < shape[1]; ++c)
                for (std::size_t k = 0; k < hw; ++k) f(c, (n * shape[1] + c) * hw + k);
    }
}

}  // namespace

Tensor BatchNorm::forward(const Tensor& x, Mode mode) {
    const bool ok = (x.rank() == 2 && x.dim(1) == features_) ||
                    (x.rank() == 4 && x.dim(1) == features_);
    if (!ok)
        throw std::invalid_argument("BatchNorm(" + std::to_string(features_) +
                                    "): bad input " + x.shape_string());

    const std::size_t per_feature = x.numel() / features_;
    std::vector<double> mean(features_, 0.0), var(features_, 0.0);
    if (mode == Mode::Train) {
        bn_for_each(x.shape, [&](std::size_t c, std::size_t i) { mean[c] += x.data[i]; });
        for (auto& m : mean) m /= static_cast<double>(per_feature);
        bn_for_each(x.shape, [&](std::size_t c, std::size_t i) {
            const double d = x.data[i] - mean[c];
            var[c] += d * d;
        });
        for (auto& v : var) v /= static_cast<double>(per_feature);
        for (std::size_t c = 0; c < features_; ++c) {
            running_mean[c] = momentum * running_mean[c] + (1.0 - momentum) * mean[c];
            running_var[c] = momentum * running_var[c] + (1.0 - momentum) * var[c];
        }
    } else {
        mean = running_mean;
        var = running_var;
    }

    cached_invstd_.assign(features_, 0.0);
    for (std::size_t c = 0; c < features_; ++c)
        cached_invstd_[c] = 1.0 / std::sqrt(var[c] + epsilon);

    Tensor y(x.shape);
    Tensor xhat(x.shape);
    bn_for_each(x.shape, [&](std::size_t c, std::size_t i) {
        xhat.data[i] = (x.data[i] - mean[c]) * cached_invstd_[c];
        y.data[i] = gamma[c] * xhat.data[i] + beta[c];
    });
    cached_xhat_ = std::move(xhat);
    cached_mode_ = mode;
    cached_shape_ = x.shape;
    cache_valid_ = true;
    return y;
}

Tensor BatchNorm::backward(const Tensor& dy) {
    require_cache("BatchNorm");
    cache_valid_ = false;
    if (dy.shape != cached_shape_)
        throw std::invalid_argument("BatchNorm: gradient shape mismatch");

    const std::size_t per_feature = dy.numel() / features_;
    std::vector<double> sum_dy(features_, 0.0), sum_dy_xhat(features_, 0.0);
    bn_for_each(dy.shape, [&](std::size_t c, std::size_t i) {
        sum_dy[c] += dy.data[i];
        sum_dy_xhat[c] += dy.data[i] * cached_xhat_.data[i];
    });
    for (std::size_t c = 0; c < features_; ++c) {
        dgamma_[c] += sum_dy_xhat[c];
        dbeta_[c] += sum_dy[c];
    }

    Tensor dx(dy.shape);
    if (cached_mode_ == Mode::Infer) {
        // frozen statistics: the layer is a fixed affine map
        bn_for_each(dy.shape, [&](std::size_t c, std::size_t i) {
            dx.data[i] = dy.data[i] * gamma[c] * cached_invstd_[c];
        });
        return dx;
    }
    const double m = static_cast<double>(per_feature);
    bn_for_each(dy.shape, [&](std::size_t c, std::size_t i) {
        dx.data[i] = gamma[c] * cached_invstd_[c] / m *
                     (m * dy.data[i] - sum_dy[c] - cached_xhat_.data[i] * sum_dy_xhat[c]);
    });
    return dx;
}

std::vector<ParamView> BatchNorm::params() {
    return {{"gamma", &gamma, &dgamma_}, {"beta", &beta, &dbeta_}};
}

// ---------------------------------------------------------------- Activation

Tensor Activation::forward(const Tensor& x, Mode) {
    Tensor y(x.shape);
    if (kind_ == ActivationKind::ReLU) {
        for (std::size_t i = 0; i < x.numel(); ++i) y.data[i] = x.data[i] > 0.0 ? x.data[i] : 0.0;
        cached_ = x;
    } else {
        for (std::size_t i = 0; i < x.numel(); ++i) y.data[i] = 1.0 / (1.0 + std::exp(-x.data[i]));
        cached_ = y;
    }
    cache_valid_ = true;
    return y;
}

Tensor Activation::backward(const Tensor& dy) {
    require_cache("Activation");
    cache_valid_ = false;
    if (dy.shape != cached_.shape)
        throw std::invalid_argument("Activation: gradient shape mismatch");
    Tensor dx(dy.shape);
    if (kind_ == ActivationKind::ReLU) {
        for (std::size_t i = 0; i < dy.numel(); ++i)
            dx.data[i] = cached_.data[i] > 0.0 ? dy.data[i] : 0.0;
    } else {
        for (std::size_t i = 0; i < dy.numel(); ++i) {
            const double s = cached_.data[i];
            dx.data[i] = dy.data[i] * s * (1.0 - s);
        }
    }
    return dx;
}

// ---------------------------------------------------------------- init

void init_he_uniform(std::vector<double>& w, std::size_t fan_in, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& v : w) v = rng.uniform(-limit, limit);
}

void init_glorot_uniform(std::vector<double>& w, std::size_t fan_in, std::size_t fan_out,
                         Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (auto& v : w) v = rng.uniform(-limit, limit);
}

}  // namespace yieldpaint
