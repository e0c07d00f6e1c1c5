#pragma once

#include <memory>
#include <string>
#include <vector>

#include "yieldpaint/rng.hpp"
#include "yieldpaint/tensor.hpp"

namespace yieldpaint {

enum class Mode { Train, Infer };

// Named view into a layer's parameter/gradient storage, in declaration order.
struct ParamView {
    std::string name;
    std::vector<double>* value;
    std::vector<double>* grad;
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual std::string name() const = 0;

    // stores the cache needed by backward
    virtual Tensor forward(const Tensor& x, Mode mode) = 0;

    // consumes the cache of the last forward; throws if none is pending
    virtual Tensor backward(const Tensor& dy) = 0;

    virtual std::vector<ParamView> params() { return {}; }

    void zero_grads() {
        for (auto& p : params()) std::fill(p.grad->begin(), p.grad->end(), 0.0);
    }

protected:
    void require_cache(const char* who) const;
    bool cache_valid_ = false;
};

// y = x W^T + b on [N, in]; W is out x in, row-major.
class Dense : public Layer {
public:
    Dense(std::size_t in, std::size_t out);
    std::string name() const override { return "Dense"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& dy) override;
    std::vector<ParamView> params() override;

    std::size_t in_dim() const { return in_; }
    std::size_t out_dim() const { return out_; }

    std::vector<double> weights;  // out x in
    std::vector<double> bias;     // out

private:
    std::size_t in_, out_;
    std::vector<double> dweights_, dbias_;
    Tensor cached_input_;
};

// 3x3 convolution, stride 1, same padding, on [N, C, H, W].
class Conv2d : public Layer {
public:
    Conv2d(std::size_t in_channels, std::size_t out_channels);
    std::string name() const override { return "Conv2d"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& dy) override;
    std::vector<ParamView> params() override;

    std::size_t in_channels() const { return in_c_; }
    std::size_t out_channels() const { return out_c_; }

    std::vector<double> weights;  // outC x inC x 3 x 3
    std::vector<double> bias;     // outC

private:
    std::size_t in_c_, out_c_;
    std::vector<double> dweights_, dbias_;
    Tensor cached_input_;
};

// 2x2 max pooling, stride 2, ceil semantics at the edges.
class MaxPool2x2 : public Layer {
public:
    std::string name() const override { return "MaxPool2x2"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& dy) override;

private:
    std::vector<std::size_t> argmax_;
    std::vector<std::size_t> in_shape_;
};

// nearest-neighbor 2x upsampling.
class Upsample2x2 : public Layer {
public:
    std::string name() const override { return "Upsample2x2"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& dy) override;

private:
    std::vector<std::size_t> in_shape_;
};

// Per-feature on [N, F], per-channel on [N, C, H, W]. Train mode normalizes
// by batch statistics and updates the running estimates; infer mode applies
// the frozen affine transform, and backward in that mode differentiates
// through the affine only.
class BatchNorm : public Layer {
public:
    explicit BatchNorm(std::size_t features, double epsilon = 1e-5, double momentum = 0.9);
    std::string name() const override { return "BatchNorm"; }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& dy) override;
    std::vector<ParamView> params() override;

    std::size_t features() const { return features_; }

    std::vector<double> gamma, beta;
    std::vector<double> running_mean, running_var;
    double epsilon;
    double momentum;

private:
    std::size_t features_;
    std::vector<double> dgamma_, dbeta_;
    Mode cached_mode_ = Mode::Train;
    Tensor cached_xhat_;
    std::vector<double> cached_invstd_;
    std::vector<std::size_t> cached_shape_;
};

enum class ActivationKind { ReLU, Sigmoid };

class Activation : public Layer {
public:
    explicit Activation(ActivationKind kind) : kind_(kind) {}
    std::string name() const override {
        return kind_ == ActivationKind::ReLU ? "ReLU" : "Sigmoid";
    }
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& dy) override;
    ActivationKind kind() const { return kind_; }

private:
    ActivationKind kind_;
    Tensor cached_;  // input for ReLU, output for Sigmoid
};

// He-uniform (ReLU layers) / Glorot-uniform (sigmoid output) initialization.
void init_he_uniform(std::vector<double>& w, std::size_t fan_in, Rng& rng);
void init_glorot_uniform(std::vector<double>& w, std::size_t fan_in, std::size_t fan_out,
                         Rng& rng);

}  // namespace yieldpaint
