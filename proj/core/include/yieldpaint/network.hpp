#pragma once

#include <memory>
#include <vector>

#include "yieldpaint/layers.hpp"

namespace yieldpaint {

// Ordered layer stack. Forward checks shapes layer by layer and rejects any
// non-finite intermediate; backward walks the stack in reverse, accumulating
// parameter gradients inside each layer.
class Network {
public:
    Network() = default;
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

    Tensor forward(const Tensor& x, Mode mode);
    Tensor backward(const Tensor& loss_grad);

    std::vector<ParamView> params();
    std::size_t parameter_count();
    void zero_grads();

    std::size_t size() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_.at(i); }
    const Layer& layer(std::size_t i) const { return *layers_.at(i); }

private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace yieldpaint
