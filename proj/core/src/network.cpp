#include "yieldpaint/network.hpp"

#include <stdexcept>

namespace yieldpaint {

Tensor Network::forward(const Tensor& x, Mode mode) {
    Tensor current = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        try {
            current = layers_[i]->forward(current, mode);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("layer " + std::to_string(i) + " (" +
                                        layers_[i]->name() + "): " + e.what());
        }
        current.check_finite("layer " + std::to_string(i) + " (" + layers_[i]->name() + ")");
    }
    return current;
}

Tensor Network::backward(const Tensor& loss_grad) {
    Tensor current = loss_grad;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        current = layers_[i]->backward(current);
    }
    return current;
}

std::vector<ParamView> Network::params() {
    std::vector<ParamView> all;
    for (auto& layer : layers_)
        for (auto& p : layer->params()) all.push_back(p);
    return all;
}

std::size_t Network::parameter_count() {
    std::size_t n = 0;
    for (auto& p : params()) n += p.value->size();
    return n;
}

void Network::zero_grads() {
    for (auto& layer : layers_) layer->zero_grads();
}

}  // namespace yieldpaint
