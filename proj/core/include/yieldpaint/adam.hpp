#pragma once

#include <vector>

#include "yieldpaint/network.hpp"

namespace yieldpaint {

// Adam with bias correction and optional multiplicative per-epoch lr decay.
class Adam {
public:
    struct Config {
        double lr = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
        double decay = 1.0;  // lr *= decay at each end_epoch()
    };

    Adam(Network& net, Config config);

    // one update from the gradients currently accumulated in the network
    void step();

    void end_epoch() { lr_ *= config_.decay; }

    std::size_t step_count() const { return step_; }
    double current_lr() const { return lr_; }

private:
    Network& net_;
    Config config_;
    double lr_;
    std::size_t step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace yieldpaint
