#include "yieldpaint/adam.hpp"

#include <cmath>

namespace yieldpaint {

Adam::Adam(Network& net, Config config) : net_(net), config_(config), lr_(config.lr) {
    for (auto& p : net_.params()) {
        m_.emplace_back(p.value->size(), 0.0);
        v_.emplace_back(p.value->size(), 0.0);
    }
}

void Adam::step() {
    ++step_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
    auto params = net_.params();
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& value = *params[k].value;
        auto& grad = *params[k].grad;
        for (std::size_t i = 0; i < value.size(); ++i) {
            const double g = grad[i];
            m_[k][i] = config_.beta1 * m_[k][i] + (1.0 - config_.beta1) * g;
            v_[k][i] = config_.beta2 * v_[k][i] + (1.0 - config_.beta2) * g * g;
            const double mhat = m_[k][i] / bc1;
            const double vhat = v_[k][i] / bc2;
            value[i] -= lr_ * mhat / (std::sqrt(vhat) + config_.epsilon);
        }
    }
}

}  // namespace yieldpaint
