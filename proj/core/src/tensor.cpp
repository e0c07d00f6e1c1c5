#include "yieldpaint/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace yieldpaint {

namespace {
std::size_t product(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
}
}  // namespace

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)), data(product(shape), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != product(shape))
        throw std::invalid_argument("Tensor: data length does not match shape");
}

std::size_t Tensor::numel() const { return data.size(); }

std::string Tensor::shape_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
    os << ']';
    return os.str();
}

void Tensor::check_finite(const std::string& where) const {
    for (double v : data)
        if (!std::isfinite(v))
            throw std::runtime_error(where + ": non-finite value in tensor " + shape_string());
}

std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target))
        throw std::invalid_argument("mse_loss: shape mismatch " + pred.shape_string() + " vs " +
                                    target.shape_string());
    const double n = static_cast<double>(pred.numel());
    Tensor grad(pred.shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.numel(); ++i) {
        const double e = pred[i] - target[i];
        acc += e * e;
        grad[i] = 2.0 * e / n;
    }
    return {acc / n, std::move(grad)};
}

}  // namespace yieldpaint
