#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace yieldpaint {

// Dense row-major tensor of doubles. Rank is 2 for dense batches [N, D] and
// 4 for image batches [N, C, H, W].
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);
    Tensor(std::vector<std::size_t> s, std::vector<double> d);

    static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

    std::size_t numel() const;
    std::size_t dim(std::size_t i) const { return shape.at(i); }
    std::size_t rank() const { return shape.size(); }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    // [N, D]
    double& at2(std::size_t n, std::size_t d) { return data[n * shape[1] + d]; }
    double at2(std::size_t n, std::size_t d) const { return data[n * shape[1] + d]; }

    // [N, C, H, W]
    double& at4(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
        return data[((n * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }
    double at4(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
        return data[((n * shape[1] + c) * shape[2] + h) * shape[3] + w];
    }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
    std::string shape_string() const;

    // throws if any entry is non-finite; `where` names the producing op
    void check_finite(const std::string& where) const;
};

// mean squared error over all elements plus its gradient 2(pred - target)/N
std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target);

}  // namespace yieldpaint
