#include "yieldpaint/grid.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace yieldpaint {

RatingGrid::RatingGrid(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("RatingGrid: empty label list");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
        throw std::invalid_argument("RatingGrid: duplicate rating label");
}

int RatingGrid::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return -1;
}

TenorGrid::TenorGrid(std::vector<double> tenors) : tenors_(std::move(tenors)) {
    if (tenors_.empty()) throw std::invalid_argument("TenorGrid: empty tenor list");
    for (std::size_t j = 0; j < tenors_.size(); ++j) {
        if (tenors_[j] <= 0.0) throw std::invalid_argument("TenorGrid: tenors must be positive");
        if (j > 0 && tenors_[j] <= tenors_[j - 1])
            throw std::invalid_argument("TenorGrid: tenors must be strictly increasing");
    }
}

int TenorGrid::index_of(double tenor_years) const {
    for (std::size_t j = 0; j < tenors_.size(); ++j)
        if (std::abs(tenors_[j] - tenor_years) < 1e-9) return static_cast<int>(j);
    return -1;
}

RatingGrid default_rating_grid() {
    return RatingGrid({"AAA", "AA", "A+", "A", "A-", "BBB+", "BBB", "BBB-", "BB+", "BB",
                       "BB-", "B+", "B"});
}

TenorGrid default_tenor_grid() {
    return TenorGrid({0.25, 0.5, 1, 2, 3, 4, 5, 7, 8, 9, 10, 15, 20, 25, 30});
}

}  // namespace yieldpaint
