#pragma once

#include <string>
#include <vector>

namespace yieldpaint {

// Ordered credit rating axis, best rating first. Ordinal index 0..R-1.
class RatingGrid {
public:
    RatingGrid() = default;
    explicit RatingGrid(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    // -1 if unknown
    int index_of(const std::string& label) const;

    bool operator==(const RatingGrid&) const = default;

private:
    std::vector<std::string> labels_;
};

// Ordered tenor axis in years, strictly increasing. Ordinal index 0..T-1.
class TenorGrid {
public:
    TenorGrid() = default;
    explicit TenorGrid(std::vector<double> tenors);

    std::size_t size() const { return tenors_.size(); }
    double tenor(std::size_t j) const { return tenors_.at(j); }
    const std::vector<double>& tenors() const { return tenors_; }

    // -1 if no tenor matches within 1e-9 years
    int index_of(double tenor_years) const;

    bool operator==(const TenorGrid&) const = default;

private:
    std::vector<double> tenors_;
};

// 13 industrial bond index ratings, AAA down to B
RatingGrid default_rating_grid();

// 15 tenors: 3m, 6m, 1y ... 30y
TenorGrid default_tenor_grid();

}  // namespace yieldpaint
