#include "yieldpaint/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace yieldpaint {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

std::string format_yield(double y) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", y);
    return buf;
}

}  // namespace

SurfaceDataset load_csv(const std::string& path) {
    return load_csv(path, default_rating_grid(), default_tenor_grid());
}

SurfaceDataset load_csv(const std::string& path, const RatingGrid& ratings,
                        const TenorGrid& tenors) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);

    const std::size_t R = ratings.size();
    const std::size_t T = tenors.size();

    // date -> (values, seen)
    std::map<std::string, std::pair<Matrix, MaskArray>> by_date;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != 4)
            throw std::runtime_error("load_csv: bad row at line " + std::to_string(lineno));
        const std::string& date = fields[0];
        const int i = ratings.index_of(fields[1]);
        if (i < 0)
            throw std::runtime_error("load_csv: unknown rating '" + fields[1] + "' at line " +
                                     std::to_string(lineno));
        const int j = tenors.index_of(std::stod(fields[2]));
        if (j < 0)
            throw std::runtime_error("load_csv: unknown tenor '" + fields[2] + "' at line " +
                                     std::to_string(lineno));
        const double y = std::stod(fields[3]);
        if (!std::isfinite(y))
            throw std::runtime_error("load_csv: non-finite yield at line " +
                                     std::to_string(lineno));

        auto it = by_date.find(date);
        if (it == by_date.end()) {
            it = by_date.emplace(date, std::make_pair(Matrix::Zero(R, T),
                                                      MaskArray::Constant(R, T, false)))
                     .first;
        }
        it->second.first(i, j) = y;
        it->second.second(i, j) = true;
    }

    SurfaceDataset dataset;
    dataset.ratings = ratings;
    dataset.tenors = tenors;
    for (auto& [date, cell] : by_date) {
        if (!cell.second.all()) {
            for (std::size_t i = 0; i < R; ++i)
                for (std::size_t j = 0; j < T; ++j)
                    if (!cell.second(i, j))
                        throw std::runtime_error("load_csv: missing cell (" + date + ", " +
                                                 ratings.label(i) + ", " +
                                                 std::to_string(tenors.tenor(j)) + "y)");
        }
        dataset.surfaces.emplace_back(date, std::move(cell.first));
    }
    if (dataset.surfaces.empty()) throw std::runtime_error("load_csv: no data rows in " + path);
    return dataset;
}

void save_csv(const SurfaceDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path);
    out << "date,rating,tenor_years,yield\n";
    for (const auto& s : dataset.surfaces) {
        for (std::size_t i = 0; i < s.rows(); ++i)
            for (std::size_t j = 0; j < s.cols(); ++j)
                out << s.date << ',' << dataset.ratings.label(i) << ','
                    << dataset.tenors.tenor(j) << ',' << format_yield(s.values(i, j)) << '\n';
    }
}

void save_masked_csv(const MaskedSurface& masked, const RatingGrid& ratings,
                     const TenorGrid& tenors, const std::string& date,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_masked_csv: cannot open " + path);
    out << "date,rating,tenor_years,yield,observed\n";
    for (std::size_t i = 0; i < masked.rows(); ++i)
        for (std::size_t j = 0; j < masked.cols(); ++j)
            out << date << ',' << ratings.label(i) << ',' << tenors.tenor(j) << ','
                << format_yield(masked.values(i, j)) << ',' << (masked.observed(i, j) ? 1 : 0)
                << '\n';
}

MaskedSurface load_masked_csv(const std::string& path, const RatingGrid& ratings,
                              const TenorGrid& tenors) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_masked_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("load_masked_csv: empty file " + path);

    Matrix values = Matrix::Zero(ratings.size(), tenors.size());
    MaskArray observed = MaskArray::Constant(ratings.size(), tenors.size(), false);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != 5)
            throw std::runtime_error("load_masked_csv: bad row at line " +
                                     std::to_string(lineno));
        const int i = ratings.index_of(fields[1]);
        const int j = tenors.index_of(std::stod(fields[2]));
        if (i < 0 || j < 0)
            throw std::runtime_error("load_masked_csv: unknown cell at line " +
                                     std::to_string(lineno));
        const bool obs = fields[4] == "1";
        values(i, j) = obs ? std::stod(fields[3]) : 0.0;
        observed(i, j) = obs;
    }
    return MaskedSurface(std::move(values), std::move(observed));
}

}  // namespace yieldpaint
