#include "yieldpaint/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace yieldpaint {

namespace {

constexpr double kPanelWidth = 320.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMargin = 36.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// rating index -> hue ramp from blue (best) to red (worst)
std::string line_color(std::size_t i, std::size_t n) {
    const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    const int hue = static_cast<int>(240.0 * (1.0 - t));
    return "hsl(" + std::to_string(hue) + ",70%,45%)";
}

struct PanelScale {
    double x_min, x_max, y_min, y_max, x0;

    double px(double tenor) const {
        return x0 + kMargin + (tenor - x_min) / (x_max - x_min) * (kPanelWidth - 2 * kMargin);
    }
    double py(double yield) const {
        return kMargin + (1.0 - (yield - y_min) / (y_max - y_min)) *
                             (kPanelHeight - 2 * kMargin);
    }
};

void draw_panel(std::ofstream& out, const Matrix& values, const MaskArray* observed,
                const TenorGrid& tenors, const PanelScale& scale, const std::string& title) {
    out << "<rect x=\"" << fmt(scale.x0) << "\" y=\"0\" width=\"" << fmt(kPanelWidth)
        << "\" height=\"" << fmt(kPanelHeight)
        << "\" fill=\"white\" stroke=\"#ccc\"/>\n";
    out << "<text x=\"" << fmt(scale.x0 + kPanelWidth / 2) << "\" y=\"16\" "
        << "text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << title
        << "</text>\n";

    const auto n_ratings = static_cast<std::size_t>(values.rows());
    for (std::size_t i = 0; i < n_ratings; ++i) {
        std::string points;
        bool segment_open = false;
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (observed && !(*observed)(i, j)) {
                if (segment_open) {
                    out << "<polyline fill=\"none\" stroke=\"" << line_color(i, n_ratings)
                        << "\" stroke-width=\"1\" points=\"" << points << "\"/>\n";
                    points.clear();
                    segment_open = false;
                }
                continue;
            }
            if (!points.empty()) points += ' ';
            points += fmt(scale.px(tenors.tenor(j))) + ',' +
                      fmt(scale.py(values(i, j) * 1e4));
            segment_open = true;
        }
        if (!points.empty())
            out << "<polyline fill=\"none\" stroke=\"" << line_color(i, n_ratings)
                << "\" stroke-width=\"1\" points=\"" << points << "\"/>\n";
    }
}

}  // namespace

void plot_reconstruction(const YieldSurface& truth, const MaskedSurface& masked,
                         const YieldSurface& recon, const TenorGrid& tenors,
                         const std::string& path) {
    if (truth.values.rows() != recon.values.rows() ||
        truth.values.cols() != recon.values.cols() ||
        truth.values.rows() != masked.values.rows() ||
        truth.values.cols() != masked.values.cols())
        throw std::invalid_argument("plot_reconstruction: grid mismatch");

    double y_min = 1e30, y_max = -1e30;
    auto widen = [&](const Matrix& m) {
        y_min = std::min(y_min, m.minCoeff() * 1e4);
        y_max = std::max(y_max, m.maxCoeff() * 1e4);
    };
    widen(truth.values);
    widen(recon.values);
    if (y_max <= y_min) y_max = y_min + 1.0;

    const double x_min = tenors.tenor(0);
    const double x_max = tenors.tenor(tenors.size() - 1);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("plot_reconstruction: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(3 * kPanelWidth)
        << "\" height=\"" << fmt(kPanelHeight) << "\">\n";

    const char* titles[3] = {"truth (bps)", "masked", "reconstruction"};
    for (int p = 0; p < 3; ++p) {
        PanelScale scale{x_min, x_max, y_min, y_max, p * kPanelWidth};
        const Matrix& m = p == 0 ? truth.values : (p == 1 ? masked.values : recon.values);
        draw_panel(out, m, p == 1 ? &masked.observed : nullptr, tenors, scale, titles[p]);
    }
    out << "</svg>\n";
}

}  // namespace yieldpaint
