#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "gxwt/detail/text.hpp"
#include "gxwt/error.hpp"
#include "gxwt/gridfile.hpp"

namespace gxwt {

/// Blue-white-red, centre entry (16) is the zero colour.
inline constexpr std::array<const char*, 33> diverging_colors{
    "#053061", "#0e4179", "#175290", "#1f63a8", "#2a71b2", "#3480b9", "#3f8ec0", "#529dc8", "#6bacd1",
    "#84bcd9", "#9bc9e0", "#aed3e6", "#c2ddec", "#d4e6f1", "#e0ecf3", "#ecf2f5", "#f7f6f6", "#f9eee7",
    "#fbe5d8", "#fddcc9", "#fbccb4", "#f8bb9e", "#f5aa89", "#ee9677", "#e48066", "#db6b55", "#d05548",
    "#c53e3d", "#ba2832", "#ab162a", "#930e26", "#7c0722", "#67001f",
};

/// Dark-to-bright sequential map for non-negative values.
inline constexpr std::array<const char*, 33> sequential_colors{
    "#440154", "#470d60", "#48186a", "#482374", "#472d7b", "#453781", "#424086", "#3e4989", "#3b528b",
    "#375b8d", "#33638d", "#2f6b8e", "#2c728e", "#297a8e", "#26828e", "#23898e", "#21918c", "#1f988b",
    "#1fa088", "#22a785", "#28ae80", "#32b67a", "#3fbc73", "#4ec36b", "#5ec962", "#70cf57", "#84d44b",
    "#98d83e", "#addc30", "#c2df23", "#d8e219", "#ece51b", "#fde725",
};

enum class RenderPart { modulus, real, imag };

struct RenderOptions {
    RenderPart part = RenderPart::modulus;
    std::size_t max_columns = 600; ///< time axis is averaged down to at most this many cells
    int cell_width = 2;
    int cell_height = 8;
};

/// Colour index for `value`. Signed data is mapped symmetrically around the centre entry.
inline std::size_t color_index(double value, double limit, bool diverging) {
    if (!(limit > 0.0)) return diverging ? 16 : 0;
    double x = diverging ? 0.5 * (value / limit + 1.0) : value / limit;
    x = std::clamp(x, 0.0, 1.0);
    return static_cast<std::size_t>(std::lround(x * 32.0));
}

/// Heatmap with frequency increasing upward and time to the right.
inline void render_svg(std::ostream& out, const GridFile& g, const RenderOptions& opts = {}) {
    const std::size_t F = g.rows();
    const std::size_t T = g.length;
    if (F == 0 || T == 0) throw Error(Errc::shape_mismatch, "cannot render an empty grid");
    if (g.kind != GridKind::complex_values && opts.part != RenderPart::modulus && opts.part != RenderPart::real)
        throw Error(Errc::format_error, "real-valued grids have no imaginary part");

    auto value_at = [&](std::size_t i) {
        if (g.kind != GridKind::complex_values) return g.real_data[i];
        const complex z = g.complex_data[i];
        switch (opts.part) {
        case RenderPart::real: return z.real();
        case RenderPart::imag: return z.imag();
        case RenderPart::modulus: break;
        }
        return std::abs(z);
    };

    const std::size_t cols = std::max<std::size_t>(1, std::min(T, opts.max_columns));
    std::vector<double> cells(F * cols, 0.0);
    double min_v = 0.0, max_v = 0.0;
    for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t b = 0; b < cols; ++b) {
            const std::size_t t0 = b * T / cols;
            const std::size_t t1 = std::max(t0 + 1, (b + 1) * T / cols);
            double sum = 0.0;
            for (std::size_t t = t0; t < t1; ++t) sum += value_at(f * T + t);
            const double v = sum / static_cast<double>(t1 - t0);
            cells[f * cols + b] = v;
            min_v = std::min(min_v, v);
            max_v = std::max(max_v, v);
        }
    }
    const bool signed_part = g.kind == GridKind::complex_values && opts.part != RenderPart::modulus;
    const bool diverging = signed_part || min_v < 0.0;
    const double limit = diverging ? std::max(std::abs(min_v), std::abs(max_v)) : max_v;

    const auto width = static_cast<long>(cols) * opts.cell_width;
    const auto height = static_cast<long>(F) * opts.cell_height;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n";
    out << "<title>" << g.variant << ' '
        << (opts.part == RenderPart::modulus ? "modulus" : opts.part == RenderPart::real ? "real" : "imag") << ", "
        << detail::format_double(g.frequencies.front()) << "-" << detail::format_double(g.frequencies.back())
        << " Hz, colour limit " << detail::format_double(limit) << "</title>\n";
    const auto& table = diverging ? diverging_colors : sequential_colors;
    for (std::size_t f = 0; f < F; ++f) {
        const long y = static_cast<long>(F - 1 - f) * opts.cell_height;
        out << "<g data-frequency-hz=\"" << detail::format_double(g.frequencies[f]) << "\">";
        for (std::size_t b = 0; b < cols; ++b) {
            out << "<rect x=\"" << static_cast<long>(b) * opts.cell_width << "\" y=\"" << y << "\" width=\""
                << opts.cell_width << "\" height=\"" << opts.cell_height << "\" fill=\""
                << table[color_index(cells[f * cols + b], limit, diverging)] << "\"/>";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

} // namespace gxwt
