#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gxwt/analysis.hpp"
#include "gxwt/contrib.hpp"
#include "gxwt/cross_transform.hpp"
#include "gxwt/cwt.hpp"
#include "gxwt/detail/text.hpp"
#include "gxwt/error.hpp"

namespace gxwt {

// Text grid format, one item per line:
//
//   GXWT-GRID 1
//   kind complex|real|mask
//   variant <full|pairwise|cwt|contrib-x|contrib-y|coi|valid>
//   frequencies_hz f_0 ... f_{F-1}
//   voices <int>
//   sample_rate <Hz>
//   T <int>
//   F <int>
//   n_x <int>
//   n_y <int>
//   cycles <real>
//   coi_policy <none|coi-only|all-points>
//   channel <name or ->
//   data
//   <F rows of T space-separated values, lowest frequency first>
//
// Reals use 17 significant digits; complex values are written `re+imi`.

enum class GridKind { complex_values, real_values, mask };

inline const char* grid_kind_name(GridKind k) {
    switch (k) {
    case GridKind::complex_values: return "complex";
    case GridKind::real_values: return "real";
    case GridKind::mask: return "mask";
    }
    return "complex";
}

struct GridFile {
    GridKind kind = GridKind::complex_values;
    std::string variant = "full";
    std::vector<double> frequencies;
    int voices_per_octave = 1;
    double sample_rate = 0.0;
    std::size_t length = 0;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
    double cycles = 6.0;
    std::string coi_policy = "none";
    std::string channel = "-";
    std::vector<complex> complex_data; ///< kind complex, F x T
    std::vector<double> real_data;     ///< kind real or mask, F x T

    std::size_t rows() const noexcept { return frequencies.size(); }

    FrequencyGrid grid() const {
        FrequencyGrid g;
        g.frequencies = frequencies;
        g.fmin = frequencies.empty() ? 0.0 : frequencies.front();
        g.fmax = frequencies.empty() ? 0.0 : frequencies.back();
        g.voices_per_octave = voices_per_octave;
        return g;
    }
};

inline void write_grid(std::ostream& out, const GridFile& g) {
    out << "GXWT-GRID 1\n";
    out << "kind " << grid_kind_name(g.kind) << '\n';
    out << "variant " << g.variant << '\n';
    out << "frequencies_hz";
    for (double f : g.frequencies) out << ' ' << detail::format_double(f);
    out << '\n';
    out << "voices " << g.voices_per_octave << '\n';
    out << "sample_rate " << detail::format_double(g.sample_rate) << '\n';
    out << "T " << g.length << '\n';
    out << "F " << g.frequencies.size() << '\n';
    out << "n_x " << g.n_x << '\n';
    out << "n_y " << g.n_y << '\n';
    out << "cycles " << detail::format_double(g.cycles) << '\n';
    out << "coi_policy " << g.coi_policy << '\n';
    out << "channel " << g.channel << '\n';
    out << "data\n";
    const std::size_t F = g.rows();
    const std::size_t T = g.length;
    for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t t = 0; t < T; ++t) {
            if (t) out << ' ';
            if (g.kind == GridKind::complex_values) out << detail::format_complex(g.complex_data[f * T + t]);
            else out << detail::format_double(g.real_data[f * T + t]);
        }
        out << '\n';
    }
}

inline std::string grid_to_string(const GridFile& g) {
    std::ostringstream out;
    write_grid(out, g);
    return out.str();
}

namespace detail {

[[noreturn]] inline void grid_format_error(const std::string& what) { throw Error(Errc::format_error, "grid file: " + what); }

inline std::string_view expect_key(const std::string& line, std::string_view key) {
    if (line.size() < key.size() || std::string_view(line).substr(0, key.size()) != key ||
        (line.size() > key.size() && line[key.size()] != ' '))
        grid_format_error("expected '" + std::string(key) + "', got '" + line + "'");
    return line.size() > key.size() ? std::string_view(line).substr(key.size() + 1) : std::string_view{};
}

inline std::size_t parse_count(std::string_view s, std::string_view key) {
    auto v = parse_index(trim(s));
    if (!v) grid_format_error("bad value for " + std::string(key));
    return *v;
}

inline double parse_real(std::string_view s, std::string_view key) {
    auto v = parse_double(s);
    if (!v) grid_format_error("bad value for " + std::string(key) + ": '" + std::string(s) + "'");
    return *v;
}

} // namespace detail

inline GridFile read_grid(std::istream& in) {
    using namespace detail;
    std::string line;
    auto next = [&]() -> std::string& {
        if (!std::getline(in, line)) grid_format_error("unexpected end of file");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next() != "GXWT-GRID 1") grid_format_error("missing magic line");
    GridFile g;
    {
        auto kind = expect_key(next(), "kind");
        if (kind == "complex") g.kind = GridKind::complex_values;
        else if (kind == "real") g.kind = GridKind::real_values;
        else if (kind == "mask") g.kind = GridKind::mask;
        else grid_format_error("unknown kind '" + std::string(kind) + "'");
    }
    g.variant = std::string(expect_key(next(), "variant"));
    for (auto tok : split(expect_key(next(), "frequencies_hz"), ' '))
        if (!tok.empty()) g.frequencies.push_back(parse_real(tok, "frequencies_hz"));
    g.voices_per_octave = static_cast<int>(parse_count(expect_key(next(), "voices"), "voices"));
    g.sample_rate = parse_real(expect_key(next(), "sample_rate"), "sample_rate");
    g.length = parse_count(expect_key(next(), "T"), "T");
    const auto F = parse_count(expect_key(next(), "F"), "F");
    if (F != g.frequencies.size())
        grid_format_error("F = " + std::to_string(F) + " but " + std::to_string(g.frequencies.size()) +
                          " frequencies listed");
    g.n_x = parse_count(expect_key(next(), "n_x"), "n_x");
    g.n_y = parse_count(expect_key(next(), "n_y"), "n_y");
    g.cycles = parse_real(expect_key(next(), "cycles"), "cycles");
    g.coi_policy = std::string(expect_key(next(), "coi_policy"));
    g.channel = std::string(expect_key(next(), "channel"));
    if (next() != "data") grid_format_error("missing data marker");

    const std::size_t T = g.length;
    if (g.kind == GridKind::complex_values) g.complex_data.reserve(F * T);
    else g.real_data.reserve(F * T);
    for (std::size_t f = 0; f < F; ++f) {
        next();
        std::size_t count = 0;
        for (auto tok : split(line, ' ')) {
            if (tok.empty()) continue;
            ++count;
            if (g.kind == GridKind::complex_values) {
                auto z = parse_complex(tok);
                if (!z) grid_format_error("bad complex value '" + std::string(tok) + "' in row " + std::to_string(f));
                g.complex_data.push_back(*z);
            } else {
                g.real_data.push_back(parse_real(tok, "data"));
            }
        }
        if (count != T)
            grid_format_error("row " + std::to_string(f) + " has " + std::to_string(count) + " values, expected " +
                              std::to_string(T));
    }
    while (std::getline(in, line))
        if (!trim(line).empty()) grid_format_error("trailing content after " + std::to_string(F) + " rows");
    return g;
}

inline GridFile load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, path);
    return read_grid(in);
}

inline void save_grid(const std::string& path, const GridFile& g) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot open '" + path + "' for writing");
    write_grid(out, g);
    if (!out) throw Error(Errc::format_error, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Conversions

namespace detail {
inline GridFile header_from(const FrequencyGrid& grid, double sample_rate, std::size_t length, double cycles) {
    GridFile g;
    g.frequencies = grid.frequencies;
    g.voices_per_octave = grid.voices_per_octave;
    g.sample_rate = sample_rate;
    g.length = length;
    g.cycles = cycles;
    return g;
}
} // namespace detail

inline GridFile to_grid_file(const GxwtGrid& c) {
    GridFile g = detail::header_from(c.grid, c.sample_rate, c.length, c.cycles);
    g.kind = GridKind::complex_values;
    g.variant = variant_name(c.variant);
    g.n_x = c.n_x;
    g.n_y = c.n_y;
    g.complex_data = c.values;
    return g;
}

inline GxwtGrid to_gxwt_grid(const GridFile& g) {
    if (g.kind != GridKind::complex_values) throw Error(Errc::format_error, "grid file does not hold complex values");
    GxwtGrid c;
    c.values = g.complex_data;
    c.grid = g.grid();
    c.sample_rate = g.sample_rate;
    c.length = g.length;
    c.n_x = g.n_x;
    c.n_y = g.n_y;
    c.cycles = g.cycles;
    if (g.variant == "full") c.variant = Variant::full;
    else if (g.variant == "pairwise") c.variant = Variant::pairwise;
    else throw Error(Errc::format_error, "grid variant '" + g.variant + "' is not a cross transform");
    return c;
}

/// One channel of a wavelet tensor.
inline GridFile to_grid_file(const WaveletTensor& u, std::size_t channel) {
    GridFile g = detail::header_from(u.grid, u.sample_rate, u.length, u.cycles);
    g.kind = GridKind::complex_values;
    g.variant = "cwt";
    g.n_x = u.channels();
    g.channel = u.channel_names[channel];
    g.complex_data.resize(u.frequencies() * u.length);
    for (std::size_t f = 0; f < u.frequencies(); ++f)
        for (std::size_t t = 0; t < u.length; ++t) g.complex_data[f * u.length + t] = u(f, t, channel);
    return g;
}

/// One channel of a contribution tensor.
inline GridFile to_grid_file(const ContributionTensor& p, std::size_t channel, double sample_rate, double cycles,
                             std::size_t n_x, std::size_t n_y) {
    GridFile g = detail::header_from(p.grid, sample_rate, p.length, cycles);
    g.kind = GridKind::real_values;
    g.variant = p.side == Side::x ? "contrib-x" : "contrib-y";
    g.n_x = n_x;
    g.n_y = n_y;
    g.channel = p.channel_names[channel];
    g.real_data.resize(p.grid.size() * p.length);
    for (std::size_t f = 0; f < p.grid.size(); ++f)
        for (std::size_t t = 0; t < p.length; ++t) g.real_data[f * p.length + t] = p(f, t, channel);
    return g;
}

inline GridFile to_grid_file(const CoiMask& mask, const FrequencyGrid& grid, double sample_rate, double cycles) {
    GridFile g = detail::header_from(grid, sample_rate, mask.length, cycles);
    g.kind = GridKind::mask;
    g.variant = "coi";
    g.coi_policy = "coi-only";
    g.real_data.assign(mask.inside.begin(), mask.inside.end());
    return g;
}

inline CoiMask to_coi_mask(const GridFile& g) {
    if (g.kind != GridKind::mask) throw Error(Errc::format_error, "grid file is not a mask");
    CoiMask mask;
    mask.length = g.length;
    mask.inside.resize(g.real_data.size());
    for (std::size_t i = 0; i < g.real_data.size(); ++i) mask.inside[i] = g.real_data[i] != 0.0 ? 1 : 0;
    mask.efolding_seconds.resize(g.rows());
    for (std::size_t f = 0; f < g.rows(); ++f) mask.efolding_seconds[f] = efolding_time(g.frequencies[f], g.cycles);
    return mask;
}

} // namespace gxwt
