#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gxwt/cross_transform.hpp"
#include "gxwt/cwt.hpp"
#include "gxwt/detail/text.hpp"
#include "gxwt/error.hpp"

namespace gxwt {

enum class CoiPolicy { all_points, coi_only };

inline const char* coi_policy_name(CoiPolicy p) { return p == CoiPolicy::coi_only ? "coi-only" : "all-points"; }

/// Temporal mean of |c| per frequency row. Rows with no admitted points are absent.
struct InteractionSpectrum {
    std::vector<std::optional<double>> values;
    FrequencyGrid grid;
    CoiPolicy coi_policy = CoiPolicy::coi_only;
    std::vector<std::size_t> valid_counts;
};

namespace detail {

inline void check_mask(const GxwtGrid& g, const CoiMask& mask) {
    if (mask.frequencies() != g.frequencies() || mask.length != g.length)
        throw Error(Errc::shape_mismatch, "mask is " + std::to_string(mask.frequencies()) + "x" +
                                              std::to_string(mask.length) + ", grid is " +
                                              std::to_string(g.frequencies()) + "x" + std::to_string(g.length));
}

inline InteractionSpectrum spectrum_impl(const GxwtGrid& g, const CoiMask* mask) {
    if (mask) check_mask(g, *mask);
    InteractionSpectrum s;
    s.grid = g.grid;
    s.coi_policy = mask ? CoiPolicy::coi_only : CoiPolicy::all_points;
    s.values.resize(g.frequencies());
    s.valid_counts.assign(g.frequencies(), 0);
    for (std::size_t f = 0; f < g.frequencies(); ++f) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < g.length; ++t) {
            if (mask && !(*mask)(f, t)) continue;
            sum += std::abs(g(f, t));
            ++count;
        }
        s.valid_counts[f] = count;
        if (count > 0) s.values[f] = sum / static_cast<double>(count);
    }
    return s;
}

} // namespace detail

/// Mean of |c| over the points inside `mask`.
inline InteractionSpectrum interaction_spectrum(const GxwtGrid& g, const CoiMask& mask) {
    return detail::spectrum_impl(g, &mask);
}

/// coi-only derives the cone of influence from the grid's own wavelet parameters.
inline InteractionSpectrum interaction_spectrum(const GxwtGrid& g, CoiPolicy policy = CoiPolicy::coi_only) {
    if (policy == CoiPolicy::all_points) return detail::spectrum_impl(g, nullptr);
    const auto mask = cone_of_influence(g.grid, g.length, g.sample_rate, g.cycles);
    return detail::spectrum_impl(g, &mask);
}

/// Two-column CSV with the policy and per-row counts in comment lines. Absent rows read "nan".
inline void write_spectrum_csv(std::ostream& out, const InteractionSpectrum& s) {
    out << "# coi_policy: " << coi_policy_name(s.coi_policy) << '\n';
    out << "# valid_counts:";
    for (auto c : s.valid_counts) out << ' ' << c;
    out << '\n';
    out << "frequency_hz,value\n";
    for (std::size_t f = 0; f < s.values.size(); ++f) {
        out << detail::format_double(s.grid[f]) << ',';
        if (s.values[f]) out << detail::format_double(*s.values[f]);
        else out << "nan";
        out << '\n';
    }
}

struct PhaseBandSummary {
    double f_lo = 0.0;
    double f_hi = 0.0;
    double mean_phase = 0.0;       ///< (-pi/2, pi/2]
    double resultant_length = 0.0; ///< [0, 1]
    CoiPolicy coi_policy = CoiPolicy::coi_only;
    std::size_t points = 0;
};

namespace detail {

inline PhaseBandSummary phase_impl(const GxwtGrid& g, double f_lo, double f_hi, const CoiMask* mask) {
    if (mask) check_mask(g, *mask);
    if (f_lo > f_hi) std::swap(f_lo, f_hi);
    std::vector<std::size_t> rows;
    for (std::size_t f = 0; f < g.frequencies(); ++f)
        if (g.grid[f] >= f_lo && g.grid[f] <= f_hi) rows.push_back(f);
    if (rows.empty())
        throw Error(Errc::empty_band, "no grid frequency in [" + std::to_string(f_lo) + ", " + std::to_string(f_hi) +
                                          "] Hz");

    double sc = 0.0, ss = 0.0;
    std::size_t count = 0;
    std::optional<double> common;
    bool constant = true;
    for (auto f : rows) {
        for (std::size_t t = 0; t < g.length; ++t) {
            if (mask && !(*mask)(f, t)) continue;
            const complex c = g(f, t);
            if (c == complex{}) continue;
            const double phase = half_open_arg(c);
            if (!common) common = phase;
            else if (*common != phase) constant = false;
            sc += std::cos(2.0 * phase);
            ss += std::sin(2.0 * phase);
            ++count;
        }
    }
    if (count == 0) throw Error(Errc::no_valid_points, "no admitted points with non-zero transform in band");

    PhaseBandSummary out;
    out.f_lo = f_lo;
    out.f_hi = f_hi;
    out.coi_policy = mask ? CoiPolicy::coi_only : CoiPolicy::all_points;
    out.points = count;
    if (constant) {
        out.mean_phase = *common;
        out.resultant_length = 1.0;
        return out;
    }
    sc /= static_cast<double>(count);
    ss /= static_cast<double>(count);
    out.resultant_length = std::min(1.0, std::hypot(sc, ss));
    out.mean_phase = 0.5 * half_open_arg({sc, ss});
    return out;
}

} // namespace detail

/// Circular mean of the mod-pi phase over grid rows with f_lo <= f <= f_hi.
/// Angles are doubled before averaging and halved afterwards. Points with c = 0
/// carry no phase and are skipped.
inline PhaseBandSummary phase_band_summary(const GxwtGrid& g, double f_lo, double f_hi, const CoiMask& mask) {
    return detail::phase_impl(g, f_lo, f_hi, &mask);
}

inline PhaseBandSummary phase_band_summary(const GxwtGrid& g, double f_lo, double f_hi,
                                           CoiPolicy policy = CoiPolicy::coi_only) {
    if (policy == CoiPolicy::all_points) return detail::phase_impl(g, f_lo, f_hi, nullptr);
    const auto mask = cone_of_influence(g.grid, g.length, g.sample_rate, g.cycles);
    return detail::phase_impl(g, f_lo, f_hi, &mask);
}

inline void write_phase_csv(std::ostream& out, const PhaseBandSummary& p) {
    out << "f_lo_hz,f_hi_hz,mean_phase_rad,resultant_length,points,coi_policy\n";
    out << detail::format_double(p.f_lo) << ',' << detail::format_double(p.f_hi) << ','
        << detail::format_double(p.mean_phase) << ',' << detail::format_double(p.resultant_length) << ',' << p.points
        << ',' << coi_policy_name(p.coi_policy) << '\n';
}

/// sign(Im c_ft) as F x T values in {-1, 0, +1}; +1 means the first series leads.
inline std::vector<std::int8_t> leader_sign_map(const GxwtGrid& g) {
    std::vector<std::int8_t> out(g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double im = g.values[i].imag();
        out[i] = static_cast<std::int8_t>((im > 0.0) - (im < 0.0));
    }
    return out;
}

/// Spearman rank correlation; ties receive their average rank.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw Error(Errc::length_mismatch, "spearman needs equal-length vectors");
    if (a.size() < 2) throw Error(Errc::too_short, "spearman needs at least two observations");
    auto ranks = [](const std::vector<double>& x) {
        std::vector<std::size_t> order(x.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto i, auto j) { return x[i] < x[j]; });
        std::vector<double> r(x.size());
        for (std::size_t i = 0; i < order.size();) {
            std::size_t j = i;
            while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

} // namespace gxwt
