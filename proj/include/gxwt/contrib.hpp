#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gxwt/cross_transform.hpp"
#include "gxwt/cwt.hpp"
#include "gxwt/detail/parallel.hpp"
#include "gxwt/error.hpp"

namespace gxwt {

/// |Re(m_jk e^{-i arg c})| for every entry, row-major N x M.
struct ProjectionMatrix {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;

    double operator()(std::size_t j, std::size_t k) const { return values[j * cols + k]; }
};

namespace detail {

/// Unit vector along the major axis; the real axis when c = 0.
inline complex major_axis(complex c) {
    const double r = std::abs(c);
    if (r == 0.0) return {1.0, 0.0};
    return c / r;
}

inline double project(complex m, complex axis) {
    return std::abs(m.real() * axis.real() + m.imag() * axis.imag());
}

} // namespace detail

inline ProjectionMatrix projection_matrix(const CrossSpectrumMatrix& m, complex c) {
    const complex axis = detail::major_axis(c);
    ProjectionMatrix p{std::vector<double>(m.entries.size()), m.rows, m.cols};
    for (std::size_t i = 0; i < m.entries.size(); ++i) p.values[i] = detail::project(m.entries[i], axis);
    return p;
}

enum class Side { x, y };

/// Non-negative F x T x K per-channel contributions, index (f * T + t) * K + j.
struct ContributionTensor {
    std::vector<double> values;
    Side side = Side::x;
    std::vector<std::string> channel_names;
    FrequencyGrid grid;
    std::size_t length = 0;

    std::size_t channels() const noexcept { return channel_names.size(); }
    double operator()(std::size_t f, std::size_t t, std::size_t j) const {
        return values[(f * length + t) * channels() + j];
    }
};

struct ContributionOptions {
    /// Points with |c| <= floor are flagged invalid (their axis is arbitrary).
    double validity_floor = 0.0;
    /// Optional non-negative per-channel weights applied to the fibers before the
    /// outer product. When given, the projection axis is recomputed from the
    /// weighted fibers so that axis and projected entries stay consistent.
    std::optional<std::vector<double>> weights_x;
    std::optional<std::vector<double>> weights_y;
};

struct Contributions {
    ContributionTensor x;
    ContributionTensor y;
    std::vector<std::uint8_t> valid; ///< F x T, 1 where |c| > validity_floor
};

inline Contributions channel_contributions(const WaveletTensor& u, const WaveletTensor& v, const GxwtGrid& g,
                                           const ContributionOptions& opts = {}) {
    detail::check_compatible(u, v);
    if (g.variant != Variant::full)
        throw Error(Errc::variant_mismatch, "contributions are defined for the full coupling only");
    if (g.grid.frequencies != u.grid.frequencies || g.length != u.length || g.n_x != u.channels() ||
        g.n_y != v.channels())
        throw Error(Errc::grid_mismatch, "transform grid does not belong to these wavelet tensors");

    const std::size_t F = u.frequencies();
    const std::size_t T = u.length;
    const std::size_t N = u.channels();
    const std::size_t M = v.channels();

    auto check_weights = [](const std::optional<std::vector<double>>& w, std::size_t n, const char* side) {
        if (!w) return;
        if (w->size() != n)
            throw Error(Errc::dimension_mismatch, std::string(side) + " weights: expected " + std::to_string(n) +
                                                      ", got " + std::to_string(w->size()));
        for (double x : *w)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw Error(Errc::bad_config, std::string(side) + " weights must be finite and non-negative");
    };
    check_weights(opts.weights_x, N, "X");
    check_weights(opts.weights_y, M, "Y");
    const bool weighted = opts.weights_x || opts.weights_y;

    Contributions out;
    out.x = {std::vector<double>(F * T * N), Side::x, u.channel_names, u.grid, T};
    out.y = {std::vector<double>(F * T * M), Side::y, v.channel_names, v.grid, T};
    out.valid.assign(F * T, 0);

    detail::parallel_chunks(F, [&](std::size_t begin, std::size_t end) {
        std::vector<complex> uf(N), vf(M), m(N * M);
        for (std::size_t f = begin; f < end; ++f) {
            for (std::size_t t = 0; t < T; ++t) {
                const auto ur = u.fiber(f, t);
                const auto vr = v.fiber(f, t);
                for (std::size_t j = 0; j < N; ++j) uf[j] = opts.weights_x ? ur[j] * (*opts.weights_x)[j] : ur[j];
                for (std::size_t k = 0; k < M; ++k) vf[k] = opts.weights_y ? vr[k] * (*opts.weights_y)[k] : vr[k];
                complex tau{};
                for (std::size_t j = 0; j < N; ++j)
                    for (std::size_t k = 0; k < M; ++k) {
                        m[j * M + k] = detail::mul_conj(uf[j], vf[k]);
                        if (weighted) tau += detail::square(m[j * M + k]);
                    }
                const complex c = weighted ? principal_sqrt(tau / static_cast<double>(N * M)) : g(f, t);
                const complex axis = detail::major_axis(c);
                out.valid[f * T + t] = std::abs(c) > opts.validity_floor ? 1 : 0;

                double* px = &out.x.values[(f * T + t) * N];
                double* py = &out.y.values[(f * T + t) * M];
                for (std::size_t j = 0; j < N; ++j) px[j] = 0.0;
                for (std::size_t k = 0; k < M; ++k) py[k] = 0.0;
                for (std::size_t j = 0; j < N; ++j)
                    for (std::size_t k = 0; k < M; ++k) {
                        const double p = detail::project(m[j * M + k], axis);
                        px[j] += p;
                        py[k] += p;
                    }
                for (std::size_t j = 0; j < N; ++j) px[j] /= static_cast<double>(M);
                for (std::size_t k = 0; k < M; ++k) py[k] /= static_cast<double>(N);
            }
        }
    });
    return out;
}

} // namespace gxwt
