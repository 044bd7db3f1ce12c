#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "gxwt/cwt.hpp"
#include "gxwt/detail/parallel.hpp"
#include "gxwt/error.hpp"

namespace gxwt {

namespace detail {

// Plain complex arithmetic without the NaN/Inf recovery of operator*; inputs are finite.
// Both forms are sign-symmetric, which keeps channel negation exactly invisible downstream.
inline complex mul_conj(complex a, complex b) {
    return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
}
inline complex square(complex z) {
    return {z.real() * z.real() - z.imag() * z.imag(), 2.0 * z.real() * z.imag()};
}

} // namespace detail

/// Outer product u v^H for one time-frequency point, row-major N x M.
struct CrossSpectrumMatrix {
    std::vector<complex> entries;
    std::size_t rows = 0; ///< N, channels of the first series
    std::size_t cols = 0; ///< M, channels of the second series
    std::size_t f_index = 0;
    std::size_t t_index = 0;

    complex operator()(std::size_t j, std::size_t k) const { return entries[j * cols + k]; }
};

inline CrossSpectrumMatrix cross_spectrum(std::span<const complex> u, std::span<const complex> v,
                                          std::size_t f_index = 0, std::size_t t_index = 0) {
    if (u.empty() || v.empty()) throw Error(Errc::empty_fiber, "cross spectrum needs non-empty fibers");
    CrossSpectrumMatrix m{std::vector<complex>(u.size() * v.size()), u.size(), v.size(), f_index, t_index};
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t k = 0; k < v.size(); ++k) m.entries[j * v.size() + k] = detail::mul_conj(u[j], v[k]);
    return m;
}

/// Sample pseudo-variance (1 / (N M)) sum m_jk^2, summed row by row.
inline complex pseudo_variance(const CrossSpectrumMatrix& m) {
    complex sum{};
    for (const auto& e : m.entries) sum += detail::square(e);
    return sum / static_cast<double>(m.entries.size());
}

/// Angle of z in (-pi, pi], with arg(0) = 0.
inline double half_open_arg(complex z) {
    if (z == complex{}) return 0.0;
    double a = std::atan2(z.imag(), z.real());
    if (a <= -std::numbers::pi) a = std::numbers::pi;
    return a;
}

/// Principal square root: argument in (-pi/2, pi/2], so the real part is never negative.
inline complex principal_sqrt(complex tau) {
    if (tau == complex{}) return {};
    const double half = 0.5 * half_open_arg(tau);
    const double r = std::sqrt(std::abs(tau));
    return {r * std::cos(half), r * std::sin(half)};
}

/// Folds an angle onto (-pi/2, pi/2]: phase modulo pi.
inline double fold_half_pi(double angle) {
    double a = std::remainder(angle, std::numbers::pi);
    if (a <= -std::numbers::pi / 2) a += std::numbers::pi;
    return a;
}

struct DistributionShape {
    double variance = 0.0;     ///< S^2, mean squared modulus
    double eccentricity = 0.0; ///< in [0, 1]
    double orientation = 0.0;  ///< major-axis angle in (-pi/2, pi/2]
};

inline DistributionShape distribution_shape(const CrossSpectrumMatrix& m) {
    double power = 0.0;
    for (const auto& e : m.entries) power += std::norm(e);
    const double variance = power / static_cast<double>(m.entries.size());
    const complex tau = pseudo_variance(m);
    DistributionShape shape;
    shape.variance = variance;
    shape.eccentricity = variance > 0.0 ? std::sqrt(std::abs(tau) / variance) : 0.0;
    shape.orientation = 0.5 * half_open_arg(tau);
    return shape;
}

enum class Variant { full, pairwise };

inline const char* variant_name(Variant v) { return v == Variant::full ? "full" : "pairwise"; }

/// The F x T generalized cross-wavelet transform c_ft.
struct GxwtGrid {
    std::vector<complex> values; ///< row-major F x T
    FrequencyGrid grid;
    double sample_rate = 0.0;
    std::size_t length = 0;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
    Variant variant = Variant::full;
    double cycles = 6.0;

    std::size_t frequencies() const noexcept { return grid.size(); }
    complex operator()(std::size_t f, std::size_t t) const { return values[f * length + t]; }
    std::span<const complex> row(std::size_t f) const { return {values.data() + f * length, length}; }
};

namespace detail {

inline void check_compatible(const WaveletTensor& u, const WaveletTensor& v) {
    if (u.grid.frequencies != v.grid.frequencies)
        throw Error(Errc::grid_mismatch, "wavelet tensors use different frequency grids");
    if (u.sample_rate != v.sample_rate)
        throw Error(Errc::grid_mismatch, "sample rates differ: " + std::to_string(u.sample_rate) + " vs " +
                                             std::to_string(v.sample_rate));
    if (u.length != v.length)
        throw Error(Errc::length_mismatch, "series lengths differ: " + std::to_string(u.length) + " vs " +
                                               std::to_string(v.length));
    if (u.channels() == 0 || v.channels() == 0) throw Error(Errc::empty_fiber, "tensor without channels");
}

inline GxwtGrid empty_like(const WaveletTensor& u, const WaveletTensor& v, Variant variant) {
    GxwtGrid g;
    g.values.assign(u.frequencies() * u.length, complex{});
    g.grid = u.grid;
    g.sample_rate = u.sample_rate;
    g.length = u.length;
    g.n_x = u.channels();
    g.n_y = v.channels();
    g.variant = variant;
    g.cycles = u.cycles;
    return g;
}

} // namespace detail

/// Full coupling: c_ft = sqrt of the pseudo-variance of u_ft v_ft^H over all N x M channel pairs.
inline GxwtGrid gxwt(const WaveletTensor& u, const WaveletTensor& v) {
    detail::check_compatible(u, v);
    GxwtGrid g = detail::empty_like(u, v, Variant::full);
    const std::size_t T = u.length;
    const std::size_t N = u.channels();
    const std::size_t M = v.channels();
    const auto pairs = static_cast<double>(N * M);
    detail::parallel_chunks(u.frequencies(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) {
            for (std::size_t t = 0; t < T; ++t) {
                const auto uf = u.fiber(f, t);
                const auto vf = v.fiber(f, t);
                complex sum{};
                for (std::size_t j = 0; j < N; ++j)
                    for (std::size_t k = 0; k < M; ++k) sum += detail::square(detail::mul_conj(uf[j], vf[k]));
                g.values[f * T + t] = principal_sqrt(sum / pairs);
            }
        }
    });
    return g;
}

/// Pairwise coupling of corresponding channels only: tau = (1/N) sum_j (u_j conj(v_j))^2.
inline GxwtGrid pairwise_gxwt(const WaveletTensor& u, const WaveletTensor& v) {
    detail::check_compatible(u, v);
    if (u.channels() != v.channels())
        throw Error(Errc::dimension_mismatch, "pairwise coupling needs equal channel counts, got " +
                                                  std::to_string(u.channels()) + " and " +
                                                  std::to_string(v.channels()));
    GxwtGrid g = detail::empty_like(u, v, Variant::pairwise);
    const std::size_t T = u.length;
    const std::size_t N = u.channels();
    const auto count = static_cast<double>(N);
    detail::parallel_chunks(u.frequencies(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) {
            for (std::size_t t = 0; t < T; ++t) {
                const auto uf = u.fiber(f, t);
                const auto vf = v.fiber(f, t);
                complex sum{};
                for (std::size_t j = 0; j < N; ++j) sum += detail::square(detail::mul_conj(uf[j], vf[j]));
                g.values[f * T + t] = principal_sqrt(sum / count);
            }
        }
    });
    return g;
}

} // namespace gxwt
