#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gxwt.hpp"

namespace testing {

using gxwt::complex;
constexpr double pi = std::numbers::pi;

/// Small seeded generator for hand-rolled property tests.
struct Gen {
    std::mt19937_64 engine;
    explicit Gen(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
    double normal() { return std::normal_distribution<double>()(engine); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine);
    }
    complex cnormal() { return {normal(), normal()}; }
    std::vector<complex> fiber(std::size_t n) {
        std::vector<complex> out(n);
        for (auto& z : out) z = cnormal();
        return out;
    }
};

inline double rel_diff(complex a, complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Angular distance on the circle of circumference `period`.
inline double angle_gap(double a, double b, double period = 2.0 * pi) {
    return std::abs(std::remainder(a - b, period));
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

/// T x N series from a per-sample function of (time in seconds, channel).
template <class Fn>
gxwt::MultiChannelSeries make_series(std::size_t T, std::size_t N, double fs, Fn&& fn,
                                     const std::string& prefix = "c") {
    std::vector<double> s(T * N);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t n = 0; n < N; ++n) s[t * N + n] = fn(static_cast<double>(t) / fs, n);
    return gxwt::MultiChannelSeries(std::move(s), N, fs, names(prefix, N));
}

/// Band-limited random signal: a handful of random sinusoids inside the grid range plus white noise.
inline gxwt::MultiChannelSeries random_series(Gen& g, std::size_t T, std::size_t N, double fs,
                                              const std::string& prefix = "c") {
    std::vector<double> s(T * N);
    for (std::size_t n = 0; n < N; ++n) {
        double freq[4], amp[4], phase[4];
        for (int i = 0; i < 4; ++i) {
            freq[i] = g.uniform(0.3, 3.0);
            amp[i] = g.uniform(0.2, 2.0);
            phase[i] = g.uniform(-pi, pi);
        }
        for (std::size_t t = 0; t < T; ++t) {
            const double time = static_cast<double>(t) / fs;
            double x = 0.3 * g.normal();
            for (int i = 0; i < 4; ++i) x += amp[i] * std::cos(2.0 * pi * freq[i] * time + phase[i]);
            s[t * N + n] = x;
        }
    }
    return gxwt::MultiChannelSeries(std::move(s), N, fs, names(prefix, N));
}

/// Applies `fn(value, t, n)` to every sample.
template <class Fn>
gxwt::MultiChannelSeries map_series(const gxwt::MultiChannelSeries& x, Fn&& fn) {
    std::vector<double> s(x.samples());
    for (std::size_t t = 0; t < x.length(); ++t)
        for (std::size_t n = 0; n < x.channels(); ++n) s[t * x.channels() + n] = fn(x(t, n), t, n);
    return gxwt::MultiChannelSeries(std::move(s), x.channels(), x.sample_rate(), x.channel_names(),
                                    x.channel_triples());
}

inline gxwt::WaveletTensor tensor_from(std::vector<std::vector<complex>> fibers_by_point, std::size_t channels) {
    // Single frequency, one time point per fiber.
    gxwt::WaveletTensor u;
    u.grid = gxwt::make_grid(1.0, 2.0, 1);
    u.grid.frequencies.resize(1);
    u.sample_rate = 10.0;
    u.length = fibers_by_point.size();
    u.channel_names = names("c", channels);
    for (auto& fib : fibers_by_point) u.coeffs.insert(u.coeffs.end(), fib.begin(), fib.end());
    return u;
}

} // namespace testing
