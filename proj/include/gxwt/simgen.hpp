#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "gxwt/cross_transform.hpp"
#include "gxwt/error.hpp"
#include "gxwt/series.hpp"

namespace gxwt {

/// Counter-based generator: the i-th 64-bit output is the SplitMix64 finalizer
/// applied to key + (i + 1) * 0x9E3779B97F4A7C15, where key is derived from
/// (seed, stream). Uniforms take the top 53 bits; normals use the cosine branch
/// of Box-Muller with two uniforms per draw.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ull))) {}

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    /// Uniform on (0, 1].
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

    std::uint64_t counter() const noexcept { return counter_; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Sinusoid dyad: N channels per side at f0 (Hz) with normally distributed phase offsets.
struct SimConfig {
    std::size_t n_channels = 3;
    double f0 = 1.0;
    double alpha_x = 0.0;
    double alpha_y = 0.0;
    double amp_x = 1.0;
    double amp_y = 1.0;
    double var_x = 0.0; ///< phase variance of X channels, rad^2
    double var_y = 0.0;
    double sample_rate = 100.0;
    double duration = 128.0;
    std::uint64_t seed = 1;

    std::size_t samples() const { return static_cast<std::size_t>(std::llround(duration * sample_rate)); }
};

inline void validate(const SimConfig& cfg) {
    auto bad = [](const std::string& what) { throw Error(Errc::bad_config, what); };
    if (cfg.n_channels < 1) bad("n_channels must be >= 1");
    if (!(cfg.sample_rate > 0.0) || !std::isfinite(cfg.sample_rate)) bad("sample_rate must be positive");
    if (!(cfg.f0 > 0.0) || !(cfg.f0 < cfg.sample_rate / 2.0)) bad("need 0 < f0 < sample_rate / 2");
    if (!(cfg.amp_x > 0.0) || !(cfg.amp_y > 0.0) || !std::isfinite(cfg.amp_x) || !std::isfinite(cfg.amp_y))
        bad("amplitudes must be positive");
    if (!(cfg.var_x >= 0.0) || !(cfg.var_y >= 0.0) || !std::isfinite(cfg.var_x) || !std::isfinite(cfg.var_y))
        bad("phase variances must be non-negative");
    if (!std::isfinite(cfg.alpha_x) || !std::isfinite(cfg.alpha_y)) bad("phase offsets must be finite");
    if (!(cfg.duration * cfg.sample_rate >= 2.0) || !std::isfinite(cfg.duration))
        bad("duration * sample_rate must be >= 2");
}

struct Dyad {
    MultiChannelSeries x;
    MultiChannelSeries y;
    std::vector<double> beta_x; ///< drawn phase offsets, one per channel
    std::vector<double> beta_y;
};

/// Draws beta_x then beta_y (n_channels each) from CounterRng(seed).
inline Dyad simulate_dyad(const SimConfig& cfg) {
    validate(cfg);
    CounterRng rng(cfg.seed);
    const std::size_t N = cfg.n_channels;
    std::vector<double> bx(N), by(N);
    for (auto& b : bx) b = std::sqrt(cfg.var_x) * rng.normal();
    for (auto& b : by) b = std::sqrt(cfg.var_y) * rng.normal();

    const std::size_t T = cfg.samples();
    std::vector<double> xs(T * N), ys(T * N);
    const double w = 2.0 * std::numbers::pi * cfg.f0;
    for (std::size_t t = 0; t < T; ++t) {
        const double time = static_cast<double>(t) / cfg.sample_rate;
        for (std::size_t k = 0; k < N; ++k) {
            xs[t * N + k] = cfg.amp_x * std::cos(w * time + cfg.alpha_x + bx[k]);
            ys[t * N + k] = cfg.amp_y * std::cos(w * time + cfg.alpha_y + by[k]);
        }
    }
    std::vector<std::string> xn, yn;
    for (std::size_t k = 0; k < N; ++k) {
        xn.push_back("x" + std::to_string(k + 1));
        yn.push_back("y" + std::to_string(k + 1));
    }
    return {MultiChannelSeries(std::move(xs), N, cfg.sample_rate, std::move(xn)),
            MultiChannelSeries(std::move(ys), N, cfg.sample_rate, std::move(yn)), std::move(bx), std::move(by)};
}

struct ExpectedModulus {
    double exact = 0.0;                   ///< A_x A_y exp(-(var_x + var_y))
    double small_dispersion_approx = 0.0; ///< A_x A_y (1 - var_x - var_y)
};

/// |sqrt(<tau>)| at f0. The exact form follows from the normal characteristic
/// function, <exp(2i delta)> = exp(-2 (var_x + var_y)).
inline ExpectedModulus expected_modulus(const SimConfig& cfg) {
    validate(cfg);
    const double product = cfg.amp_x * cfg.amp_y;
    const double dispersion = cfg.var_x + cfg.var_y;
    return {product * std::exp(-dispersion), product * (1.0 - dispersion)};
}

/// Mean pairwise phase difference alpha_x - alpha_y, modulo pi, in (-pi/2, pi/2].
inline double expected_phase(const SimConfig& cfg) {
    validate(cfg);
    return fold_half_pi(cfg.alpha_x - cfg.alpha_y);
}

namespace detail {

constexpr std::uint64_t oracle_stream = 0x6F7261636C65ull;

/// One oracle draw of tau: cross products built directly from the phase model, no wavelets.
inline complex oracle_tau_draw(const SimConfig& cfg, CounterRng& rng, std::vector<double>& bx,
                               std::vector<double>& by) {
    const std::size_t N = cfg.n_channels;
    for (auto& b : bx) b = std::sqrt(cfg.var_x) * rng.normal();
    for (auto& b : by) b = std::sqrt(cfg.var_y) * rng.normal();
    const double product = cfg.amp_x * cfg.amp_y;
    const double alpha = cfg.alpha_x - cfg.alpha_y;
    complex sum{};
    for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k) {
            const complex m = std::polar(product, alpha + bx[j] - by[k]);
            sum += m * m;
        }
    return sum / static_cast<double>(N * N);
}

} // namespace detail

/// Monte-Carlo estimate of <tau> at f0 from `n_draws` independent phase draws.
inline complex mc_oracle_tau(const SimConfig& cfg, std::size_t n_draws) {
    validate(cfg);
    if (n_draws < 1) throw Error(Errc::bad_config, "n_draws must be >= 1");
    CounterRng rng(cfg.seed, detail::oracle_stream);
    std::vector<double> bx(cfg.n_channels), by(cfg.n_channels);
    complex acc{};
    for (std::size_t d = 0; d < n_draws; ++d) acc += detail::oracle_tau_draw(cfg, rng, bx, by);
    return acc / static_cast<double>(n_draws);
}

/// Monte-Carlo estimate of <|sqrt(tau)|>, the per-realization modulus averaged over draws.
/// Differs from |sqrt(<tau>)| once the phases are dispersed.
inline double mc_oracle_mean_modulus(const SimConfig& cfg, std::size_t n_draws) {
    validate(cfg);
    if (n_draws < 1) throw Error(Errc::bad_config, "n_draws must be >= 1");
    CounterRng rng(cfg.seed, detail::oracle_stream);
    std::vector<double> bx(cfg.n_channels), by(cfg.n_channels);
    double acc = 0.0;
    for (std::size_t d = 0; d < n_draws; ++d) acc += std::sqrt(std::abs(detail::oracle_tau_draw(cfg, rng, bx, by)));
    return acc / static_cast<double>(n_draws);
}

} // namespace gxwt
