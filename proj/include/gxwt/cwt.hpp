#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gxwt/detail/fft.hpp"
#include "gxwt/detail/parallel.hpp"
#include "gxwt/error.hpp"
#include "gxwt/series.hpp"

namespace gxwt {

using complex = std::complex<double>;

/// Logarithmic frequency axis: frequencies[k] = fmin * 2^(k / voices_per_octave).
struct FrequencyGrid {
    std::vector<double> frequencies;
    double fmin = 0.0;
    double fmax = 0.0;
    int voices_per_octave = 1;

    std::size_t size() const noexcept { return frequencies.size(); }
    double operator[](std::size_t k) const { return frequencies[k]; }

    /// Index of the grid frequency closest to `f` on a log axis.
    std::size_t nearest(double f) const {
        std::size_t best = 0;
        for (std::size_t k = 1; k < frequencies.size(); ++k)
            if (std::abs(std::log(frequencies[k] / f)) < std::abs(std::log(frequencies[best] / f))) best = k;
        return best;
    }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

inline FrequencyGrid make_grid(double fmin, double fmax, int voices_per_octave) {
    if (!(fmin > 0.0) || !(fmin < fmax) || !std::isfinite(fmax))
        throw Error(Errc::bad_range, "need 0 < fmin < fmax, got fmin=" + std::to_string(fmin) +
                                         " fmax=" + std::to_string(fmax));
    if (voices_per_octave < 1) throw Error(Errc::bad_range, "voices per octave must be >= 1");
    const double octaves = std::log2(fmax / fmin);
    // The epsilon keeps exact octave ratios from losing their last entry to rounding.
    const auto count = static_cast<std::size_t>(std::floor(voices_per_octave * octaves + 1e-9)) + 1;
    FrequencyGrid grid{{}, fmin, fmax, voices_per_octave};
    grid.frequencies.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        double f = fmin * std::exp2(static_cast<double>(k) / voices_per_octave);
        if (f > fmax) f = fmax;
        grid.frequencies.push_back(f);
    }
    return grid;
}

/// Scale of the Morlet wavelet whose response peaks at `frequency` (Hz), in seconds.
inline double morlet_scale(double frequency, double cycles) {
    return cycles / (2.0 * std::numbers::pi * frequency);
}

/// Time for the wavelet power at an edge discontinuity to drop by e^-2.
inline double efolding_time(double frequency, double cycles) {
    return std::numbers::sqrt2 * morlet_scale(frequency, cycles);
}

/// Frequency response of the analytic filter centred on `center` (Hz), evaluated at `f` (Hz).
/// Peak value is 2 on the positive axis so that a real unit sinusoid maps to a unit phasor.
inline double morlet_response(double f, double center, double cycles) {
    if (f <= 0.0) return 0.0;
    const double x = cycles * (f / center - 1.0);
    return 2.0 * std::exp(-0.5 * x * x);
}

/// Complex F x T x N coefficients, fiber-contiguous: index (f * T + t) * N + n.
struct WaveletTensor {
    std::vector<complex> coeffs;
    FrequencyGrid grid;
    double sample_rate = 0.0;
    std::size_t length = 0;
    std::vector<std::string> channel_names;
    double cycles = 6.0;
    /// Rows whose wavelet support exceeds the record; they lie entirely outside the cone of influence.
    std::vector<std::size_t> short_rows;

    std::size_t frequencies() const noexcept { return grid.size(); }
    std::size_t channels() const noexcept { return channel_names.size(); }

    std::span<const complex> fiber(std::size_t f, std::size_t t) const {
        return {coeffs.data() + (f * length + t) * channels(), channels()};
    }
    const complex& operator()(std::size_t f, std::size_t t, std::size_t n) const {
        return coeffs[(f * length + t) * channels() + n];
    }
    complex& operator()(std::size_t f, std::size_t t, std::size_t n) {
        return coeffs[(f * length + t) * channels() + n];
    }
};

/// Boolean F x T map; true means unaffected by the record edges.
struct CoiMask {
    std::vector<std::uint8_t> inside;
    std::vector<double> efolding_seconds;
    std::size_t length = 0;

    std::size_t frequencies() const noexcept { return efolding_seconds.size(); }
    bool operator()(std::size_t f, std::size_t t) const { return inside[f * length + t] != 0; }

    /// Half-open interval of inside time indices for row `f`; empty rows give {0, 0}.
    std::pair<std::size_t, std::size_t> interval(std::size_t f) const {
        std::size_t begin = 0;
        while (begin < length && !(*this)(f, begin)) ++begin;
        if (begin == length) return {0, 0};
        std::size_t end = begin;
        while (end < length && (*this)(f, end)) ++end;
        return {begin, end};
    }
};

inline CoiMask cone_of_influence(const FrequencyGrid& grid, std::size_t length, double sample_rate,
                                 double cycles = 6.0) {
    CoiMask mask;
    mask.length = length;
    mask.inside.assign(grid.size() * length, 0);
    mask.efolding_seconds.resize(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const double efold = efolding_time(grid[f], cycles);
        mask.efolding_seconds[f] = efold;
        for (std::size_t t = 0; t < length; ++t) {
            const double from_start = static_cast<double>(t) / sample_rate;
            const double from_end = static_cast<double>(length - 1 - t) / sample_rate;
            mask.inside[f * length + t] = (std::min(from_start, from_end) > efold) ? 1 : 0;
        }
    }
    return mask;
}

/// Morlet continuous wavelet transform of every channel, evaluated by FFT.
///
/// Each channel is mean-removed, zero-padded to the next power of two >= 2T and
/// filtered with the one-sided Morlet response centred on each grid frequency.
/// A sinusoid A cos(2 pi f t + phi) with f on the grid yields coefficients
/// A exp(i (2 pi f t + phi)) away from the edges.
inline WaveletTensor analytic_cwt(const MultiChannelSeries& series, const FrequencyGrid& grid,
                                  double cycles = 6.0) {
    if (!(cycles >= 4.0)) throw Error(Errc::bad_cycles, "cycles must be >= 4, got " + std::to_string(cycles));
    if (grid.size() == 0) throw Error(Errc::bad_range, "empty frequency grid");
    const double nyquist = series.sample_rate() / 2.0;
    if (grid.frequencies.back() > nyquist)
        throw Error(Errc::nyquist_exceeded, "fmax " + std::to_string(grid.frequencies.back()) +
                                                " Hz exceeds Nyquist " + std::to_string(nyquist) + " Hz");

    const std::size_t T = series.length();
    const std::size_t N = series.channels();
    const std::size_t F = grid.size();
    const std::size_t L = detail::next_pow2(2 * T);
    const double fs = series.sample_rate();

    WaveletTensor out;
    out.grid = grid;
    out.sample_rate = fs;
    out.length = T;
    out.channel_names = series.channel_names();
    out.cycles = cycles;
    out.coeffs.assign(F * T * N, complex{});
    const double duration = static_cast<double>(T - 1) / fs;
    for (std::size_t f = 0; f < F; ++f)
        if (duration <= 2.0 * efolding_time(grid[f], cycles)) out.short_rows.push_back(f);

    const detail::FftPlan forward(L, false);
    const detail::FftPlan inverse(L, true);

    std::vector<std::vector<complex>> spectra(N);
    detail::parallel_chunks(N, [&](std::size_t begin, std::size_t end) {
        for (std::size_t n = begin; n < end; ++n) {
            double mean = 0.0;
            for (std::size_t t = 0; t < T; ++t) mean += series(t, n);
            mean /= static_cast<double>(T);
            auto& spec = spectra[n];
            spec.assign(L, complex{});
            for (std::size_t t = 0; t < T; ++t) spec[t] = series(t, n) - mean;
            forward.execute(spec);
        }
    });

    const std::size_t half = L / 2;
    const double bin_hz = fs / static_cast<double>(L);
    const double inv_len = 1.0 / static_cast<double>(L);
    detail::parallel_chunks(F * N, [&](std::size_t begin, std::size_t end) {
        std::vector<complex> work(L);
        for (std::size_t task = begin; task < end; ++task) {
            const std::size_t f = task / N;
            const std::size_t n = task % N;
            const auto& spec = spectra[n];
            std::fill(work.begin(), work.end(), complex{});
            for (std::size_t k = 1; k <= half; ++k) {
                double gain = morlet_response(static_cast<double>(k) * bin_hz, grid[f], cycles);
                if (k == half) gain *= 0.5; // Nyquist bin is shared with the negative axis
                work[k] = spec[k] * (gain * inv_len);
            }
            inverse.execute(work);
            for (std::size_t t = 0; t < T; ++t) out.coeffs[(f * T + t) * N + n] = work[t];
        }
    });
    return out;
}

} // namespace gxwt
