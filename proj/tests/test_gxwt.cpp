#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>

#include "support.hpp"

using namespace testing;
using gxwt::Errc;

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Rotation about a random axis (Rodrigues).
Mat3 random_rotation(Gen& g) {
    double ax = g.normal(), ay = g.normal(), az = g.normal();
    const double len = std::sqrt(ax * ax + ay * ay + az * az);
    ax /= len;
    ay /= len;
    az /= len;
    const double th = g.uniform(0.3, 2.8), c = std::cos(th), s = std::sin(th), k = 1.0 - c;
    return {{{c + ax * ax * k, ax * ay * k - az * s, ax * az * k + ay * s},
             {ay * ax * k + az * s, c + ay * ay * k, ay * az * k - ax * s},
             {az * ax * k - ay * s, az * ay * k + ax * s, c + az * az * k}}};
}

gxwt::MultiChannelSeries rotate_triples(const gxwt::MultiChannelSeries& x, const Mat3& r) {
    std::vector<double> s(x.samples());
    const auto N = x.channels();
    for (std::size_t t = 0; t < x.length(); ++t)
        for (const auto& tri : x.channel_triples())
            for (std::size_t i = 0; i < 3; ++i) {
                double acc = 0.0;
                for (std::size_t k = 0; k < 3; ++k) acc += r[i][k] * x(t, tri.columns[k]);
                s[t * N + tri.columns[i]] = acc;
            }
    return gxwt::MultiChannelSeries(std::move(s), N, x.sample_rate(), x.channel_names(), x.channel_triples());
}

struct Fixture {
    gxwt::FrequencyGrid grid = gxwt::make_grid(0.25, 4.0, 4);
    gxwt::MultiChannelSeries x;
    gxwt::MultiChannelSeries y;
    gxwt::CoiMask mask;

    explicit Fixture(std::uint64_t seed, std::size_t nx = 6, std::size_t ny = 4, std::size_t T = 1200)
        : x(make(seed, T, nx, "x")), y(make(seed + 1000, T, ny, "y")),
          mask(gxwt::cone_of_influence(grid, T, 40.0)) {}

    static gxwt::MultiChannelSeries make(std::uint64_t seed, std::size_t T, std::size_t N, const std::string& p) {
        Gen g(seed);
        return random_series(g, T, N, 40.0, p);
    }

    gxwt::GxwtGrid run(const gxwt::MultiChannelSeries& a, const gxwt::MultiChannelSeries& b) const {
        return gxwt::gxwt(gxwt::analytic_cwt(a, grid), gxwt::analytic_cwt(b, grid));
    }
};

double max_rel(const gxwt::GxwtGrid& a, const gxwt::GxwtGrid& b, const gxwt::CoiMask* mask = nullptr) {
    double worst = 0.0;
    for (std::size_t f = 0; f < a.frequencies(); ++f)
        for (std::size_t t = 0; t < a.length; ++t)
            if (!mask || (*mask)(f, t)) worst = std::max(worst, rel_diff(a(f, t), b(f, t)));
    return worst;
}

bool in_range(complex c) {
    if (c == complex{}) return true;
    const double a = std::arg(c);
    return c.real() >= 0.0 && a > -pi / 2 && a <= pi / 2;
}

} // namespace

TEST_CASE("cross spectrum entries", "[gxwt][cross]") {
    const std::vector<complex> u1{{1, 0}}, v1{{0, 1}};
    CHECK(gxwt::cross_spectrum(u1, v1)(0, 0) == complex(0, -1));

    const std::vector<complex> u2{std::polar(2.0, pi / 4)}, v2{std::polar(3.0, pi / 6)};
    const complex m = gxwt::cross_spectrum(u2, v2)(0, 0);
    CHECK(std::abs(m) == Catch::Approx(6.0).epsilon(1e-14));
    CHECK(std::arg(m) == Catch::Approx(pi / 12).epsilon(1e-13));

    try {
        gxwt::cross_spectrum(std::vector<complex>{}, v1);
        FAIL("no error");
    } catch (const gxwt::Error& e) {
        CHECK(e.code() == Errc::empty_fiber);
    }
}

TEST_CASE("cross spectrum reconstruction (property)", "[gxwt][cross][property]") {
    Gen g(1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto u = g.fiber(g.index(1, 7)), v = g.fiber(g.index(1, 7));
        const auto m = gxwt::cross_spectrum(u, v);
        REQUIRE(m.rows == u.size());
        REQUIRE(m.cols == v.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            for (std::size_t k = 0; k < v.size(); ++k) CHECK(rel_diff(m(j, k) / std::conj(v[k]), u[j]) < 1e-13);
    }
}

TEST_CASE("pseudo-variance examples", "[gxwt][tau]") {
    const complex z = std::polar(1.5, 0.4);
    gxwt::CrossSpectrumMatrix constant{{z, z, z, z}, 2, 2};
    CHECK(rel_diff(gxwt::pseudo_variance(constant), std::polar(2.25, 0.8)) < 1e-15);

    gxwt::CrossSpectrumMatrix circle{{{1, 0}, {0, 1}, {0, 1}, {-1, 0}}, 2, 2};
    CHECK(gxwt::pseudo_variance(circle) == complex{});

    Gen g(2);
    for (int trial = 0; trial < 100; ++trial) {
        gxwt::CrossSpectrumMatrix r{g.fiber(9), 3, 3};
        complex brute{};
        for (int i = 0; i < 9; ++i) brute += r.entries[i] * r.entries[i];
        brute /= 9.0;
        CHECK(std::abs(gxwt::pseudo_variance(r) - brute) <= 1e-12 * std::max(1.0, std::abs(brute)));
    }
}

TEST_CASE("distribution shape", "[gxwt][shape]") {
    const complex z = std::polar(0.8, -1.1);
    const auto line = gxwt::distribution_shape({{z, z, z, z}, 2, 2});
    CHECK(line.variance == Catch::Approx(0.64).epsilon(1e-14));
    CHECK(line.eccentricity == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(line.orientation == Catch::Approx(-1.1).epsilon(1e-14));

    const auto circle = gxwt::distribution_shape({{{1, 0}, {0, 1}, {0, 1}, {-1, 0}}, 2, 2});
    CHECK(circle.variance == 1.0);
    CHECK(circle.eccentricity == 0.0);
    CHECK(circle.orientation == 0.0);

    Gen g(6);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = g.index(1, 5), m = g.index(1, 5);
        gxwt::CrossSpectrumMatrix r{g.fiber(n * m), n, m};
        const auto s = gxwt::distribution_shape(r);
        const double tau = std::abs(gxwt::pseudo_variance(r));
        CHECK(std::abs(tau - s.variance * s.eccentricity * s.eccentricity) <= 1e-12 * std::max(1.0, tau));
        CHECK(s.eccentricity <= 1.0);
    }
}

TEST_CASE("principal branch", "[gxwt][branch]") {
    CHECK(gxwt::principal_sqrt(complex{}) == complex{});
    CHECK(gxwt::principal_sqrt({-4.0, 0.0}).imag() == Catch::Approx(2.0));
    CHECK(gxwt::principal_sqrt({-4.0, -0.0}).imag() == Catch::Approx(2.0));
    CHECK(std::abs(gxwt::principal_sqrt({-4.0, 0.0}).real()) < 1e-15);
    CHECK(gxwt::fold_half_pi(3 * pi / 4) == Catch::Approx(-pi / 4));
    CHECK(gxwt::fold_half_pi(pi / 2) == Catch::Approx(pi / 2));
    CHECK(gxwt::fold_half_pi(-pi / 2) == Catch::Approx(pi / 2));
    Gen g(10);
    for (int i = 0; i < 1000; ++i) {
        const complex tau = g.cnormal();
        const complex c = gxwt::principal_sqrt(tau);
        CHECK(in_range(c));
        CHECK(rel_diff(c * c, tau) < 1e-14);
    }
}

TEST_CASE("pairwise examples", "[gxwt][pairwise]") {
    const auto u = tensor_from({{{1, 0}, {0, 1}}}, 2);
    const auto p = gxwt::pairwise_gxwt(u, u);
    CHECK(p(0, 0) == complex(1.0, 0.0));

    Gen g(12);
    std::vector<std::vector<complex>> a, b;
    for (int t = 0; t < 50; ++t) {
        a.push_back(g.fiber(4));
        b.push_back(g.fiber(4));
    }
    const auto ua = tensor_from(a, 4), ub = tensor_from(b, 4);
    const auto pw = gxwt::pairwise_gxwt(ua, ub);
    CHECK(pw.variant == gxwt::Variant::pairwise);
    for (std::size_t t = 0; t < 50; ++t) {
        complex tau{};
        for (std::size_t j = 0; j < 4; ++j) {
            const complex m = a[t][j] * std::conj(b[t][j]);
            tau += m * m;
        }
        tau /= 4.0;
        CHECK(std::abs(pw(0, t) * pw(0, t) - tau) <= 1e-12 * std::max(1.0, std::abs(tau)));
        CHECK(in_range(pw(0, t)));
    }

    const auto uc = tensor_from({{{1, 0}, {0, 1}, {1, 1}}}, 3);
    try {
        gxwt::pairwise_gxwt(ua, uc);
        FAIL("no error");
    } catch (const gxwt::Error& e) {
        CHECK(e.code() == Errc::length_mismatch);
    }
    const auto ud = tensor_from(std::vector<std::vector<complex>>(50, std::vector<complex>(3, {1, 0})), 3);
    try {
        gxwt::pairwise_gxwt(ua, ud);
        FAIL("no error");
    } catch (const gxwt::Error& e) {
        CHECK(e.code() == Errc::dimension_mismatch);
        CHECK(std::string(e.what()).find("4 and 3") != std::string::npos);
    }
}

TEST_CASE("single channel reduces to the bivariate cross transform", "[gxwt][bivariate]") {
    Gen g(13);
    std::vector<std::vector<complex>> a, b;
    for (int t = 0; t < 300; ++t) {
        a.push_back(g.fiber(1));
        b.push_back(g.fiber(1));
    }
    const auto ua = tensor_from(a, 1), ub = tensor_from(b, 1);
    const auto c = gxwt::gxwt(ua, ub);
    const auto p = gxwt::pairwise_gxwt(ua, ub);
    CHECK(c.values == p.values);
    for (std::size_t t = 0; t < 300; ++t) {
        const complex w = a[t][0] * std::conj(b[t][0]);
        CHECK(std::abs(std::abs(c(0, t)) - std::abs(w)) <= 1e-12 * std::abs(w));
        CHECK(angle_gap(std::arg(c(0, t)), std::arg(w), pi) < 1e-12);
    }
}

TEST_CASE("identical unit sinusoids give unit modulus and zero phase", "[gxwt]") {
    for (std::size_t N : {1u, 2u, 5u}) {
        const auto x = make_series(6400, N, 100.0, [](double t, std::size_t) { return std::cos(2.0 * pi * t); });
        const auto grid = gxwt::make_grid(0.125, 4.0, 8);
        const auto u = gxwt::analytic_cwt(x, grid);
        const auto c = gxwt::gxwt(u, u);
        const auto mask = gxwt::cone_of_influence(grid, 6400, 100.0);
        const std::size_t f = grid.nearest(1.0);
        // The Gaussian envelope has standard deviation equal to the Morlet scale, so a
        // record edge at distance d keeps Phi(d / s) of the window: |u| is the covered
        // mass and c = u^2 for identical channels.
        const double s = gxwt::morlet_scale(1.0, 6.0);
        const double duration = 6399 / 100.0;
        auto covered = [&](double t) {
            auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
            return phi(t / s) + phi((duration - t) / s) - 1.0;
        };
        std::vector<double> mods;
        for (std::size_t t = 0; t < 6400; ++t) {
            if (!mask(f, t)) continue;
            const double time = t / 100.0;
            const double envelope = covered(time);
            CHECK(std::abs(c(f, t)) == Catch::Approx(envelope * envelope).epsilon(0.01));
            if (envelope > 0.999) CHECK(std::abs(c(f, t)) == Catch::Approx(1.0).epsilon(0.01));
            CHECK(std::abs(std::arg(c(f, t))) < 0.02);
            mods.push_back(std::abs(c(f, t)));
        }
        std::nth_element(mods.begin(), mods.begin() + mods.size() / 2, mods.end());
        CHECK(mods[mods.size() / 2] == Catch::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("every output lies in the right half plane", "[gxwt][property]") {
    const Fixture fx(30, 3, 5);
    const auto c = fx.run(fx.x, fx.y);
    CHECK(std::all_of(c.values.begin(), c.values.end(), in_range));
    CHECK(std::all_of(c.values.begin(), c.values.end(), [](complex z) { return std::isfinite(std::abs(z)); }));
}

TEST_CASE("translation invariance", "[gxwt][invariance]") {
    Gen g(40);
    const Fixture fx(40);
    const auto base = fx.run(fx.x, fx.y);
    std::vector<double> offsets(fx.x.channels());
    for (auto& o : offsets) o = g.uniform(-50.0, 50.0);
    const auto shifted = map_series(fx.x, [&](double v, std::size_t, std::size_t n) { return v + offsets[n]; });
    const auto moved = fx.run(shifted, fx.y);
    double offset_mag = 0.0;
    for (double o : offsets) offset_mag = std::max(offset_mag, std::abs(o));
    bool ok = true;
    for (std::size_t f = 0; f < base.frequencies(); ++f)
        for (std::size_t t = 0; t < base.length; ++t)
            if (fx.mask(f, t))
                ok = ok && std::abs(std::abs(moved(f, t)) - std::abs(base(f, t))) <=
                               1e-6 * (offset_mag + std::abs(base(f, t)));
    CHECK(ok);
}

TEST_CASE("common rotation of declared triples", "[gxwt][invariance]") {
    Gen g(50);
    for (int trial = 0; trial < 3; ++trial) {
        Fixture fx(50 + trial);
        const auto x = fx.x.with_triples({{"a", {0, 1, 2}}, {"b", {3, 4, 5}}});
        const auto r = random_rotation(g);
        const auto base = fx.run(x, fx.y);
        const auto turned = fx.run(rotate_triples(x, r), fx.y);
        CHECK(max_rel(base, turned) <= 1e-9);
    }
}

TEST_CASE("pairwise coupling is not rotation invariant", "[gxwt][invariance]") {
    // Y carries X's first triple with a 90 degree phase lag on its second axis.
    const auto x = make_series(2000, 3, 40.0, [](double t, std::size_t n) {
        return std::cos(2.0 * pi * t + 0.9 * static_cast<double>(n));
    }).with_triples({{"m", {0, 1, 2}}});
    const auto y = make_series(2000, 3, 40.0, [](double t, std::size_t n) {
        return std::cos(2.0 * pi * t + 0.9 * static_cast<double>(n) - (n == 1 ? pi / 2 : 0.0));
    });
    const Mat3 r{{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}};
    const auto grid = gxwt::make_grid(0.5, 2.0, 4);
    const auto uy = gxwt::analytic_cwt(y, grid);
    const auto before = gxwt::pairwise_gxwt(gxwt::analytic_cwt(x, grid), uy);
    const auto after = gxwt::pairwise_gxwt(gxwt::analytic_cwt(rotate_triples(x, r), grid), uy);
    const std::size_t f = grid.nearest(1.0);
    CHECK(rel_diff(before(f, 1000), after(f, 1000)) > 1e-3);

    const auto full_before = gxwt::gxwt(gxwt::analytic_cwt(x, grid), uy);
    const auto full_after = gxwt::gxwt(gxwt::analytic_cwt(rotate_triples(x, r), grid), uy);
    CHECK(rel_diff(full_before(f, 1000), full_after(f, 1000)) < 1e-9);
}

TEST_CASE("reflection invariance is exact", "[gxwt][invariance]") {
    Gen g(60);
    const Fixture fx(60);
    const auto base = fx.run(fx.x, fx.y);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> sx(fx.x.channels()), sy(fx.y.channels());
        for (auto& s : sx) s = g.uniform() < 0.5 ? -1.0 : 1.0;
        for (auto& s : sy) s = g.uniform() < 0.5 ? -1.0 : 1.0;
        const auto fx2 = map_series(fx.x, [&](double v, std::size_t, std::size_t n) { return sx[n] * v; });
        const auto fy2 = map_series(fx.y, [&](double v, std::size_t, std::size_t n) { return sy[n] * v; });
        CHECK(fx.run(fx2, fy2).values == base.values);
    }
    const auto negated = map_series(fx.y, [](double v, std::size_t, std::size_t) { return -v; });
    CHECK(fx.run(fx.x, negated).values == base.values);
}

TEST_CASE("channel permutation invariance", "[gxwt][invariance]") {
    Gen g(70);
    const Fixture fx(70);
    const auto base = fx.run(fx.x, fx.y);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<std::size_t> px(fx.x.channels()), py(fx.y.channels());
        std::iota(px.begin(), px.end(), 0);
        std::iota(py.begin(), py.end(), 0);
        std::shuffle(px.begin(), px.end(), g.engine);
        std::shuffle(py.begin(), py.end(), g.engine);
        const auto xp = gxwt::select_channels(fx.x, gxwt::ChannelSelector::indices(px));
        const auto yp = gxwt::select_channels(fx.y, gxwt::ChannelSelector::indices(py));
        CHECK(max_rel(base, fx.run(xp, yp)) <= 1e-12);
    }
}

TEST_CASE("amplitude homogeneity", "[gxwt][invariance]") {
    const Fixture fx(80);
    const auto base = fx.run(fx.x, fx.y);
    for (double s : {2.0, -0.25, 3.7, -1e3}) {
        const auto scaled = fx.run(map_series(fx.x, [&](double v, std::size_t, std::size_t) { return s * v; }), fx.y);
        double worst_mod = 0.0, worst_arg = 0.0;
        for (std::size_t i = 0; i < base.values.size(); ++i) {
            const double b = std::abs(base.values[i]);
            if (b == 0.0) continue;
            worst_mod = std::max(worst_mod, std::abs(std::abs(scaled.values[i]) - std::abs(s) * b) / (std::abs(s) * b));
            worst_arg = std::max(worst_arg, angle_gap(std::arg(scaled.values[i]), std::arg(base.values[i]), pi));
        }
        CHECK(worst_mod <= 1e-12);
        CHECK(worst_arg <= 1e-12);
        if (s == 2.0 || s == -0.25) {
            // Powers of two scale without rounding.
            bool exact = true;
            for (std::size_t i = 0; i < base.values.size(); ++i)
                exact = exact && std::abs(scaled.values[i]) == std::abs(s) * std::abs(base.values[i]);
            CHECK(exact);
        }
    }
}

TEST_CASE("argument swap conjugates", "[gxwt][invariance]") {
    const Fixture fx(90, 3, 2);
    const auto xy = fx.run(fx.x, fx.y);
    const auto yx = fx.run(fx.y, fx.x);
    // Only the summation order differs; near the fold the branch may pick -conj.
    double worst = 0.0;
    for (std::size_t i = 0; i < xy.values.size(); ++i) {
        const complex a = std::conj(xy.values[i]), b = yx.values[i];
        worst = std::max(worst, std::min(rel_diff(a, b), rel_diff(-a, b)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("incompatible tensors are rejected", "[gxwt]") {
    const auto a = tensor_from({{{1, 0}}, {{1, 0}}}, 1);
    const auto b = tensor_from({{{1, 0}}}, 1);
    try {
        gxwt::gxwt(a, b);
        FAIL("no error");
    } catch (const gxwt::Error& e) {
        CHECK(e.code() == Errc::length_mismatch);
    }
    auto c = a;
    c.grid.frequencies[0] = 3.0;
    try {
        gxwt::gxwt(a, c);
        FAIL("no error");
    } catch (const gxwt::Error& e) {
        CHECK(e.code() == Errc::grid_mismatch);
    }
}
