// Command-line front end: simulate, cwt, gxwt, contrib, spectrum, phase, render.
//
// Exit codes: 0 success, 1 usage error, 2 input/format error,
// 3 numerical precondition violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gxwt.hpp"

namespace {

constexpr int exit_usage = 1;
constexpr int exit_input = 2;
constexpr int exit_numerical = 3;

struct SeriesFlags {
    std::optional<double> rate;
    std::optional<std::string> time_column;
    std::optional<std::string> selector_file;
    std::optional<std::string> group_x;
    std::optional<std::string> group_y;
    std::optional<std::string> select_x;
    std::optional<std::string> select_y;
};

struct GridFlags {
    double fmin = 0.1;
    double fmax = 8.0;
    int voices = 8;
    double cycles = 6.0;
};

void add_series_flags(CLI::App* cmd, SeriesFlags& f, bool pair) {
    cmd->add_option("--rate", f.rate, "Sample rate in Hz");
    cmd->add_option("--time-column", f.time_column, "Name of a time column in seconds");
    cmd->add_option("--selector", f.selector_file, "Selector sidecar file (groups and triples)");
    if (pair) {
        cmd->add_option("--group-x", f.group_x, "Selector group applied to the first series");
        cmd->add_option("--group-y", f.group_y, "Selector group applied to the second series");
        cmd->add_option("--select-x", f.select_x, "Inline selector for the first series, e.g. 'h*,0..3'");
        cmd->add_option("--select-y", f.select_y, "Inline selector for the second series");
    } else {
        cmd->add_option("--group", f.group_x, "Selector group");
        cmd->add_option("--select", f.select_x, "Inline selector, e.g. 'h*,0..3'");
    }
}

void add_grid_flags(CLI::App* cmd, GridFlags& g) {
    cmd->add_option("--fmin", g.fmin, "Lowest frequency in Hz")->capture_default_str();
    cmd->add_option("--fmax", g.fmax, "Highest frequency in Hz")->capture_default_str();
    cmd->add_option("--voices", g.voices, "Voices per octave")->capture_default_str();
    cmd->add_option("--cycles", g.cycles, "Morlet centre frequency (dimensionless, >= 4)")->capture_default_str();
}

gxwt::ChannelSelector inline_selector(const std::string& text) {
    gxwt::ChannelSelector sel;
    for (auto part : gxwt::detail::split(text, ',')) sel.entries.push_back(gxwt::parse_selector_entry(part));
    return sel;
}

gxwt::MultiChannelSeries load_series(const std::string& path, const SeriesFlags& f,
                                     const std::optional<gxwt::SelectorFile>& selectors,
                                     const std::optional<std::string>& group,
                                     const std::optional<std::string>& inline_sel) {
    if (!f.rate && !f.time_column)
        throw CLI::ValidationError("--rate/--time-column", "an explicit --rate or --time-column is required");
    auto series = gxwt::load_csv(path, {f.rate, f.time_column});
    if (selectors) series = gxwt::apply_triples(series, *selectors, true);
    if (group) {
        if (!selectors) throw CLI::ValidationError("--group", "a selector group needs --selector");
        series = gxwt::select_channels(series, selectors->group(*group));
    }
    if (inline_sel) series = gxwt::select_channels(series, inline_selector(*inline_sel));
    return series;
}

std::optional<gxwt::SelectorFile> load_selectors(const SeriesFlags& f) {
    if (!f.selector_file) return std::nullopt;
    return gxwt::load_selector_file(*f.selector_file);
}

gxwt::CoiPolicy parse_policy(const std::string& s) {
    if (s == "coi-only") return gxwt::CoiPolicy::coi_only;
    if (s == "all-points") return gxwt::CoiPolicy::all_points;
    throw CLI::ValidationError("--coi-policy", "expected coi-only or all-points, got '" + s + "'");
}

template <class Writer>
void write_output(const std::optional<std::string>& path, Writer&& writer) {
    if (!path || *path == "-") {
        writer(std::cout);
        return;
    }
    std::ofstream out(*path);
    if (!out) throw gxwt::Error(gxwt::Errc::missing_file, "cannot open '" + *path + "' for writing");
    writer(out);
    if (!out) throw gxwt::Error(gxwt::Errc::format_error, "write to '" + *path + "' failed");
}

void warn_short_rows(const gxwt::WaveletTensor& u, const std::string& label) {
    if (u.short_rows.empty()) return;
    std::cerr << "warning: " << label << ": " << u.short_rows.size()
              << " frequency rows exceed the record length and lie outside the cone of influence (TooShort)\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized cross-wavelet transform for multichannel time series"};
    app.require_subcommand(1);

    // simulate
    gxwt::SimConfig sim;
    std::string sim_out_x, sim_out_y;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic sinusoid dyad as two CSV files");
    simulate->add_option("--channels", sim.n_channels, "Channels per series")->capture_default_str();
    simulate->add_option("--f0", sim.f0, "Frequency in Hz")->capture_default_str();
    simulate->add_option("--alpha-x", sim.alpha_x, "Phase offset of X in radians")->capture_default_str();
    simulate->add_option("--alpha-y", sim.alpha_y, "Phase offset of Y in radians")->capture_default_str();
    simulate->add_option("--amp-x", sim.amp_x, "Amplitude of X")->capture_default_str();
    simulate->add_option("--amp-y", sim.amp_y, "Amplitude of Y")->capture_default_str();
    simulate->add_option("--var-x", sim.var_x, "Phase variance of X channels (rad^2)")->capture_default_str();
    simulate->add_option("--var-y", sim.var_y, "Phase variance of Y channels (rad^2)")->capture_default_str();
    simulate->add_option("--rate", sim.sample_rate, "Sample rate in Hz")->capture_default_str();
    simulate->add_option("--duration", sim.duration, "Duration in seconds")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--out-x", sim_out_x, "Output CSV for X")->required();
    simulate->add_option("--out-y", sim_out_y, "Output CSV for Y")->required();

    // cwt
    std::string cwt_input, cwt_prefix;
    SeriesFlags cwt_series;
    GridFlags cwt_grid;
    auto* cwt = app.add_subcommand("cwt", "Wavelet transform of every channel plus the cone-of-influence mask");
    cwt->add_option("series", cwt_input, "Input CSV")->required();
    add_series_flags(cwt, cwt_series, false);
    add_grid_flags(cwt, cwt_grid);
    cwt->add_option("--out-prefix", cwt_prefix, "Writes <prefix>_<channel>.grid and <prefix>_coi.grid")->required();

    // gxwt
    std::string gx_a, gx_b;
    std::optional<std::string> gx_out;
    SeriesFlags gx_series;
    GridFlags gx_grid;
    bool gx_pairwise = false;
    auto* gx = app.add_subcommand("gxwt", "Generalized cross-wavelet transform of two series");
    gx->add_option("x", gx_a, "First series CSV")->required();
    gx->add_option("y", gx_b, "Second series CSV")->required();
    add_series_flags(gx, gx_series, true);
    add_grid_flags(gx, gx_grid);
    gx->add_flag("--pairwise", gx_pairwise, "Couple corresponding channels only");
    gx->add_option("--out", gx_out, "Output grid file (default stdout)");

    // contrib
    std::string ct_a, ct_b, ct_prefix;
    SeriesFlags ct_series;
    GridFlags ct_grid;
    double ct_floor = 0.0;
    auto* ct = app.add_subcommand("contrib", "Per-channel contributions to the cross transform");
    ct->add_option("x", ct_a, "First series CSV")->required();
    ct->add_option("y", ct_b, "Second series CSV")->required();
    add_series_flags(ct, ct_series, true);
    add_grid_flags(ct, ct_grid);
    ct->add_option("--validity-floor", ct_floor, "Points with |c| at or below this are flagged invalid")
        ->capture_default_str();
    ct->add_option("--out-prefix", ct_prefix,
                   "Writes <prefix>_x_<channel>.grid, <prefix>_y_<channel>.grid and <prefix>_valid.grid")
        ->required();

    // spectrum
    std::string sp_grid, sp_policy = "coi-only";
    std::optional<std::string> sp_mask, sp_out;
    auto* sp = app.add_subcommand("spectrum", "Interaction spectrum: temporal mean of |c| per frequency");
    sp->add_option("grid", sp_grid, "Cross-transform grid file")->required();
    sp->add_option("--mask", sp_mask, "Mask grid file (overrides the policy's computed mask)");
    sp->add_option("--coi-policy", sp_policy, "coi-only or all-points")->capture_default_str();
    sp->add_option("--out", sp_out, "Output CSV (default stdout)");

    // phase
    std::string ph_grid, ph_policy = "coi-only";
    std::vector<double> ph_band;
    std::optional<std::string> ph_mask, ph_out;
    auto* ph = app.add_subcommand("phase", "Band-restricted circular mean of the mod-pi phase");
    ph->add_option("grid", ph_grid, "Cross-transform grid file")->required();
    ph->add_option("--band", ph_band, "Band edges in Hz: LO HI")->required()->expected(2);
    ph->add_option("--mask", ph_mask, "Mask grid file");
    ph->add_option("--coi-policy", ph_policy, "coi-only or all-points")->capture_default_str();
    ph->add_option("--out", ph_out, "Output CSV (default stdout)");

    // render
    std::string rd_grid, rd_part = "mod";
    std::optional<std::string> rd_out;
    std::size_t rd_cols = 600;
    auto* rd = app.add_subcommand("render", "SVG heatmap of a grid file");
    rd->add_option("grid", rd_grid, "Grid file")->required();
    rd->add_option("--part", rd_part, "mod, real or imag")->capture_default_str();
    rd->add_option("--max-columns", rd_cols, "Time cells after averaging")->capture_default_str();
    rd->add_option("--out", rd_out, "Output SVG (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << " (see --help)\n";
        return exit_usage;
    }

    try {
        if (*simulate) {
            auto dyad = gxwt::simulate_dyad(sim);
            gxwt::save_csv(sim_out_x, dyad.x, std::string("t"));
            gxwt::save_csv(sim_out_y, dyad.y, std::string("t"));
        } else if (*cwt) {
            const auto selectors = load_selectors(cwt_series);
            const auto series = load_series(cwt_input, cwt_series, selectors, cwt_series.group_x, cwt_series.select_x);
            const auto grid = gxwt::make_grid(cwt_grid.fmin, cwt_grid.fmax, cwt_grid.voices);
            const auto u = gxwt::analytic_cwt(series, grid, cwt_grid.cycles);
            warn_short_rows(u, cwt_input);
            for (std::size_t n = 0; n < u.channels(); ++n)
                gxwt::save_grid(cwt_prefix + "_" + u.channel_names[n] + ".grid", gxwt::to_grid_file(u, n));
            const auto mask = gxwt::cone_of_influence(grid, series.length(), series.sample_rate(), cwt_grid.cycles);
            gxwt::save_grid(cwt_prefix + "_coi.grid",
                            gxwt::to_grid_file(mask, grid, series.sample_rate(), cwt_grid.cycles));
        } else if (*gx) {
            const auto selectors = load_selectors(gx_series);
            const auto x = load_series(gx_a, gx_series, selectors, gx_series.group_x, gx_series.select_x);
            const auto y = load_series(gx_b, gx_series, selectors, gx_series.group_y, gx_series.select_y);
            if (gx_pairwise && x.channels() != y.channels())
                throw gxwt::Error(gxwt::Errc::dimension_mismatch,
                                  "pairwise coupling needs equal channel counts, got " +
                                      std::to_string(x.channels()) + " and " + std::to_string(y.channels()));
            const auto grid = gxwt::make_grid(gx_grid.fmin, gx_grid.fmax, gx_grid.voices);
            const auto u = gxwt::analytic_cwt(x, grid, gx_grid.cycles);
            const auto v = gxwt::analytic_cwt(y, grid, gx_grid.cycles);
            warn_short_rows(u, gx_a);
            const auto g = gx_pairwise ? gxwt::pairwise_gxwt(u, v) : gxwt::gxwt(u, v);
            const auto file = gxwt::to_grid_file(g);
            write_output(gx_out, [&](std::ostream& out) { gxwt::write_grid(out, file); });
        } else if (*ct) {
            const auto selectors = load_selectors(ct_series);
            const auto x = load_series(ct_a, ct_series, selectors, ct_series.group_x, ct_series.select_x);
            const auto y = load_series(ct_b, ct_series, selectors, ct_series.group_y, ct_series.select_y);
            const auto grid = gxwt::make_grid(ct_grid.fmin, ct_grid.fmax, ct_grid.voices);
            const auto u = gxwt::analytic_cwt(x, grid, ct_grid.cycles);
            const auto v = gxwt::analytic_cwt(y, grid, ct_grid.cycles);
            warn_short_rows(u, ct_a);
            const auto g = gxwt::gxwt(u, v);
            gxwt::ContributionOptions opts;
            opts.validity_floor = ct_floor;
            const auto contrib = gxwt::channel_contributions(u, v, g, opts);
            for (std::size_t j = 0; j < contrib.x.channels(); ++j)
                gxwt::save_grid(ct_prefix + "_x_" + contrib.x.channel_names[j] + ".grid",
                                gxwt::to_grid_file(contrib.x, j, g.sample_rate, g.cycles, g.n_x, g.n_y));
            for (std::size_t k = 0; k < contrib.y.channels(); ++k)
                gxwt::save_grid(ct_prefix + "_y_" + contrib.y.channel_names[k] + ".grid",
                                gxwt::to_grid_file(contrib.y, k, g.sample_rate, g.cycles, g.n_x, g.n_y));
            auto valid = gxwt::to_grid_file(g);
            valid.kind = gxwt::GridKind::mask;
            valid.variant = "valid";
            valid.complex_data.clear();
            valid.real_data.assign(contrib.valid.begin(), contrib.valid.end());
            gxwt::save_grid(ct_prefix + "_valid.grid", valid);
        } else if (*sp) {
            const auto g = gxwt::to_gxwt_grid(gxwt::load_grid(sp_grid));
            const auto policy = parse_policy(sp_policy);
            gxwt::InteractionSpectrum s;
            if (sp_mask) s = gxwt::interaction_spectrum(g, gxwt::to_coi_mask(gxwt::load_grid(*sp_mask)));
            else s = gxwt::interaction_spectrum(g, policy);
            write_output(sp_out, [&](std::ostream& out) { gxwt::write_spectrum_csv(out, s); });
        } else if (*ph) {
            const auto g = gxwt::to_gxwt_grid(gxwt::load_grid(ph_grid));
            const auto policy = parse_policy(ph_policy);
            gxwt::PhaseBandSummary p;
            if (ph_mask) p = gxwt::phase_band_summary(g, ph_band[0], ph_band[1], gxwt::to_coi_mask(gxwt::load_grid(*ph_mask)));
            else p = gxwt::phase_band_summary(g, ph_band[0], ph_band[1], policy);
            write_output(ph_out, [&](std::ostream& out) { gxwt::write_phase_csv(out, p); });
        } else if (*rd) {
            const auto file = gxwt::load_grid(rd_grid);
            gxwt::RenderOptions opts;
            if (rd_part == "mod") opts.part = gxwt::RenderPart::modulus;
            else if (rd_part == "real") opts.part = gxwt::RenderPart::real;
            else if (rd_part == "imag") opts.part = gxwt::RenderPart::imag;
            else throw CLI::ValidationError("--part", "expected mod, real or imag, got '" + rd_part + "'");
            opts.max_columns = rd_cols;
            write_output(rd_out, [&](std::ostream& out) { gxwt::render_svg(out, file, opts); });
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const gxwt::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gxwt::is_numerical(e.code()) ? exit_numerical : exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
    return 0;
}
