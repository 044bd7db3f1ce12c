#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gxwt/detail/text.hpp"
#include "gxwt/error.hpp"

namespace gxwt {

/// Three columns forming one 3-D marker (x, y, z order).
struct ChannelTriple {
    std::string name;
    std::array<std::size_t, 3> columns{};

    friend bool operator==(const ChannelTriple&, const ChannelTriple&) = default;
};

/// Uniformly sampled real T x N signal, stored row-major (time-major).
/// Immutable once constructed; every constructor path validates the invariants.
class MultiChannelSeries {
public:
    MultiChannelSeries(std::vector<double> samples, std::size_t channels, double sample_rate,
                       std::vector<std::string> channel_names,
                       std::vector<ChannelTriple> triples = {})
        : samples_(std::move(samples)), channels_(channels), sample_rate_(sample_rate),
          names_(std::move(channel_names)), triples_(std::move(triples)) {
        validate();
    }

    std::size_t length() const noexcept { return channels_ ? samples_.size() / channels_ : 0; }
    std::size_t channels() const noexcept { return channels_; }
    double sample_rate() const noexcept { return sample_rate_; }
    const std::vector<double>& samples() const noexcept { return samples_; }
    const std::vector<std::string>& channel_names() const noexcept { return names_; }
    const std::vector<ChannelTriple>& channel_triples() const noexcept { return triples_; }

    double operator()(std::size_t t, std::size_t n) const { return samples_[t * channels_ + n]; }

    std::vector<double> column(std::size_t n) const {
        std::vector<double> out(length());
        for (std::size_t t = 0; t < out.size(); ++t) out[t] = samples_[t * channels_ + n];
        return out;
    }

    std::optional<std::size_t> index_of(std::string_view name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - names_.begin());
    }

    /// Same samples, new triple declarations.
    MultiChannelSeries with_triples(std::vector<ChannelTriple> triples) const {
        return MultiChannelSeries(samples_, channels_, sample_rate_, names_, std::move(triples));
    }

    friend bool operator==(const MultiChannelSeries&, const MultiChannelSeries&) = default;

private:
    void validate() const {
        if (channels_ == 0) throw Error(Errc::invalid_series, "series needs at least one channel");
        if (samples_.size() % channels_ != 0)
            throw Error(Errc::invalid_series, "sample count is not a multiple of the channel count");
        if (length() < 2) throw Error(Errc::too_short, "series needs at least 2 samples, got " +
                                                           std::to_string(length()));
        if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_))
            throw Error(Errc::invalid_series, "sample rate must be positive and finite");
        if (names_.size() != channels_)
            throw Error(Errc::invalid_series, "expected " + std::to_string(channels_) +
                                                  " channel names, got " + std::to_string(names_.size()));
        std::set<std::string_view> seen;
        for (const auto& name : names_) {
            if (name.empty()) throw Error(Errc::header_parse, "empty channel name");
            if (!seen.insert(name).second) throw Error(Errc::header_parse, "duplicate channel name '" + name + "'");
        }
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            if (!std::isfinite(samples_[i]))
                throw Error(Errc::invalid_series, "non-finite sample at row " + std::to_string(i / channels_) +
                                                      ", channel " + std::to_string(i % channels_));
        }
        std::set<std::size_t> used;
        for (const auto& triple : triples_) {
            for (auto col : triple.columns) {
                if (col >= channels_)
                    throw Error(Errc::invalid_series, "triple '" + triple.name + "' column out of range");
                if (!used.insert(col).second)
                    throw Error(Errc::invalid_series, "column " + std::to_string(col) + " is in more than one triple");
            }
        }
    }

    std::vector<double> samples_;
    std::size_t channels_ = 0;
    double sample_rate_ = 0.0;
    std::vector<std::string> names_;
    std::vector<ChannelTriple> triples_;
};

// ---------------------------------------------------------------------------
// Channel selection

struct IndexRange {
    std::size_t begin = 0; ///< inclusive
    std::size_t end = 0;   ///< exclusive
};

/// A name, or a glob when it contains '*'.
struct NamePattern {
    std::string pattern;
};

/// Refers to a declared 3-D triple by name; expands to its three columns.
struct TripleRef {
    std::string name;
};

using SelectorEntry = std::variant<std::size_t, IndexRange, NamePattern, TripleRef>;

struct ChannelSelector {
    enum class Mode { indices, name_globs, triple_names, mixed };

    Mode mode = Mode::mixed;
    std::vector<SelectorEntry> entries;

    static ChannelSelector indices(std::vector<std::size_t> idx) {
        ChannelSelector sel{Mode::indices, {}};
        for (auto i : idx) sel.entries.emplace_back(i);
        return sel;
    }
    static ChannelSelector globs(const std::vector<std::string>& patterns) {
        ChannelSelector sel{Mode::name_globs, {}};
        for (const auto& p : patterns) sel.entries.emplace_back(NamePattern{p});
        return sel;
    }
    static ChannelSelector triples(const std::vector<std::string>& names) {
        ChannelSelector sel{Mode::triple_names, {}};
        for (const auto& n : names) sel.entries.emplace_back(TripleRef{n});
        return sel;
    }
    /// Every channel of `series`, in order.
    static ChannelSelector all(const MultiChannelSeries& series) {
        return globs(series.channel_names());
    }
};

namespace detail {

/// '*' matches any (possibly empty) run of characters; nothing else is special.
inline bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (p < pattern.size() && pattern[p] == text[t]) {
            ++p;
            ++t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t value = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

} // namespace detail

/// Resolves a selector to column indices in selector order.
inline std::vector<std::size_t> resolve(const MultiChannelSeries& series, const ChannelSelector& sel) {
    std::vector<std::size_t> out;
    const auto n = series.channels();
    auto push = [&](std::size_t idx, const std::string& label) {
        if (idx >= n) throw Error(Errc::unknown_name, "index " + std::to_string(idx) + " out of range (" +
                                                          std::to_string(n) + " channels)");
        if (std::find(out.begin(), out.end(), idx) != out.end())
            throw Error(Errc::duplicate_channel, "channel '" + label + "' selected twice");
        out.push_back(idx);
    };
    for (const auto& entry : sel.entries) {
        if (auto* idx = std::get_if<std::size_t>(&entry)) {
            push(*idx, std::to_string(*idx));
        } else if (auto* range = std::get_if<IndexRange>(&entry)) {
            if (range->begin > range->end)
                throw Error(Errc::unknown_name, "range " + std::to_string(range->begin) + ".." +
                                                    std::to_string(range->end) + " is reversed");
            for (auto i = range->begin; i < range->end; ++i) push(i, std::to_string(i));
        } else if (auto* pat = std::get_if<NamePattern>(&entry)) {
            if (pat->pattern.find('*') != std::string::npos) {
                for (std::size_t i = 0; i < n; ++i)
                    if (detail::glob_match(pat->pattern, series.channel_names()[i]))
                        push(i, series.channel_names()[i]);
            } else if (auto i = series.index_of(pat->pattern)) {
                push(*i, pat->pattern);
            } else if (auto number = detail::parse_index(pat->pattern)) {
                push(*number, pat->pattern);
            } else {
                throw Error(Errc::unknown_name, "no channel named '" + pat->pattern + "'");
            }
        } else {
            const auto& ref = std::get<TripleRef>(entry);
            const auto& triples = series.channel_triples();
            auto it = std::find_if(triples.begin(), triples.end(),
                                   [&](const ChannelTriple& t) { return t.name == ref.name; });
            if (it == triples.end()) throw Error(Errc::unknown_name, "no triple named '" + ref.name + "'");
            for (auto col : it->columns) push(col, series.channel_names()[col]);
        }
    }
    if (out.empty()) throw Error(Errc::no_match, "selector resolves to no channels");
    return out;
}

/// Columns in selector order; triples survive only when all three columns are selected.
inline MultiChannelSeries select_channels(const MultiChannelSeries& series, const ChannelSelector& sel) {
    const auto cols = resolve(series, sel);
    const auto T = series.length();
    std::vector<double> samples(T * cols.size());
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < cols.size(); ++j) samples[t * cols.size() + j] = series(t, cols[j]);

    std::vector<std::string> names;
    names.reserve(cols.size());
    for (auto c : cols) names.push_back(series.channel_names()[c]);

    std::vector<ChannelTriple> triples;
    for (const auto& triple : series.channel_triples()) {
        ChannelTriple mapped{triple.name, {}};
        bool complete = true;
        for (std::size_t k = 0; k < 3 && complete; ++k) {
            auto it = std::find(cols.begin(), cols.end(), triple.columns[k]);
            if (it == cols.end()) complete = false;
            else mapped.columns[k] = static_cast<std::size_t>(it - cols.begin());
        }
        if (complete) triples.push_back(std::move(mapped));
    }
    return MultiChannelSeries(std::move(samples), cols.size(), series.sample_rate(), std::move(names),
                              std::move(triples));
}

// ---------------------------------------------------------------------------
// Selector sidecar file
//
//   group_name: entry, entry, ...
//   triple name: x_col, y_col, z_col
//
// Entries are channel names, '*' globs, 0-based ranges `a..b` (end exclusive),
// or `@triple` references. Blank lines and lines starting with '#' are ignored.

struct TripleDeclaration {
    std::string name;
    ChannelSelector columns; ///< must resolve to exactly three columns
};

struct SelectorFile {
    std::map<std::string, ChannelSelector> groups;
    std::vector<TripleDeclaration> triples;

    const ChannelSelector& group(const std::string& name) const {
        auto it = groups.find(name);
        if (it == groups.end()) throw Error(Errc::unknown_name, "no selector group '" + name + "'");
        return it->second;
    }
};

inline SelectorEntry parse_selector_entry(std::string_view text) {
    text = detail::trim(text);
    if (text.empty()) throw Error(Errc::format_error, "empty selector entry");
    if (text.front() == '@') return TripleRef{std::string(text.substr(1))};
    if (auto dots = text.find(".."); dots != std::string_view::npos) {
        auto a = detail::parse_index(detail::trim(text.substr(0, dots)));
        auto b = detail::parse_index(detail::trim(text.substr(dots + 2)));
        if (a && b) return IndexRange{*a, *b};
    }
    return NamePattern{std::string(text)};
}

inline SelectorFile parse_selector_file(std::istream& in) {
    SelectorFile out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto colon = text.find(':');
        if (colon == std::string_view::npos)
            throw Error(Errc::format_error, "selector line " + std::to_string(line_no) + " has no ':'");
        auto head = detail::trim(text.substr(0, colon));
        ChannelSelector sel;
        for (auto part : detail::split(text.substr(colon + 1), ',')) sel.entries.push_back(parse_selector_entry(part));
        if (head.rfind("triple ", 0) == 0) {
            auto name = std::string(detail::trim(head.substr(7)));
            if (name.empty()) throw Error(Errc::format_error, "unnamed triple on line " + std::to_string(line_no));
            out.triples.push_back({std::move(name), std::move(sel)});
        } else {
            if (head.empty()) throw Error(Errc::format_error, "unnamed group on line " + std::to_string(line_no));
            if (!out.groups.emplace(std::string(head), std::move(sel)).second)
                throw Error(Errc::format_error, "group '" + std::string(head) + "' declared twice");
        }
    }
    return out;
}

inline SelectorFile load_selector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, path);
    return parse_selector_file(in);
}

/// Attaches the file's triple declarations to `series`. With `skip_unresolved`,
/// declarations naming channels absent from this series are ignored, which lets
/// one sidecar describe both members of a dyad.
inline MultiChannelSeries apply_triples(const MultiChannelSeries& series, const SelectorFile& file,
                                        bool skip_unresolved = false) {
    std::vector<ChannelTriple> triples;
    for (const auto& decl : file.triples) {
        std::vector<std::size_t> cols;
        try {
            cols = resolve(series, decl.columns);
        } catch (const Error& e) {
            if (skip_unresolved && (e.code() == Errc::unknown_name || e.code() == Errc::no_match)) continue;
            throw;
        }
        if (cols.size() != 3)
            throw Error(Errc::format_error, "triple '" + decl.name + "' resolves to " + std::to_string(cols.size()) +
                                                " columns");
        triples.push_back({decl.name, {cols[0], cols[1], cols[2]}});
    }
    return series.with_triples(std::move(triples));
}

// ---------------------------------------------------------------------------
// CSV

struct CsvOptions {
    /// Explicit rate in Hz. When absent the rate is derived from `time_column`.
    std::optional<double> sample_rate;
    /// Name of a time column in seconds; it is validated and dropped from the channels.
    std::optional<std::string> time_column;
};

inline MultiChannelSeries read_csv(std::istream& in, const CsvOptions& opts) {
    if (!opts.sample_rate && !opts.time_column)
        throw Error(Errc::format_error, "either a sample rate or a time column is required");

    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::header_parse, "missing header row");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    std::vector<std::string> header;
    for (auto cell : detail::split(line, ',')) header.emplace_back(detail::trim(cell));
    {
        std::set<std::string_view> seen;
        for (const auto& h : header) {
            if (h.empty()) throw Error(Errc::header_parse, "empty column name");
            if (!seen.insert(h).second) throw Error(Errc::header_parse, "duplicate column name '" + h + "'");
        }
    }

    std::optional<std::size_t> time_col;
    if (opts.time_column) {
        auto it = std::find(header.begin(), header.end(), *opts.time_column);
        if (it == header.end()) throw Error(Errc::header_parse, "no time column '" + *opts.time_column + "'");
        time_col = static_cast<std::size_t>(it - header.begin());
    }
    const std::size_t width = header.size();
    const std::size_t channels = width - (time_col ? 1 : 0);
    if (channels == 0) throw Error(Errc::header_parse, "no data columns");

    std::vector<double> samples;
    std::vector<double> times;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        ++row;
        auto cells = detail::split(line, ',');
        if (cells.size() != width)
            throw Error(Errc::format_error, "row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                                " cells, header has " + std::to_string(width));
        for (std::size_t c = 0; c < width; ++c) {
            auto value = detail::parse_double(cells[c]);
            if (!value) throw NonNumericCell(row, c + 1, std::string(detail::trim(cells[c])));
            if (time_col && c == *time_col) times.push_back(*value);
            else samples.push_back(*value);
        }
    }
    if (row < 2) throw Error(Errc::too_short, "series needs at least 2 rows, got " + std::to_string(row));

    double rate = opts.sample_rate.value_or(0.0);
    if (time_col) {
        std::vector<double> dt(times.size() - 1);
        for (std::size_t i = 0; i + 1 < times.size(); ++i) {
            dt[i] = times[i + 1] - times[i];
            if (!(dt[i] > 0.0))
                throw Error(Errc::non_uniform_sampling, "time column not strictly increasing at row " +
                                                            std::to_string(i + 2));
        }
        std::vector<double> sorted = dt;
        std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
        double median = sorted[sorted.size() / 2];
        if (sorted.size() % 2 == 0) {
            double lower = *std::max_element(sorted.begin(), sorted.begin() + sorted.size() / 2);
            median = 0.5 * (median + lower);
        }
        double jitter = 0.0;
        for (double d : dt) jitter = std::max(jitter, std::abs(d - median) / median);
        if (jitter > 1e-6) throw NonUniformSampling(jitter);
        if (!opts.sample_rate) rate = 1.0 / median;
    }

    std::vector<std::string> names;
    for (std::size_t c = 0; c < width; ++c)
        if (!time_col || c != *time_col) names.push_back(header[c]);
    return MultiChannelSeries(std::move(samples), channels, rate, std::move(names));
}

inline MultiChannelSeries load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::missing_file, path);
    return read_csv(in, opts);
}

/// Writes a header row and 17-significant-digit samples. With `time_column`
/// set, a leading column of that name holds t = i / sample_rate.
inline void write_csv(std::ostream& out, const MultiChannelSeries& series,
                      const std::optional<std::string>& time_column = std::nullopt) {
    bool first = true;
    if (time_column) {
        out << *time_column;
        first = false;
    }
    for (const auto& name : series.channel_names()) {
        if (!first) out << ',';
        out << name;
        first = false;
    }
    out << '\n';
    for (std::size_t t = 0; t < series.length(); ++t) {
        first = true;
        if (time_column) {
            out << detail::format_double(static_cast<double>(t) / series.sample_rate());
            first = false;
        }
        for (std::size_t n = 0; n < series.channels(); ++n) {
            if (!first) out << ',';
            out << detail::format_double(series(t, n));
            first = false;
        }
        out << '\n';
    }
}

inline void save_csv(const std::string& path, const MultiChannelSeries& series,
                     const std::optional<std::string>& time_column = std::nullopt) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::missing_file, "cannot open '" + path + "' for writing");
    write_csv(out, series, time_column);
    if (!out) throw Error(Errc::format_error, "write to '" + path + "' failed");
}

} // namespace gxwt
