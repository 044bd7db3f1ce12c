#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gxwt {

enum class Errc {
    // input / format problems
    missing_file,
    header_parse,
    non_numeric_cell,
    non_uniform_sampling,
    too_short,
    unknown_name,
    duplicate_channel,
    no_match,
    format_error,
    invalid_series,
    // numerical preconditions
    bad_range,
    bad_cycles,
    nyquist_exceeded,
    grid_mismatch,
    length_mismatch,
    dimension_mismatch,
    variant_mismatch,
    empty_fiber,
    shape_mismatch,
    empty_band,
    no_valid_points,
    bad_config,
};

/// True for errors that signal a violated numerical precondition rather than
/// malformed input. The CLI maps these to exit code 3.
constexpr bool is_numerical(Errc code) noexcept {
    return code >= Errc::bad_range;
}

constexpr const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::missing_file: return "MissingFile";
    case Errc::header_parse: return "HeaderParse";
    case Errc::non_numeric_cell: return "NonNumericCell";
    case Errc::non_uniform_sampling: return "NonUniformSampling";
    case Errc::too_short: return "TooShort";
    case Errc::unknown_name: return "UnknownName";
    case Errc::duplicate_channel: return "DuplicateChannel";
    case Errc::no_match: return "NoMatch";
    case Errc::format_error: return "FormatError";
    case Errc::invalid_series: return "InvalidSeries";
    case Errc::bad_range: return "BadRange";
    case Errc::bad_cycles: return "BadCycles";
    case Errc::nyquist_exceeded: return "NyquistExceeded";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::variant_mismatch: return "VariantMismatch";
    case Errc::empty_fiber: return "EmptyFiber";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::empty_band: return "EmptyBand";
    case Errc::no_valid_points: return "NoValidPoints";
    case Errc::bad_config: return "BadConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// A CSV cell that does not parse as a finite decimal number.
/// `row` counts data rows from 1 (header excluded), `col` counts columns from 1.
class NonNumericCell : public Error {
public:
    NonNumericCell(std::size_t row, std::size_t col, const std::string& cell)
        : Error(Errc::non_numeric_cell,
                "row " + std::to_string(row) + ", col " + std::to_string(col) + ": '" + cell + "'"),
          row(row), col(col) {}

    std::size_t row;
    std::size_t col;
};

class NonUniformSampling : public Error {
public:
    explicit NonUniformSampling(double max_jitter)
        : Error(Errc::non_uniform_sampling,
                "max relative jitter " + std::to_string(max_jitter) + " exceeds 1e-6"),
          max_jitter(max_jitter) {}

    double max_jitter;
};

} // namespace gxwt
