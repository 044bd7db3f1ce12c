#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace gxwt::detail {

/// Shortest-stable text form: 17 significant digits, locale independent.
inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// `re+imi` / `re-imi`.
inline std::string format_complex(std::complex<double> z) {
    std::string out = format_double(z.real());
    if (std::signbit(z.imag())) {
        out += '-';
        out += format_double(-z.imag());
    } else {
        out += '+';
        out += format_double(z.imag());
    }
    out += 'i';
    return out;
}

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

/// Parses a finite decimal number with optional sign and exponent.
inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::general);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

inline std::optional<std::complex<double>> parse_complex(std::string_view s) {
    s = trim(s);
    if (s.size() < 4 || s.back() != 'i') return std::nullopt;
    s.remove_suffix(1);
    // The separating sign is the last '+'/'-' that is neither leading nor part of an exponent.
    for (std::size_t pos = s.size(); pos-- > 1;) {
        const char ch = s[pos];
        if (ch != '+' && ch != '-') continue;
        const char prev = s[pos - 1];
        if (prev == 'e' || prev == 'E') continue;
        auto re = parse_double(s.substr(0, pos));
        auto im = parse_double(s.substr(pos + 1));
        if (!re || !im) return std::nullopt;
        return std::complex<double>(*re, ch == '-' ? -*im : *im);
    }
    return std::nullopt;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

} // namespace gxwt::detail
