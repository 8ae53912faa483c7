#pragma once

// Locale-independent CSV output: '.' decimal point, '\n' line endings,
// printf-style %.Ne formatting through std::to_chars.

#include <charconv>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

namespace kawahara::csv {

inline constexpr int data_precision = 12;
inline constexpr int slope_precision = 6;

/// Negative zero prints as zero so that sign-of-zero noise never reaches a file.
inline std::string sci(double value, int precision = data_precision) {
    if (value == 0.0) value = 0.0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, precision);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

class Writer {
public:
    Writer(std::ostream& out, std::string_view header) : out_(out) { out_ << header << '\n'; }

    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((emit(fields, first)), ...);
        out_ << '\n';
    }

private:
    void separator(bool& first) {
        if (!first) out_ << ',';
        first = false;
    }
    void emit(const std::string& s, bool& first) { separator(first); out_ << s; }
    void emit(const char* s, bool& first) { separator(first); out_ << s; }
    template <class Int>
        requires std::is_integral_v<Int>
    void emit(Int v, bool& first) {
        separator(first);
        out_ << std::to_string(v);
    }

    std::ostream& out_;
};

}  // namespace kawahara::csv
