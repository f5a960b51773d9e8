#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

namespace digitlab::csv {

/// Fixed 10-significant-digit rendering ("%.10g"); infinities as inf/-inf.
inline std::string format_real(double x) {
    if (std::isinf(x)) {
        return x < 0 ? "-inf" : "inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// Empty field for an undefined value.
inline std::string format_real(const std::optional<double>& x) {
    return x ? format_real(*x) : std::string{};
}

/// Writes comma-separated fields, one row per call, '\n' terminated.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <typename... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((out_ << (first ? "" : ",") << field(fields), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string field(const std::string& s) { return s; }
    static std::string field(const char* s) { return s; }
    static std::string field(std::uint64_t v) { return std::to_string(v); }
    static std::string field(double v) { return format_real(v); }
    static std::string field(const std::optional<double>& v) { return format_real(v); }

    std::ostream& out_;
};

}  // namespace digitlab::csv
