#pragma once

// Decimal digit streams d(1), d(2), ... of pi, e, sqrt(r), or a digit file.
// Only fractional digits are produced; integer parts are excluded.

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "digitlab/errors.hpp"

namespace digitlab {

enum class DigitSourceKind { pi, e, sqrt, file };

struct DigitSource {
    DigitSourceKind kind = DigitSourceKind::pi;
    std::uint64_t radicand = 2;  // for kind == sqrt
    std::string path;            // for kind == file

    std::string label() const {
        switch (kind) {
            case DigitSourceKind::pi: return "pi";
            case DigitSourceKind::e: return "e";
            case DigitSourceKind::sqrt: return "sqrt" + std::to_string(radicand);
            case DigitSourceKind::file: return "file:" + path;
        }
        return "unknown";
    }
};

/// Immutable sequence of decimal digits, indexed from 1.
class DigitStream {
public:
    DigitStream(DigitSource source, std::vector<std::uint8_t> digits)
        : source_(std::move(source)), digits_(std::move(digits)) {}

    const DigitSource& source() const noexcept { return source_; }
    std::size_t size() const noexcept { return digits_.size(); }
    std::span<const std::uint8_t> digits() const noexcept { return digits_; }

    /// d(i), 1-based.
    std::uint8_t at(std::size_t i) const {
        if (i < 1 || i > digits_.size()) {
            throw std::out_of_range("digit index out of range");
        }
        return digits_[i - 1];
    }

private:
    DigitSource source_;
    std::vector<std::uint8_t> digits_;
};

struct GenerationLimits {
    std::size_t cap = 2'000'000;
};

namespace detail {

inline void check_count(std::size_t count, const GenerationLimits& limits) {
    if (count < 1) {
        throw std::invalid_argument("digit count must be at least 1");
    }
    if (count > limits.cap) {
        throw resource_limit_error("requested " + std::to_string(count) + " digits, above the cap of " +
                                   std::to_string(limits.cap));
    }
}

inline std::size_t guard_digits(std::size_t count) {
    return static_cast<std::size_t>(std::ceil(std::log10(static_cast<double>(count)))) + 10;
}

/// Splits the decimal string of floor(X * 10^(count + guard)) into the
/// `count` digits after the first `integer_digits` characters. Returns
/// nullopt when the guard tail is all 0s or all 9s, so truncation could
/// be off by one in the last requested digit.
inline std::optional<std::vector<std::uint8_t>> take_digits(const std::string& text, std::size_t integer_digits,
                                                            std::size_t count) {
    if (text.size() < integer_digits + count + 1) {
        return std::nullopt;
    }
    const std::size_t tail_begin = integer_digits + count;
    bool all_zero = true;
    bool all_nine = true;
    for (std::size_t i = tail_begin; i < text.size(); ++i) {
        all_zero = all_zero && text[i] == '0';
        all_nine = all_nine && text[i] == '9';
    }
    if (all_zero || all_nine) {
        return std::nullopt;
    }
    std::vector<std::uint8_t> out;
    out.reserve(count);
    for (std::size_t i = integer_digits; i < tail_begin; ++i) {
        out.push_back(static_cast<std::uint8_t>(text[i] - '0'));
    }
    return out;
}

inline mpz_class pow10(std::size_t e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return r;
}

struct ChudnovskyTerms {
    mpz_class P, Q, T;
};

// Binary splitting of the Chudnovsky series over terms [a, b).
inline ChudnovskyTerms chudnovsky_split(unsigned long a, unsigned long b) {
    static const mpz_class c3_over_24("10939058860032000");
    ChudnovskyTerms r;
    if (b - a == 1) {
        if (a == 0) {
            r.P = 1;
            r.Q = 1;
        } else {
            r.P = mpz_class(6 * a - 5) * (2 * a - 1) * (6 * a - 1);
            r.Q = mpz_class(a) * a * a * c3_over_24;
        }
        r.T = r.P * (mpz_class(13591409) + mpz_class(545140134) * a);
        if (a % 2 == 1) {
            r.T = -r.T;
        }
        return r;
    }
    const unsigned long m = a + (b - a) / 2;
    ChudnovskyTerms left = chudnovsky_split(a, m);
    ChudnovskyTerms right = chudnovsky_split(m, b);
    r.P = left.P * right.P;
    r.Q = left.Q * right.Q;
    r.T = left.T * right.Q + left.P * right.T;
    return r;
}

/// floor-ish(pi * 10^digits), accurate to a few units in the last place.
inline mpz_class pi_scaled(std::size_t digits) {
    const auto terms = static_cast<unsigned long>(static_cast<double>(digits) / 14.181647462725477) + 2;
    const ChudnovskyTerms s = chudnovsky_split(0, terms);
    const mpz_class one = pow10(digits);
    mpz_class sqrt_c = 10005 * one * one;
    mpz_sqrt(sqrt_c.get_mpz_t(), sqrt_c.get_mpz_t());
    mpz_class result = s.Q * 426880 * sqrt_c;
    mpz_fdiv_q(result.get_mpz_t(), result.get_mpz_t(), s.T.get_mpz_t());
    return result;
}

struct FactorialTerms {
    mpz_class P, Q;
};

// sum_{k=a+1}^{b} 1 / ((a+1)(a+2)...k) = P / Q, with Q = (a+1)...b.
inline FactorialTerms factorial_split(unsigned long a, unsigned long b) {
    if (b - a == 1) {
        return {mpz_class(1), mpz_class(b)};
    }
    const unsigned long m = a + (b - a) / 2;
    FactorialTerms left = factorial_split(a, m);
    FactorialTerms right = factorial_split(m, b);
    return {left.P * right.Q + right.P, left.Q * right.Q};
}

inline mpz_class e_scaled(std::size_t digits) {
    const double needed = (static_cast<double>(digits) + 2.0) * std::log(10.0);
    unsigned long terms = 2;
    // lgamma(k+1) = ln k!
    while (std::lgamma(static_cast<double>(terms) + 1.0) <= needed) {
        terms = terms < 64 ? terms + 1 : terms + terms / 16;
    }
    const FactorialTerms s = factorial_split(0, terms);
    const mpz_class one = pow10(digits);
    mpz_class frac = s.P * one;
    mpz_fdiv_q(frac.get_mpz_t(), frac.get_mpz_t(), s.Q.get_mpz_t());
    return one + frac;
}

template <typename Scaled>
std::vector<std::uint8_t> series_digits(std::size_t count, Scaled&& scaled) {
    std::size_t guard = guard_digits(count);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::string text = scaled(count + guard).get_str();
        if (auto digits = take_digits(text, 1, count)) {
            return std::move(*digits);
        }
        guard += 10;
    }
    throw std::runtime_error("could not settle the final digit within the guard budget");
}

}  // namespace detail

/// First `count` fractional digits of pi (Chudnovsky series, binary splitting).
inline DigitStream pi_digits(std::size_t count, const GenerationLimits& limits = {}) {
    detail::check_count(count, limits);
    return {DigitSource{DigitSourceKind::pi, 2, {}}, detail::series_digits(count, detail::pi_scaled)};
}

/// First `count` fractional digits of e (factorial series, binary splitting).
inline DigitStream e_digits(std::size_t count, const GenerationLimits& limits = {}) {
    detail::check_count(count, limits);
    return {DigitSource{DigitSourceKind::e, 2, {}}, detail::series_digits(count, detail::e_scaled)};
}

/// First `count` fractional digits of sqrt(radicand), from the exact integer
/// square root floor(sqrt(radicand * 10^(2 count))).
inline DigitStream sqrt_digits(std::uint64_t radicand, std::size_t count, const GenerationLimits& limits = {}) {
    if (radicand < 2) {
        throw std::invalid_argument("radicand must be at least 2");
    }
    const mpz_class r(static_cast<unsigned long>(radicand));
    if (mpz_perfect_square_p(r.get_mpz_t()) != 0) {
        throw std::invalid_argument("radicand " + std::to_string(radicand) + " is a perfect square");
    }
    detail::check_count(count, limits);
    mpz_class scaled = r * detail::pow10(2 * count);
    mpz_sqrt(scaled.get_mpz_t(), scaled.get_mpz_t());
    const std::string text = scaled.get_str();
    std::vector<std::uint8_t> digits;
    digits.reserve(count);
    for (std::size_t i = text.size() - count; i < text.size(); ++i) {
        digits.push_back(static_cast<std::uint8_t>(text[i] - '0'));
    }
    return {DigitSource{DigitSourceKind::sqrt, radicand, {}}, std::move(digits)};
}

/// Parses decimal digits from text: '0'-'9' are digits; space, tab, CR and LF
/// are skipped; at most one '.' is allowed; anything else is an error. The
/// first `skip` digits are dropped, then `count` digits are kept (all when
/// nullopt).
inline std::vector<std::uint8_t> parse_digit_text(std::string_view text, std::optional<std::size_t> count,
                                                  std::size_t skip = 0, const GenerationLimits& limits = {}) {
    if (count && *count > limits.cap) {
        throw resource_limit_error("requested " + std::to_string(*count) + " digits, above the cap of " +
                                   std::to_string(limits.cap));
    }
    std::vector<std::uint8_t> out;
    bool seen_dot = false;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            if (skipped < skip) {
                ++skipped;
                continue;
            }
            if (count && out.size() == *count) {
                continue;  // keep validating the rest of the input
            }
            if (out.size() == limits.cap) {
                throw resource_limit_error("digit source holds more than the cap of " + std::to_string(limits.cap) +
                                           " digits");
            }
            out.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            continue;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c == '.') {
            throw digit_parse_error("second '.' in digit text", i);
        } else {
            throw digit_parse_error("illegal character in digit text", i);
        }
    }
    if (count && out.size() < *count) {
        throw insufficient_data_error("digit source holds " + std::to_string(out.size()) + " digits after skipping " +
                                      std::to_string(skip) + ", fewer than the " + std::to_string(*count) +
                                      " requested");
    }
    if (out.empty()) {
        throw insufficient_data_error("digit source holds no digits after skipping " + std::to_string(skip));
    }
    return out;
}

inline DigitStream file_digits(const std::string& path, std::optional<std::size_t> count, std::size_t skip = 0,
                               const GenerationLimits& limits = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open digit file '" + path + "'");
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw std::runtime_error("error reading digit file '" + path + "'");
    }
    return {DigitSource{DigitSourceKind::file, 0, path}, parse_digit_text(text, count, skip, limits)};
}

/// Generates `count` digits from a computed source (pi, e, sqrt).
inline DigitStream generate_digits(const DigitSource& source, std::size_t count, const GenerationLimits& limits = {}) {
    switch (source.kind) {
        case DigitSourceKind::pi: return pi_digits(count, limits);
        case DigitSourceKind::e: return e_digits(count, limits);
        case DigitSourceKind::sqrt: return sqrt_digits(source.radicand, count, limits);
        case DigitSourceKind::file: return file_digits(source.path, count, 0, limits);
    }
    throw std::invalid_argument("unknown digit source");
}

}  // namespace digitlab
