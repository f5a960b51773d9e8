#pragma once

// Integer-only digit generators: the Rabinowitz-Wagon spigot for pi, Sale's
// mixed-radix spigot for e, and the schoolbook digit-by-digit square root.
// All three are O(n^2) and independent of the GMP-backed generators in
// constant_stream.hpp, which they cross-check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace digitlab {

/// First `count` fractional decimal digits of pi.
inline std::vector<std::uint8_t> pi_digits_spigot(std::size_t count) {
    if (count < 1) {
        throw std::invalid_argument("count must be at least 1");
    }
    // One extra digit for the integer part, plus slack so held predigits
    // are settled before truncation.
    const std::size_t total = count + 1 + 10;
    const std::size_t len = total * 10 / 3 + 1;
    std::vector<std::uint64_t> a(len, 2);
    std::vector<std::uint8_t> out;
    out.reserve(total + 1);

    std::uint64_t predigit = 0;
    std::size_t nines = 0;
    for (std::size_t j = 1; j <= total; ++j) {
        std::uint64_t q = 0;
        for (std::size_t i = len; i > 0; --i) {
            const std::uint64_t x = 10 * a[i - 1] + q * i;
            a[i - 1] = x % (2 * i - 1);
            q = x / (2 * i - 1);
        }
        a[0] = q % 10;
        q /= 10;
        if (q == 9) {
            ++nines;
        } else if (q == 10) {
            out.push_back(static_cast<std::uint8_t>(predigit + 1));
            out.insert(out.end(), nines, 0);
            predigit = 0;
            nines = 0;
        } else {
            if (j > 1) {
                out.push_back(static_cast<std::uint8_t>(predigit));
            }
            predigit = q;
            out.insert(out.end(), nines, 9);
            nines = 0;
        }
    }
    out.push_back(static_cast<std::uint8_t>(predigit));
    out.insert(out.end(), nines, 9);

    // out[0] is the integer part 3.
    return {out.begin() + 1, out.begin() + 1 + static_cast<std::ptrdiff_t>(count)};
}

/// First `count` fractional decimal digits of e, from e - 2 = sum_{k>=2} 1/k!
/// held in mixed radix (1/2!, 1/3!, ...).
inline std::vector<std::uint8_t> e_digits_spigot(std::size_t count) {
    if (count < 1) {
        throw std::invalid_argument("count must be at least 1");
    }
    const double guard = std::ceil(std::log10(static_cast<double>(count))) + 10.0;
    const double needed = (static_cast<double>(count) + guard) * std::log(10.0);
    std::size_t terms = 2;
    while (std::lgamma(static_cast<double>(terms) + 1.0) <= needed) {
        ++terms;
    }
    std::vector<std::uint64_t> a(terms + 1, 1);
    std::vector<std::uint8_t> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        std::uint64_t carry = 0;
        for (std::size_t i = terms; i >= 2; --i) {
            const std::uint64_t x = 10 * a[i] + carry;
            a[i] = x % i;
            carry = x / i;
        }
        out.push_back(static_cast<std::uint8_t>(carry));
    }
    return out;
}

namespace detail {

/// Minimal non-negative decimal integer, base 10^9 limbs, little-endian.
class DecimalNat {
public:
    static constexpr std::uint32_t radix = 1'000'000'000;

    explicit DecimalNat(std::uint64_t v = 0) {
        do {
            limbs_.push_back(static_cast<std::uint32_t>(v % radix));
            v /= radix;
        } while (v != 0);
    }

    std::size_t size() const noexcept { return limbs_.size(); }
    std::uint32_t limb(std::size_t i) const noexcept { return i < limbs_.size() ? limbs_[i] : 0; }

    void mul_add_small(std::uint32_t m, std::uint32_t add) {
        std::uint64_t carry = add;
        for (auto& l : limbs_) {
            const std::uint64_t t = static_cast<std::uint64_t>(l) * m + carry;
            l = static_cast<std::uint32_t>(t % radix);
            carry = t / radix;
        }
        while (carry != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(carry % radix));
            carry /= radix;
        }
        trim();
    }

    /// this -= other; requires this >= other.
    void subtract(const DecimalNat& other) {
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < limbs_.size(); ++i) {
            std::int64_t t = static_cast<std::int64_t>(limbs_[i]) - other.limb(i) - borrow;
            borrow = t < 0 ? 1 : 0;
            if (t < 0) {
                t += radix;
            }
            limbs_[i] = static_cast<std::uint32_t>(t);
        }
        trim();
    }

    friend int compare(const DecimalNat& a, const DecimalNat& b) noexcept {
        const std::size_t n = std::max(a.size(), b.size());
        for (std::size_t i = n; i > 0; --i) {
            if (a.limb(i - 1) != b.limb(i - 1)) {
                return a.limb(i - 1) < b.limb(i - 1) ? -1 : 1;
            }
        }
        return 0;
    }

    /// Leading value of this / other as a double, aligned on the larger size.
    friend double approx_ratio(const DecimalNat& num, const DecimalNat& den) noexcept {
        const std::size_t n = std::max(num.size(), den.size());
        auto lead = [n](const DecimalNat& v) {
            double x = 0.0;
            for (std::size_t k = 0; k < 3 && k < n; ++k) {
                x = x * radix + v.limb(n - 1 - k);
            }
            return x;
        };
        const double d = lead(den);
        return d == 0.0 ? 0.0 : lead(num) / d;
    }

private:
    void trim() {
        while (limbs_.size() > 1 && limbs_.back() == 0) {
            limbs_.pop_back();
        }
    }

    std::vector<std::uint32_t> limbs_;
};

}  // namespace detail

/// First `count` fractional decimal digits of sqrt(radicand), by the
/// schoolbook method: bring down the pair "00", choose the largest x with
/// (20 p + x) x <= remainder.
inline std::vector<std::uint8_t> sqrt_digits_schoolbook(std::uint64_t radicand, std::size_t count) {
    if (count < 1) {
        throw std::invalid_argument("count must be at least 1");
    }
    if (radicand < 2) {
        throw std::invalid_argument("radicand must be at least 2");
    }
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(radicand)));
    while (static_cast<unsigned __int128>(root) * root > radicand) {
        --root;
    }
    while (static_cast<unsigned __int128>(root + 1) * (root + 1) <= radicand) {
        ++root;
    }
    if (root * root == radicand) {
        throw std::invalid_argument("radicand is a perfect square");
    }

    detail::DecimalNat p(root);
    detail::DecimalNat rem(radicand - root * root);
    std::vector<std::uint8_t> out;
    out.reserve(count);

    auto trial = [&p](std::uint32_t x) {
        detail::DecimalNat t = p;
        t.mul_add_small(20, x);
        t.mul_add_small(x, 0);
        return t;
    };

    for (std::size_t j = 0; j < count; ++j) {
        rem.mul_add_small(100, 0);
        detail::DecimalNat twenty_p = p;
        twenty_p.mul_add_small(20, 0);
        auto x = static_cast<std::uint32_t>(std::clamp(approx_ratio(rem, twenty_p), 0.0, 9.0));
        detail::DecimalNat t = trial(x);
        while (x > 0 && compare(t, rem) > 0) {
            --x;
            t = trial(x);
        }
        while (x < 9) {
            detail::DecimalNat next = trial(x + 1);
            if (compare(next, rem) > 0) {
                break;
            }
            ++x;
            t = std::move(next);
        }
        rem.subtract(t);
        p.mul_add_small(10, x);
        out.push_back(static_cast<std::uint8_t>(x));
    }
    return out;
}

}  // namespace digitlab
