#pragma once

// Arbitrary-size non-negative integers held as base-q digits packed into
// 64-bit limbs, with an exactly maintained digit sum.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace digitlab {

inline constexpr std::uint64_t default_max_multiplier = 64;
inline constexpr std::uint64_t max_supported_base = std::uint64_t{1} << 32;

/// Packing parameters for one (base, max multiplier) pair.
///
/// A limb holds `digits_per_limb` base-q digits as a value in [0, q^m).
/// m is maximal such that p_max * limb + carry never overflows a word during
/// multiply-by-small. Digit sums of limbs are read from a table indexed by
/// chunks of `chunk_digits` digits.
class LimbLayout {
public:
    static std::shared_ptr<const LimbLayout> make(std::uint64_t base,
                                                  std::uint64_t max_multiplier = default_max_multiplier) {
        return std::shared_ptr<const LimbLayout>(new LimbLayout(base, max_multiplier));
    }

    std::uint64_t base() const noexcept { return base_; }
    std::uint64_t max_multiplier() const noexcept { return max_multiplier_; }
    unsigned digits_per_limb() const noexcept { return digits_per_limb_; }
    std::uint64_t limb_radix() const noexcept { return limb_radix_; }

    /// q^e for 0 <= e <= digits_per_limb.
    std::uint64_t power(unsigned e) const noexcept { return powers_[e]; }

    std::uint64_t limb_digit_sum(std::uint64_t limb) const noexcept {
        if (chunk_table_.empty()) {
            std::uint64_t sum = 0;
            while (limb != 0) {
                sum += limb % base_;
                limb /= base_;
            }
            return sum;
        }
        std::uint64_t sum = 0;
        while (limb != 0) {
            sum += chunk_table_[limb % chunk_radix_];
            limb /= chunk_radix_;
        }
        return sum;
    }

    /// Number of significant base-q digits in a limb value (0 for 0).
    unsigned limb_digit_count(std::uint64_t limb) const noexcept {
        unsigned count = 0;
        while (count < digits_per_limb_ && limb >= powers_[count]) {
            ++count;
        }
        return count;
    }

private:
    LimbLayout(std::uint64_t base, std::uint64_t max_multiplier)
        : base_(base), max_multiplier_(max_multiplier) {
        if (base < 2) {
            throw std::invalid_argument("base must be at least 2");
        }
        if (base > max_supported_base) {
            throw std::invalid_argument("base must not exceed 2^32");
        }
        if (max_multiplier < 1) {
            throw std::invalid_argument("max multiplier must be at least 1");
        }
        constexpr std::uint64_t word_max = std::numeric_limits<std::uint64_t>::max();
        // t = p * limb + carry <= p_max * (q^m - 1) + (p_max - 1) must fit.
        auto fits = [&](std::uint64_t radix) {
            const std::uint64_t top = radix - 1;
            if (top > (word_max - (max_multiplier - 1)) / max_multiplier) {
                return false;
            }
            return true;
        };
        if (!fits(base)) {
            throw std::invalid_argument("base too large for the configured max multiplier");
        }
        powers_.push_back(1);
        std::uint64_t radix = base;
        while (true) {
            powers_.push_back(radix);
            if (radix > word_max / base || !fits(radix * base)) {
                break;
            }
            radix *= base;
        }
        digits_per_limb_ = static_cast<unsigned>(powers_.size() - 1);
        limb_radix_ = radix;

        // Chunk table: largest c with q^c <= 2^16, only when c >= 2.
        constexpr std::uint64_t table_limit = std::uint64_t{1} << 16;
        unsigned chunk = 0;
        while (chunk < digits_per_limb_ && powers_[chunk + 1] <= table_limit) {
            ++chunk;
        }
        if (chunk >= 2) {
            chunk_radix_ = powers_[chunk];
            chunk_table_.resize(chunk_radix_);
            for (std::uint64_t v = 1; v < chunk_radix_; ++v) {
                chunk_table_[v] = chunk_table_[v / base] + static_cast<std::uint32_t>(v % base);
            }
        }
    }

    std::uint64_t base_;
    std::uint64_t max_multiplier_;
    unsigned digits_per_limb_ = 0;
    std::uint64_t limb_radix_ = 0;
    std::vector<std::uint64_t> powers_;
    std::uint64_t chunk_radix_ = 0;
    std::vector<std::uint32_t> chunk_table_;
};

/// Non-negative integer in base q. Digit 1 is the least significant digit.
///
/// The digit sum is cached and kept exact across `mul_small_in_place` via
/// S(p*x) = p*S(x) - (q-1)*C, where C is the total number of carry units
/// moved up one position.
class BaseQNumber {
public:
    explicit BaseQNumber(std::shared_ptr<const LimbLayout> layout, std::uint64_t value = 0)
        : layout_(std::move(layout)) {
        if (!layout_) {
            throw std::invalid_argument("null limb layout");
        }
        const std::uint64_t radix = layout_->limb_radix();
        do {
            limbs_.push_back(value % radix);
            value /= radix;
        } while (value != 0);
        refresh_digit_count();
        digit_sum_ = rescan_digit_sum();
    }

    static BaseQNumber from_integer(std::uint64_t value, std::uint64_t base,
                                    std::uint64_t max_multiplier = default_max_multiplier) {
        return BaseQNumber(LimbLayout::make(base, max_multiplier), value);
    }

    /// Parses the form produced by `to_digit_string`.
    static BaseQNumber parse(std::string_view text, std::uint64_t base,
                             std::uint64_t max_multiplier = default_max_multiplier) {
        BaseQNumber result(LimbLayout::make(base, max_multiplier));
        std::vector<std::uint64_t> digits;  // most significant first
        if (base <= 36) {
            for (char c : text) {
                std::uint64_t d = 0;
                if (c >= '0' && c <= '9') {
                    d = static_cast<std::uint64_t>(c - '0');
                } else if (c >= 'a' && c <= 'z') {
                    d = static_cast<std::uint64_t>(c - 'a') + 10;
                } else {
                    throw std::invalid_argument("invalid digit character in base-q text");
                }
                if (d >= base) {
                    throw std::invalid_argument("digit out of range for base");
                }
                digits.push_back(d);
            }
        } else {
            std::size_t start = 0;
            while (start <= text.size()) {
                std::size_t end = text.find(':', start);
                if (end == std::string_view::npos) {
                    end = text.size();
                }
                std::string_view field = text.substr(start, end - start);
                if (field.empty()) {
                    throw std::invalid_argument("empty digit field in base-q text");
                }
                std::uint64_t d = 0;
                for (char c : field) {
                    if (c < '0' || c > '9' || d > (max_supported_base / 10)) {
                        throw std::invalid_argument("invalid digit field in base-q text");
                    }
                    d = d * 10 + static_cast<std::uint64_t>(c - '0');
                }
                if (d >= base) {
                    throw std::invalid_argument("digit out of range for base");
                }
                digits.push_back(d);
                start = end + 1;
            }
        }
        if (digits.empty()) {
            throw std::invalid_argument("empty base-q text");
        }
        if (digits.size() > 1 && digits.front() == 0) {
            throw std::invalid_argument("leading zero in base-q text");
        }
        result.assign_digits_msd_first(digits);
        return result;
    }

    std::uint64_t base() const noexcept { return layout_->base(); }
    const LimbLayout& layout() const noexcept { return *layout_; }
    std::shared_ptr<const LimbLayout> shared_layout() const noexcept { return layout_; }
    std::span<const std::uint64_t> limbs() const noexcept { return limbs_; }

    bool is_zero() const noexcept { return limbs_.size() == 1 && limbs_[0] == 0; }

    std::size_t digit_count() const noexcept { return digit_count_; }

    /// Cached digit sum S_q(x).
    std::uint64_t digit_sum() const noexcept { return digit_sum_; }

    /// Digit sum recomputed digit by digit, bypassing the cache and the chunk table.
    std::uint64_t rescan_digit_sum() const noexcept {
        const std::uint64_t q = base();
        std::uint64_t sum = 0;
        for (std::uint64_t limb : limbs_) {
            while (limb != 0) {
                sum += limb % q;
                limb /= q;
            }
        }
        return sum;
    }

    /// D_q(x, i), with i = 1 the least significant digit.
    std::uint64_t digit_at(std::size_t i) const {
        if (i < 1 || i > digit_count_) {
            throw std::out_of_range("digit index out of range");
        }
        const unsigned m = layout_->digits_per_limb();
        const std::size_t limb = (i - 1) / m;
        const auto pos = static_cast<unsigned>((i - 1) % m);
        return (limbs_[limb] / layout_->power(pos)) % base();
    }

    /// x <- p * x. Returns the total carry units C, so that the new digit sum
    /// equals p * (old digit sum) - (q - 1) * C.
    std::uint64_t mul_small_in_place(std::uint64_t p) {
        if (p < 1) {
            throw std::invalid_argument("multiplier must be at least 1");
        }
        if (p > layout_->max_multiplier()) {
            throw std::invalid_argument("multiplier exceeds the configured maximum");
        }
        const std::uint64_t radix = layout_->limb_radix();
        std::uint64_t carry = 0;
        std::uint64_t sum = 0;
        for (std::uint64_t& limb : limbs_) {
            const std::uint64_t t = p * limb + carry;
            limb = t % radix;
            carry = t / radix;
            sum += layout_->limb_digit_sum(limb);
        }
        while (carry != 0) {
            const std::uint64_t limb = carry % radix;
            limbs_.push_back(limb);
            sum += layout_->limb_digit_sum(limb);
            carry /= radix;
        }
        if (p == 1) {
            return 0;
        }
        refresh_digit_count();
        const unsigned __int128 scaled = static_cast<unsigned __int128>(p) * digit_sum_;
        const std::uint64_t carries = static_cast<std::uint64_t>((scaled - sum) / (base() - 1));
        digit_sum_ = sum;
        return carries;
    }

    /// Most significant digit first; single characters 0-9a-z for q <= 36,
    /// ':'-separated decimal digit values otherwise.
    std::string to_digit_string() const {
        std::string out;
        const std::uint64_t q = base();
        for (std::size_t i = digit_count_; i >= 1; --i) {
            const std::uint64_t d = digit_at(i);
            if (q <= 36) {
                out.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
            } else {
                if (i != digit_count_) {
                    out.push_back(':');
                }
                out += std::to_string(d);
            }
        }
        return out;
    }

    /// Value as a native integer, if it fits.
    bool try_to_u64(std::uint64_t& out) const noexcept {
        unsigned __int128 value = 0;
        const unsigned __int128 radix = layout_->limb_radix();
        for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
            value = value * radix + *it;
            if (value > std::numeric_limits<std::uint64_t>::max()) {
                return false;
            }
        }
        out = static_cast<std::uint64_t>(value);
        return true;
    }

    /// Checks every representation invariant by full rescan.
    bool check_invariants() const noexcept {
        const std::uint64_t radix = layout_->limb_radix();
        if (limbs_.empty()) {
            return false;
        }
        for (std::uint64_t limb : limbs_) {
            if (limb >= radix) {
                return false;
            }
        }
        if (limbs_.size() > 1 && limbs_.back() == 0) {
            return false;
        }
        if (digit_sum_ != rescan_digit_sum()) {
            return false;
        }
        // digit_count is the position of the most significant nonzero digit.
        if (is_zero()) {
            return digit_count_ == 1;
        }
        if (digit_at(digit_count_) == 0) {
            return false;
        }
        const unsigned m = layout_->digits_per_limb();
        return digit_count_ <= limbs_.size() * m && digit_count_ > (limbs_.size() - 1) * m;
    }

    friend bool operator==(const BaseQNumber& a, const BaseQNumber& b) noexcept {
        return a.base() == b.base() && a.limbs_ == b.limbs_;
    }

private:
    void assign_digits_msd_first(const std::vector<std::uint64_t>& digits) {
        const unsigned m = layout_->digits_per_limb();
        limbs_.assign((digits.size() + m - 1) / m, 0);
        std::size_t i = 0;  // 0-based from least significant
        for (auto it = digits.rbegin(); it != digits.rend(); ++it, ++i) {
            limbs_[i / m] += *it * layout_->power(static_cast<unsigned>(i % m));
        }
        while (limbs_.size() > 1 && limbs_.back() == 0) {
            limbs_.pop_back();
        }
        refresh_digit_count();
        digit_sum_ = rescan_digit_sum();
    }

    void refresh_digit_count() noexcept {
        const unsigned top = layout_->limb_digit_count(limbs_.back());
        digit_count_ = (limbs_.size() - 1) * layout_->digits_per_limb() + std::max(top, 1u);
    }

    std::shared_ptr<const LimbLayout> layout_;
    std::vector<std::uint64_t> limbs_;
    std::size_t digit_count_ = 1;
    std::uint64_t digit_sum_ = 0;
};

}  // namespace digitlab
