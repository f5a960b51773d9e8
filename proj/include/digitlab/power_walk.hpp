#pragma once

// Digit sums of p^n in base q, and the centered/normed statistics built on
// them: the CLT variable s, the partial-sum variable kappa, the LIL ratio
// delta, and the margin against Stewart's lower bound.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "digitlab/base_digits.hpp"
#include "digitlab/errors.hpp"
#include "digitlab/schedule.hpp"

namespace digitlab {

namespace detail {

inline bool checked_pow(std::uint64_t base, unsigned exp, std::uint64_t& out) noexcept {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
            return false;
        }
        r *= base;
    }
    out = r;
    return true;
}

/// Smallest r with x = r^a for some a >= 1.
inline std::uint64_t primitive_root(std::uint64_t x) noexcept {
    std::uint64_t best = x;
    for (unsigned a = 2; a < 64; ++a) {
        const auto guess = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(x), 1.0 / a)));
        for (std::uint64_t r = (guess > 1 ? guess - 1 : 2); r <= guess + 1; ++r) {
            std::uint64_t v = 0;
            if (r >= 2 && checked_pow(r, a, v) && v == x && r < best) {
                best = r;
            }
        }
    }
    return best;
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) noexcept {
    if (mod == 1) {
        return 0;
    }
    unsigned __int128 result = 1;
    unsigned __int128 b = base % mod;
    while (exp != 0) {
        if (exp & 1) {
            result = result * b % mod;
        }
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace detail

/// Pseudo-statistics of a base-q digit under the uniform-digit model, for
/// the powers of p.
struct ExpectedStats {
    std::uint64_t p = 2;
    std::uint64_t q = 3;
    double mean = 1.0;      // (q-1)/2
    double variance = 0.0;  // (q^2-1)/12
    double log_q_p = 0.0;   // ln p / ln q
    /// True when p^a = q^b for some a, b > 0, i.e. log_q p is rational.
    bool commensurable = false;

    static ExpectedStats make(std::uint64_t p, std::uint64_t q) {
        if (p < 1 || q < 2) {
            throw std::invalid_argument("need p >= 1 and q >= 2");
        }
        ExpectedStats s;
        s.p = p;
        s.q = q;
        const auto qd = static_cast<double>(q);
        s.mean = (qd - 1.0) / 2.0;
        s.variance = (qd * qd - 1.0) / 12.0;
        s.log_q_p = std::log(static_cast<double>(p)) / std::log(qd);
        s.commensurable = p == 1 || detail::primitive_root(p) == detail::primitive_root(q);
        return s;
    }

    /// Expected digit sum per unit n: E * log_q p.
    double linear_mean() const noexcept { return mean * log_q_p; }
    /// Variance per unit n of the LIL denominator: 2 * V * log_q p.
    double lil_variance() const noexcept { return 2.0 * variance * log_q_p; }
};

/// One row of the walk: digit count and digit sum of p^n in base q.
struct PowerSample {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint64_t S = 0;

    friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

struct StewartConfig {
    double c0 = 0.0;

    void validate() const {
        if (!std::isfinite(c0) || c0 < 0.0) {
            throw std::invalid_argument("C0 must be finite and non-negative");
        }
    }
};

struct WalkOptions {
    std::uint64_t max_multiplier = default_max_multiplier;
    std::uint64_t digit_cap = 10'000'000;
    /// Full digit-sum rescan every this many steps; 0 disables.
    std::uint64_t rescan_interval = 4096;
};

/// Computes p^1 .. p^n_max in base q and calls `sink(const PowerSample&)`
/// for each n selected by `schedule`.
template <typename Sink>
void walk_powers(std::uint64_t p, std::uint64_t q, std::uint64_t n_max, const EmitSchedule& schedule,
                 const WalkOptions& options, Sink&& sink) {
    if (p < 2 || q < 2) {
        throw std::invalid_argument("need p >= 2 and q >= 2");
    }
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be at least 1");
    }
    if (p > options.max_multiplier) {
        throw std::invalid_argument("p exceeds the configured max multiplier " +
                                    std::to_string(options.max_multiplier));
    }
    const double predicted = std::floor(static_cast<double>(n_max) * std::log(static_cast<double>(p)) /
                                        std::log(static_cast<double>(q))) + 1.0;
    if (predicted > static_cast<double>(options.digit_cap)) {
        throw resource_limit_error("p^n_max would have about " + std::to_string(static_cast<std::uint64_t>(predicted)) +
                                   " base-q digits, above the cap of " + std::to_string(options.digit_cap));
    }

    BaseQNumber x = BaseQNumber::from_integer(1, q, options.max_multiplier);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        x.mul_small_in_place(p);
        if (x.digit_count() > options.digit_cap) {
            throw resource_limit_error("digit count cap exceeded at n = " + std::to_string(n));
        }
        if (options.rescan_interval != 0 && n % options.rescan_interval == 0 &&
            x.rescan_digit_sum() != x.digit_sum()) {
            throw std::logic_error("digit-sum cache drifted from rescan at n = " + std::to_string(n));
        }
        if (schedule.emits(n, n_max)) {
            sink(PowerSample{n, x.digit_count(), x.digit_sum()});
        }
    }
}

/// Samples at n = stride, 2*stride, ..., up to n_max.
inline std::vector<PowerSample> run_power_walk(std::uint64_t p, std::uint64_t q, std::uint64_t n_max,
                                               std::uint64_t stride, const WalkOptions& options = {}) {
    std::vector<PowerSample> out;
    walk_powers(p, q, n_max, EmitSchedule::uniform(stride), options,
                [&](const PowerSample& s) { out.push_back(s); });
    return out;
}

/// (S - E log_q p n) / sqrt(V log_q p n): the CLT-normalized digit sum.
inline double s_value(const PowerSample& sample, const ExpectedStats& stats) {
    if (sample.n < 1) {
        throw std::domain_error("s_value needs n >= 1");
    }
    const auto n = static_cast<double>(sample.n);
    return (static_cast<double>(sample.S) - stats.linear_mean() * n) / std::sqrt(stats.variance * stats.log_q_p * n);
}

/// (S - E k) / sqrt(V), using the exact digit count k.
inline double kappa(const PowerSample& sample, const ExpectedStats& stats) {
    if (sample.k < 1) {
        throw std::domain_error("kappa needs k >= 1");
    }
    return (static_cast<double>(sample.S) - stats.mean * static_cast<double>(sample.k)) / std::sqrt(stats.variance);
}

/// (S - E log_q p n) / sqrt(2 V log_q p n log log n). Defined for n >= 3.
inline double delta_power(const PowerSample& sample, const ExpectedStats& stats) {
    if (sample.n < 3) {
        throw std::domain_error("delta is undefined for n < 3");
    }
    const auto n = static_cast<double>(sample.n);
    return (static_cast<double>(sample.S) - stats.linear_mean() * n) /
           std::sqrt(stats.lil_variance() * n * std::log(std::log(n)));
}

/// S - (log n / (log log n + C0) - 1). Positive when Stewart's bound holds at
/// this n for the given C0. Defined for n >= 3.
inline double stewart_margin(const PowerSample& sample, const StewartConfig& cfg) {
    cfg.validate();
    if (sample.n < 3) {
        throw std::domain_error("Stewart margin is undefined for n < 3");
    }
    const auto n = static_cast<double>(sample.n);
    const double bound = std::log(n) / (std::log(std::log(n)) + cfg.c0) - 1.0;
    return static_cast<double>(sample.S) - bound;
}

/// Checks the structural invariants of a sample: k = floor(n log_q p) + 1
/// within one, 0 < S <= (q-1) k, and S = p^n (mod q-1).
inline bool sample_is_consistent(const PowerSample& sample, const ExpectedStats& stats) noexcept {
    const double linear = static_cast<double>(sample.n) * stats.log_q_p;
    if (std::fabs(static_cast<double>(sample.k) - linear) > 1.0) {
        return false;
    }
    if (sample.S == 0 || sample.S > (stats.q - 1) * sample.k) {
        return false;
    }
    const std::uint64_t m = stats.q - 1;
    return sample.S % m == detail::mod_pow(stats.p, sample.n, m);
}

}  // namespace digitlab
