#pragma once

// LIL deviation series for digit streams, plus the histogram and chi-square
// machinery for comparing a normalized statistic with the standard normal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "digitlab/errors.hpp"
#include "digitlab/schedule.hpp"

namespace digitlab {

/// Exact running digit sum S(n) = d(1) + ... + d(n).
struct RunningSums {
    std::uint64_t base = 10;
    std::uint64_t n = 0;
    std::uint64_t S = 0;

    void push(std::uint8_t digit) {
        if (digit >= base) {
            throw std::invalid_argument("digit out of range for base");
        }
        ++n;
        S += digit;
    }
};

struct DeltaPoint {
    std::uint64_t n = 0;
    std::uint64_t S = 0;
    std::optional<double> delta;  // empty for n < 3

    friend bool operator==(const DeltaPoint&, const DeltaPoint&) = default;
};

/// Uniform-digit model for base b: mean (b-1)/2 and variance (b^2-1)/12.
struct DigitModel {
    double mean = 4.5;
    double variance = 8.25;

    static DigitModel for_base(std::uint64_t base) {
        if (base < 2) {
            throw std::invalid_argument("base must be at least 2");
        }
        const auto b = static_cast<double>(base);
        return {(b - 1.0) / 2.0, (b * b - 1.0) / 12.0};
    }
};

/// (S - mean n) / sqrt(2 variance n log log n), natural logs; nullopt for n < 3.
inline std::optional<double> lil_delta(std::uint64_t n, std::uint64_t S, const DigitModel& model = {}) {
    if (n < 3) {
        return std::nullopt;
    }
    const auto nd = static_cast<double>(n);
    return (static_cast<double>(S) - model.mean * nd) / std::sqrt(2.0 * model.variance * nd * std::log(std::log(nd)));
}

/// Walks the digits once and emits (n, S(n), delta(n)) for each n the
/// schedule selects.
inline std::vector<DeltaPoint> running_delta(std::span<const std::uint8_t> digits, const EmitSchedule& schedule,
                                             std::uint64_t base = 10) {
    if (digits.empty()) {
        throw insufficient_data_error("empty digit stream");
    }
    const DigitModel model = DigitModel::for_base(base);
    RunningSums sums{base};
    std::vector<DeltaPoint> out;
    const std::uint64_t last = digits.size();
    for (std::uint8_t d : digits) {
        sums.push(d);
        if (schedule.emits(sums.n, last)) {
            out.push_back({sums.n, sums.S, lil_delta(sums.n, sums.S, model)});
        }
    }
    return out;
}

/// Standard normal density.
inline double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

/// Standard normal CDF, 0.5 erfc(-x / sqrt 2); absolute error well under 1e-7.
inline double normal_cdf(double x) noexcept {
    if (x == std::numeric_limits<double>::infinity()) {
        return 1.0;
    }
    if (x == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Fixed-width bins over [lo, hi) with an underflow and an overflow cell.
///
/// Cell 0 is (-inf, lo), cells 1..bins are the data bins, cell bins+1 is
/// [hi, +inf).
class Histogram {
public:
    Histogram(double lo = -4.0, double hi = 4.0, std::size_t bins = 40) : lo_(lo), hi_(hi), bins_(bins) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
            throw std::invalid_argument("histogram range must be finite with lo < hi");
        }
        if (bins < 1) {
            throw std::invalid_argument("histogram needs at least one bin");
        }
        counts_.assign(bins + 2, 0);
    }

    void insert(double x) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("histogram value must be finite");
        }
        ++counts_[cell_of(x)];
        ++total_;
    }

    std::size_t cell_of(double x) const noexcept {
        if (x < lo_) {
            return 0;
        }
        if (x >= hi_) {
            return bins_ + 1;
        }
        auto i = static_cast<std::size_t>((x - lo_) / width());
        return std::min(i, bins_ - 1) + 1;
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t bins() const noexcept { return bins_; }
    double width() const noexcept { return (hi_ - lo_) / static_cast<double>(bins_); }
    std::size_t cells() const noexcept { return bins_ + 2; }

    /// Lower edge of a cell; -inf for the underflow cell.
    double cell_lo(std::size_t cell) const noexcept {
        if (cell == 0) {
            return -std::numeric_limits<double>::infinity();
        }
        return edge(cell - 1);
    }

    /// Upper edge of a cell; +inf for the overflow cell.
    double cell_hi(std::size_t cell) const noexcept {
        if (cell == bins_ + 1) {
            return std::numeric_limits<double>::infinity();
        }
        return edge(cell);
    }

    /// Data-bin edge i in [0, bins]; edge(bins) is exactly hi.
    double edge(std::size_t i) const noexcept {
        return i == bins_ ? hi_ : lo_ + static_cast<double>(i) * width();
    }

    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    std::uint64_t total() const noexcept { return total_; }

    /// total * P(cell) under the standard normal.
    double expected_normal(std::size_t cell) const noexcept {
        return static_cast<double>(total_) * (normal_cdf(cell_hi(cell)) - normal_cdf(cell_lo(cell)));
    }

private:
    double lo_;
    double hi_;
    std::size_t bins_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct ChiSquareCell {
    double observed = 0.0;
    double expected = 0.0;
};

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    std::size_t effective_cells = 0;
    bool degenerate = false;
};

/// Merges cells whose expected count is below `min_expected` toward the
/// cell with the largest expectation. Observed and expected totals are kept.
inline std::vector<ChiSquareCell> merge_sparse_cells(std::vector<ChiSquareCell> cells, double min_expected = 5.0) {
    if (cells.size() <= 1) {
        return cells;
    }
    const auto peak = static_cast<std::size_t>(
        std::max_element(cells.begin(), cells.end(),
                         [](const ChiSquareCell& a, const ChiSquareCell& b) { return a.expected < b.expected; }) -
        cells.begin());

    std::vector<ChiSquareCell> left;
    ChiSquareCell pending;
    for (std::size_t i = 0; i < peak; ++i) {
        pending.observed += cells[i].observed;
        pending.expected += cells[i].expected;
        if (pending.expected >= min_expected) {
            left.push_back(pending);
            pending = {};
        }
    }
    ChiSquareCell center = cells[peak];
    center.observed += pending.observed;
    center.expected += pending.expected;

    std::vector<ChiSquareCell> right;
    pending = {};
    for (std::size_t i = cells.size() - 1; i > peak; --i) {
        pending.observed += cells[i].observed;
        pending.expected += cells[i].expected;
        if (pending.expected >= min_expected) {
            right.push_back(pending);
            pending = {};
        }
    }
    center.observed += pending.observed;
    center.expected += pending.expected;

    std::vector<ChiSquareCell> out = std::move(left);
    out.push_back(center);
    out.insert(out.end(), right.rbegin(), right.rend());
    return out;
}

/// Pearson statistic sum (O - E)^2 / E over already-merged cells.
inline ChiSquareResult chi_square_cells(std::span<const ChiSquareCell> cells) {
    ChiSquareResult r;
    r.effective_cells = cells.size();
    if (cells.size() <= 1) {
        r.degenerate = true;
        return r;
    }
    for (const ChiSquareCell& c : cells) {
        if (!(c.expected > 0.0)) {
            throw std::invalid_argument("chi-square cell with non-positive expectation");
        }
        const double diff = c.observed - c.expected;
        r.statistic += diff * diff / c.expected;
    }
    r.degrees_of_freedom = cells.size() - 1;
    return r;
}

/// Goodness of fit of a histogram against the standard normal.
inline ChiSquareResult chi_square_vs_normal(const Histogram& h, double min_expected = 5.0) {
    if (h.total() < 100) {
        throw insufficient_data_error("chi-square needs at least 100 observations");
    }
    std::vector<ChiSquareCell> cells;
    cells.reserve(h.cells());
    for (std::size_t c = 0; c < h.cells(); ++c) {
        cells.push_back({static_cast<double>(h.counts()[c]), h.expected_normal(c)});
    }
    const auto merged = merge_sparse_cells(std::move(cells), min_expected);
    return chi_square_cells(merged);
}

/// Approximate 99.9th percentile of chi-square(df): mean + 4 standard deviations.
inline double chi_square_upper(std::size_t df) noexcept {
    const auto d = static_cast<double>(df);
    return d + 4.0 * std::sqrt(2.0 * d);
}

struct SeriesExtrema {
    double min = 0.0;
    double max = 0.0;
    std::uint64_t n_at_min = 0;
    std::uint64_t n_at_max = 0;
    std::uint64_t outside_unit = 0;  // points with |delta| > 1
    std::uint64_t points = 0;
};

/// Extrema over the defined points with n >= from_n.
inline SeriesExtrema series_extrema(std::span<const DeltaPoint> points, std::uint64_t from_n = 0) {
    SeriesExtrema r;
    for (const DeltaPoint& p : points) {
        if (p.n < from_n || !p.delta) {
            continue;
        }
        const double d = *p.delta;
        if (r.points == 0 || d < r.min) {
            r.min = d;
            r.n_at_min = p.n;
        }
        if (r.points == 0 || d > r.max) {
            r.max = d;
            r.n_at_max = p.n;
        }
        if (std::fabs(d) > 1.0) {
            ++r.outside_unit;
        }
        ++r.points;
    }
    if (r.points == 0) {
        throw insufficient_data_error("no defined delta values in the requested range");
    }
    return r;
}

/// Mean |delta| over defined points with lo <= n <= hi; nullopt if none.
inline std::optional<double> mean_abs_delta(std::span<const DeltaPoint> points, std::uint64_t lo, std::uint64_t hi) {
    double sum = 0.0;
    std::uint64_t count = 0;
    for (const DeltaPoint& p : points) {
        if (p.n >= lo && p.n <= hi && p.delta) {
            sum += std::fabs(*p.delta);
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(count);
}

/// Welford running mean and variance.
class RunningMoments {
public:
    void push(double x) noexcept {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Population variance (divides by n).
    double variance() const noexcept { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace digitlab
