#pragma once

// Command-line front end: powers, constant, analyze-file, hist.
// Data goes to CSV files; summaries go to the output stream.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "digitlab/constant_stream.hpp"
#include "digitlab/csv.hpp"
#include "digitlab/errors.hpp"
#include "digitlab/lil_analysis.hpp"
#include "digitlab/power_walk.hpp"
#include "digitlab/schedule.hpp"

namespace digitlab::cli {

enum class Command { powers, constant, analyze_file, hist };

enum exit_code : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

struct RunConfig {
    Command command = Command::powers;
    // powers / hist
    std::uint64_t p = 2;
    std::uint64_t q = 3;
    std::uint64_t n_max = 0;
    std::optional<std::uint64_t> stride;
    std::optional<double> c0;
    // constant / analyze-file
    std::string source = "pi";
    std::string path;
    std::uint64_t skip = 0;
    std::optional<std::uint64_t> count;
    // hist
    std::size_t bins = 40;
    double range_lo = -4.0;
    double range_hi = 4.0;

    std::string out;
    std::optional<std::uint64_t> cap;
};

/// Thrown for configurations rejected before any work starts.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void validate(const RunConfig& cfg) {
    auto require = [](bool ok, const char* message) {
        if (!ok) {
            throw usage_error(message);
        }
    };
    if (cfg.stride) {
        require(*cfg.stride >= 1, "--stride must be at least 1");
    }
    if (cfg.cap) {
        require(*cfg.cap >= 1, "--cap must be at least 1");
    }
    require(!cfg.out.empty(), "--out must not be empty");
    switch (cfg.command) {
        case Command::powers:
        case Command::hist:
            require(cfg.p >= 2, "--p must be at least 2");
            require(cfg.q >= 2, "--q must be at least 2");
            require(cfg.n_max >= 1, "--n-max must be at least 1");
            if (cfg.c0) {
                require(std::isfinite(*cfg.c0) && *cfg.c0 >= 0.0, "--c0 must be finite and non-negative");
            }
            if (cfg.command == Command::hist) {
                require(cfg.bins >= 1, "--bins must be at least 1");
                require(std::isfinite(cfg.range_lo) && std::isfinite(cfg.range_hi) && cfg.range_lo < cfg.range_hi,
                        "histogram range is empty: need --range-lo < --range-hi");
            }
            break;
        case Command::constant:
        case Command::analyze_file:
            require(cfg.source == "pi" || cfg.source == "e" || cfg.source == "sqrt2" || cfg.source == "file",
                    "--source must be one of pi, e, sqrt2, file");
            if (cfg.source == "file") {
                require(!cfg.path.empty(), "--path is required for file sources");
            } else {
                require(cfg.skip == 0, "--skip applies to file sources only");
            }
            if (cfg.count) {
                require(*cfg.count >= 1, "--count must be at least 1");
            }
            break;
    }
}

namespace detail {

/// Writes through a temporary file, renamed into place only after a clean close.
inline void write_file_atomically(const std::string& path, const std::function<void(std::ostream&)>& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open '" + tmp + "' for writing");
        }
        try {
            body(f);
        } catch (...) {
            f.close();
            std::filesystem::remove(tmp);
            throw;
        }
        f.close();
        if (!f) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("error writing '" + path + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

inline EmitSchedule schedule_for(const RunConfig& cfg) {
    if (cfg.stride) {
        return EmitSchedule::uniform(*cfg.stride, true);
    }
    return EmitSchedule::dense_then_sparse();
}

}  // namespace detail

inline int cmd_powers(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ExpectedStats stats = ExpectedStats::make(cfg.p, cfg.q);
    if (stats.commensurable) {
        err << "warning: p = " << cfg.p << " and q = " << cfg.q
            << " are powers of a common base; log_q p is rational\n";
    }
    WalkOptions options;
    if (cfg.cap) {
        options.digit_cap = *cfg.cap;
    }
    std::optional<StewartConfig> stewart;
    if (cfg.c0) {
        stewart = StewartConfig{*cfg.c0};
    }

    std::vector<DeltaPoint> deltas;
    std::uint64_t rows = 0;
    detail::write_file_atomically(cfg.out, [&](std::ostream& f) {
        csv::Writer w(f);
        w.row("n", "k", "S", "s_value", "kappa", "delta", "stewart_margin");
        walk_powers(cfg.p, cfg.q, cfg.n_max, detail::schedule_for(cfg), options, [&](const PowerSample& s) {
            std::optional<double> delta;
            std::optional<double> margin;
            if (s.n >= 3) {
                delta = delta_power(s, stats);
                if (stewart) {
                    margin = stewart_margin(s, *stewart);
                }
            }
            w.row(s.n, s.k, s.S, s_value(s, stats), kappa(s, stats), delta, margin);
            deltas.push_back({s.n, s.S, delta});
            ++rows;
        });
    });

    out << "powers p=" << cfg.p << " q=" << cfg.q << " n_max=" << cfg.n_max << ": " << rows << " rows -> "
        << cfg.out << "\n";
    out << "  E=" << csv::format_real(stats.mean) << " V=" << csv::format_real(stats.variance)
        << " log_q(p)=" << csv::format_real(stats.log_q_p) << "\n";
    if (mean_abs_delta(deltas, 3, cfg.n_max)) {
        const SeriesExtrema ex = series_extrema(deltas, 3);
        const bool upper = std::fabs(ex.max) >= std::fabs(ex.min);
        out << "  delta min " << csv::format_real(ex.min) << " at n=" << ex.n_at_min << ", max "
            << csv::format_real(ex.max) << " at n=" << ex.n_at_max << "\n";
        out << "  max |delta| " << csv::format_real(upper ? std::fabs(ex.max) : std::fabs(ex.min))
            << " at n=" << (upper ? ex.n_at_max : ex.n_at_min) << "\n";
        out << "  points outside [-1,1]: " << ex.outside_unit << " of " << ex.points << "\n";
    } else {
        out << "  delta undefined for every emitted n (needs n >= 3)\n";
    }
    return exit_ok;
}

inline DigitStream load_stream(const RunConfig& cfg) {
    GenerationLimits limits;
    if (cfg.cap) {
        limits.cap = *cfg.cap;
    }
    if (cfg.source == "file") {
        std::optional<std::size_t> count;
        if (cfg.count) {
            count = *cfg.count;
        }
        return file_digits(cfg.path, count, cfg.skip, limits);
    }
    const std::size_t count = cfg.count.value_or(100'000);
    try {
        if (cfg.source == "pi") {
            return pi_digits(count, limits);
        }
        if (cfg.source == "e") {
            return e_digits(count, limits);
        }
        return sqrt_digits(2, count, limits);
    } catch (const resource_limit_error& e) {
        throw resource_limit_error(cfg.source + ": " + e.what());
    }
}

inline int cmd_constant(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    const DigitStream stream = load_stream(cfg);
    const std::vector<DeltaPoint> points = running_delta(stream.digits(), detail::schedule_for(cfg));
    detail::write_file_atomically(cfg.out, [&](std::ostream& f) {
        csv::Writer w(f);
        w.row("n", "S", "delta");
        for (const DeltaPoint& p : points) {
            w.row(p.n, p.S, p.delta);
        }
    });

    const std::uint64_t n = stream.size();
    out << "constant " << stream.source().label() << ": " << n << " digits, " << points.size() << " rows -> "
        << cfg.out << "\n";
    out << "  S(" << n << ")=" << points.back().S << "\n";
    if (mean_abs_delta(points, 100, n)) {
        const SeriesExtrema ex = series_extrema(points, 100);
        out << "  delta over n>=100: min " << csv::format_real(ex.min) << " at n=" << ex.n_at_min << ", max "
            << csv::format_real(ex.max) << " at n=" << ex.n_at_max << ", outside [-1,1]: " << ex.outside_unit
            << " of " << ex.points << "\n";
    }
    const auto early = mean_abs_delta(points, 1'000, 10'000);
    const auto late = mean_abs_delta(points, n - n / 10, n);
    if (early && late && n > 10'000) {
        out << "  mean |delta|: n in [1000, 10000] " << csv::format_real(*early) << ", n in [" << (n - n / 10)
            << ", " << n << "] " << csv::format_real(*late) << (*late < *early ? " (shrinking)" : " (not shrinking)")
            << "\n";
    }
    return exit_ok;
}

inline int cmd_hist(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ExpectedStats stats = ExpectedStats::make(cfg.p, cfg.q);
    if (stats.commensurable) {
        err << "warning: p = " << cfg.p << " and q = " << cfg.q
            << " are powers of a common base; log_q p is rational\n";
    }
    WalkOptions options;
    if (cfg.cap) {
        options.digit_cap = *cfg.cap;
    }
    Histogram h(cfg.range_lo, cfg.range_hi, cfg.bins);
    RunningMoments moments;
    walk_powers(cfg.p, cfg.q, cfg.n_max, EmitSchedule::uniform(1), options, [&](const PowerSample& s) {
        const double v = s_value(s, stats);
        h.insert(v);
        moments.push(v);
    });
    detail::write_file_atomically(cfg.out, [&](std::ostream& f) {
        csv::Writer w(f);
        w.row("bin_lo", "bin_hi", "count", "expected_normal");
        for (std::size_t c = 0; c < h.cells(); ++c) {
            w.row(h.cell_lo(c), h.cell_hi(c), h.counts()[c], h.expected_normal(c));
        }
    });
    out << "hist p=" << cfg.p << " q=" << cfg.q << " n=1.." << cfg.n_max << ": " << h.total() << " values in "
        << h.bins() << " bins + 2 overflow -> " << cfg.out << "\n";
    out << "  sample mean " << csv::format_real(moments.mean()) << ", variance "
        << csv::format_real(moments.variance()) << "\n";
    if (h.total() >= 100) {
        const ChiSquareResult chi = chi_square_vs_normal(h);
        out << "  chi-square " << csv::format_real(chi.statistic) << ", df " << chi.degrees_of_freedom;
        if (chi.degenerate) {
            out << " (degenerate: single effective cell)";
        } else {
            out << ", 99.9% bound ~" << csv::format_real(chi_square_upper(chi.degrees_of_freedom));
        }
        out << "\n";
    } else {
        out << "  chi-square skipped: fewer than 100 values\n";
    }
    return exit_ok;
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        switch (cfg.command) {
            case Command::powers: return cmd_powers(cfg, out, err);
            case Command::constant:
            case Command::analyze_file: return cmd_constant(cfg, out, err);
            case Command::hist: return cmd_hist(cfg, out, err);
        }
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}

/// Parses argv (including the program name) and runs the selected command.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Digit-sum randomness diagnostics: powers p^n in base q and decimal digits of constants"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_out = [&](CLI::App* sub, const std::string& fallback) {
        sub->add_option("--out", cfg.out, "CSV output path (default " + fallback + ")");
        sub->add_option("--cap", cfg.cap, "size cap (digits)");
    };
    auto add_walk = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "multiplier p")->default_val(2);
        sub->add_option("--q", cfg.q, "base q")->default_val(3);
        sub->add_option("--n-max", cfg.n_max, "largest exponent n")->required();
    };

    CLI::App* powers = app.add_subcommand("powers", "digit sums of p^n in base q with s, kappa, delta");
    add_walk(powers);
    powers->add_option("--stride", cfg.stride, "emit every stride-th n (default: all n to 10^4, then every 100)");
    powers->add_option("--c0", cfg.c0, "Stewart bound constant C0 (margin column empty when omitted)");
    add_out(powers, "powers.csv");

    auto add_stream = [&](CLI::App* sub, bool file_only) {
        if (!file_only) {
            sub->add_option("--source", cfg.source, "pi | e | sqrt2 | file")->default_val("pi");
        }
        sub->add_option("--path", cfg.path, "digit file path");
        sub->add_option("--skip", cfg.skip, "leading file digits to drop")->default_val(0);
        sub->add_option("--count", cfg.count, "number of digits");
        sub->add_option("--stride", cfg.stride, "emit every stride-th n (default: all n to 10^4, then every 100)");
    };
    CLI::App* constant = app.add_subcommand("constant", "LIL delta series for decimal digits");
    add_stream(constant, false);
    add_out(constant, "constant.csv");

    CLI::App* analyze = app.add_subcommand("analyze-file", "LIL delta series for a digit file");
    add_stream(analyze, true);
    add_out(analyze, "analyze.csv");

    CLI::App* hist = app.add_subcommand("hist", "histogram of s over n = 1..n_max against N(0,1)");
    add_walk(hist);
    hist->add_option("--bins", cfg.bins, "number of data bins")->default_val(40);
    hist->add_option("--range-lo", cfg.range_lo, "lower edge")->default_val(-4.0);
    hist->add_option("--range-hi", cfg.range_hi, "upper edge")->default_val(4.0);
    add_out(hist, "hist.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    std::string fallback_out;
    if (app.got_subcommand(powers)) {
        cfg.command = Command::powers;
        fallback_out = "powers.csv";
    } else if (app.got_subcommand(constant)) {
        cfg.command = Command::constant;
        fallback_out = "constant.csv";
    } else if (app.got_subcommand(analyze)) {
        cfg.command = Command::analyze_file;
        cfg.source = "file";
        fallback_out = "analyze.csv";
    } else {
        cfg.command = Command::hist;
        fallback_out = "hist.csv";
    }
    if (cfg.out.empty()) {
        cfg.out = fallback_out;
    }
    return run(cfg, out, err);
}

/// Convenience overload for tests: args excludes the program name.
inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"digitlab"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace digitlab::cli
