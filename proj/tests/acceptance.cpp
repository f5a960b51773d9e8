// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "digitlab/digitlab.hpp"

using namespace digitlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    const char* id;
    const char* title;
    std::function<Outcome()> check;
};

std::string fmt(double x) { return csv::format_real(x); }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<std::uint8_t> as_vector(const DigitStream& s) { return {s.digits().begin(), s.digits().end()}; }

// Criterion 1: 10^4 digits of pi, e, sqrt 2 agree with the integer-only
// second method; under 30 s total.
Outcome digit_generation() {
    constexpr std::size_t n = 10'000;
    Stopwatch clock;
    const bool pi_ok = as_vector(pi_digits(n)) == pi_digits_spigot(n);
    const bool e_ok = as_vector(e_digits(n)) == e_digits_spigot(n);
    const bool sqrt_ok = as_vector(sqrt_digits(2, n)) == sqrt_digits_schoolbook(2, n);
    const double t = clock.seconds();
    return {pi_ok && e_ok && sqrt_ok && t < 30.0,
            std::string("pi ") + (pi_ok ? "agree" : "DIFFER") + ", e " + (e_ok ? "agree" : "DIFFER") + ", sqrt2 " +
                (sqrt_ok ? "agree" : "DIFFER") + ", " + fmt(t) + " s (limit 30 s)"};
}

// Criterion 2: (k, S) equal the native conversion for n <= 40; for n <= 10^5
// S is even and |k - n log_3 2| <= 1; under 2 minutes.
Outcome power_walk_exactness() {
    Stopwatch clock;
    std::uint64_t native_mismatch = 0;
    for (const PowerSample& s : run_power_walk(2, 3, 40, 1)) {
        std::uint64_t v = std::uint64_t{1} << s.n;
        std::uint64_t k = 0;
        std::uint64_t S = 0;
        while (v != 0) {
            S += v % 3;
            ++k;
            v /= 3;
        }
        native_mismatch += (s.k != k || s.S != S) ? 1 : 0;
    }
    const double log3_2 = std::log(2.0) / std::log(3.0);
    std::uint64_t odd = 0;
    std::uint64_t off = 0;
    std::uint64_t count = 0;
    walk_powers(2, 3, 100'000, EmitSchedule::uniform(1), {}, [&](const PowerSample& s) {
        odd += s.S % 2;
        off += std::fabs(static_cast<double>(s.k) - static_cast<double>(s.n) * log3_2) > 1.0 ? 1 : 0;
        ++count;
    });
    const double t = clock.seconds();
    return {native_mismatch == 0 && odd == 0 && off == 0 && count == 100'000 && t < 120.0,
            "native mismatches " + std::to_string(native_mismatch) + "/40, odd S " + std::to_string(odd) +
                ", |k - n log3 2| > 1: " + std::to_string(off) + " of " + std::to_string(count) + ", " + fmt(t) +
                " s (limit 120 s)"};
}

// Criterion 3: s_3(2^n), n = 1..10^5: |mean| <= 0.02, |variance - 1| <= 0.05,
// chi-square below df + 4 sqrt(2 df).
Outcome clt_histogram() {
    const ExpectedStats stats = ExpectedStats::make(2, 3);
    Histogram h;
    RunningMoments m;
    walk_powers(2, 3, 100'000, EmitSchedule::uniform(1), {}, [&](const PowerSample& s) {
        const double v = s_value(s, stats);
        h.insert(v);
        m.push(v);
    });
    const ChiSquareResult chi = chi_square_vs_normal(h);
    const double bound = chi_square_upper(chi.degrees_of_freedom);
    const bool mean_ok = std::fabs(m.mean()) <= 0.02;
    const bool var_ok = std::fabs(m.variance() - 1.0) <= 0.05;
    const bool chi_ok = !chi.degenerate && chi.statistic < bound;
    return {mean_ok && var_ok && chi_ok && h.total() == 100'000,
            "mean " + fmt(m.mean()) + " (|.| <= 0.02), variance " + fmt(m.variance()) + " (|. - 1| <= 0.05), chi2 " +
                fmt(chi.statistic) + " on df " + std::to_string(chi.degrees_of_freedom) + " (< " + fmt(bound) + ")"};
}

// Criterion 4: delta_3(2, n) over n in [10^3, 10^5]: some |delta| > 1 and
// max |delta| < 3.
Outcome lil_oscillation_powers() {
    const ExpectedStats stats = ExpectedStats::make(2, 3);
    std::vector<DeltaPoint> pts;
    walk_powers(2, 3, 100'000, EmitSchedule::uniform(1), {}, [&](const PowerSample& s) {
        if (s.n >= 1'000) {
            pts.push_back({s.n, s.S, delta_power(s, stats)});
        }
    });
    const SeriesExtrema ex = series_extrema(pts, 1'000);
    const double max_abs = std::max(std::fabs(ex.min), std::fabs(ex.max));
    return {ex.outside_unit >= 1 && max_abs < 3.0,
            "min " + fmt(ex.min) + " at n=" + std::to_string(ex.n_at_min) + ", max " + fmt(ex.max) + " at n=" +
                std::to_string(ex.n_at_max) + ", |delta| > 1 at " + std::to_string(ex.outside_unit) + " of " +
                std::to_string(ex.points) + " n (need >= 1), max |delta| " + fmt(max_abs) + " (< 3)"};
}

// Criterion 5: first 10^6 digits of a constant: |delta| <= 1 for every emitted
// n >= 100, and mean |delta| on [9e5, 1e6] below mean |delta| on [1e3, 1e4];
// under 5 minutes including generation.
Outcome constant_convergence(const char* name, const std::function<DigitStream(std::size_t)>& generate) {
    constexpr std::size_t n = 1'000'000;
    Stopwatch clock;
    const DigitStream stream = generate(n);
    const auto pts = running_delta(stream.digits(), EmitSchedule::dense_then_sparse());
    const SeriesExtrema ex = series_extrema(pts, 100);
    const double early = mean_abs_delta(pts, 1'000, 10'000).value();
    const double late = mean_abs_delta(pts, 900'000, 1'000'000).value();
    const double t = clock.seconds();
    const bool bounded = ex.outside_unit == 0;
    return {bounded && late < early && t < 300.0,
            std::string(name) + ": delta in [" + fmt(ex.min) + ", " + fmt(ex.max) + "] over " +
                std::to_string(ex.points) + " points n >= 100, outside [-1,1]: " + std::to_string(ex.outside_unit) +
                "; mean |delta| [1e3,1e4] " + fmt(early) + " vs [9e5,1e6] " + fmt(late) + "; " + fmt(t) +
                " s (limit 300 s)"};
}

// Criterion 6: 10^4 random mul_small steps keep the cached digit sum equal to
// a full rescan, and new S = p old S - (q-1) carries at every step.
Outcome carry_identity() {
    std::mt19937_64 rng(2718281828);
    std::uniform_int_distribution<std::uint64_t> pick_p(1, 64);
    const std::uint64_t bases[] = {3, 2, 10, 7};
    std::uint64_t steps = 0;
    std::uint64_t cache_bad = 0;
    std::uint64_t identity_bad = 0;
    for (std::uint64_t q : bases) {
        BaseQNumber x = BaseQNumber::from_integer(1, q);
        for (int i = 0; i < 2'500; ++i) {
            const std::uint64_t p = pick_p(rng);
            const std::uint64_t old_sum = x.digit_sum();
            const std::uint64_t carries = x.mul_small_in_place(p);
            cache_bad += x.digit_sum() != x.rescan_digit_sum() ? 1 : 0;
            identity_bad += x.digit_sum() != p * old_sum - (q - 1) * carries ? 1 : 0;
            ++steps;
        }
        cache_bad += x.check_invariants() ? 0 : 1;
    }
    return {steps == 10'000 && cache_bad == 0 && identity_bad == 0,
            std::to_string(steps) + " steps over bases 3, 2, 10, 7: cache/rescan mismatches " +
                std::to_string(cache_bad) + ", carry identity violations " + std::to_string(identity_bad)};
}

// Criterion 7: 0.6309 and 0.8412 within 5e-5 for p=2, q=3; 4.5 and 8.25 exact.
Outcome formula_constants() {
    const ExpectedStats s = ExpectedStats::make(2, 3);
    const double lin = s.linear_mean();
    const double var = (9.0 - 1.0) / 6.0 * s.log_q_p;
    const DigitModel ten = DigitModel::for_base(10);
    const bool ok = std::fabs(lin - 0.6309) <= 5e-5 && std::fabs(var - 0.8412) <= 5e-5 &&
                    std::fabs(s.lil_variance() - 0.8412) <= 5e-5 && ten.mean == 4.5 && ten.variance == 8.25;
    return {ok, "(q-1)/2 log3 2 = " + fmt(lin) + ", (q^2-1)/6 log3 2 = " + fmt(var) + ", base-10 mean " +
                    fmt(ten.mean) + ", variance " + fmt(ten.variance)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Criterion 8: repeated identical CLI invocations give byte-identical CSV.
Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "digitlab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::string text;
        std::mt19937_64 rng(1955);
        for (int i = 1; i <= 20'000; ++i) {
            text.push_back(static_cast<char>('0' + rng() % 10));
            if (i % 50 == 0) {
                text.push_back('\n');
            } else if (i % 5 == 0) {
                text.push_back(' ');
            }
        }
        std::ofstream(dir / "digits.txt", std::ios::binary) << text;
    }
    const std::vector<std::string> commands{
        "powers --p 2 --q 3 --n-max 20000 --c0 1",
        "constant --source pi --count 50000",
        "constant --source sqrt2 --count 20000 --stride 7",
        "analyze-file --path " + (dir / "digits.txt").string() + " --skip 1",
        "hist --p 2 --q 3 --n-max 10000",
    };
    int identical = 0;
    int failures = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(run) + ".csv");
            const std::string cmd = std::string(DIGITLAB_CLI_PATH) + " " + commands[i] + " --out " + out.string() +
                                    " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ++failures;
            }
            outputs[run] = slurp(out);
        }
        identical += (!outputs[0].empty() && outputs[0] == outputs[1]) ? 1 : 0;
    }
    fs::remove_all(dir);
    return {failures == 0 && identical == static_cast<int>(commands.size()),
            std::to_string(identical) + "/" + std::to_string(commands.size()) +
                " commands byte-identical across two runs, nonzero exits " + std::to_string(failures)};
}

}  // namespace

int main() {
    const GenerationLimits big{2'000'000};
    const std::vector<Criterion> criteria{
        {"AC1", "digit generation cross-check (10^4 digits)", digit_generation},
        {"AC2", "power-walk exactness", power_walk_exactness},
        {"AC3", "CLT histogram of s_3(2^n)", clt_histogram},
        {"AC4", "LIL oscillation for 2^n in base 3", lil_oscillation_powers},
        {"AC5a", "convergence behaviour: pi", [&] { return constant_convergence("pi", [&](std::size_t n) { return pi_digits(n, big); }); }},
        {"AC5b", "convergence behaviour: e", [&] { return constant_convergence("e", [&](std::size_t n) { return e_digits(n, big); }); }},
        {"AC5c", "convergence behaviour: sqrt2",
         [&] { return constant_convergence("sqrt2", [&](std::size_t n) { return sqrt_digits(2, n, big); }); }},
        {"AC6", "carry identity and cache coherence", carry_identity},
        {"AC7", "formula constants", formula_constants},
        {"AC8", "CLI determinism", cli_determinism},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << ": " << o.detail << std::endl;
    }
    std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
