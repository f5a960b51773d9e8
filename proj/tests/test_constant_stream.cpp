#include "digitlab/constant_stream.hpp"
#include "digitlab/spigot.hpp"

#include <gmpxx.h>
#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace digitlab;

namespace {

std::vector<std::uint8_t> to_digits(const std::string& s) {
    std::vector<std::uint8_t> out;
    for (char c : s) out.push_back(static_cast<std::uint8_t>(c - '0'));
    return out;
}

std::vector<std::uint8_t> as_vector(const DigitStream& s) { return {s.digits().begin(), s.digits().end()}; }

// First 50 fractional digits from published tables.
const std::string pi50 = "14159265358979323846264338327950288419716939937510";
const std::string e50 = "71828182845904523536028747135266249775724709369995";
const std::string sqrt2_50 = "41421356237309504880168872420969807856967187537694";

class TempFile {
public:
    explicit TempFile(const std::string& content) {
        path_ = std::filesystem::temp_directory_path() /
                ("digitlab_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".txt");
        std::ofstream(path_, std::ios::binary) << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

}  // namespace

TEST(PiDigits, FirstDigits) {
    EXPECT_EQ(as_vector(pi_digits(10)), to_digits("1415926535"));
    EXPECT_EQ(as_vector(pi_digits(1)), to_digits("1"));
    EXPECT_EQ(as_vector(pi_digits(50)), to_digits(pi50));
    EXPECT_EQ(pi_digits_spigot(50), to_digits(pi50));
    EXPECT_EQ(pi_digits_spigot(1), to_digits("1"));
}

TEST(EDigits, FirstDigits) {
    EXPECT_EQ(as_vector(e_digits(10)), to_digits("7182818284"));
    EXPECT_EQ(as_vector(e_digits(1)), to_digits("7"));
    EXPECT_EQ(as_vector(e_digits(50)), to_digits(e50));
    EXPECT_EQ(e_digits_spigot(50), to_digits(e50));
}

TEST(SqrtDigits, FirstDigits) {
    EXPECT_EQ(as_vector(sqrt_digits(2, 10)), to_digits("4142135623"));
    EXPECT_EQ(as_vector(sqrt_digits(2, 1)), to_digits("4"));
    EXPECT_EQ(as_vector(sqrt_digits(2, 50)), to_digits(sqrt2_50));
    EXPECT_EQ(sqrt_digits_schoolbook(2, 50), to_digits(sqrt2_50));
    // sqrt(200) = 14.142135623...: multi-digit integer part is dropped.
    EXPECT_EQ(as_vector(sqrt_digits(200, 10)), to_digits("1421356237"));
    EXPECT_EQ(sqrt_digits_schoolbook(200, 10), to_digits("1421356237"));
}

TEST(SqrtDigits, PerfectSquareRejected) {
    EXPECT_THROW(sqrt_digits(4, 5), std::invalid_argument);
    EXPECT_THROW(sqrt_digits(1, 5), std::invalid_argument);
    EXPECT_THROW(sqrt_digits_schoolbook(9, 5), std::invalid_argument);
}

TEST(Generators, CountAndCap) {
    EXPECT_THROW(pi_digits(0), std::invalid_argument);
    EXPECT_THROW(pi_digits(101, GenerationLimits{100}), resource_limit_error);
    EXPECT_THROW(e_digits(101, GenerationLimits{100}), resource_limit_error);
    EXPECT_THROW(sqrt_digits(2, 101, GenerationLimits{100}), resource_limit_error);
    EXPECT_EQ(pi_digits(100, GenerationLimits{100}).size(), 100u);
}

TEST(Generators, Deterministic) {
    EXPECT_EQ(as_vector(pi_digits(1000)), as_vector(pi_digits(1000)));
    EXPECT_EQ(as_vector(e_digits(1000)), as_vector(e_digits(1000)));
    EXPECT_EQ(as_vector(sqrt_digits(2, 1000)), as_vector(sqrt_digits(2, 1000)));
}

TEST(Generators, PrefixStability) {
    for (std::size_t n : {1u, 7u, 100u, 999u}) {
        const auto pi_long = as_vector(pi_digits(3000));
        const auto e_long = as_vector(e_digits(3000));
        const auto s_long = as_vector(sqrt_digits(2, 3000));
        EXPECT_TRUE(std::equal(pi_long.begin(), pi_long.begin() + n, pi_digits(n).digits().begin()));
        EXPECT_TRUE(std::equal(e_long.begin(), e_long.begin() + n, e_digits(n).digits().begin()));
        EXPECT_TRUE(std::equal(s_long.begin(), s_long.begin() + n, sqrt_digits(2, n).digits().begin()));
    }
}

TEST(Generators, CrossAlgorithmAgreement) {
    constexpr std::size_t n = 3000;
    EXPECT_EQ(as_vector(pi_digits(n)), pi_digits_spigot(n));
    EXPECT_EQ(as_vector(e_digits(n)), e_digits_spigot(n));
    EXPECT_EQ(as_vector(sqrt_digits(2, n)), sqrt_digits_schoolbook(2, n));
    EXPECT_EQ(as_vector(sqrt_digits(3, n)), sqrt_digits_schoolbook(3, n));
}

TEST(Generators, DigitRange) {
    for (const auto& s : {pi_digits(5000), e_digits(5000), sqrt_digits(2, 5000), sqrt_digits(7, 5000)}) {
        for (auto d : s.digits()) ASSERT_LE(d, 9);
    }
}

TEST(SqrtDigits, TruncationPropertyUpTo1000) {
    const auto digits = as_vector(sqrt_digits(2, 1000));
    mpz_class a = 1;
    mpz_class two_scaled = 2;
    for (std::size_t n = 1; n <= 1000; ++n) {
        a = a * 10 + digits[n - 1];
        two_scaled *= 100;
        ASSERT_LE(a * a, two_scaled) << "n=" << n;
        ASSERT_LT(two_scaled, (a + 1) * (a + 1)) << "n=" << n;
    }
}

TEST(DigitText, ParseRules) {
    EXPECT_EQ(parse_digit_text("3.14159", std::nullopt, 1), to_digits("14159"));
    EXPECT_EQ(parse_digit_text("10 09 73 12", 8, 0), to_digits("10097312"));
    EXPECT_EQ(parse_digit_text("10\t09\r\n73 12\n", std::nullopt), to_digits("10097312"));
    EXPECT_EQ(parse_digit_text("10 09 73 12", 3, 2), to_digits("097"));
}

TEST(DigitText, IllegalCharacterOffset) {
    try {
        parse_digit_text("12a3", std::nullopt);
        FAIL() << "expected digit_parse_error";
    } catch (const digit_parse_error& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
    try {
        parse_digit_text("3.14.15", std::nullopt);
        FAIL() << "expected digit_parse_error";
    } catch (const digit_parse_error& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    // Errors past the requested count are still reported.
    EXPECT_THROW(parse_digit_text("1234x", 2), digit_parse_error);
}

TEST(DigitText, TooFewDigits) {
    EXPECT_THROW(parse_digit_text("1234", 5), insufficient_data_error);
    EXPECT_THROW(parse_digit_text("1234", 4, 1), insufficient_data_error);
    EXPECT_THROW(parse_digit_text("  \n", std::nullopt), insufficient_data_error);
    EXPECT_THROW(parse_digit_text("123456", std::nullopt, 0, GenerationLimits{5}), resource_limit_error);
}

TEST(FileDigits, ReadsFile) {
    TempFile f("10 09 73 25 33\n76 52 01 35 86\n");
    const DigitStream s = file_digits(f.path(), 8);
    EXPECT_EQ(as_vector(s), to_digits("10097325"));
    EXPECT_EQ(s.at(1), 1);
    EXPECT_EQ(s.at(8), 5);
    EXPECT_THROW(s.at(0), std::out_of_range);
    EXPECT_THROW(s.at(9), std::out_of_range);
    EXPECT_EQ(file_digits(f.path(), std::nullopt).size(), 20u);
    EXPECT_EQ(s.source().kind, DigitSourceKind::file);
}

TEST(FileDigits, MissingFile) {
    EXPECT_THROW(file_digits("/nonexistent/digits.txt", std::nullopt), std::runtime_error);
}
