#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace digitlab {

/// A configured size cap (digit count, stream length) would be exceeded.
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough data for a statistic, or not enough digits in a source.
class insufficient_data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed digit file; `offset` is the 0-based byte offset of the culprit.
class digit_parse_error : public std::runtime_error {
public:
    digit_parse_error(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace digitlab
