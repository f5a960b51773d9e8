#pragma once

#include <cstdint>
#include <stdexcept>

namespace digitlab {

/// Which indices n of a sequential series get emitted.
///
/// Every index is still computed; the schedule only thins the output.
class EmitSchedule {
public:
    /// n = stride, 2*stride, ...
    static EmitSchedule uniform(std::uint64_t stride, bool include_last = false) {
        if (stride < 1) {
            throw std::invalid_argument("stride must be at least 1");
        }
        return EmitSchedule(0, stride, include_last);
    }

    /// Every n up to `dense_until`, then multiples of `sparse_stride`.
    static EmitSchedule dense_then_sparse(std::uint64_t dense_until = 10'000,
                                          std::uint64_t sparse_stride = 100,
                                          bool include_last = true) {
        if (sparse_stride < 1) {
            throw std::invalid_argument("stride must be at least 1");
        }
        return EmitSchedule(dense_until, sparse_stride, include_last);
    }

    bool emits(std::uint64_t n, std::uint64_t last) const noexcept {
        if (n <= dense_until_) {
            return true;
        }
        if (n % stride_ == 0) {
            return true;
        }
        return include_last_ && n == last;
    }

    std::uint64_t stride() const noexcept { return stride_; }
    std::uint64_t dense_until() const noexcept { return dense_until_; }
    bool include_last() const noexcept { return include_last_; }

private:
    EmitSchedule(std::uint64_t dense_until, std::uint64_t stride, bool include_last)
        : dense_until_(dense_until), stride_(stride), include_last_(include_last) {}

    std::uint64_t dense_until_;
    std::uint64_t stride_;
    bool include_last_;
};

}  // namespace digitlab
