#pragma once

#include <cstdint>
#include <optional>

#include "strengthlab/error.hpp"

namespace strengthlab {

// Execution policy for the enumeration kernels: thread count and the maximum
// number of point evaluations an exact pass may perform. Results never depend
// on `threads`.
struct ExecConfig {
    int threads = 1;
    uint64_t budget = uint64_t(1) << 34;
};

// q^n without overflow; nullopt when the value exceeds 2^62.
inline std::optional<uint64_t> checked_pow(uint64_t q, uint64_t n) {
    constexpr uint64_t kCap = uint64_t(1) << 62;
    uint64_t r = 1;
    for (uint64_t i = 0; i < n; ++i) {
        if (q != 0 && r > kCap / q) return std::nullopt;
        r *= q;
    }
    return r;
}

// Domain size q^n, checked against the budget.
inline uint64_t domain_size_checked(uint64_t q, uint64_t n, const ExecConfig& cfg) {
    auto d = checked_pow(q, n);
    if (!d || *d > cfg.budget)
        fail(errc::budget_exceeded, "domain q^n = " + std::to_string(q) + "^" + std::to_string(n) +
                                        " exceeds exact budget " + std::to_string(cfg.budget));
    return *d;
}

}  // namespace strengthlab
