#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "strengthlab/error.hpp"

namespace strengthlab {

// Exact character-sum accumulator: counts[j] = number of points v with
// Tr(P(v)) = j, so the sum is sum_j counts[j] zeta_p^j. Two sums are equal as
// cyclotomic integers iff their canonical vectors (entries minus the minimum,
// using sum_j zeta_p^j = 0) are equal.
class CyclotomicSum {
  public:
    CyclotomicSum(uint32_t p, std::vector<uint64_t> counts) : p_(p), counts_(std::move(counts)) {
        if (counts_.size() != p_) fail(errc::bad_parameters, "counts size != p");
    }

    uint32_t p() const { return p_; }
    const std::vector<uint64_t>& counts() const { return counts_; }
    uint64_t total() const {
        uint64_t t = 0;
        for (auto c : counts_) t += c;
        return t;
    }

    std::vector<uint64_t> canonical() const {
        uint64_t mn = counts_[0];
        for (auto c : counts_) mn = std::min(mn, c);
        std::vector<uint64_t> out(counts_);
        for (auto& c : out) c -= mn;
        return out;
    }

    bool operator==(const CyclotomicSum& o) const { return p_ == o.p_ && canonical() == o.canonical(); }

    CyclotomicSum scaled(uint64_t k) const {
        std::vector<uint64_t> out(counts_);
        for (auto& c : out) c *= k;
        return CyclotomicSum(p_, std::move(out));
    }

    // Unnormalized complex value sum_j counts[j] zeta_p^j.
    std::complex<double> value() const;

    // When the canonical form is supported on zeta^0 only, the sum is the
    // rational integer returned here (always the case for multilinear forms).
    std::optional<uint64_t> as_nonneg_integer() const {
        auto c = canonical();
        for (uint32_t j = 1; j < p_; ++j)
            if (c[j] != 0) return std::nullopt;
        return c[0];
    }

  private:
    uint32_t p_;
    std::vector<uint64_t> counts_;
};

// Element of Z[zeta_p] in the reduced basis 1, zeta, ..., zeta^{p-2}.
// Supports the exact comparisons the identities need; multiplication guards
// against int64 overflow.
class CycInt {
  public:
    explicit CycInt(uint32_t p) : p_(p), c_(p - 1, 0) {}

    static CycInt from_counts(uint32_t p, std::span<const uint64_t> counts);
    static CycInt from_sum(const CyclotomicSum& s) { return from_counts(s.p(), s.counts()); }
    static CycInt from_integer(uint32_t p, long long v) {
        CycInt x(p);
        x.c_[0] = v;
        return x;
    }

    uint32_t p() const { return p_; }
    const std::vector<long long>& coeffs() const { return c_; }

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt conj() const;
    CycInt pow(uint32_t e) const;

    bool operator==(const CycInt& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool is_zero() const;
    bool is_rational() const;
    long long rational() const;  // requires is_rational()
    bool is_real() const { return *this == conj(); }

    // Exact sign of a real value; supported for p in {2, 3, 5} (the fields the
    // exact identity suites run over).
    int sign_real() const;

    // |z|^2 = z * conj(z), a real cyclotomic integer.
    CycInt norm_squared() const { return *this * conj(); }

    std::complex<double> approx() const;

  private:
    void check(const CycInt& o) const {
        if (p_ != o.p_) fail(errc::bad_parameters, "cyclotomic order mismatch");
    }

    uint32_t p_;
    std::vector<long long> c_;
};

}  // namespace strengthlab
