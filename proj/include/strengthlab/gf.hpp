#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "strengthlab/error.hpp"

namespace strengthlab {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Arithmetic in F_{p^s}. An element is identified with the mixed-radix rank of
// its coefficient vector in the power basis of the modulus root:
//
//     id(c_0, ..., c_{s-1}) = c_0 + c_1 p + ... + c_{s-1} p^{s-1}
//
// so the kernels can index elements 0..q-1 directly. The modulus is the
// lexicographically smallest monic irreducible of degree s over F_p, which
// makes element encodings reproducible across runs and machines.
//
// A Field is immutable after construction and safe to share across threads.
class Field {
  public:
    static constexpr uint64_t kMaxQ = uint64_t(1) << 20;  // table-based inverse bound
    static constexpr uint64_t kOpsTableMaxQ = 1024;       // q*q add/mul tables
    static constexpr uint64_t kInvTableMaxQ = uint64_t(1) << 16;

    static FieldPtr make(uint64_t p, uint32_t s);

    uint32_t p() const { return p_; }
    uint32_t s() const { return s_; }
    uint64_t q() const { return q_; }
    // s+1 coefficients, constant term first, monic. For s = 1 this is t.
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    bool same(const Field& o) const { return p_ == o.p_ && s_ == o.s_; }

    uint32_t add(uint32_t a, uint32_t b) const {
        if (!add_t_.empty()) return add_t_[size_t(a) * q_ + b];
        if (s_ == 1) {
            uint64_t r = uint64_t(a) + b;
            return uint32_t(r >= p_ ? r - p_ : r);
        }
        return add_generic(a, b);
    }

    uint32_t neg(uint32_t a) const { return neg_t_[a]; }

    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg_t_[b]); }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (!mul_t_.empty()) return mul_t_[size_t(a) * q_ + b];
        if (s_ == 1) return uint32_t(uint64_t(a) * b % p_);
        return mul_generic(a, b);
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) fail(errc::division_by_zero, "inverse of zero");
        if (!inv_t_.empty()) return inv_t_[a];
        return inv_generic(a);
    }

    uint32_t pow(uint32_t a, uint64_t e) const;

    // Absolute trace Tr(a) = sum_{i<s} a^{p^i}, as an integer in [0, p).
    uint32_t trace(uint32_t a) const { return trace_t_[a]; }

    // Exponent j of the additive character psi(a) = zeta_p^j, j = Tr(a).
    uint32_t char_exponent(uint32_t a) const { return trace_t_[a]; }

    std::vector<uint32_t> coeffs(uint32_t id) const;
    uint32_t from_coeffs(std::span<const uint32_t> c) const;  // entries reduced mod p
    uint32_t from_integer(long long v) const;                 // prime-subfield embedding

    // Text form per the I/O convention: decimal for s = 1, polynomial in `t`
    // otherwise (e.g. "t+1", "2*t^2+1").
    std::string element_string(uint32_t id) const;

    const uint32_t* add_table() const { return add_t_.empty() ? nullptr : add_t_.data(); }
    const uint32_t* mul_table() const { return mul_t_.empty() ? nullptr : mul_t_.data(); }

  private:
    Field() = default;

    void to_digits(uint32_t id, uint32_t* out) const;
    uint32_t from_digits(const uint32_t* d) const;
    uint32_t add_generic(uint32_t a, uint32_t b) const;
    uint32_t mul_generic(uint32_t a, uint32_t b) const;
    uint32_t inv_generic(uint32_t a) const;

    uint32_t p_ = 0;
    uint32_t s_ = 0;
    uint64_t q_ = 0;
    std::vector<uint32_t> modulus_;
    std::vector<uint32_t> neg_t_, trace_t_;
    std::vector<uint32_t> inv_t_;
    std::vector<uint32_t> add_t_, mul_t_;
};

// Spec-facing constructor. Checks p prime, s >= 1 and q = p^s <= Field::kMaxQ.
FieldPtr field_create(uint64_t p, uint32_t s);

bool is_prime_u64(uint64_t n);

// Value-style element for user-facing code; the kernels use raw ids.
class FieldElement {
  public:
    FieldElement(FieldPtr f, uint32_t id) : f_(std::move(f)), id_(id) {}

    uint32_t id() const { return id_; }
    const Field& field() const { return *f_; }
    FieldPtr field_ptr() const { return f_; }
    std::vector<uint32_t> coeffs() const { return f_->coeffs(id_); }

    FieldElement operator+(const FieldElement& o) const { return with(f_->add(id_, check(o))); }
    FieldElement operator-(const FieldElement& o) const { return with(f_->sub(id_, check(o))); }
    FieldElement operator*(const FieldElement& o) const { return with(f_->mul(id_, check(o))); }
    FieldElement operator-() const { return with(f_->neg(id_)); }
    FieldElement inverse() const { return with(f_->inv(id_)); }
    FieldElement pow(uint64_t e) const { return with(f_->pow(id_, e)); }
    uint32_t trace() const { return f_->trace(id_); }
    uint32_t char_exponent() const { return f_->char_exponent(id_); }

    bool operator==(const FieldElement& o) const { return f_->same(*o.f_) && id_ == o.id_; }

    std::string str() const { return f_->element_string(id_); }

  private:
    uint32_t check(const FieldElement& o) const {
        if (!f_->same(*o.f_)) fail(errc::field_mismatch, "operands from different fields");
        return o.id_;
    }
    FieldElement with(uint32_t id) const { return FieldElement(f_, id); }

    FieldPtr f_;
    uint32_t id_;
};

}  // namespace strengthlab
