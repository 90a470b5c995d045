#include "strengthlab/cyclotomic.hpp"

#include <cmath>
#include <numbers>

namespace strengthlab {

namespace {

constexpr long long kCoeffCap = (long long)1 << 62;

long long checked_ll(__int128 v) {
    if (v > kCoeffCap || v < -kCoeffCap) fail(errc::internal_overflow, "cyclotomic coefficient overflow");
    return (long long)v;
}

}  // namespace

std::complex<double> CyclotomicSum::value() const {
    std::complex<double> acc = 0;
    for (uint32_t j = 0; j < p_; ++j) {
        double ang = 2.0 * std::numbers::pi * double(j) / double(p_);
        acc += double(counts_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

CycInt CycInt::from_counts(uint32_t p, std::span<const uint64_t> counts) {
    if (counts.size() != p) fail(errc::bad_parameters, "counts size != p");
    CycInt x(p);
    // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
    long long top = (long long)counts[p - 1];
    for (uint32_t j = 0; j + 1 < p; ++j) x.c_[j] = (long long)counts[j] - top;
    return x;
}

CycInt CycInt::operator+(const CycInt& o) const {
    check(o);
    CycInt out(p_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = checked_ll((__int128)c_[i] + o.c_[i]);
    return out;
}

CycInt CycInt::operator-(const CycInt& o) const {
    check(o);
    CycInt out(p_);
    for (size_t i = 0; i < c_.size(); ++i) out.c_[i] = checked_ll((__int128)c_[i] - o.c_[i]);
    return out;
}

CycInt CycInt::operator*(const CycInt& o) const {
    check(o);
    std::vector<__int128> conv(p_, 0);
    for (uint32_t i = 0; i + 1 < p_; ++i) {
        if (c_[i] == 0) continue;
        for (uint32_t j = 0; j + 1 < p_; ++j) conv[(i + j) % p_] += (__int128)c_[i] * o.c_[j];
    }
    CycInt out(p_);
    for (uint32_t j = 0; j + 1 < p_; ++j) out.c_[j] = checked_ll(conv[j] - conv[p_ - 1]);
    return out;
}

CycInt CycInt::conj() const {
    // zeta^j -> zeta^{p-j}; fold zeta^{p-1} back into the reduced basis
    std::vector<long long> full(p_, 0);
    for (uint32_t j = 0; j + 1 < p_; ++j) full[j == 0 ? 0 : p_ - j] += c_[j];
    CycInt out(p_);
    for (uint32_t j = 0; j + 1 < p_; ++j) out.c_[j] = checked_ll((__int128)full[j] - full[p_ - 1]);
    return out;
}

CycInt CycInt::pow(uint32_t e) const {
    CycInt acc = from_integer(p_, 1);
    CycInt base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        if (e >>= 1) base = base * base;
    }
    return acc;
}

bool CycInt::is_zero() const {
    for (auto v : c_)
        if (v != 0) return false;
    return true;
}

bool CycInt::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

long long CycInt::rational() const {
    if (!is_rational()) fail(errc::bad_parameters, "value is not a rational integer");
    return c_[0];
}

int CycInt::sign_real() const {
    if (!is_real()) fail(errc::bad_parameters, "sign_real on a non-real value");
    if (p_ == 2) return c_[0] > 0 ? 1 : (c_[0] < 0 ? -1 : 0);
    if (p_ == 3) {
        // real elements of Z[zeta_3] are rational
        return c_[0] > 0 ? 1 : (c_[0] < 0 ? -1 : 0);
    }
    if (p_ == 5) {
        // real implies c_1 = 0 and c_2 = c_3; value = (A - B sqrt(5)) / 2
        long long A = checked_ll((__int128)2 * c_[0] - c_[2]);
        long long B = c_[2];
        if (A >= 0 && B <= 0) return (A == 0 && B == 0) ? 0 : 1;
        if (A <= 0 && B >= 0) return (A == 0 && B == 0) ? 0 : -1;
        __int128 a2 = (__int128)A * A, b2 = (__int128)5 * B * B;
        int cmp = a2 > b2 ? 1 : (a2 < b2 ? -1 : 0);
        return A > 0 ? cmp : -cmp;  // A>0,B>0: sign(A^2-5B^2); A<0,B<0: the opposite
    }
    fail(errc::bad_parameters, "exact real sign only supported for p in {2,3,5}");
}

std::complex<double> CycInt::approx() const {
    std::complex<double> acc = 0;
    for (uint32_t j = 0; j + 1 < p_; ++j) {
        double ang = 2.0 * std::numbers::pi * double(j) / double(p_);
        acc += double(c_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

}  // namespace strengthlab
