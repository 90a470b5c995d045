#include "strengthlab/gf.hpp"

#include <algorithm>

namespace strengthlab {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((unsigned __int128)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// ---- dense polynomial helpers over F_p (coefficient vectors, constant first) ----

uint32_t poly_eval_fp(std::span<const uint32_t> c, uint32_t x, uint32_t p) {
    uint64_t acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % p;
    return uint32_t(acc);
}

int poly_deg(const std::vector<uint32_t>& a) {
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != 0) return int(i);
    return -1;
}

// a mod b for monic b.
std::vector<uint32_t> poly_rem_fp(std::vector<uint32_t> a, const std::vector<uint32_t>& b, uint32_t p) {
    int db = poly_deg(b);
    for (int k = poly_deg(a); k >= db; --k) {
        uint32_t c = a[size_t(k)];
        if (c == 0) continue;
        for (int i = 0; i <= db; ++i) {
            uint64_t v = a[size_t(k - db + i)] + uint64_t(p) - uint64_t(c) * b[size_t(i)] % p;
            a[size_t(k - db + i)] = uint32_t(v % p);
        }
    }
    return a;
}

bool divides_fp(const std::vector<uint32_t>& divisor, const std::vector<uint32_t>& poly, uint32_t p) {
    auto r = poly_rem_fp(poly, divisor, p);
    return poly_deg(r) < 0;
}

// Irreducibility over F_p by root checks and trial division by monic factors
// of degree <= s/2; feasible for the small p, s in scope.
bool is_irreducible_fp(const std::vector<uint32_t>& c, uint32_t p) {
    uint32_t s = uint32_t(c.size() - 1);
    for (uint32_t a = 0; a < p; ++a)
        if (poly_eval_fp(c, a, p) == 0) return false;
    for (uint32_t k = 2; 2 * k <= s; ++k) {
        std::vector<uint32_t> div(k + 1, 0);
        div[k] = 1;
        uint64_t cnt = 1;
        for (uint32_t i = 0; i < k; ++i) cnt *= p;
        for (uint64_t t = 0; t < cnt; ++t) {
            uint64_t v = t;
            for (uint32_t i = 0; i < k; ++i) {
                div[i] = uint32_t(v % p);
                v /= p;
            }
            if (divides_fp(div, c, p)) return false;
        }
    }
    return true;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d : {2, 3, 5, 7, 11, 13}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    // deterministic Miller-Rabin with the first twelve prime bases (valid far
    // beyond the q <= 2^20 range accepted here)
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

void Field::to_digits(uint32_t id, uint32_t* out) const {
    for (uint32_t i = 0; i < s_; ++i) {
        out[i] = id % p_;
        id /= p_;
    }
}

uint32_t Field::from_digits(const uint32_t* d) const {
    uint64_t id = 0;
    for (uint32_t i = s_; i-- > 0;) id = id * p_ + d[i];
    return uint32_t(id);
}

uint32_t Field::add_generic(uint32_t a, uint32_t b) const {
    uint32_t da[64], db[64];
    to_digits(a, da);
    to_digits(b, db);
    for (uint32_t i = 0; i < s_; ++i) {
        da[i] += db[i];
        if (da[i] >= p_) da[i] -= p_;
    }
    return from_digits(da);
}

uint32_t Field::mul_generic(uint32_t a, uint32_t b) const {
    uint32_t da[64], db[64];
    to_digits(a, da);
    to_digits(b, db);
    uint64_t conv[128] = {0};
    for (uint32_t i = 0; i < s_; ++i) {
        if (da[i] == 0) continue;
        for (uint32_t j = 0; j < s_; ++j) conv[i + j] += uint64_t(da[i]) * db[j];
    }
    // reduce modulo the monic modulus, top down
    for (uint32_t k = 2 * s_ - 2; k >= s_ && k < 128; --k) {
        uint64_t c = conv[k] % p_;
        conv[k] = 0;
        if (c == 0) continue;
        for (uint32_t i = 0; i < s_; ++i) conv[k - s_ + i] += (uint64_t(p_) - c * modulus_[i] % p_);
    }
    uint32_t out[64];
    for (uint32_t i = 0; i < s_; ++i) out[i] = uint32_t(conv[i] % p_);
    return from_digits(out);
}

uint32_t Field::inv_generic(uint32_t a) const {
    // extended Euclid in F_p[t] modulo the field modulus
    auto inv_mod_p = [&](uint32_t x) { return uint32_t(powmod_u64(x, p_ - 2, p_)); };
    auto deg = [&](const std::vector<uint32_t>& v) -> int {
        for (size_t i = v.size(); i-- > 0;)
            if (v[i] != 0) return int(i);
        return -1;
    };

    std::vector<uint32_t> r0(modulus_.begin(), modulus_.end());
    std::vector<uint32_t> r1(s_ + 1, 0);
    {
        uint32_t d[64];
        to_digits(a, d);
        for (uint32_t i = 0; i < s_; ++i) r1[i] = d[i];
    }
    std::vector<uint32_t> t0(s_ + 1, 0), t1(s_ + 1, 0);
    t1[0] = 1;

    while (deg(r1) > 0) {
        int d0 = deg(r0), d1 = deg(r1);
        if (d0 < d1) {
            std::swap(r0, r1);
            std::swap(t0, t1);
            continue;
        }
        uint32_t factor = uint32_t(uint64_t(r0[size_t(d0)]) * inv_mod_p(r1[size_t(d1)]) % p_);
        int shift = d0 - d1;
        for (int i = 0; i <= d1; ++i) {
            uint64_t v = r0[size_t(i + shift)] + uint64_t(p_) - uint64_t(factor) * r1[size_t(i)] % p_;
            r0[size_t(i + shift)] = uint32_t(v % p_);
        }
        for (size_t i = 0; i + size_t(shift) < t0.size(); ++i) {
            uint64_t v = t0[i + size_t(shift)] + uint64_t(p_) - uint64_t(factor) * t1[i] % p_;
            t0[i + size_t(shift)] = uint32_t(v % p_);
        }
        if (deg(r0) < deg(r1)) {
            std::swap(r0, r1);
            std::swap(t0, t1);
        }
    }
    if (deg(r1) != 0) fail(errc::division_by_zero, "element not invertible");
    uint32_t scale = inv_mod_p(r1[0]);
    uint32_t out[64] = {0};
    for (size_t i = 0; i < t1.size() && i < s_; ++i) out[i] = uint32_t(uint64_t(t1[i]) * scale % p_);
    return from_digits(out);
}

uint32_t Field::pow(uint32_t a, uint64_t e) const {
    uint32_t r = 1, base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

std::vector<uint32_t> Field::coeffs(uint32_t id) const {
    std::vector<uint32_t> out(s_);
    to_digits(id, out.data());
    return out;
}

uint32_t Field::from_coeffs(std::span<const uint32_t> c) const {
    uint32_t d[64] = {0};
    for (uint32_t i = 0; i < s_ && i < c.size(); ++i) d[i] = c[i] % p_;
    return from_digits(d);
}

uint32_t Field::from_integer(long long v) const {
    long long r = v % (long long)p_;
    if (r < 0) r += p_;
    return uint32_t(r);
}

std::string Field::element_string(uint32_t id) const {
    if (s_ == 1) return std::to_string(id);
    if (id == 0) return "0";
    auto c = coeffs(id);
    std::string out;
    for (uint32_t i = s_; i-- > 0;) {
        if (c[i] == 0) continue;
        if (!out.empty()) out += "+";
        if (i == 0) {
            out += std::to_string(c[i]);
        } else {
            if (c[i] != 1) out += std::to_string(c[i]) + "*";
            out += "t";
            if (i >= 2) out += "^" + std::to_string(i);
        }
    }
    return out;
}

FieldPtr Field::make(uint64_t p, uint32_t s) {
    if (s == 0) fail(errc::degree_zero, "extension degree must be >= 1");
    if (p < 2 || !is_prime_u64(p)) fail(errc::not_prime, "p = " + std::to_string(p) + " is not prime");
    uint64_t q = 1;
    for (uint32_t i = 0; i < s; ++i) {
        if (q > kMaxQ / p)
            fail(errc::field_too_large,
                 "q = " + std::to_string(p) + "^" + std::to_string(s) + " exceeds " + std::to_string(kMaxQ));
        q *= p;
    }
    if (q > kMaxQ) fail(errc::field_too_large, "q exceeds " + std::to_string(kMaxQ));

    auto f = std::shared_ptr<Field>(new Field());
    f->p_ = uint32_t(p);
    f->s_ = s;
    f->q_ = q;

    if (s == 1) {
        f->modulus_ = {0, 1};  // t, unused
    } else {
        // lexicographically smallest monic irreducible of degree s
        std::vector<uint32_t> c(s + 1, 0);
        c[s] = 1;
        uint64_t count = 1;
        for (uint32_t i = 0; i < s; ++i) count *= p;
        bool found = false;
        for (uint64_t rank = 0; rank < count && !found; ++rank) {
            // lex order on (c_0, ..., c_{s-1): the last coordinate cycles fastest
            uint64_t v = rank;
            for (uint32_t i = s; i-- > 0;) {
                c[i] = uint32_t(v % p);
                v /= p;
            }
            if (is_irreducible_fp(c, uint32_t(p))) found = true;
        }
        if (!found) fail(errc::bad_parameters, "no irreducible modulus of this degree");  // unreachable
        f->modulus_ = c;
    }

    f->neg_t_.resize(q);
    for (uint64_t a = 0; a < q; ++a) {
        uint32_t d[64];
        f->to_digits(uint32_t(a), d);
        for (uint32_t i = 0; i < s; ++i) d[i] = d[i] == 0 ? 0 : uint32_t(p) - d[i];
        f->neg_t_[a] = f->from_digits(d);
    }

    // Tr(t^i) for the basis powers, then extend F_p-linearly over all ids.
    std::vector<uint32_t> tr_basis(s);
    for (uint32_t i = 0; i < s; ++i) {
        uint64_t idp = 1;
        for (uint32_t k = 0; k < i; ++k) idp *= p;
        uint32_t x = uint32_t(idp);  // id of t^i
        uint32_t acc = x;
        for (uint32_t k = 1; k < s; ++k) {
            // Frobenius: x <- x^p
            uint32_t r = 1, base = x;
            uint64_t e = p;
            while (e) {
                if (e & 1) r = f->mul_generic(r, base);
                base = f->mul_generic(base, base);
                e >>= 1;
            }
            x = r;
            acc = f->add_generic(acc, x);
        }
        uint32_t d[64];
        f->to_digits(acc, d);
        tr_basis[i] = d[0];  // trace lands in the prime subfield
    }
    f->trace_t_.resize(q);
    {
        std::vector<uint32_t> d(s, 0);
        for (uint64_t a = 0; a < q; ++a) {
            uint64_t t = 0;
            for (uint32_t i = 0; i < s; ++i) t += uint64_t(d[i]) * tr_basis[i];
            f->trace_t_[a] = uint32_t(t % p);
            for (uint32_t i = 0; i < s; ++i) {
                if (++d[i] < p) break;
                d[i] = 0;
            }
        }
    }

    if (q <= kOpsTableMaxQ) {
        f->add_t_.resize(q * q);
        f->mul_t_.resize(q * q);
        for (uint64_t a = 0; a < q; ++a)
            for (uint64_t b = 0; b < q; ++b) {
                uint32_t sum, prod;
                if (s == 1) {
                    sum = uint32_t((a + b) % p);
                    prod = uint32_t(a * b % p);
                } else {
                    sum = f->add_generic(uint32_t(a), uint32_t(b));
                    prod = f->mul_generic(uint32_t(a), uint32_t(b));
                }
                f->add_t_[a * q + b] = sum;
                f->mul_t_[a * q + b] = prod;
            }
    }
    if (q <= kInvTableMaxQ) {
        f->inv_t_.resize(q, 0);
        for (uint64_t a = 1; a < q; ++a)
            f->inv_t_[a] = (s == 1) ? uint32_t(powmod_u64(a, p - 2, p)) : f->inv_generic(uint32_t(a));
    }
    return f;
}

FieldPtr field_create(uint64_t p, uint32_t s) { return Field::make(p, s); }

}  // namespace strengthlab
