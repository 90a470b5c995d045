#include "strengthlab/poly.hpp"

#include <algorithm>

#include "strengthlab/rng.hpp"

namespace strengthlab {

bool Monomial::operator<(const Monomial& o) const {
    uint32_t da = total_degree(), db = o.total_degree();
    if (da != db) return da < db;
    // lexicographic on exponent vectors, earlier variable more significant
    size_t i = 0, j = 0;
    while (i < vars.size() && j < o.vars.size()) {
        if (vars[i].first != o.vars[j].first) {
            // the monomial owning the earlier variable is lex-larger
            return vars[i].first > o.vars[j].first;
        }
        if (vars[i].second != o.vars[j].second) return vars[i].second < o.vars[j].second;
        ++i;
        ++j;
    }
    return i == vars.size() && j < o.vars.size();
}

Monomial Monomial::merged(const Monomial& o) const {
    Monomial out;
    out.vars.reserve(vars.size() + o.vars.size());
    size_t i = 0, j = 0;
    while (i < vars.size() || j < o.vars.size()) {
        if (j == o.vars.size() || (i < vars.size() && vars[i].first < o.vars[j].first)) {
            out.vars.push_back(vars[i++]);
        } else if (i == vars.size() || o.vars[j].first < vars[i].first) {
            out.vars.push_back(o.vars[j++]);
        } else {
            out.vars.emplace_back(vars[i].first, uint16_t(vars[i].second + o.vars[j].second));
            ++i;
            ++j;
        }
    }
    return out;
}

Polynomial Polynomial::constant(FieldPtr f, uint32_t nvars, uint32_t coeff_id) {
    Polynomial p(std::move(f), nvars);
    if (coeff_id != 0) p.add_term(Monomial{}, coeff_id);
    return p;
}

Polynomial Polynomial::variable(FieldPtr f, uint32_t nvars, uint32_t var0) {
    if (var0 >= nvars) fail(errc::unknown_variable, "variable index out of range");
    Polynomial p(std::move(f), nvars);
    Monomial m;
    m.vars.emplace_back(uint16_t(var0), 1);
    p.add_term(m, 1);
    return p;
}

void Polynomial::add_term(const Monomial& m, uint32_t coeff_id) {
    if (coeff_id == 0) return;
    for (auto& [v, e] : m.vars)
        if (v >= nvars_) fail(errc::unknown_variable, "variable index out of range");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, coeff_id);
        degree_ = std::max(degree_, m.total_degree());
    } else {
        uint32_t c = field_->add(it->second, coeff_id);
        if (c == 0) {
            terms_.erase(it);
            recompute_degree();
        } else {
            it->second = c;
        }
    }
}

void Polynomial::check_compat(const Polynomial& o) const {
    if (!field_->same(*o.field_)) fail(errc::field_mismatch, "polynomials over different fields");
    if (nvars_ != o.nvars_) fail(errc::dimension_mismatch, "polynomials over different variable counts");
}

void Polynomial::recompute_degree() {
    degree_ = 0;
    for (auto& [m, c] : terms_) degree_ = std::max(degree_, m.total_degree());
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_compat(o);
    Polynomial out = *this;
    for (auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    check_compat(o);
    Polynomial out = *this;
    for (auto& [m, c] : o.terms_) out.add_term(m, field_->neg(c));
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(field_, nvars_);
    for (auto& [m, c] : terms_) out.add_term(m, field_->neg(c));
    return out;
}

Polynomial Polynomial::scaled(uint32_t coeff_id) const {
    Polynomial out(field_, nvars_);
    if (coeff_id == 0) return out;
    for (auto& [m, c] : terms_) out.add_term(m, field_->mul(c, coeff_id));
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_compat(o);
    Polynomial out(field_, nvars_);
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) out.add_term(ma.merged(mb), field_->mul(ca, cb));
    return out;
}

Polynomial Polynomial::pow(uint32_t e) const {
    Polynomial acc = Polynomial::constant(field_, nvars_, 1);
    Polynomial base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        if (e >>= 1) base = base * base;
    }
    return acc;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return field_->same(*o.field_) && nvars_ == o.nvars_ && terms_ == o.terms_;
}

uint32_t Polynomial::evaluate(std::span<const uint32_t> point) const {
    if (point.size() != nvars_) fail(errc::dimension_mismatch, "point size != variable count");
    const Field& f = *field_;
    uint32_t acc = 0;
    for (auto& [m, c] : terms_) {
        uint32_t v = c;
        for (auto& [var, e] : m.vars) v = f.mul(v, f.pow(point[var], e));
        acc = f.add(acc, v);
    }
    return acc;
}

Polynomial Polynomial::with_nvars(uint32_t n) const {
    if (n < nvars_) fail(errc::dimension_mismatch, "cannot shrink the variable space");
    Polynomial out(field_, n);
    for (auto& [m, c] : terms_) out.add_term(m, c);
    return out;
}

Polynomial Polynomial::assign(uint32_t var0, uint32_t value_id) const {
    Polynomial out(field_, nvars_);
    const Field& f = *field_;
    for (auto& [m, c] : terms_) {
        Monomial rest;
        uint32_t coeff = c;
        for (auto& [v, e] : m.vars) {
            if (v == var0)
                coeff = f.mul(coeff, f.pow(value_id, e));
            else
                rest.vars.emplace_back(v, e);
        }
        out.add_term(rest, coeff);
    }
    return out;
}

Polynomial Polynomial::rename_vars(std::span<const uint32_t> perm, uint32_t new_nvars) const {
    Polynomial out(field_, new_nvars);
    for (auto& [m, c] : terms_) {
        Monomial nm;
        for (auto& [v, e] : m.vars) nm.vars.emplace_back(uint16_t(perm[v]), e);
        std::sort(nm.vars.begin(), nm.vars.end());
        out.add_term(nm, c);
    }
    return out;
}

Polynomial Polynomial::lift(FieldPtr target) const {
    if (target->p() != field_->p()) fail(errc::field_mismatch, "lift requires the same characteristic");
    if (field_->s() != 1) fail(errc::non_prime_base, "lift is defined from the prime subfield");
    Polynomial out(std::move(target), nvars_);
    for (auto& [m, c] : terms_) out.add_term(m, c);  // constants embed with identical ids
    return out;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    const Field& f = *field_;
    std::string out;
    // descending graded-lex
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        if (!out.empty()) out += " + ";
        std::string piece;
        if (m.vars.empty() || c != 1) {
            std::string cs = f.element_string(c);
            if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
            piece = cs;
        }
        for (auto& [v, e] : m.vars) {
            if (!piece.empty()) piece += "*";
            piece += "x" + std::to_string(v + 1);
            if (e > 1) piece += "^" + std::to_string(e);
        }
        out += piece;
    }
    return out;
}

Tensor Tensor::from_polynomial(Polynomial base, uint32_t blocks, uint32_t width) {
    if (base.nvars() != blocks * width) fail(errc::block_mismatch, "variable count != blocks * width");
    for (auto& [m, c] : base.terms()) {
        if (m.vars.size() != blocks) fail(errc::block_mismatch, "monomial misses a block");
        for (uint32_t b = 0; b < blocks; ++b) {
            auto [v, e] = m.vars[b];
            if (e != 1 || v / width != b) fail(errc::block_mismatch, "monomial not multilinear across blocks");
        }
    }
    return Tensor{std::move(base), blocks, width};
}

bool Tensor::is_symmetric() const {
    // adjacent block transpositions generate the symmetric group
    for (uint32_t b = 0; b + 1 < blocks; ++b) {
        std::vector<uint32_t> perm(base.nvars());
        for (uint32_t v = 0; v < base.nvars(); ++v) {
            uint32_t blk = v / width, off = v % width;
            uint32_t nb = blk == b ? b + 1 : (blk == b + 1 ? b : blk);
            perm[v] = nb * width + off;
        }
        if (!(base.rename_vars(perm, base.nvars()) == base)) return false;
    }
    return true;
}

Polynomial delta(const Polynomial& p, std::span<const uint32_t> h) {
    if (h.size() != p.nvars()) fail(errc::dimension_mismatch, "shift size != variable count");
    Polynomial shifted(p.field_ptr(), p.nvars());
    for (auto& [m, c] : p.terms()) {
        Polynomial term = Polynomial::constant(p.field_ptr(), p.nvars(), c);
        for (auto& [v, e] : m.vars) {
            Polynomial lin = Polynomial::variable(p.field_ptr(), p.nvars(), v);
            lin.add_term(Monomial{}, h[v]);
            term = term * lin.pow(e);
        }
        shifted = shifted + term;
    }
    Polynomial out = shifted - p;
    if (p.degree() >= 1 && out.degree() >= p.degree() && !out.is_zero())
        fail(errc::internal_overflow, "difference did not drop the degree");
    return out;
}

Polynomial difference_form(const Polynomial& p, uint32_t d) {
    if (d > 20) fail(errc::budget_exceeded, "difference order too large for symbolic expansion");
    const uint32_t n = p.nvars();
    const uint32_t big_n = d * n;
    Polynomial acc(p.field_ptr(), big_n);
    const uint32_t minus_one = p.field().neg(1);
    for (uint32_t mask = 0; mask < (1u << d); ++mask) {
        // inner substitution x_j -> sum_{i in mask} h_{i,j}
        std::vector<Polynomial> inners;
        inners.reserve(n);
        for (uint32_t j = 0; j < n; ++j) {
            Polynomial s(p.field_ptr(), big_n);
            for (uint32_t i = 0; i < d; ++i)
                if (mask & (1u << i)) {
                    Monomial m;
                    m.vars.emplace_back(uint16_t(i * n + j), 1);
                    s.add_term(m, 1);
                }
            inners.push_back(std::move(s));
        }
        Polynomial val = compose(p, inners);
        uint32_t bits = uint32_t(__builtin_popcount(mask));
        bool negate = ((d - bits) % 2) == 1;
        acc = acc + (negate ? val.scaled(minus_one) : val);
    }
    return acc;
}

Tensor multilinearize(const Polynomial& p) {
    if (p.degree() == 0) fail(errc::degree_zero, "multilinearize requires degree >= 1");
    const uint32_t d = p.degree();
    Polynomial base = difference_form(p, d);
    Tensor t = Tensor::from_polynomial(std::move(base), d, p.nvars());
    if (!t.is_symmetric()) fail(errc::internal_overflow, "multilinear form not symmetric");
    return t;
}

Polynomial partial_derivative(const Polynomial& p, uint32_t var0) {
    Polynomial out(p.field_ptr(), p.nvars());
    const Field& f = p.field();
    for (auto& [m, c] : p.terms()) {
        for (size_t k = 0; k < m.vars.size(); ++k) {
            if (m.vars[k].first != var0) continue;
            uint32_t e = m.vars[k].second;
            uint32_t coeff = f.mul(c, f.from_integer((long long)e));
            if (coeff == 0) break;
            Monomial nm = m;
            if (e == 1)
                nm.vars.erase(nm.vars.begin() + (long)k);
            else
                nm.vars[k].second = uint16_t(e - 1);
            out.add_term(nm, coeff);
            break;
        }
    }
    return out;
}

std::vector<std::vector<Polynomial>> formal_jacobian(std::span<const Polynomial> family) {
    std::vector<std::vector<Polynomial>> out;
    out.reserve(family.size());
    for (const auto& p : family) {
        std::vector<Polynomial> row;
        row.reserve(p.nvars());
        for (uint32_t j = 0; j < p.nvars(); ++j) row.push_back(partial_derivative(p, j));
        out.push_back(std::move(row));
    }
    return out;
}

Polynomial homogenize(const Polynomial& p) {
    if (p.degree() == 0) fail(errc::degree_zero, "homogenize requires degree >= 1");
    const uint32_t d = p.degree();
    const uint32_t fresh = p.nvars();
    Polynomial out(p.field_ptr(), p.nvars() + 1);
    for (auto& [m, c] : p.terms()) {
        Monomial nm = m;
        uint32_t pad = d - m.total_degree();
        if (pad > 0) nm.vars.emplace_back(uint16_t(fresh), uint16_t(pad));
        out.add_term(nm, c);
    }
    return out;
}

Polynomial compose(const Polynomial& outer, std::span<const Polynomial> inners) {
    if (inners.size() != outer.nvars()) fail(errc::arity_mismatch, "inner count != outer arity");
    for (const auto& in : inners) {
        if (!in.field().same(outer.field())) fail(errc::field_mismatch, "inner over a different field");
        if (in.nvars() != inners[0].nvars() || !in.field().same(inners[0].field()))
            fail(errc::field_mismatch, "inners over different spaces");
    }
    FieldPtr f = inners.empty() ? outer.field_ptr() : inners[0].field_ptr();
    uint32_t n = inners.empty() ? 0 : inners[0].nvars();
    Polynomial acc(f, n);
    std::map<std::pair<uint32_t, uint32_t>, Polynomial> powers;  // (var, exp) -> inner^exp
    for (auto& [m, c] : outer.terms()) {
        Polynomial term = Polynomial::constant(f, n, c);
        for (auto& [v, e] : m.vars) {
            auto key = std::make_pair(uint32_t(v), uint32_t(e));
            auto it = powers.find(key);
            if (it == powers.end()) it = powers.emplace(key, inners[v].pow(e)).first;
            term = term * it->second;
        }
        acc = acc + term;
    }
    return acc;
}

Polynomial random_poly(FieldPtr field, uint32_t nvars, uint32_t degree, uint32_t terms, uint64_t seed) {
    if (terms == 0) fail(errc::bad_parameters, "terms must be >= 1");
    if (nvars == 0 && degree > 0) fail(errc::bad_parameters, "positive degree needs variables");
    const Field& f = *field;
    for (uint64_t attempt = 0;; ++attempt) {
        Polynomial p(field, nvars);
        uint64_t stream = attempt;
        uint64_t ctr = 0;
        auto rnd = [&]() { return ctr_value(seed, stream, ctr++); };
        for (uint32_t t = 0; t < terms; ++t) {
            uint32_t deg = (t == 0 || degree == 0) ? degree : uint32_t(1 + bounded(rnd(), degree));
            std::vector<uint16_t> picks(deg);
            for (auto& v : picks) v = uint16_t(bounded(rnd(), nvars));
            std::sort(picks.begin(), picks.end());
            Monomial m;
            for (size_t i = 0; i < picks.size();) {
                size_t j = i;
                while (j < picks.size() && picks[j] == picks[i]) ++j;
                m.vars.emplace_back(picks[i], uint16_t(j - i));
                i = j;
            }
            uint32_t c = uint32_t(1 + bounded(rnd(), f.q() - 1));
            p.add_term(m, c);
        }
        if (degree == 0 && p.is_zero()) continue;  // resample exact cancellations
        if (p.degree() == degree) return p;
    }
}

}  // namespace strengthlab
