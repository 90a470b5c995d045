#include "strengthlab/variety.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kernel.hpp"

namespace strengthlab {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

FieldPtr extension_field(const PolyFamily& fam, uint32_t s) {
    if (s == 0) fail(errc::bad_parameters, "extension degree must be >= 1");
    const Field& base = fam.field();
    if (s == 1) return fam.field_ptr();
    if (base.s() != 1) fail(errc::non_prime_base, "extension counting requires a prime base field");
    return field_create(base.p(), s);
}

std::vector<Polynomial> lift_family(const PolyFamily& fam, const FieldPtr& ext) {
    std::vector<Polynomial> out;
    out.reserve(fam.size());
    for (auto& m : fam.members()) out.push_back(ext.get() == &fam.field() ? m : m.lift(ext));
    return out;
}

// All c x c column minors of the formal Jacobian, as symbolic polynomials.
std::vector<Polynomial> symbolic_minors(const PolyFamily& fam) {
    const uint32_t c = fam.size(), n = fam.nvars();
    if (c > n) fail(errc::more_equations_than_variables, "family size exceeds variable count");
    auto jac = formal_jacobian(fam.members());

    std::vector<Polynomial> minors;
    std::vector<uint32_t> cols(c);
    // iterate over c-subsets of columns
    for (uint32_t i = 0; i < c; ++i) cols[i] = i;
    for (;;) {
        // determinant by permutation expansion (c is small here)
        Polynomial det(fam.field_ptr(), n);
        std::vector<uint32_t> perm(c);
        for (uint32_t i = 0; i < c; ++i) perm[i] = i;
        do {
            // parity of perm
            uint32_t inv = 0;
            for (uint32_t i = 0; i < c; ++i)
                for (uint32_t j = i + 1; j < c; ++j)
                    if (perm[i] > perm[j]) ++inv;
            Polynomial prod = Polynomial::constant(fam.field_ptr(), n, 1);
            for (uint32_t i = 0; i < c; ++i) prod = prod * jac[i][cols[perm[i]]];
            det = (inv % 2 == 0) ? det + prod : det - prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        minors.push_back(std::move(det));

        // next combination
        uint32_t i = c;
        while (i-- > 0) {
            if (cols[i] + (c - i) < n) {
                ++cols[i];
                for (uint32_t j = i + 1; j < c; ++j) cols[j] = cols[j - 1] + 1;
                break;
            }
            if (i == 0) return minors;
        }
    }
}

// Determinant of a c x c value matrix over the field.
uint32_t det_values(const Field& f, std::vector<uint32_t> m, uint32_t c) {
    uint32_t det = 1;
    for (uint32_t col = 0; col < c; ++col) {
        uint32_t piv = c;
        for (uint32_t r = col; r < c; ++r)
            if (m[r * c + col] != 0) {
                piv = r;
                break;
            }
        if (piv == c) return 0;
        if (piv != col) {
            for (uint32_t k = 0; k < c; ++k) std::swap(m[col * c + k], m[piv * c + k]);
            det = f.neg(det);
        }
        det = f.mul(det, m[col * c + col]);
        uint32_t inv = f.inv(m[col * c + col]);
        for (uint32_t r = col + 1; r < c; ++r) {
            if (m[r * c + col] == 0) continue;
            uint32_t factor = f.mul(m[r * c + col], inv);
            for (uint32_t k = col; k < c; ++k)
                m[r * c + k] = f.sub(m[r * c + k], f.mul(factor, m[col * c + k]));
        }
    }
    return det;
}

}  // namespace

uint64_t count_points(const PolyFamily& fam, uint32_t s, const ExecConfig& cfg) {
    FieldPtr ext = extension_field(fam, s);
    auto lifted = lift_family(fam, ext);
    auto acc = detail::enumerate_domain(lifted, cfg, detail::AllZeroCountAcc(fam.size()));
    return acc.zeros;
}

uint64_t singular_points(const PolyFamily& fam, uint32_t s, SingularMethod method, const ExecConfig& cfg) {
    const uint32_t c = fam.size(), n = fam.nvars();
    if (c > n) fail(errc::more_equations_than_variables, "family size exceeds variable count");
    FieldPtr ext = extension_field(fam, s);
    auto lifted = lift_family(fam, ext);
    const Field& f = *ext;

    if (method == SingularMethod::minors) {
        auto minors_base = symbolic_minors(fam);
        std::vector<Polynomial> minors;
        minors.reserve(minors_base.size());
        for (auto& m : minors_base) minors.push_back(ext.get() == &fam.field() ? m : m.lift(ext));
        auto pred = [&](const uint32_t* pt) {
            std::span<const uint32_t> point(pt, n);
            for (const auto& m : minors)
                if (m.evaluate(point) != 0) return false;
            return true;
        };
        auto acc = detail::enumerate_domain(lifted, cfg,
                                            detail::FilteredZeroAcc<decltype(pred)>(c, pred));
        return acc.matched;
    }

    // pairing: evaluate the Jacobian entries at the point and test every
    // determinant det(dP_i/dh_j) over standard-basis column c-subsets
    auto jac_base = formal_jacobian(fam.members());
    std::vector<std::vector<Polynomial>> jac;
    jac.reserve(c);
    for (auto& row : jac_base) {
        std::vector<Polynomial> lrow;
        lrow.reserve(n);
        for (auto& e : row) lrow.push_back(ext.get() == &fam.field() ? e : e.lift(ext));
        jac.push_back(std::move(lrow));
    }
    auto pred = [&](const uint32_t* pt) {
        std::span<const uint32_t> point(pt, n);
        std::vector<uint32_t> values(size_t(c) * n);
        for (uint32_t i = 0; i < c; ++i)
            for (uint32_t j = 0; j < n; ++j) values[i * n + j] = jac[i][j].evaluate(point);
        std::vector<uint32_t> cols(c);
        for (uint32_t i = 0; i < c; ++i) cols[i] = i;
        for (;;) {
            std::vector<uint32_t> sub(size_t(c) * c);
            for (uint32_t i = 0; i < c; ++i)
                for (uint32_t j = 0; j < c; ++j) sub[i * c + j] = values[i * n + cols[j]];
            if (det_values(f, std::move(sub), c) != 0) return false;
            uint32_t i = c;
            bool advanced = false;
            while (i-- > 0) {
                if (cols[i] + (c - i) < n) {
                    ++cols[i];
                    for (uint32_t j = i + 1; j < c; ++j) cols[j] = cols[j - 1] + 1;
                    advanced = true;
                    break;
                }
                if (i == 0) break;
            }
            if (!advanced) return true;
        }
    };
    auto acc = detail::enumerate_domain(lifted, cfg, detail::FilteredZeroAcc<decltype(pred)>(c, pred));
    return acc.matched;
}

DimEstimate dim_estimate(const PointCountTable& table, DimWhich which) {
    if (table.rows.empty()) fail(errc::empty_table, "no point-count rows");
    auto count_of = [&](const PointCountRow& r) -> std::optional<uint64_t> {
        if (which == DimWhich::variety) return r.n_variety;
        return r.n_singular;
    };

    const double logq = std::log(double(table.base_p)) * double(table.base_s);

    DimEstimate out;
    std::optional<PointCountRow> largest;
    std::vector<int> row_estimates;
    for (const auto& r : table.rows) {
        auto cnt = count_of(r);
        if (!cnt) continue;
        if (*cnt > 0) {
            double est = std::log(double(*cnt)) / logq / double(r.s);
            row_estimates.push_back(int(std::lround(est)));
            if (!largest || r.s > largest->s) largest = r;
        }
    }
    if (!largest) {
        out.empty = true;
        return out;
    }
    uint64_t cnt = *count_of(*largest);
    double raw = std::log(double(cnt)) / logq / double(largest->s);
    out.value = int(std::lround(raw));
    out.residual = std::abs(raw - double(out.value));
    bool disagree = false;
    for (int e : row_estimates)
        if (e != out.value) disagree = true;
    out.low_confidence = out.residual > 0.2 || disagree;
    return out;
}

VarietyReport codim_singular(const PolyFamily& fam, uint32_t s_max, const ExecConfig& cfg,
                             SingularMethod method) {
    if (s_max == 0) fail(errc::bad_parameters, "s_max must be >= 1");
    VarietyReport rep;
    rep.table.base_p = fam.field().p();
    rep.table.base_s = fam.field().s();

    // Jacobian-criterion degeneracy: a variable occurring only with exponents
    // divisible by p has an identically-zero formal partial.
    const uint32_t p = fam.field().p();
    for (uint32_t mi = 0; mi < fam.size(); ++mi) {
        const auto& member = fam[mi];
        std::vector<bool> seen(fam.nvars(), false), clean(fam.nvars(), false);
        for (auto& [m, c] : member.terms())
            for (auto& [v, e] : m.vars) {
                seen[v] = true;
                if (e % p != 0) clean[v] = true;
            }
        for (uint32_t v = 0; v < fam.nvars(); ++v)
            if (seen[v] && !clean[v])
                rep.warnings.push_back("char-degenerate: member " + std::to_string(mi + 1) +
                                       " uses x" + std::to_string(v + 1) +
                                       " only with exponents divisible by p");
    }

    for (uint32_t s = 1; s <= s_max; ++s) {
        PointCountRow row;
        row.s = s;
        auto qs = checked_pow(fam.field().q(), s);
        row.q_s = qs ? *qs : 0;
        double t0 = now_ms();
        row.n_variety = count_points(fam, s, cfg);
        row.n_singular = singular_points(fam, s, method, cfg);
        row.elapsed_ms = now_ms() - t0;
        rep.table.rows.push_back(row);
    }

    rep.dim_x = dim_estimate(rep.table, DimWhich::variety);
    rep.dim_sing = dim_estimate(rep.table, DimWhich::singular);
    rep.smooth = rep.dim_sing.empty;
    if (!rep.dim_x.empty && !rep.dim_sing.empty) rep.kappa = rep.dim_x.value - rep.dim_sing.value;
    return rep;
}

}  // namespace strengthlab
