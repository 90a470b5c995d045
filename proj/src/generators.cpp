#include "strengthlab/generators.hpp"

#include <algorithm>
#include <functional>

namespace strengthlab {

namespace {

// Adds det(M) to acc where entry(r, c) gives the variable index of the r-th
// row at column choice c; permutation expansion, s small.
void add_det(Polynomial& acc, uint32_t s, const std::function<uint32_t(uint32_t, uint32_t)>& entry) {
    std::vector<uint32_t> perm(s);
    for (uint32_t i = 0; i < s; ++i) perm[i] = i;
    const Field& f = acc.field();
    do {
        uint32_t inv = 0;
        for (uint32_t i = 0; i < s; ++i)
            for (uint32_t j = i + 1; j < s; ++j)
                if (perm[i] > perm[j]) ++inv;
        Monomial m;
        for (uint32_t r = 0; r < s; ++r) m.vars.emplace_back(uint16_t(entry(r, perm[r])), 1);
        std::sort(m.vars.begin(), m.vars.end());
        // rows are distinct variable groups, so no exponent collisions
        acc.add_term(m, inv % 2 == 0 ? 1 : f.neg(1));
    } while (std::next_permutation(perm.begin(), perm.end()));
}

// s-subsets of [n] (0-based), lexicographic.
template <class Fn>
void for_each_subset(uint32_t n, uint32_t s, Fn fn) {
    std::vector<uint32_t> idx(s);
    for (uint32_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
        fn(idx);
        uint32_t i = s;
        bool advanced = false;
        while (i-- > 0) {
            if (idx[i] + (s - i) < n) {
                ++idx[i];
                for (uint32_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
                advanced = true;
                break;
            }
            if (i == 0) break;
        }
        if (!advanced) return;
    }
}

uint64_t binom(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    uint64_t r = 1;
    for (uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

Polynomial gen_F(FieldPtr field, uint32_t n, uint32_t s) {
    if (s < 1 || s > n) fail(errc::bad_parameters, "gen_F needs 1 <= s <= n");
    Polynomial acc(field, s * n);
    for_each_subset(n, s, [&](const std::vector<uint32_t>& cols) {
        add_det(acc, s, [&](uint32_t row, uint32_t c) { return row * n + cols[c]; });
    });
    return acc;
}

Polynomial gen_F_block(FieldPtr field, uint32_t n, uint32_t s, uint32_t m, uint32_t i) {
    if (m < 1 || i < 1 || i > m) fail(errc::bad_parameters, "gen_F_block needs 1 <= i <= m");
    if (s < 1 || s > n) fail(errc::bad_parameters, "gen_F_block needs 1 <= s <= n");
    Polynomial acc(field, s * n * m);
    const uint32_t b = i - 1;
    for_each_subset(n, s, [&](const std::vector<uint32_t>& cols) {
        add_det(acc, s, [&](uint32_t row, uint32_t c) { return (row * m + b) * n + cols[c]; });
    });
    return acc;
}

Polynomial gen_G(FieldPtr field, uint32_t t, uint32_t s, std::span<const uint32_t> degrees) {
    if (degrees.size() != s) fail(errc::bad_parameters, "need one degree per label");
    if (s < 1 || t < s) fail(errc::bad_parameters, "gen_G needs t >= s >= 1");
    uint32_t e = 0;
    std::vector<uint32_t> dprime(s);
    for (uint32_t i = 0; i < s; ++i) {
        if (degrees[i] < 2) fail(errc::degree_too_low, "gen_G needs every degree >= 2");
        dprime[i] = degrees[i] - 1;
        e += dprime[i];
    }
    if (e > 20) fail(errc::bad_parameters, "e too large for exhaustive label covers");

    // enumerate the subsets X_i once, in lexicographic rank order
    std::vector<std::vector<uint64_t>> sets(s);  // bitmasks over [e]
    std::vector<uint64_t> offsets(s + 1, 0);
    for (uint32_t i = 0; i < s; ++i) {
        for_each_subset(e, dprime[i], [&](const std::vector<uint32_t>& idx) {
            uint64_t mask = 0;
            for (uint32_t v : idx) mask |= uint64_t(1) << v;
            sets[i].push_back(mask);
        });
        offsets[i + 1] = offsets[i] + uint64_t(t) * sets[i].size();
    }
    uint64_t nvars = offsets[s];
    if (nvars > 60000) fail(errc::bad_parameters, "gen_G variable space too large");

    Polynomial acc(field, uint32_t(nvars));
    const uint64_t full = (e >= 64) ? ~uint64_t(0) : ((uint64_t(1) << e) - 1);

    // ordered tuples (x_1, ..., x_s) whose union is [e]; sizes force a partition
    std::vector<uint32_t> choice(s, 0);
    std::vector<uint64_t> cover(s + 1, 0);
    uint32_t level = 0;
    while (true) {
        if (level == s) {
            if (cover[s] == full) {
                // inner sum over column subsets of [t]
                for_each_subset(t, s, [&](const std::vector<uint32_t>& cols) {
                    add_det(acc, s, [&](uint32_t row, uint32_t c) {
                        return uint32_t(offsets[row] + uint64_t(choice[row]) * t + cols[c]);
                    });
                });
            }
            // backtrack
            --level;
            ++choice[level];
        }
        while (choice[level] >= sets[level].size()) {
            if (level == 0) return acc;
            choice[level] = 0;
            --level;
            ++choice[level];
        }
        if ((cover[level] & sets[level][choice[level]]) != 0) {
            ++choice[level];  // overlap; prune
            continue;
        }
        cover[level + 1] = cover[level] | sets[level][choice[level]];
        ++level;
    }
}

std::vector<std::string> gen_F_names(uint32_t n, uint32_t s) {
    std::vector<std::string> out(size_t(s) * n);
    for (uint32_t t = 0; t < s; ++t)
        for (uint32_t i = 0; i < n; ++i) out[size_t(t) * n + i] = "y" + std::to_string(t + 1) + "_" + std::to_string(i + 1);
    return out;
}

std::vector<std::string> gen_F_block_names(uint32_t n, uint32_t s, uint32_t m) {
    std::vector<std::string> out(size_t(s) * n * m);
    for (uint32_t t = 0; t < s; ++t)
        for (uint32_t b = 0; b < m; ++b)
            for (uint32_t i = 0; i < n; ++i)
                out[(size_t(t) * m + b) * n + i] =
                    "y" + std::to_string(t + 1) + "_b" + std::to_string(b + 1) + "_" + std::to_string(i + 1);
    return out;
}

std::vector<std::string> gen_G_names(uint32_t t, uint32_t s, std::span<const uint32_t> degrees) {
    std::vector<std::string> out;
    uint32_t e = 0;
    for (uint32_t i = 0; i < s; ++i) e += degrees[i] - 1;
    for (uint32_t i = 0; i < s; ++i) {
        std::vector<std::string> set_names;
        for_each_subset(e, degrees[i] - 1, [&](const std::vector<uint32_t>& idx) {
            std::string nm;
            for (uint32_t v : idx) nm += std::to_string(v + 1);
            set_names.push_back(nm);
        });
        for (const auto& nm : set_names)
            for (uint32_t r = 0; r < t; ++r)
                out.push_back("w" + std::to_string(i + 1) + "_{" + nm + "}_" + std::to_string(r + 1));
    }
    return out;
}

PolyFamily build_theorem_m_family(const PolyFamily& inputs,
                                  std::span<const std::vector<uint32_t>> shifts, uint32_t t, uint32_t m) {
    const uint32_t s = inputs.size();
    if (shifts.size() != size_t(t) * m) fail(errc::arity_mismatch, "need exactly t*m shifts");
    uint32_t e = 0;
    for (auto& p : inputs.members()) {
        if (p.degree() < 2) fail(errc::degree_too_low, "inputs must have degree >= 2");
        e += p.degree() - 1;
    }
    for (auto& w : shifts)
        if (w.size() != inputs.nvars()) fail(errc::dimension_mismatch, "shift dimension mismatch");

    // rows of deltas: delta_{w_k} P^j for j in [s], k in [t*m]
    std::vector<std::vector<Polynomial>> rows(s);
    for (uint32_t j = 0; j < s; ++j) {
        rows[j].reserve(shifts.size());
        for (const auto& w : shifts) rows[j].push_back(delta(inputs[j], w));
    }

    std::vector<Polynomial> members(inputs.members().begin(), inputs.members().end());
    Polynomial f_ts = gen_F(inputs.field_ptr(), t, s);
    for (uint32_t i = 1; i <= m; ++i) {
        // inner list for F^t_s: variable y^j_u = delta_{w_{(i-1)t+u}} P^j
        std::vector<Polynomial> inners;
        inners.reserve(size_t(s) * t);
        for (uint32_t j = 0; j < s; ++j)
            for (uint32_t u = 0; u < t; ++u) inners.push_back(rows[j][size_t(i - 1) * t + u]);
        Polynomial composite = compose(f_ts, inners);
        if (composite.degree() > e) fail(errc::internal_overflow, "composite degree exceeds e");
        members.push_back(std::move(composite));
    }
    return PolyFamily::make(std::move(members), /*allow_dependent=*/true);
}

}  // namespace strengthlab
