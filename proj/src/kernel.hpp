#pragma once

// Internal exhaustive-enumeration engine. Points of F_q^n are visited in
// odometer order (coordinate 0 fastest); a change to one coordinate touches
// only the terms containing it, so each step costs O(touched terms). Work is
// partitioned into shards by the top coordinates; shard results merge by
// addition, which makes every output independent of the thread count.

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "strengthlab/exec.hpp"
#include "strengthlab/poly.hpp"

namespace strengthlab::detail {

struct CompiledTerm {
    uint32_t coeff;
    uint32_t first_slot;
    uint32_t nslots;
};

struct CompiledSlot {
    uint32_t var;
    uint32_t exp;
};

struct Touch {
    uint32_t poly;
    uint32_t term;
    uint32_t slot;
};

struct CompiledSet {
    const Field* field = nullptr;
    uint32_t nvars = 0;
    uint32_t npolys = 0;
    uint32_t max_exp = 1;
    std::vector<CompiledTerm> terms;        // all polys, concatenated
    std::vector<uint32_t> poly_term_begin;  // npolys + 1 offsets
    std::vector<CompiledSlot> slots;
    std::vector<std::vector<Touch>> touch;  // per variable
    std::vector<uint32_t> pow_tab;          // q * (max_exp + 1), or empty

    uint32_t pow_of(uint32_t val, uint32_t e) const {
        if (!pow_tab.empty()) return pow_tab[size_t(val) * (max_exp + 1) + e];
        return field->pow(val, e);
    }
};

inline CompiledSet compile_polys(std::span<const Polynomial> polys) {
    CompiledSet cs;
    cs.field = &polys[0].field();
    cs.nvars = polys[0].nvars();
    cs.npolys = uint32_t(polys.size());
    cs.touch.resize(cs.nvars);
    cs.poly_term_begin.push_back(0);
    for (uint32_t pi = 0; pi < cs.npolys; ++pi) {
        const Polynomial& p = polys[pi];
        for (auto& [m, c] : p.terms()) {
            CompiledTerm t{c, uint32_t(cs.slots.size()), uint32_t(m.vars.size())};
            uint32_t ti = uint32_t(cs.terms.size());
            for (auto& [v, e] : m.vars) {
                cs.touch[v].push_back(Touch{pi, ti, uint32_t(cs.slots.size() - t.first_slot)});
                cs.slots.push_back(CompiledSlot{v, e});
                cs.max_exp = std::max(cs.max_exp, uint32_t(e));
            }
            cs.terms.push_back(t);
        }
        cs.poly_term_begin.push_back(uint32_t(cs.terms.size()));
    }
    const Field& f = *cs.field;
    if (f.q() <= (uint64_t(1) << 16)) {
        cs.pow_tab.resize(size_t(f.q()) * (cs.max_exp + 1));
        for (uint64_t v = 0; v < f.q(); ++v)
            for (uint32_t e = 0; e <= cs.max_exp; ++e)
                cs.pow_tab[size_t(v) * (cs.max_exp + 1) + e] = f.pow(uint32_t(v), e);
    }
    return cs;
}

// Per-shard incremental evaluation state.
class EvalState {
  public:
    EvalState(const CompiledSet& cs) : cs_(cs), point_(cs.nvars, 0) {
        factor_.resize(cs.slots.size());
        zero_cnt_.resize(cs.terms.size());
        prod_.resize(cs.terms.size());
        value_.resize(cs.terms.size());
        sums_.resize(cs.npolys);
    }

    // Initializes for the point with the given digits.
    void reset(std::span<const uint32_t> point) {
        const Field& f = *cs_.field;
        std::copy(point.begin(), point.end(), point_.begin());
        std::fill(sums_.begin(), sums_.end(), 0u);
        for (uint32_t pi = 0; pi < cs_.npolys; ++pi) {
            for (uint32_t ti = cs_.poly_term_begin[pi]; ti < cs_.poly_term_begin[pi + 1]; ++ti) {
                const CompiledTerm& t = cs_.terms[ti];
                uint32_t zc = 0, prod = t.coeff;
                for (uint32_t k = 0; k < t.nslots; ++k) {
                    const CompiledSlot& sl = cs_.slots[t.first_slot + k];
                    uint32_t fac = cs_.pow_of(point_[sl.var], sl.exp);
                    factor_[t.first_slot + k] = fac;
                    if (fac == 0)
                        ++zc;
                    else
                        prod = f.mul(prod, fac);
                }
                zero_cnt_[ti] = zc;
                prod_[ti] = prod;
                value_[ti] = zc ? 0 : prod;
                sums_[pi] = f.add(sums_[pi], value_[ti]);
            }
        }
    }

    // Coordinate `var` changes to `neu`.
    void set_coord(uint32_t var, uint32_t neu) {
        const Field& f = *cs_.field;
        point_[var] = neu;
        for (const Touch& tc : cs_.touch[var]) {
            const CompiledTerm& t = cs_.terms[tc.term];
            uint32_t si = t.first_slot + tc.slot;
            uint32_t old_fac = factor_[si];
            uint32_t new_fac = cs_.pow_of(neu, cs_.slots[si].exp);
            if (old_fac == new_fac) continue;
            factor_[si] = new_fac;
            uint32_t prod = prod_[tc.term];
            uint32_t zc = zero_cnt_[tc.term];
            if (old_fac == 0)
                --zc;
            else
                prod = f.mul(prod, f.inv(old_fac));
            if (new_fac == 0)
                ++zc;
            else
                prod = f.mul(prod, new_fac);
            prod_[tc.term] = prod;
            zero_cnt_[tc.term] = zc;
            uint32_t val = zc ? 0 : prod;
            uint32_t old_val = value_[tc.term];
            if (val != old_val) {
                value_[tc.term] = val;
                sums_[tc.poly] = f.add(sums_[tc.poly], f.sub(val, old_val));
            }
        }
    }

    const uint32_t* sums() const { return sums_.data(); }
    const uint32_t* point() const { return point_.data(); }

  private:
    const CompiledSet& cs_;
    std::vector<uint32_t> point_;
    std::vector<uint32_t> factor_;
    std::vector<uint32_t> zero_cnt_;
    std::vector<uint32_t> prod_;
    std::vector<uint32_t> value_;
    std::vector<uint32_t> sums_;
};

// Enumerates all q^nvars points. Acc needs: Acc(const Acc&) copyable seed,
// point(const uint32_t* sums, const uint32_t* point), merge(Acc&&).
template <class Acc>
Acc enumerate_domain(std::span<const Polynomial> polys, const ExecConfig& cfg, Acc seed) {
    const Field& f = polys[0].field();
    const uint32_t n = polys[0].nvars();
    const uint64_t q = f.q();
    domain_size_checked(q, n, cfg);

    CompiledSet cs = compile_polys(polys);

    // shard by the top coordinates until there is enough parallel slack
    uint32_t shard_vars = 0;
    uint64_t nshards = 1;
    if (cfg.threads > 1) {
        while (shard_vars < n && nshards < uint64_t(cfg.threads) * 4) {
            nshards *= q;
            ++shard_vars;
        }
    }
    const uint32_t low_n = n - shard_vars;
    uint64_t low_count = 1;
    for (uint32_t i = 0; i < low_n; ++i) low_count *= q;

    auto run_shard = [&](uint64_t shard, Acc& acc) {
        EvalState st(cs);
        std::vector<uint32_t> start(n, 0);
        uint64_t sh = shard;
        for (uint32_t i = 0; i < shard_vars; ++i) {
            start[low_n + i] = uint32_t(sh % q);
            sh /= q;
        }
        st.reset(start);
        std::vector<uint32_t> digit(low_n, 0);
        for (uint64_t idx = 0;;) {
            acc.point(st.sums(), st.point());
            if (++idx == low_count) break;
            uint32_t i = 0;
            while (digit[i] + 1 == q) {
                digit[i] = 0;
                st.set_coord(i, 0);
                ++i;
            }
            ++digit[i];
            st.set_coord(i, digit[i]);
        }
    };

    int threads = std::min<uint64_t>(uint64_t(std::max(cfg.threads, 1)), nshards);
    if (threads <= 1) {
        Acc acc = seed;
        for (uint64_t sdx = 0; sdx < nshards; ++sdx) run_shard(sdx, acc);
        return acc;
    }
    std::vector<Acc> partial(size_t(threads), seed);
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(size_t(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (;;) {
                uint64_t sdx = next.fetch_add(1);
                if (sdx >= nshards) break;
                run_shard(sdx, partial[size_t(t)]);
            }
        });
    }
    for (auto& th : pool) th.join();
    Acc acc = std::move(partial[0]);
    for (size_t t = 1; t < partial.size(); ++t) acc.merge(std::move(partial[t]));
    return acc;
}

// ---- accumulators ----

struct TraceHistAcc {
    const Field* field;
    std::vector<uint64_t> counts;

    explicit TraceHistAcc(const Field& f) : field(&f), counts(f.p(), 0) {}
    void point(const uint32_t* sums, const uint32_t*) { ++counts[field->trace(sums[0])]; }
    void merge(TraceHistAcc&& o) {
        for (size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }
};

struct ValueHistAcc {
    std::vector<uint64_t> counts;

    explicit ValueHistAcc(const Field& f) : counts(f.q(), 0) {}
    void point(const uint32_t* sums, const uint32_t*) { ++counts[sums[0]]; }
    void merge(ValueHistAcc&& o) {
        for (size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }
};

struct JointHistAcc {
    uint64_t q;
    uint32_t c;
    std::vector<uint64_t> fibers;

    JointHistAcc(const Field& f, uint32_t c_, uint64_t qc) : q(f.q()), c(c_), fibers(qc, 0) {}
    void point(const uint32_t* sums, const uint32_t*) {
        uint64_t rank = 0;
        for (uint32_t i = c; i-- > 0;) rank = rank * q + sums[i];
        ++fibers[rank];
    }
    void merge(JointHistAcc&& o) {
        for (size_t i = 0; i < fibers.size(); ++i) fibers[i] += o.fibers[i];
    }
};

struct AllZeroCountAcc {
    uint32_t c;
    uint64_t zeros = 0;

    explicit AllZeroCountAcc(uint32_t c_) : c(c_) {}
    void point(const uint32_t* sums, const uint32_t*) {
        for (uint32_t i = 0; i < c; ++i)
            if (sums[i] != 0) return;
        ++zeros;
    }
    void merge(AllZeroCountAcc&& o) { zeros += o.zeros; }
};

// Counts common zeros and, among them, points passing a caller predicate
// (used for the singular locus; the predicate sees the full point).
template <class Pred>
struct FilteredZeroAcc {
    uint32_t c;
    const Pred* pred;
    uint64_t zeros = 0;
    uint64_t matched = 0;

    FilteredZeroAcc(uint32_t c_, const Pred& p) : c(c_), pred(&p) {}
    void point(const uint32_t* sums, const uint32_t* pt) {
        for (uint32_t i = 0; i < c; ++i)
            if (sums[i] != 0) return;
        ++zeros;
        if ((*pred)(pt)) ++matched;
    }
    void merge(FilteredZeroAcc&& o) {
        zeros += o.zeros;
        matched += o.matched;
    }
};

// Writes the trace exponent of the single polynomial into a shared table
// indexed by point rank (shards touch disjoint ranges).
struct ExpTableAcc {
    const Field* field;
    uint32_t* table;
    uint64_t q;
    uint32_t n;

    ExpTableAcc(const Field& f, uint32_t* t, uint32_t nvars) : field(&f), table(t), q(f.q()), n(nvars) {}
    void point(const uint32_t* sums, const uint32_t* pt) {
        uint64_t rank = 0;
        for (uint32_t i = n; i-- > 0;) rank = rank * q + pt[i];
        table[rank] = field->trace(sums[0]);
    }
    void merge(ExpTableAcc&&) {}
};

}  // namespace strengthlab::detail
