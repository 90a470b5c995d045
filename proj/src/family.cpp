#include "strengthlab/family.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "strengthlab/rng.hpp"

namespace strengthlab {

namespace {

// Row-echelon elimination on coefficient vectors; keeps the reduced rows as
// polynomials. Returns the independent rows (in reduction order).
std::vector<Polynomial> echelon(std::span<const Polynomial> rows) {
    std::vector<Polynomial> basis;
    for (const auto& rowIn : rows) {
        Polynomial row = rowIn;
        for (const auto& b : basis) {
            if (row.is_zero()) break;
            // leading monomial = graded-lex largest
            const auto& lead_b = b.terms().rbegin()->first;
            auto it = row.terms().find(lead_b);
            if (it == row.terms().end()) continue;
            const Field& f = row.field();
            uint32_t factor = f.mul(it->second, f.inv(b.terms().rbegin()->second));
            row = row - b.scaled(factor);
        }
        if (!row.is_zero()) {
            // insertion keeping distinct leading monomials; re-reduce earlier rows
            basis.push_back(std::move(row));
            std::sort(basis.begin(), basis.end(), [](const Polynomial& a, const Polynomial& b) {
                return b.terms().rbegin()->first < a.terms().rbegin()->first;
            });
        }
    }
    return basis;
}

}  // namespace

bool linearly_independent(std::span<const Polynomial> members) {
    return echelon(members).size() == members.size();
}

PolyFamily PolyFamily::make(std::vector<Polynomial> members, bool allow_dependent) {
    if (members.empty()) fail(errc::bad_parameters, "empty family");
    for (auto& m : members)
        if (!m.field().same(members[0].field()) || m.nvars() != members[0].nvars())
            fail(errc::field_mismatch, "family members over different spaces");
    if (!allow_dependent && !linearly_independent(members))
        fail(errc::bad_parameters, "family members are linearly dependent (pass allow_dependent)");
    return PolyFamily(std::move(members));
}

std::vector<uint32_t> PolyFamily::degrees() const {
    std::vector<uint32_t> out;
    out.reserve(members_.size());
    for (auto& m : members_) out.push_back(m.degree());
    return out;
}

void for_each_span_representative(
    const PolyFamily& fam,
    const std::function<void(const Polynomial&, const std::vector<uint32_t>&)>& fn) {
    const Field& f = fam.field();
    const uint32_t c = fam.size();
    auto qc = checked_pow(f.q(), c);
    if (!qc || *qc > (uint64_t(1) << 20)) fail(errc::budget_exceeded, "q^c exceeds 2^20");
    std::vector<uint32_t> l(c, 0);
    for (uint64_t rank = 1; rank < *qc; ++rank) {
        uint64_t rest = rank;
        for (uint32_t i = 0; i < c; ++i) {
            l[i] = uint32_t(rest % f.q());
            rest /= f.q();
        }
        uint32_t first = 0;
        while (l[first] == 0) ++first;
        if (l[first] != 1) continue;  // projective normalization
        Polynomial combo(fam.field_ptr(), fam.nvars());
        for (uint32_t i = 0; i < c; ++i)
            if (l[i] != 0) combo = combo + fam[i].scaled(l[i]);
        fn(combo, l);
    }
}

std::vector<Polynomial> span_representatives(const PolyFamily& fam) {
    std::vector<Polynomial> out;
    for_each_span_representative(fam, [&](const Polynomial& p, const std::vector<uint32_t>&) {
        out.push_back(p);
    });
    return out;
}

MinArankResult family_min_arank(const PolyFamily& fam, BiasMode mode, const McParams& mc,
                                const ExecConfig& cfg) {
    const Field& f = fam.field();
    struct Rep {
        std::vector<uint32_t> l;
        Polynomial combo;
        uint32_t degree;
        size_t order;
    };
    std::vector<Rep> reps;
    for_each_span_representative(fam, [&](const Polynomial& p, const std::vector<uint32_t>& l) {
        reps.push_back(Rep{l, p, p.degree(), reps.size()});
    });

    MinArankResult best;
    bool have = false;
    auto offer = [&](bool infinite, double value, const Rep& r) {
        if (have) {
            bool better = !infinite && (best.infinite || value < best.value);
            if (!better) return;
        }
        have = true;
        best.infinite = infinite;
        best.value = infinite ? 0.0 : value;
        best.argmin_coeffs = r.l;
        best.argmin = r.combo;
    };

    if (mode == BiasMode::monte_carlo) {
        best.mode = BiasMode::monte_carlo;
        for (const auto& r : reps) {
            if (r.degree == 0) {
                offer(false, 0.0, r);
                continue;
            }
            McParams local = mc;
            local.seed = mix64(mc.seed ^ (r.order + 1));
            ArankResult ar = analytic_rank(r.combo, BiasMode::monte_carlo, local, cfg);
            offer(false, ar.value, r);
        }
        return best;
    }

    // exact: group representatives by combo degree and run one joint
    // enumeration of the member difference forms per degree class
    std::map<uint32_t, std::vector<size_t>> by_degree;
    for (size_t i = 0; i < reps.size(); ++i) by_degree[reps[i].degree].push_back(i);

    for (auto& [deg, idxs] : by_degree) {
        if (deg == 0) {
            // nonzero constant combo: bias magnitude 1, analytic rank 0
            for (size_t i : idxs) offer(false, 0.0, reps[i]);
            continue;
        }
        std::vector<Polynomial> forms;
        forms.reserve(fam.size());
        for (uint32_t i = 0; i < fam.size(); ++i) forms.push_back(difference_form(fam[i], deg));
        const uint32_t dv = deg * fam.nvars();
        domain_size_checked(f.q(), dv, cfg);
        FiberDistribution dist = joint_distribution(forms, cfg);
        for (size_t i : idxs) {
            const Rep& r = reps[i];
            CyclotomicSum sum = fiber_fourier_exact(dist, r.l);
            auto numer = sum.as_nonneg_integer();
            if (!numer) fail(errc::internal_overflow, "combo tensor bias not a nonnegative integer");
            if (*numer == 0) {
                offer(true, 0.0, r);
            } else {
                double value = double(dv) - std::log(double(*numer)) / std::log(double(f.q()));
                offer(false, value, r);
            }
        }
    }
    return best;
}

std::map<uint32_t, std::vector<Polynomial>, std::greater<uint32_t>> graded_basis(const PolyFamily& fam) {
    auto rows = echelon(fam.members());
    std::map<uint32_t, std::vector<Polynomial>, std::greater<uint32_t>> out;
    for (auto& r : rows) {
        if (r.degree() == 0) fail(errc::constant_in_span, "span contains a nonzero constant");
        out[r.degree()].push_back(r);
    }
    return out;
}

std::vector<std::complex<double>> fiber_fourier(const FiberDistribution& dist) {
    const Field& f = *dist.field;
    const uint64_t qc = dist.fibers.size();
    std::vector<std::complex<double>> out(qc);
    std::vector<uint32_t> l(dist.c);
    for (uint64_t lr = 0; lr < qc; ++lr) {
        uint64_t rest = lr;
        for (uint32_t i = 0; i < dist.c; ++i) {
            l[i] = uint32_t(rest % f.q());
            rest /= f.q();
        }
        CyclotomicSum s = fiber_fourier_exact(dist, l);
        out[lr] = s.value() / double(dist.total);
    }
    return out;
}

CyclotomicSum fiber_fourier_exact(const FiberDistribution& dist, std::span<const uint32_t> l) {
    const Field& f = *dist.field;
    if (l.size() != dist.c) fail(errc::dimension_mismatch, "l size != family size");
    std::vector<uint64_t> counts(f.p(), 0);
    std::vector<uint32_t> lambda(dist.c);
    for (uint64_t rank = 0; rank < dist.fibers.size(); ++rank) {
        if (dist.fibers[rank] == 0) continue;
        uint64_t rest = rank;
        uint32_t pairing = 0;
        for (uint32_t i = 0; i < dist.c; ++i) {
            lambda[i] = uint32_t(rest % f.q());
            rest /= f.q();
            pairing = f.add(pairing, f.mul(lambda[i], l[i]));
        }
        counts[f.trace(pairing)] += dist.fibers[rank];
    }
    return CyclotomicSum(f.p(), std::move(counts));
}

EquidistReport equidistribution_check(const PolyFamily& fam, const ExecConfig& cfg) {
    FiberDistribution dist = joint_distribution(fam.members(), cfg);
    EquidistReport rep;
    rep.dim_span = fam.size();

    uint64_t cmin = UINT64_MAX, cmax = 0;
    for (uint64_t c : dist.fibers) {
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    if (cmin == 0) {
        rep.has_empty_fiber = true;
        rep.max_deviation = std::numeric_limits<double>::infinity();
        rep.satisfied = false;
    } else {
        rep.max_deviation = double(cmax) / double(cmin) - 1.0;
        // exact: cmax/cmin - 1 <= 1/2  <=>  2 cmax <= 3 cmin
        rep.satisfied = 2 * cmax <= 3 * cmin;
    }

    // hypothesis side from the same pass: max |f_hat(l)| over nonzero l
    const Field& f = fam.field();
    double max_mag = 0.0;
    std::vector<uint32_t> l(fam.size());
    for (uint64_t lr = 1; lr < dist.fibers.size(); ++lr) {
        uint64_t rest = lr;
        for (uint32_t i = 0; i < fam.size(); ++i) {
            l[i] = uint32_t(rest % f.q());
            rest /= f.q();
        }
        CyclotomicSum s = fiber_fourier_exact(dist, l);
        max_mag = std::max(max_mag, std::abs(s.value()) / double(dist.total));
    }
    if (max_mag <= 0.0) {
        rep.hypothesis_rank_infinite = true;
    } else {
        rep.hypothesis_rank = -std::log(max_mag) / std::log(double(f.q()));
    }
    return rep;
}

PolyFamily derivative_span(const Polynomial& p, std::span<const std::vector<uint32_t>> shifts) {
    std::vector<Polynomial> members{p};
    for (const auto& w : shifts) {
        Polynomial d = delta(p, w);
        if (d.is_zero()) continue;
        members.push_back(std::move(d));
        if (!linearly_independent(members)) members.pop_back();
    }
    return PolyFamily::make(std::move(members));
}

ShiftSearchResult search_shifts(const Polynomial& p, uint32_t m, uint32_t trials, uint64_t seed,
                                BiasMode scorer, const McParams& mc, const ExecConfig& cfg) {
    if (m == 0) fail(errc::bad_parameters, "m must be >= 1");
    if (trials == 0) fail(errc::bad_parameters, "trials must be >= 1");
    const Field& f = p.field();
    const uint32_t n = p.nvars();

    struct Scored {
        bool infinite;
        double value;
    };
    auto score_tuple = [&](const std::vector<std::vector<uint32_t>>& tuple, uint64_t trial,
                           const ExecConfig& inner) -> Scored {
        PolyFamily fam = derivative_span(p, tuple);
        McParams local = mc;
        local.seed = mix64(mc.seed ^ mix64(trial + 1));
        MinArankResult r = family_min_arank(fam, scorer, local, inner);
        return Scored{r.infinite, r.value};
    };

    // trial 0 is the zero-shift baseline; trials 1..trials are sampled
    std::vector<std::vector<std::vector<uint32_t>>> tuples(trials + 1);
    tuples[0].assign(m, std::vector<uint32_t>(n, 0));
    for (uint32_t t = 1; t <= trials; ++t) {
        auto& tuple = tuples[t];
        tuple.assign(m, std::vector<uint32_t>(n, 0));
        uint64_t ctr = 0;
        for (uint32_t j = 0; j < m; ++j)
            for (uint32_t i = 0; i < n; ++i)
                tuple[j][i] = uint32_t(bounded(ctr_value(seed, t, ctr++), f.q()));
    }

    std::vector<Scored> scores(tuples.size());
    int threads = int(std::min<uint64_t>(uint64_t(std::max(cfg.threads, 1)), tuples.size()));
    if (threads <= 1 || scorer == BiasMode::exact) {
        // the exact scorer already parallelizes inside the kernels
        for (size_t t = 0; t < tuples.size(); ++t) scores[t] = score_tuple(tuples[t], t, cfg);
    } else {
        // trial-level parallelism; each trial scores single-threaded
        ExecConfig inner = cfg;
        inner.threads = 1;
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= tuples.size()) break;
                    scores[i] = score_tuple(tuples[i], i, inner);
                }
            });
        for (auto& th : pool) th.join();
    }

    size_t best = 0;
    auto better = [](const Scored& a, const Scored& b) {
        if (a.infinite != b.infinite) return a.infinite;  // infinite sorts above all finite
        return a.value > b.value;
    };
    for (size_t t = 1; t < scores.size(); ++t)
        if (better(scores[t], scores[best])) best = t;

    ShiftSearchResult out;
    out.shifts = tuples[best];
    out.score_infinite = scores[best].infinite;
    out.score = scores[best].value;
    out.scorer = scorer == BiasMode::exact ? "exact" : "mc";
    out.trials = trials;
    out.seed = seed;
    return out;
}

Threshold threshold_T(double r, double m, const ThresholdConsts& consts) {
    if (!(consts.a_d > 0) || !(consts.b_d > 0) || !(consts.c_d > 0))
        fail(errc::nonpositive_constant, "A_d, B_d, C_d must be positive");
    double value = (std::pow(r / consts.a_d, 1.0 / consts.b_d) - m) / (2.0 * consts.c_d);
    return Threshold{value, value <= 0.0};
}

}  // namespace strengthlab
