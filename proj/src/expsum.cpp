#include "strengthlab/expsum.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "kernel.hpp"
#include "strengthlab/rng.hpp"

namespace strengthlab {

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::complex<double> root_of_unity(uint32_t p, uint32_t j) {
    double ang = 2.0 * std::numbers::pi * double(j) / double(p);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

CyclotomicSum char_sum_exact(const Polynomial& p, const ExecConfig& cfg) {
    const Field& f = p.field();
    std::vector<Polynomial> ps{p};
    auto acc = detail::enumerate_domain(ps, cfg, detail::TraceHistAcc(f));
    return CyclotomicSum(f.p(), std::move(acc.counts));
}

std::vector<uint64_t> value_histogram(const Polynomial& p, const ExecConfig& cfg) {
    const Field& f = p.field();
    std::vector<Polynomial> ps{p};
    auto acc = detail::enumerate_domain(ps, cfg, detail::ValueHistAcc(f));
    return std::move(acc.counts);
}

BiasReport bias(const Polynomial& p, BiasMode mode, const McParams& mc, const ExecConfig& cfg) {
    const Field& f = p.field();
    BiasReport rep;
    rep.mode = mode;
    rep.q = f.q();
    rep.n = p.nvars();
    rep.threads = cfg.threads;
    double t0 = now_ms();

    if (mode == BiasMode::exact) {
        CyclotomicSum sum = char_sum_exact(p, cfg);
        double scale = double(sum.total());
        rep.value = sum.value() / scale;
        rep.magnitude = std::abs(rep.value);
        rep.exact = std::move(sum);
    } else {
        if (mc.samples == 0) fail(errc::zero_samples, "monte carlo bias needs samples >= 1");
        if (!(mc.delta > 0.0 && mc.delta < 1.0)) fail(errc::bad_parameters, "delta must lie in (0,1)");
        // counter-based sampling in fixed blocks; the merged histogram is a
        // pure function of (seed, samples)
        constexpr uint64_t kBlock = 1 << 14;
        const uint64_t nblocks = (mc.samples + kBlock - 1) / kBlock;
        std::vector<uint64_t> counts(f.p(), 0);
        std::vector<uint64_t> partial;
        const uint32_t n = p.nvars();
        auto run_block = [&](uint64_t b, std::vector<uint64_t>& local) {
            uint64_t lo = b * kBlock, hi = std::min(mc.samples, lo + kBlock);
            std::vector<uint32_t> pt(n);
            for (uint64_t i = lo; i < hi; ++i) {
                for (uint32_t j = 0; j < n; ++j)
                    pt[j] = uint32_t(bounded(ctr_value(mc.seed, b, (i - lo) * n + j), f.q()));
                ++local[f.trace(p.evaluate(pt))];
            }
        };
        int threads = int(std::min<uint64_t>(uint64_t(std::max(cfg.threads, 1)), nblocks));
        if (threads <= 1) {
            for (uint64_t b = 0; b < nblocks; ++b) run_block(b, counts);
        } else {
            std::vector<std::vector<uint64_t>> locals(size_t(threads), std::vector<uint64_t>(f.p(), 0));
            std::atomic<uint64_t> next{0};
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    for (;;) {
                        uint64_t b = next.fetch_add(1);
                        if (b >= nblocks) break;
                        run_block(b, locals[size_t(t)]);
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& l : locals)
                for (uint32_t j = 0; j < f.p(); ++j) counts[j] += l[j];
        }
        std::complex<double> acc = 0;
        for (uint32_t j = 0; j < f.p(); ++j) acc += double(counts[j]) * root_of_unity(f.p(), j);
        rep.value = acc / double(mc.samples);
        rep.magnitude = std::abs(rep.value);
        // two-sided Hoeffding radius per part, union over re/im; the real and
        // imaginary parts of psi range over [-1, 1], hence the range-2 form
        rep.ci_radius = std::sqrt(2.0 * std::log(4.0 / mc.delta) / double(mc.samples));
        rep.samples = mc.samples;
        rep.seed = mc.seed;
    }
    rep.elapsed_ms = now_ms() - t0;
    return rep;
}

CyclotomicSum tensor_char_sum(const Tensor& t, const ExecConfig& cfg) {
    const Field& f = t.base.field();
    const uint32_t n = t.width, d = t.blocks;
    domain_size_checked(f.q(), uint64_t(d) * n, cfg);

    // Summing psi(T(h_1, rest)) over h_1 gives q^n when the linear slice form
    // T(., rest) vanishes identically and a uniform spread over trace classes
    // otherwise; so only the slice coefficients need enumerating.
    if (t.base.is_zero()) {
        std::vector<uint64_t> counts(f.p(), 0);
        auto dom = checked_pow(f.q(), uint64_t(d) * n);
        counts[0] = *dom;
        return CyclotomicSum(f.p(), std::move(counts));
    }

    const uint32_t rest_vars = (d - 1) * n;
    std::vector<Polynomial> slices(n, Polynomial(t.base.field_ptr(), rest_vars));
    for (auto& [m, c] : t.base.terms()) {
        // one variable per block; block 1 variable selects the slice
        uint32_t v1 = m.vars[0].first;
        Monomial rest;
        for (size_t k = 1; k < m.vars.size(); ++k)
            rest.vars.emplace_back(uint16_t(m.vars[k].first - n), m.vars[k].second);
        slices[v1].add_term(rest, c);
    }

    uint64_t rest_domain = *checked_pow(f.q(), rest_vars);
    uint64_t zero_slices;
    {
        ExecConfig sub = cfg;
        auto acc = detail::enumerate_domain(slices, sub, detail::AllZeroCountAcc(n));
        zero_slices = acc.zeros;
    }

    uint64_t qn = *checked_pow(f.q(), n);
    uint64_t per_class = (qn / f.q()) * (f.q() / f.p());  // q^{n-1} * p^{s-1}
    std::vector<uint64_t> counts(f.p(), (rest_domain - zero_slices) * per_class);
    counts[0] += zero_slices * qn;
    return CyclotomicSum(f.p(), std::move(counts));
}

ArankResult analytic_rank(const Polynomial& p, BiasMode mode, const McParams& mc, const ExecConfig& cfg) {
    if (p.degree() == 0) fail(errc::degree_zero, "analytic rank requires degree >= 1");
    Tensor t = multilinearize(p);
    const Field& f = p.field();
    const uint32_t dv = t.blocks * t.width;
    ArankResult out;
    out.mode = mode;
    out.domain_vars = dv;
    const double logq = std::log(double(f.q()));

    if (mode == BiasMode::exact) {
        CyclotomicSum sum = tensor_char_sum(t, cfg);
        auto numer = sum.as_nonneg_integer();
        if (!numer) fail(errc::internal_overflow, "tensor bias is not a nonnegative integer");
        out.tensor_bias_numerator = *numer;
        if (*numer == 0) {
            out.infinite = true;
        } else {
            out.value = double(dv) - std::log(double(*numer)) / logq;
            out.lo = out.hi = out.value;
        }
    } else {
        BiasReport br = bias(t.base, BiasMode::monte_carlo, mc, cfg);
        double est = std::max(br.value.real(), 0.0);
        double r = br.ci_radius;
        double floor_b = std::pow(double(f.q()), -double(dv));
        double hi_b = std::min(est + r, 1.0);
        double lo_b = std::max(est - r, floor_b);
        out.lo = hi_b >= 1.0 ? 0.0 : -std::log(hi_b) / logq;
        out.hi = -std::log(lo_b) / logq;
        out.value = -std::log(std::max(est, floor_b)) / logq;
    }
    return out;
}

namespace {

// Definition-path U_d sum: enumerate (x, v_1..v_d) over point ranks and fold
// the 2^d signed evaluations of P through a precomputed exponent table.
CyclotomicSum gowers_definition_sum(const Polynomial& p, uint32_t d, const ExecConfig& cfg) {
    const Field& f = p.field();
    const uint32_t n = p.nvars();
    const uint64_t q = f.q();
    domain_size_checked(q, uint64_t(n) * (d + 1), cfg);
    uint64_t qn = *checked_pow(q, n);
    if (qn > (uint64_t(1) << 22)) fail(errc::budget_exceeded, "definition path needs q^n <= 2^22");

    // exponent table over all points
    std::vector<uint32_t> expo(qn, 0);
    {
        std::vector<Polynomial> ps{p};
        detail::ExpTableAcc acc(f, expo.data(), n);
        detail::enumerate_domain(ps, cfg, acc);
    }
    // digit decomposition of every rank, for vector addition
    std::vector<uint32_t> digits(qn * n);
    {
        std::vector<uint32_t> dig(n, 0);
        for (uint64_t r = 0; r < qn; ++r) {
            for (uint32_t i = 0; i < n; ++i) digits[r * n + i] = dig[i];
            for (uint32_t i = 0; i < n; ++i) {
                if (++dig[i] < q) break;
                dig[i] = 0;
            }
        }
    }
    std::vector<uint64_t> powq(n + 1, 1);
    for (uint32_t i = 0; i < n; ++i) powq[i + 1] = powq[i] * q;

    auto point_add = [&](uint64_t a, uint64_t b) {
        uint64_t r = 0;
        const uint32_t* da = &digits[a * n];
        const uint32_t* db = &digits[b * n];
        for (uint32_t i = 0; i < n; ++i) r += uint64_t(f.add(da[i], db[i])) * powq[i];
        return r;
    };

    const uint32_t pchar = f.p();
    const uint32_t nsub = 1u << d;
    std::vector<int> sign_parity(nsub);
    for (uint32_t m = 0; m < nsub; ++m) sign_parity[m] = __builtin_popcount(m) & 1;

    auto run_range = [&](uint64_t vd_lo, uint64_t vd_hi, std::vector<uint64_t>& counts) {
        std::vector<uint64_t> slot(d + 1, 0);  // slot 0 = x, slots 1..d = v_i
        std::vector<uint64_t> sums(nsub);      // sums[mask] = rank of x + sum_{i in mask} v_i
        uint64_t inner_total = 1;
        for (uint32_t i = 0; i < d; ++i) inner_total *= qn;  // (x, v_1..v_{d-1})
        for (uint64_t vd = vd_lo; vd < vd_hi; ++vd) {
            slot.assign(d + 1, 0);
            slot[d] = vd;
            for (uint64_t idx = 0;;) {
                // subset sums over the d directions, base x
                sums[0] = slot[0];
                for (uint32_t m = 1; m < nsub; ++m) {
                    uint32_t low = uint32_t(__builtin_ctz(m));
                    sums[m] = point_add(sums[m & (m - 1)], slot[low + 1]);
                }
                uint64_t e = 0;
                for (uint32_t m = 0; m < nsub; ++m) {
                    uint32_t x = expo[sums[m]];
                    e += sign_parity[m] ? (pchar - x) : x;
                }
                ++counts[e % pchar];
                if (++idx == inner_total) break;
                uint32_t i = 0;
                while (slot[i] + 1 == qn) {
                    slot[i] = 0;
                    ++i;
                }
                ++slot[i];
            }
        }
    };

    std::vector<uint64_t> counts(pchar, 0);
    int threads = int(std::min<uint64_t>(uint64_t(std::max(cfg.threads, 1)), qn));
    if (threads <= 1) {
        run_range(0, qn, counts);
    } else {
        std::vector<std::vector<uint64_t>> locals(size_t(threads), std::vector<uint64_t>(pchar, 0));
        std::atomic<uint64_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (;;) {
                    uint64_t vd = next.fetch_add(1);
                    if (vd >= qn) break;
                    run_range(vd, vd + 1, locals[size_t(t)]);
                }
            });
        for (auto& th : pool) th.join();
        for (auto& l : locals)
            for (uint32_t j = 0; j < pchar; ++j) counts[j] += l[j];
    }
    return CyclotomicSum(pchar, std::move(counts));
}

}  // namespace

GowersResult gowers_norm(const Polynomial& p, uint32_t d, GowersPath path, const ExecConfig& cfg) {
    if (d == 0) fail(errc::bad_parameters, "U_d norm requires d >= 1");
    const Field& f = p.field();
    const uint32_t n = p.nvars();

    if (path == GowersPath::definition) {
        CyclotomicSum sum = gowers_definition_sum(p, d, cfg);
        uint32_t dv = n * (d + 1);
        double norm_pow = sum.value().real() / double(*checked_pow(f.q(), dv));
        GowersResult out{std::pow(std::max(norm_pow, 0.0), 1.0 / double(1u << d)), std::move(sum), dv};
        return out;
    }
    if (p.degree() != d) fail(errc::bad_parameters, "tensor path requires deg(P) = d");
    Tensor t = multilinearize(p);
    CyclotomicSum sum = char_sum_exact(t.base, cfg);
    uint32_t dv = n * d;
    double norm_pow = sum.value().real() / double(*checked_pow(f.q(), dv));
    return GowersResult{std::pow(std::max(norm_pow, 0.0), 1.0 / double(1u << d)), std::move(sum), dv};
}

FiberDistribution joint_distribution(std::span<const Polynomial> family, const ExecConfig& cfg) {
    if (family.empty()) fail(errc::bad_parameters, "empty family");
    const Field& f = family[0].field();
    for (auto& p : family) {
        if (!p.field().same(f) || p.nvars() != family[0].nvars())
            fail(errc::field_mismatch, "family members over different spaces");
    }
    const uint32_t c = uint32_t(family.size());
    auto qc = checked_pow(f.q(), c);
    if (!qc || *qc > (uint64_t(1) << 20)) fail(errc::budget_exceeded, "q^c exceeds 2^20");
    auto acc = detail::enumerate_domain(family, cfg, detail::JointHistAcc(f, c, *qc));
    FiberDistribution out;
    out.field = family[0].field_ptr();
    out.c = c;
    out.n = family[0].nvars();
    out.fibers = std::move(acc.fibers);
    out.total = *checked_pow(f.q(), family[0].nvars());
    return out;
}

uint32_t ceil_neg_log_q(uint64_t numerator, uint32_t domain_vars, uint64_t q) {
    if (numerator == 0) fail(errc::zero_bias, "bias is exactly zero");
    // ceil(D - log_q N) = D - floor(log_q N)
    uint32_t fl = 0;
    unsigned __int128 power = 1;
    while (power * q <= numerator) {
        power *= q;
        ++fl;
    }
    if (fl >= domain_vars) return 0;
    return domain_vars - fl;
}

}  // namespace strengthlab
