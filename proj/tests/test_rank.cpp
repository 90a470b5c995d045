#include <doctest.h>

#include "strengthlab/expsum.hpp"
#include "strengthlab/rank.hpp"
#include "strengthlab/rng.hpp"

using namespace strengthlab;

namespace {

Tensor bilinear_tensor(const FieldPtr& f, uint32_t n, const std::vector<std::vector<uint32_t>>& m) {
    Polynomial base(f, 2 * n);
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j)
            if (m[i][j] != 0) {
                Monomial mono;
                mono.vars.emplace_back(uint16_t(i), 1);
                mono.vars.emplace_back(uint16_t(n + j), 1);
                base.add_term(mono, m[i][j]);
            }
    return Tensor::from_polynomial(base, 2, n);
}

Tensor random_bilinear(const FieldPtr& f, uint32_t n, uint64_t seed) {
    std::vector<std::vector<uint32_t>> m(n, std::vector<uint32_t>(n));
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = 0; j < n; ++j) m[i][j] = uint32_t(bounded(ctr_value(seed, i, j), f->q()));
    return bilinear_tensor(f, n, m);
}

}  // namespace

TEST_CASE("verify_certificate examples") {
    auto f2 = field_create(2, 1);
    // T = x1 y2 + x2 y1 over blocks of width 2 (vars x1 x2 | x3 x4)
    Polynomial base = parse_polynomial("x1*x4 + x2*x3", f2, 4u);
    Tensor t = Tensor::from_polynomial(base, 2, 2);

    PartitionCertificate good;
    good.blocks = 2;
    good.summands.push_back(
        CertSummand{{1}, parse_polynomial("x1", f2, 4u), parse_polynomial("x4", f2, 4u)});
    good.summands.push_back(
        CertSummand{{1}, parse_polynomial("x2", f2, 4u), parse_polynomial("x3", f2, 4u)});
    CHECK(verify_certificate(t, good));

    Tensor zero = Tensor::from_polynomial(Polynomial::zero(f2, 4), 2, 2);
    CHECK(verify_certificate(zero, PartitionCertificate{2, {}}));

    Tensor single = Tensor::from_polynomial(parse_polynomial("x1*x3", f2, 4u), 2, 2);
    PartitionCertificate wrong;
    wrong.blocks = 2;
    wrong.summands.push_back(
        CertSummand{{1}, parse_polynomial("x1", f2, 4u), parse_polynomial("x4", f2, 4u)});
    CHECK(!verify_certificate(single, wrong));
}

TEST_CASE("prank_bilinear") {
    auto f2 = field_create(2, 1);
    Tensor diag = Tensor::from_polynomial(parse_polynomial("x1*x3 + x2*x4", f2, 4u), 2, 2);
    PartitionCertificate cert;
    CHECK(prank_bilinear(diag, &cert) == 2);
    CHECK(verify_certificate(diag, cert));
    CHECK(cert.size() == 2);

    Tensor zero = Tensor::from_polynomial(Polynomial::zero(f2, 4), 2, 2);
    CHECK(prank_bilinear(zero) == 0);

    Tensor one = Tensor::from_polynomial(parse_polynomial("x1*x4", f2, 4u), 2, 2);
    CHECK(prank_bilinear(one) == 1);
}

TEST_CASE("prank_lower") {
    auto f2 = field_create(2, 1);
    Tensor zero = Tensor::from_polynomial(Polynomial::zero(f2, 4), 2, 2);
    CHECK(prank_lower(zero) == 0);

    Tensor diag = Tensor::from_polynomial(parse_polynomial("x1*x3 + x2*x4", f2, 4u), 2, 2);
    uint32_t lower = prank_lower(diag);
    CHECK(lower == prank_bilinear(diag));  // 2, since b = 2^-2 exactly

    auto f3 = field_create(3, 1);
    Tensor full = Tensor::from_polynomial(
        parse_polynomial("x1*x4 + x2*x5 + x3*x6", f3, 6u), 2, 3);
    uint32_t l3 = prank_lower(full);
    uint32_t u3 = prank_bilinear(full);
    CHECK(u3 == 3);
    CHECK(l3 <= u3);
}

TEST_CASE("prank_upper_search") {
    auto f2 = field_create(2, 1);

    // d = 2: reproduces matrix rank
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Tensor t = random_bilinear(f2, 3, seed);
        auto cert = prank_upper_search(t, 100000, seed);
        if (t.base.is_zero()) {
            CHECK(cert);
            CHECK(cert->size() == 0);
            continue;
        }
        REQUIRE(cert);
        CHECK(verify_certificate(t, *cert));
        CHECK(cert->size() == prank_bilinear(t));
    }

    // x1 y1 z1: a single split-summand
    Polynomial trip(f2, 3);
    {
        Monomial m;
        m.vars.emplace_back(0, 1);
        m.vars.emplace_back(1, 1);
        m.vars.emplace_back(2, 1);
        trip.add_term(m, 1);
    }
    Tensor t3 = Tensor::from_polynomial(trip, 3, 1);
    auto cert3 = prank_upper_search(t3, 1000, 0);
    REQUIRE(cert3);
    CHECK(cert3->size() == 1);

    // random d=3 corpus: upper >= lower, certificates verify
    for (uint64_t seed = 0; seed < 15; ++seed) {
        for (uint64_t q : {2, 3}) {
            auto f = field_create(q, 1);
            Polynomial p = random_poly(f, 2, 3, 3, seed + 31);
            Tensor t = multilinearize(p);
            if (t.base.is_zero()) continue;
            auto cert = prank_upper_search(t, 20000, seed);
            REQUIRE(cert);
            CHECK(verify_certificate(t, *cert));
            CHECK(prank_lower(t) <= cert->size());
        }
    }
}

TEST_CASE("claim Ga numeric: b(T) > q^-r for verified certificates") {
    auto f2 = field_create(2, 1);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        Polynomial p = random_poly(f2, 2, 3, 4, seed + 77);
        Tensor t = multilinearize(p);
        if (t.base.is_zero()) continue;
        auto cert = prank_upper_search(t, 20000, seed);
        REQUIRE(cert);
        uint64_t numer = *tensor_char_sum(t).as_nonneg_integer();
        uint32_t dv = t.blocks * t.width;
        unsigned __int128 lhs = numer;
        for (uint32_t i = 0; i < cert->size(); ++i) lhs *= 2;
        unsigned __int128 rhs = 1;
        for (uint32_t i = 0; i < dv; ++i) rhs *= 2;
        CHECK(lhs > rhs);
    }
}

TEST_CASE("direct-sum monotonicity via certificate concatenation") {
    auto f3 = field_create(3, 1);
    // two bilinear pieces embedded on disjoint coordinate pairs of width-4 blocks
    Polynomial t1 = parse_polynomial("x1*x5 + x2*x6", f3, 8u);   // uses coords 1..2 of each block
    Polynomial t2 = parse_polynomial("x3*x7 + 2*x4*x8", f3, 8u); // uses coords 3..4
    Tensor sum = Tensor::from_polynomial(t1 + t2, 2, 4);
    auto c1 = prank_upper_search(Tensor::from_polynomial(t1, 2, 4), 10000, 0);
    auto c2 = prank_upper_search(Tensor::from_polynomial(t2, 2, 4), 10000, 0);
    REQUIRE(c1);
    REQUIRE(c2);
    PartitionCertificate cat;
    cat.blocks = 2;
    for (auto& s : c1->summands) cat.summands.push_back(s);
    for (auto& s : c2->summands) cat.summands.push_back(s);
    CHECK(verify_certificate(sum, cat));
    auto cs = prank_upper_search(sum, 10000, 0);
    REQUIRE(cs);
    CHECK(cs->size() <= c1->size() + c2->size());
}

TEST_CASE("ncrank_bounds") {
    auto f5 = field_create(5, 1);
    Polynomial p = parse_polynomial("x1*x2 + x3*x4", f5, 4u);
    RankBounds rb = ncrank_bounds(p);
    CHECK(rb.prank_lower_value == 4);  // polarized form has matrix rank 4 over F_5
    CHECK(rb.c_d == 1);                // char 5 > d = 2
    CHECK(rb.lower == 4);
    REQUIRE(rb.upper);
    CHECK(*rb.upper == 4);

    CHECK_THROWS_AS(ncrank_bounds(parse_polynomial("x1 + x2", f5, 2u)), Error);
}

TEST_CASE("strength_verify") {
    auto f5 = field_create(5, 1);
    Polynomial p = parse_polynomial("x1*x2", f5, 2u);
    std::vector<std::pair<Polynomial, Polynomial>> s1{
        {parse_polynomial("x1", f5, 2u), parse_polynomial("x2", f5, 2u)}};
    CHECK(strength_verify(p, s1));

    Polynomial p2 = parse_polynomial("x1*x2 + x3*x4", f5, 4u);
    std::vector<std::pair<Polynomial, Polynomial>> s2{
        {parse_polynomial("x1", f5, 4u), parse_polynomial("x2", f5, 4u)},
        {parse_polynomial("x3", f5, 4u), parse_polynomial("x4", f5, 4u)}};
    CHECK(strength_verify(p2, s2));

    Polynomial sq = parse_polynomial("x1^2", f5, 1u);
    std::vector<std::pair<Polynomial, Polynomial>> bad{
        {parse_polynomial("x1^2", f5, 1u), parse_polynomial("1", f5, 1u)}};
    CHECK(!strength_verify(sq, bad));
}

TEST_CASE("low-characteristic witness stays bounded (remark-level)") {
    // degree-4 symmetric polynomial over F_2 has bounded analytic rank as n grows
    auto f2 = field_create(2, 1);
    for (uint32_t n : {5u, 6u}) {
        Polynomial p(f2, n);
        std::vector<uint32_t> idx = {0, 1, 2, 3};
        for (;;) {
            Monomial m;
            for (uint32_t v : idx) m.vars.emplace_back(uint16_t(v), 1);
            p.add_term(m, 1);
            uint32_t i = 4;
            bool adv = false;
            while (i-- > 0) {
                if (idx[i] + (4 - i) < n) {
                    ++idx[i];
                    for (uint32_t j = i + 1; j < 4; ++j) idx[j] = idx[j - 1] + 1;
                    adv = true;
                    break;
                }
                if (i == 0) break;
            }
            if (!adv) break;
        }
        ExecConfig cfg;
        cfg.threads = 4;
        ArankResult ar = analytic_rank(p, BiasMode::exact, {}, cfg);
        CHECK(!ar.infinite);
        CHECK(ar.value <= 4.0);
    }
}
