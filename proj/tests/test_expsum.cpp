#include <doctest.h>

#include <array>

#include "strengthlab/expsum.hpp"
#include "strengthlab/family.hpp"

using namespace strengthlab;

TEST_CASE("char_sum_exact examples") {
    auto f2 = field_create(2, 1);
    Polynomial zero = Polynomial::zero(f2, 3);
    CyclotomicSum s0 = char_sum_exact(zero);
    CHECK(s0.counts() == std::vector<uint64_t>{8, 0});

    auto f3 = field_create(3, 1);
    Polynomial lin = parse_polynomial("x1", f3, 2u);
    CyclotomicSum s1 = char_sum_exact(lin);
    CHECK(s1.counts() == std::vector<uint64_t>{3, 3, 3});

    Polynomial prod = parse_polynomial("x1*x2", f2, 2u);
    CyclotomicSum s2 = char_sum_exact(prod);
    CHECK(s2.counts() == std::vector<uint64_t>{3, 1});
}

TEST_CASE("bias examples") {
    auto f2 = field_create(2, 1);
    Polynomial prod = parse_polynomial("x1*x2", f2, 2u);
    BiasReport r = bias(prod, BiasMode::exact);
    CHECK(r.magnitude == doctest::Approx(0.5));

    auto f5 = field_create(5, 1);
    BiasReport c = bias(parse_polynomial("3", f5, 1u), BiasMode::exact);
    CHECK(c.magnitude == doctest::Approx(1.0));

    // mc estimate lands within the radius of the exact value
    McParams mc{100000, 0.01, 12345};
    BiasReport m = bias(prod, BiasMode::monte_carlo, mc);
    CHECK(std::abs(m.value.real() - 0.5) <= m.ci_radius);
    CHECK(std::abs(m.value.imag() - 0.0) <= m.ci_radius);
    CHECK_THROWS_AS(bias(prod, BiasMode::monte_carlo, McParams{0, 0.01, 1}), Error);
}

TEST_CASE("extension-field character sums") {
    // over F_4, a nonzero linear form is equidistributed across trace classes
    auto f4 = field_create(2, 2);
    Polynomial lin = parse_polynomial("t*x1 + x2", f4, 2u);
    CyclotomicSum s = char_sum_exact(lin);
    CHECK(s.counts() == std::vector<uint64_t>{8, 8});
    BiasReport r = bias(lin, BiasMode::exact);
    CHECK(r.magnitude == doctest::Approx(0.0));
}

TEST_CASE("parallel determinism") {
    auto f3 = field_create(3, 1);
    Polynomial p = random_poly(f3, 4, 3, 5, 9);
    ExecConfig one{1}, two{2}, eight{8};
    CyclotomicSum a = char_sum_exact(p, one);
    CyclotomicSum b = char_sum_exact(p, two);
    CyclotomicSum c = char_sum_exact(p, eight);
    CHECK(a.counts() == b.counts());
    CHECK(a.counts() == c.counts());
}

TEST_CASE("budget refusal") {
    auto f2 = field_create(2, 1);
    Polynomial p = random_poly(f2, 8, 2, 3, 1);
    ExecConfig tiny;
    tiny.budget = 100;
    try {
        char_sum_exact(p, tiny);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::budget_exceeded);
    }
}

TEST_CASE("analytic rank examples") {
    auto f2 = field_create(2, 1);
    // homogeneous linear: bias of the form is 0, rank infinite
    ArankResult lin = analytic_rank(parse_polynomial("x1 + x2", f2, 2u), BiasMode::exact);
    CHECK(lin.infinite);

    // x1 x2: b(P~) = 1/4 over 16 points, ar = 2
    ArankResult pr = analytic_rank(parse_polynomial("x1*x2", f2, 2u), BiasMode::exact);
    CHECK(!pr.infinite);
    CHECK(pr.value == doctest::Approx(2.0));

    // adding a linear form does not change the multilinear part
    ArankResult shifted = analytic_rank(parse_polynomial("x1*x2 + x1 + 1", f2, 2u), BiasMode::exact);
    CHECK(shifted.tensor_bias_numerator == pr.tensor_bias_numerator);

    CHECK_THROWS_AS(analytic_rank(parse_polynomial("1", f2, 1u), BiasMode::exact), Error);
}

TEST_CASE("tensor_char_sum equals plain enumeration") {
    for (uint64_t q : {2, 3}) {
        auto f = field_create(q, 1);
        for (uint64_t seed = 0; seed < 10; ++seed) {
            Polynomial p = random_poly(f, 2, 2 + seed % 2, 3, seed);
            Tensor t = multilinearize(p);
            CyclotomicSum fast = tensor_char_sum(t);
            CyclotomicSum slow = char_sum_exact(t.base);
            CHECK(fast.counts() == slow.counts());
        }
    }
    // extension field case
    auto f4 = field_create(2, 2);
    Polynomial p = random_poly(f4, 2, 2, 3, 3);
    Tensor t = multilinearize(p);
    CHECK(tensor_char_sum(t).counts() == char_sum_exact(t.base).counts());
}

TEST_CASE("gowers norm examples") {
    auto f2 = field_create(2, 1);
    Polynomial c = parse_polynomial("1", f2, 2u);
    GowersResult gc = gowers_norm(c, 2, GowersPath::definition);
    CHECK(gc.norm == doctest::Approx(1.0));

    // d = 1 is the bias magnitude
    Polynomial p = parse_polynomial("x1*x2", f2, 2u);
    GowersResult g1 = gowers_norm(p, 1, GowersPath::definition);
    CHECK(g1.norm == doctest::Approx(0.5));

    // d = 2 on x1 x2: both paths agree and the norm is b(P~)^{1/4}
    GowersResult gd = gowers_norm(p, 2, GowersPath::definition);
    GowersResult gt = gowers_norm(p, 2, GowersPath::tensor);
    CHECK(gd.norm == doctest::Approx(gt.norm));
    CHECK(gt.norm == doctest::Approx(std::pow(0.25, 0.25)));
    // exact histogram identity after scaling by q^n
    CHECK(gd.sum.counts() == gt.sum.scaled(4).counts());
}

TEST_CASE("gowers identity across the small matrix (claim-level)") {
    struct Cell {
        uint64_t q;
        uint32_t n, d;
    };
    std::vector<Cell> cells = {{2, 2, 2}, {2, 2, 3}, {2, 2, 4}, {2, 3, 3},
                               {3, 2, 2}, {3, 2, 3}, {3, 3, 2}, {5, 1, 4}, {5, 2, 3}};
    for (auto cell : cells) {
        auto f = field_create(cell.q, 1);
        for (uint64_t seed = 0; seed < 3; ++seed) {
            Polynomial p = random_poly(f, cell.n, cell.d, 3, seed + 11);
            GowersResult def = gowers_norm(p, cell.d, GowersPath::definition);
            GowersResult ten = gowers_norm(p, cell.d, GowersPath::tensor);
            uint64_t qn = 1;
            for (uint32_t i = 0; i < cell.n; ++i) qn *= cell.q;
            CHECK(def.sum.counts() == ten.sum.scaled(qn).counts());
        }
    }
}

TEST_CASE("joint distribution examples") {
    auto f3 = field_create(3, 1);
    std::vector<Polynomial> fam1{parse_polynomial("x1", f3, 2u)};
    FiberDistribution d1 = joint_distribution(fam1);
    CHECK(d1.fibers == std::vector<uint64_t>{3, 3, 3});

    std::vector<Polynomial> fam2{parse_polynomial("x1", f3, 2u), parse_polynomial("x1", f3, 2u)};
    FiberDistribution d2 = joint_distribution(fam2);
    for (uint64_t a = 0; a < 3; ++a)
        for (uint64_t b = 0; b < 3; ++b) CHECK(d2.fibers[a + 3 * b] == (a == b ? 3 : 0));

    auto f2 = field_create(2, 1);
    std::vector<Polynomial> fam3{parse_polynomial("x1", f2, 3u), parse_polynomial("x2*x3", f2, 3u)};
    FiberDistribution d3 = joint_distribution(fam3);
    CHECK(d3.fibers[0] == 3);  // (0,0)
    CHECK(d3.fibers[1] == 3);  // (1,0)
    CHECK(d3.fibers[2] == 1);  // (0,1)
    CHECK(d3.fibers[3] == 1);  // (1,1)
}

TEST_CASE("remark 11 invariants on a corpus") {
    for (uint64_t q : {2, 3}) {
        auto f = field_create(q, 1);
        for (uint64_t seed = 0; seed < 12; ++seed) {
            uint32_t d = 2 + seed % 2;
            Polynomial p = random_poly(f, 2, d, 3, seed + 21);
            Tensor t = multilinearize(p);

            // (1) nonnegative real tensor bias: exact integer form of the sum
            CyclotomicSum ts = char_sum_exact(t.base);
            CHECK(ts.as_nonneg_integer().has_value());

            // (3) |b(P)|^{2^d} <= b(P~) as exact integers
            CyclotomicSum ps = char_sum_exact(p);
            CycInt lhs = CycInt::from_sum(ps).norm_squared().pow(1u << (d - 1));
            uint64_t scale = 1;
            for (uint32_t i = 0; i < 2 * ((1u << d) - d); ++i) scale *= q;
            CycInt rhs = CycInt::from_integer(uint32_t(q), (long long)*ts.as_nonneg_integer()) *
                         CycInt::from_integer(uint32_t(q), (long long)scale);
            CHECK((rhs - lhs).sign_real() >= 0);
        }
    }
}

TEST_CASE("monte carlo soundness over seeded runs") {
    auto f2 = field_create(2, 1);
    Polynomial p = parse_polynomial("x1*x2 + x3", f2, 3u);
    BiasReport exact = bias(p, BiasMode::exact);
    int covered = 0;
    const int runs = 200;
    for (int r = 0; r < runs; ++r) {
        McParams mc{4000, 0.01, uint64_t(r)};
        BiasReport est = bias(p, BiasMode::monte_carlo, mc);
        bool inside = std::abs(est.value.real() - exact.value.real()) <= est.ci_radius &&
                      std::abs(est.value.imag() - exact.value.imag()) <= est.ci_radius;
        if (inside) ++covered;
    }
    CHECK(covered >= int(runs * 0.97));
}

TEST_CASE("monte carlo determinism across thread counts") {
    auto f3 = field_create(3, 1);
    Polynomial p = random_poly(f3, 3, 2, 4, 2);
    McParams mc{50000, 0.01, 7};
    ExecConfig one{1}, eight{8};
    BiasReport a = bias(p, BiasMode::monte_carlo, mc, one);
    BiasReport b = bias(p, BiasMode::monte_carlo, mc, eight);
    CHECK(a.value.real() == b.value.real());
    CHECK(a.value.imag() == b.value.imag());
}

TEST_CASE("analytic rank monte carlo interval") {
    auto f2 = field_create(2, 1);
    Polynomial p = parse_polynomial("x1*x2", f2, 2u);
    ArankResult exact = analytic_rank(p, BiasMode::exact);
    int covered = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        ArankResult mc = analytic_rank(p, BiasMode::monte_carlo, McParams{20000, 0.01, seed});
        CHECK(mc.lo <= mc.hi);
        if (mc.lo <= exact.value && exact.value <= mc.hi) ++covered;
    }
    CHECK(covered >= 19);  // delta = 0.01 two-sided
}
