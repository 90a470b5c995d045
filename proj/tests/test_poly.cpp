#include <doctest.h>

#include <array>
#include <functional>

#include "strengthlab/poly.hpp"
#include "strengthlab/rng.hpp"

using namespace strengthlab;

namespace {

// Independent naive evaluator: walks the term map and multiplies powers out by
// repeated multiplication, no shared code with Polynomial::evaluate's pow.
uint32_t reference_eval(const Polynomial& p, std::span<const uint32_t> pt) {
    const Field& f = p.field();
    uint32_t acc = 0;
    for (auto& [m, c] : p.terms()) {
        uint32_t v = c;
        for (auto& [var, e] : m.vars)
            for (uint32_t k = 0; k < e; ++k) v = f.mul(v, pt[var]);
        acc = f.add(acc, v);
    }
    return acc;
}

void for_all_points(const Field& f, uint32_t n, const std::function<void(std::span<const uint32_t>)>& fn) {
    std::vector<uint32_t> pt(n, 0);
    for (;;) {
        fn(pt);
        uint32_t i = 0;
        while (i < n && ++pt[i] == f.q()) pt[i++] = 0;
        if (i == n) return;
    }
}

}  // namespace

TEST_CASE("parse examples") {
    auto f5 = field_create(5, 1);
    Polynomial p = parse_polynomial("x1*x2 + 2*x3^2", f5, 3u);
    CHECK(p.term_count() == 2);
    CHECK(p.degree() == 2);

    Polynomial z = parse_polynomial("x1 - x1", f5, 1u);
    CHECK(z.is_zero());
    CHECK(z.degree() == 0);

    auto f2 = field_create(2, 1);
    Polynomial sq = parse_polynomial("(x1+x2)^2", f2, 2u);
    CHECK(sq == parse_polynomial("x1^2 + x2^2", f2, 2u));
}

TEST_CASE("parse errors") {
    auto f5 = field_create(5, 1);
    auto f9 = field_create(3, 2);
    CHECK_THROWS_AS(parse_polynomial("x1 + ", f5, 2u), Error);
    CHECK_THROWS_AS(parse_polynomial("x9", f5, 3u), Error);
    CHECK_THROWS_AS(parse_polynomial("t + x1", f5, 1u), Error);  // t over a prime field
    CHECK_NOTHROW(parse_polynomial("t*x1 + 1", f9, 1u));
    try {
        parse_polynomial("x1 + @", f5, 2u);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::syntax_error);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
    // infer mode picks up the largest index
    Polynomial p = parse_polynomial("x2*x5", f5);
    CHECK(p.nvars() == 5);
}

TEST_CASE("evaluate examples and full-domain oracle") {
    auto f2 = field_create(2, 1);
    Polynomial p = parse_polynomial("x1*x2", f2, 2u);
    CHECK(p.evaluate(std::array<uint32_t, 2>{1, 1}) == 1);

    auto f5 = field_create(5, 1);
    Polynomial q = parse_polynomial("x1*x2 + 2*x3^2", f5, 3u);
    CHECK(q.evaluate(std::array<uint32_t, 3>{1, 2, 1}) == 4);

    for (uint64_t seed = 0; seed < 6; ++seed) {
        Polynomial r = random_poly(f5, 3, 3, 4, seed);
        for_all_points(*f5, 3, [&](std::span<const uint32_t> pt) {
            CHECK(r.evaluate(pt) == reference_eval(r, pt));
        });
    }
}

TEST_CASE("delta examples") {
    auto f5 = field_create(5, 1);
    Polynomial sq = parse_polynomial("x1^2", f5, 1u);
    Polynomial d = delta(sq, std::array<uint32_t, 1>{1});
    CHECK(d == parse_polynomial("2*x1 + 1", f5, 1u));

    Polynomial lin = parse_polynomial("3*x1 + x2", f5, 2u);
    Polynomial dl = delta(lin, std::array<uint32_t, 2>{2, 1});
    CHECK(dl == parse_polynomial("2", f5, 2u));  // l(h) for homogeneous linear: 3*2+1 = 7 = 2

    Polynomial z = delta(sq, std::array<uint32_t, 1>{0});
    CHECK(z.is_zero());
}

TEST_CASE("delta commutes") {
    auto f3 = field_create(3, 1);
    for (uint64_t seed = 0; seed < 8; ++seed) {
        Polynomial p = random_poly(f3, 2, 3, 3, seed);
        std::vector<uint32_t> h = {uint32_t(1 + seed % 2), uint32_t(seed % 3)};
        std::vector<uint32_t> k = {uint32_t(seed % 3), 2};
        CHECK(delta(delta(p, h), k) == delta(delta(p, k), h));
    }
}

TEST_CASE("multilinearize examples") {
    auto f2 = field_create(2, 1);
    Polynomial p = parse_polynomial("x1*x2", f2, 2u);
    Tensor t = multilinearize(p);
    CHECK(t.blocks == 2);
    CHECK(t.width == 2);
    // blocks (x1,x2) and (x3,x4): h1 k2 + h2 k1
    CHECK(t.base == parse_polynomial("x1*x4 + x2*x3", f2, 4u));
    CHECK(t.is_symmetric());

    // d = 1: the form of a homogeneous linear polynomial is itself
    auto f5 = field_create(5, 1);
    Polynomial lin = parse_polynomial("2*x1 + x2", f5, 2u);
    Tensor tl = multilinearize(lin);
    CHECK(tl.base == lin);

    CHECK_THROWS_AS(multilinearize(parse_polynomial("3", f5, 1u)), Error);
}

TEST_CASE("multilinearize diagonal identity (char > d, homogeneous)") {
    auto f5 = field_create(5, 1);
    for (uint64_t seed = 0; seed < 6; ++seed) {
        // homogeneous quadratic: random bilinear-style terms
        Polynomial p(f5, 2);
        for (int k = 0; k < 3; ++k) {
            Monomial m;
            uint16_t a = uint16_t(bounded(ctr_value(seed, 0, k * 2), 2));
            uint16_t b = uint16_t(bounded(ctr_value(seed, 0, k * 2 + 1), 2));
            if (a == b) {
                m.vars.emplace_back(a, 2);
            } else {
                m.vars.emplace_back(std::min(a, b), 1);
                m.vars.emplace_back(std::max(a, b), 1);
            }
            p.add_term(m, uint32_t(1 + bounded(ctr_value(seed, 1, k), 4)));
        }
        if (p.degree() != 2) continue;
        Tensor t = multilinearize(p);
        // substitute both blocks equal: P~(x, x) = 2 P(x)
        std::vector<Polynomial> inners;
        for (uint32_t b = 0; b < 2; ++b)
            for (uint32_t j = 0; j < 2; ++j) inners.push_back(Polynomial::variable(f5, 2, j));
        Polynomial diag = compose(t.base, inners);
        CHECK(diag == p.scaled(2));
    }
}

TEST_CASE("multilinearize equals iterated delta at 0 on the whole tuple domain") {
    auto f2 = field_create(2, 1);
    auto f3 = field_create(3, 1);
    for (auto f : {f2, f3}) {
        Polynomial p = random_poly(f, 2, 2, 3, 42);
        Tensor t = multilinearize(p);
        const uint32_t n = 2, d = 2;
        for_all_points(*f, n * d, [&](std::span<const uint32_t> hs) {
            std::span<const uint32_t> h1 = hs.subspan(0, n), h2 = hs.subspan(n, n);
            Polynomial d1 = delta(p, h1);
            Polynomial d2 = delta(d1, h2);
            std::vector<uint32_t> zero(n, 0);
            CHECK(t.base.evaluate(hs) == d2.evaluate(zero));
            // base-point independence: evaluate the iterated delta elsewhere too
            std::vector<uint32_t> ones(n, 1);
            CHECK(t.base.evaluate(hs) == d2.evaluate(ones));
        });
    }
}

TEST_CASE("formal jacobian examples") {
    auto f5 = field_create(5, 1);
    Polynomial sq = parse_polynomial("x1^2", f5, 1u);
    CHECK(partial_derivative(sq, 0) == parse_polynomial("2*x1", f5, 1u));

    auto f3 = field_create(3, 1);
    Polynomial cube = parse_polynomial("x1^3", f3, 1u);
    CHECK(partial_derivative(cube, 0).is_zero());  // char-p kills x^p

    Polynomial g = parse_polynomial("x1*x2 + x3*x4", f5, 4u);
    std::vector<Polynomial> fam{g};
    auto jac = formal_jacobian(fam);
    CHECK(jac[0][0] == parse_polynomial("x2", f5, 4u));
    CHECK(jac[0][1] == parse_polynomial("x1", f5, 4u));
    CHECK(jac[0][2] == parse_polynomial("x4", f5, 4u));
    CHECK(jac[0][3] == parse_polynomial("x3", f5, 4u));

    // product rule on random pairs
    Polynomial a = random_poly(f5, 2, 2, 3, 1), b = random_poly(f5, 2, 2, 3, 2);
    for (uint32_t v = 0; v < 2; ++v)
        CHECK(partial_derivative(a * b, v) ==
              partial_derivative(a, v) * b + a * partial_derivative(b, v));
}

TEST_CASE("homogenize") {
    auto f5 = field_create(5, 1);
    Polynomial p = parse_polynomial("x1^2 + x2", f5, 2u);
    Polynomial h = homogenize(p);
    CHECK(h.nvars() == 3);
    CHECK(h == parse_polynomial("x1^2 + x2*x3", f5, 3u));  // fresh variable appended last
    // substituting the fresh variable to 1 recovers P
    CHECK(h.assign(2, 1) == p.with_nvars(3));

    Polynomial already = parse_polynomial("x1*x2", f5, 2u);
    CHECK(homogenize(already) == already.with_nvars(3));

    CHECK(homogenize(parse_polynomial("x1 + 1", f5, 1u)) == parse_polynomial("x1 + x2", f5, 2u));

    for (uint64_t seed = 0; seed < 8; ++seed) {
        Polynomial r = random_poly(f5, 3, 3, 4, seed + 100);
        Polynomial hr = homogenize(r);
        CHECK(hr.degree() == r.degree());
        for (auto& [m, c] : hr.terms()) CHECK(m.total_degree() == r.degree());
        CHECK(hr.assign(3, 1) == r.with_nvars(4));
    }
}

TEST_CASE("compose") {
    auto f5 = field_create(5, 1);
    Polynomial outer = parse_polynomial("x1*x2", f5, 2u);
    std::vector<Polynomial> inners{parse_polynomial("x1", f5, 1u), parse_polynomial("x1", f5, 1u)};
    CHECK(compose(outer, inners) == parse_polynomial("x1^2", f5, 1u));

    Polynomial sum = parse_polynomial("x1 + x2", f5, 2u);
    Polynomial p = random_poly(f5, 2, 2, 3, 3);
    std::vector<Polynomial> pm{p, -p};
    CHECK(compose(sum, pm).is_zero());

    // 2x2 determinant of linear forms, pointwise against nested evaluation
    Polynomial det = parse_polynomial("x1*x4 - x2*x3", f5, 4u);
    std::vector<Polynomial> lins{
        parse_polynomial("x1 + 2*x2", f5, 2u), parse_polynomial("3*x1", f5, 2u),
        parse_polynomial("x2", f5, 2u), parse_polynomial("x1 + x2", f5, 2u)};
    Polynomial comp = compose(det, lins);
    for_all_points(*f5, 2, [&](std::span<const uint32_t> pt) {
        std::array<uint32_t, 4> mid{};
        for (int i = 0; i < 4; ++i) mid[size_t(i)] = lins[size_t(i)].evaluate(pt);
        CHECK(comp.evaluate(pt) == det.evaluate(mid));
    });

    CHECK_THROWS_AS(compose(outer, std::span<const Polynomial>(inners.data(), 1)), Error);
}

TEST_CASE("random_poly determinism and degree") {
    auto f2 = field_create(2, 1);
    Polynomial a = random_poly(f2, 4, 2, 3, 7);
    Polynomial b = random_poly(f2, 4, 2, 3, 7);
    CHECK(a == b);
    for (uint64_t seed = 0; seed < 100; ++seed) {
        Polynomial p = random_poly(f2, 4, 2, 3, seed);
        CHECK(p.degree() == 2);
    }
    Polynomial single = random_poly(f2, 4, 3, 1, 5);
    CHECK(single.term_count() == 1);
    CHECK(single.degree() == 3);
}

TEST_CASE("print/parse round trip") {
    auto f9 = field_create(3, 2);
    auto f5 = field_create(5, 1);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        Polynomial p = random_poly(f9, 3, 2, 4, seed);
        CHECK(parse_polynomial(p.str(), f9, 3u) == p);
        Polynomial q = random_poly(f5, 4, 3, 5, seed);
        CHECK(parse_polynomial(q.str(), f5, 4u) == q);
    }
    // extension coefficients print with parentheses where needed
    Polynomial p = parse_polynomial("(t+1)*x1 + t*x2 + 2", f9, 2u);
    CHECK(parse_polynomial(p.str(), f9, 2u) == p);
}

TEST_CASE("polynomial file parsing") {
    auto f2 = field_create(2, 1);
    auto polys = parse_polynomial_lines("# comment\nx1*x2\n\nx1 + x3\n", f2);
    CHECK(polys.size() == 2);
    CHECK(polys[0].nvars() == 3);  // aligned across lines in infer mode
    CHECK(polys[1].nvars() == 3);
}

TEST_CASE("tensor validation") {
    auto f2 = field_create(2, 1);
    // x1 y2 is multilinear but not symmetric
    Polynomial b = parse_polynomial("x1*x4", f2, 4u);
    Tensor t = Tensor::from_polynomial(b, 2, 2);
    CHECK(!t.is_symmetric());
    // a non-multilinear polynomial is rejected
    CHECK_THROWS_AS(Tensor::from_polynomial(parse_polynomial("x1*x2", f2, 4u), 2, 2), Error);
}
