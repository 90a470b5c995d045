#include <doctest.h>

#include "strengthlab/gf.hpp"

using namespace strengthlab;

TEST_CASE("field_create basics and canonical moduli") {
    auto f2 = field_create(2, 1);
    CHECK(f2->q() == 2);

    auto f4 = field_create(2, 2);
    CHECK(f4->q() == 4);
    CHECK(f4->modulus() == std::vector<uint32_t>{1, 1, 1});  // t^2 + t + 1

    auto f9 = field_create(3, 2);
    CHECK(f9->q() == 9);
    CHECK(f9->modulus() == std::vector<uint32_t>{1, 0, 1});  // t^2 + 1, first irreducible in lex order

    auto f8 = field_create(2, 3);
    CHECK(f8->modulus() == std::vector<uint32_t>{1, 0, 1, 1});  // t^3 + t^2 + 1, lex-first

    auto f25 = field_create(5, 2);
    CHECK(f25->modulus() == std::vector<uint32_t>{1, 1, 1});  // t^2 + t + 1

    // determinism
    auto f9b = field_create(3, 2);
    CHECK(f9->modulus() == f9b->modulus());
}

TEST_CASE("field_create errors") {
    CHECK_THROWS_AS(field_create(4, 1), Error);
    CHECK_THROWS_AS(field_create(1, 1), Error);
    CHECK_THROWS_AS(field_create(2, 0), Error);
    CHECK_THROWS_AS(field_create(2, 25), Error);  // q = 2^25 over the table bound
    try {
        field_create(9, 1);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_prime);
    }
    try {
        field_create(2, 30);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::field_too_large);
    }
}

TEST_CASE("arithmetic examples") {
    auto f5 = field_create(5, 1);
    CHECK(f5->add(3, 4) == 2);

    auto f4 = field_create(2, 2);
    // t has id 2; t * t = t + 1 which has id 3
    uint32_t t = f4->from_coeffs(std::array<uint32_t, 2>{0, 1});
    CHECK(t == 2);
    CHECK(f4->mul(t, t) == 3);

    for (auto f : {f5, f4}) {
        CHECK(f->inv(1) == 1);
    }
    CHECK_THROWS_AS(f4->inv(0), Error);
}

TEST_CASE("field axioms on every element, q <= 25") {
    for (auto [p, s] : std::vector<std::pair<uint64_t, uint32_t>>{
             {2, 1}, {3, 1}, {2, 2}, {5, 1}, {2, 3}, {3, 2}, {5, 2}}) {
        auto f = field_create(p, s);
        const uint64_t q = f->q();
        // multiplicative group order q-1
        for (uint32_t g = 1; g < q; ++g) CHECK(f->pow(g, q - 1) == 1);
        // inverses
        for (uint32_t g = 1; g < q; ++g) CHECK(f->mul(g, f->inv(g)) == 1);
        // associativity spot checks and distributivity, exhaustive for small q
        if (q <= 9) {
            for (uint32_t a = 0; a < q; ++a)
                for (uint32_t b = 0; b < q; ++b)
                    for (uint32_t c = 0; c < q; ++c) {
                        CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
                        CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
                    }
        }
    }
}

TEST_CASE("trace examples and properties") {
    auto f4 = field_create(2, 2);
    CHECK(f4->trace(0) == 0);
    uint32_t t = 2;
    CHECK(f4->trace(t) == 1);  // t + t^2 = 1 over F_4

    auto f5 = field_create(5, 1);
    for (uint32_t a = 0; a < 5; ++a) CHECK(f5->trace(a) == a);  // identity on the prime field

    auto f3 = field_create(3, 1);
    CHECK(f3->char_exponent(2) == 2);
    CHECK(f4->char_exponent(0) == 0);
    CHECK(f4->char_exponent(t) == 1);

    // trace surjects with fibers of size p^{s-1}; additive homomorphism
    for (auto [p, s] : std::vector<std::pair<uint64_t, uint32_t>>{
             {2, 1}, {3, 1}, {2, 2}, {5, 1}, {2, 3}, {3, 2}, {5, 2}}) {
        auto f = field_create(p, s);
        std::vector<uint64_t> fiber(p, 0);
        for (uint32_t a = 0; a < f->q(); ++a) ++fiber[f->trace(a)];
        uint64_t expect = f->q() / p;
        for (auto cnt : fiber) CHECK(cnt == expect);
        for (uint32_t a = 0; a < f->q(); ++a)
            for (uint32_t b = 0; b < f->q(); ++b)
                CHECK(f->char_exponent(f->add(a, b)) ==
                      (f->char_exponent(a) + f->char_exponent(b)) % f->p());
    }
}

TEST_CASE("generic (untabled) arithmetic path") {
    // q = 3125 exceeds the add/mul table threshold; axioms on sampled elements
    auto f = field_create(5, 5);
    CHECK(f->q() == 3125);
    uint32_t xs[] = {1, 2, 7, 624, 3124, 1301, 55};
    for (uint32_t a : xs)
        for (uint32_t b : xs) {
            CHECK(f->add(a, b) == f->add(b, a));
            CHECK(f->mul(a, b) == f->mul(b, a));
            CHECK(f->mul(a, f->inv(a)) == 1);
            CHECK(f->sub(f->add(a, b), b) == a);
        }
    CHECK(f->pow(2, f->q() - 1) == 1);
    // trace is additive
    for (uint32_t a : xs)
        for (uint32_t b : xs)
            CHECK(f->trace(f->add(a, b)) == (f->trace(a) + f->trace(b)) % f->p());
}

TEST_CASE("element text round-trip") {
    auto f9 = field_create(3, 2);
    CHECK(f9->element_string(0) == "0");
    CHECK(f9->element_string(1) == "1");
    uint32_t t = f9->from_coeffs(std::array<uint32_t, 2>{0, 1});
    CHECK(f9->element_string(t) == "t");
    CHECK(f9->element_string(f9->from_coeffs(std::array<uint32_t, 2>{1, 1})) == "t+1");
    CHECK(f9->element_string(f9->from_coeffs(std::array<uint32_t, 2>{1, 2})) == "2*t+1");

    auto f5 = field_create(5, 1);
    CHECK(f5->element_string(4) == "4");
}

TEST_CASE("FieldElement wrapper and field mismatch") {
    auto f4 = field_create(2, 2);
    auto f5 = field_create(5, 1);
    FieldElement a(f4, 2), b(f4, 3), c(f5, 3);
    CHECK((a * a).id() == 3);
    CHECK((a + b).id() == f4->add(2, 3));
    CHECK_THROWS_AS(a + c, Error);
    CHECK(a.trace() == 1);
}
