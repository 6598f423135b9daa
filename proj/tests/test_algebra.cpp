#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "skolemkit/algebra.hpp"

using namespace skolem;

TEST_CASE("padic valuation") {
    CHECK(padic_valuation(48, 2) == 4);
    CHECK(padic_valuation(48, 3) == 1);
    CHECK(padic_valuation(48, 5) == 0);
    CHECK(padic_valuation(-49, 7) == 2);
    CHECK(!padic_valuation(0, 2).has_value());
}

TEST_CASE("factorial valuation matches direct computation") {
    CHECK(factorial_valuation(25, 5) == 6);
    CHECK(factorial_valuation(10, 2) == 8);
    for (unsigned long k = 0; k <= 40; k++) {
        for (long p : {2L, 3L, 5L, 7L, 11L}) {
            long direct = k == 0 ? 0 : *padic_valuation(factorial_int(k), p);
            CHECK(factorial_valuation(k, p) == direct);
        }
    }
}

TEST_CASE("modular basics") {
    CHECK(mod_pos(-3, 7) == 4);
    CHECK(mod_inverse(3, 7) == 5);
    CHECK_THROWS_AS(mod_inverse(2, 4), InvalidArgument);
    CHECK(pow_mod(2, 10, 1000) == 24);
}

TEST_CASE("factor_integer") {
    CHECK(factor_integer(1).empty());
    CHECK(factor_integer(360) == std::vector<Int>({2, 2, 2, 3, 3, 5}));
    CHECK(factor_integer(97) == std::vector<Int>({97}));
    Int p("1000003"), q("2000003");
    REQUIRE(is_probable_prime(p));
    REQUIRE(is_probable_prime(q));
    CHECK(factor_integer(p * q) == std::vector<Int>({p, q}));
    for (long n : {2L, 720L, 1024L, 9999L, 123456789L}) {
        Int prod = 1;
        for (const Int& f : factor_integer(n)) {
            CHECK(is_probable_prime(f));
            prod *= f;
        }
        CHECK(prod == n);
    }
}

TEST_CASE("multiplicative order") {
    CHECK(multiplicative_order_mod_p(2, 11) == 10);
    CHECK(multiplicative_order_mod_p(3, 11) == 5);
    CHECK(multiplicative_order_mod_p(10, 11) == 2);
    CHECK(multiplicative_order_mod_p(1, 11) == 1);
    for (long p : {13L, 101L, 997L}) {
        for (long a = 1; a < 20; a++) {
            if (a % p == 0) continue;
            Int e = multiplicative_order_mod_p(a, p);
            CHECK(pow_mod(a, e, p) == 1);
            for (const Int& f : factor_integer(e)) CHECK(pow_mod(a, e / f, p) != 1);
        }
    }
}

TEST_CASE("poly arithmetic") {
    PolyQ one_plus_x = poly_from_ints({1, 1});
    CHECK(one_plus_x * one_plus_x == poly_from_ints({1, 2, 1}));
    PolyQ f = poly_from_ints({-1, 0, 0, 1});
    auto [q, r] = divrem(f, poly_from_ints({-1, 1}));
    CHECK(q == poly_from_ints({1, 1, 1}));
    CHECK(r.is_zero());
    auto [q2, r2] = divrem(poly_from_ints({1, 0, 1}), poly_from_ints({1, 1}));
    CHECK(q2 == poly_from_ints({-1, 1}));
    CHECK(r2 == poly_from_ints({2}));
    CHECK(compose(poly_from_ints({0, 0, 1}), poly_from_ints({1, 1})) == poly_from_ints({1, 2, 1}));
    CHECK(poly_from_ints({3, 1}).eval(Rat(2)) == 5);
}

TEST_CASE("poly gcd and squarefree part") {
    PolyQ a = poly_from_ints({-1, 1}) * poly_from_ints({1, 0, 1});
    PolyQ b = poly_from_ints({-1, 1}) * poly_from_ints({2, 1});
    CHECK(poly_gcd(a, b) == poly_from_ints({-1, 1}));
    CHECK(poly_gcd(poly_from_ints({1, 0, 1}), poly_from_ints({2, 1})) == poly_from_ints({1}));
    PolyQ half_shift(std::vector<Rat>{Rat(-1, 2), Rat(1, 2)});
    CHECK(poly_gcd(half_shift, poly_from_ints({-1, 0, 1})) == poly_from_ints({-1, 1}));
    PolyQ sq = poly_from_ints({-1, 1}) * poly_from_ints({-1, 1}) * poly_from_ints({2, 1});
    CHECK(squarefree_part(sq) == poly_from_ints({-2, 1, 1}));
}

TEST_CASE("resultant and discriminant") {
    CHECK(resultant(poly_from_ints({-2, 1}), poly_from_ints({-3, 1})) == -1);
    CHECK(resultant(poly_from_ints({-1, 0, 1}), poly_from_ints({3, -4, 1})) == 0);
    CHECK(resultant(poly_from_ints({1, 1, 1}), poly_from_ints({3})) == 9);
    PolyQ f = poly_from_ints({1, 2, 1});
    PolyQ g = poly_from_ints({-1, 1, 2});
    PolyQ h = poly_from_ints({5, 0, 1});
    CHECK(resultant(f * g, h) == resultant(f, h) * resultant(g, h));
    CHECK(discriminant(poly_from_ints({-5, 0, 1})) == 20);
    CHECK(discriminant(poly_from_ints({-2, 0, 0, 1})) == -108);
    CHECK(discriminant(poly_from_ints({-6, 11, -6, 1})) == 4);
}

static bool brute_splits(const PolyQ& g, long p) {
    PolyM gm = polym_from(g, p);
    if (polym_degree(gm) != g.degree()) return false;
    long roots = 0;
    for (long r = 0; r < p; r++)
        if (polym_eval(gm, r, p) == 0) roots++;
    if (roots != g.degree()) return false;
    PolyM d = polym_derivative(gm, p);
    return polym_degree(polym_gcd(gm, d, p)) == 0;
}

TEST_CASE("splits_completely_mod_p") {
    CHECK(splits_completely_mod_p(poly_from_ints({-5, 0, 1}), 11));
    CHECK(!splits_completely_mod_p(poly_from_ints({-5, 0, 1}), 7));
    CHECK(splits_completely_mod_p(poly_from_ints({1, 0, 1}), 5));
    CHECK(!splits_completely_mod_p(poly_from_ints({1, 0, 1}), 7));
    CHECK(splits_completely_mod_p(poly_from_ints({-3, 1}), 13));
    CHECK(!splits_completely_mod_p(poly_from_ints({1, -2, 1}), 5));
    std::vector<PolyQ> samples = {
        poly_from_ints({-1, 0, 1}),   poly_from_ints({2, 3, 1}),       poly_from_ints({-6, 11, -6, 1}),
        poly_from_ints({1, 1, 1}),    poly_from_ints({-2, 0, 0, 1}),   poly_from_ints({4, 0, 1}),
        poly_from_ints({-4, 0, 1, 1}),
    };
    for (const PolyQ& g : samples)
        for (long p : {3L, 5L, 7L, 11L, 13L, 17L}) CHECK(splits_completely_mod_p(g, p) == brute_splits(g, p));
}

TEST_CASE("roots_mod_p") {
    PolyM f = polym_from(poly_from_ints({-5, 0, 1}), 11);
    CHECK(roots_mod_p(f, 11) == std::vector<Int>({4, 7}));
    Int p = 10007;
    REQUIRE(is_probable_prime(p));
    PolyQ g = poly_from_ints({-3, 1}) * poly_from_ints({-5, 1}) * poly_from_ints({-7, 1});
    CHECK(roots_mod_p(polym_from(g, p), p) == std::vector<Int>({3, 5, 7}));
    Int p2 = 100003;
    REQUIRE(is_probable_prime(p2));
    PolyQ g2 = poly_from_ints({-2, 1}) * poly_from_ints({-12345, 1}) * poly_from_ints({1, 1});
    CHECK(roots_mod_p(polym_from(g2, p2), p2) == std::vector<Int>({2, 12345, 100002}));
}

TEST_CASE("stirling rows") {
    CHECK(stirling_row(0) == std::vector<Int>({1}));
    CHECK(stirling_row(3) == std::vector<Int>({0, 2, -3, 1}));
    CHECK(stirling_row(4) == std::vector<Int>({0, -6, 11, -6, 1}));
    for (unsigned k = 1; k <= 8; k++) {
        auto row = stirling_row(k);
        for (long n : {0L, 1L, 5L, 17L, -3L}) {
            Int falling = 1;
            for (unsigned i = 0; i < k; i++) falling *= Int(n) - Int(i);
            Int sum = 0;
            Int npow = 1;
            for (size_t j = 0; j < row.size(); j++) {
                sum += row[j] * npow;
                npow *= n;
            }
            CHECK(sum == falling);
        }
    }
}

TEST_CASE("cyclotomic") {
    CHECK(cyclotomic(1) == poly_from_ints({-1, 1}));
    CHECK(cyclotomic(2) == poly_from_ints({1, 1}));
    CHECK(cyclotomic(6) == poly_from_ints({1, -1, 1}));
    CHECK(cyclotomic(12) == poly_from_ints({1, 0, -1, 0, 1}));
    for (unsigned n : {12u, 30u}) {
        PolyQ prod = poly_from_ints({1});
        for (unsigned d = 1; d <= n; d++)
            if (n % d == 0) prod = prod * cyclotomic(d);
        CHECK(prod == poly_x_power(static_cast<int>(n)) - poly_from_ints({1}));
    }
}

TEST_CASE("root_of_unity_order_dividing") {
    PolyQ f = cyclotomic(3) * poly_from_ints({-2, 1});
    CHECK(root_of_unity_order_dividing(f, 2, 10) == 3u);
    CHECK(!root_of_unity_order_dividing(poly_from_ints({-2, 1}) * poly_from_ints({-3, 1}), 1, 20).has_value());
    PolyQ g = poly_from_ints({-1, 1}) * poly_from_ints({1, 1});
    CHECK(root_of_unity_order_dividing(g, 2, 10) == 2u);
    CHECK(root_of_unity_order_dividing(g, 1, 10) == 1u);
}

TEST_CASE("matrices") {
    MatZ A(2);
    A.at(0, 0) = 1;
    A.at(0, 1) = 1;
    A.at(1, 0) = 1;
    A.at(1, 1) = 0;
    MatZ A10 = mat_pow(A, 10);
    CHECK(A10.at(0, 0) == 89);
    CHECK(A10.at(0, 1) == 55);
    CHECK(A10.at(1, 0) == 55);
    CHECK(A10.at(1, 1) == 34);
    CHECK(mat_is_identity_mod(A10, 11));
    CHECK(mat_pow_mod(A, 10, 11) == mat_mod(A10, 11));
    auto B = mat_div_exact(mat_sub(A10, mat_identity(2)), 11);
    REQUIRE(B.has_value());
    CHECK(B->at(0, 0) == 8);
    CHECK(B->at(0, 1) == 5);
    CHECK(B->at(1, 0) == 5);
    CHECK(B->at(1, 1) == 3);
    CHECK(!mat_div_exact(mat_identity(2), 2).has_value());
    CHECK(mat_trace(A10) == 123);
    std::vector<Int> v = mat_vec(A, {2, 3});
    CHECK(v == std::vector<Int>({5, 2}));
}

TEST_CASE("linsolve_rat") {
    std::vector<std::vector<Rat>> A = {{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
    auto x = linsolve_rat(A, {Rat(5), Rat(10)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 1);
    CHECK((*x)[1] == 3);
    std::vector<std::vector<Rat>> S = {{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    CHECK(!linsolve_rat(S, {Rat(1), Rat(2)}).has_value());
}

TEST_CASE("polym helpers") {
    Int m = 7;
    PolyM a = {Int(3), Int(2)};
    PolyM b = {Int(5), Int(6)};
    CHECK(polym_mul(a, b, m) == PolyM({1, 0, 5}));
    PolyM s, t;
    PolyM g = polym_gcdext(a, b, m, s, t);
    PolyM lhs = polym_add(polym_mul(s, a, m), polym_mul(t, b, m), m);
    CHECK(lhs == g);
    CHECK(polym_degree(g) == 0);
    PolyQ f = poly_from_ints({-1, 0, 0, 0, 1});
    PolyM fm = polym_from(f, 5);
    PolyM x = {Int(0), Int(1)};
    CHECK(polym_powmod(x, 4, fm, 5) == PolyM({1}));
}
