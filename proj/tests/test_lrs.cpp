#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "skolemkit/lrs.hpp"

using namespace skolem;

static SequenceSpec fib() {
    return SequenceSpec(Recurrence({Rat(1), Rat(1)}), {Rat(0), Rat(1)});
}

TEST_CASE("recurrence basics") {
    CHECK_THROWS_AS(Recurrence({Rat(1), Rat(0)}), InvalidArgument);
    CHECK_THROWS_AS(Recurrence({}), InvalidArgument);
    Recurrence r({Rat(1), Rat(1)});
    CHECK(r.char_poly() == poly_from_ints({-1, -1, 1}));
    CHECK(recurrence_from_char_poly(poly_from_ints({-1, -1, 1})).coeffs == r.coeffs);
    CHECK_THROWS_AS(SequenceSpec(r, {Rat(0)}), InvalidArgument);
}

TEST_CASE("term evaluation") {
    SequenceSpec f = fib();
    CHECK(term_at(f, 10) == 55);
    CHECK(term_at(f, 0) == 0);
    CHECK(term_at(f, -6) == -8);
    CHECK(term_at(f, -5) == 5);
    Int f100("354224848179261915075");
    CHECK(term_at(f, 100) == Rat(f100));
    CHECK(term_at(f, -100) == Rat(-f100));
    auto v = terms_range(f, -3, 8);
    std::vector<Rat> want = {Rat(2), Rat(-1), Rat(1), Rat(0), Rat(1), Rat(1), Rat(2), Rat(3)};
    CHECK(v == want);

    SequenceSpec h(Recurrence({Rat(1, 2)}), {Rat(1)});
    CHECK(term_at(h, 5) == Rat(1, 32));
    CHECK(term_at(h, -3) == 8);
    CHECK(term_at(h, -70) == Rat(Int(1) << 70));

    SequenceSpec sh(Recurrence({Rat(1), Rat(1)}), {Rat(0), Rat(1)}, Int(3));
    CHECK(term_at(sh, 3) == 0);
    CHECK(term_at(sh, 13) == 55);
    CHECK(term_at(sh, 2) == 1);
}

TEST_CASE("backward evaluation with non-unit last coefficient") {
    // u_n = 2^n + 3^n
    SequenceSpec s(Recurrence({Rat(5), Rat(-6)}), {Rat(2), Rat(5)});
    CHECK(term_at(s, 4) == 16 + 81);
    CHECK(term_at(s, -2) == Rat(1, 4) + Rat(1, 9));
    CHECK(term_at(s, -80) == Rat(1) / Rat(Int(1) << 80) + Rat(1) / Rat(pow_int(3, 80)));
}

TEST_CASE("reverse") {
    Recurrence r = reverse(Recurrence({Rat(1), Rat(1)}));
    CHECK(r.coeffs == std::vector<Rat>({Rat(-1), Rat(1)}));
    // v_m = u_{-m} for u = Fibonacci
    SequenceSpec v(r, {Rat(0), Rat(1)});
    CHECK(term_at(v, 6) == -8);
    CHECK(term_at(v, 5) == 5);
    Recurrence s = reverse(Recurrence({Rat(5), Rat(-6)}));
    CHECK(s.coeffs == std::vector<Rat>({Rat(5, 6), Rat(-1, 6)}));
    CHECK(reverse(s).coeffs == std::vector<Rat>({Rat(5), Rat(-6)}));
}

TEST_CASE("normalize_to_integer") {
    SequenceSpec a(Recurrence({Rat(1, 2)}), {Rat(1)});
    SequenceSpec an = normalize_to_integer(a);
    CHECK(an.rec.coeffs == std::vector<Rat>({Rat(1)}));
    CHECK(an.initial == std::vector<Rat>({Rat(2)}));

    SequenceSpec b(Recurrence({Rat(3, 2), Rat(1, 4)}), {Rat(1), Rat(1)});
    SequenceSpec bn = normalize_to_integer(b);
    CHECK(bn.rec.coeffs == std::vector<Rat>({Rat(6), Rat(4)}));
    CHECK(bn.initial == std::vector<Rat>({Rat(4), Rat(16)}));
    CHECK(is_integral(bn));
    CHECK(term_at(bn, 5) != 0);

    SequenceSpec c = fib();
    SequenceSpec cn = normalize_to_integer(c);
    CHECK(cn.rec.coeffs == c.rec.coeffs);
    CHECK(cn.initial == c.initial);

    // zero sets agree
    SequenceSpec d(Recurrence({Rat(1, 3), Rat(2, 3)}), {Rat(1), Rat(1, 3)});
    SequenceSpec dn = normalize_to_integer(d);
    CHECK(is_integral(dn));
    for (long n = -4; n <= 8; n++) CHECK((term_at(d, n) == 0) == (term_at(dn, n) == 0));
}

TEST_CASE("minimal_recurrence") {
    SequenceSpec s(Recurrence({Rat(5), Rat(-6)}), {Rat(1), Rat(2)});
    SequenceSpec m = minimal_recurrence(s);
    CHECK(m.order() == 1);
    CHECK(m.rec.coeffs == std::vector<Rat>({Rat(2)}));
    CHECK(m.initial == std::vector<Rat>({Rat(1)}));

    SequenceSpec f = fib();
    SequenceSpec mf = minimal_recurrence(f);
    CHECK(mf.order() == 2);
    CHECK(mf.rec.coeffs == f.rec.coeffs);

    SequenceSpec z(Recurrence({Rat(1), Rat(1)}), {Rat(0), Rat(0)});
    SequenceSpec mz = minimal_recurrence(z);
    CHECK(mz.order() == 1);
    CHECK(mz.initial == std::vector<Rat>({Rat(0)}));

    // Fibonacci fed through (X^2-X-1)(X-2)(X-3)
    SequenceSpec pad(Recurrence({Rat(6), Rat(-10), Rat(1), Rat(6)}),
                     {Rat(0), Rat(1), Rat(1), Rat(2)});
    SequenceSpec mp = minimal_recurrence(pad);
    CHECK(mp.order() == 2);
    CHECK(mp.rec.coeffs == std::vector<Rat>({Rat(1), Rat(1)}));
    for (long n = 0; n < 12; n++) CHECK(term_at(mp, n) == term_at(pad, n));
}

TEST_CASE("classify") {
    CHECK(classify(fib()) == LrsClass::SimpleNonDegenerate);
    SequenceSpec zero(Recurrence({Rat(3)}), {Rat(0)});
    CHECK(classify(zero) == LrsClass::IdenticallyZero);
    // u_n = n has minimal char poly (X-1)^2
    SequenceSpec ramp(Recurrence({Rat(2), Rat(-1)}), {Rat(0), Rat(1)});
    CHECK(classify(ramp) == LrsClass::NotSimple);
    // roots 2, -2
    SequenceSpec deg(Recurrence({Rat(0), Rat(4)}), {Rat(1), Rat(1)});
    CHECK(classify(deg) == LrsClass::Degenerate);
    // roots 1 +- i, ratio has order 4
    SequenceSpec gauss(Recurrence({Rat(2), Rat(-2)}), {Rat(1), Rat(1)});
    CHECK(classify(gauss) == LrsClass::Degenerate);
    // roots 2, 3
    SequenceSpec s23(Recurrence({Rat(5), Rat(-6)}), {Rat(1), Rat(5)});
    CHECK(classify(s23) == LrsClass::SimpleNonDegenerate);
    // non-minimal input with repeated root in the ambient poly, minimal is order 1
    SequenceSpec amb(Recurrence({Rat(4), Rat(-4)}), {Rat(1), Rat(2)});
    CHECK(classify(amb) == LrsClass::SimpleNonDegenerate);
    // rational coefficients
    SequenceSpec ratl(Recurrence({Rat(1, 2)}), {Rat(3)});
    CHECK(classify(ratl) == LrsClass::SimpleNonDegenerate);
}

TEST_CASE("companion matrix and subsequence char poly") {
    MatZ A = companion_matrix(Recurrence({Rat(1), Rat(1)}));
    CHECK(A.at(0, 0) == 1);
    CHECK(A.at(0, 1) == 1);
    CHECK(A.at(1, 0) == 1);
    CHECK(A.at(1, 1) == 0);
    PolyQ h = subsequence_char_poly(Recurrence({Rat(1), Rat(1)}), 2);
    CHECK(h == poly_from_ints({1, -3, 1}));
    PolyQ h3 = subsequence_char_poly(Recurrence({Rat(1), Rat(1)}), 3);
    CHECK(h3 == poly_from_ints({-1, -4, 1}));
    PolyQ h1 = subsequence_char_poly(Recurrence({Rat(5), Rat(-6)}), 1);
    CHECK(h1 == poly_from_ints({6, -5, 1}));
}

TEST_CASE("subsequence_spec") {
    SequenceSpec w = subsequence_spec(fib(), 3, 1);
    CHECK(w.rec.coeffs == std::vector<Rat>({Rat(4), Rat(1)}));
    CHECK(w.initial == std::vector<Rat>({Rat(1), Rat(3)}));
    CHECK(w.orig_stride == 3);
    CHECK(w.orig_shift == 1);
    CHECK(term_at(w, 3) == 55);
    CHECK(term_at(w, -1) == term_at(fib(), -2));
    SequenceSpec w2 = subsequence_spec(w, 2, 1);
    CHECK(w2.orig_stride == 6);
    CHECK(w2.orig_shift == 4);
    for (long n = -3; n <= 3; n++) CHECK(term_at(w2, n) == term_at(fib(), 6 * n + 4));
}

TEST_CASE("orbit_mod") {
    auto o = orbit_mod(fib(), 11, 1000);
    REQUIRE(o.has_value());
    CHECK(o->period == 10);
    std::vector<Int> want = {0, 1, 1, 2, 3, 5, 8, 2, 10, 1};
    CHECK(o->values == want);
    auto o2 = orbit_mod(fib(), 2, 1000);
    REQUIRE(o2.has_value());
    CHECK(o2->period == 3);
    CHECK(o2->values == std::vector<Int>({0, 1, 1}));
    CHECK(!orbit_mod(fib(), 11, 5).has_value());
    SequenceSpec s(Recurrence({Rat(5), Rat(-6)}), {Rat(1), Rat(5)});
    CHECK_THROWS_AS(orbit_mod(s, 9, 100), InvalidArgument);
    auto o3 = orbit_mod(s, 7, 10000);
    REQUIRE(o3.has_value());
    for (long n = 0; n < 20; n++) {
        Int idx = Int(n) % o3->period;
        CHECK(o3->values[idx.get_ui()] == mod_pos(term_at(s, n).get_num(), 7));
    }
}
