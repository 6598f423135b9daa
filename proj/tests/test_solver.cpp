#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skolemkit/solver.hpp"

#include <algorithm>
#include <vector>

using namespace skolem;

namespace {

SequenceSpec mk(std::vector<long> c, std::vector<long> w, long shift = 0) {
    std::vector<Rat> cc, init;
    for (long x : c) cc.emplace_back(x);
    for (long x : w) init.emplace_back(x);
    return SequenceSpec(Recurrence(std::move(cc)), std::move(init), Int(shift));
}

SequenceSpec fib() { return mk({1, 1}, {0, 1}); }

// u_n = 2^n - 2*4^n + 8^n: zero at 0, first jump coefficient vanishes
// identically so j0 = 2
SequenceSpec double_jump() { return mk({14, -56, 64}, {0, 2, 36}); }

// order-5 spec with a unique zero at index 2
SequenceSpec quintic() { return mk({9, -10, 522, -4745, 4225}, {-30, -27, 0, 469, 1762}); }

// order-6 spec whose only zero is at 0
SequenceSpec sextic() { return mk({6, -26, 66, -130, 150, -125}, {0, 3, 11, -12, -125, -177}); }

// reversible order-8 spec with zeros at 0, 1 and 4
SequenceSpec octic() {
    return mk({6, -25, 66, -120, 150, -89, 18, -1}, {0, 0, -48, -120, 0, 520, 624, -2016});
}

std::vector<Int> ints(std::vector<long> v) {
    std::vector<Int> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

struct EntryCounts {
    long modulus = 0, valuation = 0, evaluation = 0;
};

EntryCounts count_entries(const Certificate& cert) {
    EntryCounts n;
    for (const auto& e : cert.entries) {
        if (std::holds_alternative<ModulusWitness>(e.witness)) n.modulus++;
        else if (std::holds_alternative<ValuationWitness>(e.witness)) n.valuation++;
        else n.evaluation++;
    }
    return n;
}

const ValuationWitness& only_valuation(const Certificate& cert) {
    const ValuationWitness* found = nullptr;
    for (const auto& e : cert.entries)
        if (const auto* v = std::get_if<ValuationWitness>(&e.witness)) {
            REQUIRE(found == nullptr);
            found = v;
        }
    REQUIRE(found != nullptr);
    return *found;
}

const ModulusWitness* modulus_at(const Certificate& cert, long M, long r) {
    for (const auto& e : cert.entries)
        if (e.modulus == M && e.residue == r) return std::get_if<ModulusWitness>(&e.witness);
    return nullptr;
}

MatZ gauss_inverse_mod(MatZ a, const Int& q) {
    long n = a.n;
    MatZ inv = mat_identity(n);
    for (long col = 0; col < n; col++) {
        long piv = col;
        while (piv < n && mod_pos(a.at(piv, col), q) == 0) piv++;
        REQUIRE(piv < n);
        if (piv != col)
            for (long j = 0; j < n; j++) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        Int d = mod_inverse(mod_pos(a.at(col, col), q), q);
        for (long j = 0; j < n; j++) {
            a.at(col, j) = mod_pos(a.at(col, j) * d, q);
            inv.at(col, j) = mod_pos(inv.at(col, j) * d, q);
        }
        for (long i = 0; i < n; i++) {
            if (i == col) continue;
            Int f = mod_pos(a.at(i, col), q);
            if (f == 0) continue;
            for (long j = 0; j < n; j++) {
                a.at(i, j) = mod_pos(a.at(i, j) - f * a.at(col, j), q);
                inv.at(i, j) = mod_pos(inv.at(i, j) - f * inv.at(col, j), q);
            }
        }
    }
    return inv;
}

// nonzero proof by residue screening with an exact fallback
void check_nonzero(const SequenceSpec& s, const Int& n, const Int& q1, const Int& q2) {
    MatZ A = companion_matrix(s.rec);
    bool hit = true;
    for (const Int& q : {q1, q2}) {
        std::vector<Int> st(static_cast<size_t>(s.order()));
        for (long i = 0; i < s.order(); i++) {
            const Rat& v = s.initial[static_cast<size_t>(s.order() - 1 - i)];
            st[static_cast<size_t>(i)] =
                mod_pos(v.get_num() * mod_inverse(v.get_den(), q), q);
        }
        Int delta = n - s.shift;
        MatZ P = delta >= 0 ? mat_pow_mod(A, delta, q)
                            : mat_pow_mod(gauss_inverse_mod(mat_mod(A, q), q), -delta, q);
        st = mat_vec(P, st);
        if (mod_pos(st.back(), q) != 0) {
            hit = false;
            break;
        }
    }
    if (hit) CHECK(term_at(s, n) != 0);
}

bool entries_equal(const ProgressionEntry& a, const ProgressionEntry& b) {
    if (a.modulus != b.modulus || a.residue != b.residue) return false;
    if (a.witness.index() != b.witness.index()) return false;
    if (const auto* m = std::get_if<ModulusWitness>(&a.witness)) {
        const auto& n = std::get<ModulusWitness>(b.witness);
        return m->m == n.m && m->period == n.period;
    }
    if (const auto* v = std::get_if<ValuationWitness>(&a.witness)) {
        const auto& w = std::get<ValuationWitness>(b.witness);
        return v->center == w.center && v->p == w.p && v->L == w.L && v->nu == w.nu &&
               v->sum_valuation == w.sum_valuation && v->j0 == w.j0 && v->terms == w.terms &&
               v->window_scale == w.window_scale &&
               v->zero_proofs.size() == w.zero_proofs.size();
    }
    const auto& x = std::get<EvaluationWitness>(a.witness);
    const auto& y = std::get<EvaluationWitness>(b.witness);
    return x.p == y.p && x.L == y.L && x.a == y.a && x.valuation == y.valuation;
}

}  // namespace

TEST_CASE("config validation rejects bad limits") {
    auto run = [](SolveConfig cfg) { find_all_zeros(fib(), cfg); };
    SolveConfig c;
    c.time_budget_seconds = 0;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.modulus_cap = 1;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.zero_search_cap = -1;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.prime_search_cap = 2;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.max_terms = -1;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.term_retry_doublings = -1;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.relation_exponent_cap = 0;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.recursion_depth_cap = 0;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.period_scan_cap = 0;
    CHECK_THROWS_AS(run(c), InvalidArgument);
    c = {};
    c.symbolic_stride_cap = 0;
    CHECK_THROWS_AS(run(c), InvalidArgument);
}

TEST_CASE("zero search scans the exact window") {
    CHECK(zero_search(fib(), Int(50)) == ints({0}));
    CHECK(zero_search(fib(), Int(0)) == ints({0}));
    CHECK(zero_search(mk({1, 1}, {2, 3}), Int(50)) == ints({-3}));
    CHECK(zero_search(mk({9, -18}, {1, 9}), Int(5)) == ints({-1}));
    CHECK(zero_search(sextic(), Int(50)) == ints({0}));
    CHECK(zero_search(octic(), Int(50)) == ints({0, 1, 4}));
    CHECK_THROWS_AS(zero_search(fib(), Int(-1)), InvalidArgument);
}

TEST_CASE("modulus witness search returns the least witness") {
    auto one = modulus_witness_search(mk({1}, {1}), Int(10));
    REQUIRE(one.has_value());
    CHECK(one->m == 2);
    CHECK(one->period == 1);

    SequenceSpec odd = minimal_recurrence(subsequence_spec(quintic(), Int(14), Int(1)));
    auto w1 = modulus_witness_search(odd, Int(100));
    REQUIRE(w1.has_value());
    CHECK(w1->m == 2);
    CHECK(w1->period == 1);

    SequenceSpec even = minimal_recurrence(subsequence_spec(quintic(), Int(14), Int(0)));
    auto w0 = modulus_witness_search(even, Int(100));
    REQUIRE(w0.has_value());
    CHECK(w0->m == 29);
    CHECK(w0->period == 1);

    CHECK_FALSE(modulus_witness_search(fib(), Int(50)).has_value());
    std::vector<Rat> half{Rat(1, 2)};
    CHECK_THROWS_AS(modulus_witness_search(SequenceSpec(Recurrence(half), {Rat(1)}), Int(10)),
                    InvalidArgument);
}

TEST_CASE("bi-skolem decision finds whichever side exists") {
    BiSkolemResult hz = bi_skolem_decide(fib());
    CHECK(hz.kind == BiSkolemResult::Kind::HasZero);
    CHECK(hz.n0 == 0);

    BiSkolemResult nz = bi_skolem_decide(mk({1}, {1}));
    CHECK(nz.kind == BiSkolemResult::Kind::NoZero);
    CHECK(nz.witness.m == 2);
    CHECK(nz.witness.period == 1);

    SequenceSpec cls3 = minimal_recurrence(subsequence_spec(quintic(), Int(14), Int(3)));
    BiSkolemResult r3 = bi_skolem_decide(cls3);
    CHECK(r3.kind == BiSkolemResult::Kind::NoZero);
    CHECK(r3.witness.m == 2);

    CHECK_THROWS_AS(bi_skolem_decide(mk({0, 4}, {2, 0})), InvalidArgument);
}

TEST_CASE("find_all_zeros golden: Fibonacci") {
    Outcome res = find_all_zeros(fib());
    REQUIRE(res.kind == OutcomeKind::Solved);
    CHECK(res.zeros == ints({0}));
    CHECK(res.stats.tree_depth == 2);
    CHECK(res.stats.max_jump == 110);
    CHECK(res.certificate.entries.size() == 20);
    EntryCounts n = count_entries(res.certificate);
    CHECK(n.modulus == 9);
    CHECK(n.valuation == 1);
    CHECK(n.evaluation == 10);

    const ValuationWitness& v = only_valuation(res.certificate);
    CHECK(v.center == 0);
    CHECK(v.p == 11);
    CHECK(v.L == 10);
    CHECK(v.nu == 0);
    CHECK(v.sum_valuation == 1);
    CHECK(v.j0 == 1);
    CHECK(v.terms == 1);
    CHECK(v.window_scale == 1);
    CHECK(v.zero_proofs.empty());

    const ModulusWitness* m1 = modulus_at(res.certificate, 10, 1);
    REQUIRE(m1 != nullptr);
    CHECK(m1->m == 3);
    CHECK(m1->period == 4);
    const ModulusWitness* m2 = modulus_at(res.certificate, 10, 2);
    REQUIRE(m2 != nullptr);
    CHECK(m2->m == 5);
    CHECK(m2->period == 2);

    for (const auto& e : res.certificate.entries)
        if (const auto* ev = std::get_if<EvaluationWitness>(&e.witness)) {
            CHECK(e.modulus == 110);
            CHECK(mod_pos(e.residue, 10) == 0);
            CHECK(ev->p == 11);
            CHECK(ev->L == 10);
            CHECK(ev->a == 1);
            CHECK(ev->valuation == 1);
        }
}

TEST_CASE("find_all_zeros golden: engineered j0 = 2") {
    Outcome res = find_all_zeros(double_jump());
    REQUIRE(res.kind == OutcomeKind::Solved);
    CHECK(res.zeros == ints({0}));
    CHECK(res.stats.max_jump == 20);
    CHECK(res.certificate.entries.size() == 24);
    EntryCounts n = count_entries(res.certificate);
    CHECK(n.modulus == 3);
    CHECK(n.valuation == 1);
    CHECK(n.evaluation == 20);

    const ValuationWitness& v = only_valuation(res.certificate);
    CHECK(v.center == 0);
    CHECK(v.p == 5);
    CHECK(v.L == 4);
    CHECK(v.nu == 0);
    CHECK(v.sum_valuation == 2);
    CHECK(v.j0 == 2);
    CHECK(v.terms == 2);
    REQUIRE(v.zero_proofs.size() == 1);
    const SymbolicZeroProof& pr = v.zero_proofs[0];
    CHECK(pr.j == 1);
    CHECK(pr.independent.size() == 1);
    CHECK(pr.relations.size() == 2);
    CHECK(pr.roots.size() == 3);

    // every sibling coset saturates level 1 (4 | n forces 5 | 2^n - 1,
    // squared) and certifies one level deeper
    for (const auto& e : res.certificate.entries)
        if (const auto* ev = std::get_if<EvaluationWitness>(&e.witness)) {
            CHECK(e.modulus == 100);
            CHECK(ev->a == 2);
            CHECK(ev->valuation == 2);
        }
}

TEST_CASE("find_all_zeros golden: order-5 spec, zero off the origin") {
    Outcome res = find_all_zeros(quintic());
    REQUIRE(res.kind == OutcomeKind::Solved);
    CHECK(res.zeros == ints({2}));
    CHECK(res.stats.tree_depth == 2);
    CHECK(res.stats.max_jump == 272);
    CHECK(res.certificate.entries.size() == 32);
    EntryCounts n = count_entries(res.certificate);
    CHECK(n.modulus == 15);
    CHECK(n.valuation == 1);
    CHECK(n.evaluation == 16);

    const ValuationWitness& v = only_valuation(res.certificate);
    CHECK(v.center == 2);
    CHECK(v.p == 17);
    CHECK(v.L == 16);
    CHECK(v.nu == 0);
    CHECK(v.sum_valuation == 1);
    CHECK(v.j0 == 1);
    CHECK(v.window_scale == 1);

    const ModulusWitness* m6 = modulus_at(res.certificate, 16, 6);
    REQUIRE(m6 != nullptr);
    CHECK(m6->m == 17);
    const ModulusWitness* m0 = modulus_at(res.certificate, 16, 0);
    REQUIRE(m0 != nullptr);
    CHECK(m0->m == 4);
    const ModulusWitness* m4 = modulus_at(res.certificate, 16, 4);
    REQUIRE(m4 != nullptr);
    CHECK(m4->m == 3);
    CHECK(m4->period == 3);
}

TEST_CASE("degenerate and trivial inputs are classified, not solved") {
    CHECK(find_all_zeros(mk({0, 4}, {2, 0})).kind == OutcomeKind::Degenerate);
    CHECK(find_all_zeros(mk({2, -1}, {0, 1})).kind == OutcomeKind::NotSimple);
    CHECK(find_all_zeros(mk({1, 1}, {0, 0})).kind == OutcomeKind::IdenticallyZero);
}

TEST_CASE("shifted input keeps original indexing in the outcome") {
    Outcome res = find_all_zeros(mk({1, 1}, {0, 1}, 5));
    REQUIRE(res.kind == OutcomeKind::Solved);
    CHECK(res.zeros == ints({5}));
    CHECK(res.certificate.zeros == ints({5}));
}

TEST_CASE("solver output is deterministic") {
    Outcome a = find_all_zeros(quintic());
    Outcome b = find_all_zeros(quintic());
    REQUIRE(a.kind == OutcomeKind::Solved);
    REQUIRE(b.kind == OutcomeKind::Solved);
    CHECK(a.zeros == b.zeros);
    REQUIRE(a.certificate.entries.size() == b.certificate.entries.size());
    for (size_t i = 0; i < a.certificate.entries.size(); i++)
        CHECK(entries_equal(a.certificate.entries[i], b.certificate.entries[i]));
}

TEST_CASE("certificate entries hold up under direct evaluation") {
    Int q1 = next_prime_above(Int(1) << 62);
    Int q2 = next_prime_above(q1);
    for (const SequenceSpec& s : {fib(), double_jump(), quintic()}) {
        Outcome res = find_all_zeros(s);
        REQUIRE(res.kind == OutcomeKind::Solved);
        for (const auto& e : res.certificate.entries) {
            if (const auto* v = std::get_if<ValuationWitness>(&e.witness)) {
                for (long t = 1; t <= 200; t++) {
                    check_nonzero(s, v->center + e.modulus * t, q1, q2);
                    check_nonzero(s, v->center - e.modulus * t, q1, q2);
                }
            } else if (const auto* ev = std::get_if<EvaluationWitness>(&e.witness)) {
                Rat u = term_at(s, e.residue);
                REQUIRE(u.get_den() == 1);
                Int num = u.get_num();
                REQUIRE(num != 0);
                long val = 0;
                while (num % ev->p == 0) {
                    num /= ev->p;
                    val++;
                }
                CHECK(val == ev->valuation);
                CHECK(val <= ev->a);
                for (long t = 1; t <= 25; t++) {
                    check_nonzero(s, e.residue + e.modulus * t, q1, q2);
                    check_nonzero(s, e.residue - e.modulus * t, q1, q2);
                }
            } else {
                const auto& mw = std::get<ModulusWitness>(e.witness);
                for (long t = 0; t <= 30; t++) {
                    Rat u = term_at(s, e.residue + e.modulus * t);
                    REQUIRE(u.get_den() == 1);
                    CHECK(mod_pos(u.get_num(), mw.m) != 0);
                }
            }
        }
    }
}

TEST_CASE("coverage: certificate moduli partition the integers") {
    for (const SequenceSpec& s : {fib(), double_jump(), quintic()}) {
        Outcome res = find_all_zeros(s);
        REQUIRE(res.kind == OutcomeKind::Solved);
        Int lcmM = 1;
        for (const auto& e : res.certificate.entries) lcmM = lcm(lcmM, e.modulus);
        Int total = 0;
        for (const auto& e : res.certificate.entries) total += lcmM / e.modulus;
        CHECK(total == lcmM);
        for (size_t i = 0; i < res.certificate.entries.size(); i++)
            for (size_t j = i + 1; j < res.certificate.entries.size(); j++) {
                const auto& a = res.certificate.entries[i];
                const auto& b = res.certificate.entries[j];
                CHECK(mod_pos(a.residue - b.residue, gcd(a.modulus, b.modulus)) != 0);
            }
    }
}

TEST_CASE("oracle agreement on seeded random instances") {
    long solved = 0, mismatch = 0;
    for (unsigned long seed = 1; seed <= 20; seed++) {
        long order = 2 + (seed % 2);
        SequenceSpec s = random_instance(order, -20, 20, seed);
        SolveConfig cfg;
        cfg.time_budget_seconds = 20;
        Outcome res = find_all_zeros(s, cfg);
        if (res.kind != OutcomeKind::Solved) continue;
        solved++;
        std::vector<Int> brute = zero_search(s, Int(2000));
        std::vector<Int> claimed;
        for (const Int& z : res.zeros)
            if (abs(z) <= 2000) claimed.push_back(z);
        if (claimed != brute) mismatch++;
    }
    CHECK(solved == 20);
    CHECK(mismatch == 0);
}

TEST_CASE("random instance generator") {
    SequenceSpec a = random_instance(3, -20, 20, 7);
    SequenceSpec b = random_instance(3, -20, 20, 7);
    CHECK(a.rec.coeffs == b.rec.coeffs);
    CHECK(a.initial == b.initial);
    SequenceSpec c = random_instance(3, -20, 20, 8);
    CHECK((a.rec.coeffs != c.rec.coeffs || a.initial != c.initial));

    for (unsigned long seed = 0; seed < 50; seed++) {
        SequenceSpec s = random_instance(4, -20, 20, seed);
        CHECK(s.order() == 4);
        CHECK(s.rec.coeffs.back() != 0);
        for (const Rat& x : s.rec.coeffs) {
            CHECK(x.get_den() == 1);
            CHECK(abs(x.get_num()) <= 20);
        }
        for (const Rat& x : s.initial) CHECK(abs(x.get_num()) <= 20);
    }

    CHECK_THROWS_AS(random_instance(0, -20, 20, 1), InvalidArgument);
    CHECK_THROWS_AS(random_instance(2, 5, 4, 1), InvalidArgument);
    CHECK_THROWS_AS(random_instance(2, 0, 0, 1), InvalidArgument);
}

TEST_CASE("exhausted budget reports a diagnostic timeout") {
    SolveConfig cfg;
    cfg.time_budget_seconds = 1e-6;
    Outcome res = find_all_zeros(quintic(), cfg);
    CHECK(res.kind == OutcomeKind::Timeout);
    CHECK_FALSE(res.diagnostic.empty());
}
