#include "skolemkit/solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <utility>

#include "skolemkit/numfield.hpp"

namespace skolem {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

long to_long(const Int& v, const char* what) {
    if (!v.fits_slong_p()) throw InvalidArgument(std::string(what) + " out of range");
    return v.get_si();
}

void validate_config(const SolveConfig& c) {
    if (c.time_budget_seconds <= 0) throw InvalidArgument("time budget must be positive");
    if (c.modulus_cap < 2) throw InvalidArgument("modulus cap must be at least 2");
    if (c.zero_search_cap < 0) throw InvalidArgument("zero search cap must be nonnegative");
    if (c.prime_search_cap < 3) throw InvalidArgument("prime search cap must be at least 3");
    if (c.max_terms < 0) throw InvalidArgument("term cap must be nonnegative");
    if (c.term_retry_doublings < 0) throw InvalidArgument("retry count must be nonnegative");
    if (c.relation_exponent_cap < 1) throw InvalidArgument("relation exponent cap must be positive");
    if (c.recursion_depth_cap < 1) throw InvalidArgument("recursion depth cap must be positive");
    if (c.period_scan_cap < 1) throw InvalidArgument("period scan cap must be positive");
    if (c.symbolic_stride_cap < 1) throw InvalidArgument("symbolic stride cap must be positive");
}

struct Deadline {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double budget;

    explicit Deadline(double b) : budget(b) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    bool expired() const { return elapsed() >= budget; }
};

// unwinds the class recursion when a budget runs out; the message becomes the
// outcome diagnostic
struct GiveUp {
    std::string why;
};

SequenceSpec rebase_to_zero(const SequenceSpec& s) {
    if (s.shift == 0) return s;
    SequenceSpec out(s.rec, terms_range(s, 0, s.order()), Int(0));
    out.orig_stride = s.orig_stride;
    out.orig_shift = s.orig_shift;
    return out;
}

// scale the window by the lcm of its denominators; a constant factor keeps
// the roots and the vanishing pattern of every jump coefficient unchanged
SequenceSpec with_integral_window(const SequenceSpec& s, Int* scale_out = nullptr) {
    Int den = 1;
    for (const Rat& v : s.initial) den = lcm(den, v.get_den());
    if (scale_out) *scale_out = den;
    if (den == 1) return s;
    std::vector<Rat> init;
    init.reserve(s.initial.size());
    for (const Rat& v : s.initial) {
        Rat w = v * Rat(den);
        w.canonicalize();
        init.push_back(w);
    }
    SequenceSpec out(s.rec, std::move(init), s.shift);
    out.orig_stride = s.orig_stride;
    out.orig_shift = s.orig_shift;
    return out;
}

MatZ mat_inverse_mod(const MatZ& P, const Int& q) {
    long n = P.n;
    MatZ a = mat_mod(P, q);
    MatZ inv = mat_identity(n);
    for (long col = 0; col < n; col++) {
        long piv = -1;
        for (long i = col; i < n; i++) {
            if (a.at(i, col) != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) throw InternalError("mat_inverse_mod: singular matrix");
        if (piv != col) {
            for (long j = 0; j < n; j++) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        Int s = mod_inverse(a.at(col, col), q);
        for (long j = 0; j < n; j++) {
            a.at(col, j) = mod_pos(a.at(col, j) * s, q);
            inv.at(col, j) = mod_pos(inv.at(col, j) * s, q);
        }
        for (long i = 0; i < n; i++) {
            if (i == col || a.at(i, col) == 0) continue;
            Int f = a.at(i, col);
            for (long j = 0; j < n; j++) {
                a.at(i, j) = mod_pos(a.at(i, j) - f * a.at(col, j), q);
                inv.at(i, j) = mod_pos(inv.at(i, j) - f * inv.at(col, j), q);
            }
        }
    }
    return inv;
}

// state vector (u_{n+d-1}, ..., u_n) mod q
std::vector<Int> state_mod(const SequenceSpec& s, const Int& n, const Int& q) {
    long d = s.order();
    std::vector<Int> st(static_cast<size_t>(d));
    for (long i = 0; i < d; i++) {
        const Rat& v = s.initial[static_cast<size_t>(d - 1 - i)];
        Int num = mod_pos(v.get_num(), q);
        st[static_cast<size_t>(i)] = mod_pos(num * mod_inverse(v.get_den(), q), q);
    }
    Int delta = n - s.shift;
    if (delta == 0) return st;
    MatZ A = companion_matrix(s.rec);
    MatZ P = delta > 0 ? mat_pow_mod(A, delta, q)
                       : mat_pow_mod(mat_inverse_mod(mat_mod(A, q), q), -delta, q);
    st = mat_vec(P, st);
    for (Int& x : st) x = mod_pos(x, q);
    return st;
}

std::pair<Int, Int> screening_primes(const Int& cd) {
    Int q1 = next_prime_above(Int(1) << 62);
    while (cd % q1 == 0) q1 = next_prime_above(q1);
    Int q2 = next_prime_above(q1);
    while (cd % q2 == 0) q2 = next_prime_above(q2);
    return {q1, q2};
}

struct StrideMats {
    MatZ P1, P1i, P2, P2i;
};

struct Session {
    const SolveConfig& cfg;
    Deadline& clock;
    SequenceSpec root;
    Int cd;
    MatZ A;
    PolyQ g;
    Int q1, q2;
    struct OrbitInfo {
        Int base, period;
        std::vector<long> zero_pos;
    };
    std::map<long, std::optional<OrbitInfo>> orbits;
    std::map<Int, Int> ord_cache;
    std::map<Int, StrideMats> stride_cache;
    std::vector<ProgressionEntry> entries;
    std::vector<Int> zeros;
    long max_depth = 0;
    Int max_jump{1};
    std::optional<Int> p0;

    Session(const SequenceSpec& input, const SolveConfig& c, Deadline& cl)
        : cfg(c), clock(cl), root(minimal_recurrence(normalize_to_integer(rebase_to_zero(input)))) {
        cd = root.rec.coeffs.back().get_num();
        A = companion_matrix(root.rec);
        g = root.rec.char_poly();
        auto qs = screening_primes(cd);
        q1 = qs.first;
        q2 = qs.second;
    }

    // one prime for every jump; admissibility for the root sequence carries
    // over to each of its arithmetic subsequences
    const Int& jump_prime() {
        if (!p0) {
            try {
                p0 = choose_prime(root, cfg.prime_strategy, cfg.prime_param, cfg.prime_search_cap);
            } catch (const ResourceLimit& e) {
                throw GiveUp{std::string("no admissible prime for the root sequence: ") + e.what()};
            }
        }
        return *p0;
    }

    Int matrix_order(const Int& p) {
        auto it = ord_cache.find(p);
        if (it == ord_cache.end()) it = ord_cache.emplace(p, matrix_order_mod_p(A, g, p)).first;
        return it->second;
    }

    const StrideMats& stride_mats(const Int& M) {
        auto it = stride_cache.find(M);
        if (it == stride_cache.end()) {
            StrideMats sm;
            sm.P1 = mat_pow_mod(A, M, q1);
            sm.P2 = mat_pow_mod(A, M, q2);
            sm.P1i = mat_inverse_mod(sm.P1, q1);
            sm.P2i = mat_inverse_mod(sm.P2, q2);
            it = stride_cache.emplace(M, std::move(sm)).first;
        }
        return it->second;
    }
};

// walks k = 0, 1, -1, 2, -2, ... over the progression r + M k, screening
// mod two large primes and confirming hits exactly
struct ZeroProbe {
    Session& ss;
    Int M, r;
    long cap;
    long t = 0;
    Int fpos{0}, bpos{0};
    const StrideMats& pm;
    std::vector<Int> f1, f2, b1, b2;

    ZeroProbe(Session& s, const Int& M_, const Int& r_)
        : ss(s), M(M_), r(r_), cap(to_long(s.cfg.zero_search_cap, "zero search cap")),
          pm(s.stride_mats(M_)) {
        f1 = state_mod(ss.root, r, ss.q1);
        f2 = state_mod(ss.root, r, ss.q2);
        b1 = f1;
        b2 = f2;
    }

    bool exhausted() const { return t > 2 * cap; }

    static Int step_state(std::vector<Int>& st, const MatZ& P, const Int& q) {
        st = mat_vec(P, st);
        for (Int& x : st) x = mod_pos(x, q);
        return st.back();
    }

    std::optional<Int> step() {
        Int k;
        Int v1, v2;
        if (t == 0 || t % 2 == 1) {
            k = fpos;
            v1 = f1.back();
            v2 = f2.back();
            step_state(f1, pm.P1, ss.q1);
            step_state(f2, pm.P2, ss.q2);
            fpos += 1;
        } else {
            v1 = step_state(b1, pm.P1i, ss.q1);
            v2 = step_state(b2, pm.P2i, ss.q2);
            bpos -= 1;
            k = bpos;
        }
        t += 1;
        if (v1 == 0 && v2 == 0) {
            Int n = r + M * k;
            if (term_at(ss.root, n) == 0) return n;
        }
        return std::nullopt;
    }
};

std::optional<ModulusWitness> try_modulus(Session& ss, const Int& M, const Int& r, long m) {
    if (gcd(Int(m), ss.cd) != 1) return std::nullopt;
    auto it = ss.orbits.find(m);
    if (it == ss.orbits.end()) {
        auto orb = orbit_mod(ss.root, Int(m), ss.cfg.period_scan_cap);
        std::optional<Session::OrbitInfo> info;
        if (orb) {
            info.emplace();
            info->base = orb->base;
            info->period = orb->period;
            for (long i = 0; i < static_cast<long>(orb->values.size()); i++)
                if (orb->values[static_cast<size_t>(i)] == 0) info->zero_pos.push_back(i);
        }
        it = ss.orbits.emplace(m, std::move(info)).first;
    }
    if (!it->second) return std::nullopt;
    const Session::OrbitInfo& orb = *it->second;
    const Int& piu = orb.period;
    Int g = gcd(M, piu);
    // the class visits exactly the orbit positions congruent to r mod g
    Int idx0 = mod_pos(r - orb.base, g);
    for (long z : orb.zero_pos)
        if (mod_pos(Int(z) - idx0, g) == 0) return std::nullopt;
    return ModulusWitness{Int(m), piu / g};
}

struct JumpData {
    Int M, p, L;
    long nu = 0, sum_valuation = 0, j0 = 0, terms = 0;
    Int window_scale{1};
    std::vector<SymbolicZeroProof> proofs;
};

struct SymPack {
    bool built = false;
    SplitField sf;
    std::vector<PolyQ> alphas;
    RelationBasis rb;
    Int dw{1};
};

long default_term_budget(const Int& p, long dy) {
    Int k = Int(4) * Int(16 + dy) * (p - 1) / (p - 2) + 64;
    if (k > (Int(1) << 20)) k = Int(1) << 20;
    return k.get_si();
}

bool window_all_zero(const SequenceSpec& s) {
    for (const Rat& v : s.initial)
        if (v != 0) return false;
    return true;
}

JumpData jump_at(Session& ss, const Int& c, const Int& S) {
    const Int& p = ss.jump_prime();
    Int L = lcm(S, ss.matrix_order(p));
    long d = ss.root.order();

    std::vector<char> proven(static_cast<size_t>(d), 0);
    std::vector<std::optional<FjOutcome>> verdict(static_cast<size_t>(d));

    SymPack sym;
    auto ensure_sym = [&]() {
        if (sym.built) return;
        if (ss.clock.expired())
            throw GiveUp{"time budget exhausted before zero proofs at center " + c.get_str()};
        if (L > ss.cfg.symbolic_stride_cap)
            throw GiveUp{"symbolic zero proofs at center " + c.get_str() + " need stride " +
                         L.get_str() + ", beyond the configured cap"};
        SequenceSpec ymin = minimal_recurrence(subsequence_spec(ss.root, L, c));
        if (window_all_zero(ymin))
            throw InternalError("nondegenerate sequence vanished along a whole progression");
        if (ymin.order() < 2) throw InternalError("subsequence through a zero cannot be geometric");
        PolyQ gy = ymin.rec.char_poly();
        try {
            sym.sf = splitting_field(gy);
        } catch (const ResourceLimit& e) {
            throw GiveUp{std::string("splitting field too large at center ") + c.get_str() + ": " + e.what()};
        }
        SequenceSpec ys = with_integral_window(ymin, &sym.dw);
        sym.alphas = exp_poly_coefficients(ys, sym.sf.field, sym.sf.roots);
        sym.rb = multiplicative_relations(sym.sf.roots, sym.sf.field, ss.cfg.relation_exponent_cap);
        sym.built = true;
    };

    long budget = ss.cfg.max_terms > 0 ? ss.cfg.max_terms : default_term_budget(p, d);
    long jc = 0;
    long terms_used = 0, sumval = 0;
    Int window_scale{1};
    for (long round = 0; jc == 0; round++) {
        SeriesEngine eng(ss.root, c, L, p, budget + 8);
        window_scale = eng.scale();
        if (eng.term(0) != 0) throw InternalError("series center is not a zero");
        std::vector<JumpTracker> trk;
        trk.reserve(static_cast<size_t>(d - 1));
        for (long j = 1; j < d; j++) trk.emplace_back(j, p);
        auto tracker = [&](long j) -> JumpTracker& { return trk[static_cast<size_t>(j - 1)]; };
        std::vector<char> alive(static_cast<size_t>(d), 1);
        alive[0] = 0;
        for (long j = 1; j < d; j++)
            if (proven[static_cast<size_t>(j)]) alive[static_cast<size_t>(j)] = 0;
        long K = 0;
        while (K < budget && jc == 0) {
            K += 1;
            if ((K & 15) == 0 && ss.clock.expired())
                throw GiveUp{"time budget exhausted during series analysis at center " + c.get_str()};
            const Int& wk = eng.term(K);
            for (long j = 1; j < d; j++)
                if (alive[static_cast<size_t>(j)]) tracker(j).extend(eng.stirling(K, j), wk);
            long cand = 0;
            for (long j = 1; j < d; j++) {
                if (alive[static_cast<size_t>(j)] && tracker(j).decided()) {
                    cand = j;
                    break;
                }
            }
            if (cand == 0) continue;
            bool stalled = false;
            for (long j2 = 1; j2 < cand; j2++) {
                if (proven[static_cast<size_t>(j2)]) continue;
                ensure_sym();
                auto& v = verdict[static_cast<size_t>(j2)];
                if (!v) v = f_j_identically_zero(sym.alphas, sym.rb, j2, L, sym.sf.field);
                if (v->zero) {
                    proven[static_cast<size_t>(j2)] = 1;
                    alive[static_cast<size_t>(j2)] = 0;
                } else {
                    stalled = true;
                    break;
                }
            }
            if (!stalled) jc = cand;
        }
        if (jc != 0) {
            sumval = *tracker(jc).valuation();
            terms_used = tracker(jc).K();
            break;
        }
        if (round >= ss.cfg.term_retry_doublings) {
            std::string why = "series analysis undecided after " + std::to_string(K) +
                              " terms at center " + c.get_str();
            if (sym.built && sym.rb.capped) why += " (relation search was capped)";
            throw GiveUp{std::move(why)};
        }
        budget *= 2;
    }

    JumpData out;
    out.p = p;
    out.L = L;
    out.j0 = jc;
    out.sum_valuation = sumval;
    out.terms = terms_used;
    out.window_scale = window_scale;

    long e = 1;
    for (long j = jc + 1;; j++) {
        long beta = tail_bound(j - 1, p);
        if (beta > out.sum_valuation) break;
        long need = (out.sum_valuation - beta) / (j - jc) + 1;
        if (need > e) e = need;
    }
    out.nu = e - 1;
    out.M = L * pow_int(p, static_cast<unsigned long>(e));

    for (long j2 = 1; j2 < jc; j2++) {
        if (!proven[static_cast<size_t>(j2)]) throw InternalError("missing zero proof below j0");
        SymbolicZeroProof pr;
        pr.j = j2;
        pr.h = sym.sf.field.h;
        pr.roots = sym.sf.roots;
        pr.alphas = sym.alphas;
        pr.alpha_scale = sym.dw;
        pr.independent = sym.rb.independent;
        for (const Relation& rel : sym.rb.relations)
            pr.relations.push_back({rel.index, rel.m, rel.n});
        out.proofs.push_back(std::move(pr));
    }
    return out;
}

// v_p of u(n) read off mod p^(lvl+1); nullopt when it is at least lvl+1
std::optional<long> class_valuation(Session& ss, const Int& n, long lvl) {
    const Int& p = ss.jump_prime();
    Int q = pow_int(p, static_cast<unsigned long>(lvl + 1));
    Int v = state_mod(ss.root, n, q).back();
    if (v == 0) return std::nullopt;
    long e = 0;
    while (v % p == 0) {
        v /= p;
        e += 1;
    }
    return e;
}

void solve_class(Session& ss, const Int& M, const Int& r, long depth) {
    if (depth > ss.cfg.recursion_depth_cap)
        throw GiveUp{"recursion depth cap hit at modulus " + M.get_str()};
    ss.max_depth = std::max(ss.max_depth, depth);

    ZeroProbe probe(ss, M, r);
    long next_m = 2;
    std::optional<Int> center;
    std::optional<ModulusWitness> witness;
    while (!center && !witness) {
        if (ss.clock.expired())
            throw GiveUp{"time budget exhausted while searching class (" + M.get_str() + ", " + r.get_str() + ")"};
        bool probing = !probe.exhausted();
        bool scanning = next_m <= ss.cfg.modulus_cap;
        if (!probing && !scanning)
            throw GiveUp{"class (" + M.get_str() + ", " + r.get_str() +
                         ") exhausted both the zero probe and the modulus cap"};
        if (probing) center = probe.step();
        if (!center && scanning) witness = try_modulus(ss, M, r, next_m++);
    }

    if (witness) {
        ss.entries.push_back({M, mod_pos(r, M), std::move(*witness)});
        return;
    }

    const Int& c = *center;
    JumpData jd = jump_at(ss, c, M);
    ss.zeros.push_back(c);
    ss.max_jump = std::max(ss.max_jump, jd.M);

    ValuationWitness vw;
    vw.center = c;
    vw.p = jd.p;
    vw.L = jd.L;
    vw.nu = jd.nu;
    vw.sum_valuation = jd.sum_valuation;
    vw.j0 = jd.j0;
    vw.terms = jd.terms;
    vw.window_scale = jd.window_scale;
    vw.zero_proofs = std::move(jd.proofs);
    ss.entries.push_back({jd.M, mod_pos(c, jd.M), std::move(vw)});

    Int lf = jd.L / M;
    for (Int j = 1; j < lf; j++)
        solve_class(ss, jd.L, mod_pos(c + M * j, jd.L), depth + 1);

    // sibling cosets of the center mod p: one valuation reading settles each,
    // splitting p ways whenever the reading saturates its level
    long base = jd.nu + 1;
    Int pe = jd.M / jd.L;
    std::vector<std::pair<Int, long>> pend;
    for (Int i = 1; i < pe; i++) pend.push_back({mod_pos(c + jd.L * i, jd.M), base});
    long ticks = 0;
    while (!pend.empty()) {
        if ((++ticks & 63) == 0 && ss.clock.expired())
            throw GiveUp{"time budget exhausted while certifying cosets around " + c.get_str()};
        auto [n, lvl] = pend.back();
        pend.pop_back();
        Int Mn = jd.L * pow_int(jd.p, static_cast<unsigned long>(lvl));
        std::optional<long> v = class_valuation(ss, n, lvl);
        if (v) {
            ss.entries.push_back({Mn, n, EvaluationWitness{jd.p, jd.L, lvl, *v}});
            continue;
        }
        if (lvl >= base + 6) {
            solve_class(ss, Mn, n, depth + 1);
            continue;
        }
        for (Int s = 0; s < jd.p; s++) pend.push_back({mod_pos(n + Mn * s, Mn * jd.p), lvl + 1});
    }
}

}  // namespace

std::vector<Int> zero_search(const SequenceSpec& s, const Int& cap) {
    if (cap < 0) throw InvalidArgument("zero search cap must be nonnegative");
    long capl = to_long(cap, "zero search cap");
    SequenceSpec w = is_integral(s) ? s : normalize_to_integer(s);
    Int cd = w.rec.coeffs.back().get_num();
    auto [q1, q2] = screening_primes(cd);
    MatZ A = companion_matrix(w.rec);
    MatZ A1 = mat_mod(A, q1), A2 = mat_mod(A, q2);
    MatZ A1i = mat_inverse_mod(A1, q1), A2i = mat_inverse_mod(A2, q2);

    std::vector<Int> out;
    auto confirm = [&](const Int& n) {
        if (term_at(w, n) == 0) out.push_back(n);
    };

    std::vector<Int> f1 = state_mod(w, 0, q1), f2 = state_mod(w, 0, q2);
    for (long n = 0; n <= capl; n++) {
        if (f1.back() == 0 && f2.back() == 0) confirm(Int(n));
        ZeroProbe::step_state(f1, A1, q1);
        ZeroProbe::step_state(f2, A2, q2);
    }
    std::vector<Int> b1 = state_mod(w, 0, q1), b2 = state_mod(w, 0, q2);
    for (long n = -1; n >= -capl; n--) {
        Int v1 = ZeroProbe::step_state(b1, A1i, q1);
        Int v2 = ZeroProbe::step_state(b2, A2i, q2);
        if (v1 == 0 && v2 == 0) confirm(Int(n));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<ModulusWitness> modulus_witness_search(const SequenceSpec& s, const Int& cap,
                                                     long period_scan_cap) {
    if (!is_integral(s)) throw InvalidArgument("modulus search needs an integral spec");
    Int cd = s.rec.coeffs.back().get_num();
    for (Int m = 2; m <= cap; m++) {
        if (gcd(m, cd) != 1) continue;
        auto orb = orbit_mod(s, m, period_scan_cap);
        if (!orb) continue;
        bool clean = true;
        for (const Int& v : orb->values) {
            if (v == 0) {
                clean = false;
                break;
            }
        }
        if (clean) return ModulusWitness{m, orb->period};
    }
    return std::nullopt;
}

BiSkolemResult bi_skolem_decide(const SequenceSpec& s, const SolveConfig& config) {
    validate_config(config);
    if (classify(s) != LrsClass::SimpleNonDegenerate)
        throw InvalidArgument("bi-skolem decision needs a simple nondegenerate sequence");
    Deadline clock(config.time_budget_seconds);
    Session ss(s, config, clock);

    BiSkolemResult out;
    ZeroProbe probe(ss, Int(1), Int(0));
    long next_m = 2;
    while (true) {
        if (ss.clock.expired()) {
            out.diagnostic = "time budget exhausted";
            return out;
        }
        bool probing = !probe.exhausted();
        bool scanning = next_m <= config.modulus_cap;
        if (!probing && !scanning) {
            out.diagnostic = "zero probe and modulus cap both exhausted";
            return out;
        }
        if (probing) {
            if (auto z = probe.step()) {
                out.kind = BiSkolemResult::Kind::HasZero;
                out.n0 = *z;
                return out;
            }
        }
        if (scanning) {
            if (auto w = try_modulus(ss, Int(1), Int(0), next_m++)) {
                out.kind = BiSkolemResult::Kind::NoZero;
                out.witness = *w;
                return out;
            }
        }
    }
}

Outcome find_all_zeros(const SequenceSpec& s, const SolveConfig& config) {
    validate_config(config);
    Deadline clock(config.time_budget_seconds);
    Outcome out;

    LrsClass cls = classify(s);
    if (cls != LrsClass::SimpleNonDegenerate) {
        switch (cls) {
            case LrsClass::IdenticallyZero: out.kind = OutcomeKind::IdenticallyZero; break;
            case LrsClass::NotSimple: out.kind = OutcomeKind::NotSimple; break;
            default: out.kind = OutcomeKind::Degenerate; break;
        }
        out.stats.elapsed_seconds = clock.elapsed();
        return out;
    }

    Session ss(s, config, clock);
    try {
        solve_class(ss, Int(1), Int(0), 1);
    } catch (const GiveUp& g) {
        out.kind = OutcomeKind::Timeout;
        out.diagnostic = g.why;
        out.stats.tree_depth = ss.max_depth;
        out.stats.max_jump = ss.max_jump;
        out.stats.elapsed_seconds = clock.elapsed();
        return out;
    }

    std::sort(ss.zeros.begin(), ss.zeros.end());
    out.kind = OutcomeKind::Solved;
    out.zeros.reserve(ss.zeros.size());
    for (const Int& z : ss.zeros) out.zeros.push_back(s.to_original(z));

    SequenceSpec echo = rebase_to_zero(s);
    out.certificate.coefficients = echo.rec.coeffs;
    out.certificate.initial = echo.initial;
    out.certificate.zeros = ss.zeros;
    out.certificate.entries = std::move(ss.entries);

    out.stats.tree_depth = ss.max_depth;
    out.stats.max_jump = ss.max_jump;
    out.stats.zeros_count = static_cast<long>(ss.zeros.size());
    out.stats.elapsed_seconds = clock.elapsed();
    return out;
}

SequenceSpec random_instance(long order, long lo, long hi, std::uint64_t seed) {
    if (order < 1) throw InvalidArgument("order must be positive");
    if (lo > hi) throw InvalidArgument("empty coefficient range");
    if (lo == 0 && hi == 0)
        throw InvalidArgument("range admits no nonzero trailing coefficient");
    std::uint64_t st = seed;
    std::uint64_t width = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = width == 0 ? ~0ULL : ~0ULL - ~0ULL % width;
    auto draw = [&]() -> long {
        for (;;) {
            std::uint64_t v = splitmix64(st);
            if (width != 0 && v >= limit) continue;
            return lo + static_cast<long>(width == 0 ? v : v % width);
        }
    };
    std::vector<Rat> coeffs(static_cast<size_t>(order)), init(static_cast<size_t>(order));
    for (long i = 0; i < order; i++) coeffs[static_cast<size_t>(i)] = Rat(draw());
    while (coeffs.back() == 0) coeffs.back() = Rat(draw());
    for (long i = 0; i < order; i++) init[static_cast<size_t>(i)] = Rat(draw());
    return SequenceSpec(Recurrence(std::move(coeffs)), std::move(init), Int(0));
}

}  // namespace skolem
