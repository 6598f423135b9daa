#include "skolemkit/numfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <utility>

namespace skolem {

namespace {

PolyQ poly_const(const Rat& r) { return PolyQ({r}); }

}  // namespace

/* ---------- arithmetic in Q[Y]/(h) ---------- */

PolyQ fe_reduce(const PolyQ& a, const NumberField& K) {
    if (K.h.degree() < 1) throw InvalidArgument("fe_reduce: field polynomial must be nonconstant");
    if (a.degree() < K.h.degree()) return a;
    return divrem(a, K.h).second;
}

PolyQ fe_add(const PolyQ& a, const PolyQ& b, const NumberField& K) { return fe_reduce(a + b, K); }

PolyQ fe_sub(const PolyQ& a, const PolyQ& b, const NumberField& K) { return fe_reduce(a - b, K); }

PolyQ fe_mul(const PolyQ& a, const PolyQ& b, const NumberField& K) { return fe_reduce(a * b, K); }

PolyQ fe_inv(const PolyQ& a, const NumberField& K) {
    PolyQ ar = fe_reduce(a, K);
    if (ar.is_zero()) throw InvalidArgument("fe_inv: division by zero");
    PolyQ r0 = K.h, r1 = ar;
    PolyQ t0, t1 = poly_const(Rat(1));
    while (!r1.is_zero()) {
        auto qr = divrem(r0, r1);
        PolyQ t2 = t0 - qr.first * t1;
        r0 = r1;
        r1 = qr.second;
        t0 = t1;
        t1 = t2;
    }
    if (r0.degree() != 0) throw InternalError("fe_inv: field polynomial is reducible");
    return fe_reduce((Rat(1) / r0.lc()) * t0, K);
}

PolyQ fe_pow(const PolyQ& a, const Int& e, const NumberField& K) {
    if (e < 0) return fe_pow(fe_inv(a, K), Int(-e), K);
    PolyQ base = fe_reduce(a, K);
    PolyQ acc = poly_const(Rat(1));
    Int k = e;
    while (k > 0) {
        if (k % 2 == 1) acc = fe_mul(acc, base, K);
        base = fe_mul(base, base, K);
        k /= 2;
    }
    return acc;
}

PolyQ fe_eval_poly(const PolyQ& f, const PolyQ& x, const NumberField& K) {
    PolyQ acc;
    for (int i = f.degree(); i >= 0; i--) {
        acc = fe_add(fe_mul(acc, x, K), poly_const(f.coeff(i)), K);
    }
    return acc;
}

namespace {

/* ---------- interpolation ---------- */

PolyQ newton_interp(const std::vector<Rat>& xs, std::vector<Rat> dd) {
    size_t n = xs.size();
    for (size_t k = 1; k < n; k++) {
        for (size_t i = n - 1; i >= k; i--) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - k]);
            if (i == k) break;
        }
    }
    PolyQ acc;
    PolyQ basis = poly_const(Rat(1));
    for (size_t k = 0; k < n; k++) {
        acc = acc + dd[k] * basis;
        basis = basis * PolyQ({-xs[k], Rat(1)});
    }
    return acc;
}

/* ---------- integer polynomials, ascending ---------- */

std::vector<Int> ipoly_trim(std::vector<Int> f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int ipoly_degree(const std::vector<Int>& f) { return static_cast<int>(f.size()) - 1; }

std::vector<Int> ipoly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Int> r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++) r[i + j] += a[i] * b[j];
    return ipoly_trim(r);
}

std::pair<std::vector<Int>, std::vector<Int>> ipoly_divrem_monic(std::vector<Int> a,
                                                                 const std::vector<Int>& b) {
    int db = ipoly_degree(b);
    if (db < 0 || b.back() != 1) throw InternalError("ipoly_divrem_monic: divisor must be monic");
    std::vector<Int> q;
    if (ipoly_degree(a) >= db) q.assign(static_cast<size_t>(ipoly_degree(a) - db + 1), Int(0));
    while (ipoly_degree(a) >= db) {
        int da = ipoly_degree(a);
        Int c = a.back();
        q[static_cast<size_t>(da - db)] = c;
        for (int k = 0; k <= db; k++) a[static_cast<size_t>(da - db + k)] -= c * b[static_cast<size_t>(k)];
        a = ipoly_trim(a);
    }
    return {ipoly_trim(q), a};
}

/* ---------- factorization over F_p ---------- */

bool polym_less(const PolyM& a, const PolyM& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

void equal_degree_split(const PolyM& g, long e, const Int& p, std::vector<PolyM>& out) {
    if (polym_degree(g) == e) {
        out.push_back(polym_make_monic(g, p));
        return;
    }
    if (e == 1) {
        std::vector<Int> rs = roots_mod_p(g, p);
        std::sort(rs.begin(), rs.end());
        for (const Int& r : rs) out.push_back(polym_trim({mod_pos(-r, p), Int(1)}));
        return;
    }
    Int ex = (pow_int(p, static_cast<unsigned long>(e)) - 1) / 2;
    for (Int idx = p;; idx++) {
        if (idx > 1000000) throw InternalError("equal_degree_split: no splitter found");
        PolyM base;
        Int v = idx;
        while (v > 0) {
            base.push_back(v % p);
            v /= p;
        }
        base = polym_trim(base);
        if (polym_degree(base) < 1) continue;
        PolyM shared = polym_gcd(base, g, p);
        if (polym_degree(shared) > 0 && polym_degree(shared) < polym_degree(g)) {
            equal_degree_split(shared, e, p, out);
            equal_degree_split(polym_divrem(g, shared, p).first, e, p, out);
            return;
        }
        PolyM w = polym_powmod(base, ex, g, p);
        PolyM d = polym_gcd(polym_sub(w, PolyM{Int(1)}, p), g, p);
        if (polym_degree(d) > 0 && polym_degree(d) < polym_degree(g)) {
            equal_degree_split(d, e, p, out);
            equal_degree_split(polym_divrem(g, d, p).first, e, p, out);
            return;
        }
    }
}

// monic irreducible factors of a squarefree monic f over F_p, sorted
std::vector<PolyM> factor_modp(PolyM f, const Int& p) {
    f = polym_make_monic(f, p);
    PolyM x{Int(0), Int(1)};
    PolyM h = x;
    std::vector<std::pair<long, PolyM>> parts;
    long e = 0;
    while (polym_degree(f) > 0) {
        e++;
        if (2 * e > polym_degree(f)) {
            parts.emplace_back(polym_degree(f), f);
            break;
        }
        h = polym_powmod(h, p, f, p);
        PolyM g = polym_gcd(polym_sub(h, x, p), f, p);
        if (polym_degree(g) > 0) {
            parts.emplace_back(e, g);
            f = polym_divrem(f, g, p).first;
            h = polym_rem(h, f, p);
        }
    }
    std::vector<PolyM> out;
    for (const auto& part : parts) equal_degree_split(part.second, part.first, p, out);
    std::sort(out.begin(), out.end(), polym_less);
    return out;
}

/* ---------- Hensel lifting ---------- */

void hensel_pair(const std::vector<Int>& f, PolyM& g, PolyM& h, const Int& p, long K) {
    PolyM gbar(g), hbar(h);
    for (Int& c : gbar) c = mod_pos(c, p);
    for (Int& c : hbar) c = mod_pos(c, p);
    gbar = polym_trim(gbar);
    hbar = polym_trim(hbar);
    PolyM s, t;
    PolyM gg = polym_gcdext(gbar, hbar, p, s, t);
    if (polym_degree(gg) != 0) throw InternalError("hensel_pair: factors share a root mod p");
    Int inv = mod_inverse(gg[0], p);
    s = polym_scale(inv, s, p);
    t = polym_scale(inv, t, p);
    Int q = p;
    for (long i = 1; i < K; i++) {
        Int qn = q * p;
        std::vector<Int> gh = ipoly_mul(g, h);
        size_t n = std::max(f.size(), gh.size());
        PolyM ebar(n, Int(0));
        for (size_t k = 0; k < n; k++) {
            Int fv = k < f.size() ? f[k] : Int(0);
            Int gv = k < gh.size() ? gh[k] : Int(0);
            Int diff = fv - gv;
            if (diff % q != 0) throw InternalError("hensel_pair: drift off the modulus");
            ebar[k] = mod_pos(diff / q, p);
        }
        ebar = polym_trim(ebar);
        PolyM a = polym_divrem(polym_mul(t, ebar, p), gbar, p).second;
        PolyM num = polym_sub(ebar, polym_mul(a, hbar, p), p);
        auto bq = polym_divrem(num, gbar, p);
        if (!bq.second.empty()) throw InternalError("hensel_pair: correction not divisible");
        PolyM b = bq.first;
        if (polym_degree(b) >= polym_degree(hbar)) throw InternalError("hensel_pair: degree overflow");
        g.resize(std::max(g.size(), a.size()), Int(0));
        for (size_t k = 0; k < a.size(); k++) g[k] = mod_pos(g[k] + q * a[k], qn);
        h.resize(std::max(h.size(), b.size()), Int(0));
        for (size_t k = 0; k < b.size(); k++) h[k] = mod_pos(h[k] + q * b[k], qn);
        q = qn;
    }
}

std::vector<PolyM> hensel_list(const std::vector<Int>& f, const std::vector<PolyM>& fac,
                               const Int& p, long K, const Int& pK) {
    if (fac.size() == 1) {
        PolyM r(f.size());
        for (size_t k = 0; k < f.size(); k++) r[k] = mod_pos(f[k], pK);
        return {polym_trim(r)};
    }
    size_t half = fac.size() / 2;
    PolyM G{Int(1)}, H{Int(1)};
    for (size_t i = 0; i < fac.size(); i++) {
        if (i < half)
            G = polym_mul(G, fac[i], p);
        else
            H = polym_mul(H, fac[i], p);
    }
    hensel_pair(f, G, H, p, K);
    std::vector<PolyM> out =
        hensel_list(G, std::vector<PolyM>(fac.begin(), fac.begin() + static_cast<long>(half)), p, K, pK);
    std::vector<PolyM> right =
        hensel_list(H, std::vector<PolyM>(fac.begin() + static_cast<long>(half), fac.end()), p, K, pK);
    out.insert(out.end(), right.begin(), right.end());
    return out;
}

/* ---------- factorization over Z and Q ---------- */

Int lm_bound(const std::vector<Int>& f) {
    Int s(0);
    for (const Int& c : f) s += c * c;
    Int r = sqrt(s);
    if (r * r < s) r++;
    return pow_int(Int(2), static_cast<unsigned long>(ipoly_degree(f))) * r;
}

Int symmetric_rep(const Int& c, const Int& m) {
    Int r = mod_pos(c, m);
    if (2 * r > m) r -= m;
    return r;
}

bool next_combination(std::vector<long>& idx, long n) {
    long k = static_cast<long>(idx.size());
    for (long i = k - 1; i >= 0; i--) {
        if (idx[static_cast<size_t>(i)] < n - k + i) {
            idx[static_cast<size_t>(i)]++;
            for (long j = i + 1; j < k; j++) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

// irreducible monic factors of a squarefree monic integer polynomial
std::vector<std::vector<Int>> zassenhaus(std::vector<Int> f) {
    std::vector<std::vector<Int>> out;
    f = ipoly_trim(f);
    if (ipoly_degree(f) <= 1) {
        out.push_back(f);
        return out;
    }
    PolyQ fq = poly_from_int_coeffs(f);
    Rat disc = discriminant(fq);
    if (disc == 0) throw InvalidArgument("zassenhaus: input must be squarefree");
    Int dn = abs(disc.get_num());
    Int p(3);
    while (dn % p == 0) p = next_prime_above(p);
    std::vector<PolyM> fac = factor_modp(polym_from(fq, p), p);
    if (fac.size() == 1) {
        out.push_back(f);
        return out;
    }
    Int B = lm_bound(f);
    long K = 1;
    Int pK = p;
    while (pK <= 2 * B) {
        pK *= p;
        K++;
    }
    std::vector<PolyM> lifted = hensel_list(f, fac, p, K, pK);
    std::vector<long> alive(lifted.size());
    for (size_t i = 0; i < alive.size(); i++) alive[i] = static_cast<long>(i);
    std::vector<Int> cur = f;
    long sz = 1;
    while (2 * sz <= static_cast<long>(alive.size())) {
        std::vector<long> comb(static_cast<size_t>(sz));
        for (long i = 0; i < sz; i++) comb[static_cast<size_t>(i)] = i;
        bool extracted = false;
        do {
            Int cc(1);
            for (long ci : comb) cc = mod_pos(cc * lifted[static_cast<size_t>(alive[static_cast<size_t>(ci)])][0], pK);
            cc = symmetric_rep(cc, pK);
            if (cur[0] != 0 && (cc == 0 || cur[0] % cc != 0)) continue;
            PolyM prod{Int(1)};
            for (long ci : comb) prod = polym_mul(prod, lifted[static_cast<size_t>(alive[static_cast<size_t>(ci)])], pK);
            std::vector<Int> cand(prod.size());
            for (size_t k = 0; k < prod.size(); k++) cand[k] = symmetric_rep(prod[k], pK);
            cand = ipoly_trim(cand);
            auto qr = ipoly_divrem_monic(cur, cand);
            if (!qr.second.empty()) continue;
            out.push_back(cand);
            cur = qr.first;
            std::vector<long> next_alive;
            for (size_t i = 0; i < alive.size(); i++) {
                bool in = false;
                for (long ci : comb)
                    if (ci == static_cast<long>(i)) in = true;
                if (!in) next_alive.push_back(alive[i]);
            }
            alive = next_alive;
            extracted = true;
            break;
        } while (next_combination(comb, static_cast<long>(alive.size())));
        if (!extracted) sz++;
    }
    if (ipoly_degree(cur) > 0) out.push_back(cur);
    return out;
}

// monic irreducible factors over Q, deterministic order
std::vector<PolyQ> factor_monic_rational(const PolyQ& fin) {
    PolyQ f = make_monic(fin);
    int n = f.degree();
    if (n < 1) throw InvalidArgument("factor_monic_rational: need positive degree");
    if (n == 1) return {f};
    Int l(1);
    for (int i = 0; i <= n; i++) l = lcm(l, f.coeff(i).get_den());
    std::vector<Int> F(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; i++) {
        Rat v = f.coeff(i) * Rat(pow_int(l, static_cast<unsigned long>(n - i)));
        v.canonicalize();
        if (v.get_den() != 1) throw InternalError("factor_monic_rational: scaling failed");
        F[static_cast<size_t>(i)] = v.get_num();
    }
    std::vector<PolyQ> out;
    for (const auto& G : zassenhaus(F)) {
        int m = ipoly_degree(G);
        std::vector<Rat> c(static_cast<size_t>(m) + 1);
        for (int i = 0; i <= m; i++) {
            c[static_cast<size_t>(i)] =
                Rat(G[static_cast<size_t>(i)] * pow_int(l, static_cast<unsigned long>(i)),
                    pow_int(l, static_cast<unsigned long>(m)));
            c[static_cast<size_t>(i)].canonicalize();
        }
        out.push_back(PolyQ(c));
    }
    return out;
}

/* ---------- polynomials with coefficients in K ---------- */

using KPoly = std::vector<PolyQ>;

KPoly kp_trim(KPoly f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

long kp_deg(const KPoly& f) { return static_cast<long>(f.size()) - 1; }

KPoly kp_from_rational(const PolyQ& f) {
    KPoly r(static_cast<size_t>(f.degree() + 1));
    for (int i = 0; i <= f.degree(); i++) r[static_cast<size_t>(i)] = poly_const(f.coeff(i));
    return kp_trim(r);
}

PolyQ kp_to_rational(const KPoly& f) {
    std::vector<Rat> c(f.size());
    for (size_t i = 0; i < f.size(); i++) {
        if (f[i].degree() > 0) throw InternalError("kp_to_rational: nonconstant coefficient");
        c[i] = f[i].coeff(0);
    }
    return PolyQ(c);
}

KPoly kp_add(const KPoly& a, const KPoly& b, const NumberField& K) {
    KPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); i++) {
        PolyQ av = i < a.size() ? a[i] : PolyQ();
        PolyQ bv = i < b.size() ? b[i] : PolyQ();
        r[i] = fe_add(av, bv, K);
    }
    return kp_trim(r);
}

KPoly kp_mul(const KPoly& a, const KPoly& b, const NumberField& K) {
    if (a.empty() || b.empty()) return {};
    KPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++) r[i + j] = fe_add(r[i + j], fe_mul(a[i], b[j], K), K);
    return kp_trim(r);
}

std::pair<KPoly, KPoly> kp_divrem(KPoly a, const KPoly& b, const NumberField& K) {
    if (b.empty()) throw InvalidArgument("kp_divrem: division by zero");
    PolyQ inv = fe_inv(b.back(), K);
    long db = kp_deg(b);
    KPoly q;
    if (kp_deg(a) >= db) q.assign(static_cast<size_t>(kp_deg(a) - db + 1), PolyQ());
    while (kp_deg(a) >= db) {
        long da = kp_deg(a);
        PolyQ c = fe_mul(a.back(), inv, K);
        q[static_cast<size_t>(da - db)] = c;
        for (long k = 0; k <= db; k++) {
            size_t pos = static_cast<size_t>(da - db + k);
            a[pos] = fe_sub(a[pos], fe_mul(c, b[static_cast<size_t>(k)], K), K);
        }
        a = kp_trim(a);
    }
    return {kp_trim(q), a};
}

KPoly kp_monic(KPoly f, const NumberField& K) {
    if (f.empty()) return f;
    PolyQ inv = fe_inv(f.back(), K);
    for (PolyQ& c : f) c = fe_mul(c, inv, K);
    return f;
}

KPoly kp_gcd(KPoly a, KPoly b, const NumberField& K) {
    a = kp_trim(a);
    b = kp_trim(b);
    while (!b.empty()) {
        KPoly r = kp_divrem(a, b, K).second;
        a = b;
        b = r;
    }
    return a.empty() ? a : kp_monic(a, K);
}

// N(X) = Res_Y(h(Y), f(X - cY)), by interpolation
PolyQ norm_poly(const KPoly& f, const NumberField& K, long c) {
    long D = K.degree();
    long n = kp_deg(f);
    long npts = D * n + 1;
    std::vector<Rat> xs(static_cast<size_t>(npts)), ys(static_cast<size_t>(npts));
    for (long k = 0; k < npts; k++) {
        long v = (k + 1) / 2;
        long x0 = (k % 2 == 1) ? v : -v;
        xs[static_cast<size_t>(k)] = Rat(x0);
        PolyQ base({Rat(x0), Rat(-c)});
        PolyQ G;
        for (long j = n; j >= 0; j--) G = G * base + f[static_cast<size_t>(j)];
        ys[static_cast<size_t>(k)] = resultant(K.h, G);
    }
    return newton_interp(xs, ys);
}

// monic irreducible factors over K, deterministic order
std::vector<KPoly> factor_over_field(const KPoly& fin, const NumberField& K) {
    KPoly f = kp_monic(kp_trim(fin), K);
    long n = kp_deg(f);
    if (n < 1) throw InvalidArgument("factor_over_field: need positive degree");
    if (n == 1) return {f};
    if (K.degree() == 1) {
        std::vector<KPoly> out;
        for (const PolyQ& g : factor_monic_rational(kp_to_rational(f))) out.push_back(kp_from_rational(g));
        return out;
    }
    long c = 1;
    PolyQ N;
    for (;; c++) {
        if (c > 200) throw InternalError("factor_over_field: no squarefree norm shift");
        N = norm_poly(f, K, c);
        if (poly_gcd(N, derivative(N)).degree() == 0) break;
    }
    std::vector<PolyQ> facN = factor_monic_rational(N);
    if (facN.size() == 1) return {f};
    PolyQ theta = fe_reduce(poly_x_power(1), K);
    KPoly shift_arg{fe_reduce(Rat(c) * theta, K), poly_const(Rat(1))};
    std::vector<KPoly> out;
    KPoly rem = f;
    for (const PolyQ& Nk : facN) {
        KPoly shifted;
        for (int i = Nk.degree(); i >= 0; i--) {
            shifted = kp_mul(shifted, shift_arg, K);
            shifted = kp_add(shifted, KPoly{poly_const(Nk.coeff(i))}, K);
        }
        KPoly G = kp_gcd(rem, shifted, K);
        if (kp_deg(G) >= 1) {
            out.push_back(G);
            rem = kp_divrem(rem, G, K).first;
        }
    }
    if (kp_deg(rem) != 0) throw InternalError("factor_over_field: factors do not exhaust input");
    return out;
}

/* ---------- tower construction ---------- */

struct Extension {
    NumberField field;
    PolyQ theta;  // old generator inside the new field
    long e = 0;
};

// adjoin a root of F (irreducible over K, degree >= 2)
Extension extend_field(const NumberField& K, const KPoly& F, long degree_cap) {
    long newdeg = K.degree() * kp_deg(F);
    if (newdeg > degree_cap) throw ResourceLimit("splitting_field: degree cap exceeded");
    for (long e = 1;; e++) {
        if (e > 200) throw InternalError("extend_field: no squarefree shift found");
        PolyQ M = norm_poly(F, K, e);
        if (poly_gcd(M, derivative(M)).degree() != 0) continue;
        NumberField Knew{M};
        PolyQ gamma = fe_reduce(poly_x_power(1), Knew);
        KPoly lin{gamma, poly_const(Rat(-e))};  // gamma - e T
        KPoly G;
        KPoly pw{poly_const(Rat(1))};
        for (long j = 0; j <= kp_deg(F); j++) {
            G = kp_add(G, kp_mul(kp_from_rational(F[static_cast<size_t>(j)]), pw, Knew), Knew);
            if (j < kp_deg(F)) pw = kp_mul(pw, lin, Knew);
        }
        KPoly g = kp_gcd(kp_from_rational(K.h), G, Knew);
        if (kp_deg(g) != 1) continue;
        PolyQ theta = fe_reduce(Rat(-1) * g[0], Knew);
        return {Knew, theta, e};
    }
}

Int rat_pow_den_free(const Int& b, long e) { return pow_int(b, static_cast<unsigned long>(e)); }

Rat rat_pow(const Rat& q, long e) {
    if (e == 0) return Rat(1);
    if (q == 0) return Rat(0);
    Rat r;
    if (e > 0)
        r = Rat(rat_pow_den_free(q.get_num(), e), rat_pow_den_free(q.get_den(), e));
    else
        r = Rat(rat_pow_den_free(q.get_den(), -e), rat_pow_den_free(q.get_num(), -e));
    r.canonicalize();
    return r;
}

/* ---------- relation search helpers ---------- */

std::vector<Int> coprime_base(const std::vector<Int>& pool) {
    std::vector<Int> base;
    for (const Int& v0 : pool) {
        Int v = abs(v0);
        if (v > 1) base.push_back(v);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < base.size() && !changed; i++) {
            for (size_t j = i + 1; j < base.size() && !changed; j++) {
                Int g = gcd(base[i], base[j]);
                if (g == 1) continue;
                if (base[i] == base[j]) {
                    base.erase(base.begin() + static_cast<long>(j));
                } else {
                    Int a = base[i] / g, b = base[j] / g;
                    base.erase(base.begin() + static_cast<long>(j));
                    base.erase(base.begin() + static_cast<long>(i));
                    if (g > 1) base.push_back(g);
                    if (a > 1) base.push_back(a);
                    if (b > 1) base.push_back(b);
                }
                changed = true;
            }
        }
    }
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    return base;
}

long extract_exps(Int& v, const Int& b) {
    long e = 0;
    while (v % b == 0) {
        v /= b;
        e++;
    }
    return e;
}

std::vector<Int> val_exps(const Rat& val, const std::vector<Int>& base) {
    std::vector<Int> out(base.size(), Int(0));
    Int num = abs(val.get_num());
    Int den = val.get_den();
    for (size_t i = 0; i < base.size(); i++) {
        out[i] = Int(extract_exps(num, base[i])) - Int(extract_exps(den, base[i]));
    }
    if (num != 1 || den != 1) throw InternalError("val_exps: base does not cover the value");
    return out;
}

struct SpanSolution {
    bool consistent = false;
    std::vector<Rat> particular;
    std::vector<std::vector<Rat>> kernel;
};

// solve sum_t x_t cols[t] = target over Q
SpanSolution solve_span(const std::vector<std::vector<Int>>& cols, const std::vector<Int>& target) {
    SpanSolution out;
    size_t nr = target.size(), nc = cols.size();
    if (nc == 0) {
        for (const Int& v : target)
            if (v != 0) return out;
        out.consistent = true;
        return out;
    }
    std::vector<std::vector<Rat>> M(nr, std::vector<Rat>(nc + 1, Rat(0)));
    for (size_t r = 0; r < nr; r++) {
        for (size_t c = 0; c < nc; c++) M[r][c] = Rat(cols[c][r]);
        M[r][nc] = Rat(target[r]);
    }
    std::vector<size_t> pcol;
    size_t row = 0;
    for (size_t col = 0; col < nc && row < nr; col++) {
        size_t pr = row;
        while (pr < nr && M[pr][col] == 0) pr++;
        if (pr == nr) continue;
        std::swap(M[row], M[pr]);
        Rat inv = Rat(1) / M[row][col];
        for (size_t c = col; c <= nc; c++) M[row][c] *= inv;
        for (size_t r = 0; r < nr; r++) {
            if (r == row || M[r][col] == 0) continue;
            Rat f = M[r][col];
            for (size_t c = col; c <= nc; c++) M[r][c] -= f * M[row][c];
        }
        pcol.push_back(col);
        row++;
    }
    for (size_t r = row; r < nr; r++)
        if (M[r][nc] != 0) return out;
    out.consistent = true;
    out.particular.assign(nc, Rat(0));
    for (size_t r = 0; r < row; r++) out.particular[pcol[r]] = M[r][nc];
    std::vector<char> isp(nc, 0);
    for (size_t c : pcol) isp[c] = 1;
    for (size_t fc = 0; fc < nc; fc++) {
        if (isp[fc]) continue;
        std::vector<Rat> k(nc, Rat(0));
        k[fc] = Rat(1);
        for (size_t r = 0; r < row; r++) k[pcol[r]] = -M[r][fc];
        out.kernel.push_back(k);
    }
    return out;
}

std::vector<Int> scale_primitive(const std::vector<Rat>& v) {
    Int l(1);
    for (const Rat& x : v) l = lcm(l, x.get_den());
    std::vector<Int> out(v.size());
    Int g(0);
    for (size_t i = 0; i < v.size(); i++) {
        Rat s = v[i] * Rat(l);
        s.canonicalize();
        out[i] = s.get_num();
        g = gcd(g, out[i]);
    }
    if (g > 1)
        for (Int& x : out) x /= g;
    for (const Int& x : out) {
        if (x != 0) {
            if (x < 0)
                for (Int& y : out) y = -y;
            break;
        }
    }
    return out;
}

// integer vectors of dimension k with max-norm <= radius, by growing shells
void visit_shells(long k, long radius, std::vector<long>& cur,
                  const std::function<bool(const std::vector<long>&)>& fn);

bool shell_rec(long pos, long k, long r, bool pinned, std::vector<long>& cur,
               const std::function<bool(const std::vector<long>&)>& fn) {
    if (pos == k) {
        if (!pinned) return false;
        return fn(cur);
    }
    for (long v = -r; v <= r; v++) {
        cur[static_cast<size_t>(pos)] = v;
        bool pin = pinned || v == r || v == -r;
        if (pos == k - 1 && !pin) continue;
        if (shell_rec(pos + 1, k, r, pin, cur, fn)) return true;
    }
    return false;
}

void visit_shells(long k, long radius, std::vector<long>& cur,
                  const std::function<bool(const std::vector<long>&)>& fn) {
    if (k == 0) {
        fn(cur);
        return;
    }
    for (long r = 0; r <= radius; r++) {
        if (r == 0) {
            std::fill(cur.begin(), cur.end(), 0L);
            if (fn(cur)) return;
            continue;
        }
        if (shell_rec(0, k, r, false, cur, fn)) return;
    }
}

// images of the roots in F_q[Y]/(h mod q); candidate relations are screened
// here before any exact power is computed
struct ModScreen {
    bool ok = false;
    Int q;
    PolyM hq;
    std::vector<PolyM> im;
    std::vector<PolyM> iminv;
    std::map<std::pair<long, long>, PolyM> memo;

    const PolyM& pow(long idx, const Int& e) {
        long el = e.get_si();
        auto key = std::make_pair(idx, el);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const PolyM& b = el >= 0 ? im[static_cast<size_t>(idx)] : iminv[static_cast<size_t>(idx)];
        PolyM r = polym_powmod(b, el >= 0 ? el : -el, hq, q);
        return memo.emplace(key, std::move(r)).first->second;
    }
};

ModScreen build_screen(const std::vector<PolyQ>& reds, const NumberField& K) {
    ModScreen sc;
    Int dens = 1;
    for (const PolyQ& r : reds)
        for (const Rat& c : r.c) dens = lcm(dens, c.get_den());
    for (const Rat& c : K.h.c) dens = lcm(dens, c.get_den());
    Int q = Int(1) << 30;
    for (int attempt = 0; attempt < 5; attempt++) {
        q = next_prime_above(q);
        if (dens % q == 0) continue;
        sc.q = q;
        sc.hq = polym_from(K.h, q);
        sc.im.clear();
        sc.iminv.clear();
        bool good = true;
        for (const PolyQ& r : reds) {
            PolyM a = polym_rem(polym_from(r, q), sc.hq, q);
            PolyM s, t;
            PolyM g = polym_gcdext(a, sc.hq, q, s, t);
            if (polym_degree(g) != 0) {
                good = false;
                break;
            }
            sc.im.push_back(a);
            sc.iminv.push_back(polym_scale(mod_inverse(g[0], q), s, q));
        }
        if (good) {
            sc.ok = true;
            return sc;
        }
    }
    sc.ok = false;
    return sc;
}

}  // namespace

/* ---------- public surface ---------- */

SplitField splitting_field(const PolyQ& g_in, long degree_cap) {
    if (g_in.degree() < 1) throw InvalidArgument("splitting_field: need positive degree");
    PolyQ g = make_monic(g_in);
    if (poly_gcd(g, derivative(g)).degree() != 0)
        throw InvalidArgument("splitting_field: input must be squarefree");
    NumberField K{poly_x_power(1)};
    std::vector<PolyQ> roots;
    KPoly rem = kp_from_rational(g);
    while (kp_deg(rem) > 0) {
        std::vector<KPoly> factors = factor_over_field(rem, K);
        std::vector<KPoly> nonlinear;
        for (const KPoly& F : factors) {
            if (kp_deg(F) == 1)
                roots.push_back(fe_reduce(Rat(-1) * F[0], K));
            else
                nonlinear.push_back(F);
        }
        if (nonlinear.empty()) break;
        Extension ext = extend_field(K, nonlinear.front(), degree_cap);
        for (PolyQ& r : roots) r = fe_eval_poly(r, ext.theta, ext.field);
        KPoly newrem{poly_const(Rat(1))};
        for (const KPoly& F : nonlinear) {
            KPoly lifted(F.size());
            for (size_t i = 0; i < F.size(); i++) lifted[i] = fe_eval_poly(F[i], ext.theta, ext.field);
            newrem = kp_mul(newrem, lifted, ext.field);
        }
        K = ext.field;
        rem = newrem;
    }
    if (static_cast<long>(roots.size()) != g.degree())
        throw InternalError("splitting_field: lost roots along the way");
    return {K, roots};
}

std::vector<PolyQ> exp_poly_coefficients(const SequenceSpec& s, const NumberField& K,
                                         const std::vector<PolyQ>& roots) {
    long d = static_cast<long>(roots.size());
    if (d == 0 || s.order() != d)
        throw InvalidArgument("exp_poly_coefficients: order does not match root count");
    std::vector<std::vector<PolyQ>> A(static_cast<size_t>(d),
                                      std::vector<PolyQ>(static_cast<size_t>(d) + 1));
    std::vector<PolyQ> pw(static_cast<size_t>(d), poly_const(Rat(1)));
    for (long t = 0; t < d; t++) {
        for (long i = 0; i < d; i++) {
            A[static_cast<size_t>(t)][static_cast<size_t>(i)] = pw[static_cast<size_t>(i)];
            pw[static_cast<size_t>(i)] = fe_mul(pw[static_cast<size_t>(i)], roots[static_cast<size_t>(i)], K);
        }
        A[static_cast<size_t>(t)][static_cast<size_t>(d)] = poly_const(term_at(s, Int(t)));
    }
    for (long col = 0; col < d; col++) {
        long pr = col;
        while (pr < d && A[static_cast<size_t>(pr)][static_cast<size_t>(col)].is_zero()) pr++;
        if (pr == d) throw InternalError("exp_poly_coefficients: singular system");
        std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(pr)]);
        PolyQ inv = fe_inv(A[static_cast<size_t>(col)][static_cast<size_t>(col)], K);
        for (long c = col; c <= d; c++)
            A[static_cast<size_t>(col)][static_cast<size_t>(c)] =
                fe_mul(A[static_cast<size_t>(col)][static_cast<size_t>(c)], inv, K);
        for (long r = 0; r < d; r++) {
            if (r == col) continue;
            PolyQ f = A[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (f.is_zero()) continue;
            for (long c = col; c <= d; c++)
                A[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                    fe_sub(A[static_cast<size_t>(r)][static_cast<size_t>(c)],
                           fe_mul(f, A[static_cast<size_t>(col)][static_cast<size_t>(c)], K), K);
        }
    }
    std::vector<PolyQ> alphas(static_cast<size_t>(d));
    for (long i = 0; i < d; i++) alphas[static_cast<size_t>(i)] = A[static_cast<size_t>(i)][static_cast<size_t>(d)];
    for (long t = d; t <= 2 * d; t++) {
        PolyQ acc;
        for (long i = 0; i < d; i++)
            acc = fe_add(acc, fe_mul(alphas[static_cast<size_t>(i)], fe_pow(roots[static_cast<size_t>(i)], Int(t), K), K), K);
        if (!(acc == poly_const(term_at(s, Int(t)))))
            throw InternalError("exp_poly_coefficients: identity check failed");
    }
    return alphas;
}

Rat height_upper_bound(const PolyQ& x, const NumberField& K) {
    long D = K.degree();
    if (D < 1) throw InvalidArgument("height_upper_bound: bad field");
    PolyQ xr = fe_reduce(x, K);
    long npts = D + 1;
    std::vector<Rat> xs(static_cast<size_t>(npts)), ys(static_cast<size_t>(npts));
    for (long k = 0; k < npts; k++) {
        long v = (k + 1) / 2;
        long x0 = (k % 2 == 1) ? v : -v;
        xs[static_cast<size_t>(k)] = Rat(x0);
        ys[static_cast<size_t>(k)] = resultant(K.h, poly_const(Rat(x0)) - xr);
    }
    PolyQ mfull = newton_interp(xs, ys);
    PolyQ mp = squarefree_part(mfull);
    std::vector<Int> v = primitive_int_poly(mp);
    Int s2(0);
    for (const Int& c : v) s2 += c * c;
    long ex = 0;
    double m = mpz_get_d_2exp(&ex, s2.get_mpz_t());
    double val = 0.5 * (std::log(m) + static_cast<double>(ex) * std::log(2.0));
    if (val < 0) val = 0;
    return Rat(val) + Rat(1, 1000000000);
}

Int masser_bound(long s, const Rat& h, long D, const Rat& c) {
    if (s < 1 || D < 1) throw InvalidArgument("masser_bound: need s >= 1 and D >= 1");
    if (h < 0 || c <= 0) throw InvalidArgument("masser_bound: need h >= 0 and c > 0");
    if (s == 1) return Int(1);
    double hd = h.get_d(), cd = c.get_d();
    double Dd = static_cast<double>(D);
    double l = std::log(Dd + 2.0);
    double ll = std::log(l);
    double v = std::pow(cd * static_cast<double>(s) * hd, static_cast<double>(s - 1)) *
               std::pow(Dd, static_cast<double>(s - 1)) * std::pow(l, static_cast<double>(3 * s - 3)) /
               std::pow(ll, static_cast<double>(3 * s - 4));
    if (!std::isfinite(v)) throw ResourceLimit("masser_bound: value out of range");
    Int r(std::ceil(v));
    if (r < 1) r = 1;
    return r;
}

RelationBasis multiplicative_relations(const std::vector<PolyQ>& roots, const NumberField& K,
                                       const Int& exponent_cap) {
    RelationBasis rb;
    long s = static_cast<long>(roots.size());
    if (exponent_cap < 1) throw InvalidArgument("multiplicative_relations: cap must be positive");
    if (s == 0) return rb;
    std::vector<PolyQ> reds(static_cast<size_t>(s));
    for (long i = 0; i < s; i++) {
        reds[static_cast<size_t>(i)] = fe_reduce(roots[static_cast<size_t>(i)], K);
        if (reds[static_cast<size_t>(i)].is_zero())
            throw InvalidArgument("multiplicative_relations: roots must be nonzero");
    }
    std::vector<Rat> norms(static_cast<size_t>(s));
    std::vector<int> sgn(static_cast<size_t>(s));
    std::vector<Int> pool;
    for (long i = 0; i < s; i++) {
        Rat N = resultant(K.h, reds[static_cast<size_t>(i)]);
        if (N == 0) throw InternalError("multiplicative_relations: zero norm for nonzero element");
        norms[static_cast<size_t>(i)] = N;
        sgn[static_cast<size_t>(i)] = N > 0 ? 1 : -1;
        pool.push_back(N.get_num());
        pool.push_back(N.get_den());
    }
    std::vector<Int> base = coprime_base(pool);
    std::vector<std::vector<Int>> vv(static_cast<size_t>(s));
    for (long i = 0; i < s; i++) vv[static_cast<size_t>(i)] = val_exps(norms[static_cast<size_t>(i)], base);
    Rat hmax(0);
    for (long i = 0; i < s; i++) {
        Rat h = height_upper_bound(reds[static_cast<size_t>(i)], K);
        if (h > hmax) hmax = h;
    }
    Int masser = masser_bound(s, hmax, K.degree(), Rat(1));
    long capL = exponent_cap > 4096 ? 4096 : static_cast<long>(exponent_cap.get_si());
    ModScreen screen = build_screen(reds, K);
    bool capped = false;
    std::vector<long> basisIdx;
    std::vector<std::vector<Int>> basisCols;
    std::vector<Relation> rels;
    for (long i = 0; i < s; i++) {
        SpanSolution sol = solve_span(basisCols, vv[static_cast<size_t>(i)]);
        if (!sol.consistent) {
            basisIdx.push_back(i);
            basisCols.push_back(vv[static_cast<size_t>(i)]);
            continue;
        }
        bool complete = Int(capL) >= masser;
        bool aborted = false;
        long t = static_cast<long>(basisIdx.size());
        std::vector<std::vector<Int>> ker;
        for (const auto& kv : sol.kernel) ker.push_back(scale_primitive(kv));
        std::optional<Relation> found;
        long verifies = 0, screened = 0;
        const long verify_budget = 20000;
        const long screen_budget = 2000000;
        long kdim = static_cast<long>(ker.size());
        long radius = capL;
        if (kdim == 3) radius = 8;
        else if (kdim == 4) radius = 3;
        else if (kdim > 4) radius = 2;
        if (kdim > 6) {
            aborted = true;
        } else {
            for (long m = 1; m <= capL && !found; m++) {
                std::vector<long> cur(ker.size(), 0);
                PolyM lhs_m;
                if (screen.ok) lhs_m = screen.pow(i, Int(m));
                auto try_cand = [&](const std::vector<long>& cs) -> bool {
                    std::vector<Int> n(static_cast<size_t>(t));
                    for (long u = 0; u < t; u++) {
                        Rat x = Rat(m) * sol.particular[static_cast<size_t>(u)];
                        for (size_t l = 0; l < ker.size(); l++)
                            x += Rat(cs[l]) * Rat(ker[l][static_cast<size_t>(u)]);
                        x.canonicalize();
                        if (x.get_den() != 1) return false;
                        if (abs(x.get_num()) > capL) return false;
                        n[static_cast<size_t>(u)] = x.get_num();
                    }
                    int lhs_sgn = (m % 2 == 0) ? 1 : sgn[static_cast<size_t>(i)];
                    int rhs_sgn = 1;
                    for (long u = 0; u < t; u++) {
                        if (sgn[static_cast<size_t>(basisIdx[static_cast<size_t>(u)])] < 0 && n[static_cast<size_t>(u)] % 2 != 0)
                            rhs_sgn = -rhs_sgn;
                    }
                    if (lhs_sgn != rhs_sgn) return false;
                    if (screen.ok) {
                        if (screened >= screen_budget) {
                            aborted = true;
                            return true;
                        }
                        screened++;
                        PolyM rhs_m = {Int(1)};
                        for (long u = 0; u < t; u++) {
                            if (n[static_cast<size_t>(u)] == 0) continue;
                            PolyM f = screen.pow(basisIdx[static_cast<size_t>(u)], n[static_cast<size_t>(u)]);
                            rhs_m = polym_rem(polym_mul(rhs_m, f, screen.q), screen.hq, screen.q);
                        }
                        if (lhs_m != rhs_m) return false;
                    }
                    if (verifies >= verify_budget) {
                        aborted = true;
                        return true;
                    }
                    verifies++;
                    PolyQ lhs = fe_pow(reds[static_cast<size_t>(i)], Int(m), K);
                    PolyQ rhs = poly_const(Rat(1));
                    for (long u = 0; u < t; u++)
                        rhs = fe_mul(rhs, fe_pow(reds[static_cast<size_t>(basisIdx[static_cast<size_t>(u)])], n[static_cast<size_t>(u)], K), K);
                    if (lhs == rhs) {
                        Relation rel;
                        rel.index = i;
                        rel.m = Int(m);
                        rel.n = n;
                        found = rel;
                        return true;
                    }
                    return false;
                };
                visit_shells(kdim, radius, cur, try_cand);
                if (aborted) break;
            }
        }
        if (found) {
            rels.push_back(*found);
        } else {
            basisIdx.push_back(i);
            basisCols.push_back(vv[static_cast<size_t>(i)]);
            if (!complete || aborted) capped = true;
        }
    }
    rb.independent = basisIdx;
    rb.relations = rels;
    rb.capped = capped;
    long tfin = static_cast<long>(basisIdx.size());
    rb.linear_forms.assign(static_cast<size_t>(s), std::vector<Rat>(static_cast<size_t>(tfin), Rat(0)));
    for (long u = 0; u < tfin; u++)
        rb.linear_forms[static_cast<size_t>(basisIdx[static_cast<size_t>(u)])][static_cast<size_t>(u)] = Rat(1);
    for (const Relation& rel : rels) {
        for (size_t u = 0; u < rel.n.size(); u++) {
            Rat q = Rat(rel.n[u]) / Rat(rel.m);
            q.canonicalize();
            rb.linear_forms[static_cast<size_t>(rel.index)][u] = q;
        }
    }
    return rb;
}

FjOutcome f_j_identically_zero(const std::vector<PolyQ>& alphas, const RelationBasis& basis,
                               long j, const Int& L, const NumberField& K) {
    (void)L;
    if (j < 0) throw InvalidArgument("f_j_identically_zero: j must be nonnegative");
    long s = static_cast<long>(alphas.size());
    if (basis.linear_forms.size() != static_cast<size_t>(s))
        throw InvalidArgument("f_j_identically_zero: alphas and basis sizes differ");
    long t = static_cast<long>(basis.independent.size());
    FjOutcome out;
    std::vector<PolyQ> reds(static_cast<size_t>(s));
    for (long i = 0; i < s; i++) reds[static_cast<size_t>(i)] = fe_reduce(alphas[static_cast<size_t>(i)], K);
    if (t == 0) {
        if (j > 0) {
            out.zero = true;
            return out;
        }
        PolyQ c;
        for (long i = 0; i < s; i++) c = fe_add(c, reds[static_cast<size_t>(i)], K);
        out.zero = c.is_zero();
        if (!out.zero) out.coefficient = c;
        return out;
    }
    Int jfact = factorial_int(static_cast<unsigned long>(j));
    std::vector<long> k(static_cast<size_t>(t), 0);
    bool all_zero = true;
    std::vector<long> witness;
    PolyQ witness_coeff;
    // exponent vectors with sum j, first position descending
    std::function<bool(long, long)> walk = [&](long pos, long rem) -> bool {
        if (pos == t - 1) {
            k[static_cast<size_t>(pos)] = rem;
            Int mult = jfact;
            for (long u = 0; u < t; u++) mult /= factorial_int(static_cast<unsigned long>(k[static_cast<size_t>(u)]));
            PolyQ c;
            for (long i = 0; i < s; i++) {
                Rat scalar = Rat(mult);
                for (long u = 0; u < t; u++)
                    scalar *= rat_pow(basis.linear_forms[static_cast<size_t>(i)][static_cast<size_t>(u)], k[static_cast<size_t>(u)]);
                if (scalar == 0) continue;
                c = fe_add(c, fe_reduce(scalar * reds[static_cast<size_t>(i)], K), K);
            }
            if (!c.is_zero()) {
                all_zero = false;
                witness = k;
                witness_coeff = c;
                return true;
            }
            return false;
        }
        for (long v = rem; v >= 0; v--) {
            k[static_cast<size_t>(pos)] = v;
            if (walk(pos + 1, rem - v)) return true;
        }
        return false;
    };
    walk(0, j);
    out.zero = all_zero;
    if (!all_zero) {
        out.monomial = witness;
        out.coefficient = witness_coeff;
    }
    return out;
}

}  // namespace skolem
