#include "skolemkit/algebra.hpp"

#include <algorithm>
#include <map>

namespace skolem {

/* ---------- integers ---------- */

std::optional<long> padic_valuation(const Int& n, const Int& p) {
    if (n == 0) return std::nullopt;
    if (p < 2) throw InvalidArgument("padic_valuation: p must be >= 2");
    Int rest;
    mp_bitcnt_t v = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    return static_cast<long>(v);
}

Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Int factorial_int(unsigned long k) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), k);
    return r;
}

long digit_sum_base(const Int& n, const Int& p) {
    if (n < 0) throw InvalidArgument("digit_sum_base: n must be >= 0");
    Int m = n, q, r;
    long s = 0;
    while (m > 0) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        s += static_cast<long>(r.get_si());
        m = q;
    }
    return s;
}

long factorial_valuation(unsigned long k, const Int& p) {
    Int n(static_cast<unsigned long>(k));
    Int num = n - digit_sum_base(n, p);
    Int den = p - 1;
    Int q = num / den;
    return static_cast<long>(q.get_si());
}

Int mod_pos(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw InvalidArgument("mod_inverse: not invertible");
    return r;
}

Int pow_mod(const Int& b, const Int& e, const Int& m) {
    if (e < 0) throw InvalidArgument("pow_mod: negative exponent");
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Int next_prime_above(const Int& n) {
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

static Int pollard_rho(const Int& n) {
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1, diff;
        auto step = [&](Int v) {
            Int w = (v * v + c) % n;
            return w;
        };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            diff = x - y;
            mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

std::vector<Int> factor_integer(Int n) {
    if (n < 1) throw InvalidArgument("factor_integer: n must be >= 1");
    std::vector<Int> out;
    for (Int p : {Int(2), Int(3), Int(5)}) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    Int p = 7;
    int wi = 0;
    while (p <= 1000000 && p * p <= n) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
        p += wheel[wi];
        wi = (wi + 1) & 7;
    }
    std::vector<Int> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        Int m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m)) {
            out.push_back(m);
            continue;
        }
        Int d = pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int multiplicative_order_mod_p(const Int& a, const Int& p) {
    if (mod_pos(a, p) == 0) throw InvalidArgument("multiplicative_order_mod_p: a divisible by p");
    std::vector<Int> fac = factor_integer(p - 1);
    fac.erase(std::unique(fac.begin(), fac.end()), fac.end());
    Int e = p - 1;
    for (const Int& q : fac) {
        while (e % q == 0 && pow_mod(a, e / q, p) == 1) e /= q;
    }
    return e;
}

/* ---------- polynomials over Q ---------- */

void PolyQ::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Rat PolyQ::eval(const Rat& x) const {
    Rat r = 0;
    for (size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

PolyQ poly_from_ints(const std::vector<long>& v) {
    std::vector<Rat> c;
    c.reserve(v.size());
    for (long x : v) c.emplace_back(x);
    return PolyQ(std::move(c));
}

PolyQ poly_x_power(int k) {
    std::vector<Rat> c(static_cast<size_t>(k) + 1, Rat(0));
    c.back() = 1;
    return PolyQ(std::move(c));
}

bool operator==(const PolyQ& a, const PolyQ& b) { return a.c == b.c; }

PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> c(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); i++) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); i++) c[i] += b.c[i];
    return PolyQ(std::move(c));
}

PolyQ operator-(const PolyQ& a, const PolyQ& b) {
    std::vector<Rat> c(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); i++) c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); i++) c[i] -= b.c[i];
    return PolyQ(std::move(c));
}

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return PolyQ();
    std::vector<Rat> c(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); i++)
        for (size_t j = 0; j < b.c.size(); j++) c[i + j] += a.c[i] * b.c[j];
    return PolyQ(std::move(c));
}

PolyQ operator*(const Rat& s, const PolyQ& a) {
    std::vector<Rat> c = a.c;
    for (auto& x : c) x *= s;
    return PolyQ(std::move(c));
}

PolyQ derivative(const PolyQ& f) {
    if (f.degree() < 1) return PolyQ();
    std::vector<Rat> c(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); i++) c[i - 1] = Rat(static_cast<long>(i)) * f.c[i];
    return PolyQ(std::move(c));
}

std::pair<PolyQ, PolyQ> divrem(const PolyQ& a, const PolyQ& b) {
    if (b.is_zero()) throw InvalidArgument("divrem: division by zero polynomial");
    PolyQ r = a;
    int db = b.degree();
    if (r.degree() < db) return {PolyQ(), r};
    std::vector<Rat> q(static_cast<size_t>(r.degree() - db) + 1, Rat(0));
    Rat inv_lc = 1 / b.lc();
    while (r.degree() >= db) {
        int shift = r.degree() - db;
        Rat f = r.lc() * inv_lc;
        q[static_cast<size_t>(shift)] = f;
        for (int i = 0; i <= db; i++)
            r.c[static_cast<size_t>(i + shift)] -= f * b.c[static_cast<size_t>(i)];
        r.trim();
    }
    return {PolyQ(std::move(q)), r};
}

PolyQ make_monic(const PolyQ& f) {
    if (f.is_zero()) return f;
    return (1 / f.lc()) * f;
}

std::vector<Int> primitive_int_poly(const PolyQ& f) {
    if (f.is_zero()) return {};
    Int l = 1;
    for (const Rat& x : f.c) {
        Int d = x.get_den();
        Int g;
        mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        l = l / g * d;
    }
    std::vector<Int> v;
    v.reserve(f.c.size());
    Int content = 0;
    for (const Rat& x : f.c) {
        Int n = x.get_num() * (l / x.get_den());
        v.push_back(n);
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), n.get_mpz_t());
    }
    if (v.back() < 0) content = -content;
    for (Int& x : v) {
        Int q;
        mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), content.get_mpz_t());
        x = q;
    }
    return v;
}

PolyQ poly_from_int_coeffs(const std::vector<Int>& v) {
    std::vector<Rat> c;
    c.reserve(v.size());
    for (const Int& x : v) c.emplace_back(x);
    return PolyQ(std::move(c));
}

static std::vector<Int> pseudo_rem(std::vector<Int> a, const std::vector<Int>& b) {
    int da = static_cast<int>(a.size()) - 1;
    int db = static_cast<int>(b.size()) - 1;
    const Int& lb = b.back();
    while (da >= db) {
        Int la = a.back();
        for (int i = 0; i < da; i++) a[static_cast<size_t>(i)] *= lb;
        for (int i = 0; i <= db; i++)
            a[static_cast<size_t>(da - db + i)] -= la * b[static_cast<size_t>(i)];
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
        da = static_cast<int>(a.size()) - 1;
    }
    return a;
}

static void make_primitive(std::vector<Int>& v) {
    if (v.empty()) return;
    Int g = 0;
    for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (v.back() < 0) g = -g;
    for (Int& x : v) {
        Int q;
        mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        x = q;
    }
}

PolyQ poly_gcd(PolyQ a, PolyQ b) {
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    std::vector<Int> u = primitive_int_poly(a);
    std::vector<Int> v = primitive_int_poly(b);
    if (u.size() < v.size()) std::swap(u, v);
    while (!v.empty()) {
        std::vector<Int> r = pseudo_rem(u, v);
        make_primitive(r);
        u = std::move(v);
        v = std::move(r);
    }
    return make_monic(poly_from_int_coeffs(u));
}

PolyQ squarefree_part(const PolyQ& f) {
    if (f.degree() < 1) return make_monic(f);
    PolyQ g = poly_gcd(f, derivative(f));
    return make_monic(divrem(f, g).first);
}

static Int det_bareiss(std::vector<std::vector<Int>> M) {
    size_t n = M.size();
    if (n == 0) return Int(1);
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; k++) {
        size_t piv = n;
        for (size_t i = k; i < n; i++)
            if (M[i][k] != 0) {
                piv = i;
                break;
            }
        if (piv == n) return Int(0);
        if (piv != k) {
            std::swap(M[piv], M[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; i++) {
            for (size_t j = k + 1; j < n; j++) {
                Int t = M[k][k] * M[i][j] - M[i][k] * M[k][j];
                mpz_divexact(M[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            M[i][k] = 0;
        }
        prev = M[k][k];
    }
    return sign > 0 ? M[n - 1][n - 1] : Int(-M[n - 1][n - 1]);
}

static std::vector<Int> scale_to_int(const PolyQ& f, Int& scale) {
    scale = 1;
    for (const Rat& x : f.c) {
        Int d = x.get_den();
        Int g;
        mpz_gcd(g.get_mpz_t(), scale.get_mpz_t(), d.get_mpz_t());
        scale = scale / g * d;
    }
    std::vector<Int> v;
    v.reserve(f.c.size());
    for (const Rat& x : f.c) v.push_back(x.get_num() * (scale / x.get_den()));
    return v;
}

Rat resultant(const PolyQ& f, const PolyQ& g) {
    int m = f.degree(), n = g.degree();
    if (m < 0 || n < 0) return Rat(0);
    if (m == 0 && n == 0) return Rat(1);
    if (m == 0) {
        Rat r = 1;
        for (int i = 0; i < n; i++) r *= f.lc();
        return r;
    }
    if (n == 0) {
        Rat r = 1;
        for (int i = 0; i < m; i++) r *= g.lc();
        return r;
    }
    Int lf, lg;
    std::vector<Int> F = scale_to_int(f, lf);
    std::vector<Int> G = scale_to_int(g, lg);
    size_t sz = static_cast<size_t>(m + n);
    std::vector<std::vector<Int>> S(sz, std::vector<Int>(sz, Int(0)));
    for (int r = 0; r < n; r++)
        for (int i = 0; i <= m; i++) S[static_cast<size_t>(r)][static_cast<size_t>(r + i)] = F[static_cast<size_t>(m - i)];
    for (int r = 0; r < m; r++)
        for (int i = 0; i <= n; i++)
            S[static_cast<size_t>(n + r)][static_cast<size_t>(r + i)] = G[static_cast<size_t>(n - i)];
    Int det = det_bareiss(std::move(S));
    Rat denom = Rat(pow_int(lf, static_cast<unsigned long>(n)) * pow_int(lg, static_cast<unsigned long>(m)));
    Rat res = Rat(det) / denom;
    res.canonicalize();
    return res;
}

Rat discriminant(const PolyQ& f) {
    int d = f.degree();
    if (d < 1) throw InvalidArgument("discriminant: degree must be >= 1");
    Rat res = resultant(f, derivative(f));
    Rat out = res / f.lc();
    if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1) out = -out;
    out.canonicalize();
    return out;
}

PolyQ compose(const PolyQ& f, const PolyQ& g) {
    PolyQ r;
    for (size_t i = f.c.size(); i-- > 0;) {
        r = r * g;
        r = r + PolyQ({f.c[i]});
    }
    return r;
}

/* ---------- polynomials mod m ---------- */

PolyM polym_trim(PolyM f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int polym_degree(const PolyM& f) { return static_cast<int>(f.size()) - 1; }

PolyM polym_from(const PolyQ& f, const Int& m) {
    PolyM v;
    v.reserve(f.c.size());
    for (const Rat& x : f.c) {
        Int num = mod_pos(x.get_num(), m);
        Int den = x.get_den();
        if (den != 1) num = num * mod_inverse(den, m) % m;
        v.push_back(num);
    }
    return polym_trim(std::move(v));
}

PolyM polym_add(const PolyM& a, const PolyM& b, const Int& m) {
    PolyM c(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); i++) c[i] += a[i];
    for (size_t i = 0; i < b.size(); i++) c[i] = mod_pos(c[i] + b[i], m);
    for (size_t i = b.size(); i < c.size(); i++) c[i] = mod_pos(c[i], m);
    return polym_trim(std::move(c));
}

PolyM polym_sub(const PolyM& a, const PolyM& b, const Int& m) {
    PolyM c(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); i++) c[i] += a[i];
    for (size_t i = 0; i < b.size(); i++) c[i] -= b[i];
    for (auto& x : c) x = mod_pos(x, m);
    return polym_trim(std::move(c));
}

PolyM polym_mul(const PolyM& a, const PolyM& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    PolyM c(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++) c[i + j] += a[i] * b[j];
    for (auto& x : c) x = mod_pos(x, m);
    return polym_trim(std::move(c));
}

PolyM polym_scale(const Int& s, const PolyM& a, const Int& m) {
    PolyM c = a;
    for (auto& x : c) x = mod_pos(x * s, m);
    return polym_trim(std::move(c));
}

std::pair<PolyM, PolyM> polym_divrem(PolyM a, const PolyM& f, const Int& m) {
    if (f.empty()) throw InvalidArgument("polym_divrem: zero divisor");
    Int inv = mod_inverse(f.back(), m);
    int df = polym_degree(f);
    a = polym_trim(std::move(a));
    if (polym_degree(a) < df) return {PolyM{}, a};
    PolyM q(a.size() - f.size() + 1, Int(0));
    while (polym_degree(a) >= df) {
        int shift = polym_degree(a) - df;
        Int c = a.back() * inv % m;
        q[static_cast<size_t>(shift)] = c;
        for (int i = 0; i <= df; i++) {
            size_t k = static_cast<size_t>(i + shift);
            a[k] = mod_pos(a[k] - c * f[static_cast<size_t>(i)], m);
        }
        a = polym_trim(std::move(a));
    }
    return {polym_trim(std::move(q)), a};
}

PolyM polym_rem(PolyM a, const PolyM& f, const Int& m) {
    return polym_divrem(std::move(a), f, m).second;
}

PolyM polym_make_monic(PolyM f, const Int& m) {
    f = polym_trim(std::move(f));
    if (f.empty()) return f;
    Int inv = mod_inverse(f.back(), m);
    return polym_scale(inv, f, m);
}

PolyM polym_powmod(PolyM base, Int e, const PolyM& f, const Int& m) {
    if (e < 0) throw InvalidArgument("polym_powmod: negative exponent");
    PolyM r{Int(1)};
    base = polym_rem(std::move(base), f, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = polym_rem(polym_mul(r, base, m), f, m);
        e >>= 1;
        if (e > 0) base = polym_rem(polym_mul(base, base, m), f, m);
    }
    return r;
}

Int polym_eval(const PolyM& f, const Int& x, const Int& m) {
    Int r = 0;
    for (size_t i = f.size(); i-- > 0;) r = mod_pos(r * x + f[i], m);
    return r;
}

PolyM polym_gcd(PolyM a, PolyM b, const Int& p) {
    a = polym_trim(std::move(a));
    b = polym_trim(std::move(b));
    while (!b.empty()) {
        PolyM r = polym_rem(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return polym_make_monic(std::move(a), p);
}

PolyM polym_gcdext(PolyM a, PolyM b, const Int& p, PolyM& s, PolyM& t) {
    PolyM r0 = polym_trim(std::move(a)), r1 = polym_trim(std::move(b));
    PolyM s0{Int(1)}, s1{}, t0{}, t1{Int(1)};
    while (!r1.empty()) {
        auto [q, r2] = polym_divrem(std::move(r0), r1, p);
        PolyM s2 = polym_sub(s0, polym_mul(q, s1, p), p);
        PolyM t2 = polym_sub(t0, polym_mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) {
        s = s0;
        t = t0;
        return r0;
    }
    Int inv = mod_inverse(r0.back(), p);
    s = polym_scale(inv, s0, p);
    t = polym_scale(inv, t0, p);
    return polym_scale(inv, r0, p);
}

PolyM polym_derivative(const PolyM& f, const Int& m) {
    if (f.size() < 2) return {};
    PolyM c(f.size() - 1);
    for (size_t i = 1; i < f.size(); i++) c[i - 1] = mod_pos(f[i] * Int(static_cast<unsigned long>(i)), m);
    return polym_trim(std::move(c));
}

bool splits_completely_mod_p(const PolyQ& g, const Int& p) {
    if (g.degree() < 1) return false;
    for (const Rat& x : g.c)
        if (x.get_den() % p == 0) throw InvalidArgument("splits_completely_mod_p: denominator not a unit");
    PolyM gm = polym_from(g, p);
    if (polym_degree(gm) != g.degree()) return false;
    gm = polym_make_monic(std::move(gm), p);
    if (polym_degree(gm) == 1) return true;
    PolyM x{Int(0), Int(1)};
    PolyM xp = polym_powmod(x, p, gm, p);
    return polym_sub(xp, x, p).empty();
}

static void collect_roots(PolyM f, const Int& p, std::vector<Int>& out) {
    // f monic, product of distinct linear factors
    for (;;) {
        int d = polym_degree(f);
        if (d <= 0) return;
        if (d == 1) {
            out.push_back(mod_pos(-f[0], p));
            return;
        }
        Int half = (p - 1) / 2;
        bool split = false;
        for (Int a = 0; a < 4 * p + 8; a += 1) {
            Int fa = polym_eval(f, mod_pos(-a, p), p);
            if (fa == 0) {
                out.push_back(mod_pos(-a, p));
                PolyM lin{mod_pos(a, p), Int(1)};
                f = polym_divrem(std::move(f), lin, p).first;
                split = true;
                break;
            }
            PolyM base{mod_pos(a, p), Int(1)};
            PolyM h = polym_powmod(base, half, f, p);
            h = polym_sub(h, PolyM{Int(1)}, p);
            PolyM g = polym_gcd(h, f, p);
            int dg = polym_degree(g);
            if (dg > 0 && dg < d) {
                collect_roots(g, p, out);
                f = polym_divrem(std::move(f), g, p).first;
                split = true;
                break;
            }
        }
        if (!split) throw InternalError("collect_roots: splitting sweep exhausted");
    }
}

std::vector<Int> roots_mod_p(const PolyM& f, const Int& p) {
    PolyM fm = polym_trim(f);
    for (auto& x : fm) x = mod_pos(x, p);
    fm = polym_trim(std::move(fm));
    if (fm.empty() || polym_degree(fm) == 0) return {};
    fm = polym_make_monic(std::move(fm), p);
    std::vector<Int> out;
    if (p < 10000) {
        for (Int r = 0; r < p; r += 1)
            if (polym_eval(fm, r, p) == 0) out.push_back(r);
        return out;
    }
    PolyM x{Int(0), Int(1)};
    PolyM xp = polym_powmod(x, p, fm, p);
    PolyM lin = polym_sub(xp, x, p);
    PolyM prod = polym_gcd(lin, fm, p);
    collect_roots(std::move(prod), p, out);
    std::sort(out.begin(), out.end());
    return out;
}

/* ---------- misc polynomial tables ---------- */

std::vector<Int> stirling_row(unsigned k) {
    std::vector<Int> row{Int(1)};
    for (unsigned i = 0; i < k; i++) {
        std::vector<Int> next(row.size() + 1, Int(0));
        for (size_t j = 0; j < row.size(); j++) {
            next[j + 1] += row[j];
            next[j] -= Int(static_cast<unsigned long>(i)) * row[j];
        }
        row = std::move(next);
    }
    return row;
}

static PolyQ cyclotomic_rec(unsigned k, std::map<unsigned, PolyQ>& memo) {
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    PolyQ num = poly_x_power(static_cast<int>(k)) - poly_from_ints({1});
    for (unsigned d = 1; d < k; d++) {
        if (k % d != 0) continue;
        num = divrem(num, cyclotomic_rec(d, memo)).first;
    }
    memo[k] = num;
    return num;
}

PolyQ cyclotomic(unsigned k) {
    if (k == 0) throw InvalidArgument("cyclotomic: k must be >= 1");
    std::map<unsigned, PolyQ> memo;
    return cyclotomic_rec(k, memo);
}

static unsigned euler_phi(unsigned k) {
    unsigned result = k;
    for (unsigned p = 2; p * p <= k; p++) {
        if (k % p) continue;
        while (k % p == 0) k /= p;
        result -= result / p;
    }
    if (k > 1) result -= result / k;
    return result;
}

std::optional<unsigned> root_of_unity_order_dividing(const PolyQ& f, unsigned k_lo, unsigned k_hi) {
    if (f.is_zero()) throw InvalidArgument("root_of_unity_order_dividing: zero polynomial");
    unsigned d = static_cast<unsigned>(f.degree());
    for (unsigned k = k_lo; k <= k_hi; k++) {
        if (euler_phi(k) > d) continue;
        if (divrem(f, cyclotomic(k)).second.is_zero()) return k;
    }
    return std::nullopt;
}

/* ---------- matrices ---------- */

MatZ mat_identity(long n) {
    MatZ I(n);
    for (long i = 0; i < n; i++) I.at(i, i) = 1;
    return I;
}

bool operator==(const MatZ& A, const MatZ& B) { return A.n == B.n && A.a == B.a; }

MatZ mat_add(const MatZ& A, const MatZ& B) {
    if (A.n != B.n) throw InvalidArgument("mat_add: size mismatch");
    MatZ C(A.n);
    for (size_t i = 0; i < A.a.size(); i++) C.a[i] = A.a[i] + B.a[i];
    return C;
}

MatZ mat_sub(const MatZ& A, const MatZ& B) {
    if (A.n != B.n) throw InvalidArgument("mat_sub: size mismatch");
    MatZ C(A.n);
    for (size_t i = 0; i < A.a.size(); i++) C.a[i] = A.a[i] - B.a[i];
    return C;
}

MatZ mat_mul(const MatZ& A, const MatZ& B) {
    if (A.n != B.n) throw InvalidArgument("mat_mul: size mismatch");
    MatZ C(A.n);
    for (long i = 0; i < A.n; i++)
        for (long k = 0; k < A.n; k++) {
            const Int& aik = A.at(i, k);
            if (aik == 0) continue;
            for (long j = 0; j < A.n; j++) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

MatZ mat_pow(const MatZ& A, const Int& e) {
    if (e < 0) throw InvalidArgument("mat_pow: negative exponent");
    MatZ r = mat_identity(A.n);
    MatZ b = A;
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = mat_mul(r, b);
        k >>= 1;
        if (k > 0) b = mat_mul(b, b);
    }
    return r;
}

MatZ mat_mod(MatZ A, const Int& m) {
    for (auto& x : A.a) x = mod_pos(x, m);
    return A;
}

MatZ mat_mul_mod(const MatZ& A, const MatZ& B, const Int& m) {
    MatZ C = mat_mul(A, B);
    return mat_mod(std::move(C), m);
}

MatZ mat_pow_mod(const MatZ& A, Int e, const Int& m) {
    if (e < 0) throw InvalidArgument("mat_pow_mod: negative exponent");
    MatZ r = mat_identity(A.n);
    MatZ b = mat_mod(A, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mat_mul_mod(r, b, m);
        e >>= 1;
        if (e > 0) b = mat_mul_mod(b, b, m);
    }
    return r;
}

std::vector<Int> mat_vec(const MatZ& A, const std::vector<Int>& v) {
    if (static_cast<long>(v.size()) != A.n) throw InvalidArgument("mat_vec: size mismatch");
    std::vector<Int> r(v.size(), Int(0));
    for (long i = 0; i < A.n; i++)
        for (long j = 0; j < A.n; j++) r[static_cast<size_t>(i)] += A.at(i, j) * v[static_cast<size_t>(j)];
    return r;
}

Int mat_trace(const MatZ& A) {
    Int t = 0;
    for (long i = 0; i < A.n; i++) t += A.at(i, i);
    return t;
}

bool mat_is_identity_mod(const MatZ& A, const Int& m) {
    for (long i = 0; i < A.n; i++)
        for (long j = 0; j < A.n; j++) {
            Int want = (i == j) ? mod_pos(Int(1), m) : Int(0);
            if (mod_pos(A.at(i, j), m) != want) return false;
        }
    return true;
}

std::optional<MatZ> mat_div_exact(const MatZ& A, const Int& q) {
    MatZ C(A.n);
    for (size_t i = 0; i < A.a.size(); i++) {
        if (!mpz_divisible_p(A.a[i].get_mpz_t(), q.get_mpz_t())) return std::nullopt;
        mpz_divexact(C.a[i].get_mpz_t(), A.a[i].get_mpz_t(), q.get_mpz_t());
    }
    return C;
}

std::optional<std::vector<Rat>> linsolve_rat(std::vector<std::vector<Rat>> A, std::vector<Rat> b) {
    size_t n = A.size();
    if (b.size() != n) throw InvalidArgument("linsolve_rat: size mismatch");
    for (size_t col = 0; col < n; col++) {
        size_t piv = n;
        for (size_t i = col; i < n; i++)
            if (A[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv == n) return std::nullopt;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        Rat inv = 1 / A[col][col];
        for (size_t j = col; j < n; j++) A[col][j] *= inv;
        b[col] *= inv;
        for (size_t i = 0; i < n; i++) {
            if (i == col || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (size_t j = col; j < n; j++) A[i][j] -= f * A[col][j];
            b[i] -= f * b[col];
        }
    }
    return b;
}

}  // namespace skolem
