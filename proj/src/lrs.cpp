#include "skolemkit/lrs.hpp"

#include <algorithm>

namespace skolem {

Recurrence::Recurrence(std::vector<Rat> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) throw InvalidArgument("Recurrence: order must be >= 1");
    if (coeffs.back() == 0) throw InvalidArgument("Recurrence: last coefficient must be nonzero");
}

PolyQ Recurrence::char_poly() const {
    int d = order();
    std::vector<Rat> c(static_cast<size_t>(d) + 1);
    c[static_cast<size_t>(d)] = 1;
    for (int j = 1; j <= d; j++) c[static_cast<size_t>(d - j)] = -coeffs[static_cast<size_t>(j - 1)];
    return PolyQ(std::move(c));
}

bool Recurrence::integral() const {
    for (const Rat& c : coeffs)
        if (c.get_den() != 1) return false;
    return true;
}

Recurrence recurrence_from_char_poly(const PolyQ& h) {
    int d = h.degree();
    if (d < 1 || h.lc() != 1) throw InvalidArgument("recurrence_from_char_poly: monic nonconstant poly required");
    std::vector<Rat> c(static_cast<size_t>(d));
    for (int j = 1; j <= d; j++) c[static_cast<size_t>(j - 1)] = -h.coeff(d - j);
    return Recurrence(std::move(c));
}

SequenceSpec::SequenceSpec(Recurrence r, std::vector<Rat> init, Int sh)
    : rec(std::move(r)), initial(std::move(init)), shift(std::move(sh)) {
    if (static_cast<int>(initial.size()) != rec.order())
        throw InvalidArgument("SequenceSpec: initial window must match order");
}

std::vector<Rat> terms_range(const SequenceSpec& s, const Int& lo, long count) {
    if (count <= 0) return {};
    int d = s.order();
    std::vector<Rat> win = s.initial;
    Int base = s.shift;
    Int hi = lo + Int(count - 1);
    const auto& c = s.rec.coeffs;
    while (base + Int(static_cast<long>(win.size()) - 1) < hi) {
        Rat next = 0;
        size_t n = win.size();
        for (int j = 1; j <= d; j++) next += c[static_cast<size_t>(j - 1)] * win[n - static_cast<size_t>(j)];
        win.push_back(next);
    }
    while (base > lo) {
        // u_{base-1} = (u_{base-1+d} - sum_{j<d} c_j u_{base-1+d-j}) / c_d
        Rat top = win[static_cast<size_t>(d - 1)];
        for (int j = 1; j < d; j++) top -= c[static_cast<size_t>(j - 1)] * win[static_cast<size_t>(d - 1 - j)];
        win.insert(win.begin(), top / c[static_cast<size_t>(d - 1)]);
        base -= 1;
    }
    size_t off = static_cast<size_t>(Int(lo - base).get_si());
    return std::vector<Rat>(win.begin() + static_cast<long>(off), win.begin() + static_cast<long>(off) + count);
}

static std::vector<Int> int_coeffs(const Recurrence& r) {
    std::vector<Int> c;
    c.reserve(r.coeffs.size());
    for (const Rat& x : r.coeffs) {
        if (x.get_den() != 1) throw InvalidArgument("integral recurrence required");
        c.push_back(x.get_num());
    }
    return c;
}

Rat term_at(const SequenceSpec& s, const Int& n) {
    int d = s.order();
    bool integral = is_integral(s);
    if (integral && n >= s.shift + Int(64)) {
        std::vector<Int> c = int_coeffs(s.rec);
        MatZ A = companion_matrix(s.rec);
        std::vector<Int> v(static_cast<size_t>(d));
        for (int j = 0; j < d; j++) v[static_cast<size_t>(j)] = s.initial[static_cast<size_t>(d - 1 - j)].get_num();
        std::vector<Int> w = mat_vec(mat_pow(A, n - s.shift), v);
        return Rat(w.back());
    }
    if (integral && n <= s.shift - Int(64)) {
        // x_m = c_d^m u_{shift+d-1-m} is an integer sequence
        std::vector<Int> c = int_coeffs(s.rec);
        Int t = c.back();
        std::vector<Rat> b(static_cast<size_t>(d));
        for (int j = 1; j < d; j++) b[static_cast<size_t>(j - 1)] = Rat(-c[static_cast<size_t>(d - 1 - j)] * pow_int(t, static_cast<unsigned long>(j - 1)));
        b[static_cast<size_t>(d - 1)] = Rat(pow_int(t, static_cast<unsigned long>(d - 1)));
        MatZ B = companion_matrix(Recurrence(b));
        std::vector<Int> v(static_cast<size_t>(d));
        Int tp = 1;
        for (int j = 0; j < d; j++) {
            // x_j = t^j u_{shift+d-1-j}; state vector is (x_{d-1}, ..., x_0)
            v[static_cast<size_t>(d - 1 - j)] = tp * s.initial[static_cast<size_t>(d - 1 - j)].get_num();
            tp *= t;
        }
        Int m = s.shift + Int(d - 1) - n;
        std::vector<Int> w = mat_vec(mat_pow(B, m), v);
        Rat r(w.back());
        Rat denom(pow_int(t, static_cast<unsigned long>(m.get_ui())));
        Rat out = r / denom;
        out.canonicalize();
        return out;
    }
    return terms_range(s, n, 1)[0];
}

Recurrence reverse(const Recurrence& r) {
    int d = r.order();
    const auto& c = r.coeffs;
    const Rat& cd = c[static_cast<size_t>(d - 1)];
    std::vector<Rat> rc(static_cast<size_t>(d));
    for (int j = 1; j < d; j++) {
        Rat x = -c[static_cast<size_t>(d - j - 1)] / cd;
        x.canonicalize();
        rc[static_cast<size_t>(j - 1)] = x;
    }
    Rat last = Rat(1) / cd;
    last.canonicalize();
    rc[static_cast<size_t>(d - 1)] = last;
    return Recurrence(std::move(rc));
}

bool is_integral(const SequenceSpec& s) {
    for (const Rat& c : s.rec.coeffs)
        if (c.get_den() != 1) return false;
    for (const Rat& u : s.initial)
        if (u.get_den() != 1) return false;
    return true;
}

SequenceSpec normalize_to_integer(const SequenceSpec& s) {
    int d = s.order();
    Int ell = 1;
    for (const Rat& c : s.rec.coeffs) {
        Int den = c.get_den(), g;
        mpz_gcd(g.get_mpz_t(), ell.get_mpz_t(), den.get_mpz_t());
        ell = ell / g * den;
    }
    std::vector<Rat> coeffs(static_cast<size_t>(d));
    Int lp = 1;
    for (int j = 1; j <= d; j++) {
        lp *= ell;
        Rat x = s.rec.coeffs[static_cast<size_t>(j - 1)] * Rat(lp);
        x.canonicalize();
        coeffs[static_cast<size_t>(j - 1)] = x;
    }
    std::vector<Rat> scaled(static_cast<size_t>(d));
    Int den_lcm = 1;
    lp = 1;
    for (int j = 0; j < d; j++) {
        Rat v = s.initial[static_cast<size_t>(j)] * Rat(lp);
        v.canonicalize();
        scaled[static_cast<size_t>(j)] = v;
        Int den = v.get_den(), g;
        mpz_gcd(g.get_mpz_t(), den_lcm.get_mpz_t(), den.get_mpz_t());
        den_lcm = den_lcm / g * den;
        lp *= ell;
    }
    Int sc = ell * den_lcm;
    std::vector<Rat> init(static_cast<size_t>(d));
    for (int j = 0; j < d; j++) {
        Rat v = scaled[static_cast<size_t>(j)] * Rat(sc);
        v.canonicalize();
        init[static_cast<size_t>(j)] = v;
    }
    SequenceSpec out(Recurrence(std::move(coeffs)), std::move(init), s.shift);
    out.orig_stride = s.orig_stride;
    out.orig_shift = s.orig_shift;
    return out;
}

SequenceSpec minimal_recurrence(const SequenceSpec& s) {
    int d = s.order();
    std::vector<Rat> u = terms_range(s, s.shift, 2 * d + 1);
    bool all_zero = true;
    for (int j = 0; j < d; j++)
        if (u[static_cast<size_t>(j)] != 0) all_zero = false;
    if (all_zero) {
        SequenceSpec out(Recurrence({Rat(1)}), {Rat(0)}, s.shift);
        out.orig_stride = s.orig_stride;
        out.orig_shift = s.orig_shift;
        return out;
    }
    for (int r = 1; r <= d; r++) {
        std::vector<std::vector<Rat>> H(static_cast<size_t>(r), std::vector<Rat>(static_cast<size_t>(r)));
        std::vector<Rat> rhs(static_cast<size_t>(r));
        for (int i = 0; i < r; i++) {
            for (int j = 0; j < r; j++) H[static_cast<size_t>(i)][static_cast<size_t>(j)] = u[static_cast<size_t>(i + j)];
            rhs[static_cast<size_t>(i)] = u[static_cast<size_t>(i + r)];
        }
        auto a = linsolve_rat(std::move(H), std::move(rhs));
        if (!a) continue;
        if ((*a)[0] == 0) continue;
        std::vector<Rat> coeffs(static_cast<size_t>(r));
        for (int k = 1; k <= r; k++) coeffs[static_cast<size_t>(k - 1)] = (*a)[static_cast<size_t>(r - k)];
        bool ok = true;
        for (int n = r; n <= 2 * d && ok; n++) {
            Rat pred = 0;
            for (int k = 1; k <= r; k++) pred += coeffs[static_cast<size_t>(k - 1)] * u[static_cast<size_t>(n - k)];
            if (pred != u[static_cast<size_t>(n)]) ok = false;
        }
        if (!ok) continue;
        std::vector<Rat> init(u.begin(), u.begin() + r);
        SequenceSpec out(Recurrence(std::move(coeffs)), std::move(init), s.shift);
        out.orig_stride = s.orig_stride;
        out.orig_shift = s.orig_shift;
        return out;
    }
    throw InternalError("minimal_recurrence: no generator found");
}

static PolyQ interpolate(const std::vector<Rat>& xs, std::vector<Rat> ys) {
    size_t n = xs.size();
    for (size_t k = 1; k < n; k++)
        for (size_t i = n - 1; i >= k; i--) ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - k]);
    PolyQ p;
    PolyQ basis = poly_from_ints({1});
    for (size_t i = 0; i < n; i++) {
        p = p + ys[i] * basis;
        basis = basis * PolyQ({-xs[i], Rat(1)});
    }
    return p;
}

// Res_y(g(y), g(x y)); roots are the ratios of roots of g
static PolyQ ratio_poly(const PolyQ& g) {
    int d = g.degree();
    long npts = static_cast<long>(d) * d + 1;
    std::vector<Rat> xs, ys;
    xs.reserve(static_cast<size_t>(npts));
    for (long t = 0; static_cast<long>(xs.size()) < npts; t++) {
        xs.push_back(Rat(t + 1));
        if (static_cast<long>(xs.size()) < npts && t > 0) xs.push_back(Rat(-t));
    }
    for (const Rat& x0 : xs) {
        std::vector<Rat> gc = g.c;
        Rat xp = 1;
        for (size_t j = 0; j < gc.size(); j++) {
            gc[j] *= xp;
            xp *= x0;
        }
        ys.push_back(resultant(g, PolyQ(std::move(gc))));
    }
    return interpolate(xs, std::move(ys));
}

LrsClass classify(const SequenceSpec& s) {
    int d = s.order();
    bool all_zero = true;
    for (int j = 0; j < d; j++)
        if (s.initial[static_cast<size_t>(j)] != 0) all_zero = false;
    if (all_zero) return LrsClass::IdenticallyZero;
    SequenceSpec m = minimal_recurrence(s);
    PolyQ g = m.rec.char_poly();
    if (poly_gcd(g, derivative(g)).degree() >= 1) return LrsClass::NotSimple;
    int dm = m.order();
    if (dm == 1) return LrsClass::SimpleNonDegenerate;
    PolyQ r = ratio_poly(g);
    if (r.degree() != dm * dm) throw InternalError("classify: ratio polynomial degree");
    PolyQ lin = poly_from_ints({-1, 1});
    for (int i = 0; i < dm; i++) {
        auto [q, rem] = divrem(r, lin);
        if (!rem.is_zero()) throw InternalError("classify: ratio polynomial at 1");
        r = q;
    }
    unsigned deg = static_cast<unsigned>(r.degree());
    unsigned khi = 2 * deg * deg + 6;
    if (root_of_unity_order_dividing(r, 2, khi).has_value()) return LrsClass::Degenerate;
    return LrsClass::SimpleNonDegenerate;
}

MatZ companion_matrix(const Recurrence& r) {
    std::vector<Int> c = int_coeffs(r);
    int d = r.order();
    MatZ A(d);
    for (int j = 0; j < d; j++) A.at(0, j) = c[static_cast<size_t>(j)];
    for (int i = 1; i < d; i++) A.at(i, i - 1) = 1;
    return A;
}

PolyQ subsequence_char_poly(const Recurrence& r, const Int& stride) {
    if (stride < 1) throw InvalidArgument("subsequence_char_poly: stride must be >= 1");
    int d = r.order();
    MatZ B = mat_pow(companion_matrix(r), stride);
    std::vector<Rat> p(static_cast<size_t>(d) + 1);
    MatZ C = B;
    for (int j = 1; j <= d; j++) {
        p[static_cast<size_t>(j)] = Rat(mat_trace(C));
        if (j < d) C = mat_mul(C, B);
    }
    std::vector<Rat> e(static_cast<size_t>(d) + 1);
    e[0] = 1;
    for (int k = 1; k <= d; k++) {
        Rat sum = 0;
        int sign = 1;
        for (int i = 1; i <= k; i++) {
            Rat term = e[static_cast<size_t>(k - i)] * p[static_cast<size_t>(i)];
            sum += sign > 0 ? term : -term;
            sign = -sign;
        }
        Rat ek = sum / Rat(k);
        ek.canonicalize();
        e[static_cast<size_t>(k)] = ek;
    }
    std::vector<Rat> h(static_cast<size_t>(d) + 1);
    h[static_cast<size_t>(d)] = 1;
    for (int k = 1; k <= d; k++) {
        Rat v = e[static_cast<size_t>(k)];
        h[static_cast<size_t>(d - k)] = (k % 2 == 0) ? v : -v;
    }
    return PolyQ(std::move(h));
}

SequenceSpec subsequence_spec(const SequenceSpec& s, const Int& stride, const Int& offset) {
    if (stride < 1) throw InvalidArgument("subsequence_spec: stride must be >= 1");
    int d = s.order();
    PolyQ h = subsequence_char_poly(s.rec, stride);
    std::vector<Rat> init(static_cast<size_t>(d));
    for (int j = 0; j < d; j++) init[static_cast<size_t>(j)] = term_at(s, offset + stride * Int(j));
    SequenceSpec out(recurrence_from_char_poly(h), std::move(init), Int(0));
    out.orig_stride = s.orig_stride * stride;
    out.orig_shift = s.orig_shift + s.orig_stride * offset;
    return out;
}

std::optional<OrbitMod> orbit_mod(const SequenceSpec& s, const Int& m, long cap) {
    if (m < 2) throw InvalidArgument("orbit_mod: modulus must be >= 2");
    if (!is_integral(s)) throw InvalidArgument("orbit_mod: integral spec required");
    std::vector<Int> c = int_coeffs(s.rec);
    Int g;
    mpz_gcd(g.get_mpz_t(), c.back().get_mpz_t(), m.get_mpz_t());
    if (g != 1) throw InvalidArgument("orbit_mod: modulus shares a factor with the last coefficient");
    int d = s.order();
    MatZ A = mat_mod(companion_matrix(s.rec), m);
    std::vector<Int> st(static_cast<size_t>(d));
    for (int j = 0; j < d; j++) st[static_cast<size_t>(j)] = mod_pos(s.initial[static_cast<size_t>(d - 1 - j)].get_num(), m);
    std::vector<Int> st0 = st;
    OrbitMod out;
    out.base = s.shift;
    for (long step = 0;; step++) {
        if (step > cap) return std::nullopt;
        out.values.push_back(st[static_cast<size_t>(d - 1)]);
        st = mat_vec(A, st);
        for (auto& x : st) x = mod_pos(x, m);
        if (st == st0) {
            out.period = Int(step + 1);
            return out;
        }
    }
}

}  // namespace skolem
