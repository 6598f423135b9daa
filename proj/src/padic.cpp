#include "skolemkit/padic.hpp"

#include <algorithm>

namespace skolem {

bool prime_admissible(const SequenceSpec& s, const Int& p, const Int& extra_coprime) {
    if (!is_integral(s)) {
        throw InvalidArgument("prime admissibility is defined for integral specs");
    }
    if (p < 3 || !is_probable_prime(p)) {
        return false;
    }
    Int cd = s.rec.coeffs.back().get_num();
    if (cd % p == 0) {
        return false;
    }
    if (extra_coprime != 0 && extra_coprime % p == 0) {
        return false;
    }
    PolyQ gs = squarefree_part(s.rec.char_poly());
    Rat disc = discriminant(gs);
    if (disc.get_num() % p == 0) {
        return false;
    }
    return splits_completely_mod_p(gs, p);
}

Int choose_prime(const SequenceSpec& s, PrimeStrategy strategy, const Int& param,
                 const Int& search_cap, const Int& extra_coprime) {
    if (strategy == PrimeStrategy::Fixed) {
        if (!prime_admissible(s, param, extra_coprime)) {
            throw InvalidArgument("prime " + param.get_str() + " is not admissible here");
        }
        return param;
    }
    Int q = strategy == PrimeStrategy::Smallest ? Int(3) : next_prime_above(param);
    while (q <= search_cap) {
        if (prime_admissible(s, q, extra_coprime)) {
            return q;
        }
        q = next_prime_above(q);
    }
    throw ResourceLimit("no admissible prime up to " + search_cap.get_str());
}

namespace {

// distinct prime divisors by trial division, plus any remaining cofactor
// (composite cofactors are kept as candidate divisors; reduction attempts
// against them are sound either way)
std::vector<Int> rough_prime_divisors(Int n) {
    std::vector<Int> out;
    for (Int q = 2; q * q <= n && q < 1000000; q = q == 2 ? Int(3) : q + 2) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) {
                n /= q;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

}  // namespace

Int matrix_order_mod_p(const MatZ& A, const PolyQ& g, const Int& p) {
    if (p < 2 || !is_probable_prime(p)) {
        throw InvalidArgument("matrix order needs a prime modulus");
    }
    if (g.degree() != A.n) {
        throw InvalidArgument("characteristic polynomial degree mismatch");
    }
    PolyM gbar = polym_from(g, p);
    if (polym_eval(gbar, 0, p) == 0) {
        throw InvalidArgument("matrix is singular mod p");
    }

    if (splits_completely_mod_p(g, p)) {
        Int L = 1;
        for (const Int& r : roots_mod_p(gbar, p)) {
            Int o = multiplicative_order_mod_p(r, p);
            L = lcm(L, o);
        }
        if (!mat_is_identity_mod(mat_pow_mod(A, L, p), p)) {
            throw InternalError("split-path matrix order failed verification");
        }
        return L;
    }

    Int pa = 1;
    while (pa < A.n) {
        pa *= p;
    }
    Int N = pa;
    PolyM f = polym_divrem(gbar, polym_gcd(gbar, polym_derivative(gbar, p), p), p).first;
    PolyM x = {0, 1};
    PolyM h = polym_rem(x, f, p);
    for (long e = 1; polym_degree(f) > 0 && e <= g.degree(); ++e) {
        h = polym_powmod(h, p, f, p);
        PolyM ge = polym_gcd(polym_sub(h, x, p), f, p);
        if (polym_degree(ge) > 0) {
            N = lcm(N, pow_int(p, static_cast<unsigned long>(e)) - 1);
            f = polym_divrem(f, ge, p).first;
            h = polym_rem(h, f, p);
        }
    }

    Int L = N;
    for (const Int& q : rough_prime_divisors(N)) {
        while (L % q == 0 && mat_is_identity_mod(mat_pow_mod(A, L / q, p), p)) {
            L /= q;
        }
    }
    if (!mat_is_identity_mod(mat_pow_mod(A, L, p), p)) {
        throw InternalError("matrix order reduction lost the identity");
    }
    return L;
}

long tail_bound(long K, const Int& p) {
    if (p < 3) {
        throw InvalidArgument("tail bound needs an odd prime");
    }
    long best = -1;
    for (long k = K + 1;; ++k) {
        if (best >= 0 && Int(k) * (p - 2) + 1 >= Int(best) * (p - 1)) {
            break;
        }
        long e = k - factorial_valuation(static_cast<unsigned long>(k), p);
        if (best < 0 || e < best) {
            best = e;
        }
    }
    return best;
}

namespace {

Int eval_int_mod(const PolyQ& f, const Int& x, const Int& m) {
    Int acc = 0;
    for (int i = f.degree(); i >= 0; --i) {
        acc = mod_pos(acc * x + f.coeff(i).get_num(), m);
    }
    return acc;
}

}  // namespace

std::vector<Int> hensel_lift_roots(const PolyQ& g, const Int& p, long precision) {
    if (p < 3 || !is_probable_prime(p)) {
        throw InvalidArgument("root lifting needs an odd prime");
    }
    if (precision < 1) {
        throw InvalidArgument("precision must be positive");
    }
    if (g.is_zero()) {
        throw InvalidArgument("cannot lift roots of the zero polynomial");
    }
    PolyQ gs = squarefree_part(g);
    if (!splits_completely_mod_p(gs, p)) {
        throw InvalidArgument("polynomial does not split completely mod p");
    }
    if (discriminant(gs).get_num() % p == 0) {
        throw InvalidArgument("p divides the discriminant of the squarefree part");
    }
    PolyQ f = poly_from_int_coeffs(primitive_int_poly(gs));
    PolyQ fd = derivative(f);
    std::vector<Int> out;
    for (const Int& r0 : roots_mod_p(polym_from(gs, p), p)) {
        Int x = r0;
        long have = 1;
        while (have < precision) {
            have = std::min(2 * have, precision);
            Int pk = pow_int(p, static_cast<unsigned long>(have));
            Int fx = eval_int_mod(f, x, pk);
            Int dfx = eval_int_mod(fd, x, pk);
            x = mod_pos(x - fx * mod_inverse(dfx, pk), pk);
        }
        out.push_back(x);
    }
    return out;
}

Int padic_log(const Int& x, const Int& p, long precision) {
    if (p < 3 || !is_probable_prime(p)) {
        throw InvalidArgument("p-adic log needs an odd prime");
    }
    if (precision < 1) {
        throw InvalidArgument("precision must be positive");
    }
    if (mod_pos(x - 1, p) != 0) {
        throw InvalidArgument("p-adic log needs an argument congruent to 1 mod p");
    }
    long amax = 1;
    {
        Int pa = p;
        while (pa <= precision + 24) {
            pa *= p;
            ++amax;
        }
    }
    long terms = precision + amax + 2;
    long work = precision + 2 * amax;
    Int pw = pow_int(p, static_cast<unsigned long>(work));
    Int z = mod_pos(x - 1, pw);
    Int acc = 0;
    for (long i = 1; i <= terms; ++i) {
        Int zi = pow_mod(z, i, pw);
        Int ii(i);
        long a = 0;
        while (ii % p == 0) {
            ii /= p;
            ++a;
        }
        Int t = zi / pow_int(p, static_cast<unsigned long>(a));
        t = mod_pos(t * mod_inverse(ii, pw), pw);
        if (i % 2 == 1) {
            acc += t;
        } else {
            acc -= t;
        }
    }
    return mod_pos(acc, pow_int(p, static_cast<unsigned long>(precision)));
}

namespace {

// inverse of A mod p^prec: Gauss-Jordan mod p, then Newton steps double the
// precision
MatZ mat_inverse_mod_pp(const MatZ& A, const Int& p, long prec) {
    long n = A.n;
    MatZ m = mat_mod(A, p);
    MatZ x = mat_identity(n);
    for (long col = 0; col < n; ++col) {
        long piv = -1;
        for (long r = col; r < n; ++r) {
            if (m.at(r, col) % p != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) {
            throw InvalidArgument("matrix is singular mod p");
        }
        if (piv != col) {
            for (long j = 0; j < n; ++j) {
                std::swap(m.at(piv, j), m.at(col, j));
                std::swap(x.at(piv, j), x.at(col, j));
            }
        }
        Int inv = mod_inverse(m.at(col, col), p);
        for (long j = 0; j < n; ++j) {
            m.at(col, j) = mod_pos(m.at(col, j) * inv, p);
            x.at(col, j) = mod_pos(x.at(col, j) * inv, p);
        }
        for (long r = 0; r < n; ++r) {
            if (r == col || m.at(r, col) == 0) {
                continue;
            }
            Int f = m.at(r, col);
            for (long j = 0; j < n; ++j) {
                m.at(r, j) = mod_pos(m.at(r, j) - f * m.at(col, j), p);
                x.at(r, j) = mod_pos(x.at(r, j) - f * x.at(col, j), p);
            }
        }
    }
    long e = 1;
    while (e < prec) {
        e = e * 2 < prec ? e * 2 : prec;
        Int pe = pow_int(p, static_cast<unsigned long>(e));
        MatZ two_minus = mat_sub(mat_identity(n), mat_mul_mod(mat_mod(A, pe), x, pe));
        for (long i = 0; i < n; ++i) {
            two_minus.at(i, i) += 1;
        }
        x = mat_mul_mod(x, mat_mod(two_minus, pe), pe);
    }
    return x;
}

}  // namespace

SeriesEngine::SeriesEngine(const SequenceSpec& root, const Int& center, const Int& L, const Int& p,
                           long precision)
    : p_(p), center_(center), period_(L), prec_(precision) {
    if (p < 3 || !is_probable_prime(p)) {
        throw InvalidArgument("series engine needs an odd prime");
    }
    if (L <= 0) {
        throw InvalidArgument("period must be positive");
    }
    if (!root.rec.integral()) {
        throw InvalidArgument("series engine needs integral recurrence coefficients");
    }
    if (precision < 0) {
        throw InvalidArgument("series precision must be nonnegative");
    }
    long d = root.order();
    MatZ A = companion_matrix(root.rec);
    if (precision == 0) {
        std::vector<Rat> window = terms_range(root, center, d);
        scale_ = 1;
        for (const Rat& v : window) {
            scale_ = lcm(scale_, v.get_den());
        }
        if (gcd(scale_, p) != 1) {
            throw InvalidArgument("state denominator at the center shares a factor with p");
        }
        state_.resize(static_cast<size_t>(d));
        for (long i = 0; i < d; ++i) {
            Rat scaled = window[static_cast<size_t>(d - 1 - i)] * Rat(scale_);
            state_[static_cast<size_t>(i)] = scaled.get_num();
        }
        MatZ AL = mat_pow(A, L);
        for (long i = 0; i < d; ++i) {
            AL.at(i, i) -= 1;
        }
        auto B = mat_div_exact(AL, p);
        if (!B) {
            throw InvalidArgument("A^L is not congruent to the identity mod p");
        }
        B_ = *B;
        w_.push_back(state_.back());
        return;
    }
    pP_ = pow_int(p, static_cast<unsigned long>(precision));
    scale_ = 1;
    for (const Rat& v : root.initial) {
        scale_ = lcm(scale_, v.get_den());
    }
    if (gcd(scale_, p) != 1) {
        throw InvalidArgument("state denominator at the center shares a factor with p");
    }
    std::vector<Int> st(static_cast<size_t>(d));
    for (long i = 0; i < d; ++i) {
        Rat scaled = root.initial[static_cast<size_t>(d - 1 - i)] * Rat(scale_);
        st[static_cast<size_t>(i)] = mod_pos(scaled.get_num(), pP_);
    }
    Int delta = center - root.shift;
    MatZ T = delta >= 0 ? mat_pow_mod(A, delta, pP_)
                        : mat_pow_mod(mat_inverse_mod_pp(A, p, precision), -delta, pP_);
    state_ = mat_vec(T, st);
    for (Int& v : state_) {
        v = mod_pos(v, pP_);
    }
    Int pP1 = pP_ * p;
    MatZ AL = mat_pow_mod(A, L, pP1);
    B_ = MatZ(d);
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) {
            Int v = AL.at(i, j);
            if (i == j) {
                v -= 1;
            }
            v = mod_pos(v, pP1);
            if (v % p != 0) {
                throw InvalidArgument("A^L is not congruent to the identity mod p");
            }
            B_.at(i, j) = mod_pos(v / p, pP_);
        }
    }
    w_.push_back(state_.back());
}

const Int& SeriesEngine::term(long k) {
    if (k < 0) {
        throw InvalidArgument("series term index must be nonnegative");
    }
    while (computed() < k) {
        state_ = mat_vec(B_, state_);
        if (prec_ > 0) {
            for (Int& v : state_) {
                v = mod_pos(v, pP_);
            }
        }
        w_.push_back(state_.back());
    }
    return w_[static_cast<size_t>(k)];
}

std::vector<Int> SeriesEngine::terms_prefix(long K) {
    term(K);
    return std::vector<Int>(w_.begin(), w_.begin() + K + 1);
}

const Int& SeriesEngine::stirling(long k, long j) {
    static const Int zero = 0;
    if (j < 0 || j > k) {
        return zero;
    }
    while (static_cast<long>(srows_.size()) <= k) {
        srows_.push_back(stirling_row(static_cast<unsigned>(srows_.size())));
    }
    return srows_[static_cast<size_t>(k)][static_cast<size_t>(j)];
}

JumpTracker::JumpTracker(long j, const Int& p) : j_(j), K_(0), p_(p), N_(0), pk_(1) {
    if (j < 1) {
        throw InvalidArgument("jump trackers start at j = 1");
    }
    if (p < 3) {
        throw InvalidArgument("jump tracker needs an odd prime");
    }
}

void JumpTracker::extend(const Int& s_kj, const Int& w_k) {
    ++K_;
    pk_ *= p_;
    N_ = N_ * K_ + s_kj * w_k * pk_;
}

std::optional<long> JumpTracker::valuation() const {
    if (K_ == 0 || N_ == 0) {
        return std::nullopt;
    }
    return *padic_valuation(N_, p_) - factorial_valuation(static_cast<unsigned long>(K_), p_);
}

bool JumpTracker::decided() const {
    auto v = valuation();
    return v.has_value() && *v < tail_bound(K_, p_);
}

}  // namespace skolem
