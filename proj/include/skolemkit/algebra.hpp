#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skolem {

using Int = mpz_class;
using Rat = mpq_class;

struct InvalidArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

/* ---------- integers ---------- */

// v_p(n); nullopt means n == 0
std::optional<long> padic_valuation(const Int& n, const Int& p);
Int pow_int(const Int& base, unsigned long e);
Int factorial_int(unsigned long k);
long digit_sum_base(const Int& n, const Int& p);
// v_p(k!) by the digit-sum formula
long factorial_valuation(unsigned long k, const Int& p);

Int mod_pos(const Int& a, const Int& m);
Int mod_inverse(const Int& a, const Int& m);
Int pow_mod(const Int& b, const Int& e, const Int& m);
bool is_probable_prime(const Int& n);
Int next_prime_above(const Int& n);

// prime factorization, ascending, with multiplicity
std::vector<Int> factor_integer(Int n);
Int multiplicative_order_mod_p(const Int& a, const Int& p);

/* ---------- polynomials over Q ---------- */

// ascending coefficients; zero polynomial has empty c
struct PolyQ {
    std::vector<Rat> c;

    PolyQ() = default;
    explicit PolyQ(std::vector<Rat> cc) : c(std::move(cc)) { trim(); }

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Rat lc() const { return c.empty() ? Rat(0) : c.back(); }
    Rat coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)] : Rat(0);
    }
    Rat eval(const Rat& x) const;
};

PolyQ poly_from_ints(const std::vector<long>& v);
PolyQ poly_x_power(int k);
bool operator==(const PolyQ& a, const PolyQ& b);
PolyQ operator+(const PolyQ& a, const PolyQ& b);
PolyQ operator-(const PolyQ& a, const PolyQ& b);
PolyQ operator*(const PolyQ& a, const PolyQ& b);
PolyQ operator*(const Rat& s, const PolyQ& a);
PolyQ derivative(const PolyQ& f);
// b nonzero; returns {quotient, remainder}
std::pair<PolyQ, PolyQ> divrem(const PolyQ& a, const PolyQ& b);
PolyQ make_monic(const PolyQ& f);
// monic gcd; via primitive PRS on integer images
PolyQ poly_gcd(PolyQ a, PolyQ b);
PolyQ squarefree_part(const PolyQ& f);
Rat resultant(const PolyQ& f, const PolyQ& g);
Rat discriminant(const PolyQ& f);
// content-free integer image: primitive, positive leading coefficient
std::vector<Int> primitive_int_poly(const PolyQ& f);
PolyQ poly_from_int_coeffs(const std::vector<Int>& v);
PolyQ compose(const PolyQ& f, const PolyQ& g);

/* ---------- polynomials mod m ---------- */

// residues in [0, m), ascending, trailing zeros stripped
using PolyM = std::vector<Int>;

PolyM polym_trim(PolyM f);
int polym_degree(const PolyM& f);
PolyM polym_from(const PolyQ& f, const Int& m);  // denominators must be units mod m
PolyM polym_add(const PolyM& a, const PolyM& b, const Int& m);
PolyM polym_sub(const PolyM& a, const PolyM& b, const Int& m);
PolyM polym_mul(const PolyM& a, const PolyM& b, const Int& m);
PolyM polym_scale(const Int& s, const PolyM& a, const Int& m);
// f must have unit leading coefficient mod m
PolyM polym_rem(PolyM a, const PolyM& f, const Int& m);
std::pair<PolyM, PolyM> polym_divrem(PolyM a, const PolyM& f, const Int& m);
PolyM polym_make_monic(PolyM f, const Int& m);
PolyM polym_powmod(PolyM base, Int e, const PolyM& f, const Int& m);
Int polym_eval(const PolyM& f, const Int& x, const Int& m);
// p prime; monic gcd over F_p
PolyM polym_gcd(PolyM a, PolyM b, const Int& p);
// g = gcd monic, plus s,t with s*a + t*b = g over F_p
PolyM polym_gcdext(PolyM a, PolyM b, const Int& p, PolyM& s, PolyM& t);
PolyM polym_derivative(const PolyM& f, const Int& m);

// distinct linear factors over F_p for the full degree of g
bool splits_completely_mod_p(const PolyQ& g, const Int& p);
std::vector<Int> roots_mod_p(const PolyM& f, const Int& p);

/* ---------- misc polynomial tables ---------- */

// coefficients of x(x-1)...(x-k+1): signed Stirling numbers s(k,j), j = 0..k
std::vector<Int> stirling_row(unsigned k);
PolyQ cyclotomic(unsigned k);
// smallest k in [k_lo, k_hi] with Phi_k | f
std::optional<unsigned> root_of_unity_order_dividing(const PolyQ& f, unsigned k_lo, unsigned k_hi);

/* ---------- matrices ---------- */

struct MatZ {
    long n = 0;
    std::vector<Int> a;

    MatZ() = default;
    explicit MatZ(long nn) : n(nn), a(static_cast<size_t>(nn) * static_cast<size_t>(nn), Int(0)) {}
    Int& at(long i, long j) { return a[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)]; }
    const Int& at(long i, long j) const {
        return a[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
    }
};

MatZ mat_identity(long n);
bool operator==(const MatZ& A, const MatZ& B);
MatZ mat_add(const MatZ& A, const MatZ& B);
MatZ mat_sub(const MatZ& A, const MatZ& B);
MatZ mat_mul(const MatZ& A, const MatZ& B);
MatZ mat_pow(const MatZ& A, const Int& e);
MatZ mat_mod(MatZ A, const Int& m);
MatZ mat_mul_mod(const MatZ& A, const MatZ& B, const Int& m);
MatZ mat_pow_mod(const MatZ& A, Int e, const Int& m);
std::vector<Int> mat_vec(const MatZ& A, const std::vector<Int>& v);
Int mat_trace(const MatZ& A);
bool mat_is_identity_mod(const MatZ& A, const Int& m);
// every entry divisible by q, else nullopt
std::optional<MatZ> mat_div_exact(const MatZ& A, const Int& q);

// Gaussian elimination; nullopt when singular / inconsistent
std::optional<std::vector<Rat>> linsolve_rat(std::vector<std::vector<Rat>> A, std::vector<Rat> b);

}  // namespace skolem
