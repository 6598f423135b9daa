#pragma once

#include "skolemkit/lrs.hpp"

namespace skolem {

enum class PrimeStrategy { Smallest, SmallestAbove, Fixed };

// odd prime, coprime to the trailing coefficient and to extra_coprime,
// coprime to disc(squarefree_part(g)), and g splits completely mod p
bool prime_admissible(const SequenceSpec& s, const Int& p, const Int& extra_coprime = 1);

// Smallest: least admissible p >= 3; SmallestAbove: least admissible p > param;
// Fixed: param itself, rejected if inadmissible. search_cap bounds the p examined.
Int choose_prime(const SequenceSpec& s, PrimeStrategy strategy, const Int& param,
                 const Int& search_cap, const Int& extra_coprime = 1);

// some L with A^L == I mod p, minimal when g mod p is separable and split.
// g must be the characteristic polynomial of A. Throws if A is singular mod p.
Int matrix_order_mod_p(const MatZ& A, const PolyQ& g, const Int& p);

// min over k > K of k - v_p(k!); every tail term of the jump series beyond
// index K has valuation at least this
long tail_bound(long K, const Int& p);

// one residue mod p^precision per distinct root of g mod p, ordered by the
// mod-p root it lifts; needs g split and unramified at p
std::vector<Int> hensel_lift_roots(const PolyQ& g, const Int& p, long precision);

// truncated log series of x, x == 1 mod p, exact mod p^precision
Int padic_log(const Int& x, const Int& p, long precision);

// Expansion D * u_{c+Lt} = sum_k binom(t,k) p^k w_k along the progression
// c + L*Z, where A^L == I mod p. D clears the denominators of the state at c
// and must be coprime to p. Terms w_k are integers, produced on demand.
//
// With precision > 0 every term is only correct mod p^precision; valuations
// read off the terms stay exact as long as they come out below precision.
// That mode never forms A^L exactly, so huge strides stay cheap.
class SeriesEngine {
public:
    SeriesEngine(const SequenceSpec& root, const Int& center, const Int& L, const Int& p,
                 long precision = 0);

    const Int& scale() const { return scale_; }
    const Int& prime() const { return p_; }
    const Int& center() const { return center_; }
    const Int& period() const { return period_; }
    long precision() const { return prec_; }

    const Int& term(long k);
    long computed() const { return static_cast<long>(w_.size()) - 1; }
    std::vector<Int> terms_prefix(long K);

    // s(k, j), signed Stirling numbers of the first kind, cached rows
    const Int& stirling(long k, long j);

private:
    Int p_, scale_, center_, period_, pP_;
    long prec_ = 0;
    MatZ B_;
    std::vector<Int> state_;
    std::vector<Int> w_;
    std::vector<std::vector<Int>> srows_;
};

// Valuation of the partial sums S_K = sum_{k<=K} s(k,j) w_k p^k / k! for one
// fixed j. Feed terms in order k = 1, 2, ... The tracker keeps S_K as an
// integer numerator over K!, so valuations are exact.
class JumpTracker {
public:
    JumpTracker(long j, const Int& p);

    long j() const { return j_; }
    long K() const { return K_; }

    // fold in w_K for K = K()+1; s_kj must be s(K()+1, j)
    void extend(const Int& s_kj, const Int& w_k);

    // v_p(S_K); nullopt when S_K == 0
    std::optional<long> valuation() const;

    // valuation() < tail_bound(K): the full coefficient a_j is nonzero with
    // v_p(a_j * D) = valuation()
    bool decided() const;

private:
    long j_, K_;
    Int p_, N_, pk_;
};

} // namespace skolem
