#pragma once

#include "skolemkit/algebra.hpp"

namespace skolem {

// u_n = c_1 u_{n-1} + ... + c_d u_{n-d}, c_d != 0
struct Recurrence {
    std::vector<Rat> coeffs;

    explicit Recurrence(std::vector<Rat> c);
    int order() const { return static_cast<int>(coeffs.size()); }
    // X^d - c_1 X^{d-1} - ... - c_d
    PolyQ char_poly() const;
    bool integral() const;
};

Recurrence recurrence_from_char_poly(const PolyQ& h);

// two-sided sequence fixed by the d terms u_shift .. u_{shift+d-1};
// orig_stride/orig_shift map this spec's index n to the index of the
// sequence it was carved out of
struct SequenceSpec {
    Recurrence rec;
    std::vector<Rat> initial;
    Int shift{0};
    Int orig_stride{1};
    Int orig_shift{0};

    SequenceSpec(Recurrence r, std::vector<Rat> init, Int sh = 0);
    int order() const { return rec.order(); }
    Int to_original(const Int& n) const { return orig_stride * n + orig_shift; }
};

Rat term_at(const SequenceSpec& s, const Int& n);
// u_lo .. u_{lo+count-1}
std::vector<Rat> terms_range(const SequenceSpec& s, const Int& lo, long count);

// recurrence satisfied by v_n = u_{-n}
Recurrence reverse(const Recurrence& r);

bool is_integral(const SequenceSpec& s);
// same zero set, integer coefficients and initial terms
SequenceSpec normalize_to_integer(const SequenceSpec& s);

SequenceSpec minimal_recurrence(const SequenceSpec& s);

enum class LrsClass { IdenticallyZero, NotSimple, Degenerate, SimpleNonDegenerate };
LrsClass classify(const SequenceSpec& s);

// first row c_1..c_d, ones on the subdiagonal; integral coefficients required
MatZ companion_matrix(const Recurrence& r);

// char poly of A^stride, via traces and Newton's identities
PolyQ subsequence_char_poly(const Recurrence& r, const Int& stride);

// spec for w_n = u_{offset + stride*n}, shift 0, provenance composed
SequenceSpec subsequence_spec(const SequenceSpec& s, const Int& stride, const Int& offset);

// values[i] = u_{base+i} mod m for one full period of the state orbit
struct OrbitMod {
    Int period;
    Int base;
    std::vector<Int> values;
};
// integral spec, gcd(m, c_d) = 1; nullopt when the period exceeds cap
std::optional<OrbitMod> orbit_mod(const SequenceSpec& s, const Int& m, long cap);

}  // namespace skolem
