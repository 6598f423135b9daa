#pragma once

#include <vector>

#include "skolemkit/lrs.hpp"

namespace skolem {

// Number field Q[Y]/(h), h monic irreducible over Q. Instances produced by
// splitting_field carry an h whose irreducibility is guaranteed by
// construction. Elements are PolyQ of degree < h.degree().
struct NumberField {
    PolyQ h;

    long degree() const { return h.degree(); }
};

PolyQ fe_reduce(const PolyQ& a, const NumberField& K);
PolyQ fe_add(const PolyQ& a, const PolyQ& b, const NumberField& K);
PolyQ fe_sub(const PolyQ& a, const PolyQ& b, const NumberField& K);
PolyQ fe_mul(const PolyQ& a, const PolyQ& b, const NumberField& K);
PolyQ fe_inv(const PolyQ& a, const NumberField& K);
PolyQ fe_pow(const PolyQ& a, const Int& e, const NumberField& K);
// evaluate a rational-coefficient polynomial at a field element
PolyQ fe_eval_poly(const PolyQ& f, const PolyQ& x, const NumberField& K);

struct SplitField {
    NumberField field;
    // one entry per root of the input, with multiplicity one
    std::vector<PolyQ> roots;
};

// Smallest field containing every root of g. Requires g squarefree with
// nonzero constant term tolerated; throws InvalidArgument on g zero, constant,
// or not squarefree, ResourceLimit if the field degree would exceed degree_cap.
SplitField splitting_field(const PolyQ& g, long degree_cap = 64);

// Coefficients alpha_i with u_n = sum_i alpha_i lambda_i^n, lambda_i = roots.
// Requires s minimal of order roots.size(); the solve uses n = 0..d-1 and the
// identity is checked for n = d..2d, throwing InternalError on mismatch.
std::vector<PolyQ> exp_poly_coefficients(const SequenceSpec& s,
                                         const NumberField& K,
                                         const std::vector<PolyQ>& roots);

// Upper bound for the (unnormalized) logarithmic height of x: log of the
// 2-norm of the coefficient vector of its minimal polynomial over Z.
Rat height_upper_bound(const PolyQ& x, const NumberField& K);

// Exponent bound for generators of the multiplicative relation group of s
// nonzero algebraic numbers of height at most h in a field of degree D.
Int masser_bound(long s, const Rat& h, long D, const Rat& c);

struct Relation {
    long index = 0;       // dependent root
    Int m;                // exponent on roots[index], >= 1
    std::vector<Int> n;   // exponents over the independent roots, in order
};

struct RelationBasis {
    std::vector<long> independent;    // indices of the basis roots
    std::vector<Relation> relations;  // one per dependent root
    // row i: rational exponents of lambda_i over the basis, so that
    // lambda_i^1 "=" prod_t basis_t^{linear_forms[i][t]}
    std::vector<std::vector<Rat>> linear_forms;
    bool capped = false;              // some relation search was truncated
};

// Multiplicative relation basis over the given nonzero roots, greedy in index
// order. Candidate exponents are prefiltered through rational-prime
// valuations of field norms and signs before exact verification in K.
RelationBasis multiplicative_relations(const std::vector<PolyQ>& roots,
                                       const NumberField& K,
                                       const Int& exponent_cap);

// Data sufficient to replay the vanishing of F_j independently.
struct ZeroProof {
    NumberField field;
    std::vector<PolyQ> roots;
    std::vector<PolyQ> alphas;
    RelationBasis basis;
    long j = 0;
    Int L;
};

struct FjOutcome {
    bool zero = false;
    // when zero is false: a monomial of F_j with nonzero coefficient
    std::vector<long> monomial;
    PolyQ coefficient;
};

// Decides whether F_j(X) = (L^j / j!) sum_i alpha_i l_i(X)^j vanishes
// identically, where l_i are the linear forms of the basis. The scalar in
// front never affects the answer; L is carried for proof packaging.
FjOutcome f_j_identically_zero(const std::vector<PolyQ>& alphas,
                               const RelationBasis& basis, long j,
                               const Int& L, const NumberField& K);

}  // namespace skolem
