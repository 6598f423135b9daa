#pragma once

#include <string>
#include <variant>
#include <vector>

#include "skolemkit/algebra.hpp"

namespace skolem {

// the progression never hits zero: one full period of the state orbit mod m
// is scanned and every value is a unit or at least nonzero
struct ModulusWitness {
    Int m;
    Int period;
};

struct ProofRelation {
    long index = 0;       // dependent root
    Int m;                // exponent on roots[index], >= 1
    std::vector<Int> n;   // exponents over the independent roots, in order
};

// replayable evidence that the series coefficient a_j vanishes: the alphas
// reproduce the strided subsequence inside Q[Y]/(h), every relation holds
// exactly, and the expanded form of sum_i alpha_i l_i(X)^j is the zero
// polynomial
struct SymbolicZeroProof {
    long j = 0;
    PolyQ h;                       // monic, integer coefficients
    std::vector<PolyQ> roots;      // residues mod h
    std::vector<PolyQ> alphas;
    Int alpha_scale{1};            // sum_i alphas_i roots_i^t = alpha_scale * u_{c+Lt}
    std::vector<long> independent;
    std::vector<ProofRelation> relations;
};

// u_{center + L p^(nu+1) t} != 0 for every t != 0: coefficients below j0
// vanish symbolically, a_{j0} has the stated valuation by a partial sum that
// beats the tail bound, and higher coefficients are dominated by the tail
// floor once t is scaled by p^(nu+1)
struct ValuationWitness {
    Int center;
    Int p;
    Int L;
    long nu = 0;             // entry modulus is L * p^(nu+1)
    long sum_valuation = 0;  // v_p of the certified partial sum for j0
    long j0 = 0;
    long terms = 0;          // series terms folded into the partial sum
    Int window_scale{1};     // denominator scale of the state window at center
    std::vector<SymbolicZeroProof> zero_proofs;  // one per j in 1..j0-1
};

// the whole class has one p-adic valuation: A^L = I mod p forces
// u_{r + L p^a t} = u_r mod p^(a+1), so v_p(u_r) = valuation <= a pins
// every member away from zero
struct EvaluationWitness {
    Int p;
    Int L;
    long a = 1;          // entry modulus is L * p^a
    long valuation = 0;  // v_p(u_r), must stay <= a
};

struct ProgressionEntry {
    Int modulus;
    Int residue;
    std::variant<ModulusWitness, ValuationWitness, EvaluationWitness> witness;
};

struct Certificate {
    std::vector<Rat> coefficients;
    std::vector<Rat> initial;      // window u_0 .. u_{d-1}
    std::vector<Int> zeros;        // ascending
    std::vector<ProgressionEntry> entries;
};

std::string serialize(const Certificate& cert);
// inverse of serialize; throws InvalidArgument on malformed input
Certificate parse_certificate(const std::string& text);

// the progressions are pairwise disjoint and their densities sum to 1,
// so they partition Z
bool coverage_check(const std::vector<ProgressionEntry>& entries);

struct VerifyResult {
    bool accepted = false;
    std::string reason;  // first failing check when rejected
};

// full independent replay of the certificate against the sequence given by
// coefficients and the window u_0 .. u_{d-1}; accepts iff cert.zeros is
// exactly the zero set
VerifyResult verify(const std::vector<Rat>& coefficients,
                    const std::vector<Rat>& initial, const Certificate& cert);

}  // namespace skolem
