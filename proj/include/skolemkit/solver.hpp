#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skolemkit/certs.hpp"
#include "skolemkit/padic.hpp"

namespace skolem {

struct SolveConfig {
    double time_budget_seconds = 60.0;
    long modulus_cap = 100000;
    Int zero_search_cap{4096};
    PrimeStrategy prime_strategy = PrimeStrategy::Smallest;
    Int prime_param{0};
    Int prime_search_cap{50000};
    long max_terms = 0;  // 0 picks a budget from p and the order
    long term_retry_doublings = 4;
    Int relation_exponent_cap{64};
    long recursion_depth_cap = 16;
    long period_scan_cap = 1 << 20;
    Int symbolic_stride_cap{100000};  // largest stride for exact zero proofs
};

enum class OutcomeKind { Solved, Degenerate, NotSimple, IdenticallyZero, Timeout };

struct SolveStats {
    long tree_depth = 0;
    Int max_jump{0};
    long zeros_count = 0;
    double elapsed_seconds = 0.0;
};

struct Outcome {
    OutcomeKind kind = OutcomeKind::Timeout;
    std::vector<Int> zeros;   // original indexing, ascending
    Certificate certificate;  // populated only when kind == Solved
    SolveStats stats;
    std::string diagnostic;   // why a run stopped short
};

// exact zeros n of s with |n| <= cap, ascending
std::vector<Int> zero_search(const SequenceSpec& s, const Int& cap);

// least m in [2, cap] coprime to the trailing coefficient such that s is
// nonzero everywhere mod m, together with the state-orbit period; spec must
// be integral
std::optional<ModulusWitness> modulus_witness_search(const SequenceSpec& s, const Int& cap,
                                                     long period_scan_cap = 1 << 20);

struct BiSkolemResult {
    enum class Kind { HasZero, NoZero, Inconclusive } kind = Kind::Inconclusive;
    Int n0;                   // HasZero: a zero of s
    ModulusWitness witness;   // NoZero
    std::string diagnostic;   // Inconclusive
};

// interleaves one zero probe with one modulus trial per round, so either
// answer is found in time proportional to its own difficulty
BiSkolemResult bi_skolem_decide(const SequenceSpec& s, const SolveConfig& config = {});

// complete zero set plus certificate for simple nondegenerate input;
// degenerate, non-simple and identically zero inputs are reported as such
Outcome find_all_zeros(const SequenceSpec& s, const SolveConfig& config = {});

// reproducible random integral spec with coefficients and initial values
// drawn uniformly from [lo, hi], trailing coefficient nonzero
SequenceSpec random_instance(long order, long lo, long hi, std::uint64_t seed);

}  // namespace skolem
