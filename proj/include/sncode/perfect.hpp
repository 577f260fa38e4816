#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sncode/group.hpp"
#include "sncode/perm.hpp"

namespace sncode {

enum class Status { Perfect, NotPerfect };

enum class ProvenanceKind { OracleProven, TheoremFastPath, ReducedThenOracle };

struct Provenance {
    ProvenanceKind kind = ProvenanceKind::OracleProven;
    std::string rule;                // decisive rule id
    std::vector<std::string> chain;  // reductions applied before the decision

    bool operator==(const Provenance&) const = default;
};

struct Verdict {
    Status status = Status::Perfect;
    Provenance provenance;

    bool operator==(const Verdict&) const = default;
};

/// An inverse-closed set of left-coset representatives.
struct Transversal {
    std::vector<Permutation> representatives;
};

/// Representative of a self-inverse double coset with an odd number of left
/// cosets and no involution; its existence proves NotPerfect.
struct BadDoubleCoset {
    Permutation representative;
};

using Certificate = std::variant<Transversal, BadDoubleCoset>;

/// Double-coset criterion, scanning blocks in ascending representative
/// order. NotPerfect comes with the smallest-rank bad representative;
/// Perfect comes with a transversal built independently. Both certificates
/// are re-verified before returning (verification_error on failure).
std::pair<Verdict, Certificate> oracle_double_coset(const Subgroup& h, const Ambient& g,
                                                    const Caps& caps = {});

/// Inverse-closed left transversal of H in G when one exists, else nullopt.
/// Left cosets become graph vertices (self-servable when the coset holds a
/// t with t^2 = e, joined when one coset holds the inverse of an element of
/// the other); a backtracking matching selects representatives. Budget
/// exhaustion throws resource_error, distinct from nullopt.
std::optional<std::vector<Permutation>> build_transversal(const Subgroup& h, const Ambient& g,
                                                          const Caps& caps = {});

/// Re-checks every certificate invariant from scratch, sharing no state
/// with the procedures that built it.
bool verify_certificate(const Subgroup& h, const Ambient& g, const Certificate& c);

/// Square-lift criterion for normal subgroups: Perfect iff every x in G
/// with x^2 in H admits h in H with (xh)^2 = e. Throws std::invalid_argument
/// when H is not normal in G.
Verdict normal_criterion(const Subgroup& h, const Ambient& g);

/// Targeted witness search over 2-elements x outside H with x^2 in H and
/// odd |H : H n xHx^-1|. A hit is fully verified; nullopt alone does not
/// prove Perfect.
std::optional<BadDoubleCoset> witness_search_2elements(const Subgroup& h, const Ambient& g);

/// The two readings of the even-permutation branch of the cyclic
/// classification; they disagree on some cycle types (e.g. [4,2]) and the
/// oracle adjudicates.
enum class CyclicReading { SameLengthOddCount, NotASquare };

/// Fast path for H = <x> with o(x) a power of two (else
/// std::invalid_argument). Odd x is always Perfect; even x is decided by
/// the selected reading, recorded in the provenance.
Verdict cyclic_fast_path(const Permutation& x, int n, CyclicReading reading);

// --- hypothesis checkers for the structured not-perfect families ---------

enum class HypKind {
    Commutative,     // abelian 2-group with an outside square root of one generator
    TwoGenerator,    // <x1,x2>, o(x1)=2^l, o(x2)=2, with the y/k relations
    Extension,       // two-generator base extended by centralizing x3,...
    ThreeGenerator,  // <x1,x2,x3> with shared exponent k, k odd, k < 2^l
};

std::string hyp_kind_name(HypKind k);

/// Bindings found by a checker. Every relation is re-checkable from the
/// stored permutations and integers; a returned instance predicts
/// NotPerfect for the subgroup it was found in.
struct HypothesisInstance {
    HypKind kind = HypKind::Commutative;
    std::vector<Permutation> xs;      // x1, x2, ...
    std::optional<Permutation> x;     // outside square root (commutative case)
    std::optional<Permutation> y;     // square root of x1^-1
    std::optional<uint64_t> k;        // conjugation exponent
    std::optional<uint64_t> s;        // x3-vs-x2 exponent (three-generator case)
    std::optional<int> l;             // o(x1) = 2^l
};

/// Search caps for hypothesis checkers; these quantify "for some y in S_n"
/// over square roots plus involution decorations on untouched points.
struct HypSearchOptions {
    uint64_t subgroup_order_cap = 512;  // skip search on larger subgroups
    uint64_t candidate_cap = 4096;      // max y/x candidates per base point
};

std::optional<HypothesisInstance> hyp_commutative(const Subgroup& h,
                                                  const HypSearchOptions& opt = {});
std::optional<HypothesisInstance> hyp_two_generator(const Subgroup& h,
                                                    const HypSearchOptions& opt = {});
std::optional<HypothesisInstance> hyp_extension(const Subgroup& h, const HypothesisInstance& base,
                                                const HypSearchOptions& opt = {});
std::optional<HypothesisInstance> hyp_three_generator(const Subgroup& h,
                                                      const HypSearchOptions& opt = {});

/// Tries every checker (and two-generator bases extended step by step) on a
/// non-abelian 2-group.
std::optional<HypothesisInstance> search_hypotheses(const Subgroup& h,
                                                    const HypSearchOptions& opt = {});

/// For a three-generator instance: re-verifies the hypotheses (throwing
/// std::invalid_argument on violation), then tests whether powers of
/// x3<x1,x2> exhaust the coset space of <x1,x2> in <x1,x2,x3>.
bool quotient_cyclic_check(const HypothesisInstance& inst);

// --- classification pipeline ---------------------------------------------

enum class Policy { FastOnly, OracleOnly, FastWithOracleCheck };

struct TraceEntry {
    std::string rule;
    std::string inputs;
    std::string outcome;

    bool operator==(const TraceEntry&) const = default;
};

struct Discrepancy {
    std::string source;  // which fast rule disagreed
    std::string fast_verdict;
    std::string oracle_verdict;

    bool operator==(const Discrepancy&) const = default;
};

struct ClassifyReport {
    int n = 0;
    std::vector<std::string> generators;  // canonical strings
    uint64_t order = 0;
    Verdict verdict;
    std::optional<Certificate> certificate;
    // What the certificate is about: after a reduction it concerns the
    // reduced pair, recorded in the rule trace.
    std::optional<Subgroup> certificate_subgroup;
    std::optional<Ambient> certificate_ambient;
    std::vector<TraceEntry> rule_trace;
    std::vector<Discrepancy> discrepancies;
    double timing_ms = 0.0;
};

/// Applies, in order: odd order/index shortcut, Sylow-2 reduction, cyclic
/// fast path, hypothesis checkers, normalizer-restricted oracle, full
/// oracle. Undecidable-within-caps throws resource_error; a discrepancy
/// between fast path and oracle is recorded and the oracle wins.
ClassifyReport classify(const Subgroup& h, int n, Policy policy, const Caps& caps = {});

// --- adjudication and invariance sweeps ----------------------------------

struct SweepRow {
    std::vector<int> cycle_lengths;  // non-fixed cycle lengths, descending
    Permutation representative;
    Status same_length_reading = Status::Perfect;
    Status not_square_reading = Status::Perfect;
    Status oracle = Status::Perfect;
    bool readings_agree = false;
    bool discrepancy = false;  // an agreeing fast verdict contradicted the oracle
};

/// One row per cycle type of 2-power order in S_n (conjugation invariance
/// makes one representative enough).
std::vector<SweepRow> sweep_cyclic(int n, const Caps& caps = {});

struct InvarianceOptions {
    int conjugation_samples = 0;
    int extension_samples = 0;
    int sylow_samples = 0;
    uint64_t seed = 1;
};

struct InvarianceReport {
    int checked = 0;
    int failures = 0;
    std::vector<std::string> failure_notes;
};

/// Oracle-level invariance checks: verdicts are stable under conjugation,
/// degree extension n -> n+1, and Sylow-2 reduction.
InvarianceReport invariance_suite(int n, const InvarianceOptions& opt, const Caps& caps = {});

/// Verdict of a 2-subgroup Q in S_n equals its verdict inside N_{S_n}(Q).
bool normalizer_reduction_agrees(const Subgroup& q, int n, const Caps& caps = {});

/// Random subgroup generated by up to `max_gens` uniform elements of S_n.
Subgroup random_subgroup(std::mt19937_64& rng, int n, int max_gens = 2);

/// Same permutation viewed in a larger symmetric group (new points fixed).
Permutation extend_degree(const Permutation& p, int n);
Subgroup extend_degree(const Subgroup& h, int n);

const char* status_name(Status s);

}  // namespace sncode
