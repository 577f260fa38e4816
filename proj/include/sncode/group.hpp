#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sncode/perm.hpp"

namespace sncode {

/// Resource caps. Enumeration beyond a cap throws resource_error,
/// never approximates.
struct Caps {
    int ambient_degree_cap = 12;          // full S_n enumeration allowed up to here
    uint64_t subgroup_element_cap = 1ULL << 20;
    uint64_t transversal_node_budget = 10'000'000;
};

/// A fully enumerated subgroup of S_n. Immutable after construction;
/// elements are stored in ascending rank order.
class Subgroup {
public:
    /// Breadth-first closure of the generators. Throws resource_error when
    /// the closure exceeds `element_cap`.
    static Subgroup close(std::vector<Permutation> generators, int n,
                          uint64_t element_cap = Caps{}.subgroup_element_cap);

    /// Wraps an already closed element set (closure is the caller's
    /// responsibility; the identity is added if missing).
    static Subgroup from_elements(std::vector<Permutation> elements, int n);

    static Subgroup trivial(int n);
    static Subgroup symmetric(int n);

    int degree() const { return degree_; }
    uint64_t order() const { return elements_.size(); }
    const std::vector<Permutation>& generators() const { return generators_; }
    const std::vector<Permutation>& elements() const { return elements_; }
    const std::vector<uint64_t>& element_ranks() const { return ranks_; }

    bool contains(const Permutation& p) const;
    bool contains_rank(uint64_t r) const;

    bool operator==(const Subgroup& other) const {
        return degree_ == other.degree_ && ranks_ == other.ranks_;
    }

private:
    int degree_ = 0;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;  // ascending rank
    std::vector<uint64_t> ranks_;        // ascending, parallel to elements_
};

/// The group a decision runs inside: the full symmetric group S_n, or an
/// explicitly enumerated subgroup of it (e.g. a normalizer).
class Ambient {
public:
    static Ambient full(int n, const Caps& caps = {});
    static Ambient restricted(Subgroup g);

    bool is_full() const { return !restricted_.has_value(); }
    int degree() const { return degree_; }
    uint64_t size() const { return size_; }

    /// i-th element in ascending rank order.
    Permutation element(uint64_t i) const;

    /// Inverse of element(); in full mode this is the Lehmer rank.
    uint64_t index_of(const Permutation& p) const;

    bool contains(const Permutation& p) const;
    const Subgroup& as_subgroup() const;  // restricted mode only

private:
    int degree_ = 0;
    uint64_t size_ = 0;
    std::optional<Subgroup> restricted_;
};

/// One block of the double-coset partition of an ambient group by H.
struct DoubleCoset {
    Permutation representative;      // smallest-rank element
    std::vector<uint64_t> indices;   // ambient indices, ascending
    uint64_t left_coset_count = 0;   // |D| / |H|
    bool self_inverse = false;       // D = D^-1
    bool has_involution = false;
};

uint64_t index_in(const Subgroup& h, const Ambient& g);

bool is_abelian(const Subgroup& h);

/// An element of order |H| when H is cyclic, otherwise nullopt.
/// Deterministic: smallest-rank generator.
std::optional<Permutation> is_cyclic(const Subgroup& h);

/// A Sylow 2-subgroup of H: grown from the trivial subgroup by repeatedly
/// adjoining the smallest-rank 2-element of N_H(P) \ P while |H : P| is even.
Subgroup sylow2(const Subgroup& h);

/// Exact normalizer of H in G by full ambient scan. The scan is split
/// across worker_threads() threads; results never depend on the count.
Subgroup normalizer_in(const Subgroup& h, const Ambient& g);

/// Worker-thread bound for parallelizable scans (default 1).
void set_worker_threads(int count);
int worker_threads();

/// Smallest-rank representatives of the left cosets of H in G, in ascending
/// representative order.
std::vector<Permutation> left_cosets(const Subgroup& h, const Ambient& g);

/// The single block H x H with its flags.
DoubleCoset double_coset_of(const Subgroup& h, const Ambient& g, const Permutation& x);

/// Full double-coset partition of G by H, blocks ordered by representative.
std::vector<DoubleCoset> double_cosets(const Subgroup& h, const Ambient& g);

bool is_normal_in(const Subgroup& h, const Ambient& g);

Subgroup conjugate_subgroup(const Subgroup& h, const Permutation& g);

/// Abstract-group isomorphism test by generator-image backtracking.
/// Intended for small groups (fixture orders).
bool are_isomorphic(const Subgroup& a, const Subgroup& b);

/// A minimal-by-greedy generating sequence: repeatedly adjoins the
/// smallest-rank element outside the closure so far.
std::vector<Permutation> greedy_generators(const Subgroup& h);

}  // namespace sncode
