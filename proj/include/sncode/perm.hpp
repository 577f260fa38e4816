#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sncode {

/// Degree cap for parsing and closure work. One byte per image; raise only
/// with care, rank() needs degree! to fit in 64 bits.
inline constexpr int kDefaultDegreeCap = 16;

/// Multiset of cycle lengths, fixed points included as length-1 cycles.
struct CycleType {
    std::map<int, int> counts;  // length -> number of cycles of that length

    bool operator==(const CycleType&) const = default;
};

/// An element of S_n stored as an image map on {0,...,n-1}.
/// Points are 1-based in cycle notation and 0-based internally.
///
/// Composition is right-to-left: (p * q)(i) = p(q(i)), q applied first.
class Permutation {
public:
    Permutation() = default;

    /// Identity on n points.
    static Permutation identity(int n);

    /// Takes 0-based images; throws std::invalid_argument unless a bijection.
    static Permutation from_images(std::vector<uint8_t> images);

    int degree() const { return static_cast<int>(img_.size()); }

    /// 0-based application.
    int apply(int point) const { return img_[static_cast<size_t>(point)]; }

    const std::vector<uint8_t>& images() const { return img_; }

    bool is_identity() const;

    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;

    /// (p * q)(i) = p(q(i)). Throws on degree mismatch.
    friend Permutation operator*(const Permutation& p, const Permutation& q);

private:
    std::vector<uint8_t> img_;
};

/// Cycle-notation parser. Grammar:
///   perm  := "e" | "()" | cycle+
///   cycle := "(" point (sep point)* ")"        sep := "," | spaces
///   point := decimal >= 1
/// Unwritten points are fixed. Throws std::invalid_argument on syntax
/// errors, out-of-range points and duplicated points.
Permutation parse_cycles(std::string_view text, int n);

/// Canonical form: each cycle starts at its smallest point, cycles sorted by
/// smallest point, fixed points omitted, identity printed "e".
std::string format_cycles(const Permutation& p);

Permutation inverse(const Permutation& p);

/// p^k for any integer k (negative allowed).
Permutation power(const Permutation& p, long long k);

/// Smallest k >= 1 with p^k = e; the lcm of the cycle lengths.
uint64_t order(const Permutation& p);

enum class Parity { Even, Odd };

Parity parity(const Permutation& p);

CycleType cycle_type(const Permutation& p);

/// Order exactly 2 (the identity is not an involution).
bool is_involution(const Permutation& p);

/// True iff every even cycle length occurs an even number of times;
/// equivalently iff p = y^2 for some y.
bool is_square(const Permutation& p);

/// A square root when one exists: odd cycles are half-stepped, equal-length
/// even cycles are paired in ascending order of smallest moved point and
/// interleaved. Deterministic; nullopt iff !is_square(p).
std::optional<Permutation> square_root(const Permutation& p);

/// Lehmer-code rank in [0, n!); rank(identity) = 0.
uint64_t rank(const Permutation& p);

/// Inverse of rank; throws std::out_of_range unless index < n!.
Permutation unrank(uint64_t index, int n);

uint64_t factorial(int n);

/// g * p * g^-1. Preserves cycle type.
Permutation conjugate(const Permutation& p, const Permutation& g);

}  // namespace sncode
