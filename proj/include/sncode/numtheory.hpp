#pragma once

#include <cstdint>

namespace sncode {

/// Exponent cap for moduli 2^n; keeps every product inside unsigned
/// 128-bit arithmetic.
inline constexpr int kModExponentCap = 62;

/// The unique representation u = (-1)^a * 5^b (mod 2^n), n >= 3.
struct UnitDecomposition {
    int modulus_exponent = 0;
    int a = 0;       // 0 or 1
    uint64_t b = 0;  // in [0, 2^(n-2))

    bool operator==(const UnitDecomposition&) const = default;
};

/// Multiplicative order of odd `a` modulo 2^n. Throws std::invalid_argument
/// for even a, n < 1 or n > cap.
uint64_t order_mod(uint64_t a, int n);

/// True iff some i >= 0 has k^i = -1 (mod 2^(l+1)). Domain: k odd,
/// 0 < k < 2^l, l >= 2 (violations throw); in this domain the value is
/// always false.
bool exists_power_neg_one(uint64_t k, int l);

/// Decomposes an odd unit modulo 2^n, n >= 3.
UnitDecomposition decompose_unit(uint64_t u, int n);

/// Reconstructs the unit from its decomposition (reduced mod 2^n).
uint64_t recompose_unit(const UnitDecomposition& d);

}  // namespace sncode
