#include "sncode/numtheory.hpp"

#include <stdexcept>

namespace sncode {

namespace {

uint64_t reduce(uint64_t x, int n) { return n >= 64 ? x : x & ((1ULL << n) - 1); }

uint64_t mul_mod_pow2(uint64_t a, uint64_t b, int n) {
    return reduce(static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b), n);
}

void check_exponent(int n) {
    if (n < 1 || n > kModExponentCap) throw std::invalid_argument("modulus exponent out of range");
}

}  // namespace

uint64_t order_mod(uint64_t a, int n) {
    check_exponent(n);
    if (a % 2 == 0) throw std::invalid_argument("order_mod requires an odd base");
    // The unit group mod 2^n is a 2-group, so the order is found by
    // repeated squaring alone.
    uint64_t x = reduce(a, n);
    uint64_t ord = 1;
    while (x != 1) {
        x = mul_mod_pow2(x, x, n);
        ord *= 2;
    }
    return ord;
}

bool exists_power_neg_one(uint64_t k, int l) {
    if (l < 2) throw std::invalid_argument("exists_power_neg_one requires l >= 2");
    if (l + 1 > kModExponentCap) throw std::invalid_argument("modulus exponent out of range");
    if (k % 2 == 0) throw std::invalid_argument("exists_power_neg_one requires odd k");
    if (k == 0 || k >= (1ULL << l)) throw std::invalid_argument("exists_power_neg_one requires 0 < k < 2^l");
    const int n = l + 1;
    const uint64_t minus_one = reduce(~0ULL, n);  // 2^n - 1
    uint64_t x = 1;  // k^0
    const uint64_t ord = order_mod(k, n);
    for (uint64_t i = 0; i < ord; ++i) {
        if (x == minus_one) return true;
        x = mul_mod_pow2(x, reduce(k, n), n);
    }
    return false;
}

UnitDecomposition decompose_unit(uint64_t u, int n) {
    if (n < 3) throw std::invalid_argument("decompose_unit requires n >= 3");
    check_exponent(n);
    if (u % 2 == 0) throw std::invalid_argument("decompose_unit requires an odd unit");
    const uint64_t target = reduce(u, n);
    const uint64_t neg_target = reduce(~target + 1, n);
    uint64_t p = 1;  // 5^b
    const uint64_t half = 1ULL << (n - 2);
    for (uint64_t b = 0; b < half; ++b) {
        if (p == target) return {n, 0, b};
        if (p == neg_target) return {n, 1, b};
        p = mul_mod_pow2(p, 5, n);
    }
    throw std::logic_error("decompose_unit: unit not reached (unreachable)");
}

uint64_t recompose_unit(const UnitDecomposition& d) {
    const int n = d.modulus_exponent;
    uint64_t p = 1;
    for (uint64_t i = 0; i < d.b; ++i) p = mul_mod_pow2(p, 5, n);
    if (d.a) p = reduce(~p + 1, n);
    return p;
}

}  // namespace sncode
