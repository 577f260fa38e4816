#include "sncode/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sncode {

Permutation Permutation::identity(int n) {
    Permutation p;
    p.img_.resize(static_cast<size_t>(n));
    std::iota(p.img_.begin(), p.img_.end(), static_cast<uint8_t>(0));
    return p;
}

Permutation Permutation::from_images(std::vector<uint8_t> images) {
    const size_t n = images.size();
    std::vector<bool> seen(n, false);
    for (uint8_t v : images) {
        if (v >= n || seen[v]) throw std::invalid_argument("images are not a bijection");
        seen[v] = true;
    }
    Permutation p;
    p.img_ = std::move(images);
    return p;
}

bool Permutation::is_identity() const {
    for (int i = 0; i < degree(); ++i)
        if (img_[static_cast<size_t>(i)] != i) return false;
    return true;
}

Permutation operator*(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree()) throw std::invalid_argument("degree mismatch in composition");
    Permutation r;
    r.img_.resize(p.img_.size());
    for (size_t i = 0; i < p.img_.size(); ++i) r.img_[i] = p.img_[q.img_[i]];
    return r;
}

namespace {

// Extracts cycles as lists of 0-based points, smallest point first,
// sorted by smallest point. Fixed points excluded.
std::vector<std::vector<int>> nontrivial_cycles(const Permutation& p) {
    const int n = p.degree();
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<std::vector<int>> cycles;
    for (int i = 0; i < n; ++i) {
        if (seen[static_cast<size_t>(i)] || p.apply(i) == i) continue;
        std::vector<int> cyc;
        int j = i;
        do {
            seen[static_cast<size_t>(j)] = true;
            cyc.push_back(j);
            j = p.apply(j);
        } while (j != i);
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

}  // namespace

Permutation parse_cycles(std::string_view text, int n) {
    if (n < 1 || n > kDefaultDegreeCap)
        throw std::invalid_argument("degree out of range [1, 16]");
    std::vector<uint8_t> img(static_cast<size_t>(n));
    std::iota(img.begin(), img.end(), static_cast<uint8_t>(0));
    std::vector<bool> used(static_cast<size_t>(n), false);

    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip_ws();
    if (i >= text.size()) throw std::invalid_argument("empty permutation text");

    if (text[i] == 'e') {
        ++i;
        skip_ws();
        if (i != text.size()) throw std::invalid_argument("trailing input after 'e'");
        return Permutation::from_images(std::move(img));
    }

    bool any_cycle = false;
    while (i < text.size()) {
        if (text[i] != '(') throw std::invalid_argument("expected '('");
        ++i;
        skip_ws();
        std::vector<int> pts;
        // "()" is the identity; only legal as the whole input.
        while (i < text.size() && text[i] != ')') {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw std::invalid_argument("expected point or ')'");
            int v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                v = v * 10 + (text[i] - '0');
                if (v > 1000) throw std::invalid_argument("point out of range");
                ++i;
            }
            if (v < 1 || v > n) throw std::invalid_argument("point out of range");
            if (used[static_cast<size_t>(v - 1)]) throw std::invalid_argument("duplicated point");
            used[static_cast<size_t>(v - 1)] = true;
            pts.push_back(v - 1);
            skip_ws();
            if (i < text.size() && text[i] == ',') {
                ++i;
                skip_ws();
                if (i >= text.size() || text[i] == ')')
                    throw std::invalid_argument("expected point after ','");
            }
        }
        if (i >= text.size()) throw std::invalid_argument("unterminated cycle");
        ++i;  // ')'
        if (pts.empty()) {
            if (any_cycle) throw std::invalid_argument("empty cycle");
            skip_ws();
            if (i != text.size()) throw std::invalid_argument("trailing input after '()'");
            return Permutation::from_images(std::move(img));
        }
        for (size_t j = 0; j < pts.size(); ++j)
            img[static_cast<size_t>(pts[j])] = static_cast<uint8_t>(pts[(j + 1) % pts.size()]);
        any_cycle = true;
        skip_ws();
    }
    if (!any_cycle) throw std::invalid_argument("no cycles");
    return Permutation::from_images(std::move(img));
}

std::string format_cycles(const Permutation& p) {
    auto cycles = nontrivial_cycles(p);
    if (cycles.empty()) return "e";
    std::ostringstream out;
    for (const auto& cyc : cycles) {
        out << '(';
        for (size_t j = 0; j < cyc.size(); ++j) {
            if (j) out << ' ';
            out << cyc[j] + 1;
        }
        out << ')';
    }
    return out.str();
}

Permutation inverse(const Permutation& p) {
    std::vector<uint8_t> img(p.images().size());
    for (size_t i = 0; i < img.size(); ++i) img[p.images()[i]] = static_cast<uint8_t>(i);
    return Permutation::from_images(std::move(img));
}

Permutation power(const Permutation& p, long long k) {
    const auto ord = static_cast<long long>(order(p));
    long long e = k % ord;
    if (e < 0) e += ord;
    Permutation base = p;
    Permutation acc = Permutation::identity(p.degree());
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

uint64_t order(const Permutation& p) {
    uint64_t result = 1;
    for (const auto& [len, count] : cycle_type(p).counts)
        result = std::lcm(result, static_cast<uint64_t>(len));
    return result;
}

Parity parity(const Permutation& p) {
    int transpositions = 0;
    for (const auto& cyc : nontrivial_cycles(p)) transpositions += static_cast<int>(cyc.size()) - 1;
    return (transpositions % 2 == 0) ? Parity::Even : Parity::Odd;
}

CycleType cycle_type(const Permutation& p) {
    CycleType t;
    int moved = 0;
    for (const auto& cyc : nontrivial_cycles(p)) {
        ++t.counts[static_cast<int>(cyc.size())];
        moved += static_cast<int>(cyc.size());
    }
    if (p.degree() > moved) t.counts[1] = p.degree() - moved;
    return t;
}

bool is_involution(const Permutation& p) { return order(p) == 2; }

bool is_square(const Permutation& p) {
    for (const auto& [len, count] : cycle_type(p).counts)
        if (len % 2 == 0 && count % 2 != 0) return false;
    return true;
}

std::optional<Permutation> square_root(const Permutation& p) {
    if (!is_square(p)) return std::nullopt;
    const int n = p.degree();
    std::vector<uint8_t> img(static_cast<size_t>(n));
    std::iota(img.begin(), img.end(), static_cast<uint8_t>(0));

    auto cycles = nontrivial_cycles(p);  // sorted by smallest point
    // Equal-length even cycles pair up in ascending order of smallest point.
    std::map<int, std::vector<std::vector<int>*>> even_by_len;
    for (auto& cyc : cycles) {
        const auto len = cyc.size();
        if (len % 2 == 1) {
            // c^((len+1)/2) squares back to c: place i -> element (len+1)/2 ahead.
            const size_t half = (len + 1) / 2;
            for (size_t j = 0; j < len; ++j)
                img[static_cast<size_t>(cyc[j])] = static_cast<uint8_t>(cyc[(j + half) % len]);
        } else {
            even_by_len[static_cast<int>(len)].push_back(&cyc);
        }
    }
    for (auto& [len, group] : even_by_len) {
        for (size_t k = 0; k + 1 < group.size(); k += 2) {
            const auto& a = *group[k];
            const auto& b = *group[k + 1];
            // Interleaved cycle (a0 b0 a1 b1 ...) squares to a and b.
            const size_t len_sz = a.size();
            for (size_t j = 0; j < len_sz; ++j) {
                img[static_cast<size_t>(a[j])] = static_cast<uint8_t>(b[j]);
                img[static_cast<size_t>(b[j])] = static_cast<uint8_t>(a[(j + 1) % len_sz]);
            }
        }
    }
    return Permutation::from_images(std::move(img));
}

uint64_t factorial(int n) {
    static constexpr uint64_t table[] = {
        1ULL, 1ULL, 2ULL, 6ULL, 24ULL, 120ULL, 720ULL, 5040ULL, 40320ULL,
        362880ULL, 3628800ULL, 39916800ULL, 479001600ULL, 6227020800ULL,
        87178291200ULL, 1307674368000ULL, 20922789888000ULL, 355687428096000ULL,
        6402373705728000ULL, 121645100408832000ULL, 2432902008176640000ULL};
    if (n < 0 || n > 20) throw std::out_of_range("factorial argument out of range");
    return table[n];
}

uint64_t rank(const Permutation& p) {
    const int n = p.degree();
    uint64_t r = 0;
    for (int i = 0; i < n; ++i) {
        int smaller_later = 0;
        for (int j = i + 1; j < n; ++j)
            if (p.apply(j) < p.apply(i)) ++smaller_later;
        r += static_cast<uint64_t>(smaller_later) * factorial(n - 1 - i);
    }
    return r;
}

Permutation unrank(uint64_t index, int n) {
    if (index >= factorial(n)) throw std::out_of_range("rank index out of range");
    std::vector<uint8_t> remaining(static_cast<size_t>(n));
    std::iota(remaining.begin(), remaining.end(), static_cast<uint8_t>(0));
    std::vector<uint8_t> img;
    img.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const uint64_t f = factorial(n - 1 - i);
        const auto pos = static_cast<size_t>(index / f);
        index %= f;
        img.push_back(remaining[pos]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    return Permutation::from_images(std::move(img));
}

Permutation conjugate(const Permutation& p, const Permutation& g) { return g * p * inverse(g); }

}  // namespace sncode
