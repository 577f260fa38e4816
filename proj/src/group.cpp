#include "sncode/group.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <future>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "sncode/errors.hpp"

namespace sncode {

Subgroup Subgroup::close(std::vector<Permutation> generators, int n, uint64_t element_cap) {
    for (const auto& g : generators)
        if (g.degree() != n) throw std::invalid_argument("generator degree mismatch");

    std::unordered_map<uint64_t, Permutation> seen;
    const Permutation e = Permutation::identity(n);
    seen.emplace(0, e);
    std::deque<Permutation> frontier{e};
    while (!frontier.empty()) {
        Permutation cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : generators) {
            Permutation next = cur * g;
            const uint64_t r = rank(next);
            if (seen.contains(r)) continue;
            if (seen.size() >= element_cap)
                throw resource_error("subgroup closure exceeded element cap");
            seen.emplace(r, next);
            frontier.push_back(std::move(next));
        }
    }

    Subgroup h;
    h.degree_ = n;
    h.generators_ = std::move(generators);
    h.ranks_.reserve(seen.size());
    for (const auto& [r, p] : seen) h.ranks_.push_back(r);
    std::sort(h.ranks_.begin(), h.ranks_.end());
    h.elements_.reserve(seen.size());
    for (uint64_t r : h.ranks_) h.elements_.push_back(seen.at(r));
    return h;
}

Subgroup Subgroup::from_elements(std::vector<Permutation> elements, int n) {
    std::vector<std::pair<uint64_t, Permutation>> by_rank;
    by_rank.reserve(elements.size() + 1);
    bool has_identity = false;
    for (auto& p : elements) {
        if (p.degree() != n) throw std::invalid_argument("element degree mismatch");
        if (p.is_identity()) has_identity = true;
        by_rank.emplace_back(rank(p), std::move(p));
    }
    if (!has_identity) by_rank.emplace_back(0, Permutation::identity(n));
    std::sort(by_rank.begin(), by_rank.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    by_rank.erase(std::unique(by_rank.begin(), by_rank.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  by_rank.end());
    Subgroup h;
    h.degree_ = n;
    for (auto& [r, p] : by_rank) {
        h.ranks_.push_back(r);
        h.elements_.push_back(std::move(p));
    }
    h.generators_ = h.elements_;
    return h;
}

Subgroup Subgroup::trivial(int n) { return close({}, n); }

Subgroup Subgroup::symmetric(int n) {
    std::vector<Permutation> gens;
    if (n >= 2) gens.push_back(parse_cycles("(1 2)", n));
    if (n >= 3) {
        std::vector<uint8_t> img(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) img[static_cast<size_t>(i)] = static_cast<uint8_t>((i + 1) % n);
        gens.push_back(Permutation::from_images(std::move(img)));
    }
    return close(std::move(gens), n, factorial(n) + 1);
}

bool Subgroup::contains(const Permutation& p) const {
    if (p.degree() != degree_) return false;
    return contains_rank(rank(p));
}

bool Subgroup::contains_rank(uint64_t r) const {
    return std::binary_search(ranks_.begin(), ranks_.end(), r);
}

Ambient Ambient::full(int n, const Caps& caps) {
    if (n < 1 || n > caps.ambient_degree_cap)
        throw resource_error("ambient degree exceeds full-enumeration cap");
    Ambient g;
    g.degree_ = n;
    g.size_ = factorial(n);
    return g;
}

Ambient Ambient::restricted(Subgroup sub) {
    Ambient g;
    g.degree_ = sub.degree();
    g.size_ = sub.order();
    g.restricted_ = std::move(sub);
    return g;
}

Permutation Ambient::element(uint64_t i) const {
    if (restricted_) return restricted_->elements()[i];
    return unrank(i, degree_);
}

uint64_t Ambient::index_of(const Permutation& p) const {
    const uint64_t r = rank(p);
    if (!restricted_) return r;
    const auto& ranks = restricted_->element_ranks();
    const auto it = std::lower_bound(ranks.begin(), ranks.end(), r);
    if (it == ranks.end() || *it != r) throw std::invalid_argument("element not in restricted ambient");
    return static_cast<uint64_t>(it - ranks.begin());
}

bool Ambient::contains(const Permutation& p) const {
    if (p.degree() != degree_) return false;
    return !restricted_ || restricted_->contains(p);
}

const Subgroup& Ambient::as_subgroup() const {
    if (!restricted_) throw std::logic_error("full ambient has no subgroup view");
    return *restricted_;
}

uint64_t index_in(const Subgroup& h, const Ambient& g) {
    if (h.degree() != g.degree()) throw std::invalid_argument("degree mismatch");
    if (!g.is_full())
        for (const auto& p : h.generators())
            if (!g.contains(p)) throw std::invalid_argument("subgroup not contained in restricted ambient");
    return g.size() / h.order();
}

bool is_abelian(const Subgroup& h) {
    const auto& gens = h.generators();
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j)
            if (gens[i] * gens[j] != gens[j] * gens[i]) return false;
    return true;
}

std::optional<Permutation> is_cyclic(const Subgroup& h) {
    for (const auto& p : h.elements())
        if (order(p) == h.order()) return p;
    return std::nullopt;
}

namespace {

bool normalizes(const Permutation& g, const Subgroup& h) {
    const Permutation gi = inverse(g);
    for (const auto& gen : h.generators())
        if (!h.contains(g * gen * gi)) return false;
    return true;
}

bool is_two_element(const Permutation& p) {
    uint64_t o = order(p);
    while (o % 2 == 0) o /= 2;
    return o == 1;
}

}  // namespace

Subgroup sylow2(const Subgroup& h) {
    Subgroup p = Subgroup::trivial(h.degree());
    while ((h.order() / p.order()) % 2 == 0) {
        // Smallest-rank 2-element of N_H(P) \ P; one exists while the index
        // is even.
        const Permutation* pick = nullptr;
        for (const auto& g : h.elements()) {
            if (p.contains(g) || !is_two_element(g) || g.is_identity()) continue;
            if (!normalizes(g, p)) continue;
            pick = &g;
            break;
        }
        if (!pick) throw std::logic_error("sylow2: no admissible extension found");
        std::vector<Permutation> gens = p.generators();
        gens.push_back(*pick);
        p = Subgroup::close(std::move(gens), h.degree());
    }
    return p;
}

namespace {
std::atomic<int> g_worker_threads{1};
}  // namespace

void set_worker_threads(int count) { g_worker_threads = std::max(1, count); }
int worker_threads() { return g_worker_threads; }

Subgroup normalizer_in(const Subgroup& h, const Ambient& g) {
    const int threads = std::min<int>(g_worker_threads, 16);
    if (threads <= 1 || g.size() < 1024) {
        std::vector<Permutation> members;
        for (uint64_t i = 0; i < g.size(); ++i) {
            Permutation cand = g.element(i);
            if (normalizes(cand, h)) members.push_back(std::move(cand));
        }
        return Subgroup::from_elements(std::move(members), h.degree());
    }
    // Partition the index range; concatenating the per-range results in
    // range order keeps the outcome independent of the thread count.
    std::vector<std::future<std::vector<Permutation>>> parts;
    const uint64_t chunk = (g.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const uint64_t lo = chunk * static_cast<uint64_t>(t);
        const uint64_t hi = std::min(g.size(), lo + chunk);
        parts.push_back(std::async(std::launch::async, [&h, &g, lo, hi] {
            std::vector<Permutation> found;
            for (uint64_t i = lo; i < hi; ++i) {
                Permutation cand = g.element(i);
                if (normalizes(cand, h)) found.push_back(std::move(cand));
            }
            return found;
        }));
    }
    std::vector<Permutation> members;
    for (auto& f : parts) {
        auto part = f.get();
        members.insert(members.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }
    return Subgroup::from_elements(std::move(members), h.degree());
}

std::vector<Permutation> left_cosets(const Subgroup& h, const Ambient& g) {
    (void)index_in(h, g);  // containment check in restricted mode
    std::vector<bool> assigned(g.size(), false);
    std::vector<Permutation> reps;
    reps.reserve(g.size() / h.order());
    for (uint64_t i = 0; i < g.size(); ++i) {
        if (assigned[i]) continue;
        Permutation x = g.element(i);
        for (const auto& hh : h.elements()) assigned[g.index_of(x * hh)] = true;
        reps.push_back(std::move(x));
    }
    return reps;
}

// The block H x H as ambient indices plus its flags.
DoubleCoset double_coset_of(const Subgroup& h, const Ambient& g, const Permutation& x) {
    std::vector<std::pair<uint64_t, const Permutation*>> raw;
    std::vector<Permutation> store;
    store.reserve(h.order() * h.order());
    for (const auto& h1 : h.elements()) {
        const Permutation left = h1 * x;
        for (const auto& h2 : h.elements()) store.push_back(left * h2);
    }
    raw.reserve(store.size());
    for (const auto& p : store) raw.emplace_back(g.index_of(p), &p);
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    raw.erase(std::unique(raw.begin(), raw.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              raw.end());

    DoubleCoset d;
    d.indices.reserve(raw.size());
    for (const auto& [idx, p] : raw) {
        d.indices.push_back(idx);
        if (!d.has_involution && is_involution(*p)) d.has_involution = true;
    }
    d.representative = g.element(d.indices.front());
    d.left_coset_count = d.indices.size() / h.order();
    const uint64_t inv_idx = g.index_of(inverse(x));
    d.self_inverse = std::binary_search(d.indices.begin(), d.indices.end(), inv_idx);
    return d;
}

std::vector<DoubleCoset> double_cosets(const Subgroup& h, const Ambient& g) {
    (void)index_in(h, g);
    std::vector<bool> assigned(g.size(), false);
    std::vector<DoubleCoset> out;
    for (uint64_t i = 0; i < g.size(); ++i) {
        if (assigned[i]) continue;
        DoubleCoset d = double_coset_of(h, g, g.element(i));
        for (uint64_t idx : d.indices) assigned[idx] = true;
        out.push_back(std::move(d));
    }
    return out;
}

bool is_normal_in(const Subgroup& h, const Ambient& g) {
    for (uint64_t i = 0; i < g.size(); ++i)
        if (!normalizes(g.element(i), h)) return false;
    return true;
}

Subgroup conjugate_subgroup(const Subgroup& h, const Permutation& g) {
    std::vector<Permutation> gens;
    gens.reserve(h.generators().size());
    for (const auto& x : h.generators()) gens.push_back(conjugate(x, g));
    return Subgroup::close(std::move(gens), h.degree());
}

std::vector<Permutation> greedy_generators(const Subgroup& h) {
    std::vector<Permutation> gens;
    Subgroup span = Subgroup::trivial(h.degree());
    while (span.order() < h.order()) {
        for (const auto& p : h.elements()) {
            if (span.contains(p)) continue;
            gens.push_back(p);
            span = Subgroup::close(gens, h.degree());
            break;
        }
    }
    return gens;
}

namespace {

// Extends gens(a) -> images multiplicatively over all of a; false on any
// conflict or if the image set is too small.
bool generator_map_extends(const Subgroup& a, const std::vector<Permutation>& gens,
                           const std::vector<Permutation>& images) {
    std::unordered_map<uint64_t, Permutation> phi;  // rank in a -> image
    phi.emplace(0, Permutation::identity(images.empty() ? a.degree() : images.front().degree()));
    std::deque<Permutation> frontier{Permutation::identity(a.degree())};
    std::unordered_set<uint64_t> image_ranks{0};
    while (!frontier.empty()) {
        Permutation cur = std::move(frontier.front());
        frontier.pop_front();
        const Permutation& cur_img = phi.at(rank(cur));
        for (size_t gi = 0; gi < gens.size(); ++gi) {
            Permutation next = cur * gens[gi];
            Permutation next_img = cur_img * images[gi];
            const uint64_t r = rank(next);
            auto it = phi.find(r);
            if (it != phi.end()) {
                if (it->second != next_img) return false;
            } else {
                image_ranks.insert(rank(next_img));
                phi.emplace(r, std::move(next_img));
                frontier.push_back(std::move(next));
            }
        }
    }
    return phi.size() == a.order() && image_ranks.size() == a.order();
}

bool iso_search(const Subgroup& a, const Subgroup& b, const std::vector<Permutation>& gens,
                std::vector<Permutation>& images) {
    if (images.size() == gens.size()) return generator_map_extends(a, gens, images);
    const uint64_t want = order(gens[images.size()]);
    for (const auto& cand : b.elements()) {
        if (order(cand) != want) continue;
        images.push_back(cand);
        if (iso_search(a, b, gens, images)) return true;
        images.pop_back();
    }
    return false;
}

}  // namespace

bool are_isomorphic(const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return false;
    // Element-order multisets must match; cheap reject before the search.
    auto order_profile = [](const Subgroup& s) {
        std::vector<uint64_t> os;
        os.reserve(s.order());
        for (const auto& p : s.elements()) os.push_back(order(p));
        std::sort(os.begin(), os.end());
        return os;
    };
    if (order_profile(a) != order_profile(b)) return false;
    const auto gens = greedy_generators(a);
    std::vector<Permutation> images;
    return gens.empty() ? true : iso_search(a, b, gens, images);
}

}  // namespace sncode
