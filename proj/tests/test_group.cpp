#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "sncode/errors.hpp"
#include "sncode/group.hpp"

using namespace sncode;

namespace {

Subgroup sub(std::initializer_list<const char*> gens, int n) {
    std::vector<Permutation> gp;
    for (const char* g : gens) gp.push_back(parse_cycles(g, n));
    return Subgroup::close(std::move(gp), n);
}

}  // namespace

TEST_CASE("closure reaches the generated subgroup") {
    CHECK(sub({"(1 2)", "(1 2 3)"}, 3).order() == 6);
    CHECK(sub({"(1 2 3)", "(2 3 4)"}, 4).order() == 12);  // even permutations of 4 points
    CHECK(sub({"(1 2)", "(1 2 3 4)"}, 4).order() == 24);
    CHECK(sub({"(1 2 3 4)", "(1 3)"}, 4).order() == 8);  // dihedral
    CHECK(sub({"(1 2)(3 4)", "(1 3)(2 4)"}, 4).order() == 4);  // Klein
    CHECK(sub({"(1 2 3 4 5)"}, 5).order() == 5);
    CHECK(Subgroup::trivial(4).order() == 1);
    CHECK(Subgroup::symmetric(4).order() == 24);
}

TEST_CASE("closure respects the element cap") {
    std::vector<Permutation> gens{parse_cycles("(1 2)", 4), parse_cycles("(1 2 3 4)", 4)};
    CHECK_THROWS_AS(Subgroup::close(gens, 4, 10), resource_error);
}

TEST_CASE("element storage is ascending by rank and contains works") {
    const Subgroup h = sub({"(1 2 3)", "(1 2)"}, 3);
    const auto& ranks = h.element_ranks();
    CHECK(std::is_sorted(ranks.begin(), ranks.end()));
    CHECK(std::adjacent_find(ranks.begin(), ranks.end()) == ranks.end());
    for (const auto& p : h.elements()) CHECK(h.contains(p));
    CHECK(h.contains(Permutation::identity(3)));
    const Subgroup a3 = sub({"(1 2 3)"}, 3);
    CHECK(a3.contains(parse_cycles("(1 3 2)", 3)));
    CHECK_FALSE(a3.contains(parse_cycles("(1 2)", 3)));
}

TEST_CASE("from_elements closes over the identity and sorts") {
    std::vector<Permutation> elems{parse_cycles("(1 2)", 3)};
    const Subgroup h = Subgroup::from_elements(elems, 3);
    CHECK(h.order() == 2);
    CHECK(h.contains(Permutation::identity(3)));
}

TEST_CASE("full ambient enumerates S_n in rank order") {
    const Ambient g = Ambient::full(4);
    CHECK(g.is_full());
    CHECK(g.size() == 24);
    for (uint64_t i = 0; i < g.size(); ++i) {
        CHECK(rank(g.element(i)) == i);
        CHECK(g.index_of(g.element(i)) == i);
        CHECK(g.contains(g.element(i)));
    }
    Caps caps;
    CHECK_THROWS_AS(Ambient::full(caps.ambient_degree_cap + 1, caps), resource_error);
}

TEST_CASE("restricted ambient wraps a subgroup") {
    const Subgroup n8 = sub({"(1 2 3 4)", "(1 3)"}, 4);
    const Ambient g = Ambient::restricted(n8);
    CHECK_FALSE(g.is_full());
    CHECK(g.size() == 8);
    for (uint64_t i = 0; i < g.size(); ++i) CHECK(g.index_of(g.element(i)) == i);
    CHECK(g.as_subgroup() == n8);
    CHECK_FALSE(g.contains(parse_cycles("(1 2)", 4)));
}

TEST_CASE("index_in checks containment") {
    const Subgroup h = sub({"(1 2)"}, 3);
    CHECK(index_in(h, Ambient::full(3)) == 3);
    const Subgroup a3 = sub({"(1 2 3)"}, 3);
    CHECK_THROWS_AS(index_in(h, Ambient::restricted(a3)), std::invalid_argument);
}

TEST_CASE("abelian and cyclic recognition") {
    CHECK(is_abelian(sub({"(1 2 3 4)"}, 4)));
    CHECK(is_abelian(sub({"(1 2)(3 4)", "(1 3)(2 4)"}, 4)));
    CHECK_FALSE(is_abelian(sub({"(1 2 3 4)", "(1 3)"}, 4)));
    CHECK_FALSE(is_cyclic(sub({"(1 2)(3 4)", "(1 3)(2 4)"}, 4)).has_value());
    const auto gen = is_cyclic(sub({"(1 2 3)", "(4 5)"}, 5));
    REQUIRE(gen.has_value());
    CHECK(order(*gen) == 6);
}

TEST_CASE("sylow2 produces a maximal 2-subgroup") {
    const Subgroup p = sylow2(Subgroup::symmetric(4));
    CHECK(p.order() == 8);
    for (const auto& x : p.elements()) {
        uint64_t o = order(x);
        while (o % 2 == 0) o /= 2;
        CHECK(o == 1);
    }
    for (const auto& x : p.elements()) CHECK(Subgroup::symmetric(4).contains(x));
    CHECK(sylow2(sub({"(1 2 3)"}, 3)).order() == 1);
    CHECK(sylow2(sub({"(1 2 3)", "(4 5)"}, 5)).order() == 2);
}

TEST_CASE("normalizer by ambient scan") {
    const Subgroup a3 = sub({"(1 2 3)"}, 3);
    CHECK(normalizer_in(a3, Ambient::full(3)).order() == 6);
    const Subgroup c4 = sub({"(1 2 3 4)"}, 4);
    CHECK(normalizer_in(c4, Ambient::full(4)).order() == 8);
    // thread count never changes the result
    set_worker_threads(4);
    const Subgroup par = normalizer_in(c4, Ambient::full(4));
    set_worker_threads(1);
    CHECK(par == normalizer_in(c4, Ambient::full(4)));
}

TEST_CASE("left cosets partition the ambient group") {
    const Subgroup h = sub({"(1 2)"}, 3);
    const Ambient g = Ambient::full(3);
    const auto reps = left_cosets(h, g);
    CHECK(reps.size() == 3);
    std::set<uint64_t> covered;
    for (const auto& r : reps)
        for (const auto& hh : h.elements()) covered.insert(rank(r * hh));
    CHECK(covered.size() == 6);
}

TEST_CASE("double cosets partition the ambient group with verified flags") {
    const Subgroup h = sub({"(1 2)"}, 3);
    const Ambient g = Ambient::full(3);
    const auto blocks = double_cosets(h, g);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].indices.size() == 2);  // H itself
    CHECK(blocks[1].indices.size() == 4);
    std::set<uint64_t> covered;
    for (const auto& d : blocks) {
        CHECK(d.indices.size() % h.order() == 0);
        CHECK(d.left_coset_count == d.indices.size() / h.order());
        covered.insert(d.indices.begin(), d.indices.end());
        // flags re-derived independently
        std::set<uint64_t> members(d.indices.begin(), d.indices.end());
        bool self_inv = true, has_inv = false;
        for (uint64_t idx : d.indices) {
            const Permutation p = g.element(idx);
            if (!members.count(g.index_of(inverse(p)))) self_inv = false;
            if (is_involution(p)) has_inv = true;
        }
        CHECK(d.self_inverse == self_inv);
        CHECK(d.has_involution == has_inv);
    }
    CHECK(covered.size() == g.size());
}

TEST_CASE("double coset of a specific representative") {
    const Subgroup h = sub({"(1 2)(3 4)"}, 4);
    const Ambient g = Ambient::full(4);
    const DoubleCoset d = double_coset_of(h, g, parse_cycles("(1 3 2 4)", 4));
    CHECK(d.left_coset_count == 1);
    CHECK(d.self_inverse);
    CHECK_FALSE(d.has_involution);
    CHECK(d.indices.size() == 2);
}

TEST_CASE("normality test") {
    CHECK(is_normal_in(sub({"(1 2 3)"}, 3), Ambient::full(3)));
    CHECK_FALSE(is_normal_in(sub({"(1 2)"}, 3), Ambient::full(3)));
    CHECK(is_normal_in(sub({"(1 2)(3 4)", "(1 3)(2 4)"}, 4), Ambient::full(4)));
}

TEST_CASE("conjugate subgroup is the elementwise conjugate") {
    const Subgroup h = sub({"(1 2)", "(1 2 3)"}, 4);
    const Permutation g = parse_cycles("(1 4)", 4);
    const Subgroup c = conjugate_subgroup(h, g);
    CHECK(c.order() == h.order());
    std::set<uint64_t> expected;
    for (const auto& p : h.elements()) expected.insert(rank(conjugate(p, g)));
    std::set<uint64_t> actual(c.element_ranks().begin(), c.element_ranks().end());
    CHECK(expected == actual);
}

TEST_CASE("abstract isomorphism testing") {
    const Subgroup d4a = sub({"(1 4 7 6)(2 8 3 5)", "(2 5)(3 8)(4 6)"}, 8);
    const Subgroup d4b = sub({"(1 6)(2 4)(3 8)(5 7)", "(1 8 5 4)(2 7 3 6)"}, 8);
    CHECK(are_isomorphic(d4a, d4b));
    const Subgroup z8 = sub({"(1 2 3 4 5 6 7 8)"}, 8);
    CHECK_FALSE(are_isomorphic(d4a, z8));
    const Subgroup q8 = sub({"(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"}, 8);
    CHECK(q8.order() == 8);
    CHECK_FALSE(are_isomorphic(d4a, q8));
    const Subgroup klein = sub({"(1 2)(3 4)", "(1 3)(2 4)"}, 4);
    const Subgroup z4 = sub({"(1 2 3 4)"}, 4);
    CHECK_FALSE(are_isomorphic(klein, z4));
    CHECK(are_isomorphic(z4, sub({"(1 3 2 4)"}, 4)));
}

TEST_CASE("greedy generators regenerate the subgroup") {
    for (const auto& h : {sub({"(1 2 3 4)", "(1 3)"}, 4), sub({"(1 2 3)", "(4 5)"}, 5),
                          Subgroup::symmetric(4)}) {
        const auto gens = greedy_generators(h);
        CHECK(Subgroup::close(gens, h.degree()) == h);
        CHECK(gens.size() <= 4);
    }
}
