#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "qrtile/models.hpp"
#include "qrtile/qsu_scheduler.hpp"
#include "qrtile/schedule.hpp"

using namespace qrtile;

namespace {

Circuit chain_circuit(int gates) {
    Circuit c;
    c.n = 2;
    for (int i = 0; i < gates; ++i) c.operators.push_back(make_gate(i, {0}));
    return c;
}

// Full transitive closure by Floyd-Warshall over the shared-qubit rule,
// independent of the library's edge construction.
std::vector<std::vector<bool>> brute_closure(const Circuit& c) {
    const int m = c.size();
    std::vector<std::vector<bool>> direct(m, std::vector<bool>(m, false));
    for (int j = 0; j < m; ++j) {
        if (c.op(j).kind == OpKind::PauliString) continue;
        for (int q : c.op(j).targets) {
            for (int i = j - 1; i >= 0; --i) {
                if (c.op(i).kind == OpKind::PauliString) continue;
                const auto& ti = c.op(i).targets;
                if (std::find(ti.begin(), ti.end(), q) != ti.end()) {
                    direct[i][j] = true;
                    break;
                }
            }
        }
    }
    std::vector<std::vector<bool>> closed = direct;
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (closed[i][k] && closed[k][j]) closed[i][j] = true;
    return closed;
}

Schedule identity_schedule(const Circuit& c, const std::vector<int>& order) {
    Schedule s;
    s.n = c.n;
    s.n_local = c.n;
    s.shape = ClusterShape::flat(1);
    s.order = order;
    Tile t;
    t.gates = order;
    t.local_qubits = low_set(c.n);
    s.tiles.push_back(t);
    s.index_tiles();
    return s;
}

}  // namespace

TEST_CASE("fig2 fixture reproduces the documented dependency list") {
    Circuit c = fixture_circuit("fig2");
    DependencyGraph g = build_dependency_graph(c);

    std::set<std::pair<int, int>> edges(g.edges.begin(), g.edges.end());
    std::set<std::pair<int, int>> expect{{0, 2}, {1, 2}, {2, 3}, {2, 4}};
    CHECK(edges == expect);

    CHECK(g.reaches(0, 3));
    CHECK(g.reaches(1, 3));
    CHECK(g.reaches(2, 3));
    CHECK(g.reaches(0, 4));
    CHECK(g.reaches(1, 4));
    CHECK(g.reaches(2, 4));
    CHECK_FALSE(g.reaches(0, 1));
    CHECK_FALSE(g.reaches(3, 4));

    CHECK(g.depth == std::vector<int>{0, 0, 1, 2, 2});
}

TEST_CASE("single-gate circuit has no edges and depth zero") {
    Circuit c;
    c.n = 3;
    c.operators.push_back(make_gate(0, {0, 2}));
    DependencyGraph g = build_dependency_graph(c);
    CHECK(g.edges.empty());
    CHECK(g.depth == std::vector<int>{0});
}

TEST_CASE("chain of five gates on one qubit forms a path") {
    Circuit c = chain_circuit(5);
    DependencyGraph g = build_dependency_graph(c);
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    CHECK(g.depth == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("depth_sort breaks depth ties by ascending target sets") {
    Circuit c;
    c.n = 3;
    c.operators.push_back(make_gate(0, {2}));
    c.operators.push_back(make_gate(1, {0}));
    DependencyGraph g = build_dependency_graph(c);
    CHECK(depth_sort(c, g) == std::vector<int>{1, 0});
}

TEST_CASE("depth_sort keeps an already sorted chain unchanged") {
    Circuit c = chain_circuit(5);
    DependencyGraph g = build_dependency_graph(c);
    CHECK(depth_sort(c, g) == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("depth_sort on fig2") {
    Circuit c = fixture_circuit("fig2");
    DependencyGraph g = build_dependency_graph(c);
    CHECK(depth_sort(c, g) == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("validate_schedule flags the first broken dependency") {
    Circuit c = fixture_circuit("fig2");
    DependencyGraph g = build_dependency_graph(c);

    auto ok = validate_schedule(c, g, identity_schedule(c, {0, 1, 2, 3, 4}));
    CHECK_FALSE(ok.has_value());

    auto bad = validate_schedule(c, g, identity_schedule(c, {0, 1, 3, 2, 4}));
    REQUIRE(bad.has_value());
    CHECK(bad->before == 2);
    CHECK(bad->after == 3);
}

TEST_CASE("disjoint gates validate in any order") {
    Circuit c;
    c.n = 4;
    c.operators.push_back(make_gate(0, {0}));
    c.operators.push_back(make_gate(1, {1}));
    c.operators.push_back(make_gate(2, {2}));
    DependencyGraph g = build_dependency_graph(c);
    CHECK_FALSE(validate_schedule(c, g, identity_schedule(c, {2, 0, 1})).has_value());
}

TEST_CASE("Pauli-string operators have no dependencies") {
    Circuit c;
    c.n = 3;
    c.operators.push_back(make_pauli_op(0, "XZI"));
    c.operators.push_back(make_pauli_op(1, "ZXI"));
    c.operators.push_back(make_pauli_op(2, "XIZ"));
    DependencyGraph g = build_dependency_graph(c);
    CHECK(g.edges.empty());
    CHECK_FALSE(validate_schedule(c, g, identity_schedule(c, {2, 1, 0})).has_value());
}

TEST_CASE("non-permutation order is rejected") {
    Circuit c = chain_circuit(3);
    DependencyGraph g = build_dependency_graph(c);
    CHECK_THROWS_AS(validate_schedule(c, g, identity_schedule(c, {0, 0, 2})), InvalidSchedule);
    Schedule s = identity_schedule(c, {0, 1, 2});
    s.order.pop_back();
    CHECK_THROWS_AS(validate_schedule(c, g, s), InvalidSchedule);
}

TEST_CASE("Pauli targets match the non-identity letter positions") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + rng.below(16);
        std::string letters;
        for (int q = 0; q < n; ++q) letters.push_back("IXYZ"[rng.below(4)]);
        Operator op = make_pauli_op(0, letters);
        std::vector<int> expect;
        for (int q = 0; q < n; ++q)
            if (letters[static_cast<std::size_t>(q)] != 'I') expect.push_back(q);
        CHECK(op.targets == expect);
        PauliTerm term{1.0, letters};
        CHECK(term.plain_targets() == mask_of(expect));
    }
}

TEST_CASE("depths rank every edge strictly and depth_sort respects C1") {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + rng.below(11);
        int m = 1 + rng.below(200);
        Circuit c = gen_random_circuit(n, m, rng.next(), 2, false);
        DependencyGraph g = build_dependency_graph(c);

        for (auto [i, j] : g.edges)
            CHECK(g.depth[static_cast<std::size_t>(i)] < g.depth[static_cast<std::size_t>(j)]);

        if (m <= 60) {
            auto closed = brute_closure(c);
            for (auto [i, j] : g.edges)
                CHECK(closed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    CHECK(g.reaches(i, j) ==
                          closed[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }

        auto order = depth_sort(c, g);
        CHECK_FALSE(validate_schedule(c, g, identity_schedule(c, order)).has_value());
    }
}
