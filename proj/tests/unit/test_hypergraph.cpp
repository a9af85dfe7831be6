#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "hgscan/errors.hpp"
#include "hgscan/hypergraph.hpp"
#include "oracles.hpp"

using namespace hgscan;

namespace {

Hypergraph random_graph(std::mt19937_64& rng, std::uint32_t n, int m, double density) {
    std::bernoulli_distribution keep(density);
    std::vector<Vertex> flat;
    for (const auto& e : oracle::subsets(n, m)) {
        if (keep(rng)) flat.insert(flat.end(), e.begin(), e.end());
    }
    return Hypergraph(n, m, std::move(flat));
}

VertexSet random_subset(std::mt19937_64& rng, std::uint32_t n) {
    std::vector<Vertex> members;
    std::bernoulli_distribution coin(0.5);
    for (Vertex v = 0; v < n; ++v) {
        if (coin(rng)) members.push_back(v);
    }
    if (members.empty()) members.push_back(0);
    if (members.size() == n) members.pop_back();
    return VertexSet(std::move(members));
}

std::vector<char> mask(const VertexSet& d, std::uint32_t n) { return d.indicator(n); }

}  // namespace

TEST_CASE("VertexSet and CanonicalEdge invariants") {
    const VertexSet s{4, 1, 3};
    CHECK(s.size() == 3);
    CHECK(s[0] == 1);
    CHECK(s.contains(3));
    CHECK_FALSE(s.contains(2));
    CHECK_THROWS_AS(VertexSet({1, 1}), DomainError);
    CHECK_THROWS_AS(VertexSet::from_sorted({2, 1}), DomainError);
    CHECK_THROWS_AS(s.check_range(4), DomainError);
    CHECK(VertexSet::prefix(3) == VertexSet{0, 1, 2});
    CHECK(VertexSet{0, 1} < VertexSet{0, 2});
    CHECK_THROWS_AS(CanonicalEdge({2, 1}), DomainError);
    CHECK_THROWS_AS(CanonicalEdge({1, 1}), DomainError);
}

TEST_CASE("Hypergraph construction validates edges") {
    CHECK_THROWS_AS(Hypergraph(3, 3, std::vector<Vertex>{0, 1, 2}), DomainError);  // N > m
    CHECK_THROWS_AS(Hypergraph(5, 1, std::vector<Vertex>{}), DomainError);
    CHECK_THROWS_AS(Hypergraph(5, 2, std::vector<Vertex>{1, 0}), DomainError);
    CHECK_THROWS_AS(Hypergraph(5, 2, std::vector<Vertex>{0, 5}), DomainError);
    CHECK_THROWS_AS(Hypergraph(5, 2, std::vector<Vertex>{0, 1, 0, 1}), DomainError);
    const Hypergraph g(6, 3, std::vector<Vertex>{2, 3, 4, 1, 2, 3, 1, 4, 5});
    CHECK(g.num_edges() == 3);
    CHECK(g.has_edge(std::vector<Vertex>{1, 2, 3}));
    CHECK_FALSE(g.has_edge(std::vector<Vertex>{1, 2, 4}));
    CHECK(g.edges().front() == CanonicalEdge{1, 2, 3});
}

TEST_CASE("count_internal_edges examples") {
    std::vector<Vertex> complete;
    for (const auto& e : oracle::subsets(6, 2)) complete.insert(complete.end(), e.begin(), e.end());
    const Hypergraph k6(6, 2, complete);
    CHECK(count_internal_edges(k6, VertexSet{0, 2, 3, 5}) == 6);
    CHECK(count_internal_edges(k6, VertexSet{4}) == 0);
    const Hypergraph g(6, 3, std::vector<Vertex>{1, 2, 3, 2, 3, 4, 1, 4, 5});
    CHECK(count_internal_edges(g, VertexSet{1, 2, 3, 4}) == 2);
    CHECK(count_internal_edges(g, VertexSet{1, 2}) == 0);
    CHECK_THROWS_AS(count_internal_edges(g, VertexSet{1, 7}), DomainError);
}

TEST_CASE("count_odd_crossing examples") {
    const Hypergraph tri(4, 2, std::vector<Vertex>{1, 2, 1, 3, 2, 3});
    CHECK(count_odd_crossing(tri, VertexSet{1, 2}) == 2);
    // Every edge inside d, even arity.
    CHECK(count_odd_crossing(tri, VertexSet{1, 2, 3}) == 0);
    const Hypergraph g(7, 3, std::vector<Vertex>{4, 5, 6});
    CHECK(count_odd_crossing(g, VertexSet{1, 2, 3}) == 1);
    CHECK(count_odd_inside(g, VertexSet{1, 2, 3}) == 0);
}

TEST_CASE("degree examples") {
    const Hypergraph g(6, 3, std::vector<Vertex>{1, 2, 3, 1, 4, 5});
    CHECK(degree(g, 0) == 0);
    CHECK(degree(g, 1) == 2);
    std::vector<Vertex> complete;
    for (const auto& e : oracle::subsets(7, 2)) complete.insert(complete.end(), e.begin(), e.end());
    const Hypergraph k7(7, 2, complete);
    for (Vertex v = 0; v < 7; ++v) CHECK(degree(k7, v) == 6);
    CHECK_THROWS_AS(degree(g, 6), DomainError);
}

TEST_CASE("odd-crossing count equals the ordered-tuple formula") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 2 + trial % 3;
        const std::uint32_t n = static_cast<std::uint32_t>(m + 2 + trial % (11 - m));
        const Hypergraph g = random_graph(rng, n, m, 0.3);
        std::set<oracle::Edge> edge_set;
        for (const auto& e : g.edges()) edge_set.insert(oracle::Edge(e.vertices().begin(), e.vertices().end()));
        const VertexSet d = random_subset(rng, n);
        CHECK(count_odd_crossing(g, d) == oracle::odd_crossing_literal(edge_set, n, m, mask(d, n)));
    }
}

TEST_CASE("partition, cut and monotonicity properties") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 3;
        const std::uint32_t n = 9;
        const Hypergraph g = random_graph(rng, n, m, 0.25);
        const VertexSet d = random_subset(rng, n);
        const auto in_d = mask(d, n);
        std::uint64_t touching_outside = 0;
        std::uint64_t cut = 0;
        for (const auto& e : g.edges()) {
            int out = 0;
            for (Vertex v : e.vertices()) out += in_d[v] ? 0 : 1;
            touching_outside += out > 0;
            cut += out == 1;
        }
        CHECK(count_internal_edges(g, d) + touching_outside == g.num_edges());
        if (m == 2) CHECK(count_odd_crossing(g, d) == cut);

        // Adding an edge inside d.
        if (d.size() >= static_cast<std::size_t>(m)) {
            std::vector<Vertex> e(d.begin(), d.begin() + m);
            if (!g.has_edge(e)) {
                std::vector<Vertex> flat(g.flat_edges().begin(), g.flat_edges().end());
                flat.insert(flat.end(), e.begin(), e.end());
                const Hypergraph bigger(n, m, flat);
                CHECK(count_internal_edges(bigger, d) == count_internal_edges(g, d) + 1);
                CHECK(count_odd_crossing(bigger, d) == count_odd_crossing(g, d));
            }
        }
    }
}

TEST_CASE("IncrementalCounts tracks internal and odd-inside counts") {
    std::mt19937_64 rng(17);
    for (int m = 2; m <= 4; ++m) {
        const std::uint32_t n = 70;  // spans more than one bitset word
        const Hypergraph g = random_graph(rng, n, m, m == 2 ? 0.2 : (m == 3 ? 0.02 : 0.002));
        IncrementalCounts counts(g);
        std::vector<Vertex> order(n);
        for (Vertex v = 0; v < n; ++v) order[v] = v;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Vertex> stack;
        for (int step = 0; step < 40; ++step) {
            const Vertex v = order[step];
            counts.push(v);
            stack.push_back(v);
            const VertexSet d{std::vector<Vertex>(stack)};
            CHECK(counts.internal() == count_internal_edges(g, d));
            CHECK(counts.odd_inside() == count_odd_inside(g, d));
        }
        for (int step = 0; step < 20; ++step) {
            counts.pop(stack.back());
            stack.pop_back();
        }
        const VertexSet d{std::vector<Vertex>(stack)};
        CHECK(counts.internal() == count_internal_edges(g, d));
        CHECK(counts.odd_inside() == count_odd_inside(g, d));
        CHECK(counts.size() == 20);
    }
}

TEST_CASE("edge list round trip and line-numbered errors") {
    std::mt19937_64 rng(1);
    const Hypergraph g = random_graph(rng, 10, 3, 0.2);
    std::stringstream buf;
    write_edge_list(buf, g);
    CHECK(read_edge_list(buf, 10) == g);

    std::istringstream bad("v1,v2\n0,1\n3,2\n");
    try {
        read_edge_list(bad, 5);
        FAIL("expected an InputError");
    } catch (const InputError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream range("v1,v2\n0,9\n");
    CHECK_THROWS_AS(read_edge_list(range, 5), InputError);
    std::istringstream junk("v1,v2\n0,x\n");
    CHECK_THROWS_AS(read_edge_list(junk, 5), InputError);
    std::istringstream header("a,b\n0,1\n");
    CHECK_THROWS_AS(read_edge_list(header, 5), InputError);
}
