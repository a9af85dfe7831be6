#include <doctest.h>

#include <algorithm>
#include <set>

#include "hgscan/colex.hpp"
#include "hgscan/rng.hpp"
#include "oracles.hpp"

using namespace hgscan;

TEST_CASE("Philox4x32-10 known-answer vectors") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter_uniform is a pure function in [0,1)") {
    for (std::uint64_t c = 0; c < 1000; ++c) {
        const double u = counter_uniform(42, c, 7);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == counter_uniform(42, c, 7));
    }
    CHECK(counter_uniform(42, 0, 0) != counter_uniform(43, 0, 0));
    CHECK(counter_uniform(42, 0, 0) != counter_uniform(42, 0, 1));
    double sum = 0.0;
    for (std::uint64_t c = 0; c < 100000; ++c) sum += counter_uniform(1, c, 0);
    CHECK(sum / 100000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("CounterStream::below stays in range") {
    CounterStream s(3, 9);
    for (int i = 0; i < 1000; ++i) CHECK(s.below(7) < 7);
}

TEST_CASE("colex rank examples and bijection") {
    CHECK(colex_rank(CanonicalEdge{0, 1}) == 0);
    CHECK(colex_rank(CanonicalEdge{1, 2}) == 2);
    std::set<std::uint64_t> ranks;
    for (const auto& e : oracle::subsets(6, 3)) ranks.insert(colex_rank(std::span<const Vertex>(e)));
    CHECK(ranks.size() == 20);
    CHECK(*ranks.begin() == 0);
    CHECK(*ranks.rbegin() == 19);
}

TEST_CASE("colex iteration, rank and unrank agree") {
    for (int m = 2; m <= 4; ++m) {
        std::vector<Vertex> tuple(m);
        for (int i = 0; i < m; ++i) tuple[i] = static_cast<Vertex>(i);
        std::uint64_t expected = 0;
        do {
            CHECK(colex_rank(std::span<const Vertex>(tuple)) == expected);
            CHECK(colex_unrank(expected, m) == tuple);
            ++expected;
        } while (next_colex(tuple, 9));
        CHECK(expected == oracle::choose(9, m));
    }
}
