#include <doctest.h>

#include <cmath>
#include <random>

#include "hgscan/errors.hpp"
#include "hgscan/lr_oracle.hpp"
#include "hgscan/sampler.hpp"
#include "oracles.hpp"

using namespace hgscan;

namespace {

struct Inside {
    std::vector<double> p;
    std::vector<int> present;
};

Inside inside_support(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s) {
    Inside out;
    const auto in_s = s.indicator(model.num_vertices());
    for (const auto& e : oracle::subsets(model.num_vertices(), model.arity())) {
        if (!oracle::inside(e, in_s)) continue;
        const std::vector<Vertex> tuple(e.begin(), e.end());
        out.p.push_back(model.edge_probability(std::span<const Vertex>(tuple)));
        out.present.push_back(g.has_edge(tuple) ? 1 : 0);
    }
    return out;
}

LrConfig config(std::uint32_t n, double rho) {
    LrConfig cfg;
    cfg.n = n;
    cfg.rho = rho;
    return cfg;
}

}  // namespace

TEST_CASE("rho = 1 collapses every ratio to one") {
    const auto model = ProbabilityModel::homogeneous(9, 2, 0.2);
    for (std::uint64_t r = 0; r < 10; ++r) {
        const auto g = sample_null(model, 3, r);
        CHECK(lr_for_support(g, model, VertexSet{0, 4, 7}, 1.0) == 1.0);
        CHECK(lr_mixture(g, model, config(3, 1.0)) == 1.0);
        CHECK(truncated_lr(g, model, config(3, 1.0)) <= 1.0);
    }
    // Every Gamma_S true on the empty graph.
    const Hypergraph empty(9, 2, std::vector<Vertex>{});
    CHECK(truncated_lr(empty, model, config(3, 1.0)) == 1.0);
}

TEST_CASE("single present edge") {
    const auto model = ProbabilityModel::homogeneous(5, 2, 0.1);
    const Hypergraph g(5, 2, std::vector<Vertex>{0, 1, 3, 4});
    const double want = 3.0 * (0.7 / 0.9) * (0.7 / 0.9);
    CHECK(lr_for_support(g, model, VertexSet{0, 1, 2}, 3.0) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("exponential-family form equals the direct probability ratio") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(0.05, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 2;
        std::vector<double> w(8);
        for (auto& x : w) x = unit(rng) + 0.3;
        const auto model = ProbabilityModel::rank1(m, w);
        const VertexSet s{1, 2, 5, 6};
        const double rho = 1.0 + (1.0 / model.max_probability_within(s) - 1.0) * 0.9 * (trial % 10) / 10.0;
        const auto g = sample_planted(model, make_alternative(model, s, rho), 5, trial);
        const auto in = inside_support(g, model, s);
        const long double direct = oracle::direct_log_ratio(in.p, in.present, rho);
        CHECK(std::fabs(log_lr_for_support(g, model, s, rho) - static_cast<double>(direct)) <=
              1e-10 * std::max(1.0L, std::fabs(direct)));
    }
}

TEST_CASE("boundary probabilities") {
    const auto model = ProbabilityModel::homogeneous(5, 2, 0.5);
    const Hypergraph one(5, 2, std::vector<Vertex>{0, 1});
    CHECK(log_lr_for_support(one, model, VertexSet{0, 1}, 2.0) == doctest::Approx(std::log(2.0)));
    CHECK(log_lr_for_support(one, model, VertexSet{0, 1, 2}, 2.0) == -std::numeric_limits<double>::infinity());
    CHECK(lr_for_support(one, model, VertexSet{0, 1, 2}, 2.0) == 0.0);
    CHECK_THROWS_AS(log_lr_for_support(one, model, VertexSet{0, 1}, 2.5), DomainError);
}

TEST_CASE("mixture is the mean over all supports") {
    const auto model = ProbabilityModel::homogeneous(8, 2, 0.2);
    const auto alt = make_alternative(model, VertexSet{0, 1, 2}, 2.0);
    for (std::uint64_t r = 0; r < 20; ++r) {
        const auto g = sample_planted(model, alt, 17, r);
        long double total = 0.0L;
        const auto supports = oracle::subsets(8, 3);
        for (const auto& s : supports) {
            const auto in = inside_support(g, model, VertexSet(std::vector<Vertex>(s.begin(), s.end())));
            total += std::exp(oracle::direct_log_ratio(in.p, in.present, 2.0));
        }
        const double want = static_cast<double>(total / supports.size());
        CHECK(lr_mixture(g, model, config(3, 2.0)) == doctest::Approx(want).epsilon(1e-12));
        CHECK(std::exp(log_lr_mixture(g, model, config(3, 2.0))) == doctest::Approx(want).epsilon(1e-12));
    }
    LrConfig tight = config(3, 2.0);
    tight.support_budget = 10;
    CHECK_THROWS_AS(lr_mixture(Hypergraph(8, 2, std::vector<Vertex>{}), model, tight), BudgetError);
}

TEST_CASE("truncated ratio is dominated by the mixture") {
    const auto model = ProbabilityModel::homogeneous(10, 2, 0.2);
    const auto alt = make_alternative(model, VertexSet{0, 1, 2}, 3.0);
    for (auto variant : {GammaVariant::WithPFactor, GammaVariant::Literal}) {
        LrConfig cfg = config(3, 3.0);
        cfg.gamma_variant = variant;
        const LrOracle lr(model, cfg, true);
        for (std::uint64_t r = 0; r < 40; ++r) {
            const auto g = sample_planted(model, alt, 23, r);
            const auto v = lr.evaluate(g);
            CHECK(v.truncated <= v.mixture * (1 + 1e-12));
            CHECK(v.mixture == doctest::Approx(lr_mixture(g, model, cfg)).epsilon(1e-12));
            CHECK(v.truncated == doctest::Approx(truncated_lr(g, model, cfg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("truncation event matches its definition") {
    const std::uint32_t big_n = 12;
    const std::uint32_t n = 4;
    const double p = 0.15;
    const double rho = 5.0;
    const double eps = 0.1;
    const auto model = ProbabilityModel::homogeneous(big_n, 2, p);
    const VertexSet s{1, 3, 6, 8};
    const auto alt = make_alternative(model, s, rho);
    const auto es = enumerate_es(model, alt, n, eps);
    REQUIRE_FALSE(es.empty());
    const double tilt = std::log(rho * p * (1 - p) / (p * (1 - rho * p)));
    for (std::uint64_t r = 0; r < 60; ++r) {
        const auto g = sample_planted(model, alt, 29, r);
        bool with_p = true;
        bool literal = true;
        for (const auto& d : es) {
            const double a = static_cast<double>(count_internal_edges(g, d));
            const double z = zeta(model, d, eps);
            const double pairs = static_cast<double>(oracle::choose(d.size(), 2));
            with_p = with_p && a * tilt <= z * pairs * p * tilt;
            literal = literal && a * tilt <= z * pairs * tilt;
        }
        LrConfig cfg = config(n, rho);
        cfg.epsilon = eps;
        CHECK(gamma_event(g, model, s, cfg) == with_p);
        cfg.gamma_variant = GammaVariant::Literal;
        CHECK(gamma_event(g, model, s, cfg) == literal);
    }
}

TEST_CASE("empty E_S makes the truncation event vacuous") {
    const auto model = ProbabilityModel::homogeneous(1000, 2, 0.1);
    LrConfig cfg = config(10, 1.0);
    cfg.epsilon = 0.2;
    const auto alt = make_alternative(model, VertexSet::prefix(10), 1.0);
    CHECK(enumerate_es(model, alt, 10, 0.2).empty());
    std::vector<Vertex> flat;
    for (const auto& e : oracle::subsets(10, 2)) flat.insert(flat.end(), e.begin(), e.end());
    CHECK(gamma_event(Hypergraph(1000, 2, flat), model, VertexSet::prefix(10), cfg));
}

TEST_CASE("gamma_probability equals enumeration of outcomes inside the support") {
    const auto model = ProbabilityModel::homogeneous(10, 2, 0.2);
    LrConfig cfg = config(3, 3.0);
    const LrOracle lr(model, cfg, true);
    for (std::size_t j : {std::size_t{0}, std::size_t{17}, lr.num_supports() - 1}) {
        const VertexSet& s = lr.support(j);
        const auto edges = oracle::subsets(3, 2);
        double total = 0.0;
        for (std::uint32_t mask = 0; mask < 8; ++mask) {
            std::vector<Vertex> flat;
            double prob = 1.0;
            for (std::size_t i = 0; i < 3; ++i) {
                const bool on = mask >> i & 1u;
                prob *= on ? 0.6 : 0.4;
                if (on) {
                    flat.push_back(s[edges[i][0]]);
                    flat.push_back(s[edges[i][1]]);
                }
            }
            if (gamma_event(Hypergraph(10, 2, flat), model, s, cfg)) total += prob;
        }
        CHECK(lr.gamma_probability(j) == doctest::Approx(total).epsilon(1e-12));
    }
}
