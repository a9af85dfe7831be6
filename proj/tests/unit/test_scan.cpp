#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hgscan/errors.hpp"
#include "hgscan/rng.hpp"
#include "hgscan/scan.hpp"
#include "oracles.hpp"

using namespace hgscan;

namespace {

Hypergraph complete_on(std::uint32_t n, const std::vector<Vertex>& members) {
    std::vector<Vertex> flat;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            flat.push_back(members[i]);
            flat.push_back(members[j]);
        }
    }
    return Hypergraph(n, 2, flat);
}

std::vector<oracle::Edge> edge_list(const Hypergraph& g) {
    std::vector<oracle::Edge> out;
    for (const auto& e : g.edges()) out.emplace_back(e.vertices().begin(), e.vertices().end());
    return out;
}

VertexSet from_mask(std::uint32_t mask, std::uint32_t n) {
    std::vector<Vertex> members;
    for (Vertex v = 0; v < n; ++v) {
        if (mask >> v & 1u) members.push_back(v);
    }
    return VertexSet(members);
}

ScanConfig exact_config(std::uint32_t n_max) {
    ScanConfig cfg;
    cfg.n_max = n_max;
    return cfg;
}

}  // namespace

TEST_CASE("t_d examples") {
    const auto model = ProbabilityModel::homogeneous(10, 2, 0.2);
    const auto g = complete_on(10, {0, 1, 2});
    const double want = 0.6 * static_cast<double>(oracle::cramer(4.0L)) / (3.0 * std::log(10.0 / 3.0));
    CHECK(t_d(g, model, VertexSet{0, 1, 2}) == doctest::Approx(want).epsilon(1e-13));
    CHECK(t_d(g, model, VertexSet{0, 1, 2}) == doctest::Approx(0.6723).epsilon(1e-4));

    // A_D = E0[A_D]: 0.5 * C(4,2) = 3 observed edges.
    const auto half = ProbabilityModel::homogeneous(10, 2, 0.5);
    CHECK(t_d(g, half, VertexSet{0, 1, 2, 5}) == 0.0);
    CHECK(t_d(Hypergraph(10, 2, std::vector<Vertex>{}), model, VertexSet{0, 1, 2}) == 0.0);

    // A_D / E0 = e, so the score is E0 / (|D| ln(N/|D|)).
    const double p = 3.0 / (3.0 * std::exp(1.0));
    const auto boundary = ProbabilityModel::homogeneous(10, 2, p);
    const double e0 = 3.0 * p;
    CHECK(t_d(g, boundary, VertexSet{0, 1, 2}) == doctest::Approx(e0 / (3.0 * std::log(10.0 / 3.0))).epsilon(1e-12));

    const auto zero = ProbabilityModel::homogeneous(10, 2, 0.0);
    CHECK_THROWS_AS(t_d(g, zero, VertexSet{0, 1, 2}), ZeroExpectationError);
    CHECK(t_d(Hypergraph(10, 2, std::vector<Vertex>{}), zero, VertexSet{0, 1, 2}) == 0.0);
}

TEST_CASE("score equals the edge-rate form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.05, 0.6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w(15);
        for (auto& x : w) x = unit(rng);
        const auto model = ProbabilityModel::rank1(2, w);
        const auto g = sample_null(model, 11, trial);
        std::vector<Vertex> members(15);
        for (Vertex v = 0; v < 15; ++v) members[v] = v;
        std::shuffle(members.begin(), members.end(), rng);
        members.resize(2 + rng() % 8);
        const VertexSet d(members);
        const double k = static_cast<double>(d.size());
        const double mu = model.edge_rate(d);
        const double a = static_cast<double>(count_internal_edges(g, d));
        const double e0 = model.expected_internal(d);
        const double x = std::max(a / e0 - 1.0, 0.0);
        const double rate_form = static_cast<double>(oracle::choose(d.size(), 2)) / k * mu / std::log(15.0 / k) *
                                 static_cast<double>(oracle::cramer(x));
        CHECK(std::fabs(t_d(g, model, d) - rate_form) <= 1e-12 * std::max(1.0, rate_form));
    }
}

TEST_CASE("scores are nonnegative and nondecreasing in the internal count") {
    const auto model = ProbabilityModel::homogeneous(12, 2, 0.3);
    const VertexSet d{0, 1, 2, 3, 4};
    std::vector<Vertex> flat;
    double previous = 0.0;
    double previous_hat = 0.0;
    for (const auto& e : oracle::subsets(5, 2)) {
        flat.insert(flat.end(), e.begin(), e.end());
        const Hypergraph g(12, 2, flat);
        const double value = t_d(g, model, d);
        CHECK(value >= previous);
        CHECK(value >= 0.0);
        CHECK(t_hat_d(g, d) >= 0.0);
        previous = value;
        previous_hat = t_hat_d(g, d);
    }
    CHECK(previous > 0.0);
    CHECK(previous_hat >= 0.0);
}

TEST_CASE("estimate_pdm examples") {
    CHECK(pdm_from_counts(0, 0, 2) == 0.0);
    CHECK(pdm_from_counts(100, 18, 2) == doctest::Approx(1.0).epsilon(1e-14));
    // Negative radicand clamps to zero.
    CHECK(pdm_from_counts(100, 60, 2) == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(estimate_pdm(Hypergraph(20, 2, std::vector<Vertex>{}), VertexSet{1, 2}) == 0.0);
}

TEST_CASE("pdm_floor and pdm_star") {
    const double want = 16.0 / 100.0 * std::pow(std::log(25.0), 4);
    CHECK(pdm_floor(4, 100, 2) == doctest::Approx(want).epsilon(1e-13));
    CHECK(pdm_floor(4, 100, 2) == doctest::Approx(17.2).epsilon(2e-3));
    CHECK(pdm_star(Hypergraph(100, 2, std::vector<Vertex>{}), VertexSet{0, 1, 2, 3}) == doctest::Approx(want).epsilon(1e-13));

    // Dense graph: estimate dominates the floor.
    std::vector<Vertex> flat;
    for (const auto& e : oracle::subsets(30, 2)) flat.insert(flat.end(), e.begin(), e.end());
    const Hypergraph dense(30, 2, flat);
    const VertexSet d{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(estimate_pdm(dense, d) > pdm_floor(10, 30, 2));
    CHECK(pdm_star(dense, d) == estimate_pdm(dense, d));

    // k^m ln(N/k)^{2m} increases while ln(N/k) > 2.
    for (int m = 2; m <= 3; ++m) {
        const std::uint32_t big_n = 1000;
        const double upper = big_n / std::exp(2.0);
        for (std::uint32_t k = 1; k + 1 < upper; ++k) CHECK(pdm_floor(k + 1, big_n, m) > pdm_floor(k, big_n, m));
    }
}

TEST_CASE("estimate_pdm is invariant under relabeling") {
    std::mt19937_64 rng(21);
    for (int m = 2; m <= 3; ++m) {
        const auto model = ProbabilityModel::homogeneous(18, m, m == 2 ? 0.3 : 0.08);
        for (int trial = 0; trial < 20; ++trial) {
            const auto g = sample_null(model, 4, trial);
            std::vector<Vertex> perm(18);
            for (Vertex v = 0; v < 18; ++v) perm[v] = v;
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<Vertex> flat;
            for (const auto& e : g.edges()) {
                std::vector<Vertex> mapped;
                for (Vertex v : e.vertices()) mapped.push_back(perm[v]);
                std::sort(mapped.begin(), mapped.end());
                flat.insert(flat.end(), mapped.begin(), mapped.end());
            }
            const Hypergraph relabeled(18, m, flat);
            const VertexSet d{0, 3, 4, 9, 13};
            std::vector<Vertex> image;
            for (Vertex v : d) image.push_back(perm[v]);
            CHECK(estimate_pdm(relabeled, VertexSet(image)) == estimate_pdm(g, d));
        }
    }
}

TEST_CASE("exact scan matches brute-force enumeration") {
    for (int trial = 0; trial < 30; ++trial) {
        const std::uint32_t n = 10 + trial % 3;
        std::vector<double> w(n);
        CounterStream rng(trial, 1);
        for (auto& x : w) x = 0.2 + 0.5 * rng.uniform();
        const auto model = ProbabilityModel::rank1(2, w);
        const auto g = sample_null(model, 19, trial);
        const std::uint32_t n_max = 3 + trial % 3;
        const auto result = scan_known_p(g, model, exact_config(n_max));
        const auto brute = oracle::brute_scan(n, edge_list(g), 2, n_max, [&](const std::vector<char>& in_d) {
            double s = 0.0;
            for (const auto& e : oracle::subsets(n, 2)) {
                if (oracle::inside(e, in_d)) s += w[e[0]] * w[e[1]];
            }
            return s;
        });
        CHECK(result.statistic == doctest::Approx(brute.statistic).epsilon(1e-10));
        if (brute.statistic > 0.0) CHECK(result.argmax_set == from_mask(brute.argmax_mask, n));
        CHECK(result.exact);
        CHECK(result.per_size_best.size() == n_max);
        double top = 0.0;
        for (const auto& row : result.per_size_best) top = std::max(top, row.value);
        CHECK(result.statistic == top);
    }
}

TEST_CASE("empty hypergraph gives zero and retains") {
    const auto model = ProbabilityModel::homogeneous(12, 2, 0.1);
    const Hypergraph empty(12, 2, std::vector<Vertex>{});
    const auto known = scan_known_p(empty, model, exact_config(4));
    CHECK(known.statistic == 0.0);
    CHECK_FALSE(known.reject);
    CHECK(adaptive_scan(empty, exact_config(4)).statistic == 0.0);
}

TEST_CASE("planted complete subgraph is the argmax") {
    const auto model = ProbabilityModel::homogeneous(12, 2, 0.1);
    const VertexSet s{2, 5, 7, 10};
    const auto g = complete_on(12, {2, 5, 7, 10});
    CHECK(scan_known_p(g, model, exact_config(4)).argmax_set == s);
    CHECK(adaptive_scan(g, exact_config(4)).argmax_set == s);
}

TEST_CASE("heuristic scan agrees with the exact scan") {
    const auto model = ProbabilityModel::homogeneous(14, 2, 0.15);
    const auto alt = make_alternative(model, VertexSet{0, 3, 6, 9, 12}, 5.0);
    ScanConfig heuristic = exact_config(5);
    heuristic.enumeration = Enumeration::Heuristic;
    int agree = 0;
    for (std::uint64_t r = 0; r < 50; ++r) {
        const auto g = sample_planted(model, alt, 99, r);
        const auto exact = scan_known_p(g, model, exact_config(5));
        const auto approx = scan_known_p(g, model, heuristic);
        CHECK_FALSE(approx.exact);
        CHECK(exact.statistic >= approx.statistic - 1e-12);
        agree += std::fabs(exact.statistic - approx.statistic) <= 1e-12 ? 1 : 0;
        const auto exact_hat = adaptive_scan(g, exact_config(5));
        CHECK(exact_hat.statistic >= adaptive_scan(g, heuristic).statistic - 1e-12);
    }
    CHECK(agree >= 45);
}

TEST_CASE("scan configuration validation and budgets") {
    const auto model = ProbabilityModel::homogeneous(12, 2, 0.1);
    const Hypergraph g(12, 2, std::vector<Vertex>{});
    CHECK_THROWS_AS(scan_known_p(g, model, exact_config(12)), DomainError);
    ScanConfig small = exact_config(4);
    small.size_min = 5;
    CHECK_THROWS_AS(scan_known_p(g, model, small), DomainError);
    small.size_min = 1;
    CHECK_THROWS_AS(scan_known_p(g, model, small), DomainError);
    ScanConfig tight = exact_config(6);
    tight.subset_budget = 100;
    try {
        scan_known_p(g, model, tight);
        FAIL("expected a BudgetError");
    } catch (const BudgetError& e) {
        CHECK(e.required() == subset_count(12, 2, 6));
    }
    CHECK(subset_count(12, 2, 4) == 66 + 220 + 495);
    CHECK(subset_count(200, 1, 199) == UINT64_MAX);
}

TEST_CASE("adaptive size restriction") {
    const auto g = complete_on(30, {0, 1, 2, 3, 4, 5});
    ScanConfig cfg = exact_config(8);
    cfg.restrict_adaptive_sizes = true;
    const auto result = adaptive_scan(g, cfg);
    // ceil(8^{1/3}) = 2 = m, so the restriction is inert here.
    CHECK(result.per_size_best.size() == 8);
    ScanConfig wide = exact_config(9);
    wide.restrict_adaptive_sizes = true;
    wide.enumeration = Enumeration::Heuristic;
    const auto restricted = adaptive_scan(g, wide);
    CHECK(restricted.per_size_best[0].value == 0.0);
    CHECK(restricted.per_size_best[1].value == 0.0);
}

TEST_CASE("upper_quantile and calibrate_threshold") {
    std::vector<double> values(100);
    for (int i = 0; i < 100; ++i) values[i] = 100 - i;
    CHECK(upper_quantile(values, 0.05) == 95.0);
    CHECK(upper_quantile(values, 0.5) == 50.0);
    CHECK_THROWS_AS(upper_quantile(values, 1.0), DomainError);

    const auto zero = ProbabilityModel::homogeneous(12, 2, 0.0);
    CHECK(calibrate_threshold(zero, exact_config(3), 0.5, 50, 1) == 0.0);
    CHECK_THROWS_AS(calibrate_threshold(zero, exact_config(3), 0.5, 49, 1), DomainError);

    const auto model = ProbabilityModel::homogeneous(24, 2, 0.15);
    ScanConfig cfg = exact_config(6);
    const double a = calibrate_threshold(model, cfg, 0.05, 100, 8);
    CHECK(a == calibrate_threshold(model, cfg, 0.05, 100, 8));
    CHECK(a == calibrate_threshold(model, cfg, 0.05, 100, 8, ScanKind::Known, 3));
    const double loose = calibrate_threshold(model, cfg, 0.2, 100, 8);
    const double strict = calibrate_threshold(model, cfg, 0.01, 100, 8);
    CHECK(strict >= a);
    CHECK(a >= loose);
}
