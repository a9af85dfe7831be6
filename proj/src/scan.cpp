#include "hgscan/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"
#include "hgscan/parallel.hpp"

namespace hgscan {

namespace {

double root_m(double x, int m) {
    if (x <= 0.0) return 0.0;
    if (m == 2) return std::sqrt(x);
    if (m == 3) return std::cbrt(x);
    return std::pow(x, 1.0 / m);
}

double power_m(double x, int m) {
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= x;
    return r;
}

double size_denominator(std::uint32_t k, std::uint32_t n) {
    return k * std::log(static_cast<double>(n) / k);
}

// Shared score: base * h(A/base - 1) / denom, clipped at zero.
double clipped_score(double observed, double base, double denom) {
    if (observed <= base) return 0.0;
    return base * math::h(observed / base - 1.0) / denom;
}

double known_score(double observed, double expected, std::uint32_t k, std::uint32_t n) {
    if (observed <= expected) return 0.0;
    if (expected <= 0.0) {
        throw ZeroExpectationError("E0[A_D] = 0 for a set of size " + std::to_string(k) +
                                   " with observed internal edges");
    }
    return clipped_score(observed, expected, size_denominator(k, n));
}

class KnownScorer {
public:
    KnownScorer(const Hypergraph& g, const ProbabilityModel& model)
        : counts_(g), expect_(model), n_(g.num_vertices()), m_(g.arity()) {
        denom_.resize(n_);
        for (std::uint32_t k = 1; k < n_; ++k) denom_[k] = size_denominator(k, n_);
    }

    void push(Vertex v) {
        counts_.push(v);
        expect_.push(v);
    }
    void pop(Vertex v) {
        counts_.pop(v);
        expect_.pop();
    }
    std::uint64_t internal() const { return counts_.internal(); }

    double value() const {
        const auto k = static_cast<std::uint32_t>(counts_.size());
        if (k < static_cast<std::uint32_t>(m_)) return 0.0;
        const double observed = static_cast<double>(counts_.internal());
        const double expected = expect_.value();
        if (observed <= expected) return 0.0;
        if (expected <= 0.0) {
            throw ZeroExpectationError("E0[A_D] = 0 for a set of size " + std::to_string(k) +
                                       " with observed internal edges");
        }
        return clipped_score(observed, expected, denom_[k]);
    }

private:
    IncrementalCounts counts_;
    ExpectationTracker expect_;
    std::uint32_t n_;
    int m_;
    std::vector<double> denom_;
};

class AdaptiveScorer {
public:
    explicit AdaptiveScorer(const Hypergraph& g)
        : counts_(g), n_(g.num_vertices()), m_(g.arity()), total_(g.num_edges()) {
        denom_.resize(n_);
        floor_.resize(n_);
        for (std::uint32_t k = 1; k < n_; ++k) {
            denom_[k] = size_denominator(k, n_);
            floor_[k] = pdm_floor(k, n_, m_);
        }
        total_root_ = root_m(static_cast<double>(total_), m_);
        roots_.resize(total_ + 1);
        for (std::uint64_t r = 0; r <= total_; ++r) roots_[r] = root_m(static_cast<double>(r), m_);
    }

    void push(Vertex v) { counts_.push(v); }
    void pop(Vertex v) { counts_.pop(v); }
    std::uint64_t internal() const { return counts_.internal(); }

    double value() const {
        const auto k = static_cast<std::uint32_t>(counts_.size());
        const double observed = static_cast<double>(counts_.internal());
        if (observed == 0.0) return 0.0;
        const std::uint64_t twice = 2 * counts_.odd_inside();
        const double root = twice >= total_ ? 0.0 : roots_[total_ - twice];
        const double estimate = power_m(total_root_ - root, m_) / static_cast<double>(1u << m_);
        const double star = std::max(estimate, floor_[k]);
        return clipped_score(observed, star, denom_[k]);
    }

private:
    IncrementalCounts counts_;
    std::uint32_t n_;
    int m_;
    std::uint64_t total_;
    double total_root_;
    std::vector<double> roots_;
    std::vector<double> denom_;
    std::vector<double> floor_;
};

struct SizeTable {
    std::vector<double> value;
    std::vector<std::vector<Vertex>> set;
    std::vector<char> seen;

    explicit SizeTable(std::uint32_t n_max) : value(n_max + 1, 0.0), set(n_max + 1), seen(n_max + 1, 0) {}

    // Keeps the larger value; on ties the lexicographically smaller set.
    void offer(double v, const std::vector<Vertex>& members) {
        const std::size_t k = members.size();
        if (!seen[k] || v > value[k] || (v == value[k] && members < set[k])) {
            seen[k] = 1;
            value[k] = v;
            set[k] = members;
        }
    }
};

ScanResult finish(const SizeTable& table, const ScanConfig& cfg, std::uint32_t size_min, bool exact) {
    ScanResult result;
    result.exact = exact;
    result.tau = cfg.tau;
    bool have = false;
    std::vector<Vertex> best_set;
    for (std::uint32_t k = 1; k <= cfg.n_max; ++k) {
        SizeBest entry{k, 0.0, VertexSet::prefix(k)};
        if (k >= size_min && table.seen[k]) {
            entry.value = table.value[k];
            entry.set = VertexSet::from_sorted(table.set[k]);
            if (!have || entry.value > result.statistic ||
                (entry.value == result.statistic && table.set[k] < best_set)) {
                have = true;
                result.statistic = entry.value;
                best_set = table.set[k];
            }
        }
        result.per_size_best.push_back(std::move(entry));
    }
    result.argmax_set = VertexSet::from_sorted(best_set);
    result.reject = result.statistic > cfg.tau;
    return result;
}

template <typename Scorer>
class ExactSearch {
public:
    ExactSearch(Scorer& scorer, std::uint32_t n, std::uint32_t size_min, std::uint32_t n_max)
        : scorer_(scorer), n_(n), size_min_(size_min), n_max_(n_max), table_(n_max) {
        members_.reserve(n_max);
    }

    SizeTable run() {
        descend(0);
        return std::move(table_);
    }

private:
    void descend(Vertex start) {
        const auto depth = static_cast<std::uint32_t>(members_.size());
        for (Vertex v = start; v < n_; ++v) {
            scorer_.push(v);
            members_.push_back(v);
            if (depth + 1 >= size_min_) {
                // Preorder DFS visits sets in lexicographic order, so a strict
                // comparison keeps the lexicographically smallest maximiser.
                const double value = scorer_.value();
                const std::size_t k = depth + 1;
                if (!table_.seen[k] || value > table_.value[k]) {
                    table_.seen[k] = 1;
                    table_.value[k] = value;
                    table_.set[k] = members_;
                }
            }
            if (depth + 1 < n_max_) descend(v + 1);
            members_.pop_back();
            scorer_.pop(v);
        }
    }

    Scorer& scorer_;
    std::uint32_t n_;
    std::uint32_t size_min_;
    std::uint32_t n_max_;
    SizeTable table_;
    std::vector<Vertex> members_;
};

template <typename Scorer>
double evaluate_set(Scorer& scorer, const std::vector<Vertex>& members) {
    for (Vertex v : members) scorer.push(v);
    const double value = scorer.value();
    for (auto it = members.rbegin(); it != members.rend(); ++it) scorer.pop(*it);
    return value;
}

template <typename Scorer>
SizeTable heuristic_search(Scorer& scorer, const Hypergraph& g, const ScanConfig& cfg,
                           std::uint32_t size_min) {
    const std::uint32_t n = g.num_vertices();
    SizeTable table(cfg.n_max);

    std::vector<Vertex> seeds(n);
    std::iota(seeds.begin(), seeds.end(), Vertex{0});
    std::stable_sort(seeds.begin(), seeds.end(), [&](Vertex a, Vertex b) {
        return g.incident(a).size() > g.incident(b).size();
    });
    const std::uint32_t seed_count =
        cfg.heuristic_seeds == 0 ? n : std::min(cfg.heuristic_seeds, n);

    std::vector<char> chosen(n, 0);
    for (std::uint32_t s = 0; s < seed_count; ++s) {
        std::vector<Vertex> order{seeds[s]};
        std::fill(chosen.begin(), chosen.end(), 0);
        chosen[seeds[s]] = 1;
        scorer.push(seeds[s]);

        double best_value = -1.0;
        std::vector<Vertex> best_set;
        auto record = [&](double value) {
            std::vector<Vertex> sorted = order;
            std::sort(sorted.begin(), sorted.end());
            table.offer(value, sorted);
            if (value > best_value || (value == best_value && sorted < best_set)) {
                best_value = value;
                best_set = std::move(sorted);
            }
        };
        if (order.size() >= size_min) record(scorer.value());

        // Greedy growth by best marginal score; ties prefer more internal
        // edges, then the smaller id.
        while (order.size() < cfg.n_max) {
            Vertex pick = n;
            double pick_value = 0.0;
            std::uint64_t pick_internal = 0;
            for (Vertex v = 0; v < n; ++v) {
                if (chosen[v]) continue;
                scorer.push(v);
                const double value = scorer.value();
                const std::uint64_t internal = scorer.internal();
                scorer.pop(v);
                if (pick == n || value > pick_value ||
                    (value == pick_value && internal > pick_internal)) {
                    pick = v;
                    pick_value = value;
                    pick_internal = internal;
                }
            }
            scorer.push(pick);
            chosen[pick] = 1;
            order.push_back(pick);
            if (order.size() >= size_min) record(pick_value);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) scorer.pop(*it);

        // Single-swap local improvement of the best prefix.
        std::vector<Vertex> current = best_set;
        double current_value = best_value;
        for (std::uint32_t round = 0; round < cfg.swap_rounds && !current.empty(); ++round) {
            std::vector<char> in(n, 0);
            for (Vertex v : current) in[v] = 1;
            double round_best = current_value;
            std::vector<Vertex> round_set;
            for (std::size_t i = 0; i < current.size(); ++i) {
                for (Vertex w = 0; w < n; ++w) {
                    if (in[w]) continue;
                    std::vector<Vertex> candidate = current;
                    candidate[i] = w;
                    std::sort(candidate.begin(), candidate.end());
                    const double value = evaluate_set(scorer, candidate);
                    table.offer(value, candidate);
                    if (value > round_best) {
                        round_best = value;
                        round_set = std::move(candidate);
                    }
                }
            }
            if (round_set.empty()) break;
            current = std::move(round_set);
            current_value = round_best;
        }
    }
    return table;
}

void validate(const ScanConfig& cfg, const Hypergraph& g, std::uint32_t size_min) {
    if (cfg.n_max >= g.num_vertices()) {
        throw DomainError("n_max must be smaller than the number of vertices");
    }
    if (size_min < static_cast<std::uint32_t>(g.arity())) {
        throw DomainError("size_min must be at least the arity");
    }
    if (size_min > cfg.n_max) {
        throw DomainError("size_min exceeds n_max");
    }
    if (cfg.subset_budget == 0) throw DomainError("subset budget must be positive");
}

template <typename Scorer>
ScanResult run_search(Scorer& scorer, const Hypergraph& g, const ScanConfig& cfg,
                      std::uint32_t size_min) {
    validate(cfg, g, size_min);
    if (cfg.enumeration == Enumeration::Exact) {
        const std::uint64_t required = subset_count(g.num_vertices(), size_min, cfg.n_max);
        if (required > cfg.subset_budget) {
            throw BudgetError("exact scan enumeration exceeds the subset budget", required,
                              cfg.subset_budget);
        }
        ExactSearch<Scorer> search(scorer, g.num_vertices(), size_min, cfg.n_max);
        return finish(search.run(), cfg, size_min, true);
    }
    return finish(heuristic_search(scorer, g, cfg, size_min), cfg, size_min, false);
}

std::uint32_t effective_size_min(const ScanConfig& cfg, int arity) {
    return cfg.size_min == 0 ? static_cast<std::uint32_t>(arity) : cfg.size_min;
}

}  // namespace

double pdm_from_counts(std::uint64_t total_edges, std::uint64_t odd_count, int arity) {
    const double total_root = root_m(static_cast<double>(total_edges), arity);
    const std::uint64_t twice = 2 * odd_count;
    const double root = twice >= total_edges ? 0.0 : root_m(static_cast<double>(total_edges - twice), arity);
    return power_m(total_root - root, arity) / static_cast<double>(1u << arity);
}

double estimate_pdm(const Hypergraph& g, const VertexSet& d) {
    if (d.empty() || d.size() >= g.num_vertices()) {
        throw DomainError("estimate_pdm needs a proper nonempty subset");
    }
    return pdm_from_counts(g.num_edges(), count_odd_inside(g, d), g.arity());
}

double pdm_floor(std::uint32_t size, std::uint32_t num_vertices, int arity) {
    if (size == 0 || size >= num_vertices) {
        throw DomainError("pdm floor needs 1 <= |D| < N");
    }
    const double k = size;
    const double n = num_vertices;
    const double log_ratio = std::log(n / k);
    return std::pow(k, arity) / std::pow(n, arity - 1) * std::pow(log_ratio, 2 * arity);
}

double pdm_star(const Hypergraph& g, const VertexSet& d) {
    return std::max(estimate_pdm(g, d),
                    pdm_floor(static_cast<std::uint32_t>(d.size()), g.num_vertices(), g.arity()));
}

double t_d(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& d) {
    if (d.size() < static_cast<std::size_t>(g.arity())) return 0.0;
    if (d.size() >= g.num_vertices()) throw DomainError("t_d needs |D| < N");
    const double expected = model.expected_internal(d);
    const double observed = static_cast<double>(count_internal_edges(g, d));
    return known_score(observed, expected, static_cast<std::uint32_t>(d.size()), g.num_vertices());
}

double t_hat_d(const Hypergraph& g, const VertexSet& d) {
    if (d.empty() || d.size() >= g.num_vertices()) throw DomainError("t_hat_d needs 1 <= |D| < N");
    const double observed = static_cast<double>(count_internal_edges(g, d));
    if (observed == 0.0) return 0.0;
    const double star = pdm_star(g, d);
    return clipped_score(observed, star,
                         size_denominator(static_cast<std::uint32_t>(d.size()), g.num_vertices()));
}

std::uint64_t subset_count(std::uint32_t num_vertices, std::uint32_t lo, std::uint32_t hi) {
    std::uint64_t total = 0;
    for (std::uint32_t k = lo; k <= hi; ++k) {
        std::uint64_t c;
        try {
            c = math::binom(num_vertices, k);
        } catch (const std::overflow_error&) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        if (total > std::numeric_limits<std::uint64_t>::max() - c) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total += c;
    }
    return total;
}

ScanResult scan_known_p(const Hypergraph& g, const ProbabilityModel& model, const ScanConfig& cfg) {
    if (model.num_vertices() != g.num_vertices() || model.arity() != g.arity()) {
        throw DomainError("model shape does not match the hypergraph");
    }
    KnownScorer scorer(g, model);
    return run_search(scorer, g, cfg, effective_size_min(cfg, g.arity()));
}

ScanResult adaptive_scan(const Hypergraph& g, const ScanConfig& cfg) {
    std::uint32_t size_min = effective_size_min(cfg, g.arity());
    if (cfg.restrict_adaptive_sizes) {
        const auto floor_size = static_cast<std::uint32_t>(
            std::ceil(std::pow(static_cast<double>(cfg.n_max), 1.0 / (g.arity() + 1)) - 1e-12));
        size_min = std::max(size_min, floor_size);
    }
    AdaptiveScorer scorer(g);
    return run_search(scorer, g, cfg, size_min);
}

ScanResult run_scan(ScanKind kind, const Hypergraph& g, const ProbabilityModel& model,
                    const ScanConfig& cfg) {
    return kind == ScanKind::Known ? scan_known_p(g, model, cfg) : adaptive_scan(g, cfg);
}

double upper_quantile(std::vector<double> values, double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0,1)");
    if (values.empty()) throw DomainError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double rank = std::ceil((1.0 - level) * static_cast<double>(values.size()) - 1e-9);
    const auto index = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(values.size())));
    return values[index - 1];
}

double calibrate_threshold(const ProbabilityModel& model, const ScanConfig& cfg, double level,
                           std::uint32_t replicates, std::uint64_t seed, ScanKind kind,
                           unsigned workers, std::uint64_t edge_budget) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0,1)");
    if (replicates < 50) throw DomainError("calibration needs at least 50 replicates");
    std::vector<double> stats(replicates);
    parallel_for(replicates, workers, [&](std::size_t r) {
        const Hypergraph g = sample_null(model, seed, r, edge_budget);
        stats[r] = run_scan(kind, g, model, cfg).statistic;
    });
    return upper_quantile(std::move(stats), level);
}

}  // namespace hgscan
