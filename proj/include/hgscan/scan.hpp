#pragma once

#include <cstdint>
#include <vector>

#include "hgscan/hypergraph.hpp"
#include "hgscan/model.hpp"
#include "hgscan/sampler.hpp"

namespace hgscan {

enum class Enumeration { Exact, Heuristic };
enum class ScanKind { Known, Adaptive };

inline constexpr std::uint64_t kDefaultSubsetBudget = 50'000'000;

struct ScanConfig {
    std::uint32_t n_max = 0;
    /// 0 selects the arity m.
    std::uint32_t size_min = 0;
    Enumeration enumeration = Enumeration::Exact;
    /// Heuristic seed count; 0 selects N.
    std::uint32_t heuristic_seeds = 0;
    std::uint32_t swap_rounds = 2;
    std::uint64_t subset_budget = kDefaultSubsetBudget;
    double tau = 1.0;
    /// Adaptive scan only: raise size_min to ceil(n_max^{1/(m+1)}).
    bool restrict_adaptive_sizes = false;
};

struct SizeBest {
    std::uint32_t size;
    double value;
    VertexSet set;
};

struct ScanResult {
    double statistic = 0.0;
    VertexSet argmax_set;
    std::vector<SizeBest> per_size_best;  // sizes 1..n_max
    bool exact = true;
    bool reject = false;
    double tau = 1.0;
};

/// Known-p score E0[A_D] h([A_D/E0[A_D] - 1]_+) / (|D| ln(N/|D|)).
double t_d(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& d);

/// Adaptive score with p*_{D,m} in place of E0[A_D].
double t_hat_d(const Hypergraph& g, const VertexSet& d);

/// p_hat = 2^-m (A_V^{1/m} - [A_V - 2 X]_+^{1/m})^m from the total edge
/// count A_V and the odd-intersection count X.
double pdm_from_counts(std::uint64_t total_edges, std::uint64_t odd_count, int arity);

/// Rank-1 estimate of E0[A_D] from the observed hypergraph alone.
///
/// X is the number of edges with an odd number of vertices inside d. For
/// even m this is exactly A_{D,D^c}; for odd m it is the complement count
/// |E| - A_{D,D^c}, which is the combination whose expectation matches the
/// binomial expansion of (sum_{D^c} W - sum_D W)^m.
double estimate_pdm(const Hypergraph& g, const VertexSet& d);

/// Floor (|D|^m / N^{m-1}) ln(N/|D|)^{2m}.
double pdm_floor(std::uint32_t size, std::uint32_t num_vertices, int arity);

/// max(estimate_pdm, pdm_floor).
double pdm_star(const Hypergraph& g, const VertexSet& d);

/// T_n = max over |D| <= n_max of t_d.
ScanResult scan_known_p(const Hypergraph& g, const ProbabilityModel& model, const ScanConfig& cfg);

/// T_hat_n = max over |D| <= n_max of t_hat_d. No model needed.
ScanResult adaptive_scan(const Hypergraph& g, const ScanConfig& cfg);

/// Dispatches on `kind`; `model` is ignored for the adaptive scan.
ScanResult run_scan(ScanKind kind, const Hypergraph& g, const ProbabilityModel& model,
                    const ScanConfig& cfg);

/// Number of subsets Sum_{k=lo}^{hi} C(N,k), saturating at UINT64_MAX.
std::uint64_t subset_count(std::uint32_t num_vertices, std::uint32_t lo, std::uint32_t hi);

/// Empirical (1 - level) quantile of the scan statistic over `replicates`
/// null draws keyed by (seed, 0..replicates-1). The quantile is the
/// ceil((1-level) R)-th smallest value, so rejecting when T > tau has
/// empirical size at most `level` on the calibration sample.
double calibrate_threshold(const ProbabilityModel& model, const ScanConfig& cfg, double level,
                           std::uint32_t replicates, std::uint64_t seed,
                           ScanKind kind = ScanKind::Known, unsigned workers = 1,
                           std::uint64_t edge_budget = kDefaultEdgeBudget);

/// The quantile rule used by calibrate_threshold, on precomputed values.
double upper_quantile(std::vector<double> values, double level);

}  // namespace hgscan
