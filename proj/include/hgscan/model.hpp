#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hgscan/hypergraph.hpp"

namespace hgscan {

/// Default delta_m used for odd arity when none is configured.
inline constexpr double kDefaultOddDelta = 0.5;

struct Homogeneous {
    double p;
};

/// p_e = prod_{v in e} W_v
struct Rank1 {
    std::vector<double> weights;
};

/// Dense table of p_e indexed by the colex rank of e.
struct Explicit {
    std::vector<double> probabilities;
};

enum class ModelKind { Homogeneous, Rank1, Explicit };

/// Null edge probabilities for an m-uniform hypergraph on N vertices.
class ProbabilityModel {
public:
    static ProbabilityModel homogeneous(std::uint32_t num_vertices, int arity, double p);
    static ProbabilityModel rank1(int arity, std::vector<double> weights);
    /// `by_rank` must have exactly C(N, m) entries.
    static ProbabilityModel explicit_table(std::uint32_t num_vertices, int arity,
                                           std::vector<double> by_rank);

    std::uint32_t num_vertices() const noexcept { return num_vertices_; }
    int arity() const noexcept { return arity_; }
    ModelKind kind() const noexcept { return static_cast<ModelKind>(variant_.index()); }

    /// Only valid for the matching kind.
    double homogeneous_p() const { return std::get<Homogeneous>(variant_).p; }
    const std::vector<double>& weights() const { return std::get<Rank1>(variant_).weights; }

    double edge_probability(std::span<const Vertex> canonical) const;
    double edge_probability(const CanonicalEdge& e) const { return edge_probability(e.vertices()); }

    /// E0[A_D] = sum of p_e over edges inside d; 0 when |d| < m.
    double expected_internal(const VertexSet& d) const;
    /// mu_{D,m} = E0[A_D] / C(|d|, m). Requires |d| >= m.
    double edge_rate(const VertexSet& d) const;
    /// Largest p_e over edges inside d (0 when |d| < m).
    double max_probability_within(const VertexSet& d) const;

private:
    ProbabilityModel(std::uint32_t n, int m, std::variant<Homogeneous, Rank1, Explicit> v)
        : num_vertices_(n), arity_(m), variant_(std::move(v)) {}

    std::uint32_t num_vertices_;
    int arity_;
    std::variant<Homogeneous, Rank1, Explicit> variant_;
};

/// Visits every m-subset of the sorted `members` as a canonical tuple, in
/// lexicographic order.
void for_each_subset(std::span<const Vertex> members, int m,
                     const std::function<void(std::span<const Vertex>)>& fn);

/// Degree-k elementary symmetric polynomials e_0..e_k of `values`
/// by the recurrence e_j <- e_j + x * e_{j-1}.
std::vector<double> elementary_symmetric(std::span<const double> values, int k);

/// Maintains E0[A_D] while vertices are pushed and popped in LIFO order.
class ExpectationTracker {
public:
    explicit ExpectationTracker(const ProbabilityModel& model);

    void push(Vertex v);
    void pop();
    void clear();
    double value() const;
    std::size_t size() const noexcept { return members_.size(); }

private:
    void add_explicit_terms(Vertex v, std::size_t start, int remaining, std::vector<Vertex>& chosen,
                            double& sum) const;

    const ProbabilityModel* model_;
    std::vector<Vertex> members_;
    std::vector<double> homogeneous_by_size_;
    std::vector<double> esp_stack_;   // rank-1: (m+1) entries per depth
    std::vector<double> sum_stack_;   // explicit: running sum per depth
};

/// H1 planted support S with density boost rho.
struct PlantedAlternative {
    VertexSet support;
    double rho = 1.0;
};

/// Validates rho >= 1 and rho * p_e <= 1 for every edge inside the support.
PlantedAlternative make_alternative(const ProbabilityModel& model, VertexSet support, double rho);

struct Rank1Stats {
    double w_max;
    double w_min;
    double delta_m;
};

/// delta_m is forced to 0 for even arity; odd arity uses `odd_delta`, which
/// must lie in (0,1).
Rank1Stats rank1_stats(const ProbabilityModel& model, double odd_delta = kDefaultOddDelta);

struct SparsityReport {
    double max_value;  // max over edges inside S of rho^2 p_e
    double tolerance;
    bool holds;        // max_value <= tolerance
};

SparsityReport check_sparsity(const ProbabilityModel& model, const PlantedAlternative& alt,
                              double tolerance);

struct Rank1AssumptionReport {
    double lhs;             // (W_max / W_min)^m
    double rhs_size_term;   // n^{m/(m+1)}
    double rhs_weight_term; // W_min^m (N/n)^{m-1-delta_m}
    double rhs;             // min of the two
    double ratio;           // lhs / rhs
    double margin;
    double delta_m;
    bool holds;             // lhs < margin * rhs
};

Rank1AssumptionReport check_rank1_assumption(const ProbabilityModel& model, std::uint32_t n,
                                             double delta_m, double margin = 1.0);

/// CSV `vertex,weight`, one row per vertex 0..N-1.
ProbabilityModel load_rank1_model(const std::filesystem::path& path, int arity);
/// CSV `v1,...,vm,p`; must list every canonical edge exactly once.
ProbabilityModel load_explicit_model(const std::filesystem::path& path, std::uint32_t num_vertices,
                                     int arity);

std::string to_string(ModelKind kind);

}  // namespace hgscan
