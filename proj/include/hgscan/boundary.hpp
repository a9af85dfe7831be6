#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hgscan/hypergraph.hpp"
#include "hgscan/model.hpp"

namespace hgscan {

/// Largest 2^|S| accepted by the exhaustive subset paths.
inline constexpr std::uint64_t kDefaultExhaustiveBudget = std::uint64_t{1} << 22;

struct ScenarioParams {
    double epsilon = 0.1;  // (0,1)
    double delta = 0.25;   // (0, 0.5)
    double gamma_n = 0.2;  // > 0, finite-N stand-in for a vanishing sequence
};

void validate(const ScenarioParams& params);

struct ConditionEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // lhs / rhs
    bool holds = false;
};

/// A named scalar reported without pass/fail semantics.
struct Magnitude {
    std::string name;
    double value = 0.0;
};

struct BoundaryReport {
    std::vector<ConditionEntry> entries;
    std::vector<Magnitude> magnitudes;
    std::vector<std::string> notes;

    /// Conjunction over all entries.
    bool all_hold() const;
    const ConditionEntry* find(const std::string& name) const;
};

/// How a maximisation over D subset of S is carried out.
enum class SubsetPath {
    Auto,        // size-only for homogeneous, top-k weights for rank-1, else exhaustive
    Exhaustive,  // every subset, 2^|S| <= budget
};

struct SubsetMaximum {
    VertexSet set;
    double value = -std::numeric_limits<double>::infinity();
    bool exhaustive = false;
};

/// max over D subset of s with size_lo <= |D| <= size_hi of score(|D|, E0[A_D]).
/// `score` must be nondecreasing in E0[A_D] at fixed size for the reduced
/// paths to be exact. Ties go to the lexicographically smallest set.
SubsetMaximum maximize_over_subsets(const ProbabilityModel& model, const VertexSet& s,
                                    std::size_t size_lo, std::size_t size_hi,
                                    const std::function<double(std::size_t, double)>& score,
                                    SubsetPath path = SubsetPath::Auto,
                                    std::uint64_t budget = kDefaultExhaustiveBudget);

/// E0[A_D] / (|D| ln(N/|D|)), which equals (|D|^(m)/|D|) mu_{D,m} / ln(N/|D|).
double boundary_objective(const ProbabilityModel& model, const VertexSet& d);

/// D*_S: the maximiser of boundary_objective over D subset of s, |D| >= m.
SubsetMaximum dstar_search(const ProbabilityModel& model, const VertexSet& s,
                           SubsetPath path = SubsetPath::Auto,
                           std::uint64_t budget = kDefaultExhaustiveBudget);
VertexSet dstar(const ProbabilityModel& model, const VertexSet& s,
                SubsetPath path = SubsetPath::Auto, std::uint64_t budget = kDefaultExhaustiveBudget);

/// |D*_S| >= n^{1/(m+1)}.
bool check_dstar_size(const ProbabilityModel& model, const VertexSet& s, std::uint32_t n,
                      SubsetPath path = SubsetPath::Auto,
                      std::uint64_t budget = kDefaultExhaustiveBudget);

/// The unique zeta >= 1 with (1+eps) E0[A_D] h(zeta-1) = |D| ln(N/|D|).
double zeta(const ProbabilityModel& model, const VertexSet& d, double epsilon);
/// (1+eps) E0 h(zeta-1) - |D| ln(N/|D|).
double zeta_residual(const ProbabilityModel& model, const VertexSet& d, double epsilon, double z);

/// Right-hand side (1-eps/2)|D| (ln(N|D|/n^2) - ln ln(N/n)) of the E_S test.
double es_threshold(std::uint32_t num_vertices, std::size_t size, std::uint32_t n, double epsilon);

/// (rho-1)^2 E0[A_D] > es_threshold. Requires d subset of the support and N/n > e.
bool es_member(const ProbabilityModel& model, const PlantedAlternative& alt, const VertexSet& d,
               std::uint32_t n, double epsilon);

/// Every D in E_S with |D| >= m, in lexicographic order. D = S is included.
std::vector<VertexSet> enumerate_es(const ProbabilityModel& model, const PlantedAlternative& alt,
                                    std::uint32_t n, double epsilon,
                                    std::uint64_t budget = kDefaultExhaustiveBudget);

/// An edge where theta(p, zeta p) > 2 theta(p, rho p).
struct ThetaViolation {
    VertexSet d;
    CanonicalEdge edge;
    double lhs;  // +inf when zeta p >= 1
    double rhs;
};

struct CnResult {
    double value = std::numeric_limits<double>::infinity();
    bool empty = true;          // no D in E_S over the whole family
    std::size_t es_members = 0;
    std::size_t supports = 0;
    VertexSet argmin_support;
    VertexSet argmin_set;
    std::vector<ThetaViolation> theta_violations;
};

/// min over supplied supports S and D in E_S of
/// (1-eps) rho E0[A_D] h(zeta_D/rho - 1) / |D| - ln(n/|D|),
/// plus the per-edge tilt diagnostic theta(p, zeta p) <= 2 theta(p, rho p).
CnResult cn(const ProbabilityModel& model, double rho, std::uint32_t n, double epsilon,
            const std::vector<VertexSet>& supports,
            std::uint64_t budget = kDefaultExhaustiveBudget);

/// max over D subset of S of boundary_objective(D) * h(rho - 1).
double boundary_functional(const ProbabilityModel& model, const PlantedAlternative& alt,
                           SubsetPath path = SubsetPath::Auto,
                           std::uint64_t budget = kDefaultExhaustiveBudget);

/// Lower detection condition: max over the family of the functional <= 1 - eps.
BoundaryReport check_condition_2(const ProbabilityModel& model,
                                 const std::vector<PlantedAlternative>& alts, double epsilon,
                                 SubsetPath path = SubsetPath::Auto,
                                 std::uint64_t budget = kDefaultExhaustiveBudget);

/// Upper detection condition: min over the family of the functional >= 1 + eps.
/// Also reports rho E0[A_{D*}] per support as a magnitude.
BoundaryReport check_condition_3(const ProbabilityModel& model,
                                 const std::vector<PlantedAlternative>& alts, double epsilon,
                                 SubsetPath path = SubsetPath::Auto,
                                 std::uint64_t budget = kDefaultExhaustiveBudget);

struct CriticalRho {
    double rho;        // functional(rho) = target
    double rho_max;    // 1 / max p_e inside the support
    bool attainable;   // rho <= rho_max
};

/// Solves functional(rho) = target on [1, rho_max] by bisection.
CriticalRho critical_rho(const ProbabilityModel& model, const VertexSet& support, double target,
                         SubsetPath path = SubsetPath::Auto,
                         std::uint64_t budget = kDefaultExhaustiveBudget);

/// Finite-N evaluation of the two heterogeneity/density scenarios over the
/// supplied support family.
BoundaryReport check_scenarios(const ProbabilityModel& model, std::uint32_t n,
                               const ScenarioParams& params, const std::vector<VertexSet>& supports,
                               SubsetPath path = SubsetPath::Auto,
                               std::uint64_t budget = kDefaultExhaustiveBudget);

/// Homogeneous: {0..n-1}. Rank-1: the n smallest-weight vertices, the n
/// largest-weight vertices and `random_count` seeded random n-sets.
/// Explicit: {0..n-1} plus `random_count` random n-sets.
std::vector<VertexSet> default_support_family(const ProbabilityModel& model, std::uint32_t n,
                                              std::uint64_t seed, std::uint32_t random_count = 8);

}  // namespace hgscan
