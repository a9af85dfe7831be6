#pragma once

#include <cstdint>

#include "hgscan/colex.hpp"
#include "hgscan/hypergraph.hpp"
#include "hgscan/model.hpp"

namespace hgscan {

inline constexpr std::uint64_t kDefaultEdgeBudget = 20'000'000;

/// Identifies one draw. The alternative, when given, must satisfy
/// make_alternative's validity checks.
struct SampleSpec {
    const ProbabilityModel* model = nullptr;
    const PlantedAlternative* alternative = nullptr;
    std::uint64_t seed = 0;
    std::uint64_t replicate_id = 0;
    std::uint64_t edge_budget = kDefaultEdgeBudget;
};

/// Draws a hypergraph under H0 (no alternative) or H1.
///
/// Every canonical m-subset e is visited in colex order and included iff
/// counter_uniform(seed, colex_rank(e), replicate_id) < threshold(e), where
/// threshold is p_e, or rho * p_e for e inside the planted support. The
/// result depends only on (seed, replicate_id), so H0 and H1 draws with the
/// same key are coupled edge by edge.
Hypergraph sample(const SampleSpec& spec);

/// Convenience wrappers.
Hypergraph sample_null(const ProbabilityModel& model, std::uint64_t seed, std::uint64_t replicate,
                       std::uint64_t edge_budget = kDefaultEdgeBudget);
Hypergraph sample_planted(const ProbabilityModel& model, const PlantedAlternative& alt,
                          std::uint64_t seed, std::uint64_t replicate,
                          std::uint64_t edge_budget = kDefaultEdgeBudget);

}  // namespace hgscan
