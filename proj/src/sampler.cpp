#include "hgscan/sampler.hpp"

#include <limits>
#include <stdexcept>

#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"
#include "hgscan/rng.hpp"

namespace hgscan {

Hypergraph sample(const SampleSpec& spec) {
    if (spec.model == nullptr) throw DomainError("sample requires a model");
    const ProbabilityModel& model = *spec.model;
    const std::uint32_t n = model.num_vertices();
    const int m = model.arity();

    std::uint64_t slots = 0;
    try {
        slots = math::binom(n, m);
    } catch (const std::overflow_error&) {
        slots = std::numeric_limits<std::uint64_t>::max();
    }
    if (slots > spec.edge_budget) {
        throw BudgetError("C(N,m) edge slots exceed the sampling budget", slots, spec.edge_budget);
    }

    std::vector<char> in_support;
    double rho = 1.0;
    if (spec.alternative != nullptr) {
        in_support = spec.alternative->support.indicator(n);
        rho = spec.alternative->rho;
    }

    const bool homogeneous = model.kind() == ModelKind::Homogeneous;
    const bool rank1 = model.kind() == ModelKind::Rank1;
    const double p_const = homogeneous ? model.homogeneous_p() : 0.0;
    const std::vector<double>* weights = rank1 ? &model.weights() : nullptr;

    std::vector<Vertex> tuple(m);
    for (int k = 0; k < m; ++k) tuple[k] = static_cast<Vertex>(k);
    std::vector<Vertex> flat;
    for (std::uint64_t rank = 0; rank < slots; ++rank) {
        double p;
        if (homogeneous) {
            p = p_const;
        } else if (rank1) {
            p = 1.0;
            for (Vertex v : tuple) p *= (*weights)[v];
        } else {
            p = model.edge_probability(tuple);
        }
        if (!in_support.empty()) {
            bool inside = true;
            for (Vertex v : tuple) inside = inside && in_support[v];
            if (inside) p *= rho;
        }
        if (p > 0.0 && counter_uniform(spec.seed, rank, spec.replicate_id) < p) {
            flat.insert(flat.end(), tuple.begin(), tuple.end());
        }
        next_colex(tuple, n);
    }
    return Hypergraph(n, m, std::move(flat));
}

Hypergraph sample_null(const ProbabilityModel& model, std::uint64_t seed, std::uint64_t replicate,
                       std::uint64_t edge_budget) {
    return sample(SampleSpec{&model, nullptr, seed, replicate, edge_budget});
}

Hypergraph sample_planted(const ProbabilityModel& model, const PlantedAlternative& alt,
                          std::uint64_t seed, std::uint64_t replicate, std::uint64_t edge_budget) {
    return sample(SampleSpec{&model, &alt, seed, replicate, edge_budget});
}

}  // namespace hgscan
