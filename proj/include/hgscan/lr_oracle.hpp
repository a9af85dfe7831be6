#pragma once

#include <cstdint>
#include <vector>

#include "hgscan/boundary.hpp"
#include "hgscan/hypergraph.hpp"
#include "hgscan/model.hpp"

namespace hgscan {

/// Right-hand side of the truncation event for one D:
///   WithPFactor: zeta_D * sum_{e in D} p_e theta_e
///   Literal:     zeta_D * sum_{e in D} theta_e
enum class GammaVariant { WithPFactor, Literal };

inline constexpr std::uint64_t kDefaultSupportBudget = 200'000;

struct LrConfig {
    std::uint32_t n = 0;
    double rho = 1.0;
    double epsilon = 0.1;
    GammaVariant gamma_variant = GammaVariant::WithPFactor;
    std::uint64_t support_budget = kDefaultSupportBudget;
    std::uint64_t subset_budget = kDefaultExhaustiveBudget;
};

/// log L_S = sum_{e in S} [A_e theta(p_e, rho p_e) - Lambda(p_e, theta(p_e, rho p_e))].
/// -inf when an absent edge has rho p_e = 1.
double log_lr_for_support(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s,
                          double rho);
double lr_for_support(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s,
                      double rho);

/// Indicator of the truncation event for support s.
bool gamma_event(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s,
                 const LrConfig& cfg);

/// L = C(N,n)^{-1} sum_{|S|=n} L_S, accumulated by log-sum-exp in colex order.
double lr_mixture(const Hypergraph& g, const ProbabilityModel& model, const LrConfig& cfg);
double log_lr_mixture(const Hypergraph& g, const ProbabilityModel& model, const LrConfig& cfg);

/// L~ = C(N,n)^{-1} sum_{|S|=n} L_S 1[Gamma_S].
double truncated_lr(const Hypergraph& g, const ProbabilityModel& model, const LrConfig& cfg);

struct LrValues {
    double log_mixture = 0.0;
    double mixture = 1.0;
    /// -inf when no support satisfies its truncation event.
    double log_truncated = 0.0;
    double truncated = 1.0;
    std::size_t gamma_true = 0;
};

/// Precomputes per-support edge tilts, E_S and zeta_D once so that many
/// hypergraphs can be evaluated against one (model, cfg) pair.
class LrOracle {
public:
    /// Truncation data (E_S, zeta_D) is prepared only when `with_truncation`
    /// is set; it needs N/n > e.
    LrOracle(const ProbabilityModel& model, const LrConfig& cfg, bool with_truncation);

    std::size_t num_supports() const noexcept { return supports_.size(); }
    const VertexSet& support(std::size_t j) const { return supports_[j].set; }
    /// Number of D in E_S for support j.
    std::size_t es_size(std::size_t j) const { return supports_[j].es.size(); }

    double log_lr(const Hypergraph& g, std::size_t j) const;
    bool gamma(const Hypergraph& g, std::size_t j) const;
    LrValues evaluate(const Hypergraph& g) const;

    /// P_S(Gamma_S) by enumerating all 2^{|edges in S|} outcomes inside S
    /// under the planted law. Requires with_truncation.
    double gamma_probability(std::size_t j) const;

private:
    struct EsMember {
        std::vector<std::uint32_t> edge_index;  // into SupportData::edges
        double threshold;
    };
    struct SupportData {
        VertexSet set;
        std::vector<Vertex> edges;  // flat canonical tuples inside S
        std::vector<double> p;
        std::vector<double> present;  // log-ratio contribution when A_e = 1
        std::vector<double> absent;   // log-ratio contribution when A_e = 0
        std::vector<double> tilt;     // theta(p_e, rho p_e)
        std::vector<EsMember> es;
    };

    std::vector<char> presence(const Hypergraph& g, const SupportData& s) const;
    bool gamma_from_presence(const SupportData& s, const std::vector<char>& present) const;

    const ProbabilityModel* model_;
    LrConfig cfg_;
    bool with_truncation_;
    double log_count_;
    std::vector<SupportData> supports_;
};

}  // namespace hgscan
