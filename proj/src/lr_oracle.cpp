#include "hgscan/lr_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hgscan/colex.hpp"
#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"

namespace hgscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxGammaEdges = 24;

void validate(const LrConfig& cfg, const ProbabilityModel& model) {
    if (cfg.n < static_cast<std::uint32_t>(model.arity()) || cfg.n >= model.num_vertices()) {
        throw DomainError("planted size must satisfy m <= n < N");
    }
    if (!(cfg.rho >= 1.0) || !std::isfinite(cfg.rho)) throw DomainError("rho must be finite and >= 1");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
}

double log_sum_exp(const std::vector<double>& values) {
    double top = -kInf;
    for (double v : values) top = std::max(top, v);
    if (top == -kInf) return -kInf;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - top);
    return top + std::log(sum);
}

}  // namespace

LrOracle::LrOracle(const ProbabilityModel& model, const LrConfig& cfg, bool with_truncation)
    : model_(&model), cfg_(cfg), with_truncation_(with_truncation) {
    validate(cfg_, model);
    const std::uint32_t big_n = model.num_vertices();
    const int m = model.arity();
    std::uint64_t count = 0;
    try {
        count = math::binom(big_n, cfg_.n);
    } catch (const std::overflow_error&) {
        count = std::numeric_limits<std::uint64_t>::max();
    }
    if (count > cfg_.support_budget) {
        throw BudgetError("likelihood-ratio support enumeration", count, cfg_.support_budget);
    }
    log_count_ = std::log(static_cast<double>(count));
    supports_.reserve(count);

    std::vector<Vertex> tuple(cfg_.n);
    std::iota(tuple.begin(), tuple.end(), Vertex{0});
    do {
        SupportData data;
        data.set = VertexSet::from_sorted(tuple);
        const PlantedAlternative alt = make_alternative(model, data.set, cfg_.rho);
        for_each_subset(data.set.members(), m, [&](std::span<const Vertex> e) {
            const double p = model.edge_probability(e);
            const double q = std::min(1.0, cfg_.rho * p);
            double present = 0.0;
            double absent = 0.0;
            double tilt = 0.0;
            if (p > 0.0 && p < 1.0 && q < 1.0) {
                tilt = math::theta(p, q);
                const double lambda = math::lambda_mgf(p, tilt);
                present = tilt - lambda;
                absent = -lambda;
            } else if (p == 0.0) {
                present = std::log(cfg_.rho);
            } else if (p < 1.0) {
                // q == 1: the edge is certain under the alternative.
                present = std::log(cfg_.rho);
                absent = -kInf;
                tilt = kInf;
            }
            data.edges.insert(data.edges.end(), e.begin(), e.end());
            data.p.push_back(p);
            data.present.push_back(present);
            data.absent.push_back(absent);
            data.tilt.push_back(tilt);
        });
        if (with_truncation_) {
            const std::size_t num_edges = data.p.size();
            for (const auto& d : enumerate_es(model, alt, cfg_.n, cfg_.epsilon, cfg_.subset_budget)) {
                EsMember member;
                const double z = zeta(model, d, cfg_.epsilon);
                double base = 0.0;
                for (std::size_t i = 0; i < num_edges; ++i) {
                    const auto e = std::span<const Vertex>(data.edges).subspan(i * m, m);
                    if (std::all_of(e.begin(), e.end(), [&](Vertex v) { return d.contains(v); })) {
                        member.edge_index.push_back(static_cast<std::uint32_t>(i));
                        base += cfg_.gamma_variant == GammaVariant::WithPFactor ? data.p[i] * data.tilt[i]
                                                                                : data.tilt[i];
                    }
                }
                member.threshold = z * base;
                data.es.push_back(std::move(member));
            }
        }
        supports_.push_back(std::move(data));
    } while (next_colex(tuple, big_n));
}

std::vector<char> LrOracle::presence(const Hypergraph& g, const SupportData& s) const {
    if (g.num_vertices() != model_->num_vertices() || g.arity() != model_->arity()) {
        throw DomainError("hypergraph shape does not match the model");
    }
    const int m = model_->arity();
    std::vector<char> out(s.p.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = g.has_edge(std::span<const Vertex>(s.edges).subspan(i * m, m)) ? 1 : 0;
    }
    return out;
}

bool LrOracle::gamma_from_presence(const SupportData& s, const std::vector<char>& present) const {
    for (const auto& member : s.es) {
        double lhs = 0.0;
        for (std::uint32_t i : member.edge_index) {
            if (present[i]) lhs += s.tilt[i];
        }
        if (!(lhs <= member.threshold)) return false;
    }
    return true;
}

double LrOracle::log_lr(const Hypergraph& g, std::size_t j) const {
    const SupportData& s = supports_.at(j);
    const std::vector<char> present = presence(g, s);
    double total = 0.0;
    for (std::size_t i = 0; i < present.size(); ++i) total += present[i] ? s.present[i] : s.absent[i];
    return total;
}

bool LrOracle::gamma(const Hypergraph& g, std::size_t j) const {
    if (!with_truncation_) throw DomainError("oracle was built without truncation data");
    const SupportData& s = supports_.at(j);
    return gamma_from_presence(s, presence(g, s));
}

LrValues LrOracle::evaluate(const Hypergraph& g) const {
    std::vector<double> all(supports_.size());
    std::vector<double> kept;
    LrValues out;
    for (std::size_t j = 0; j < supports_.size(); ++j) {
        const SupportData& s = supports_[j];
        const std::vector<char> present = presence(g, s);
        double total = 0.0;
        for (std::size_t i = 0; i < present.size(); ++i) total += present[i] ? s.present[i] : s.absent[i];
        all[j] = total;
        if (with_truncation_ && gamma_from_presence(s, present)) {
            kept.push_back(total);
            ++out.gamma_true;
        }
    }
    out.log_mixture = log_sum_exp(all) - log_count_;
    out.mixture = std::exp(out.log_mixture);
    if (with_truncation_) {
        out.log_truncated = kept.empty() ? -kInf : log_sum_exp(kept) - log_count_;
        out.truncated = std::exp(out.log_truncated);
    } else {
        out.log_truncated = out.log_mixture;
        out.truncated = out.mixture;
        out.gamma_true = supports_.size();
    }
    return out;
}

double LrOracle::gamma_probability(std::size_t j) const {
    if (!with_truncation_) throw DomainError("oracle was built without truncation data");
    const SupportData& s = supports_.at(j);
    const std::size_t count = s.p.size();
    if (count > kMaxGammaEdges) {
        throw BudgetError("exact truncation probability", std::uint64_t{1} << std::min<std::size_t>(count, 63),
                          std::uint64_t{1} << kMaxGammaEdges);
    }
    std::vector<char> present(count);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << count); ++mask) {
        double weight = 1.0;
        for (std::size_t i = 0; i < count; ++i) {
            present[i] = (mask >> i) & 1u;
            const double q = std::min(1.0, cfg_.rho * s.p[i]);
            weight *= present[i] ? q : 1.0 - q;
        }
        if (weight > 0.0 && gamma_from_presence(s, present)) total += weight;
    }
    return total;
}

double log_lr_for_support(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s,
                          double rho) {
    make_alternative(model, s, rho);
    const int m = model.arity();
    double total = 0.0;
    for_each_subset(s.members(), m, [&](std::span<const Vertex> e) {
        const double p = model.edge_probability(e);
        const double q = std::min(1.0, rho * p);
        const bool present = g.has_edge(e);
        if (p > 0.0 && p < 1.0 && q < 1.0) {
            const double tilt = math::theta(p, q);
            total += (present ? tilt : 0.0) - math::lambda_mgf(p, tilt);
        } else if (p == 0.0) {
            if (present) total += std::log(rho);
        } else if (p < 1.0) {
            total += present ? std::log(rho) : -kInf;
        }
    });
    return total;
}

double lr_for_support(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s,
                      double rho) {
    return std::exp(log_lr_for_support(g, model, s, rho));
}

bool gamma_event(const Hypergraph& g, const ProbabilityModel& model, const VertexSet& s,
                 const LrConfig& cfg) {
    validate(cfg, model);
    if (s.size() != cfg.n) throw DomainError("support size must equal n");
    const PlantedAlternative alt = make_alternative(model, s, cfg.rho);
    const int m = model.arity();
    for (const auto& d : enumerate_es(model, alt, cfg.n, cfg.epsilon, cfg.subset_budget)) {
        const double z = zeta(model, d, cfg.epsilon);
        double lhs = 0.0;
        double base = 0.0;
        for_each_subset(d.members(), m, [&](std::span<const Vertex> e) {
            const double p = model.edge_probability(e);
            const double q = std::min(1.0, cfg.rho * p);
            double tilt = 0.0;
            if (p > 0.0 && p < 1.0 && q < 1.0) {
                tilt = math::theta(p, q);
            } else if (p > 0.0 && p < 1.0) {
                tilt = kInf;
            }
            if (g.has_edge(e)) lhs += tilt;
            base += cfg.gamma_variant == GammaVariant::WithPFactor ? p * tilt : tilt;
        });
        if (!(lhs <= z * base)) return false;
    }
    return true;
}

double log_lr_mixture(const Hypergraph& g, const ProbabilityModel& model, const LrConfig& cfg) {
    return LrOracle(model, cfg, false).evaluate(g).log_mixture;
}

double lr_mixture(const Hypergraph& g, const ProbabilityModel& model, const LrConfig& cfg) {
    return std::exp(log_lr_mixture(g, model, cfg));
}

double truncated_lr(const Hypergraph& g, const ProbabilityModel& model, const LrConfig& cfg) {
    return LrOracle(model, cfg, true).evaluate(g).truncated;
}

}  // namespace hgscan
