#include "hgscan/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"
#include "hgscan/rng.hpp"

namespace hgscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxListedViolations = 64;

ConditionEntry make_entry(std::string name, double lhs, double rhs, bool holds) {
    const double margin = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 1.0 : kInf);
    return {std::move(name), lhs, rhs, margin, holds};
}

void check_subset(const VertexSet& d, const VertexSet& s, const char* what) {
    for (Vertex v : d) {
        if (!s.contains(v)) throw DomainError(std::string(what) + ": set is not inside the support");
    }
}

std::uint64_t subset_budget_needed(std::size_t size) {
    return size >= 64 ? std::numeric_limits<std::uint64_t>::max() : std::uint64_t{1} << size;
}

void require_budget(std::size_t size, std::uint64_t budget, const char* what) {
    const std::uint64_t needed = subset_budget_needed(size);
    if (needed > budget) throw BudgetError(std::string(what) + ": 2^|S| subsets", needed, budget);
}

// Preorder DFS over subsets of `s`; visits sets in lexicographic order.
class SubsetWalker {
public:
    SubsetWalker(const ProbabilityModel& model, const VertexSet& s, std::size_t max_size)
        : tracker_(model), s_(s), max_size_(max_size) {}

    template <typename Fn>
    void run(Fn&& fn) {
        descend(0, fn);
    }

private:
    template <typename Fn>
    void descend(std::size_t start, Fn& fn) {
        for (std::size_t i = start; i < s_.size(); ++i) {
            tracker_.push(s_[i]);
            members_.push_back(s_[i]);
            fn(members_, tracker_.value());
            if (members_.size() < max_size_) descend(i + 1, fn);
            members_.pop_back();
            tracker_.pop();
        }
    }

    ExpectationTracker tracker_;
    const VertexSet& s_;
    std::size_t max_size_;
    std::vector<Vertex> members_;
};

std::vector<Vertex> by_weight_descending(const ProbabilityModel& model, const VertexSet& s) {
    const auto& w = model.weights();
    std::vector<Vertex> order(s.begin(), s.end());
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w[a] > w[b]; });
    return order;
}

double size_log_term(std::uint32_t num_vertices, std::size_t size) {
    return static_cast<double>(size) * std::log(static_cast<double>(num_vertices) / size);
}

}  // namespace

void validate(const ScenarioParams& params) {
    if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (!(params.delta > 0.0 && params.delta < 0.5)) throw DomainError("delta must lie in (0,0.5)");
    if (!(params.gamma_n > 0.0) || !std::isfinite(params.gamma_n)) {
        throw DomainError("gamma_N must be positive");
    }
}

bool BoundaryReport::all_hold() const {
    return std::all_of(entries.begin(), entries.end(), [](const ConditionEntry& e) { return e.holds; });
}

const ConditionEntry* BoundaryReport::find(const std::string& name) const {
    for (const auto& e : entries) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

SubsetMaximum maximize_over_subsets(const ProbabilityModel& model, const VertexSet& s,
                                    std::size_t size_lo, std::size_t size_hi,
                                    const std::function<double(std::size_t, double)>& score,
                                    SubsetPath path, std::uint64_t budget) {
    s.check_range(model.num_vertices());
    SubsetMaximum best;
    size_lo = std::max<std::size_t>(size_lo, 1);
    size_hi = std::min(size_hi, s.size());
    if (size_lo > size_hi) return best;

    std::vector<Vertex> best_members;
    auto offer = [&](const std::vector<Vertex>& members, double value) {
        if (value > best.value || (value == best.value && members < best_members)) {
            best.value = value;
            best_members = members;
        }
    };

    const bool reduced = path == SubsetPath::Auto && model.kind() != ModelKind::Explicit;
    if (reduced && model.kind() == ModelKind::Homogeneous) {
        // Fixed size fixes E0[A_D], so the lexicographically first set of
        // each size represents it.
        const double p = model.homogeneous_p();
        for (std::size_t k = size_lo; k <= size_hi; ++k) {
            std::vector<Vertex> members(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
            offer(members, score(k, math::binom_real(k, model.arity()) * p));
        }
    } else if (reduced) {
        // E0[A_D] at fixed size is increasing in every weight, so the top-k
        // weights of S maximise it.
        const std::vector<Vertex> order = by_weight_descending(model, s);
        for (std::size_t k = size_lo; k <= size_hi; ++k) {
            std::vector<Vertex> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(members.begin(), members.end());
            offer(members, score(k, model.expected_internal(VertexSet::from_sorted(members))));
        }
    } else {
        require_budget(s.size(), budget, "exhaustive subset maximisation");
        best.exhaustive = true;
        SubsetWalker walker(model, s, size_hi);
        walker.run([&](const std::vector<Vertex>& members, double expected) {
            if (members.size() >= size_lo) {
                const double value = score(members.size(), expected);
                // Lexicographic visiting order: strict improvement keeps the
                // smallest maximiser.
                if (value > best.value) {
                    best.value = value;
                    best_members = members;
                }
            }
        });
    }
    best.set = VertexSet::from_sorted(std::move(best_members));
    return best;
}

double boundary_objective(const ProbabilityModel& model, const VertexSet& d) {
    if (d.size() < static_cast<std::size_t>(model.arity())) return 0.0;
    if (d.size() >= model.num_vertices()) throw DomainError("objective needs |D| < N");
    return model.expected_internal(d) / size_log_term(model.num_vertices(), d.size());
}

SubsetMaximum dstar_search(const ProbabilityModel& model, const VertexSet& s, SubsetPath path,
                           std::uint64_t budget) {
    const auto m = static_cast<std::size_t>(model.arity());
    if (s.size() < m) throw DomainError("D* needs |S| >= m");
    if (s.size() >= model.num_vertices()) throw DomainError("D* needs |S| < N");
    const std::uint32_t n_vertices = model.num_vertices();
    return maximize_over_subsets(
        model, s, m, s.size(),
        [n_vertices](std::size_t k, double expected) { return expected / size_log_term(n_vertices, k); },
        path, budget);
}

VertexSet dstar(const ProbabilityModel& model, const VertexSet& s, SubsetPath path,
                std::uint64_t budget) {
    return dstar_search(model, s, path, budget).set;
}

bool check_dstar_size(const ProbabilityModel& model, const VertexSet& s, std::uint32_t n,
                      SubsetPath path, std::uint64_t budget) {
    const double floor = std::pow(static_cast<double>(n), 1.0 / (model.arity() + 1));
    return static_cast<double>(dstar(model, s, path, budget).size()) >= floor;
}

double zeta(const ProbabilityModel& model, const VertexSet& d, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (d.size() >= model.num_vertices()) throw DomainError("zeta needs |D| < N");
    const double expected = model.expected_internal(d);
    if (!(expected > 0.0)) throw ZeroExpectationError("zeta needs E0[A_D] > 0 for " + d.to_string());
    const double target = size_log_term(model.num_vertices(), d.size());
    return 1.0 + math::h_inverse(target / ((1.0 + epsilon) * expected));
}

double zeta_residual(const ProbabilityModel& model, const VertexSet& d, double epsilon, double z) {
    const double expected = model.expected_internal(d);
    return (1.0 + epsilon) * expected * math::h(z - 1.0) - size_log_term(model.num_vertices(), d.size());
}

double es_threshold(std::uint32_t num_vertices, std::size_t size, std::uint32_t n, double epsilon) {
    const double big_n = num_vertices;
    const double small_n = n;
    if (!(big_n / small_n > std::exp(1.0))) {
        std::ostringstream msg;
        msg << "E_S threshold needs N/n > e (N=" << num_vertices << ", n=" << n << ")";
        throw DomainError(msg.str());
    }
    const double k = static_cast<double>(size);
    return (1.0 - epsilon / 2.0) * k *
           (std::log(big_n * k / (small_n * small_n)) - std::log(std::log(big_n / small_n)));
}

bool es_member(const ProbabilityModel& model, const PlantedAlternative& alt, const VertexSet& d,
               std::uint32_t n, double epsilon) {
    check_subset(d, alt.support, "es_member");
    const double rhs = es_threshold(model.num_vertices(), d.size(), n, epsilon);
    const double lhs = (alt.rho - 1.0) * (alt.rho - 1.0) * model.expected_internal(d);
    return lhs > rhs;
}

std::vector<VertexSet> enumerate_es(const ProbabilityModel& model, const PlantedAlternative& alt,
                                    std::uint32_t n, double epsilon, std::uint64_t budget) {
    require_budget(alt.support.size(), budget, "E_S enumeration");
    const double lift = (alt.rho - 1.0) * (alt.rho - 1.0);
    const auto m = static_cast<std::size_t>(model.arity());
    std::vector<double> thresholds(alt.support.size() + 1, 0.0);
    for (std::size_t k = m; k <= alt.support.size(); ++k) {
        thresholds[k] = es_threshold(model.num_vertices(), k, n, epsilon);
    }
    std::vector<VertexSet> members;
    SubsetWalker walker(model, alt.support, alt.support.size());
    walker.run([&](const std::vector<Vertex>& d, double expected) {
        if (d.size() >= m && lift * expected > thresholds[d.size()]) {
            members.push_back(VertexSet::from_sorted(d));
        }
    });
    return members;
}

CnResult cn(const ProbabilityModel& model, double rho, std::uint32_t n, double epsilon,
            const std::vector<VertexSet>& supports, std::uint64_t budget) {
    if (supports.empty()) throw DomainError("cn needs at least one support");
    CnResult result;
    result.supports = supports.size();
    const double log_ratio_n = static_cast<double>(n);
    for (const auto& s : supports) {
        if (s.size() != n) throw DomainError("cn: every support must have size n");
        const PlantedAlternative alt = make_alternative(model, s, rho);
        for (const auto& d : enumerate_es(model, alt, n, epsilon, budget)) {
            ++result.es_members;
            const double z = zeta(model, d, epsilon);
            const double expected = model.expected_internal(d);
            const double k = static_cast<double>(d.size());
            const double term =
                (1.0 - epsilon) * rho * expected * math::h(z / rho - 1.0) / k - std::log(log_ratio_n / k);
            if (result.empty || term < result.value) {
                result.empty = false;
                result.value = term;
                result.argmin_support = s;
                result.argmin_set = d;
            }
            for_each_subset(d.members(), model.arity(), [&](std::span<const Vertex> e) {
                const double p = model.edge_probability(e);
                if (!(p > 0.0) || !(rho * p < 1.0)) return;
                const double rhs = 2.0 * math::theta(p, rho * p);
                const double lhs = z * p < 1.0 ? math::theta(p, z * p) : kInf;
                if (lhs > rhs && result.theta_violations.size() < kMaxListedViolations) {
                    result.theta_violations.push_back(
                        {d, CanonicalEdge(std::vector<Vertex>(e.begin(), e.end())), lhs, rhs});
                }
            });
        }
    }
    return result;
}

double boundary_functional(const ProbabilityModel& model, const PlantedAlternative& alt,
                           SubsetPath path, std::uint64_t budget) {
    return dstar_search(model, alt.support, path, budget).value * math::h(alt.rho - 1.0);
}

namespace {

std::vector<double> family_values(const ProbabilityModel& model,
                                  const std::vector<PlantedAlternative>& alts, SubsetPath path,
                                  std::uint64_t budget) {
    if (alts.empty()) throw DomainError("condition check needs at least one alternative");
    std::vector<double> values;
    values.reserve(alts.size());
    for (const auto& alt : alts) values.push_back(boundary_functional(model, alt, path, budget));
    return values;
}

}  // namespace

BoundaryReport check_condition_2(const ProbabilityModel& model,
                                 const std::vector<PlantedAlternative>& alts, double epsilon,
                                 SubsetPath path, std::uint64_t budget) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    const std::vector<double> values = family_values(model, alts, path, budget);
    BoundaryReport report;
    const double rhs = 1.0 - epsilon;
    const double worst = *std::max_element(values.begin(), values.end());
    report.entries.push_back(make_entry("lower_boundary", worst, rhs, worst <= rhs));
    for (std::size_t j = 0; j < alts.size(); ++j) {
        report.entries.push_back(make_entry("lower_boundary:" + alts[j].support.to_string(), values[j],
                                            rhs, values[j] <= rhs));
    }
    report.notes.push_back("maximum over " + std::to_string(alts.size()) +
                           " supplied supports, not over all supports of size n");
    return report;
}

BoundaryReport check_condition_3(const ProbabilityModel& model,
                                 const std::vector<PlantedAlternative>& alts, double epsilon,
                                 SubsetPath path, std::uint64_t budget) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    BoundaryReport report;
    std::vector<double> values;
    for (const auto& alt : alts) {
        const SubsetMaximum best = dstar_search(model, alt.support, path, budget);
        values.push_back(best.value * math::h(alt.rho - 1.0));
        report.magnitudes.push_back({"rho_E0_dstar:" + alt.support.to_string(),
                                     alt.rho * model.expected_internal(best.set)});
    }
    if (values.empty()) throw DomainError("condition check needs at least one alternative");
    const double rhs = 1.0 + epsilon;
    const double weakest = *std::min_element(values.begin(), values.end());
    report.entries.push_back(make_entry("upper_boundary", weakest, rhs, weakest >= rhs));
    for (std::size_t j = 0; j < alts.size(); ++j) {
        report.entries.push_back(make_entry("upper_boundary:" + alts[j].support.to_string(), values[j],
                                            rhs, values[j] >= rhs));
    }
    report.notes.push_back("minimum over " + std::to_string(alts.size()) +
                           " supplied supports, not over all supports of size n");
    return report;
}

CriticalRho critical_rho(const ProbabilityModel& model, const VertexSet& support, double target,
                         SubsetPath path, std::uint64_t budget) {
    if (!(target > 0.0)) throw DomainError("critical rho needs a positive target");
    const double scale = dstar_search(model, support, path, budget).value;
    const double p_max = model.max_probability_within(support);
    CriticalRho result{kInf, p_max > 0.0 ? 1.0 / p_max : kInf, false};
    if (!(scale > 0.0)) return result;
    auto excess = [&](double rho) { return scale * math::h(rho - 1.0) - target; };
    if (std::isfinite(result.rho_max) && excess(result.rho_max) < 0.0) {
        // Crossing lies beyond the validity cap; report where it would be.
        result.rho = 1.0 + math::h_inverse(target / scale);
        return result;
    }
    double lo = 1.0;
    double hi = result.rho_max;
    if (!std::isfinite(hi)) {
        hi = 2.0;
        while (excess(hi) < 0.0) hi = 1.0 + 2.0 * (hi - 1.0);
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    result.rho = 0.5 * (lo + hi);
    result.attainable = true;
    return result;
}

BoundaryReport check_scenarios(const ProbabilityModel& model, std::uint32_t n,
                               const ScenarioParams& params, const std::vector<VertexSet>& supports,
                               SubsetPath path, std::uint64_t budget) {
    validate(params);
    if (supports.empty()) throw DomainError("scenario check needs at least one support");
    const std::uint32_t big_n = model.num_vertices();
    const int m = model.arity();
    if (n < static_cast<std::uint32_t>(m)) throw DomainError("scenario check needs n >= m");

    double worst_inverse_rate = 0.0;
    for (const auto& s : supports) {
        if (s.size() != n) throw DomainError("scenario check: every support must have size n");
        const double rate = model.edge_rate(s);
        if (!(rate > 0.0)) throw DomainError("edge rate of support " + s.to_string() + " is zero");
        worst_inverse_rate = std::max(worst_inverse_rate, 1.0 / rate);
    }

    BoundaryReport report;
    const double ratio_n = static_cast<double>(big_n) / n;

    // Small subsets must not carry a disproportionate share of the rate.
    const double size_bound = n / std::pow(ratio_n, params.gamma_n);
    const auto size_hi = static_cast<std::size_t>(std::ceil(size_bound) - 1.0);
    const double all_slots = math::binom_real(big_n, m);
    double heterogeneity = 0.0;
    for (const auto& s : supports) {
        const double rate_s = model.edge_rate(s);
        const SubsetMaximum best = maximize_over_subsets(
            model, s, m, size_hi,
            [&](std::size_t k, double expected) {
                return expected * big_n / (all_slots * static_cast<double>(k) * rate_s);
            },
            path, budget);
        if (!best.set.empty()) heterogeneity = std::max(heterogeneity, best.value);
    }
    report.entries.push_back(
        make_entry("heterogeneity", heterogeneity, params.delta, heterogeneity <= params.delta));

    const double log_ratio = std::log(ratio_n);
    const double dense_rhs = std::pow(static_cast<double>(n), m - 1) / log_ratio;
    report.entries.push_back(
        make_entry("density_polynomial_regime", worst_inverse_rate, dense_rhs, worst_inverse_rate < dense_rhs));

    if (n >= big_n || !(log_ratio > 0.0)) {
        report.entries.push_back({"density_logarithmic_regime", worst_inverse_rate, 0.0, kInf, false});
        report.notes.push_back("ln(N/n) = 0: the logarithmic-regime density check fails automatically");
    } else {
        const double sparse_rhs = n > 1 ? log_ratio / std::log(static_cast<double>(n)) : kInf;
        report.entries.push_back(make_entry("density_logarithmic_regime", worst_inverse_rate, sparse_rhs,
                                            worst_inverse_rate < sparse_rhs));
    }

    const double growth_rhs = std::pow(static_cast<double>(big_n), 0.5 - params.delta);
    report.entries.push_back(make_entry("support_growth", n, growth_rhs, n <= growth_rhs));
    report.magnitudes.push_back(
        {"log_n_over_log_N", std::log(static_cast<double>(n)) / std::log(static_cast<double>(big_n))});
    report.magnitudes.push_back({"max_inverse_support_rate", worst_inverse_rate});
    report.notes.push_back("finite-N surrogates of asymptotic order conditions; density entries hold when "
                           "the ratio lhs/rhs is below 1");
    report.notes.push_back("evaluated over " + std::to_string(supports.size()) + " supplied supports");
    return report;
}

std::vector<VertexSet> default_support_family(const ProbabilityModel& model, std::uint32_t n,
                                              std::uint64_t seed, std::uint32_t random_count) {
    const std::uint32_t big_n = model.num_vertices();
    if (n == 0 || n >= big_n) throw DomainError("support size must satisfy 1 <= n < N");
    std::vector<VertexSet> family;
    auto random_support = [&](std::uint64_t stream) {
        std::vector<Vertex> pool(big_n);
        std::iota(pool.begin(), pool.end(), Vertex{0});
        CounterStream rng(seed, stream);
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto j = i + static_cast<std::uint32_t>(rng.below(big_n - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(n);
        return VertexSet(std::move(pool));
    };
    switch (model.kind()) {
        case ModelKind::Homogeneous:
            family.push_back(VertexSet::prefix(n));
            break;
        case ModelKind::Rank1: {
            const auto& w = model.weights();
            std::vector<Vertex> order(big_n);
            std::iota(order.begin(), order.end(), Vertex{0});
            std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w[a] < w[b]; });
            family.emplace_back(std::vector<Vertex>(order.begin(), order.begin() + n));
            std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return w[a] > w[b]; });
            family.emplace_back(std::vector<Vertex>(order.begin(), order.begin() + n));
            for (std::uint32_t j = 0; j < random_count; ++j) family.push_back(random_support(j));
            break;
        }
        case ModelKind::Explicit:
            family.push_back(VertexSet::prefix(n));
            for (std::uint32_t j = 0; j < random_count; ++j) family.push_back(random_support(j));
            break;
    }
    return family;
}

}  // namespace hgscan
