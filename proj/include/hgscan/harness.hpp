#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hgscan/boundary.hpp"
#include "hgscan/lr_oracle.hpp"
#include "hgscan/model.hpp"
#include "hgscan/sampler.hpp"
#include "hgscan/scan.hpp"

namespace hgscan {

enum class TestKind { KnownScan, AdaptiveScan, LrOracle, Custom };

std::string to_string(TestKind kind);
TestKind parse_test_kind(const std::string& text);

/// Fixed tau, or tau calibrated on separate null draws.
struct ThresholdRule {
    bool calibrated = false;
    double tau = 1.0;
    double level = 0.05;
    std::uint32_t replicates = 500;
};

struct ExperimentConfig {
    std::optional<ProbabilityModel> model;
    std::uint32_t n = 0;
    double rho = 1.0;
    /// Planted supports; empty selects default_support_family.
    std::vector<VertexSet> supports;
    std::uint32_t random_supports = 8;
    TestKind test = TestKind::KnownScan;
    /// Statistic for TestKind::Custom.
    std::function<double(const Hypergraph&)> custom_statistic;
    ScanConfig scan;
    GammaVariant gamma_variant = GammaVariant::WithPFactor;
    std::uint64_t support_budget = kDefaultSupportBudget;
    std::uint32_t replicates = 100;
    std::uint64_t seed = 0;
    ThresholdRule threshold;
    unsigned workers = 1;
    std::uint64_t edge_budget = kDefaultEdgeBudget;
    /// Boundary tolerance used for the power-curve flags.
    double epsilon = 0.1;
};

/// Throws DomainError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Seed of the calibration draws; distinct from the risk draws under `seed`.
std::uint64_t calibration_seed(std::uint64_t seed);
/// Seed used to draw random default supports.
std::uint64_t support_seed(std::uint64_t seed);

struct RateEstimate {
    std::uint64_t count = 0;
    std::uint64_t trials = 0;
    double rate = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 1.0;

    friend bool operator==(const RateEstimate&, const RateEstimate&) = default;
};

/// Rate with its 95% Wilson score interval.
RateEstimate make_rate(std::uint64_t count, std::uint64_t trials);

struct SupportRisk {
    VertexSet support;
    RateEstimate type2;

    friend bool operator==(const SupportRisk&, const SupportRisk&) = default;
};

struct RiskEstimate {
    std::string test;
    double rho = 1.0;
    double tau = 1.0;
    bool calibrated = false;
    std::uint32_t replicates = 0;
    RateEstimate type1;
    std::vector<SupportRisk> type2_by_support;
    double type2_worst = 0.0;
    std::size_t worst_support = 0;
    double risk_hat = 0.0;
    /// False when any scan ran in heuristic mode.
    bool exact = true;
    std::string note;

    friend bool operator==(const RiskEstimate&, const RiskEstimate&) = default;
};

/// Supports the experiment evaluates (cfg.supports or the default family).
std::vector<VertexSet> resolve_supports(const ExperimentConfig& cfg);

/// Statistic for one hypergraph under cfg.test at the given rho.
class StatisticFn {
public:
    StatisticFn(const ExperimentConfig& cfg, double rho);
    double operator()(const Hypergraph& g) const;
    bool exact() const noexcept;

private:
    const ExperimentConfig* cfg_;
    std::optional<LrOracle> oracle_;
};

/// Threshold under cfg.threshold: the fixed tau, or the calibrated quantile
/// over cfg.threshold.replicates null draws keyed by calibration_seed.
double resolve_tau(const ExperimentConfig& cfg, const StatisticFn& statistic);

/// Null statistics for replicate ids [first, first + count).
std::vector<double> null_statistics(const ExperimentConfig& cfg, const StatisticFn& statistic,
                                    std::uint64_t seed, std::uint64_t first, std::uint32_t count);
/// Planted statistics for replicate ids [first, first + count).
std::vector<double> planted_statistics(const ExperimentConfig& cfg, const StatisticFn& statistic,
                                       const PlantedAlternative& alt, std::uint64_t first,
                                       std::uint32_t count);

/// Type-I rate over replicate ids [0,R) and, for support j, type-II rate
/// over ids [R(j+1), R(j+2)).
RiskEstimate run_risk(const ExperimentConfig& cfg);

struct PowerRow {
    double rho = 1.0;
    double functional = 0.0;
    bool holds_lower = false;
    bool holds_upper = false;
    double tau = 1.0;
    RateEstimate type1;
    double power = 0.0;
    double power_lo = 0.0;
    double power_hi = 1.0;
    double risk_hat = 0.0;
    bool exact = true;

    friend bool operator==(const PowerRow&, const PowerRow&) = default;
};

/// One row per grid value, in grid order. Shares the null draws and the
/// per-support replicate ids across rho, so planted draws are coupled.
std::vector<PowerRow> power_curve(const ExperimentConfig& cfg, const std::vector<double>& rho_grid);

enum class OutputFormat { Csv, Json };
OutputFormat parse_format(const std::string& text);

/// CSV columns: stage,support,rho,tau,count,trials,rate,wilson_lo,wilson_hi.
void write_risk_csv(std::ostream& out, const RiskEstimate& risk);
/// CSV columns: rho,functional,holds_lower,holds_upper,tau,type1_hat,type1_lo,
/// type1_hi,power,power_lo,power_hi,risk_hat,exact.
void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows);

std::string risk_to_json(const RiskEstimate& risk);
RiskEstimate risk_from_json(const std::string& text);
std::string power_to_json(const std::vector<PowerRow>& rows);
std::vector<PowerRow> power_from_json(const std::string& text);

void emit(const RiskEstimate& risk, OutputFormat format, const std::filesystem::path& path);
void emit(const std::vector<PowerRow>& rows, OutputFormat format, const std::filesystem::path& path);
RiskEstimate load_risk(const std::filesystem::path& path);

/// Writes `text` to `path`; I/O failures raise std::runtime_error naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace hgscan
