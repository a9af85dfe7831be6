#include "hgscan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hgscan/errors.hpp"
#include "hgscan/parallel.hpp"
#include "hgscan/rng.hpp"

namespace hgscan {

namespace {

constexpr double kWilsonZ = 1.959963984540054;

std::string number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string support_label(const VertexSet& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(s[i]);
    }
    return out;
}

std::uint64_t count_above(const std::vector<double>& values, double tau) {
    return static_cast<std::uint64_t>(
        std::count_if(values.begin(), values.end(), [tau](double v) { return v > tau; }));
}

}  // namespace

std::string to_string(TestKind kind) {
    switch (kind) {
        case TestKind::KnownScan: return "known";
        case TestKind::AdaptiveScan: return "adaptive";
        case TestKind::LrOracle: return "lr";
        case TestKind::Custom: return "custom";
    }
    return "unknown";
}

TestKind parse_test_kind(const std::string& text) {
    if (text == "known" || text == "scan") return TestKind::KnownScan;
    if (text == "adaptive" || text == "adaptive-scan") return TestKind::AdaptiveScan;
    if (text == "lr" || text == "lr-oracle") return TestKind::LrOracle;
    throw InputError("unknown test kind '" + text + "' (expected known, adaptive or lr)");
}

void validate(const ExperimentConfig& cfg) {
    if (!cfg.model) throw DomainError("experiment: model is not set");
    const ProbabilityModel& model = *cfg.model;
    if (cfg.n < static_cast<std::uint32_t>(model.arity()) || cfg.n >= model.num_vertices()) {
        throw DomainError("experiment: n must satisfy m <= n < N");
    }
    if (!(cfg.rho >= 1.0) || !std::isfinite(cfg.rho)) throw DomainError("experiment: rho must be >= 1");
    if (cfg.replicates < 1) throw DomainError("experiment: replicates must be >= 1");
    if (cfg.test == TestKind::Custom && !cfg.custom_statistic) {
        throw DomainError("experiment: custom test without a statistic");
    }
    if (cfg.threshold.calibrated) {
        if (!(cfg.threshold.level > 0.0 && cfg.threshold.level < 1.0)) {
            throw DomainError("experiment: calibration level must lie in (0,1)");
        }
        if (cfg.threshold.replicates < 50) {
            throw DomainError("experiment: calibration needs at least 50 replicates");
        }
    }
    for (const auto& s : cfg.supports) {
        if (s.size() != cfg.n) throw DomainError("experiment: support " + s.to_string() + " does not have size n");
        s.check_range(model.num_vertices());
    }
}

std::uint64_t calibration_seed(std::uint64_t seed) { return mix64(seed ^ 0x63616c6962726174ULL); }

std::uint64_t support_seed(std::uint64_t seed) { return mix64(seed ^ 0x737570706f727473ULL); }

RateEstimate make_rate(std::uint64_t count, std::uint64_t trials) {
    RateEstimate r;
    r.count = count;
    r.trials = trials;
    if (trials == 0) return r;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(count) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    r.rate = p;
    r.wilson_lo = count == 0 ? 0.0 : std::max(0.0, centre - half);
    r.wilson_hi = count == trials ? 1.0 : std::min(1.0, centre + half);
    return r;
}

std::vector<VertexSet> resolve_supports(const ExperimentConfig& cfg) {
    if (!cfg.supports.empty()) return cfg.supports;
    return default_support_family(*cfg.model, cfg.n, support_seed(cfg.seed), cfg.random_supports);
}

StatisticFn::StatisticFn(const ExperimentConfig& cfg, double rho) : cfg_(&cfg) {
    if (cfg.test == TestKind::LrOracle) {
        LrConfig lr;
        lr.n = cfg.n;
        lr.rho = rho;
        lr.epsilon = cfg.epsilon;
        lr.gamma_variant = cfg.gamma_variant;
        lr.support_budget = cfg.support_budget;
        oracle_.emplace(*cfg.model, lr, false);
    }
}

double StatisticFn::operator()(const Hypergraph& g) const {
    switch (cfg_->test) {
        case TestKind::KnownScan: return scan_known_p(g, *cfg_->model, cfg_->scan).statistic;
        case TestKind::AdaptiveScan: return adaptive_scan(g, cfg_->scan).statistic;
        case TestKind::LrOracle: return oracle_->evaluate(g).mixture;
        case TestKind::Custom: return cfg_->custom_statistic(g);
    }
    return 0.0;
}

bool StatisticFn::exact() const noexcept {
    const bool scan = cfg_->test == TestKind::KnownScan || cfg_->test == TestKind::AdaptiveScan;
    return !scan || cfg_->scan.enumeration == Enumeration::Exact;
}

std::vector<double> null_statistics(const ExperimentConfig& cfg, const StatisticFn& statistic,
                                    std::uint64_t seed, std::uint64_t first, std::uint32_t count) {
    std::vector<double> out(count);
    parallel_for(count, cfg.workers, [&](std::size_t r) {
        out[r] = statistic(sample_null(*cfg.model, seed, first + r, cfg.edge_budget));
    });
    return out;
}

std::vector<double> planted_statistics(const ExperimentConfig& cfg, const StatisticFn& statistic,
                                       const PlantedAlternative& alt, std::uint64_t first,
                                       std::uint32_t count) {
    std::vector<double> out(count);
    parallel_for(count, cfg.workers, [&](std::size_t r) {
        out[r] = statistic(sample_planted(*cfg.model, alt, cfg.seed, first + r, cfg.edge_budget));
    });
    return out;
}

double resolve_tau(const ExperimentConfig& cfg, const StatisticFn& statistic) {
    if (!cfg.threshold.calibrated) return cfg.threshold.tau;
    std::vector<double> stats =
        null_statistics(cfg, statistic, calibration_seed(cfg.seed), 0, cfg.threshold.replicates);
    return upper_quantile(std::move(stats), cfg.threshold.level);
}

namespace {

RiskEstimate assemble(const ExperimentConfig& cfg, const std::vector<VertexSet>& supports, double rho,
                      double tau, const std::vector<double>& nulls, const StatisticFn& statistic) {
    RiskEstimate risk;
    risk.test = to_string(cfg.test);
    risk.rho = rho;
    risk.tau = tau;
    risk.calibrated = cfg.threshold.calibrated;
    risk.replicates = cfg.replicates;
    risk.exact = statistic.exact();
    risk.type1 = make_rate(count_above(nulls, tau), nulls.size());
    const std::uint64_t r = cfg.replicates;
    for (std::size_t j = 0; j < supports.size(); ++j) {
        const PlantedAlternative alt = make_alternative(*cfg.model, supports[j], rho);
        const std::vector<double> planted = planted_statistics(cfg, statistic, alt, r * (j + 1), cfg.replicates);
        const std::uint64_t retained = planted.size() - count_above(planted, tau);
        risk.type2_by_support.push_back({supports[j], make_rate(retained, planted.size())});
        if (j == 0 || risk.type2_by_support[j].type2.rate > risk.type2_worst) {
            risk.type2_worst = risk.type2_by_support[j].type2.rate;
            risk.worst_support = j;
        }
    }
    risk.risk_hat = risk.type1.rate + risk.type2_worst;
    risk.note = "worst case over " + std::to_string(supports.size()) + " evaluated supports";
    return risk;
}

}  // namespace

RiskEstimate run_risk(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::vector<VertexSet> supports = resolve_supports(cfg);
    const StatisticFn statistic(cfg, cfg.rho);
    const double tau = resolve_tau(cfg, statistic);
    const std::vector<double> nulls = null_statistics(cfg, statistic, cfg.seed, 0, cfg.replicates);
    return assemble(cfg, supports, cfg.rho, tau, nulls, statistic);
}

std::vector<PowerRow> power_curve(const ExperimentConfig& cfg, const std::vector<double>& rho_grid) {
    validate(cfg);
    for (double rho : rho_grid) {
        if (!(rho >= 1.0) || !std::isfinite(rho)) throw DomainError("rho grid values must be finite and >= 1");
    }
    const std::vector<VertexSet> supports = resolve_supports(cfg);
    const bool rho_free = cfg.test != TestKind::LrOracle;

    std::optional<StatisticFn> shared;
    double shared_tau = 0.0;
    std::vector<double> shared_nulls;
    if (rho_free) {
        shared.emplace(cfg, 1.0);
        shared_tau = resolve_tau(cfg, *shared);
        shared_nulls = null_statistics(cfg, *shared, cfg.seed, 0, cfg.replicates);
    }

    std::vector<PowerRow> rows;
    for (double rho : rho_grid) {
        std::optional<StatisticFn> local;
        double tau = shared_tau;
        std::vector<double> local_nulls;
        if (!rho_free) {
            local.emplace(cfg, rho);
            tau = resolve_tau(cfg, *local);
            local_nulls = null_statistics(cfg, *local, cfg.seed, 0, cfg.replicates);
        }
        const StatisticFn& statistic = rho_free ? *shared : *local;
        const RiskEstimate risk = assemble(cfg, supports, rho, tau, rho_free ? shared_nulls : local_nulls, statistic);

        PowerRow row;
        row.rho = rho;
        double lowest = std::numeric_limits<double>::infinity();
        double highest = 0.0;
        for (const auto& s : supports) {
            const double value = boundary_functional(*cfg.model, make_alternative(*cfg.model, s, rho));
            lowest = std::min(lowest, value);
            highest = std::max(highest, value);
        }
        row.functional = highest;
        row.holds_lower = highest <= 1.0 - cfg.epsilon;
        row.holds_upper = lowest >= 1.0 + cfg.epsilon;
        row.tau = tau;
        row.type1 = risk.type1;
        const RateEstimate& worst = risk.type2_by_support[risk.worst_support].type2;
        row.power = 1.0 - worst.rate;
        row.power_lo = 1.0 - worst.wilson_hi;
        row.power_hi = 1.0 - worst.wilson_lo;
        row.risk_hat = risk.risk_hat;
        row.exact = risk.exact;
        rows.push_back(row);
    }
    return rows;
}

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw InputError("unknown output format '" + text + "' (expected csv or json)");
}

void write_risk_csv(std::ostream& out, const RiskEstimate& risk) {
    out << "stage,support,rho,tau,count,trials,rate,wilson_lo,wilson_hi\n";
    auto row = [&](const std::string& stage, const std::string& support, const RateEstimate& r) {
        out << stage << ',' << support << ',' << number(risk.rho) << ',' << number(risk.tau) << ','
            << r.count << ',' << r.trials << ',' << number(r.rate) << ',' << number(r.wilson_lo) << ','
            << number(r.wilson_hi) << '\n';
    };
    row("null", "", risk.type1);
    for (const auto& s : risk.type2_by_support) row("alternative", support_label(s.support), s.type2);
    out << "risk,," << number(risk.rho) << ',' << number(risk.tau) << ",,," << number(risk.risk_hat) << ",,\n";
}

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
    out << "rho,functional,holds_lower,holds_upper,tau,type1_hat,type1_lo,type1_hi,power,power_lo,"
           "power_hi,risk_hat,exact\n";
    for (const auto& r : rows) {
        out << number(r.rho) << ',' << number(r.functional) << ',' << (r.holds_lower ? 1 : 0) << ','
            << (r.holds_upper ? 1 : 0) << ',' << number(r.tau) << ',' << number(r.type1.rate) << ','
            << number(r.type1.wilson_lo) << ',' << number(r.type1.wilson_hi) << ',' << number(r.power) << ','
            << number(r.power_lo) << ',' << number(r.power_hi) << ',' << number(r.risk_hat) << ','
            << (r.exact ? 1 : 0) << '\n';
    }
}

namespace {

using nlohmann::json;

json rate_json(const RateEstimate& r) {
    return {{"count", r.count}, {"trials", r.trials}, {"rate", r.rate}, {"wilson_lo", r.wilson_lo},
            {"wilson_hi", r.wilson_hi}};
}

RateEstimate rate_from(const json& j) {
    RateEstimate r;
    r.count = j.at("count").get<std::uint64_t>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.rate = j.at("rate").get<double>();
    r.wilson_lo = j.at("wilson_lo").get<double>();
    r.wilson_hi = j.at("wilson_hi").get<double>();
    return r;
}

json set_json(const VertexSet& s) { return json(std::vector<Vertex>(s.begin(), s.end())); }

json row_json(const PowerRow& r) {
    return {{"rho", r.rho},           {"functional", r.functional}, {"holds_lower", r.holds_lower},
            {"holds_upper", r.holds_upper}, {"tau", r.tau},        {"type1", rate_json(r.type1)},
            {"power", r.power},       {"power_lo", r.power_lo},     {"power_hi", r.power_hi},
            {"risk_hat", r.risk_hat}, {"exact", r.exact}};
}

PowerRow row_from(const json& j) {
    PowerRow r;
    r.rho = j.at("rho").get<double>();
    r.functional = j.at("functional").get<double>();
    r.holds_lower = j.at("holds_lower").get<bool>();
    r.holds_upper = j.at("holds_upper").get<bool>();
    r.tau = j.at("tau").get<double>();
    r.type1 = rate_from(j.at("type1"));
    r.power = j.at("power").get<double>();
    r.power_lo = j.at("power_lo").get<double>();
    r.power_hi = j.at("power_hi").get<double>();
    r.risk_hat = j.at("risk_hat").get<double>();
    r.exact = j.at("exact").get<bool>();
    return r;
}

}  // namespace

std::string risk_to_json(const RiskEstimate& risk) {
    json supports = json::array();
    for (const auto& s : risk.type2_by_support) {
        supports.push_back({{"support", set_json(s.support)}, {"type2", rate_json(s.type2)}});
    }
    json j = {{"test", risk.test},
              {"rho", risk.rho},
              {"tau", risk.tau},
              {"calibrated", risk.calibrated},
              {"replicates", risk.replicates},
              {"type1", rate_json(risk.type1)},
              {"type2_by_support", supports},
              {"type2_worst", risk.type2_worst},
              {"worst_support", risk.worst_support},
              {"risk_hat", risk.risk_hat},
              {"exact", risk.exact},
              {"note", risk.note}};
    return j.dump(2) + "\n";
}

RiskEstimate risk_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("risk JSON: ") + e.what());
    }
    try {
        RiskEstimate risk;
        risk.test = j.at("test").get<std::string>();
        risk.rho = j.at("rho").get<double>();
        risk.tau = j.at("tau").get<double>();
        risk.calibrated = j.at("calibrated").get<bool>();
        risk.replicates = j.at("replicates").get<std::uint32_t>();
        risk.type1 = rate_from(j.at("type1"));
        for (const auto& s : j.at("type2_by_support")) {
            risk.type2_by_support.push_back(
                {VertexSet(s.at("support").get<std::vector<Vertex>>()), rate_from(s.at("type2"))});
        }
        risk.type2_worst = j.at("type2_worst").get<double>();
        risk.worst_support = j.at("worst_support").get<std::size_t>();
        risk.risk_hat = j.at("risk_hat").get<double>();
        risk.exact = j.at("exact").get<bool>();
        risk.note = j.at("note").get<std::string>();
        return risk;
    } catch (const json::exception& e) {
        throw InputError(std::string("risk JSON: ") + e.what());
    }
}

std::string power_to_json(const std::vector<PowerRow>& rows) {
    json j = json::array();
    for (const auto& r : rows) j.push_back(row_json(r));
    return j.dump(2) + "\n";
}

std::vector<PowerRow> power_from_json(const std::string& text) {
    try {
        std::vector<PowerRow> rows;
        for (const auto& r : json::parse(text)) rows.push_back(row_from(r));
        return rows;
    } catch (const json::exception& e) {
        throw InputError(std::string("power-curve JSON: ") + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const RiskEstimate& risk, OutputFormat format, const std::filesystem::path& path) {
    if (format == OutputFormat::Json) {
        write_text_file(path, risk_to_json(risk));
        return;
    }
    std::ostringstream out;
    write_risk_csv(out, risk);
    write_text_file(path, out.str());
}

void emit(const std::vector<PowerRow>& rows, OutputFormat format, const std::filesystem::path& path) {
    if (format == OutputFormat::Json) {
        write_text_file(path, power_to_json(rows));
        return;
    }
    std::ostringstream out;
    write_power_csv(out, rows);
    write_text_file(path, out.str());
}

RiskEstimate load_risk(const std::filesystem::path& path) { return risk_from_json(read_text_file(path)); }

}  // namespace hgscan
