// Command-line front end: sampling, scans, boundary reports, the
// likelihood-ratio oracle and Monte Carlo risk experiments.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hgscan/boundary.hpp"
#include "hgscan/config.hpp"
#include "hgscan/errors.hpp"
#include "hgscan/harness.hpp"
#include "hgscan/lr_oracle.hpp"
#include "hgscan/sampler.hpp"
#include "hgscan/scan.hpp"

using nlohmann::json;
using namespace hgscan;

namespace {

std::string stage = "startup";

json set_json(const VertexSet& s) { return json(std::vector<Vertex>(s.begin(), s.end())); }

// JSON has no infinity; unbounded values are written as null.
json real_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json report_json(const BoundaryReport& report) {
    json entries = json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"name", e.name},
                           {"lhs", real_json(e.lhs)},
                           {"rhs", real_json(e.rhs)},
                           {"margin", real_json(e.margin)},
                           {"holds", e.holds}});
    }
    json magnitudes = json::object();
    for (const auto& m : report.magnitudes) magnitudes[m.name] = real_json(m.value);
    return {{"entries", entries}, {"magnitudes", magnitudes}, {"notes", report.notes}};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

json scan_json(const ScanResult& r) {
    json sizes = json::array();
    for (const auto& s : r.per_size_best) {
        sizes.push_back({{"size", s.size}, {"value", s.value}, {"set", set_json(s.set)}});
    }
    return {{"statistic", r.statistic},
            {"argmax_set", set_json(r.argmax_set)},
            {"per_size_best", sizes},
            {"exact", r.exact},
            {"decision", r.reject ? "reject" : "retain"},
            {"tau", r.tau}};
}

struct ScanOptions {
    std::string edges;
    std::string model;
    std::uint32_t vertices = 0;
    std::uint32_t n_max = 0;
    std::uint32_t size_min = 0;
    bool heuristic = false;
    bool exact = false;
    std::uint32_t seeds = 0;
    std::uint32_t swap_rounds = 2;
    std::uint64_t subset_budget = kDefaultSubsetBudget;
    double tau = 1.0;
    bool restrict_sizes = false;
    std::string out;

    ScanConfig config() const {
        ScanConfig cfg;
        cfg.n_max = n_max;
        cfg.size_min = size_min;
        cfg.enumeration = heuristic ? Enumeration::Heuristic : Enumeration::Exact;
        cfg.heuristic_seeds = seeds;
        cfg.swap_rounds = swap_rounds;
        cfg.subset_budget = subset_budget;
        cfg.tau = tau;
        cfg.restrict_adaptive_sizes = restrict_sizes;
        return cfg;
    }
};

void add_scan_options(CLI::App* cmd, ScanOptions& o) {
    cmd->add_option("--edges", o.edges, "edge-list CSV")->required();
    cmd->add_option("--n-max", o.n_max, "largest subset size scanned")->required();
    cmd->add_option("--size-min", o.size_min, "smallest subset size scanned (default m)");
    auto* exact = cmd->add_flag("--exact", o.exact, "full enumeration (default)");
    cmd->add_flag("--heuristic", o.heuristic, "greedy growth plus single swaps")->excludes(exact);
    cmd->add_option("--seeds", o.seeds, "heuristic seed vertices (default N)");
    cmd->add_option("--swap-rounds", o.swap_rounds, "heuristic swap rounds");
    cmd->add_option("--subset-budget", o.subset_budget, "maximum subsets for exact enumeration");
    cmd->add_option("--tau", o.tau, "rejection threshold");
    cmd->add_option("--out", o.out, "output JSON path (default stdout)");
}

ProbabilityModel model_from_file(const std::string& path) {
    stage = "load-model";
    return *load_config(path).experiment.model;
}

int run_sample(const std::string& config_path, std::optional<std::uint64_t> seed, std::uint64_t replicate,
               bool planted, const std::string& out) {
    stage = "load-config";
    const RunConfig cfg = load_config(config_path);
    const ExperimentConfig& ex = cfg.experiment;
    const std::uint64_t key = seed.value_or(ex.seed);
    stage = "sample";
    std::optional<PlantedAlternative> alt;
    if (planted) {
        validate(ex);
        alt = make_alternative(*ex.model, resolve_supports(ex).front(), ex.rho);
    }
    SampleSpec spec;
    spec.model = &*ex.model;
    spec.alternative = alt ? &*alt : nullptr;
    spec.seed = key;
    spec.replicate_id = replicate;
    spec.edge_budget = ex.edge_budget;
    const Hypergraph g = sample(spec);
    stage = "write";
    std::ostringstream text;
    write_edge_list(text, g);
    write_output(out, text.str());
    return 0;
}

int run_known_scan(const ScanOptions& o) {
    const ProbabilityModel model = model_from_file(o.model);
    stage = "load-edges";
    const Hypergraph g = load_edge_list(o.edges, model.num_vertices());
    stage = "scan";
    const ScanResult r = scan_known_p(g, model, o.config());
    stage = "write";
    write_output(o.out, scan_json(r).dump(2) + "\n");
    return 0;
}

int run_adaptive_scan(const ScanOptions& o) {
    stage = "load-edges";
    const Hypergraph g = load_edge_list(o.edges, o.vertices);
    stage = "adaptive-scan";
    const ScanResult r = adaptive_scan(g, o.config());
    stage = "write";
    write_output(o.out, scan_json(r).dump(2) + "\n");
    return 0;
}

int run_boundary(const std::string& config_path, const std::string& out) {
    stage = "load-config";
    const RunConfig cfg = load_config(config_path);
    const ExperimentConfig& ex = cfg.experiment;
    validate(ex);
    const ProbabilityModel& model = *ex.model;
    const std::uint64_t budget = cfg.exhaustive_budget;
    stage = "supports";
    const std::vector<VertexSet> supports = resolve_supports(ex);
    std::vector<PlantedAlternative> alts;
    for (const auto& s : supports) alts.push_back(make_alternative(model, s, ex.rho));

    json doc;
    doc["N"] = model.num_vertices();
    doc["m"] = model.arity();
    doc["model"] = to_string(model.kind());
    doc["n"] = ex.n;
    doc["rho"] = ex.rho;
    doc["epsilon"] = ex.epsilon;
    json support_list = json::array();
    for (const auto& s : supports) support_list.push_back(set_json(s));
    doc["supports"] = support_list;

    stage = "dstar";
    json dstars = json::array();
    for (const auto& s : supports) {
        const SubsetMaximum best = dstar_search(model, s, SubsetPath::Auto, budget);
        dstars.push_back({{"support", set_json(s)},
                          {"dstar", set_json(best.set)},
                          {"objective", best.value},
                          {"exhaustive", best.exhaustive},
                          {"size_floor_holds", check_dstar_size(model, s, ex.n, SubsetPath::Auto, budget)}});
    }
    doc["dstar"] = dstars;

    stage = "conditions";
    doc["lower_boundary"] = report_json(check_condition_2(model, alts, ex.epsilon, SubsetPath::Auto, budget));
    doc["upper_boundary"] = report_json(check_condition_3(model, alts, ex.epsilon, SubsetPath::Auto, budget));
    json critical = json::array();
    for (const auto& s : supports) {
        const CriticalRho lower = critical_rho(model, s, 1.0 - ex.epsilon, SubsetPath::Auto, budget);
        const CriticalRho upper = critical_rho(model, s, 1.0 + ex.epsilon, SubsetPath::Auto, budget);
        critical.push_back({{"support", set_json(s)},
                            {"rho_max", real_json(lower.rho_max)},
                            {"rho_lower", real_json(lower.rho)},
                            {"lower_attainable", lower.attainable},
                            {"rho_upper", real_json(upper.rho)},
                            {"upper_attainable", upper.attainable}});
    }
    doc["critical_rho"] = critical;

    stage = "sparsity";
    json sparsity = json::array();
    for (const auto& alt : alts) {
        const SparsityReport r = check_sparsity(model, alt, ex.epsilon);
        sparsity.push_back({{"support", set_json(alt.support)}, {"max_rho2_p", r.max_value}, {"holds", r.holds}});
    }
    doc["sparsity"] = sparsity;

    stage = "scenarios";
    try {
        doc["scenarios"] = report_json(check_scenarios(model, ex.n, cfg.scenario, supports, SubsetPath::Auto, budget));
    } catch (const DomainError& e) {
        doc["scenarios"] = {{"error", e.what()}};
    }

    stage = "cn";
    try {
        const CnResult c = cn(model, ex.rho, ex.n, ex.epsilon, supports, budget);
        doc["cn"] = {{"value", real_json(c.value)},
                     {"empty", c.empty},
                     {"es_members", c.es_members},
                     {"supports", c.supports},
                     {"theta_violations", c.theta_violations.size()},
                     {"note", "minimum over the supplied supports only"}};
    } catch (const std::exception& e) {
        doc["cn"] = {{"error", e.what()}};
    }

    if (model.kind() == ModelKind::Rank1) {
        stage = "rank1-assumption";
        const Rank1Stats stats = rank1_stats(model, cfg.delta_m);
        const Rank1AssumptionReport r = check_rank1_assumption(model, ex.n, stats.delta_m);
        doc["rank1_assumption"] = {{"lhs", real_json(r.lhs)},
                                   {"rhs_size_term", real_json(r.rhs_size_term)},
                                   {"rhs_weight_term", real_json(r.rhs_weight_term)},
                                   {"rhs", real_json(r.rhs)},
                                   {"ratio", real_json(r.ratio)},
                                   {"delta_m", r.delta_m},
                                   {"holds", r.holds}};
    }

    stage = "write";
    write_output(out, doc.dump(2) + "\n");
    return 0;
}

int run_lr(const std::string& edges, const std::string& model_path, std::uint32_t n, double rho, double epsilon,
           const std::string& variant, bool truncated, const std::string& out) {
    const ProbabilityModel model = model_from_file(model_path);
    stage = "load-edges";
    const Hypergraph g = load_edge_list(edges, model.num_vertices());
    stage = "lr-oracle";
    LrConfig cfg;
    cfg.n = n;
    cfg.rho = rho;
    cfg.epsilon = epsilon;
    if (variant == "literal") {
        cfg.gamma_variant = GammaVariant::Literal;
    } else if (variant != "p_factor") {
        throw InputError("gamma variant must be p_factor or literal");
    }
    const LrOracle oracle(model, cfg, truncated);
    const LrValues v = oracle.evaluate(g);
    json doc = {{"n", n},
                {"rho", rho},
                {"supports", oracle.num_supports()},
                {"log_lr", real_json(v.log_mixture)},
                {"lr", real_json(v.mixture)}};
    if (truncated) {
        doc["log_truncated_lr"] = real_json(v.log_truncated);
        doc["truncated_lr"] = real_json(v.truncated);
        doc["gamma_true"] = v.gamma_true;
        doc["gamma_variant"] = variant;
        doc["epsilon"] = epsilon;
    }
    stage = "write";
    write_output(out, doc.dump(2) + "\n");
    return 0;
}

int run_risk_command(const std::string& config_path, const std::string& out, const std::string& format) {
    stage = "load-config";
    const RunConfig cfg = load_config(config_path);
    const OutputFormat fmt = parse_format(format);
    stage = "risk";
    const RiskEstimate risk = run_risk(cfg.experiment);
    stage = "write";
    emit(risk, fmt, out);
    return 0;
}

int run_power_command(const std::string& config_path, const std::string& grid, const std::string& out,
                      const std::string& format) {
    stage = "load-config";
    const RunConfig cfg = load_config(config_path);
    const OutputFormat fmt = parse_format(format);
    const std::vector<double> rhos = grid.empty() ? cfg.rho_grid : parse_real_list(grid);
    stage = "power-curve";
    const std::vector<PowerRow> rows = power_curve(cfg.experiment, rhos);
    stage = "write";
    emit(rows, fmt, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense-subhypergraph detection: scans, boundaries and risk experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::string format = "csv";

    std::optional<std::uint64_t> sample_seed;
    std::uint64_t replicate = 0;
    bool planted = false;
    auto* sample_cmd = app.add_subcommand("sample", "draw one hypergraph from a run file's model");
    sample_cmd->add_option("--config", config_path, "run file")->required();
    sample_cmd->add_option("--seed", sample_seed, "64-bit seed (default: the run file's seed)");
    sample_cmd->add_option("--replicate", replicate, "replicate id");
    sample_cmd->add_flag("--planted", planted, "plant the first support with the run file's rho");
    sample_cmd->add_option("--out", out, "edge-list CSV path (default stdout)");

    ScanOptions known;
    auto* scan_cmd = app.add_subcommand("scan", "known-probability scan statistic");
    add_scan_options(scan_cmd, known);
    scan_cmd->add_option("--model", known.model, "run file describing the null model")->required();

    ScanOptions adaptive;
    auto* adaptive_cmd = app.add_subcommand("adaptive-scan", "adaptive scan statistic (no model needed)");
    add_scan_options(adaptive_cmd, adaptive);
    adaptive_cmd->add_option("--vertices", adaptive.vertices, "number of vertices N")->required();
    adaptive_cmd->add_flag("--restrict-sizes", adaptive.restrict_sizes,
                           "scan only sizes >= ceil(n_max^(1/(m+1)))");

    auto* boundary_cmd = app.add_subcommand("boundary", "detection-boundary report");
    boundary_cmd->add_option("--config", config_path, "run file")->required();
    boundary_cmd->add_option("--out", out, "output JSON path (default stdout)");

    std::string edges;
    std::string model_path;
    std::uint32_t lr_n = 0;
    double lr_rho = 1.0;
    double lr_epsilon = 0.1;
    std::string lr_variant = "p_factor";
    bool truncated = false;
    auto* lr_cmd = app.add_subcommand("lr-oracle", "exact mixture likelihood ratio at tiny scale");
    lr_cmd->add_option("--edges", edges, "edge-list CSV")->required();
    lr_cmd->add_option("--model", model_path, "run file describing the null model")->required();
    lr_cmd->add_option("--n", lr_n, "planted size")->required();
    lr_cmd->add_option("--rho", lr_rho, "density boost")->required();
    lr_cmd->add_option("--epsilon", lr_epsilon, "tolerance used by the truncation event");
    lr_cmd->add_option("--gamma-variant", lr_variant, "p_factor or literal");
    lr_cmd->add_flag("--truncated", truncated, "also report the truncated likelihood ratio");
    lr_cmd->add_option("--out", out, "output JSON path (default stdout)");

    auto* risk_cmd = app.add_subcommand("risk", "Monte Carlo type-I / type-II / risk estimate");
    risk_cmd->add_option("--config", config_path, "run file")->required();
    risk_cmd->add_option("--out", out, "output path")->required();
    risk_cmd->add_option("--format", format, "csv or json");

    std::string grid;
    auto* power_cmd = app.add_subcommand("power-curve", "risk and power over a grid of rho");
    power_cmd->add_option("--config", config_path, "run file")->required();
    power_cmd->add_option("--rho-grid", grid, "comma-separated rho values (default: rho_grid key)");
    power_cmd->add_option("--out", out, "output path")->required();
    power_cmd->add_option("--format", format, "csv or json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample_cmd->parsed()) return run_sample(config_path, sample_seed, replicate, planted, out);
        if (scan_cmd->parsed()) return run_known_scan(known);
        if (adaptive_cmd->parsed()) return run_adaptive_scan(adaptive);
        if (boundary_cmd->parsed()) return run_boundary(config_path, out);
        if (lr_cmd->parsed()) {
            return run_lr(edges, model_path, lr_n, lr_rho, lr_epsilon, lr_variant, truncated, out);
        }
        if (risk_cmd->parsed()) return run_risk_command(config_path, out, format);
        if (power_cmd->parsed()) return run_power_command(config_path, grid, out, format);
    } catch (const BudgetError& e) {
        std::cerr << "hgscan: [" << stage << "] budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const InputError& e) {
        std::cerr << "hgscan: [" << stage << "] invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "hgscan: [" << stage << "] " << e.what() << '\n';
        return 1;
    }
    return 1;
}
