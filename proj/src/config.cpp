#include "hgscan/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "hgscan/errors.hpp"
#include "hgscan/rng.hpp"

namespace hgscan {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_real(const std::string& text, std::size_t line) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw InputError("expected a real number, got '" + text + "'", line);
    return value;
}

std::uint64_t to_unsigned(const std::string& text, std::size_t line) {
    std::uint64_t value = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw InputError("expected an unsigned integer, got '" + text + "'", line);
    return value;
}

bool to_bool(const std::string& text, std::size_t line) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw InputError("expected true or false, got '" + text + "'", line);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(trim(part));
    return parts;
}

struct Entry {
    std::string value;
    std::size_t line;
};

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) {
        if (!part.empty()) out.push_back(to_real(part, 0));
    }
    return out;
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    std::map<std::string, Entry> entries;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw InputError("expected 'key = value'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) throw InputError("empty key or value", line);
        if (!entries.emplace(key, Entry{value, line}).second) throw InputError("duplicate key '" + key + "'", line);
    }

    auto take = [&](const std::string& key) -> std::optional<Entry> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        Entry e = it->second;
        entries.erase(it);
        return e;
    };
    auto require = [&](const std::string& key) {
        auto e = take(key);
        if (!e) throw InputError("missing required key '" + key + "'");
        return *e;
    };
    auto path_of = [&](const Entry& e) {
        const std::filesystem::path p(e.value);
        return p.is_absolute() ? p : base_dir / p;
    };

    RunConfig cfg;
    ExperimentConfig& ex = cfg.experiment;

    const Entry n_vertices = require("N");
    const Entry arity_entry = require("m");
    const auto big_n = static_cast<std::uint32_t>(to_unsigned(n_vertices.value, n_vertices.line));
    const auto arity = static_cast<int>(to_unsigned(arity_entry.value, arity_entry.line));
    const Entry kind = require("model");

    try {
        if (kind.value == "homogeneous") {
            const Entry p = require("p");
            ex.model = ProbabilityModel::homogeneous(big_n, arity, to_real(p.value, p.line));
        } else if (kind.value == "rank1") {
            if (auto file = take("weights_file")) {
                ex.model = load_rank1_model(path_of(*file), arity);
                if (ex.model->num_vertices() != big_n) {
                    throw InputError("weights file lists " + std::to_string(ex.model->num_vertices()) +
                                         " vertices but N = " + std::to_string(big_n),
                                     file->line);
                }
            } else if (auto range = take("weights_uniform")) {
                const std::vector<std::string> bounds = split(range->value, ',');
                if (bounds.size() != 2) throw InputError("weights_uniform needs 'low,high'", range->line);
                const double lo = to_real(bounds[0], range->line);
                const double hi = to_real(bounds[1], range->line);
                std::uint64_t wseed = 0;
                if (auto s = take("weights_seed")) wseed = to_unsigned(s->value, s->line);
                CounterStream rng(wseed, 0);
                std::vector<double> w(big_n);
                for (auto& x : w) x = lo + (hi - lo) * rng.uniform();
                ex.model = ProbabilityModel::rank1(arity, std::move(w));
            } else {
                throw InputError("rank1 model needs weights_file or weights_uniform", kind.line);
            }
        } else if (kind.value == "explicit") {
            const Entry file = require("explicit_file");
            ex.model = load_explicit_model(path_of(file), big_n, arity);
        } else {
            throw InputError("unknown model '" + kind.value + "' (expected homogeneous, rank1 or explicit)",
                             kind.line);
        }
    } catch (const DomainError& e) {
        throw InputError(std::string("invalid model: ") + e.what(), kind.line);
    }

    auto unsigned_key = [&](const char* key, auto& field) {
        if (auto e = take(key)) field = static_cast<std::remove_reference_t<decltype(field)>>(to_unsigned(e->value, e->line));
    };
    auto real_key = [&](const char* key, double& field) {
        if (auto e = take(key)) field = to_real(e->value, e->line);
    };

    unsigned_key("n", ex.n);
    real_key("rho", ex.rho);
    unsigned_key("random_supports", ex.random_supports);
    if (auto e = take("supports")) {
        for (const auto& group : split(e->value, ';')) {
            std::vector<Vertex> members;
            std::istringstream words(group);
            std::string word;
            while (words >> word) members.push_back(static_cast<Vertex>(to_unsigned(word, e->line)));
            try {
                ex.supports.emplace_back(std::move(members));
            } catch (const DomainError& err) {
                throw InputError(err.what(), e->line);
            }
        }
    }
    if (auto e = take("test")) {
        try {
            ex.test = parse_test_kind(e->value);
        } catch (const InputError& err) {
            throw InputError(err.what(), e->line);
        }
    }
    if (auto e = take("enumeration")) {
        if (e->value == "exact") {
            ex.scan.enumeration = Enumeration::Exact;
        } else if (e->value == "heuristic") {
            ex.scan.enumeration = Enumeration::Heuristic;
        } else {
            throw InputError("enumeration must be exact or heuristic", e->line);
        }
    }
    ex.scan.n_max = ex.n;
    unsigned_key("n_max", ex.scan.n_max);
    unsigned_key("size_min", ex.scan.size_min);
    unsigned_key("heuristic_seeds", ex.scan.heuristic_seeds);
    unsigned_key("swap_rounds", ex.scan.swap_rounds);
    unsigned_key("subset_budget", ex.scan.subset_budget);
    if (auto e = take("restrict_adaptive_sizes")) ex.scan.restrict_adaptive_sizes = to_bool(e->value, e->line);
    if (auto e = take("tau")) {
        if (e->value == "calibrated") {
            ex.threshold.calibrated = true;
        } else {
            ex.threshold.tau = to_real(e->value, e->line);
        }
    }
    ex.scan.tau = ex.threshold.tau;
    real_key("level", ex.threshold.level);
    unsigned_key("calibration_replicates", ex.threshold.replicates);
    unsigned_key("replicates", ex.replicates);
    unsigned_key("seed", ex.seed);
    unsigned_key("workers", ex.workers);
    unsigned_key("edge_budget", ex.edge_budget);
    unsigned_key("support_budget", ex.support_budget);
    real_key("epsilon", ex.epsilon);
    cfg.scenario.epsilon = ex.epsilon;
    real_key("delta", cfg.scenario.delta);
    real_key("gamma_n", cfg.scenario.gamma_n);
    real_key("delta_m", cfg.delta_m);
    unsigned_key("exhaustive_budget", cfg.exhaustive_budget);
    if (auto e = take("gamma_variant")) {
        if (e->value == "p_factor") {
            ex.gamma_variant = GammaVariant::WithPFactor;
        } else if (e->value == "literal") {
            ex.gamma_variant = GammaVariant::Literal;
        } else {
            throw InputError("gamma_variant must be p_factor or literal", e->line);
        }
    }
    if (auto e = take("rho_grid")) {
        try {
            cfg.rho_grid = parse_real_list(e->value);
        } catch (const InputError& err) {
            throw InputError(err.what(), e->line);
        }
    }

    if (!entries.empty()) {
        const auto& [key, entry] = *std::min_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            return a.second.line < b.second.line;
        });
        throw InputError("unknown key '" + key + "'", entry.line);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path.string());
    try {
        return parse_config(in, path.parent_path());
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

}  // namespace hgscan
