#include "hgscan/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "hgscan/colex.hpp"
#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"

namespace hgscan {

namespace {

void check_probability(double p, const std::string& what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(what + " must lie in [0,1], got " + std::to_string(p));
    }
}

void check_shape(std::uint32_t n, int m) {
    if (m < 2) throw DomainError("arity must be at least 2");
    if (n <= static_cast<std::uint32_t>(m)) throw DomainError("need more vertices than the arity");
}

}  // namespace

void for_each_subset(std::span<const Vertex> members, int m,
                     const std::function<void(std::span<const Vertex>)>& fn) {
    if (static_cast<int>(members.size()) < m) return;
    std::vector<std::size_t> idx(m);
    std::vector<Vertex> tuple(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    const std::size_t n = members.size();
    while (true) {
        for (int i = 0; i < m; ++i) tuple[i] = members[idx[i]];
        fn(tuple);
        int i = m - 1;
        while (i >= 0 && idx[i] == n - m + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
}

ProbabilityModel ProbabilityModel::homogeneous(std::uint32_t num_vertices, int arity, double p) {
    check_shape(num_vertices, arity);
    check_probability(p, "edge probability");
    return ProbabilityModel(num_vertices, arity, Homogeneous{p});
}

ProbabilityModel ProbabilityModel::rank1(int arity, std::vector<double> weights) {
    check_shape(static_cast<std::uint32_t>(weights.size()), arity);
    for (double w : weights) check_probability(w, "rank-1 weight");
    const auto n = static_cast<std::uint32_t>(weights.size());
    return ProbabilityModel(n, arity, Rank1{std::move(weights)});
}

ProbabilityModel ProbabilityModel::explicit_table(std::uint32_t num_vertices, int arity,
                                                  std::vector<double> by_rank) {
    check_shape(num_vertices, arity);
    const std::uint64_t slots = math::binom(num_vertices, arity);
    if (by_rank.size() != slots) {
        throw DomainError("explicit model needs " + std::to_string(slots) + " probabilities, got " +
                          std::to_string(by_rank.size()));
    }
    for (double p : by_rank) check_probability(p, "edge probability");
    return ProbabilityModel(num_vertices, arity, Explicit{std::move(by_rank)});
}

double ProbabilityModel::edge_probability(std::span<const Vertex> e) const {
    if (static_cast<int>(e.size()) != arity_) {
        throw DomainError("edge arity does not match the model");
    }
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] >= num_vertices_) throw DomainError("edge vertex out of range");
        if (k > 0 && e[k - 1] >= e[k]) throw DomainError("edge is not canonical");
    }
    switch (kind()) {
        case ModelKind::Homogeneous:
            return std::get<Homogeneous>(variant_).p;
        case ModelKind::Rank1: {
            const auto& w = std::get<Rank1>(variant_).weights;
            double p = 1.0;
            for (Vertex v : e) p *= w[v];
            return p;
        }
        case ModelKind::Explicit:
            return std::get<Explicit>(variant_).probabilities[colex_rank(e)];
    }
    return 0.0;
}

std::vector<double> elementary_symmetric(std::span<const double> values, int k) {
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    for (double x : values) {
        for (int j = k; j >= 1; --j) e[j] += x * e[j - 1];
    }
    return e;
}

double ProbabilityModel::expected_internal(const VertexSet& d) const {
    d.check_range(num_vertices_);
    if (d.size() < static_cast<std::size_t>(arity_)) return 0.0;
    switch (kind()) {
        case ModelKind::Homogeneous:
            return math::binom_real(d.size(), arity_) * std::get<Homogeneous>(variant_).p;
        case ModelKind::Rank1: {
            const auto& w = std::get<Rank1>(variant_).weights;
            std::vector<double> sub;
            sub.reserve(d.size());
            for (Vertex v : d) sub.push_back(w[v]);
            return elementary_symmetric(sub, arity_)[arity_];
        }
        case ModelKind::Explicit: {
            const auto& table = std::get<Explicit>(variant_).probabilities;
            double sum = 0.0;
            for_each_subset(d.members(), arity_,
                            [&](std::span<const Vertex> t) { sum += table[colex_rank(t)]; });
            return sum;
        }
    }
    return 0.0;
}

double ProbabilityModel::edge_rate(const VertexSet& d) const {
    if (d.size() < static_cast<std::size_t>(arity_)) {
        throw DomainError("edge rate undefined for |D| < m");
    }
    return expected_internal(d) / math::binom_real(d.size(), arity_);
}

double ProbabilityModel::max_probability_within(const VertexSet& d) const {
    d.check_range(num_vertices_);
    if (d.size() < static_cast<std::size_t>(arity_)) return 0.0;
    switch (kind()) {
        case ModelKind::Homogeneous:
            return std::get<Homogeneous>(variant_).p;
        case ModelKind::Rank1: {
            const auto& w = std::get<Rank1>(variant_).weights;
            std::vector<double> sub;
            for (Vertex v : d) sub.push_back(w[v]);
            std::partial_sort(sub.begin(), sub.begin() + arity_, sub.end(), std::greater<>());
            double p = 1.0;
            for (int k = 0; k < arity_; ++k) p *= sub[k];
            return p;
        }
        case ModelKind::Explicit: {
            const auto& table = std::get<Explicit>(variant_).probabilities;
            double best = 0.0;
            for_each_subset(d.members(), arity_, [&](std::span<const Vertex> t) {
                best = std::max(best, table[colex_rank(t)]);
            });
            return best;
        }
    }
    return 0.0;
}

ExpectationTracker::ExpectationTracker(const ProbabilityModel& model) : model_(&model) {
    const int m = model.arity();
    switch (model.kind()) {
        case ModelKind::Homogeneous: {
            homogeneous_by_size_.resize(model.num_vertices() + 1);
            for (std::uint32_t k = 0; k <= model.num_vertices(); ++k) {
                homogeneous_by_size_[k] = math::binom_real(k, m) * model.homogeneous_p();
            }
            break;
        }
        case ModelKind::Rank1:
            esp_stack_.assign(m + 1, 0.0);
            esp_stack_[0] = 1.0;
            break;
        case ModelKind::Explicit:
            sum_stack_.push_back(0.0);
            break;
    }
}

void ExpectationTracker::add_explicit_terms(Vertex v, std::size_t start, int remaining,
                                            std::vector<Vertex>& chosen, double& sum) const {
    if (remaining == 0) {
        std::vector<Vertex> tuple = chosen;
        tuple.push_back(v);
        std::sort(tuple.begin(), tuple.end());
        sum += model_->edge_probability(tuple);
        return;
    }
    for (std::size_t i = start; i + remaining <= members_.size(); ++i) {
        chosen.push_back(members_[i]);
        add_explicit_terms(v, i + 1, remaining - 1, chosen, sum);
        chosen.pop_back();
    }
}

void ExpectationTracker::push(Vertex v) {
    const int m = model_->arity();
    switch (model_->kind()) {
        case ModelKind::Homogeneous:
            break;
        case ModelKind::Rank1: {
            const double w = model_->weights()[v];
            const std::size_t base = esp_stack_.size() - (m + 1);
            esp_stack_.resize(esp_stack_.size() + m + 1);
            double* prev = esp_stack_.data() + base;
            double* next = prev + (m + 1);
            next[0] = 1.0;
            for (int j = 1; j <= m; ++j) next[j] = prev[j] + w * prev[j - 1];
            break;
        }
        case ModelKind::Explicit: {
            double added = 0.0;
            std::vector<Vertex> chosen;
            add_explicit_terms(v, 0, m - 1, chosen, added);
            sum_stack_.push_back(sum_stack_.back() + added);
            break;
        }
    }
    members_.push_back(v);
}

void ExpectationTracker::pop() {
    members_.pop_back();
    if (model_->kind() == ModelKind::Rank1) {
        esp_stack_.resize(esp_stack_.size() - (model_->arity() + 1));
    } else if (model_->kind() == ModelKind::Explicit) {
        sum_stack_.pop_back();
    }
}

void ExpectationTracker::clear() {
    while (!members_.empty()) pop();
}

double ExpectationTracker::value() const {
    switch (model_->kind()) {
        case ModelKind::Homogeneous:
            return homogeneous_by_size_[members_.size()];
        case ModelKind::Rank1:
            return esp_stack_.back();
        case ModelKind::Explicit:
            return sum_stack_.back();
    }
    return 0.0;
}

PlantedAlternative make_alternative(const ProbabilityModel& model, VertexSet support, double rho) {
    support.check_range(model.num_vertices());
    if (!(rho >= 1.0) || !std::isfinite(rho)) {
        throw DomainError("density boost rho must be finite and >= 1, got " + std::to_string(rho));
    }
    if (support.size() >= model.num_vertices()) {
        throw DomainError("planted support must be a proper subset of the vertices");
    }
    const double pmax = model.max_probability_within(support);
    if (rho * pmax > 1.0 + 1e-12) {
        throw DomainError("rho * p_e = " + std::to_string(rho * pmax) +
                          " exceeds 1 inside the planted support");
    }
    return PlantedAlternative{std::move(support), rho};
}

Rank1Stats rank1_stats(const ProbabilityModel& model, double odd_delta) {
    if (model.kind() != ModelKind::Rank1) throw DomainError("rank-1 statistics need a rank-1 model");
    const auto& w = model.weights();
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    double delta = 0.0;
    if (model.arity() % 2 == 1) {
        if (!(odd_delta > 0.0 && odd_delta < 1.0)) {
            throw DomainError("delta_m for odd arity must lie in (0,1)");
        }
        delta = odd_delta;
    }
    return Rank1Stats{*hi, *lo, delta};
}

SparsityReport check_sparsity(const ProbabilityModel& model, const PlantedAlternative& alt,
                              double tolerance) {
    const double value = alt.rho * alt.rho * model.max_probability_within(alt.support);
    return SparsityReport{value, tolerance, value <= tolerance};
}

Rank1AssumptionReport check_rank1_assumption(const ProbabilityModel& model, std::uint32_t n,
                                             double delta_m, double margin) {
    if (model.kind() != ModelKind::Rank1) {
        throw DomainError("rank-1 assumption check needs a rank-1 model");
    }
    const Rank1Stats stats = rank1_stats(model, model.arity() % 2 ? delta_m : kDefaultOddDelta);
    const double m = model.arity();
    const double big_n = model.num_vertices();
    Rank1AssumptionReport r{};
    r.delta_m = stats.delta_m;
    r.margin = margin;
    r.rhs_size_term = std::pow(static_cast<double>(n), m / (m + 1.0));
    r.rhs_weight_term = std::pow(stats.w_min, m) * std::pow(big_n / n, m - 1.0 - stats.delta_m);
    r.rhs = std::min(r.rhs_size_term, r.rhs_weight_term);
    if (stats.w_min <= 0.0) {
        r.lhs = std::numeric_limits<double>::infinity();
        r.ratio = r.lhs;
        r.holds = false;
        return r;
    }
    r.lhs = std::pow(stats.w_max / stats.w_min, m);
    r.ratio = r.lhs / r.rhs;
    r.holds = r.lhs < margin * r.rhs;
    return r;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        try {
            std::size_t used = 0;
            value = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw InputError("invalid number '" + s + "'", line);
        }
    } else {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw InputError("invalid integer '" + s + "'", line);
        }
    }
    return value;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

ProbabilityModel load_rank1_model(const std::filesystem::path& path, int arity) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open weights file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line) && blank(line)) ++line_no;
    ++line_no;
    if (split_row(line) != std::vector<std::string>{"vertex", "weight"}) {
        throw InputError(path.string() + ": expected header vertex,weight", line_no);
    }
    std::vector<double> weights;
    std::vector<char> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cells = split_row(line);
        if (cells.size() != 2) throw InputError(path.string() + ": expected 2 columns", line_no);
        const auto v = parse_number<std::uint32_t>(cells[0], line_no);
        const double w = parse_number<double>(cells[1], line_no);
        if (!(w >= 0.0 && w <= 1.0)) {
            throw InputError(path.string() + ": weight outside [0,1]", line_no);
        }
        if (v >= weights.size()) {
            weights.resize(v + 1, 0.0);
            seen.resize(v + 1, 0);
        }
        if (seen[v]) throw InputError(path.string() + ": duplicate vertex", line_no);
        seen[v] = 1;
        weights[v] = w;
    }
    for (std::size_t v = 0; v < seen.size(); ++v) {
        if (!seen[v]) throw InputError(path.string() + ": missing weight for vertex " + std::to_string(v));
    }
    return ProbabilityModel::rank1(arity, std::move(weights));
}

ProbabilityModel load_explicit_model(const std::filesystem::path& path, std::uint32_t num_vertices,
                                     int arity) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open explicit model " + path.string());
    const std::uint64_t slots = math::binom(num_vertices, arity);
    std::vector<double> table(slots, -1.0);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line) && blank(line)) ++line_no;
    ++line_no;
    const auto header = split_row(line);
    if (static_cast<int>(header.size()) != arity + 1 || header.back() != "p") {
        throw InputError(path.string() + ": expected header v1,...,vm,p", line_no);
    }
    std::uint64_t filled = 0;
    std::vector<Vertex> tuple(arity);
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto cells = split_row(line);
        if (static_cast<int>(cells.size()) != arity + 1) {
            throw InputError(path.string() + ": wrong column count", line_no);
        }
        for (int k = 0; k < arity; ++k) {
            tuple[k] = parse_number<Vertex>(cells[k], line_no);
            if (tuple[k] >= num_vertices) throw InputError(path.string() + ": vertex out of range", line_no);
            if (k > 0 && tuple[k - 1] >= tuple[k]) {
                throw InputError(path.string() + ": edge is not canonical", line_no);
            }
        }
        const double p = parse_number<double>(cells[arity], line_no);
        if (!(p >= 0.0 && p <= 1.0)) throw InputError(path.string() + ": probability outside [0,1]", line_no);
        auto& slot = table[colex_rank(tuple)];
        if (slot >= 0.0) throw InputError(path.string() + ": duplicate edge", line_no);
        slot = p;
        ++filled;
    }
    if (filled != slots) {
        throw InputError(path.string() + ": explicit model lists " + std::to_string(filled) +
                         " of " + std::to_string(slots) + " canonical edges");
    }
    return ProbabilityModel::explicit_table(num_vertices, arity, std::move(table));
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Homogeneous: return "homogeneous";
        case ModelKind::Rank1: return "rank1";
        case ModelKind::Explicit: return "explicit";
    }
    return "unknown";
}

}  // namespace hgscan
