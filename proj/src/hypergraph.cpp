#include "hgscan/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hgscan/errors.hpp"

namespace hgscan {

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw DomainError("vertex set contains duplicate ids");
    }
}

VertexSet::VertexSet(std::initializer_list<Vertex> members)
    : VertexSet(std::vector<Vertex>(members)) {}

VertexSet VertexSet::from_sorted(std::vector<Vertex> members) {
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (members[i - 1] >= members[i]) {
            throw DomainError("vertex set members not strictly increasing");
        }
    }
    VertexSet s;
    s.members_ = std::move(members);
    return s;
}

VertexSet VertexSet::prefix(std::size_t k) {
    std::vector<Vertex> m(k);
    for (std::size_t i = 0; i < k; ++i) m[i] = static_cast<Vertex>(i);
    return from_sorted(std::move(m));
}

bool VertexSet::contains(Vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

void VertexSet::check_range(std::uint32_t num_vertices) const {
    if (!members_.empty() && members_.back() >= num_vertices) {
        throw DomainError("vertex id " + std::to_string(members_.back()) + " out of range [0, " +
                          std::to_string(num_vertices) + ")");
    }
}

std::vector<char> VertexSet::indicator(std::uint32_t num_vertices) const {
    check_range(num_vertices);
    std::vector<char> flags(num_vertices, 0);
    for (Vertex v : members_) flags[v] = 1;
    return flags;
}

std::string VertexSet::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(members_[i]);
    }
    return out + "}";
}

CanonicalEdge::CanonicalEdge(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
        if (vertices_[i - 1] >= vertices_[i]) {
            throw DomainError("edge is not canonical (strictly increasing)");
        }
    }
}

CanonicalEdge::CanonicalEdge(std::initializer_list<Vertex> vertices)
    : CanonicalEdge(std::vector<Vertex>(vertices)) {}

namespace {

std::vector<Vertex> flatten(const std::vector<CanonicalEdge>& edges, int arity) {
    std::vector<Vertex> flat;
    flat.reserve(edges.size() * arity);
    for (const auto& e : edges) {
        if (static_cast<int>(e.arity()) != arity) {
            throw DomainError("edge arity " + std::to_string(e.arity()) + " != " +
                              std::to_string(arity));
        }
        flat.insert(flat.end(), e.vertices().begin(), e.vertices().end());
    }
    return flat;
}

}  // namespace

Hypergraph::Hypergraph(std::uint32_t num_vertices, int arity, std::vector<Vertex> flat_edges)
    : num_vertices_(num_vertices), arity_(arity) {
    if (arity < 2) throw DomainError("arity must be at least 2");
    if (num_vertices <= static_cast<std::uint32_t>(arity)) {
        throw DomainError("need more vertices than the arity");
    }
    if (flat_edges.size() % arity != 0) {
        throw DomainError("flat edge array length is not a multiple of the arity");
    }
    const std::size_t count = flat_edges.size() / arity;
    for (std::size_t e = 0; e < count; ++e) {
        const Vertex* t = flat_edges.data() + e * arity;
        for (int k = 0; k < arity; ++k) {
            if (t[k] >= num_vertices) {
                throw DomainError("edge vertex " + std::to_string(t[k]) + " out of range");
            }
            if (k > 0 && t[k - 1] >= t[k]) {
                throw DomainError("edge is not canonical (strictly increasing)");
            }
        }
    }
    // Sort tuples lexicographically through an index permutation.
    std::vector<std::uint32_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<std::uint32_t>(i);
    auto tuple_less = [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(flat_edges.begin() + a * arity,
                                            flat_edges.begin() + (a + 1) * arity,
                                            flat_edges.begin() + b * arity,
                                            flat_edges.begin() + (b + 1) * arity);
    };
    if (!std::is_sorted(order.begin(), order.end(), tuple_less)) {
        std::sort(order.begin(), order.end(), tuple_less);
    }
    flat_.reserve(flat_edges.size());
    for (std::uint32_t idx : order) {
        flat_.insert(flat_.end(), flat_edges.begin() + idx * arity,
                     flat_edges.begin() + (idx + 1) * arity);
    }
    for (std::size_t e = 1; e < count; ++e) {
        if (std::equal(flat_.begin() + (e - 1) * arity, flat_.begin() + e * arity,
                       flat_.begin() + e * arity)) {
            throw DomainError("duplicate edge");
        }
    }
    incidence_.assign(num_vertices, {});
    for (std::size_t e = 0; e < count; ++e) {
        for (int k = 0; k < arity; ++k) {
            incidence_[flat_[e * arity + k]].push_back(static_cast<std::uint32_t>(e));
        }
    }
}

Hypergraph::Hypergraph(std::uint32_t num_vertices, int arity, const std::vector<CanonicalEdge>& edges)
    : Hypergraph(num_vertices, arity, flatten(edges, arity)) {}

bool Hypergraph::has_edge(std::span<const Vertex> canonical) const {
    if (static_cast<int>(canonical.size()) != arity_) return false;
    std::size_t lo = 0;
    std::size_t hi = num_edges();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const auto e = edge(mid);
        if (std::lexicographical_compare(e.begin(), e.end(), canonical.begin(), canonical.end())) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo == num_edges()) return false;
    const auto e = edge(lo);
    return std::equal(e.begin(), e.end(), canonical.begin());
}

std::vector<CanonicalEdge> Hypergraph::edges() const {
    std::vector<CanonicalEdge> out;
    out.reserve(num_edges());
    for (std::size_t e = 0; e < num_edges(); ++e) {
        const auto t = edge(e);
        out.emplace_back(std::vector<Vertex>(t.begin(), t.end()));
    }
    return out;
}

namespace {

// Per-edge count of vertices of d, for edges touching d; returns the number
// of edges touching d.
template <typename Fn>
std::uint64_t for_each_touching(const Hypergraph& g, const VertexSet& d, Fn&& fn) {
    const auto flags = d.indicator(g.num_vertices());
    std::uint64_t touching = 0;
    for (Vertex v : d) {
        for (std::uint32_t e : g.incident(v)) {
            // Visit each edge once, from its smallest member inside d.
            const auto t = g.edge(e);
            int inside = 0;
            Vertex first_inside = 0;
            for (Vertex u : t) {
                if (flags[u]) {
                    if (inside == 0) first_inside = u;
                    ++inside;
                }
            }
            if (first_inside != v) continue;
            ++touching;
            fn(inside);
        }
    }
    return touching;
}

}  // namespace

std::uint64_t count_internal_edges(const Hypergraph& g, const VertexSet& d) {
    if (d.size() < static_cast<std::size_t>(g.arity())) {
        d.check_range(g.num_vertices());
        return 0;
    }
    const int m = g.arity();
    std::uint64_t count = 0;
    for_each_touching(g, d, [&](int inside) { count += (inside == m); });
    return count;
}

std::uint64_t count_odd_crossing(const Hypergraph& g, const VertexSet& d) {
    const int m = g.arity();
    std::uint64_t count = 0;
    const std::uint64_t touching =
        for_each_touching(g, d, [&](int inside) { count += ((m - inside) % 2 == 1); });
    // Edges disjoint from d have all m vertices outside.
    if (m % 2 == 1) count += g.num_edges() - touching;
    return count;
}

std::uint64_t count_odd_inside(const Hypergraph& g, const VertexSet& d) {
    std::uint64_t count = 0;
    for_each_touching(g, d, [&](int inside) { count += (inside % 2 == 1); });
    return count;
}

std::uint64_t degree(const Hypergraph& g, Vertex v) {
    if (v >= g.num_vertices()) {
        throw DomainError("vertex id " + std::to_string(v) + " out of range");
    }
    return g.incident(v).size();
}

IncrementalCounts::IncrementalCounts(const Hypergraph& g)
    : graph_(&g), arity_(g.arity()), words_((g.num_vertices() + 63) / 64) {
    const std::uint32_t n = g.num_vertices();
    degree_.resize(n);
    for (Vertex v = 0; v < n; ++v) degree_[v] = static_cast<std::uint32_t>(g.incident(v).size());
    if (arity_ == 2) {
        adjacency_.assign(static_cast<std::size_t>(n) * words_, 0);
        members_.assign(words_, 0);
        for (std::size_t e = 0; e < g.num_edges(); ++e) {
            const auto t = g.edge(e);
            adjacency_[t[0] * words_ + t[1] / 64] |= std::uint64_t{1} << (t[1] % 64);
            adjacency_[t[1] * words_ + t[0] / 64] |= std::uint64_t{1} << (t[0] % 64);
        }
    } else {
        inside_.assign(g.num_edges(), 0);
    }
}

void IncrementalCounts::push(Vertex v) {
    ++size_;
    if (arity_ == 2) {
        const std::uint64_t* row = adjacency_.data() + v * words_;
        std::uint64_t added = 0;
        for (std::size_t w = 0; w < words_; ++w) added += std::popcount(row[w] & members_[w]);
        members_[v / 64] |= std::uint64_t{1} << (v % 64);
        internal_ += added;
        degree_sum_ += degree_[v];
        odd_inside_ = degree_sum_ - 2 * internal_;
        return;
    }
    for (std::uint32_t e : graph_->incident(v)) {
        const int c = ++inside_[e];
        if (c == arity_) ++internal_;
        if (c % 2 == 1) {
            ++odd_inside_;
        } else {
            --odd_inside_;
        }
    }
}

void IncrementalCounts::pop(Vertex v) {
    --size_;
    if (arity_ == 2) {
        members_[v / 64] &= ~(std::uint64_t{1} << (v % 64));
        const std::uint64_t* row = adjacency_.data() + v * words_;
        std::uint64_t removed = 0;
        for (std::size_t w = 0; w < words_; ++w) removed += std::popcount(row[w] & members_[w]);
        internal_ -= removed;
        degree_sum_ -= degree_[v];
        odd_inside_ = degree_sum_ - 2 * internal_;
        return;
    }
    for (std::uint32_t e : graph_->incident(v)) {
        const int c = inside_[e]--;
        if (c == arity_) --internal_;
        if (c % 2 == 1) {
            --odd_inside_;
        } else {
            ++odd_inside_;
        }
    }
}

void IncrementalCounts::clear() {
    std::fill(members_.begin(), members_.end(), 0);
    std::fill(inside_.begin(), inside_.end(), 0);
    internal_ = odd_inside_ = degree_sum_ = 0;
    size_ = 0;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Hypergraph read_edge_list(std::istream& in, std::uint32_t num_vertices) {
    std::string line;
    std::size_t line_no = 0;
    int arity = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    const auto header = split_csv(line);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] != "v" + std::to_string(i + 1)) {
            throw InputError("expected edge-list header v1,...,vm", line_no);
        }
    }
    arity = static_cast<int>(header.size());
    if (arity < 2) throw InputError("edge-list header must name at least two columns", line_no);

    std::vector<Vertex> flat;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != arity) {
            throw InputError("expected " + std::to_string(arity) + " columns", line_no);
        }
        Vertex prev = 0;
        for (int k = 0; k < arity; ++k) {
            Vertex v = 0;
            const auto& c = cells[k];
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc() || ptr != c.data() + c.size()) {
                throw InputError("invalid vertex id '" + c + "'", line_no);
            }
            if (v >= num_vertices) {
                throw InputError("vertex id " + c + " out of range", line_no);
            }
            if (k > 0 && v <= prev) {
                throw InputError("edge is not canonical (strictly increasing)", line_no);
            }
            prev = v;
            flat.push_back(v);
        }
    }
    try {
        return Hypergraph(num_vertices, arity, std::move(flat));
    } catch (const DomainError& e) {
        throw InputError(e.what());
    }
}

Hypergraph load_edge_list(const std::filesystem::path& path, std::uint32_t num_vertices) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list " + path.string());
    try {
        return read_edge_list(in, num_vertices);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_edge_list(std::ostream& out, const Hypergraph& g) {
    for (int k = 0; k < g.arity(); ++k) out << (k ? "," : "") << 'v' << (k + 1);
    out << '\n';
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        const auto t = g.edge(e);
        for (int k = 0; k < g.arity(); ++k) out << (k ? "," : "") << t[k];
        out << '\n';
    }
}

void save_edge_list(const std::filesystem::path& path, const Hypergraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list " + path.string());
    write_edge_list(out, g);
    if (!out) throw std::runtime_error("I/O error writing " + path.string());
}

}  // namespace hgscan
