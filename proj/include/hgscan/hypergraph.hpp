#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hgscan {

using Vertex = std::uint32_t;

/// Sorted set of distinct vertex ids.
class VertexSet {
public:
    VertexSet() = default;
    /// Sorts the input; throws DomainError on duplicates.
    explicit VertexSet(std::vector<Vertex> members);
    VertexSet(std::initializer_list<Vertex> members);

    /// Members already sorted and distinct; checked.
    static VertexSet from_sorted(std::vector<Vertex> members);
    /// {0, 1, ..., k-1}
    static VertexSet prefix(std::size_t k);

    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(Vertex v) const;
    std::span<const Vertex> members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    Vertex operator[](std::size_t i) const { return members_[i]; }
    Vertex max() const { return members_.back(); }

    /// Throws DomainError if any member is >= num_vertices.
    void check_range(std::uint32_t num_vertices) const;
    /// Membership bitmap of length num_vertices.
    std::vector<char> indicator(std::uint32_t num_vertices) const;

    std::string to_string() const;

    friend bool operator==(const VertexSet&, const VertexSet&) = default;
    friend auto operator<=>(const VertexSet& a, const VertexSet& b) { return a.members_ <=> b.members_; }

private:
    std::vector<Vertex> members_;
};

/// Strictly increasing m-tuple of vertex ids.
class CanonicalEdge {
public:
    CanonicalEdge() = default;
    /// Throws DomainError unless strictly increasing.
    explicit CanonicalEdge(std::vector<Vertex> vertices);
    CanonicalEdge(std::initializer_list<Vertex> vertices);

    std::size_t arity() const noexcept { return vertices_.size(); }
    std::span<const Vertex> vertices() const noexcept { return vertices_; }
    Vertex operator[](std::size_t i) const { return vertices_[i]; }

    friend bool operator==(const CanonicalEdge&, const CanonicalEdge&) = default;
    friend auto operator<=>(const CanonicalEdge& a, const CanonicalEdge& b) {
        return a.vertices_ <=> b.vertices_;
    }

private:
    std::vector<Vertex> vertices_;
};

/// Immutable m-uniform hypergraph on vertices [0, N).
///
/// Edges are stored as one flat, lexicographically sorted array of canonical
/// tuples plus a per-vertex incidence index.
class Hypergraph {
public:
    /// `flat_edges` holds m ids per edge. Each tuple must be strictly
    /// increasing and in range; duplicates are rejected.
    Hypergraph(std::uint32_t num_vertices, int arity, std::vector<Vertex> flat_edges);
    Hypergraph(std::uint32_t num_vertices, int arity, const std::vector<CanonicalEdge>& edges);

    std::uint32_t num_vertices() const noexcept { return num_vertices_; }
    int arity() const noexcept { return arity_; }
    std::size_t num_edges() const noexcept { return flat_.size() / arity_; }

    std::span<const Vertex> edge(std::size_t index) const {
        return {flat_.data() + index * arity_, static_cast<std::size_t>(arity_)};
    }
    std::span<const std::uint32_t> incident(Vertex v) const { return incidence_.at(v); }
    std::span<const Vertex> flat_edges() const noexcept { return flat_; }

    bool has_edge(std::span<const Vertex> canonical) const;
    std::vector<CanonicalEdge> edges() const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
        return a.num_vertices_ == b.num_vertices_ && a.arity_ == b.arity_ && a.flat_ == b.flat_;
    }

private:
    std::uint32_t num_vertices_;
    int arity_;
    std::vector<Vertex> flat_;
    std::vector<std::vector<std::uint32_t>> incidence_;
};

/// A_D: edges with every vertex in d.
std::uint64_t count_internal_edges(const Hypergraph& g, const VertexSet& d);

/// A_{D,D^c}: edges with an odd number of vertices outside d.
std::uint64_t count_odd_crossing(const Hypergraph& g, const VertexSet& d);

/// Edges with an odd number of vertices inside d. Equal to
/// count_odd_crossing for even m, and to |E| - count_odd_crossing for odd m.
std::uint64_t count_odd_inside(const Hypergraph& g, const VertexSet& d);

std::uint64_t degree(const Hypergraph& g, Vertex v);

/// Tracks A_D and the odd-inside count while vertices are pushed and popped
/// in LIFO order. Used by the subset enumerators.
class IncrementalCounts {
public:
    explicit IncrementalCounts(const Hypergraph& g);

    void push(Vertex v);
    /// Must pop the most recently pushed vertex.
    void pop(Vertex v);
    void clear();

    std::uint64_t internal() const noexcept { return internal_; }
    std::uint64_t odd_inside() const noexcept { return odd_inside_; }
    std::size_t size() const noexcept { return size_; }

private:
    const Hypergraph* graph_;
    int arity_;
    std::size_t words_;
    std::vector<std::uint64_t> adjacency_;  // m == 2 only: N rows of `words_` words
    std::vector<std::uint64_t> members_;    // m == 2 only: bitset of current set
    std::vector<std::uint32_t> degree_;
    std::vector<std::uint8_t> inside_;      // m > 2 only: per-edge count of members
    std::uint64_t internal_ = 0;
    std::uint64_t odd_inside_ = 0;
    std::uint64_t degree_sum_ = 0;
    std::size_t size_ = 0;
};

/// Reads the `v1,...,vm` CSV edge list. Rejects non-canonical rows with a
/// line-numbered InputError.
Hypergraph read_edge_list(std::istream& in, std::uint32_t num_vertices);
Hypergraph load_edge_list(const std::filesystem::path& path, std::uint32_t num_vertices);

void write_edge_list(std::ostream& out, const Hypergraph& g);
void save_edge_list(const std::filesystem::path& path, const Hypergraph& g);

}  // namespace hgscan
