#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hgscan/hypergraph.hpp"

namespace hgscan {

/// Colexicographic rank sum_k C(e_k, k+1) of a strictly increasing tuple;
/// a bijection from m-subsets of [0,N) onto [0, C(N,m)).
std::uint64_t colex_rank(std::span<const Vertex> canonical);
std::uint64_t colex_rank(const CanonicalEdge& e);

/// Inverse of colex_rank for arity m.
std::vector<Vertex> colex_unrank(std::uint64_t rank, int arity);

/// Advances `tuple` to the next m-subset in colex order; returns false
/// after the last subset of [0, n).
bool next_colex(std::span<Vertex> tuple, std::uint32_t n);

}  // namespace hgscan
