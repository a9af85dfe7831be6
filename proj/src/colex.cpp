#include "hgscan/colex.hpp"

#include "hgscan/core_math.hpp"
#include "hgscan/errors.hpp"

namespace hgscan {

std::uint64_t colex_rank(std::span<const Vertex> canonical) {
    std::uint64_t rank = 0;
    for (std::size_t k = 0; k < canonical.size(); ++k) {
        if (k > 0 && canonical[k - 1] >= canonical[k]) {
            throw DomainError("colex_rank requires a strictly increasing tuple");
        }
        rank += math::binom(canonical[k], k + 1);
    }
    return rank;
}

std::uint64_t colex_rank(const CanonicalEdge& e) { return colex_rank(e.vertices()); }

std::vector<Vertex> colex_unrank(std::uint64_t rank, int arity) {
    std::vector<Vertex> tuple(arity);
    for (int k = arity; k >= 1; --k) {
        // Largest c with C(c, k) <= rank.
        Vertex c = static_cast<Vertex>(k - 1);
        while (math::binom(c + 1, k) <= rank) ++c;
        tuple[k - 1] = c;
        rank -= math::binom(c, k);
    }
    return tuple;
}

bool next_colex(std::span<Vertex> tuple, std::uint32_t n) {
    const std::size_t m = tuple.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Vertex limit = (k + 1 < m) ? tuple[k + 1] : n;
        if (tuple[k] + 1 < limit) {
            ++tuple[k];
            for (std::size_t j = 0; j < k; ++j) tuple[j] = static_cast<Vertex>(j);
            return true;
        }
    }
    return false;
}

}  // namespace hgscan
