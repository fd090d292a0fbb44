#pragma once

#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subgae/graph.hpp"
#include "subgae/random.hpp"

namespace subgae {

struct SbmSpec {
    std::int64_t num_communities = 0;
    std::int64_t community_size = 0;
    double p_in = 0.0;
    double p_out = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::uint64_t kSbmStream = 0x73'62'6dULL;  // "sbm"

// Visit each success index of a Bernoulli(p) process over `count` slots in
// O(successes) via geometric gaps between hits.
template <typename Visit>
void bernoulli_indices(std::int64_t count, double p, Rng& rng, Visit&& visit) {
    if (count <= 0 || p <= 0.0) return;
    if (p >= 1.0) {
        for (std::int64_t t = 0; t < count; ++t) visit(t);
        return;
    }
    const double log_q = std::log1p(-p);
    std::int64_t t = -1;
    for (;;) {
        const double gap = std::floor(std::log1p(-rng.uniform()) / log_q);
        if (gap >= static_cast<double>(count)) return;  // also catches inf
        t += static_cast<std::int64_t>(gap) + 1;
        if (t >= count) return;
        visit(t);
    }
}

}  // namespace detail

// Equal-block stochastic block model: every unordered pair inside a block is
// an edge with probability p_in, every cross-block pair with p_out. Runtime
// is linear in the number of edges generated, not in the number of pairs.
inline std::pair<Graph, std::vector<std::int64_t>> generate_sbm(const SbmSpec& spec) {
    const std::int64_t blocks = spec.num_communities;
    const std::int64_t s = spec.community_size;
    if (blocks < 1 || s < 1 || blocks * s < 2)
        throw std::invalid_argument("generate_sbm: need at least 2 nodes");
    if (!(0.0 <= spec.p_out && spec.p_out <= spec.p_in && spec.p_in <= 1.0))
        std::cerr << "generate_sbm: warning: expected 0 <= p_out <= p_in <= 1 (got p_in="
                  << spec.p_in << ", p_out=" << spec.p_out << ")\n";

    const std::int64_t n = blocks * s;
    Rng base(mix_seed(spec.seed ^ detail::kSbmStream));
    std::vector<EdgePair> edges;

    for (std::int64_t bi = 0; bi < blocks; ++bi) {
        // Intra-block pairs, enumerated in triangle order: all (u, v) with
        // u < v, decoded from the flat index by walking rows.
        {
            Rng rng = base.fork(static_cast<std::uint64_t>(bi * blocks + bi));
            std::int64_t row = 0;          // local u of the current row
            std::int64_t row_end = s - 1;  // flat index one past row `row`
            detail::bernoulli_indices(s * (s - 1) / 2, spec.p_in, rng, [&](std::int64_t t) {
                while (t >= row_end) {
                    ++row;
                    row_end += s - 1 - row;
                }
                const std::int64_t v = t - (row_end - (s - 1 - row)) + row + 1;
                edges.emplace_back(static_cast<NodeId>(bi * s + row),
                                   static_cast<NodeId>(bi * s + v));
            });
        }
        // Cross-block pairs against every later block: an s x s rectangle.
        for (std::int64_t bj = bi + 1; bj < blocks; ++bj) {
            Rng rng = base.fork(static_cast<std::uint64_t>(bi * blocks + bj));
            detail::bernoulli_indices(s * s, spec.p_out, rng, [&](std::int64_t t) {
                edges.emplace_back(static_cast<NodeId>(bi * s + t / s),
                                   static_cast<NodeId>(bj * s + t % s));
            });
        }
    }

    std::vector<std::int64_t> labels(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i / s;
    return {build_graph(n, edges), std::move(labels)};
}

}  // namespace subgae
