#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "subgae/graph.hpp"
#include "subgae/random.hpp"

namespace subgae {

// Link-prediction split: hidden positive edges for validation/test plus
// equal-count sampled non-edges. The train graph keeps every node (isolated
// nodes may appear after removal); connectivity is not enforced.
struct EdgeSplit {
    Graph train_graph;
    std::vector<EdgePair> val_pos, val_neg, test_pos, test_neg;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::int64_t pair_key(std::int64_t n, NodeId u, NodeId v) {
    return static_cast<std::int64_t>(u) * n + v;  // assumes u < v < n
}

}  // namespace detail

// Removes round(val_frac*m) + round(test_frac*m) edges uniformly at random
// as positives and pairs them with uniformly sampled non-edges of the
// ORIGINAL graph. Deterministic per seed.
inline EdgeSplit split_edges(const Graph& g, double val_frac, double test_frac,
                             std::uint64_t seed) {
    if (val_frac < 0 || test_frac < 0 || val_frac + test_frac >= 1.0)
        throw std::invalid_argument("split_edges: need 0 <= val_frac + test_frac < 1");

    std::vector<EdgePair> edges = g.edges();
    Rng rng(mix_seed(seed ^ 0x5eedc0de5eedc0deULL));
    // Fisher-Yates shuffle.
    for (std::int64_t i = static_cast<std::int64_t>(edges.size()) - 1; i > 0; --i)
        std::swap(edges[static_cast<std::size_t>(i)],
                  edges[static_cast<std::size_t>(rng.uniform_int(i + 1))]);

    const auto n_val = static_cast<std::int64_t>(std::llround(val_frac * static_cast<double>(g.m)));
    const auto n_test = static_cast<std::int64_t>(std::llround(test_frac * static_cast<double>(g.m)));

    EdgeSplit split;
    split.seed = seed;
    split.val_pos.assign(edges.begin(), edges.begin() + n_val);
    split.test_pos.assign(edges.begin() + n_val, edges.begin() + n_val + n_test);
    const std::vector<EdgePair> train_edges(edges.begin() + n_val + n_test, edges.end());
    split.train_graph = build_graph(g.n, train_edges, g.node_ids);

    // Negatives: rejection against the original edge set; one `used` set
    // keeps val and test negatives disjoint from each other too.
    std::unordered_set<std::int64_t> edge_keys;
    edge_keys.reserve(static_cast<std::size_t>(g.m) * 2);
    for (auto [u, v] : g.edges()) edge_keys.insert(detail::pair_key(g.n, u, v));
    std::unordered_set<std::int64_t> used;

    auto draw_negatives = [&](std::int64_t count, std::vector<EdgePair>& out) {
        const std::int64_t max_attempts = 1000 * count;
        std::int64_t attempts = 0;
        while (static_cast<std::int64_t>(out.size()) < count) {
            if (attempts++ >= max_attempts)
                throw std::runtime_error(
                    "split_edges: could not find enough non-edges (graph too dense)");
            auto u = static_cast<NodeId>(rng.uniform_int(g.n));
            auto v = static_cast<NodeId>(rng.uniform_int(g.n));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            const auto key = detail::pair_key(g.n, u, v);
            if (edge_keys.contains(key) || !used.insert(key).second) continue;
            out.emplace_back(u, v);
        }
    };
    draw_negatives(n_val, split.val_neg);
    draw_negatives(n_test, split.test_neg);
    return split;
}

}  // namespace subgae
