#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subgae/linalg.hpp"

namespace subgae {

using NodeId = std::int32_t;
using EdgePair = std::pair<NodeId, NodeId>;  // canonical: first < second

// Immutable undirected simple graph in CSR form. Both directions of every
// edge are stored; within each row the column indices are strictly
// increasing. Node ids are compact 0..n-1; the original labels from the
// input file are kept in node_ids.
struct Graph {
    std::int64_t n = 0;
    std::int64_t m = 0;                      // undirected edge count
    std::vector<std::int64_t> row_offsets;   // size n+1
    std::vector<NodeId> col_indices;         // size 2m
    std::vector<std::int64_t> node_ids;      // compact id -> original id

    std::int64_t degree(NodeId v) const {
        return row_offsets[v + 1] - row_offsets[v];
    }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {col_indices.data() + row_offsets[v],
                static_cast<std::size_t>(degree(v))};
    }

    bool has_edge(NodeId u, NodeId v) const {
        const auto nb = neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    // Undirected edges, each reported once with u < v, in row order.
    std::vector<EdgePair> edges() const {
        std::vector<EdgePair> out;
        out.reserve(static_cast<std::size_t>(m));
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v : neighbors(u))
                if (u < v) out.emplace_back(u, v);
        return out;
    }
};

// Builds a Graph over nodes 0..n-1 from an arbitrary edge list: directions
// are ignored, self-loops dropped, duplicates collapsed. `original_ids`
// (optional) supplies the id map; identity when empty.
inline Graph build_graph(std::int64_t n, const std::vector<EdgePair>& edges,
                         std::vector<std::int64_t> original_ids = {}) {
    if (n <= 0) throw std::invalid_argument("build_graph: graph has zero nodes");
    std::vector<EdgePair> directed;
    directed.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("build_graph: node index out of range");
        if (u == v) continue;
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

    Graph g;
    g.n = n;
    g.m = static_cast<std::int64_t>(directed.size()) / 2;
    g.row_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    g.col_indices.reserve(directed.size());
    for (auto [u, v] : directed) {
        g.row_offsets[static_cast<std::size_t>(u) + 1]++;
        g.col_indices.push_back(v);
    }
    std::partial_sum(g.row_offsets.begin(), g.row_offsets.end(), g.row_offsets.begin());
    if (original_ids.empty()) {
        g.node_ids.resize(static_cast<std::size_t>(n));
        std::iota(g.node_ids.begin(), g.node_ids.end(), 0);
    } else {
        if (static_cast<std::int64_t>(original_ids.size()) != n)
            throw std::invalid_argument("build_graph: id map size mismatch");
        g.node_ids = std::move(original_ids);
    }
    return g;
}

// d_i = number of neighbors of i.
inline std::vector<std::int64_t> degrees(const Graph& g) {
    std::vector<std::int64_t> d(static_cast<std::size_t>(g.n));
    for (NodeId v = 0; v < g.n; ++v) d[static_cast<std::size_t>(v)] = g.degree(v);
    return d;
}

// Core numbers by linear-time bucket peeling: nodes are kept sorted by
// current degree in `vert` with per-degree bucket starts in `bin`; peeling a
// node moves each higher-degree neighbor one bucket down by swapping it with
// the first element of its bucket.
inline std::vector<std::int64_t> core_numbers(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.n);
    std::vector<std::int64_t> deg = degrees(g);
    const std::int64_t max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());

    std::vector<std::int64_t> bin(static_cast<std::size_t>(max_deg) + 2, 0);
    for (auto d : deg) bin[static_cast<std::size_t>(d)]++;
    std::int64_t start = 0;
    for (auto& b : bin) {
        const auto count = b;
        b = start;
        start += count;
    }
    std::vector<NodeId> vert(n);
    std::vector<std::int64_t> pos(n);
    for (NodeId v = 0; v < g.n; ++v) {
        const auto d = static_cast<std::size_t>(deg[static_cast<std::size_t>(v)]);
        pos[static_cast<std::size_t>(v)] = bin[d];
        vert[static_cast<std::size_t>(bin[d])] = v;
        bin[d]++;
    }
    for (std::size_t d = bin.size() - 1; d > 0; --d) bin[d] = bin[d - 1];
    bin[0] = 0;

    std::vector<std::int64_t> core(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        const NodeId v = vert[idx];
        core[static_cast<std::size_t>(v)] = deg[static_cast<std::size_t>(v)];
        for (NodeId u : g.neighbors(v)) {
            const auto su = static_cast<std::size_t>(u);
            if (deg[su] > deg[static_cast<std::size_t>(v)]) {
                const auto du = static_cast<std::size_t>(deg[su]);
                const auto pu = pos[su];
                const auto pw = bin[du];
                const NodeId w = vert[static_cast<std::size_t>(pw)];
                if (u != w) {
                    pos[su] = pw;
                    pos[static_cast<std::size_t>(w)] = pu;
                    vert[static_cast<std::size_t>(pu)] = w;
                    vert[static_cast<std::size_t>(pw)] = u;
                }
                bin[du]++;
                deg[su]--;
            }
        }
    }
    return core;
}

// Node features: X = I_n (one-hot per node) or an explicit dense n x f
// matrix.
struct NodeFeatures {
    enum class Kind { Identity, Dense };
    Kind kind = Kind::Identity;
    std::int64_t n = 0;
    Matrix dense;  // n x f when kind == Dense

    static NodeFeatures identity(std::int64_t n) {
        NodeFeatures x;
        x.kind = Kind::Identity;
        x.n = n;
        return x;
    }
    static NodeFeatures from_dense(Matrix values) {
        NodeFeatures x;
        x.kind = Kind::Dense;
        x.n = values.rows();
        x.dense = std::move(values);
        return x;
    }
    // Width of X: n for identity features, f for dense ones.
    std::int64_t dim() const {
        return kind == Kind::Identity ? n : dense.cols();
    }
};

// CSR form of the symmetric normalization D^{-1/2} (A + I) D^{-1/2} where D
// holds the A+I row sums; entry (i,j) is 1/sqrt((d_i+1)(d_j+1)) and every
// diagonal entry is present (isolated nodes get exactly 1).
struct NormalizedAdjacency {
    std::int64_t n = 0;
    std::vector<std::int64_t> row_offsets;  // size n+1
    std::vector<NodeId> col_indices;        // 2m + n entries, sorted per row
    std::vector<double> values;

    // Y = A_norm * X, O(nnz * cols).
    Matrix multiply(const Matrix& x) const {
        Matrix y = Matrix::Zero(n, x.cols());
        for (NodeId i = 0; i < n; ++i) {
            auto yi = y.row(i);
            for (std::int64_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
                yi += values[static_cast<std::size_t>(k)] * x.row(col_indices[static_cast<std::size_t>(k)]);
        }
        return y;
    }
};

inline NormalizedAdjacency normalize_adjacency(const Graph& g) {
    NormalizedAdjacency a;
    a.n = g.n;
    a.row_offsets.assign(static_cast<std::size_t>(g.n) + 1, 0);
    a.col_indices.reserve(static_cast<std::size_t>(2 * g.m + g.n));
    a.values.reserve(static_cast<std::size_t>(2 * g.m + g.n));

    std::vector<double> inv_sqrt(static_cast<std::size_t>(g.n));
    for (NodeId v = 0; v < g.n; ++v)
        inv_sqrt[static_cast<std::size_t>(v)] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));

    for (NodeId i = 0; i < g.n; ++i) {
        bool diag_done = false;
        for (NodeId j : g.neighbors(i)) {
            if (!diag_done && j > i) {
                a.col_indices.push_back(i);
                a.values.push_back(inv_sqrt[static_cast<std::size_t>(i)] * inv_sqrt[static_cast<std::size_t>(i)]);
                diag_done = true;
            }
            a.col_indices.push_back(j);
            a.values.push_back(inv_sqrt[static_cast<std::size_t>(i)] * inv_sqrt[static_cast<std::size_t>(j)]);
        }
        if (!diag_done) {
            a.col_indices.push_back(i);
            a.values.push_back(inv_sqrt[static_cast<std::size_t>(i)] * inv_sqrt[static_cast<std::size_t>(i)]);
        }
        a.row_offsets[static_cast<std::size_t>(i) + 1] = static_cast<std::int64_t>(a.col_indices.size());
    }
    return a;
}

}  // namespace subgae
