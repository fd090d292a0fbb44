#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "subgae/graph.hpp"
#include "subgae/io.hpp"
#include "subgae/random.hpp"
#include "subgae/split.hpp"

using namespace subgae;
namespace fs = std::filesystem;

namespace {

fs::path write_tmp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / ("subgae_graph_" + name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

Graph random_graph(std::int64_t n, double p, Rng& rng) {
    std::vector<EdgePair> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.uniform() < p) edges.emplace_back(u, v);
    return build_graph(n, edges);
}

// Reference core decomposition: repeatedly delete a minimum-degree node,
// recomputing degrees; a node's core number is the largest minimum degree
// seen up to its removal.
std::vector<std::int64_t> core_oracle(const Graph& g) {
    std::vector<std::set<NodeId>> adj(static_cast<std::size_t>(g.n));
    for (NodeId u = 0; u < g.n; ++u)
        for (NodeId v : g.neighbors(u)) adj[static_cast<std::size_t>(u)].insert(v);
    std::vector<bool> removed(static_cast<std::size_t>(g.n), false);
    std::vector<std::int64_t> core(static_cast<std::size_t>(g.n), 0);
    std::int64_t k = 0;
    for (std::int64_t step = 0; step < g.n; ++step) {
        NodeId best = -1;
        std::int64_t best_deg = g.n + 1;
        for (NodeId v = 0; v < g.n; ++v)
            if (!removed[static_cast<std::size_t>(v)] &&
                static_cast<std::int64_t>(adj[static_cast<std::size_t>(v)].size()) < best_deg) {
                best = v;
                best_deg = static_cast<std::int64_t>(adj[static_cast<std::size_t>(v)].size());
            }
        k = std::max(k, best_deg);
        core[static_cast<std::size_t>(best)] = k;
        removed[static_cast<std::size_t>(best)] = true;
        for (NodeId u : adj[static_cast<std::size_t>(best)])
            adj[static_cast<std::size_t>(u)].erase(best);
        adj[static_cast<std::size_t>(best)].clear();
    }
    return core;
}

}  // namespace

TEST_CASE("edge list loader dedupes, symmetrizes, drops self-loops") {
    const auto dup = write_tmp("dup.txt", "0 1\n1 0\n0 1\n");
    Graph g = load_edge_list(dup.string());
    CHECK(g.n == 2);
    CHECK(g.m == 1);

    const auto tri = write_tmp("tri.txt", "0 1\n1 2\n2 0\n");
    g = load_edge_list(tri.string());
    CHECK(g.n == 3);
    CHECK(g.m == 3);

    const auto self = write_tmp("self.txt", "5 5\n");
    g = load_edge_list(self.string());
    CHECK(g.n == 1);
    CHECK(g.m == 0);
    CHECK(g.node_ids == std::vector<std::int64_t>{5});
}

TEST_CASE("edge list loader ids are first-appearance order") {
    const auto path = write_tmp("ids.txt", "# comment\n% comment\n10 7\n7 3\n");
    const Graph g = load_edge_list(path.string());
    CHECK(g.n == 3);
    CHECK(g.m == 2);
    CHECK(g.node_ids == std::vector<std::int64_t>{10, 7, 3});
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("edge list loader errors") {
    CHECK_THROWS(load_edge_list("/nonexistent/file.txt"));
    const auto bad = write_tmp("bad.txt", "0 1\nfoo bar\n");
    CHECK_THROWS_WITH(load_edge_list(bad.string()), Catch::Matchers::ContainsSubstring("2"));
    const auto missing = write_tmp("half.txt", "0\n");
    CHECK_THROWS(load_edge_list(missing.string()));
    const auto empty = write_tmp("empty.txt", "# nothing\n");
    CHECK_THROWS(load_edge_list(empty.string()));
}

TEST_CASE("build_graph validates input") {
    CHECK_THROWS(build_graph(0, {}));
    CHECK_THROWS(build_graph(2, {{0, 2}}));
    CHECK_THROWS(build_graph(2, {{-1, 0}}));
}

TEST_CASE("CSR invariants on random graphs") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const Graph g = random_graph(20, 0.2, rng);
        const auto d = degrees(g);
        std::int64_t total = 0;
        for (NodeId v = 0; v < g.n; ++v) {
            total += d[static_cast<std::size_t>(v)];
            CHECK(d[static_cast<std::size_t>(v)] == g.row_offsets[v + 1] - g.row_offsets[v]);
            const auto nbrs = g.neighbors(v);
            CHECK(std::is_sorted(nbrs.begin(), nbrs.end(),
                                 [](NodeId a, NodeId b) { return a <= b; }));
            for (NodeId u : nbrs) CHECK(g.has_edge(u, v));  // symmetry
        }
        CHECK(total == 2 * g.m);
    }
}

TEST_CASE("degrees examples") {
    CHECK(degrees(build_graph(3, {{0, 1}, {1, 2}, {0, 2}})) ==
          std::vector<std::int64_t>{2, 2, 2});
    CHECK(degrees(build_graph(4, {{0, 1}, {0, 2}, {0, 3}})) ==
          std::vector<std::int64_t>{3, 1, 1, 1});
    CHECK(degrees(build_graph(3, {})) == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("adjacency normalization examples") {
    SECTION("single edge: all four stored entries are 0.5") {
        const auto a = normalize_adjacency(build_graph(2, {{0, 1}}));
        REQUIRE(a.values.size() == 4);
        for (double v : a.values) CHECK(v == Catch::Approx(0.5));
    }
    SECTION("isolated node gets a unit diagonal") {
        const auto a = normalize_adjacency(build_graph(3, {{0, 1}}));
        CHECK(a.row_offsets[3] - a.row_offsets[2] == 1);
        CHECK(a.col_indices[static_cast<std::size_t>(a.row_offsets[2])] == 2);
        CHECK(a.values[static_cast<std::size_t>(a.row_offsets[2])] == Catch::Approx(1.0));
    }
    SECTION("triangle: every entry including the diagonal is 1/3") {
        const auto a = normalize_adjacency(build_graph(3, {{0, 1}, {1, 2}, {0, 2}}));
        REQUIRE(a.values.size() == 9);
        for (double v : a.values) CHECK(v == Catch::Approx(1.0 / 3.0));
    }
    SECTION("entries are 1/sqrt((d_i+1)(d_j+1)) and diagonals present") {
        Rng rng(3);
        const Graph g = random_graph(15, 0.25, rng);
        const auto a = normalize_adjacency(g);
        const auto d = degrees(g);
        for (NodeId i = 0; i < g.n; ++i) {
            bool saw_diag = false;
            for (std::int64_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k) {
                const NodeId j = a.col_indices[static_cast<std::size_t>(k)];
                if (j == i) saw_diag = true;
                const double expect =
                    1.0 / std::sqrt(static_cast<double>((d[static_cast<std::size_t>(i)] + 1) *
                                                        (d[static_cast<std::size_t>(j)] + 1)));
                CHECK(a.values[static_cast<std::size_t>(k)] == Catch::Approx(expect));
            }
            CHECK(saw_diag);
        }
    }
    SECTION("regular graph rows sum to 1") {
        // 6-cycle: degree 2 everywhere, so each row has three entries of 1/3.
        const auto a = normalize_adjacency(
            build_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}}));
        for (NodeId i = 0; i < 6; ++i) {
            double sum = 0;
            for (std::int64_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
                sum += a.values[static_cast<std::size_t>(k)];
            CHECK(sum == Catch::Approx(1.0));
        }
    }
}

TEST_CASE("sparse multiply matches dense") {
    Rng rng(11);
    const Graph g = random_graph(12, 0.3, rng);
    const auto a = normalize_adjacency(g);
    Matrix dense = Matrix::Zero(g.n, g.n);
    for (NodeId i = 0; i < g.n; ++i)
        for (std::int64_t k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
            dense(i, a.col_indices[static_cast<std::size_t>(k)]) =
                a.values[static_cast<std::size_t>(k)];
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == Catch::Approx(0.0));
    Matrix x(g.n, 4);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    const Matrix via_csr = a.multiply(x);
    const Matrix via_dense = dense * x;
    CHECK((via_csr - via_dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("core number examples") {
    CHECK(core_numbers(build_graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}})) ==
          std::vector<std::int64_t>{2, 2, 2, 1});
    CHECK(core_numbers(build_graph(3, {{0, 1}, {1, 2}})) == std::vector<std::int64_t>{1, 1, 1});
    CHECK(core_numbers(build_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})) ==
          std::vector<std::int64_t>{3, 3, 3, 3});
    CHECK(core_numbers(build_graph(2, {})) == std::vector<std::int64_t>{0, 0});
}

TEST_CASE("core numbers match the peeling oracle on random graphs") {
    Rng rng(5);
    for (int rep = 0; rep < 25; ++rep) {
        const Graph g = random_graph(12, 0.3, rng);
        const auto fast = core_numbers(g);
        const auto slow = core_oracle(g);
        CHECK(fast == slow);
        const auto d = degrees(g);
        for (NodeId v = 0; v < g.n; ++v)
            CHECK(fast[static_cast<std::size_t>(v)] <= d[static_cast<std::size_t>(v)]);
    }
}

TEST_CASE("max-core subgraph has internal degree >= k") {
    Rng rng(13);
    const Graph g = random_graph(30, 0.2, rng);
    const auto core = core_numbers(g);
    const std::int64_t kmax = *std::max_element(core.begin(), core.end());
    for (NodeId v = 0; v < g.n; ++v) {
        if (core[static_cast<std::size_t>(v)] != kmax) continue;
        std::int64_t internal = 0;
        for (NodeId u : g.neighbors(v))
            if (core[static_cast<std::size_t>(u)] >= kmax) ++internal;
        CHECK(internal >= kmax);
    }
}

TEST_CASE("edge split counts and disjointness") {
    Rng rng(17);
    Graph g = random_graph(40, 0.15, rng);
    while (g.m < 100) g = random_graph(40, 0.2, rng);
    // Trim to exactly 100 edges for the documented example counts.
    auto all = g.edges();
    all.resize(100);
    g = build_graph(g.n, all);
    REQUIRE(g.m == 100);

    const EdgeSplit split = split_edges(g, 0.05, 0.10, 99);
    CHECK(split.val_pos.size() == 5);
    CHECK(split.test_pos.size() == 10);
    CHECK(split.val_neg.size() == 5);
    CHECK(split.test_neg.size() == 10);
    CHECK(split.train_graph.m == 85);
    CHECK(split.train_graph.n == g.n);

    std::set<EdgePair> seen;
    auto collect = [&](const std::vector<EdgePair>& pairs, bool must_be_edge) {
        for (auto [u, v] : pairs) {
            CHECK(u < v);
            CHECK(g.has_edge(u, v) == must_be_edge);
            CHECK_FALSE(split.train_graph.has_edge(u, v));
            CHECK(seen.insert({u, v}).second);  // pairwise disjoint
        }
    };
    collect(split.val_pos, true);
    collect(split.test_pos, true);
    collect(split.val_neg, false);
    collect(split.test_neg, false);
    for (auto [u, v] : split.train_graph.edges()) CHECK_FALSE(seen.count({u, v}));
}

TEST_CASE("edge split determinism and zero-fraction identity") {
    Rng rng(23);
    const Graph g = random_graph(25, 0.25, rng);
    const EdgeSplit a = split_edges(g, 0.1, 0.2, 5);
    const EdgeSplit b = split_edges(g, 0.1, 0.2, 5);
    CHECK(a.val_pos == b.val_pos);
    CHECK(a.val_neg == b.val_neg);
    CHECK(a.test_pos == b.test_pos);
    CHECK(a.test_neg == b.test_neg);
    CHECK(a.train_graph.col_indices == b.train_graph.col_indices);

    const EdgeSplit c = split_edges(g, 0.1, 0.2, 6);
    CHECK((a.test_pos != c.test_pos || a.val_pos != c.val_pos));

    const EdgeSplit zero = split_edges(g, 0.0, 0.0, 5);
    CHECK(zero.train_graph.m == g.m);
    CHECK(zero.train_graph.col_indices == g.col_indices);
    CHECK(zero.val_pos.empty());
    CHECK(zero.test_pos.empty());
}

TEST_CASE("edge split rejects bad fractions and overly dense requests") {
    Rng rng(29);
    const Graph g = random_graph(10, 0.5, rng);
    CHECK_THROWS(split_edges(g, 0.6, 0.5, 1));
    CHECK_THROWS(split_edges(g, -0.1, 0.1, 1));
    // Complete graph: no negatives exist at all.
    std::vector<EdgePair> all;
    for (NodeId u = 0; u < 5; ++u)
        for (NodeId v = u + 1; v < 5; ++v) all.emplace_back(u, v);
    const Graph k5 = build_graph(5, all);
    CHECK_THROWS(split_edges(k5, 0.0, 0.2, 1));
}

TEST_CASE("features CSV loader") {
    const auto path = write_tmp("feat.csv", "1.0,2.0\n3.5,-4\n0,0.25\n");
    const NodeFeatures x = load_features_csv(path.string(), 3);
    CHECK(x.kind == NodeFeatures::Kind::Dense);
    REQUIRE(x.dense.rows() == 3);
    REQUIRE(x.dense.cols() == 2);
    CHECK(x.dim() == 2);
    CHECK(x.dense(1, 0) == Catch::Approx(3.5));
    CHECK(x.dense(2, 1) == Catch::Approx(0.25));
    CHECK_THROWS(load_features_csv(path.string(), 4));  // row count mismatch
    const auto ragged = write_tmp("ragged.csv", "1,2\n3\n");
    CHECK_THROWS(load_features_csv(ragged.string(), 2));
    const auto junk = write_tmp("junk.csv", "1,abc\n");
    CHECK_THROWS(load_features_csv(junk.string(), 1));
}

TEST_CASE("label loader and writers") {
    const auto path = write_tmp("labels.txt", "0\n2\n1\n");
    const auto labels = load_labels(path.string(), 3);
    CHECK(labels == std::vector<std::int64_t>{0, 2, 1});
    CHECK_THROWS(load_labels(path.string(), 2));

    const Graph g = build_graph(3, {{0, 1}, {1, 2}});
    const auto edges_out = fs::temp_directory_path() / "subgae_graph_roundtrip.edges";
    save_edge_list(g, edges_out.string());
    const Graph g2 = load_edge_list(edges_out.string());
    CHECK(g2.n == g.n);
    CHECK(g2.m == g.m);
    CHECK(g2.col_indices == g.col_indices);

    const auto labels_out = fs::temp_directory_path() / "subgae_graph_roundtrip.labels";
    save_labels(labels, labels_out.string());
    CHECK(load_labels(labels_out.string(), 3) == labels);
}
