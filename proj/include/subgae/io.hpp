#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "subgae/graph.hpp"

namespace subgae {

namespace detail {

inline bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#' || c == '%';
    }
    return true;  // whitespace only
}

// Parses a non-negative integer starting at *p, advancing past it; returns
// false on anything that is not a plain digit run.
inline bool parse_uint(const char*& p, std::int64_t& out) {
    while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
    if (*p < '0' || *p > '9') return false;
    std::int64_t v = 0;
    while (*p >= '0' && *p <= '9') {
        v = v * 10 + (*p - '0');
        if (v < 0) return false;  // overflow
        ++p;
    }
    out = v;
    return true;
}

}  // namespace detail

// Reads a whitespace-separated edge list ("u v" per line; '#'/'%' comment
// lines and blank lines skipped). Node ids are remapped to 0..n-1 in first
// appearance order; duplicates, reversed duplicates, and self-loops are
// dropped.
inline Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read edge list: " + path);

    std::unordered_map<std::int64_t, NodeId> compact;
    std::vector<std::int64_t> original_ids;
    std::vector<EdgePair> edges;
    auto to_compact = [&](std::int64_t raw) {
        auto [it, fresh] = compact.try_emplace(raw, static_cast<NodeId>(original_ids.size()));
        if (fresh) original_ids.push_back(raw);
        return it->second;
    };

    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank_or_comment(line)) continue;
        const char* p = line.c_str();
        std::int64_t u = 0, v = 0;
        const bool ok = detail::parse_uint(p, u) && detail::parse_uint(p, v);
        if (ok) {
            while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
        }
        if (!ok || *p != '\0')
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": malformed edge line (expected two non-negative integers)");
        const NodeId cu = to_compact(u);  // sequenced: u registers before v
        const NodeId cv = to_compact(v);
        edges.emplace_back(cu, cv);
    }
    if (original_ids.empty())
        throw std::runtime_error(path + ": edge list contains zero nodes");
    const auto n = static_cast<std::int64_t>(original_ids.size());  // before the move below
    return build_graph(n, edges, std::move(original_ids));
}

// CSV of n rows and f real columns, no header; row i = features of compact
// node i.
inline NodeFeatures load_features_csv(const std::string& path, std::int64_t n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read features: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
            if (end == cell.c_str() || (end && *end != '\0') || errno == ERANGE)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": malformed feature value '" + cell + "'");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": ragged feature row");
        rows.push_back(std::move(row));
    }
    if (static_cast<std::int64_t>(rows.size()) != n)
        throw std::runtime_error(path + ": feature row count " + std::to_string(rows.size()) +
                                 " does not match node count " + std::to_string(n));
    Matrix x(n, static_cast<std::int64_t>(rows.front().size()));
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < x.cols(); ++j)
            x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return NodeFeatures::from_dense(std::move(x));
}

// One integer per line; line i = label of compact node i.
inline std::vector<std::int64_t> load_labels(const std::string& path, std::int64_t n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read labels: " + path);
    std::vector<std::int64_t> labels;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::blank_or_comment(line)) continue;
        errno = 0;
        char* end = nullptr;
        const long long v = std::strtoll(line.c_str(), &end, 10);
        while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == line.c_str() || (end && *end != '\0') || errno == ERANGE)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed label");
        labels.push_back(v);
    }
    if (static_cast<std::int64_t>(labels.size()) != n)
        throw std::runtime_error(path + ": label count " + std::to_string(labels.size()) +
                                 " does not match node count " + std::to_string(n));
    return labels;
}

// Writes each undirected edge once as "u v"; node ids are the compact ids.
inline void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path);
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline void save_labels(const std::vector<std::int64_t>& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write labels: " + path);
    for (auto l : labels) out << l << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace subgae
