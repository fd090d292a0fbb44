#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subgae/graph.hpp"
#include "subgae/linalg.hpp"
#include "subgae/random.hpp"

namespace subgae {

enum class Measure { Uniform, Degree, Core };

// Per-node sampling probabilities p_i = f(i)^alpha / sum_j f(j)^alpha, where
// f is constant 1, the degree, or the core number.
struct ImportanceDistribution {
    Measure measure = Measure::Uniform;
    double sharpening_alpha = 1.0;
    std::vector<double> probs;

    std::int64_t n() const { return static_cast<std::int64_t>(probs.size()); }
    std::int64_t support_size() const {
        return static_cast<std::int64_t>(
            std::count_if(probs.begin(), probs.end(), [](double p) { return p > 0.0; }));
    }
};

namespace detail {

inline double kahan_sum(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace detail

inline ImportanceDistribution build_distribution(const Graph& g, Measure measure,
                                                 double sharpening_alpha) {
    if (sharpening_alpha < 0)
        throw std::invalid_argument("build_distribution: sharpening exponent must be >= 0");
    ImportanceDistribution dist;
    dist.measure = measure;
    dist.sharpening_alpha = sharpening_alpha;
    dist.probs.assign(static_cast<std::size_t>(g.n), 0.0);

    // alpha = 0 flattens any measure to uniform (f^0 = 1 for every node,
    // zero-importance nodes included).
    if (measure == Measure::Uniform || sharpening_alpha == 0.0) {
        std::fill(dist.probs.begin(), dist.probs.end(), 1.0 / static_cast<double>(g.n));
        return dist;
    }

    const std::vector<std::int64_t> f =
        measure == Measure::Degree ? degrees(g) : core_numbers(g);
    for (std::size_t i = 0; i < dist.probs.size(); ++i)
        dist.probs[i] = std::pow(static_cast<double>(f[i]), sharpening_alpha);
    const double total = detail::kahan_sum(dist.probs);
    if (total <= 0.0)
        throw std::invalid_argument("build_distribution: importance is zero for every node");
    for (double& p : dist.probs) p /= total;
    // Second normalization pass tightens the sum to 1 after rounding.
    const double check = detail::kahan_sum(dist.probs);
    for (double& p : dist.probs) p /= check;
    return dist;
}

enum class ThresholdLoss { CrossEntropy, Frobenius };

// Parameters of the concentration-derived subgraph size: deviation gamma,
// two-sided confidence level, and the cap epsilon on decoded probabilities
// that bounds each per-pair loss term.
struct ThresholdParams {
    double gamma = 1.0;
    double confidence_alpha = 0.1;
    double epsilon = 0.001;
    ThresholdLoss loss_kind = ThresholdLoss::CrossEntropy;
};

// Smallest subgraph size guaranteeing the loss deviation bound: round(C*sqrt(n))
// with C = sqrt(-ln(confidence/2) * ln(eps)^2 / (2 gamma^2)) for the
// cross-entropy loss and C' = sqrt(-ln(confidence/2) / (2 gamma^2)) for the
// Frobenius loss. Result is clamped to [1, n].
inline std::int64_t threshold_subgraph_size(std::int64_t n, const ThresholdParams& params = {}) {
    if (n < 1) throw std::invalid_argument("threshold_subgraph_size: n must be >= 1");
    if (params.gamma <= 0 || params.confidence_alpha <= 0 || params.confidence_alpha >= 1 ||
        params.epsilon <= 0 || params.epsilon >= 1)
        throw std::invalid_argument("threshold_subgraph_size: invalid parameters");
    const double a = -std::log(params.confidence_alpha / 2.0);
    double c;
    if (params.loss_kind == ThresholdLoss::CrossEntropy) {
        const double le = std::log(params.epsilon);
        c = std::sqrt(a * le * le / (2.0 * params.gamma * params.gamma));
    } else {
        c = std::sqrt(a / (2.0 * params.gamma * params.gamma));
    }
    const auto r = static_cast<std::int64_t>(std::llround(c * std::sqrt(static_cast<double>(n))));
    return std::clamp<std::int64_t>(r, 1, n);
}

// A sampled node set plus the edges it induces, as index pairs (a, b) with
// a < b into `nodes`. `nodes` preserves draw order; with-replacement samples
// may repeat nodes.
struct SubgraphSample {
    std::vector<NodeId> nodes;
    std::int64_t n_s = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> pos_pairs;
};

// Draws n_s node ids from the distribution. Without replacement this matches
// sequential renormalized draws (p_i / sum of remaining p): each node gets an
// exponential key Exp(1)/p_i and the n_s smallest keys win, in key order.
inline std::vector<NodeId> sample_node_ids(const ImportanceDistribution& dist,
                                           std::int64_t n_s, bool replacement, Rng& rng) {
    const auto n = dist.n();
    if (n_s < 1) throw std::invalid_argument("sample_node_ids: n_s must be >= 1");
    std::vector<NodeId> nodes;
    nodes.reserve(static_cast<std::size_t>(n_s));

    if (replacement) {
        std::vector<double> cdf(dist.probs.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < dist.probs.size(); ++i) {
            acc += dist.probs[i];
            cdf[i] = acc;
        }
        for (std::int64_t k = 0; k < n_s; ++k) {
            const double u = rng.uniform() * acc;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            if (it == cdf.end()) --it;
            nodes.push_back(static_cast<NodeId>(it - cdf.begin()));
        }
        return nodes;
    }

    if (n_s > dist.support_size())
        throw std::invalid_argument(
            "sample_node_ids: n_s exceeds the number of positive-probability nodes");
    std::vector<std::pair<double, NodeId>> keyed;
    keyed.reserve(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) {
        const double p = dist.probs[static_cast<std::size_t>(i)];
        const double e = rng.exponential();  // one draw per node, in node order
        if (p > 0.0) keyed.emplace_back(e / p, i);
    }
    const auto mid = keyed.begin() + static_cast<std::ptrdiff_t>(n_s);
    std::nth_element(keyed.begin(), mid - 1, keyed.end());
    std::sort(keyed.begin(), mid);
    for (auto it = keyed.begin(); it != mid; ++it) nodes.push_back(it->second);
    return nodes;
}

// Edges of g with both endpoints in `nodes`, reported once as sample-index
// pairs (a, b), a < b. O(sum of degrees over the sample).
inline std::vector<std::pair<std::int32_t, std::int32_t>> induced_pairs(
    const Graph& g, const std::vector<NodeId>& nodes) {
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    // Repeated nodes (with-replacement samples) need a position multi-map;
    // the common distinct-nodes case uses a flat position array.
    const bool distinct = [&] {
        std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
        for (NodeId v : nodes) {
            if (seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
        return true;
    }();
    if (distinct) {
        std::vector<std::int32_t> position(static_cast<std::size_t>(g.n), -1);
        for (std::size_t a = 0; a < nodes.size(); ++a)
            position[static_cast<std::size_t>(nodes[a])] = static_cast<std::int32_t>(a);
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (NodeId v : g.neighbors(nodes[a])) {
                const auto b = position[static_cast<std::size_t>(v)];
                if (b > static_cast<std::int32_t>(a))
                    pairs.emplace_back(static_cast<std::int32_t>(a), b);
            }
        return pairs;
    }
    std::unordered_map<NodeId, std::vector<std::int32_t>> position;
    for (std::size_t a = 0; a < nodes.size(); ++a)
        position[nodes[a]].push_back(static_cast<std::int32_t>(a));
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (NodeId v : g.neighbors(nodes[a])) {
            auto it = position.find(v);
            if (it == position.end()) continue;
            for (auto b : it->second)
                if (b > static_cast<std::int32_t>(a))
                    pairs.emplace_back(static_cast<std::int32_t>(a), b);
        }
    return pairs;
}

inline SubgraphSample sample_nodes(const Graph& g, const ImportanceDistribution& dist,
                                   std::int64_t n_s, bool replacement, Rng& rng) {
    SubgraphSample s;
    s.nodes = sample_node_ids(dist, n_s, replacement, rng);
    s.n_s = static_cast<std::int64_t>(s.nodes.size());
    s.pos_pairs = induced_pairs(g, s.nodes);
    return s;
}

// Closed-form inclusion probabilities for with-replacement sampling.
// Node form: 1 - (1-p_i)^{n_s}. Pair form (i != j):
// 1 - [(1-p_i)^{n_s} + (1-p_j)^{n_s} - (1-p_i-p_j)^{n_s}]. A self-pair (i,i)
// reduces to the node form.
inline double inclusion_prob_with_replacement(const ImportanceDistribution& dist,
                                              std::int64_t n_s, NodeId i, NodeId j = -1) {
    const auto n = dist.n();
    if (i < 0 || i >= n || j >= n) throw std::invalid_argument("inclusion probability: bad index");
    if (n_s < 1) throw std::invalid_argument("inclusion probability: n_s must be >= 1");
    const double pi = dist.probs[static_cast<std::size_t>(i)];
    const auto e = static_cast<double>(n_s);
    if (j < 0 || j == i) return 1.0 - std::pow(1.0 - pi, e);
    const double pj = dist.probs[static_cast<std::size_t>(j)];
    return 1.0 - (std::pow(1.0 - pi, e) + std::pow(1.0 - pj, e) - std::pow(1.0 - pi - pj, e));
}

// Exact inclusion probabilities for without-replacement sampling, by
// enumerating ordered draw prefixes. A prefix (u_1..u_k) has probability
// prod_t p_{u_t} / (1 - sum_{s<t} p_{u_s}); once the queried nodes have all
// appeared, every completion of the prefix is included, so the prefix
// probability is added and the branch stops.
inline double inclusion_prob_exact(const ImportanceDistribution& dist, std::int64_t n_s,
                                   NodeId i, NodeId j = -1) {
    const auto n = dist.n();
    if (i < 0 || i >= n || j >= n) throw std::invalid_argument("inclusion probability: bad index");
    if (j < 0) j = i;  // self-pair == node inclusion
    const auto support = dist.support_size();
    if (n_s < 1 || n_s > support)
        throw std::invalid_argument("inclusion_prob_exact: n_s outside [1, support size]");
    double tuples = 1.0;
    for (std::int64_t k = 0; k < n_s; ++k) tuples *= static_cast<double>(support - k);
    if (tuples > 5e7)
        throw std::invalid_argument("inclusion_prob_exact: instance too large for enumeration");

    if (dist.probs[static_cast<std::size_t>(i)] <= 0.0 ||
        dist.probs[static_cast<std::size_t>(j)] <= 0.0)
        return 0.0;

    double total = 0.0;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, std::int64_t depth, double prob, double prefix_sum,
                   bool have_i, bool have_j) -> void {
        if (have_i && have_j) {
            total += prob;
            return;
        }
        if (depth == n_s) return;
        const double denom = 1.0 - prefix_sum;
        for (NodeId u = 0; u < n; ++u) {
            const double pu = dist.probs[static_cast<std::size_t>(u)];
            if (used[static_cast<std::size_t>(u)] || pu <= 0.0) continue;
            used[static_cast<std::size_t>(u)] = 1;
            self(self, depth + 1, prob * pu / denom, prefix_sum + pu,
                 have_i || u == i, have_j || u == j);
            used[static_cast<std::size_t>(u)] = 0;
        }
    };
    rec(rec, 0, 1.0, 0.0, false, false);
    return total;
}

// Expected value of the subgraph-restricted loss:
// (1/n_s^2) * sum over ordered pairs (i,j) of P((i,j) in V_S^2) * L_ij,
// with the diagonal using the node inclusion probability.
inline double expected_subgraph_loss(const ImportanceDistribution& dist, std::int64_t n_s,
                                     const Matrix& losses, bool replacement) {
    const auto n = dist.n();
    if (losses.rows() != n || losses.cols() != n)
        throw std::invalid_argument("expected_subgraph_loss: loss matrix must be n x n");
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
            const double q = replacement
                                 ? inclusion_prob_with_replacement(dist, n_s, i, j)
                                 : inclusion_prob_exact(dist, n_s, i, j);
            total += q * losses(i, j);
        }
    }
    return total / (static_cast<double>(n_s) * static_cast<double>(n_s));
}

}  // namespace subgae
