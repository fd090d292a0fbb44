#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subgae/linalg.hpp"
#include "subgae/random.hpp"

namespace subgae {

// Decoder outputs on held-out positive and negative pairs.
struct ScoredPairs {
    std::vector<double> pos_scores, neg_scores;
};

// Probability that a random positive outscores a random negative, ties
// counting 1/2; the Mann-Whitney rank statistic, O(N log N).
inline double auc(const ScoredPairs& sp) {
    const auto p = static_cast<std::int64_t>(sp.pos_scores.size());
    const auto q = static_cast<std::int64_t>(sp.neg_scores.size());
    if (p == 0 || q == 0) throw std::invalid_argument("auc: empty score vector");

    std::vector<std::pair<double, int>> all;
    all.reserve(static_cast<std::size_t>(p + q));
    for (double s : sp.pos_scores) all.emplace_back(s, 1);
    for (double s : sp.neg_scores) all.emplace_back(s, 0);
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (all[k].second == 1) pos_rank_sum += avg_rank;
        i = j;
    }
    return (pos_rank_sum - static_cast<double>(p) * (static_cast<double>(p) + 1.0) / 2.0) /
           (static_cast<double>(p) * static_cast<double>(q));
}

// Average precision = sum over the descending-score ranking of
// (recall increment) * (precision at that rank). Ties are ordered
// negatives-first (the pessimistic convention for tied scores).
inline double average_precision(const ScoredPairs& sp) {
    const auto p = static_cast<std::int64_t>(sp.pos_scores.size());
    if (p == 0 || sp.neg_scores.empty())
        throw std::invalid_argument("average_precision: empty score vector");

    std::vector<std::pair<double, int>> all;
    all.reserve(sp.pos_scores.size() + sp.neg_scores.size());
    for (double s : sp.pos_scores) all.emplace_back(s, 1);
    for (double s : sp.neg_scores) all.emplace_back(s, 0);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;  // negatives ahead of positives within a tie
    });

    double ap = 0.0;
    std::int64_t tp = 0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (all[k].second == 1) {
            ++tp;
            ap += static_cast<double>(tp) / static_cast<double>(k + 1);
        }
    }
    return ap / static_cast<double>(p);
}

struct Clustering {
    std::vector<std::int32_t> assignments;  // length n, values in [0, k)
    Matrix centroids;                       // k x d
    double inertia = 0.0;
};

// Lloyd's algorithm from k-means++ seeding; deterministic per seed. Stops at
// an assignment fixpoint or after max_iters sweeps. A cluster that loses all
// points keeps its previous centroid.
inline Clustering kmeans(const Matrix& z, std::int64_t k, std::uint64_t seed,
                         std::int64_t max_iters = 100) {
    const std::int64_t n = z.rows();
    if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");

    Rng rng(mix_seed(seed ^ 0x6b'6d'65'61'6e'73ULL));  // "kmeans"
    Clustering result;
    result.centroids.resize(k, z.cols());

    // k-means++ seeding: next seed drawn with probability proportional to
    // squared distance from the chosen set.
    std::vector<double> d2(static_cast<std::size_t>(n));
    result.centroids.row(0) = z.row(rng.uniform_int(n));
    for (std::int64_t i = 0; i < n; ++i)
        d2[static_cast<std::size_t>(i)] = (z.row(i) - result.centroids.row(0)).squaredNorm();
    for (std::int64_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::int64_t idx;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            idx = n - 1;
            for (std::int64_t i = 0; i < n; ++i) {
                acc += d2[static_cast<std::size_t>(i)];
                if (acc > u) {
                    idx = i;
                    break;
                }
            }
        } else {
            idx = rng.uniform_int(n);  // every point already coincides with a seed
        }
        result.centroids.row(c) = z.row(idx);
        for (std::int64_t i = 0; i < n; ++i) {
            const double dist = (z.row(i) - result.centroids.row(c)).squaredNorm();
            auto& best = d2[static_cast<std::size_t>(i)];
            if (dist < best) best = dist;
        }
    }

    result.assignments.assign(static_cast<std::size_t>(n), -1);
    Matrix sums(k, z.cols());
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k));
    for (std::int64_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::int64_t i = 0; i < n; ++i) {
            std::int32_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::int64_t c = 0; c < k; ++c) {
                const double dist = (z.row(i) - result.centroids.row(c)).squaredNorm();
                if (dist < best_dist) {
                    best_dist = dist;
                    best = static_cast<std::int32_t>(c);
                }
            }
            if (result.assignments[static_cast<std::size_t>(i)] != best) {
                result.assignments[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed) break;
        sums.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (std::int64_t i = 0; i < n; ++i) {
            const auto c = result.assignments[static_cast<std::size_t>(i)];
            sums.row(c) += z.row(i);
            counts[static_cast<std::size_t>(c)]++;
        }
        for (std::int64_t c = 0; c < k; ++c)
            if (counts[static_cast<std::size_t>(c)] > 0)
                result.centroids.row(c) =
                    sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
    }

    result.inertia = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        result.inertia +=
            (z.row(i) - result.centroids.row(result.assignments[static_cast<std::size_t>(i)]))
                .squaredNorm();
    return result;
}

namespace detail {

inline double log_factorial(std::int64_t x) {
    return std::lgamma(static_cast<double>(x) + 1.0);
}

}  // namespace detail

// AMI = (MI - E[MI]) / (mean(H(a), H(b)) - E[MI]), with E[MI] under the
// hypergeometric permutation model evaluated with log-space factorials.
// Two single-cluster partitions (zero entropy on both sides) score 1.
inline double adjusted_mutual_information(const std::vector<std::int64_t>& pred,
                                          const std::vector<std::int64_t>& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("adjusted_mutual_information: length mismatch");
    if (pred.empty())
        throw std::invalid_argument("adjusted_mutual_information: empty labelings");
    const auto n = static_cast<std::int64_t>(pred.size());

    auto compact = [](const std::vector<std::int64_t>& labels) {
        std::unordered_map<std::int64_t, std::int64_t> ids;
        std::vector<std::int64_t> out(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto [it, fresh] = ids.try_emplace(labels[i], static_cast<std::int64_t>(ids.size()));
            out[i] = it->second;
        }
        return std::pair{out, static_cast<std::int64_t>(ids.size())};
    };
    const auto [pa, r] = compact(pred);
    const auto [pb, c] = compact(truth);
    if (r == 1 && c == 1) return 1.0;

    std::vector<std::int64_t> table(static_cast<std::size_t>(r * c), 0);
    std::vector<std::int64_t> a(static_cast<std::size_t>(r), 0), b(static_cast<std::size_t>(c), 0);
    for (std::int64_t i = 0; i < n; ++i) {
        table[static_cast<std::size_t>(pa[static_cast<std::size_t>(i)] * c +
                                       pb[static_cast<std::size_t>(i)])]++;
        a[static_cast<std::size_t>(pa[static_cast<std::size_t>(i)])]++;
        b[static_cast<std::size_t>(pb[static_cast<std::size_t>(i)])]++;
    }

    const double dn = static_cast<double>(n);
    double mi = 0.0;
    for (std::int64_t i = 0; i < r; ++i)
        for (std::int64_t j = 0; j < c; ++j) {
            const auto nij = table[static_cast<std::size_t>(i * c + j)];
            if (nij == 0) continue;
            mi += (static_cast<double>(nij) / dn) *
                  (std::log(static_cast<double>(nij) * dn) -
                   std::log(static_cast<double>(a[static_cast<std::size_t>(i)]) *
                            static_cast<double>(b[static_cast<std::size_t>(j)])));
        }
    auto entropy = [&](const std::vector<std::int64_t>& counts) {
        double h = 0.0;
        for (auto v : counts)
            if (v > 0) h -= (static_cast<double>(v) / dn) * std::log(static_cast<double>(v) / dn);
        return h;
    };
    const double h_a = entropy(a), h_b = entropy(b);

    double emi = 0.0;
    for (std::int64_t i = 0; i < r; ++i) {
        const auto ai = a[static_cast<std::size_t>(i)];
        for (std::int64_t j = 0; j < c; ++j) {
            const auto bj = b[static_cast<std::size_t>(j)];
            const auto lo = std::max<std::int64_t>(1, ai + bj - n);
            const auto hi = std::min(ai, bj);
            for (std::int64_t nij = lo; nij <= hi; ++nij) {
                const double log_prob =
                    detail::log_factorial(ai) + detail::log_factorial(bj) +
                    detail::log_factorial(n - ai) + detail::log_factorial(n - bj) -
                    detail::log_factorial(n) - detail::log_factorial(nij) -
                    detail::log_factorial(ai - nij) - detail::log_factorial(bj - nij) -
                    detail::log_factorial(n - ai - bj + nij);
                emi += (static_cast<double>(nij) / dn) *
                       (std::log(static_cast<double>(nij) * dn) -
                        std::log(static_cast<double>(ai) * static_cast<double>(bj))) *
                       std::exp(log_prob);
            }
        }
    }

    const double normalizer = 0.5 * (h_a + h_b);
    double denom = normalizer - emi;
    constexpr double tiny = std::numeric_limits<double>::epsilon();
    denom = denom < 0 ? std::min(denom, -tiny) : std::max(denom, tiny);
    return (mi - emi) / denom;
}

}  // namespace subgae
