#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "subgae/graph.hpp"
#include "subgae/linalg.hpp"
#include "subgae/random.hpp"
#include "subgae/sampler.hpp"

namespace subgae {

enum class ModelKind { AE, VAE };

// Two-layer GCN encoder weights. The VAE variant shares the first layer and
// carries separate mean / log-sigma output heads.
struct GcnModel {
    ModelKind kind = ModelKind::AE;
    Matrix w0;                 // f x h
    Matrix w1;                 // h x d (AE only)
    Matrix w1_mu, w1_sigma;    // h x d (VAE only)

    std::int64_t feature_dim() const { return w0.rows(); }
    std::int64_t hidden_dim() const { return w0.cols(); }
    std::int64_t embed_dim() const {
        return kind == ModelKind::AE ? w1.cols() : w1_mu.cols();
    }
};

namespace detail {

constexpr std::uint64_t kGlorotStream = 0x67'6c'6f'72'6f'74ULL;  // "glorot"

inline Matrix glorot_matrix(std::int64_t rows, std::int64_t cols, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix w(rows, cols);
    for (std::int64_t r = 0; r < rows; ++r)
        for (std::int64_t c = 0; c < cols; ++c)
            w(r, c) = (2.0 * rng.uniform() - 1.0) * bound;
    return w;
}

inline double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

inline double softplus(double s) {
    return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
}

}  // namespace detail

// Uniform(-b, b) init with b = sqrt(6 / (fan_in + fan_out)), deterministic
// per seed; entries are drawn row-major, W0 first, then the output head(s).
inline GcnModel init_glorot(std::int64_t f, std::int64_t h, std::int64_t d,
                            ModelKind kind, std::uint64_t seed) {
    if (f < 1 || h < 1 || d < 1)
        throw std::invalid_argument("init_glorot: dimensions must be >= 1");
    Rng rng(mix_seed(seed ^ detail::kGlorotStream));
    GcnModel model;
    model.kind = kind;
    model.w0 = detail::glorot_matrix(f, h, rng);
    if (kind == ModelKind::AE) {
        model.w1 = detail::glorot_matrix(h, d, rng);
    } else {
        model.w1_mu = detail::glorot_matrix(h, d, rng);
        model.w1_sigma = detail::glorot_matrix(h, d, rng);
    }
    return model;
}

// Activations of one full forward pass over all nodes.
struct ForwardCache {
    Matrix h1_pre;    // n x h, before ReLU
    Matrix h1;        // n x h, ReLU(h1_pre)
    Matrix keep_mask; // n x h inverted-dropout mask; empty when dropout is off
    Matrix h1_drop;   // n x h, h1 . keep_mask; empty when dropout is off
    Matrix z;         // n x d
    Matrix mu, log_sigma, noise;  // n x d, VAE only

    const Matrix& hidden() const { return h1_drop.size() ? h1_drop : h1; }
};

// Deterministic forward pass with the stochastic inputs (VAE noise, dropout
// keep-mask) supplied by the caller; empty matrices mean "no noise" (the VAE
// then returns z = mu) and "no dropout".
inline ForwardCache encode_with_noise(const GcnModel& model, const NormalizedAdjacency& a,
                                      const NodeFeatures& x, Matrix noise = {},
                                      Matrix keep_mask = {}) {
    if (x.n != a.n) throw std::invalid_argument("encode: features/adjacency node mismatch");
    if (x.kind == NodeFeatures::Kind::Identity) {
        if (model.w0.rows() != a.n)
            throw std::invalid_argument("encode: identity features need an n x h first layer");
    } else if (model.w0.rows() != x.dense.cols()) {
        throw std::invalid_argument("encode: feature width does not match first layer");
    }

    ForwardCache cache;
    // Identity features: A_norm * I * W0 collapses to A_norm * W0 (a row
    // gather); no n x n product is ever formed.
    if (x.kind == NodeFeatures::Kind::Identity) {
        cache.h1_pre = a.multiply(model.w0);
    } else {
        const Matrix xw = x.dense * model.w0;
        cache.h1_pre = a.multiply(xw);
    }
    cache.h1 = cache.h1_pre.cwiseMax(0.0);
    if (keep_mask.size()) {
        if (keep_mask.rows() != cache.h1.rows() || keep_mask.cols() != cache.h1.cols())
            throw std::invalid_argument("encode: dropout mask shape mismatch");
        cache.keep_mask = std::move(keep_mask);
        cache.h1_drop = cache.h1.cwiseProduct(cache.keep_mask);
    }
    const Matrix& hidden = cache.hidden();

    if (model.kind == ModelKind::AE) {
        const Matrix hw = hidden * model.w1;
        cache.z = a.multiply(hw);
    } else {
        const Matrix hmu = hidden * model.w1_mu;
        const Matrix hsig = hidden * model.w1_sigma;
        cache.mu = a.multiply(hmu);
        cache.log_sigma = a.multiply(hsig);
        if (noise.size()) {
            if (noise.rows() != cache.mu.rows() || noise.cols() != cache.mu.cols())
                throw std::invalid_argument("encode: noise shape mismatch");
            cache.noise = std::move(noise);
            cache.z = cache.mu +
                      cache.log_sigma.array().exp().matrix().cwiseProduct(cache.noise);
        } else {
            cache.z = cache.mu;
        }
    }
    return cache;
}

// Forward pass drawing fresh reparameterization noise (VAE) and, when
// dropout > 0, a fresh inverted-dropout keep-mask. Draw order is fixed:
// noise first (row-major), then the mask.
inline ForwardCache encode(const GcnModel& model, const NormalizedAdjacency& a,
                           const NodeFeatures& x, Rng& rng, double dropout = 0.0) {
    Matrix noise;
    if (model.kind == ModelKind::VAE) {
        noise.resize(a.n, model.embed_dim());
        for (std::int64_t r = 0; r < noise.rows(); ++r)
            for (std::int64_t c = 0; c < noise.cols(); ++c) noise(r, c) = rng.normal();
    }
    Matrix keep_mask;
    if (dropout > 0.0) {
        if (dropout >= 1.0) throw std::invalid_argument("encode: dropout must be < 1");
        const double keep = 1.0 - dropout;
        keep_mask.resize(a.n, model.hidden_dim());
        for (std::int64_t r = 0; r < keep_mask.rows(); ++r)
            for (std::int64_t c = 0; c < keep_mask.cols(); ++c)
                keep_mask(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    }
    return encode_with_noise(model, a, x, std::move(noise), std::move(keep_mask));
}

// Decoded edge probability sigma(z_i . z_j).
inline double decode_pair(const Matrix& z, NodeId i, NodeId j) {
    return detail::sigmoid(z.row(i).dot(z.row(j)));
}

struct LossConfig {
    enum class PosWeight { Auto, Fixed };
    PosWeight pos_weight_mode = PosWeight::Auto;
    double fixed_weight = 1.0;
    double clip_epsilon = 1e-7;    // decoded probs clamped to [eps, 1-eps] in logs
    bool kl_on_all_nodes = true;   // false: KL restricted to the decoded node set
};

// The set of pairs a training iteration decodes. Dense mode scores every
// ordered pair over `nodes` (diagonal included and labeled positive, the
// A + I target convention); explicit mode scores a labeled pair list once
// per entry (the edge-list negative-sampling baseline).
struct DecodeSet {
    struct Labeled {
        NodeId u, v;
        int label;  // 1 = edge, 0 = non-edge
    };

    bool dense = true;
    std::vector<NodeId> nodes;                                  // dense mode
    std::vector<std::pair<std::int32_t, std::int32_t>> pos_pairs;  // a<b into nodes
    std::vector<Labeled> pairs;                                 // explicit mode

    static DecodeSet full(const Graph& g) {
        DecodeSet s;
        s.nodes.resize(static_cast<std::size_t>(g.n));
        std::iota(s.nodes.begin(), s.nodes.end(), 0);
        s.pos_pairs = induced_pairs(g, s.nodes);
        return s;
    }
    // `sample_nodes` output, re-sorted so that a full-size sample decodes in
    // exactly the same order as DecodeSet::full.
    static DecodeSet subgraph(const Graph& g, std::vector<NodeId> sampled) {
        DecodeSet s;
        std::sort(sampled.begin(), sampled.end());
        s.nodes = std::move(sampled);
        s.pos_pairs = induced_pairs(g, s.nodes);
        return s;
    }
    static DecodeSet explicit_pairs(std::vector<Labeled> pairs) {
        DecodeSet s;
        s.dense = false;
        s.pairs = std::move(pairs);
        return s;
    }

    std::int64_t pair_count() const {
        if (dense) {
            const auto k = static_cast<std::int64_t>(nodes.size());
            return k * k;
        }
        return static_cast<std::int64_t>(pairs.size());
    }
    std::int64_t positive_count() const {
        if (dense)
            return static_cast<std::int64_t>(nodes.size()) +
                   2 * static_cast<std::int64_t>(pos_pairs.size());
        return static_cast<std::int64_t>(
            std::count_if(pairs.begin(), pairs.end(), [](const Labeled& p) { return p.label == 1; }));
    }
};

namespace detail {

inline double resolve_pos_weight(const DecodeSet& set, const LossConfig& config) {
    if (config.pos_weight_mode == LossConfig::PosWeight::Fixed) return config.fixed_weight;
    const auto pairs = set.pair_count();
    const auto pos = set.positive_count();
    if (pos == 0)
        throw std::invalid_argument("reconstruction loss: zero positives with Auto pos_weight");
    return static_cast<double>(pairs - pos) / static_cast<double>(pos);
}

// Weighted cross-entropy over all ordered pairs of `nodes`, evaluated in row
// blocks of the n_s x n_s score matrix: every pair is first treated as
// negative (term softplus(s)), then the few positive entries (diagonal plus
// induced edges, both directions) are corrected in place. Decoded
// probabilities are clamped to [clip, 1-clip]; inside the clamp window the
// per-score gradient is sigma(s) for negatives and w (sigma(s)-1) for
// positives, outside it is 0 (the loss is flat there).
// If grad_z is non-null, d(mean loss)/dZ is accumulated into the full-size
// gradient (only rows in `nodes` are touched).
inline double dense_pair_loss(const Matrix& z, const std::vector<NodeId>& nodes,
                              const std::vector<std::pair<std::int32_t, std::int32_t>>& pos_pairs,
                              double w, double clip, Matrix* grad_z) {
    const auto n_s = static_cast<std::int64_t>(nodes.size());
    const double total_pairs = static_cast<double>(n_s) * static_cast<double>(n_s);
    const double t_min = -std::log1p(-clip);  // -log(1-clip)
    const double t_max = -std::log(clip);
    const double s_lo = std::log(clip / (1.0 - clip));  // logit of the clip window
    const double s_hi = -s_lo;

    Matrix zs(n_s, z.cols());
    for (std::int64_t a = 0; a < n_s; ++a) zs.row(a) = z.row(nodes[static_cast<std::size_t>(a)]);

    std::vector<std::vector<std::int32_t>> pos_cols(static_cast<std::size_t>(n_s));
    for (auto [a, b] : pos_pairs) {
        pos_cols[static_cast<std::size_t>(a)].push_back(b);
        pos_cols[static_cast<std::size_t>(b)].push_back(a);
    }

    const std::int64_t block = 256;
    double loss_sum = 0.0;
    Matrix s, g, gb;
    for (std::int64_t r0 = 0; r0 < n_s; r0 += block) {
        const std::int64_t b = std::min(block, n_s - r0);
        s.noalias() = zs.middleRows(r0, b) * zs.transpose();
        const auto sa = s.array();
        // Negative-label term for every pair in the block.
        loss_sum += (sa.max(0.0) + (-sa.abs()).exp().log1p()).max(t_min).min(t_max).sum();
        if (grad_z) g = ((sa > s_lo && sa < s_hi).select(1.0 / (1.0 + (-sa).exp()), 0.0)).matrix();

        for (std::int64_t a = r0; a < r0 + b; ++a) {
            auto fix_positive = [&](std::int32_t col) {
                const double sv = s(a - r0, col);
                const double term_neg =
                    std::clamp(detail::softplus(sv), t_min, t_max);
                const double term_pos =
                    std::clamp(detail::softplus(-sv), t_min, t_max);
                loss_sum += w * term_pos - term_neg;
                if (grad_z)
                    g(a - r0, col) =
                        (sv > s_lo && sv < s_hi) ? w * (detail::sigmoid(sv) - 1.0) : 0.0;
            };
            fix_positive(static_cast<std::int32_t>(a));  // diagonal, label 1
            for (auto col : pos_cols[static_cast<std::size_t>(a)]) fix_positive(col);
        }
        if (grad_z) {
            // Full gradient of the symmetric ordered-pair sum: 2/N * G * Zs.
            gb.noalias() = (2.0 / total_pairs) * (g * zs);
            for (std::int64_t a = r0; a < r0 + b; ++a)
                grad_z->row(nodes[static_cast<std::size_t>(a)]) += gb.row(a - r0);
        }
    }
    return loss_sum / total_pairs;
}

inline double explicit_pair_loss(const Matrix& z, const std::vector<DecodeSet::Labeled>& pairs,
                                 double w, double clip, Matrix* grad_z) {
    const double total_pairs = static_cast<double>(pairs.size());
    const double t_min = -std::log1p(-clip);
    const double t_max = -std::log(clip);
    const double s_lo = std::log(clip / (1.0 - clip));
    const double s_hi = -s_lo;

    double loss_sum = 0.0;
    for (const auto& pr : pairs) {
        const double sv = z.row(pr.u).dot(z.row(pr.v));
        const bool in_window = sv > s_lo && sv < s_hi;
        double grad = 0.0;
        if (pr.label == 1) {
            loss_sum += w * std::clamp(detail::softplus(-sv), t_min, t_max);
            if (in_window) grad = w * (detail::sigmoid(sv) - 1.0);
        } else {
            loss_sum += std::clamp(detail::softplus(sv), t_min, t_max);
            if (in_window) grad = detail::sigmoid(sv);
        }
        if (grad_z && grad != 0.0) {
            const double coeff = grad / total_pairs;
            if (pr.u == pr.v) {
                grad_z->row(pr.u) += 2.0 * coeff * z.row(pr.u);
            } else {
                grad_z->row(pr.u) += coeff * z.row(pr.v);
                grad_z->row(pr.v) += coeff * z.row(pr.u);
            }
        }
    }
    return loss_sum / total_pairs;
}

}  // namespace detail

// Mean weighted cross-entropy -[w A_ij log p + (1-A_ij) log(1-p)] over the
// decoded pair set, p = sigma(z_i . z_j) clamped to [clip, 1-clip].
inline double reconstruction_loss(const Matrix& z, const DecodeSet& set,
                                  const LossConfig& config = {}) {
    if (set.pair_count() == 0)
        throw std::invalid_argument("reconstruction loss: empty pair set");
    const double w = detail::resolve_pos_weight(set, config);
    if (set.dense)
        return detail::dense_pair_loss(z, set.nodes, set.pos_pairs, w,
                                       config.clip_epsilon, nullptr);
    return detail::explicit_pair_loss(z, set.pairs, w, config.clip_epsilon, nullptr);
}

// KL divergence of N(mu, diag(sigma^2)) from N(0, I), summed over nodes and
// dimensions and normalized per node:
// sum -1/2 (1 + 2 log_sigma - mu^2 - exp(2 log_sigma)) / n.
inline double kl_divergence(const Matrix& mu, const Matrix& log_sigma) {
    if (mu.rows() != log_sigma.rows() || mu.cols() != log_sigma.cols())
        throw std::invalid_argument("kl_divergence: shape mismatch");
    const auto m = mu.array();
    const auto ls = log_sigma.array();
    return (-0.5 * (1.0 + 2.0 * ls - m.square() - (2.0 * ls).exp())).sum() /
           static_cast<double>(mu.rows());
}

struct Gradients {
    Matrix w0, w1, w1_mu, w1_sigma;
    double loss = 0.0;   // recon + kl
    double recon = 0.0;
    double kl = 0.0;
};

// Reverse-mode gradients of the decoded reconstruction loss (plus KL for the
// VAE) with respect to every weight matrix. Only decoded rows of Z receive
// decoder gradients; they reach all weights through the adjacency products.
inline Gradients backward(const GcnModel& model, const ForwardCache& cache,
                          const NormalizedAdjacency& a, const NodeFeatures& x,
                          const DecodeSet& set, const LossConfig& config = {}) {
    if (set.pair_count() == 0)
        throw std::invalid_argument("backward: empty pair set");
    const double w = detail::resolve_pos_weight(set, config);
    const std::int64_t n = a.n;
    const std::int64_t d = model.embed_dim();

    Gradients out;
    Matrix grad_z = Matrix::Zero(n, d);
    out.recon = set.dense
                    ? detail::dense_pair_loss(cache.z, set.nodes, set.pos_pairs, w,
                                              config.clip_epsilon, &grad_z)
                    : detail::explicit_pair_loss(cache.z, set.pairs, w,
                                                 config.clip_epsilon, &grad_z);
    out.loss = out.recon;

    // Backprop through one output head: P = A (H W). Returns the H-gradient
    // contribution and fills grad_w.
    const Matrix& hidden = cache.hidden();
    auto head_backward = [&](const Matrix& grad_p, const Matrix& w_head, Matrix& grad_w) {
        const Matrix t = a.multiply(grad_p);      // A^T = A
        grad_w.noalias() = hidden.transpose() * t;
        return Matrix(t * w_head.transpose());
    };

    Matrix grad_hidden;
    if (model.kind == ModelKind::AE) {
        grad_hidden = head_backward(grad_z, model.w1, out.w1);
    } else {
        // Reparameterization: z = mu + exp(log_sigma) . noise. A cache built
        // without noise has z = mu, so the sigma path gets no decoder signal.
        Matrix grad_mu = grad_z;
        Matrix grad_ls =
            cache.noise.size()
                ? Matrix(grad_z.cwiseProduct(cache.noise)
                             .cwiseProduct(cache.log_sigma.array().exp().matrix()))
                : Matrix(Matrix::Zero(grad_z.rows(), grad_z.cols()));
        // KL weight in the objective: the summed divergence is divided by n^2
        // (per-node mean, then by n again). The reconstruction term is a mean
        // over ~n^2 decoded pairs, so a per-node mean KL would grow n times
        // faster than the data term and collapse the posterior to the prior on
        // any non-toy graph; one extra factor of n keeps the two terms on the
        // same footing — the weighting standard graph-VAE implementations use.
        if (config.kl_on_all_nodes || !set.dense) {
            const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
            out.kl = kl_divergence(cache.mu, cache.log_sigma) / static_cast<double>(n);
            grad_mu += inv_n2 * cache.mu;
            grad_ls += (inv_n2 * ((2.0 * cache.log_sigma.array()).exp() - 1.0)).matrix();
        } else {
            // KL restricted to the decoded node set, same k^-2 scaling so that
            // decoding the whole graph reproduces the all-nodes objective.
            const double k = static_cast<double>(set.nodes.size());
            const double inv_k2 = 1.0 / (k * k);
            double kl_sub = 0.0;
            for (NodeId v : set.nodes) {
                const auto mrow = cache.mu.row(v).array();
                const auto lrow = cache.log_sigma.row(v).array();
                kl_sub += (-0.5 * (1.0 + 2.0 * lrow - mrow.square() - (2.0 * lrow).exp())).sum();
                grad_mu.row(v) += inv_k2 * cache.mu.row(v);
                grad_ls.row(v) += (inv_k2 * ((2.0 * lrow).exp() - 1.0)).matrix();
            }
            out.kl = kl_sub * inv_k2;
        }
        out.loss += out.kl;
        grad_hidden = head_backward(grad_mu, model.w1_mu, out.w1_mu);
        grad_hidden += head_backward(grad_ls, model.w1_sigma, out.w1_sigma);
    }

    if (cache.keep_mask.size())
        grad_hidden = grad_hidden.cwiseProduct(cache.keep_mask);
    const Matrix grad_h1_pre =
        grad_hidden.cwiseProduct((cache.h1_pre.array() > 0.0).cast<double>().matrix());
    const Matrix grad_xw = a.multiply(grad_h1_pre);
    if (x.kind == NodeFeatures::Kind::Identity) {
        out.w0 = grad_xw;
    } else {
        out.w0.noalias() = x.dense.transpose() * grad_xw;
    }
    return out;
}

// Adam optimizer state, one moment pair per weight matrix.
struct AdamState {
    struct Moments {
        Matrix m, v;
    };
    double lr = 0.01, beta1 = 0.9, beta2 = 0.999, eps_opt = 1e-8;
    std::int64_t step = 0;
    Moments w0, w1, w1_mu, w1_sigma;

    [[nodiscard]] static AdamState init(const GcnModel& model, double lr) {
        AdamState s;
        s.lr = lr;
        auto zeros = [](const Matrix& w) {
            return Moments{Matrix::Zero(w.rows(), w.cols()), Matrix::Zero(w.rows(), w.cols())};
        };
        s.w0 = zeros(model.w0);
        if (model.kind == ModelKind::AE) {
            s.w1 = zeros(model.w1);
        } else {
            s.w1_mu = zeros(model.w1_mu);
            s.w1_sigma = zeros(model.w1_sigma);
        }
        return s;
    }
};

inline void adam_step(AdamState& state, GcnModel& model, const Gradients& grads) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    auto update = [&](Matrix& w, AdamState::Moments& mom, const Matrix& g) {
        if (w.rows() != g.rows() || w.cols() != g.cols())
            throw std::invalid_argument("adam_step: gradient shape mismatch");
        mom.m = state.beta1 * mom.m + (1.0 - state.beta1) * g;
        mom.v = state.beta2 * mom.v + (1.0 - state.beta2) * g.cwiseProduct(g);
        const auto m_hat = mom.m.array() / bc1;
        const auto v_hat = mom.v.array() / bc2;
        w.array() -= state.lr * m_hat / (v_hat.sqrt() + state.eps_opt);
    };
    update(model.w0, state.w0, grads.w0);
    if (model.kind == ModelKind::AE) {
        update(model.w1, state.w1, grads.w1);
    } else {
        update(model.w1_mu, state.w1_mu, grads.w1_mu);
        update(model.w1_sigma, state.w1_sigma, grads.w1_sigma);
    }
}

// All m edges of g labeled 1 plus m uniformly drawn non-edges labeled 0
// (rejection against the adjacency; duplicates among the negatives allowed,
// matching iid uniform draws).
inline std::vector<DecodeSet::Labeled> negative_sampling_pairs(const Graph& g, Rng& rng) {
    if (g.m == 0)
        throw std::invalid_argument("negative_sampling_pairs: graph has no edges");
    if (2 * g.m >= g.n * (g.n - 1))
        throw std::invalid_argument("negative_sampling_pairs: complete graph has no non-edges");
    std::vector<DecodeSet::Labeled> pairs;
    pairs.reserve(static_cast<std::size_t>(2 * g.m));
    for (auto [u, v] : g.edges()) pairs.push_back({u, v, 1});

    const std::int64_t max_attempts = 1000 * g.m;
    std::int64_t attempts = 0, found = 0;
    while (found < g.m) {
        if (attempts++ >= max_attempts)
            throw std::runtime_error("negative_sampling_pairs: rejection cap exceeded");
        const auto u = static_cast<NodeId>(rng.uniform_int(g.n));
        const auto v = static_cast<NodeId>(rng.uniform_int(g.n));
        if (u == v || g.has_edge(u, v)) continue;
        pairs.push_back({u, v, 0});
        ++found;
    }
    return pairs;
}

enum class Strategy { FullDecode, Subgraph, NegativeSampling };

struct TrainConfig {
    ModelKind kind = ModelKind::AE;
    Strategy strategy = Strategy::FullDecode;
    Measure measure = Measure::Uniform;   // Subgraph strategy only
    double sharpening_alpha = 1.0;
    std::int64_t n_s = 0;                 // Subgraph strategy only
    bool replacement = false;
    std::int64_t hidden = 32;
    std::int64_t dim = 16;
    std::int64_t iterations = 200;
    double lr = 0.01;
    double dropout = 0.0;
    LossConfig loss;
    std::uint64_t seed = 0;
};

struct TrainResult {
    GcnModel model;
    Matrix embeddings;                 // n x d; VAE: posterior means
    std::vector<double> loss_history;  // one (recon + kl) value per iteration
    double distribution_seconds = 0.0;
    double train_seconds = 0.0;
    std::int64_t n_s_used = 0;
};

namespace detail {

constexpr std::uint64_t kNoiseStream = 0x6e'6f'69'73'65ULL;    // "noise"
constexpr std::uint64_t kSampleStream = 0x73'61'6d'70'6cULL;   // "sampl"

}  // namespace detail

// Full training loop: one full-graph encoder pass per iteration, a fresh
// decode set per the strategy, analytic backward pass, Adam update.
// Deterministic per seed (independent streams for init, noise, sampling).
inline TrainResult train(const Graph& g, const NodeFeatures& x, const TrainConfig& config) {
    using clock = std::chrono::steady_clock;
    if (config.strategy == Strategy::Subgraph && (config.n_s < 1 || config.n_s > g.n))
        throw std::invalid_argument("train: subgraph size must be in [1, n]");
    if (config.iterations < 1)
        throw std::invalid_argument("train: iterations must be >= 1");

    const NormalizedAdjacency a = normalize_adjacency(g);

    TrainResult result;
    result.n_s_used = config.strategy == Strategy::Subgraph ? config.n_s : g.n;

    ImportanceDistribution dist;
    if (config.strategy == Strategy::Subgraph) {
        const auto t0 = clock::now();
        dist = build_distribution(g, config.measure, config.sharpening_alpha);
        result.distribution_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    }

    GcnModel model = init_glorot(x.dim(), config.hidden, config.dim, config.kind, config.seed);
    AdamState adam = AdamState::init(model, config.lr);
    Rng rng_base(config.seed);
    Rng rng_noise = rng_base.fork(detail::kNoiseStream);
    Rng rng_sample = rng_base.fork(detail::kSampleStream);

    DecodeSet full_set;
    if (config.strategy == Strategy::FullDecode) full_set = DecodeSet::full(g);

    const auto t_train = clock::now();
    result.loss_history.reserve(static_cast<std::size_t>(config.iterations));
    for (std::int64_t it = 0; it < config.iterations; ++it) {
        const ForwardCache cache = encode(model, a, x, rng_noise, config.dropout);
        DecodeSet set;
        switch (config.strategy) {
            case Strategy::FullDecode:
                set = full_set;
                break;
            case Strategy::Subgraph:
                set = DecodeSet::subgraph(
                    g, sample_node_ids(dist, config.n_s, config.replacement, rng_sample));
                break;
            case Strategy::NegativeSampling:
                set = DecodeSet::explicit_pairs(negative_sampling_pairs(g, rng_sample));
                break;
        }
        const Gradients grads = backward(model, cache, a, x, set, config.loss);
        adam_step(adam, model, grads);
        result.loss_history.push_back(grads.loss);
    }
    result.train_seconds = std::chrono::duration<double>(clock::now() - t_train).count();

    const ForwardCache final_cache = encode_with_noise(model, a, x);
    result.embeddings = config.kind == ModelKind::VAE ? final_cache.mu : final_cache.z;
    result.model = std::move(model);
    return result;
}

}  // namespace subgae
