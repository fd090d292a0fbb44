// subgae: train graph autoencoders with subsampled decoding, compute the
// subgraph-size threshold, generate benchmark graphs, and inspect edge lists.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "subgae/subgae.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct TrainArgs {
    std::string input;
    std::string features;
    std::string labels;
    std::string model = "gae";
    std::string sampler = "degree";
    double alpha = 1.0;
    std::string subgraph_size = "auto";
    std::int64_t dim = 16;
    std::int64_t hidden = 32;
    double lr = 0.01;
    std::int64_t iterations = 0;  // 0 = pick by graph size
    double dropout = 0.0;
    double val_frac = 0.05;
    double test_frac = 0.10;
    double gamma = 1.0;
    double confidence = 0.1;
    double epsilon = 0.001;
    std::uint64_t seed = 0;
    std::string task = "lp";
    std::string out_dir;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json matrix_to_json(const subgae::Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string embeddings_csv(const subgae::Graph& g, const subgae::Matrix& z) {
    std::string out = "node";
    for (Eigen::Index j = 0; j < z.cols(); ++j) out += ",dim_" + std::to_string(j);
    out += '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        out += std::to_string(g.node_ids[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            std::snprintf(buf, sizeof buf, ",%.17g", z(i, j));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

int run_train(const TrainArgs& args, const std::vector<std::string>& argv) {
    const subgae::Graph full = subgae::load_edge_list(args.input);

    const subgae::NodeFeatures features =
        args.features.empty() ? subgae::NodeFeatures::identity(full.n)
                              : subgae::load_features_csv(args.features, full.n);

    std::vector<std::int64_t> labels;
    if (!args.labels.empty()) labels = subgae::load_labels(args.labels, full.n);
    const bool wants_cluster = args.task == "cluster" || args.task == "both";
    const bool wants_lp = args.task == "lp" || args.task == "both";
    if (wants_cluster && labels.empty())
        throw std::runtime_error("--task " + args.task + " requires --labels");

    subgae::TrainConfig cfg;
    cfg.kind = args.model == "vgae" ? subgae::ModelKind::VAE : subgae::ModelKind::AE;
    if (args.sampler == "none") {
        cfg.strategy = subgae::Strategy::FullDecode;
    } else if (args.sampler == "negative") {
        cfg.strategy = subgae::Strategy::NegativeSampling;
    } else {
        cfg.strategy = subgae::Strategy::Subgraph;
        cfg.measure = args.sampler == "uniform"  ? subgae::Measure::Uniform
                      : args.sampler == "degree" ? subgae::Measure::Degree
                                                 : subgae::Measure::Core;
    }
    cfg.sharpening_alpha = args.alpha;
    cfg.hidden = args.hidden;
    cfg.dim = args.dim;
    cfg.lr = args.lr;
    cfg.dropout = args.dropout;
    cfg.seed = args.seed;
    cfg.iterations = args.iterations > 0 ? args.iterations : (full.n < 100000 ? 200 : 300);

    std::optional<subgae::EdgeSplit> split;
    if (wants_lp) split = subgae::split_edges(full, args.val_frac, args.test_frac, args.seed);
    const subgae::Graph& train_graph = split ? split->train_graph : full;

    if (cfg.strategy == subgae::Strategy::Subgraph) {
        if (args.subgraph_size == "auto") {
            subgae::ThresholdParams params;
            params.gamma = args.gamma;
            params.confidence_alpha = args.confidence;
            params.epsilon = args.epsilon;
            cfg.n_s = subgae::threshold_subgraph_size(train_graph.n, params);
        } else {
            try {
                std::size_t pos = 0;
                cfg.n_s = std::stoll(args.subgraph_size, &pos);
                if (pos != args.subgraph_size.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::runtime_error("--subgraph-size must be a positive integer or 'auto'");
            }
        }
    }

    const subgae::TrainResult result = subgae::train(train_graph, features, cfg);

    json metrics;
    if (wants_lp) {
        subgae::ScoredPairs scores;
        for (auto [u, v] : split->test_pos)
            scores.pos_scores.push_back(subgae::decode_pair(result.embeddings, u, v));
        for (auto [u, v] : split->test_neg)
            scores.neg_scores.push_back(subgae::decode_pair(result.embeddings, u, v));
        metrics["auc"] = subgae::auc(scores);
        metrics["ap"] = subgae::average_precision(scores);
    } else {
        metrics["auc"] = nullptr;
        metrics["ap"] = nullptr;
    }
    if (wants_cluster) {
        const std::set<std::int64_t> distinct(labels.begin(), labels.end());
        const auto clustering = subgae::kmeans(result.embeddings,
                                               static_cast<std::int64_t>(distinct.size()),
                                               args.seed);
        const std::vector<std::int64_t> pred(clustering.assignments.begin(),
                                             clustering.assignments.end());
        metrics["ami"] = subgae::adjusted_mutual_information(pred, labels);
    } else {
        metrics["ami"] = nullptr;
    }
    metrics["loss_history"] = result.loss_history;
    metrics["train_seconds"] = result.train_seconds;
    metrics["sample_seconds"] = result.distribution_seconds;
    if (cfg.strategy == subgae::Strategy::NegativeSampling)
        metrics["n_s_used"] = nullptr;
    else
        metrics["n_s_used"] = result.n_s_used;

    json config;
    config["input"] = args.input;
    config["features"] = args.features.empty() ? json(nullptr) : json(args.features);
    config["labels"] = args.labels.empty() ? json(nullptr) : json(args.labels);
    config["model"] = args.model;
    config["sampler"] = args.sampler;
    config["alpha"] = args.alpha;
    config["subgraph_size"] = args.subgraph_size;
    config["resolved_subgraph_size"] =
        cfg.strategy == subgae::Strategy::Subgraph ? json(cfg.n_s) : json(nullptr);
    config["dim"] = args.dim;
    config["hidden"] = args.hidden;
    config["lr"] = args.lr;
    config["iterations"] = cfg.iterations;
    config["dropout"] = args.dropout;
    config["val_frac"] = args.val_frac;
    config["test_frac"] = args.test_frac;
    config["gamma"] = args.gamma;
    config["confidence"] = args.confidence;
    config["epsilon"] = args.epsilon;
    config["seed"] = args.seed;
    config["task"] = args.task;
    config["out_dir"] = args.out_dir;
    config["command"] = argv;
    metrics["config"] = config;

    json checkpoint;
    checkpoint["format_version"] = 1;
    checkpoint["model"] = args.model;
    checkpoint["feature_dim"] = result.model.feature_dim();
    checkpoint["hidden_dim"] = result.model.hidden_dim();
    checkpoint["embed_dim"] = result.model.embed_dim();
    checkpoint["w0"] = matrix_to_json(result.model.w0);
    if (cfg.kind == subgae::ModelKind::VAE) {
        checkpoint["w1_mu"] = matrix_to_json(result.model.w1_mu);
        checkpoint["w1_sigma"] = matrix_to_json(result.model.w1_sigma);
    } else {
        checkpoint["w1"] = matrix_to_json(result.model.w1);
    }

    fs::create_directories(args.out_dir);
    const fs::path out(args.out_dir);
    write_text(out / "embeddings.csv", embeddings_csv(train_graph, result.embeddings));
    write_text(out / "metrics.json", metrics.dump(2) + "\n");
    write_text(out / "config.json", config.dump(2) + "\n");
    write_text(out / "checkpoint.json", checkpoint.dump() + "\n");
    return 0;
}

int run_threshold(std::int64_t n, double gamma, double confidence, double epsilon,
                  const std::string& loss) {
    subgae::ThresholdParams params;
    params.gamma = gamma;
    params.confidence_alpha = confidence;
    params.epsilon = epsilon;
    params.loss_kind = loss == "frobenius" ? subgae::ThresholdLoss::Frobenius
                                           : subgae::ThresholdLoss::CrossEntropy;
    std::cout << subgae::threshold_subgraph_size(n, params) << "\n";
    return 0;
}

int run_sbm(const subgae::SbmSpec& spec, const std::string& out_prefix) {
    const auto [graph, labels] = subgae::generate_sbm(spec);
    subgae::save_edge_list(graph, out_prefix + ".edges");
    subgae::save_labels(labels, out_prefix + ".labels");
    return 0;
}

int run_stats(const std::string& input) {
    const subgae::Graph g = subgae::load_edge_list(input);
    const auto degs = subgae::degrees(g);
    const auto cores = subgae::core_numbers(g);
    std::int64_t dmin = g.n > 0 ? degs[0] : 0, dmax = 0, dsum = 0, cmax = 0;
    for (auto d : degs) {
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
        dsum += d;
    }
    for (auto c : cores) cmax = std::max(cmax, c);
    json stats;
    stats["n"] = g.n;
    stats["m"] = g.m;
    stats["max_core"] = cmax;
    stats["degree_min"] = dmin;
    stats["degree_max"] = dmax;
    stats["degree_mean"] = g.n > 0 ? static_cast<double>(dsum) / static_cast<double>(g.n) : 0.0;
    std::cout << stats.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph autoencoder embeddings with subsampled decoding"};
    app.require_subcommand(1);

    TrainArgs targs;
    auto* train_cmd = app.add_subcommand("train", "train a model and write embeddings + metrics");
    train_cmd->add_option("--input", targs.input, "edge list file (one 'u v' pair per line)")
        ->required();
    train_cmd->add_option("--features", targs.features,
                          "node feature CSV (default: one-hot identity features)");
    train_cmd->add_option("--labels", targs.labels, "ground-truth community labels, one per line");
    train_cmd->add_option("--model", targs.model, "encoder type")
        ->check(CLI::IsMember({"gae", "vgae"}))
        ->capture_default_str();
    train_cmd
        ->add_option("--sampler", targs.sampler,
                     "decoding strategy: none = all pairs, uniform/degree/core = subsampled "
                     "decoding, negative = one uniform non-edge per edge")
        ->check(CLI::IsMember({"none", "uniform", "degree", "core", "negative"}))
        ->capture_default_str();
    train_cmd->add_option("--alpha", targs.alpha, "sampling distribution sharpening exponent")
        ->capture_default_str();
    train_cmd
        ->add_option("--subgraph-size", targs.subgraph_size,
                     "decoded node count: integer, or 'auto' for the concentration-bound size")
        ->capture_default_str();
    train_cmd->add_option("--dim", targs.dim, "embedding dimension")->capture_default_str();
    train_cmd->add_option("--hidden", targs.hidden, "hidden layer width")->capture_default_str();
    train_cmd->add_option("--lr", targs.lr, "Adam learning rate")->capture_default_str();
    train_cmd->add_option("--iterations", targs.iterations,
                          "training iterations (default: 200 below 100k nodes, else 300)");
    train_cmd->add_option("--dropout", targs.dropout, "dropout rate on the hidden layer")
        ->capture_default_str();
    train_cmd->add_option("--val-frac", targs.val_frac, "edge fraction held out for validation")
        ->capture_default_str();
    train_cmd->add_option("--test-frac", targs.test_frac, "edge fraction held out for testing")
        ->capture_default_str();
    train_cmd->add_option("--gamma", targs.gamma, "concentration-bound scale parameter")
        ->capture_default_str();
    train_cmd->add_option("--confidence", targs.confidence, "concentration-bound tail mass")
        ->capture_default_str();
    train_cmd->add_option("--epsilon", targs.epsilon, "decoder probability clipping")
        ->capture_default_str();
    train_cmd->add_option("--seed", targs.seed, "random seed")->capture_default_str();
    train_cmd->add_option("--task", targs.task, "evaluation protocol")
        ->check(CLI::IsMember({"lp", "cluster", "both"}))
        ->capture_default_str();
    train_cmd->add_option("--out-dir", targs.out_dir, "output directory")->required();

    std::int64_t th_n = 0;
    double th_gamma = 1.0, th_conf = 0.1, th_eps = 0.001;
    std::string th_loss = "cross-entropy";
    auto* th_cmd = app.add_subcommand("threshold", "print the recommended decoded-subgraph size");
    th_cmd->add_option("--n", th_n, "number of nodes")->required();
    th_cmd->add_option("--gamma", th_gamma, "scale parameter")->capture_default_str();
    th_cmd->add_option("--confidence", th_conf, "tail mass")->capture_default_str();
    th_cmd->add_option("--epsilon", th_eps, "probability clipping")->capture_default_str();
    th_cmd->add_option("--loss", th_loss, "bounded loss the guarantee applies to")
        ->check(CLI::IsMember({"cross-entropy", "frobenius"}))
        ->capture_default_str();

    subgae::SbmSpec spec;
    std::string sbm_prefix;
    auto* sbm_cmd = app.add_subcommand("sbm", "generate a stochastic block model graph");
    sbm_cmd->add_option("--communities", spec.num_communities, "number of blocks")->required();
    sbm_cmd->add_option("--community-size", spec.community_size, "nodes per block")->required();
    sbm_cmd->add_option("--p-in", spec.p_in, "intra-block edge probability")->required();
    sbm_cmd->add_option("--p-out", spec.p_out, "inter-block edge probability")->required();
    sbm_cmd->add_option("--seed", spec.seed, "random seed")->capture_default_str();
    sbm_cmd->add_option("--out-prefix", sbm_prefix, "writes <prefix>.edges and <prefix>.labels")
        ->required();

    std::string stats_input;
    auto* stats_cmd = app.add_subcommand("stats", "print edge-list summary as JSON");
    stats_cmd->add_option("--input", stats_input, "edge list file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed())
            return run_train(targs, std::vector<std::string>(argv, argv + argc));
        if (th_cmd->parsed()) return run_threshold(th_n, th_gamma, th_conf, th_eps, th_loss);
        if (sbm_cmd->parsed()) return run_sbm(spec, sbm_prefix);
        if (stats_cmd->parsed()) return run_stats(stats_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
