#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = SUBGAE_CLI_PATH;

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("subgae_cli_" + std::to_string(static_cast<long>(::getpid())));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const fs::path out_file = work_dir() / "stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = status;  // zero iff the process exited cleanly with status 0
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("cli rejects malformed invocations") {
    CHECK(run("").code != 0);
    CHECK(run("frobnicate").code != 0);
    CHECK(run("threshold").code != 0);                       // missing --n
    CHECK(run("train --input x.edges").code != 0);           // missing --out-dir
    CHECK(run("sbm --communities 2 --community-size 3 --p-in 1 --p-out 0").code != 0);
    const fs::path g = work_dir() / "tri.edges";
    write_file(g, "0 1\n1 2\n2 0\n");
    CHECK(run("train --input " + g.string() + " --out-dir " + (work_dir() / "o").string() +
              " --sampler bogus")
              .code != 0);
    CHECK(run("train --input " + g.string() + " --out-dir " + (work_dir() / "o").string() +
              " --model bogus")
              .code != 0);
}

TEST_CASE("cli threshold prints the recommended subgraph size") {
    CHECK(run("threshold --n 19717").out == "1187\n");
    CHECK(run("threshold --n 875713").out == "7911\n");
    CHECK(run("threshold --n 1").out == "1\n");
    CHECK(run("threshold --n 2708 --loss frobenius").out == "64\n");
    CHECK(run("threshold --n 2708 --loss bogus").code != 0);
}

TEST_CASE("cli sbm writes edge and label files") {
    const std::string base = "sbm --communities 2 --community-size 3 --p-in 1 --p-out 0 --seed 5";
    const fs::path a = work_dir() / "a";
    const fs::path b = work_dir() / "b";
    REQUIRE(run(base + " --out-prefix " + a.string()).code == 0);
    REQUIRE(run(base + " --out-prefix " + b.string()).code == 0);

    const std::string edges = slurp(a.string() + ".edges");
    CHECK(lines_of(edges).size() == 6);  // two triangles
    CHECK(slurp(a.string() + ".labels") == "0\n0\n0\n1\n1\n1\n");
    CHECK(edges == slurp(b.string() + ".edges"));  // same seed, same bytes

    const fs::path c = work_dir() / "c";
    REQUIRE(run("sbm --communities 2 --community-size 3 --p-in 1 --p-out 0 --seed 6 "
                "--out-prefix " +
                c.string())
                .code == 0);
    CHECK(slurp(c.string() + ".labels") == slurp(a.string() + ".labels"));
}

TEST_CASE("cli stats summarizes an edge list") {
    const fs::path tri = work_dir() / "tri2.edges";
    write_file(tri, "0 1\n1 2\n2 0\n");
    const auto r = run("stats --input " + tri.string());
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["n"] == 3);
    CHECK(j["m"] == 3);
    CHECK(j["max_core"] == 2);
    CHECK(j["degree_min"] == 2);
    CHECK(j["degree_max"] == 2);
    CHECK(j["degree_mean"] == Catch::Approx(2.0));

    const fs::path k4 = work_dir() / "k4.edges";
    write_file(k4, "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    CHECK(json::parse(run("stats --input " + k4.string()).out)["max_core"] == 3);

    CHECK(run("stats --input " + (work_dir() / "missing.edges").string()).code != 0);
    const fs::path empty = work_dir() / "empty.edges";
    write_file(empty, "");
    CHECK(run("stats --input " + empty.string()).code != 0);
}

TEST_CASE("cli train writes embeddings, metrics, config, and checkpoint") {
    const fs::path graph = work_dir() / "train_graph";
    REQUIRE(run("sbm --communities 2 --community-size 20 --p-in 0.5 --p-out 0.05 --seed 3 "
                "--out-prefix " +
                graph.string())
                .code == 0);
    const fs::path out = work_dir() / "run1";
    const auto r = run("train --input " + graph.string() + ".edges --labels " + graph.string() +
                       ".labels --out-dir " + out.string() +
                       " --sampler none --task both --dim 4 --hidden 8 --iterations 5 --seed 1");
    REQUIRE(r.code == 0);

    const auto emb_lines = lines_of(slurp(out / "embeddings.csv"));
    REQUIRE(emb_lines.size() == 41);  // header + 40 nodes
    CHECK(emb_lines[0] == "node,dim_0,dim_1,dim_2,dim_3");

    const json metrics = json::parse(slurp(out / "metrics.json"));
    for (const char* key :
         {"auc", "ap", "ami", "loss_history", "train_seconds", "sample_seconds", "n_s_used",
          "config"})
        CHECK(metrics.contains(key));
    CHECK(metrics["auc"].is_number());
    CHECK(metrics["auc"].get<double>() >= 0.0);
    CHECK(metrics["auc"].get<double>() <= 1.0);
    CHECK(metrics["ami"].is_number());
    CHECK(metrics["loss_history"].size() == 5);
    CHECK(metrics["n_s_used"] == 40);  // full decoding uses every node
    CHECK(metrics["config"]["resolved_subgraph_size"].is_null());
    CHECK(metrics["config"]["iterations"] == 5);

    const json config = json::parse(slurp(out / "config.json"));
    CHECK(config["sampler"] == "none");
    CHECK(config["command"].is_array());

    const json ckpt = json::parse(slurp(out / "checkpoint.json"));
    CHECK(ckpt["format_version"] == 1);
    CHECK(ckpt["embed_dim"] == 4);
    CHECK(ckpt["w0"].is_array());
    CHECK(ckpt.contains("w1"));
    CHECK_FALSE(ckpt.contains("w1_mu"));

    SECTION("vae checkpoints store both output heads") {
        const fs::path vout = work_dir() / "run_vae";
        REQUIRE(run("train --input " + graph.string() + ".edges --out-dir " + vout.string() +
                    " --model vgae --sampler none --dim 4 --hidden 8 --iterations 5 --seed 1")
                    .code == 0);
        const json vckpt = json::parse(slurp(vout / "checkpoint.json"));
        CHECK(vckpt.contains("w1_mu"));
        CHECK(vckpt.contains("w1_sigma"));
        CHECK_FALSE(vckpt.contains("w1"));
    }
}

TEST_CASE("cli train preserves original node ids in embeddings") {
    const fs::path g = work_dir() / "ids.edges";
    write_file(g, "10 7\n7 3\n3 10\n10 42\n42 5\n5 3\n");
    const fs::path out = work_dir() / "run_ids";
    REQUIRE(run("train --input " + g.string() + " --out-dir " + out.string() +
                " --sampler none --dim 2 --hidden 4 --iterations 2")
                .code == 0);
    const auto lines = lines_of(slurp(out / "embeddings.csv"));
    REQUIRE(lines.size() == 6);
    CHECK(lines[1].substr(0, 3) == "10,");
    CHECK(lines[2].substr(0, 2) == "7,");
    CHECK(lines[3].substr(0, 2) == "3,");
    CHECK(lines[4].substr(0, 3) == "42,");
    CHECK(lines[5].substr(0, 2) == "5,");
}

TEST_CASE("cli train is reproducible for a fixed seed") {
    const fs::path graph = work_dir() / "rep_graph";
    REQUIRE(run("sbm --communities 2 --community-size 15 --p-in 0.4 --p-out 0.05 --seed 9 "
                "--out-prefix " +
                graph.string())
                .code == 0);
    const std::string train = "train --input " + graph.string() +
                              ".edges --sampler degree --subgraph-size 10 --dim 4 --hidden 8 "
                              "--iterations 8 --seed 4 --out-dir ";
    const fs::path o1 = work_dir() / "rep1";
    const fs::path o2 = work_dir() / "rep2";
    REQUIRE(run(train + o1.string()).code == 0);
    REQUIRE(run(train + o2.string()).code == 0);
    CHECK(slurp(o1 / "embeddings.csv") == slurp(o2 / "embeddings.csv"));
    const json m1 = json::parse(slurp(o1 / "metrics.json"));
    const json m2 = json::parse(slurp(o2 / "metrics.json"));
    CHECK(m1["auc"] == m2["auc"]);
    CHECK(m1["ap"] == m2["ap"]);
    CHECK(m1["loss_history"] == m2["loss_history"]);
    CHECK(m1["n_s_used"] == 10);
}

TEST_CASE("cli train resolves the automatic subgraph size from the node count") {
    // 4 blocks x 677 nodes = 2708 nodes; the recommended size at the default
    // settings is round(8.4542... * sqrt(2708)) = 440.
    const fs::path graph = work_dir() / "auto_graph";
    REQUIRE(run("sbm --communities 4 --community-size 677 --p-in 0.01 --p-out 0.001 --seed 2 "
                "--out-prefix " +
                graph.string())
                .code == 0);
    const fs::path out = work_dir() / "run_auto";
    REQUIRE(run("train --input " + graph.string() + ".edges --out-dir " + out.string() +
                " --sampler degree --alpha 2 --subgraph-size auto --dim 4 --hidden 8 "
                "--iterations 3 --seed 1")
                .code == 0);
    const json metrics = json::parse(slurp(out / "metrics.json"));
    CHECK(metrics["n_s_used"] == 440);
    CHECK(metrics["config"]["resolved_subgraph_size"] == 440);
    CHECK(metrics["sample_seconds"].is_number());

    SECTION("negative sampling reports no subgraph size") {
        const fs::path nout = work_dir() / "run_neg";
        REQUIRE(run("train --input " + graph.string() + ".edges --out-dir " + nout.string() +
                    " --sampler negative --dim 4 --hidden 8 --iterations 3 --seed 1")
                    .code == 0);
        CHECK(json::parse(slurp(nout / "metrics.json"))["n_s_used"].is_null());
    }
}
