#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gm/analysis.hpp"
#include "gm/bench.hpp"
#include "gm/error.hpp"
#include "gm/graph.hpp"
#include "gm/lfr.hpp"
#include "gm/rng.hpp"
#include "gm/textio.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GenerateArgs {
    int count = 0;
    std::uint64_t seed = 0;
    std::string out;
    int n_min = 11;
    int n_max = 1499;
};

struct BenchArgs {
    std::string graphs;
    std::string out;
    std::string features;  // empty: derived from out
    std::string measures = "all";
    std::string criterion = "inertia";
    std::string sigmoid_sign = "negative";
    int workers = 1;
};

struct AnalyzeArgs {
    std::string results;
    std::string features;
    std::string mode = "leaderboard";
    std::string out;
    double sigma = 0.6;
    int grid = 20;
    bool plots = false;
};

// GM_SEED takes precedence over --seed when set; returns false on garbage.
bool resolve_seed(std::uint64_t& seed, std::string& source) {
    source = "flag";
    const char* env = std::getenv("GM_SEED");
    if (env == nullptr || *env == '\0') return true;
    std::uint64_t value = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end) return false;
    seed = value;
    source = "env";
    return true;
}

std::string sibling_path(const std::string& primary, const char* suffix) {
    fs::path p(primary);
    fs::path dir = p.parent_path();
    return (dir / (p.stem().string() + suffix)).string();
}

void write_json(const std::string& path, const json& j) {
    gm::atomic_write_file(path, j.dump(2) + "\n");
}

int cmd_generate(const GenerateArgs& a) {
    if (a.n_min < 10 || a.n_min > a.n_max) {
        std::cerr << "gm generate: --n-min must satisfy 10 <= n-min <= n-max\n";
        return 2;
    }
    std::uint64_t seed = a.seed;
    std::string seed_source;
    if (!resolve_seed(seed, seed_source)) {
        std::cerr << "gm generate: GM_SEED must be an unsigned integer\n";
        return 2;
    }

    fs::create_directories(a.out);
    const fs::path out_dir(a.out);

    std::string failures;
    int accepted = 0;
    long long candidate = 0;
    const long long candidate_cap = 200LL * a.count + 1000;
    int rejected = 0;

    while (accepted < a.count) {
        if (candidate >= candidate_cap)
            throw gm::Error(gm::ErrorCode::GenerationFailed,
                            "candidate budget exhausted after " + std::to_string(accepted) +
                                " accepted graphs");
        const std::uint64_t cseed =
            gm::fnv1a64("gen|" + std::to_string(seed) + "|" + std::to_string(candidate));
        const gm::SampledConfig cfg = gm::sample_lfr_config(a.n_min, a.n_max, cseed);
        try {
            const gm::LfrOutcome outcome = gm::generate_lfr(cfg);
            char id[16];
            std::snprintf(id, sizeof(id), "g%04d", accepted);
            gm::save_graph(outcome.graph, (out_dir / (std::string(id) + ".txt")).string());

            json meta;
            meta["graph_id"] = id;
            meta["candidate"] = candidate;
            meta["config"] = {{"seed", cfg.seed},
                              {"tilde_tau1", cfg.tilde_tau1},
                              {"tilde_tau2", cfg.tilde_tau2},
                              {"density", cfg.density}};
            meta["params"] = {{"n", cfg.params.n},
                              {"tau1", cfg.params.tau1},
                              {"tau2", cfg.params.tau2},
                              {"mu", cfg.params.mu},
                              {"avg_degree", cfg.params.avg_degree}};
            meta["realized"] = {{"attempts", outcome.attempts},
                                {"mixing", outcome.realized_mixing},
                                {"avg_degree", outcome.realized_avg_degree},
                                {"rewiring_swaps", outcome.rewiring_swaps},
                                {"edges", static_cast<int>(outcome.graph.edges.size())},
                                {"communities", outcome.graph.community_count()}};
            write_json((out_dir / (std::string(id) + ".json")).string(), meta);
            ++accepted;
        } catch (const gm::Error& e) {
            if (e.code() != gm::ErrorCode::GenerationFailed) throw;
            failures += "candidate " + std::to_string(candidate) + ": " + e.what() + "\n";
            ++rejected;
        }
        ++candidate;
    }

    gm::atomic_write_file((out_dir / "failures.log").string(), failures);
    json run;
    run["command"] = "generate";
    run["count"] = a.count;
    run["seed"] = seed;
    run["seed_source"] = seed_source;
    run["n_min"] = a.n_min;
    run["n_max"] = a.n_max;
    run["out"] = a.out;
    run["version"] = kVersion;
    write_json((out_dir / "run_generate.json").string(), run);

    std::cout << "accepted " << accepted << " graphs, rejected " << rejected << " candidates\n";
    return 0;
}

int cmd_bench(const BenchArgs& a) {
    std::vector<gm::MeasureId> measures;
    if (a.measures == "all") {
        measures = gm::measure_catalog();
    } else {
        std::string token;
        std::stringstream ss(a.measures);
        while (std::getline(ss, token, ',')) {
            if (token.empty()) continue;
            const auto id = gm::parse_measure(token);
            if (!id) {
                std::cerr << "gm bench: unknown measure '" << token << "'\n";
                return 2;
            }
            measures.push_back(*id);
        }
        if (measures.empty()) {
            std::cerr << "gm bench: --measures named no measure\n";
            return 2;
        }
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(a.graphs))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<gm::GraphRecord> dataset;
    for (const auto& file : files) {
        const std::string id = file.stem().string();
        fs::path sidecar = file;
        sidecar.replace_extension(".json");
        try {
            const gm::Graph g = gm::load_graph(file.string());
            const json meta = json::parse(gm::read_file(sidecar.string()));
            gm::LfrParams params;
            params.n = meta.at("params").at("n").get<int>();
            params.tau1 = meta.at("params").at("tau1").get<double>();
            params.tau2 = meta.at("params").at("tau2").get<double>();
            params.mu = meta.at("params").at("mu").get<double>();
            params.avg_degree = meta.at("params").at("avg_degree").get<double>();
            gm::GraphRecord rec;
            rec.graph_id = id;
            rec.params = params;
            rec.features = gm::compute_features(g, params);
            rec.path = file.string();
            dataset.push_back(std::move(rec));
        } catch (const std::exception& e) {
            std::cerr << "skipping " << id << ": " << e.what() << "\n";
        }
    }
    if (dataset.empty()) {
        std::cerr << "gm bench: no usable graphs under " << a.graphs << "\n";
        return 1;
    }

    gm::BenchConfig config;
    config.criterion = gm::parse_criterion(a.criterion);
    config.workers = a.workers;
    config.measure_options.sigmoid_sign =
        a.sigmoid_sign == "positive" ? gm::SigmoidSign::Positive : gm::SigmoidSign::Negative;

    const std::string features_path =
        a.features.empty() ? sibling_path(a.out, "_features.csv") : a.features;
    const gm::BenchReport report =
        gm::run_benchmark(dataset, measures, config, a.out, features_path);

    json run;
    run["command"] = "bench";
    run["graphs"] = a.graphs;
    run["out"] = a.out;
    run["features"] = features_path;
    run["measures"] = a.measures;
    run["criterion"] = a.criterion;
    run["sigmoid_sign"] = a.sigmoid_sign;
    run["workers"] = a.workers;
    run["version"] = kVersion;
    write_json(sibling_path(a.out, "_run.json"), run);

    std::cout << "computed " << report.computed << " records, skipped " << report.skipped
              << " existing\n";
    if (report.io_errors > 0)
        std::cerr << report.io_errors << " records hit I/O errors and were recomputed or dropped\n";
    return 0;
}

// Winner label per dataset row under the filter's tie priority.
std::string row_winner(const gm::FilterDataset& data, Eigen::Index row) {
    int best_col = -1;
    double best = 0.0;
    for (int col : data.tie_order) {
        const double v = data.aris(row, col);
        if (best_col < 0 || v > best) {
            best_col = col;
            best = v;
        }
    }
    return data.column_names[static_cast<std::size_t>(best_col)];
}

int cmd_analyze(const AnalyzeArgs& a) {
    const std::vector<gm::EvalRecord> records = gm::read_results_csv(a.results);
    const std::map<std::string, gm::GraphFeatures> features = gm::read_features_csv(a.features);
    fs::create_directories(a.out);
    const fs::path out_dir(a.out);

    if (a.mode == "leaderboard") {
        const auto assoc = gm::leaderboard(records, features, gm::Subset::Associative);
        const auto dissoc = gm::leaderboard(records, features, gm::Subset::Dissociative);
        gm::write_leaderboard_csv((out_dir / "leaderboard_associative.csv").string(), assoc);
        gm::write_leaderboard_csv((out_dir / "leaderboard_dissociative.csv").string(), dissoc);
        std::cout << "associative rows: " << assoc.size()
                  << ", dissociative rows: " << dissoc.size() << "\n";
    } else if (a.mode == "lda") {
        const gm::FilterDataset data = gm::build_filter_dataset(records, features);
        const std::vector<std::string> feature_names = {"n", "tau1", "tau2", "log_avg_degree",
                                                        "gt_modularity"};

        std::vector<std::string> winners(data.graph_ids.size());
        std::map<std::string, int> counts;
        for (std::size_t i = 0; i < data.graph_ids.size(); ++i) {
            winners[i] = row_winner(data, static_cast<Eigen::Index>(i));
            ++counts[winners[i]];
        }
        std::map<std::string, int> class_of;
        std::vector<std::pair<std::string, int>> class_counts;
        for (const auto& [name, count] : counts) {
            if (count < 2) {
                std::cerr << "dropping singleton winner class '" << name << "'\n";
                continue;
            }
            class_of[name] = static_cast<int>(class_counts.size());
            class_counts.emplace_back(name, count);
        }
        if (class_counts.size() < 2)
            throw gm::Error(gm::ErrorCode::DegenerateClasses,
                            "fewer than two winner classes with >= 2 graphs");

        std::vector<int> classes;
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < winners.size(); ++i) {
            const auto it = class_of.find(winners[i]);
            if (it == class_of.end()) continue;
            classes.push_back(it->second);
            rows.push_back(static_cast<Eigen::Index>(i));
        }
        Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), 5);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const gm::GraphFeatures& f = features.at(data.graph_ids[static_cast<std::size_t>(rows[r])]);
            x(static_cast<Eigen::Index>(r), 0) = f.n;
            x(static_cast<Eigen::Index>(r), 1) = f.tau1;
            x(static_cast<Eigen::Index>(r), 2) = f.tau2;
            x(static_cast<Eigen::Index>(r), 3) = f.log_avg_degree;
            x(static_cast<Eigen::Index>(r), 4) = f.gt_modularity;
        }

        const gm::LdaResult lda = gm::lda_importance(gm::standardize_columns(x), classes);
        gm::atomic_write_file((out_dir / "lda_report.txt").string(),
                              gm::lda_report_text(lda, feature_names, class_counts));
        gm::write_lda_variance_csv((out_dir / "lda_variance.csv").string(), lda);
        gm::write_lda_contributions_csv((out_dir / "lda_contributions.csv").string(), lda,
                                        feature_names);
        std::cout << "lda over " << rows.size() << " graphs, " << class_counts.size()
                  << " winner classes\n";
    } else {  // zones
        gm::FilterConfig config;
        config.sigma = a.sigma;
        config.grid_resolution = a.grid;
        const gm::LeadershipMap map = gm::leadership_map(records, features, config);
        gm::write_zones_csv((out_dir / "zones.csv").string(), map);
        gm::write_zone_summary_csv((out_dir / "zone_summary.csv").string(), map);
        if (a.plots) gm::write_slice_svgs((out_dir / "slices").string(), map);
        int supported = 0;
        for (const auto& cell : map.cells)
            if (!cell.winner.empty()) ++supported;
        std::cout << "zones: " << supported << "/" << map.cells.size() << " cells supported\n";
    }

    json run;
    run["command"] = "analyze";
    run["mode"] = a.mode;
    run["results"] = a.results;
    run["features"] = a.features;
    run["out"] = a.out;
    run["sigma"] = a.sigma;
    run["grid"] = a.grid;
    run["plots"] = a.plots;
    run["version"] = kVersion;
    write_json((out_dir / ("run_" + a.mode + ".json")).string(), run);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph measure benchmark toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "sample and write benchmark graphs");
    gen->add_option("--count", gen_args.count, "number of accepted graphs")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_args.seed, "master seed (GM_SEED overrides)");
    gen->add_option("--out", gen_args.out, "output directory")->required();
    gen->add_option("--n-min", gen_args.n_min, "smallest node count")->capture_default_str();
    gen->add_option("--n-max", gen_args.n_max, "largest node count")->capture_default_str();

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "sweep measures over a graph directory");
    bench->add_option("--graphs", bench_args.graphs, "directory of graph files")
        ->required()
        ->check(CLI::ExistingDirectory);
    bench->add_option("--out", bench_args.out, "results CSV path")->required();
    bench->add_option("--features", bench_args.features,
                      "features CSV path (default: <out>_features.csv)");
    bench->add_option("--measures", bench_args.measures, "'all' or comma-separated names")
        ->capture_default_str();
    bench->add_option("--criterion", bench_args.criterion, "trial selection criterion")
        ->capture_default_str()
        ->check(CLI::IsMember({"inertia", "modularity"}));
    bench->add_option("--workers", bench_args.workers, "worker thread count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench->add_option("--sigmoid-sign", bench_args.sigmoid_sign,
                      "sign inside the SCT/SCCT sigmoid")
        ->capture_default_str()
        ->check(CLI::IsMember({"negative", "positive"}));

    AnalyzeArgs an_args;
    auto* analyze = app.add_subcommand("analyze", "leaderboards, LDA, leadership zones");
    analyze->add_option("--results", an_args.results, "results CSV")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--features", an_args.features, "features CSV")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--mode", an_args.mode, "analysis mode")
        ->capture_default_str()
        ->check(CLI::IsMember({"leaderboard", "lda", "zones"}));
    analyze->add_option("--out", an_args.out, "output directory")->required();
    analyze->add_option("--sigma", an_args.sigma, "filter scale")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    analyze->add_option("--grid", an_args.grid, "cells per axis")
        ->capture_default_str()
        ->check(CLI::Range(2, 200));
    analyze->add_flag("--plots", an_args.plots, "write SVG slice plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_args);
        if (bench->parsed()) return cmd_bench(bench_args);
        if (analyze->parsed()) return cmd_analyze(an_args);
    } catch (const gm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
