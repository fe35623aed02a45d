#include "gm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gm/error.hpp"
#include "gm/matrices.hpp"
#include "gm/rng.hpp"
#include "gm/scoring.hpp"
#include "gm/textio.hpp"

namespace gm {

namespace {

constexpr int kFlushEvery = 25;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

bool record_order(const EvalRecord& a, const EvalRecord& b) {
    if (a.graph_id != b.graph_id) return a.graph_id < b.graph_id;
    return catalog_index(a.measure) < catalog_index(b.measure);
}

}  // namespace

double grid_value(int i) { return static_cast<double>(i) / 15.0; }

double GraphFeatures::avg_degree() const { return std::exp(log_avg_degree); }

GraphFeatures compute_features(const Graph& g, const LfrParams& params) {
    GraphFeatures f;
    f.n = static_cast<double>(g.n);
    f.tau1 = params.tau1;
    f.tau2 = params.tau2;
    f.log_avg_degree =
        std::log(2.0 * static_cast<double>(g.edges.size()) / static_cast<double>(g.n));
    f.gt_modularity = modularity(g, g.communities);
    return f;
}

std::uint64_t trial_seed(const std::string& graph_id, MeasureId m, int grid_index,
                         int trial_index) {
    return fnv1a64(graph_id + "|" + measure_name(m) + "|" + std::to_string(grid_index) +
                   "|" + std::to_string(trial_index));
}

EvalRecord evaluate_measure(const Graph& g, const std::string& graph_id, MeasureId m,
                            TrialCriterion criterion, const MeasureOptions& opts) {
    EvalRecord rec;
    rec.graph_id = graph_id;
    rec.measure = m;
    rec.criterion = criterion;

    const DerivedMatrices dm = derive_matrices(g);
    MeasureEngine engine(dm, opts);
    const int k = g.community_count();

    for (int i = 0; i < kGridSize; ++i) {
        double score = 0.0;
        try {
            const KernelBuild kb = engine.build(m, grid_value(i));
            BestTrialOptions trial_opts;
            trial_opts.criterion = criterion;
            trial_opts.seed_for_trial = [&](int t) { return trial_seed(graph_id, m, i, t); };
            const ClusteringResult res = cluster_best_trial(kb.values, k, g, trial_opts);
            score = ari(g.communities, res.labels);
        } catch (const Error&) {
            ++rec.failures;
        }
        rec.per_x_ari[static_cast<std::size_t>(i)] = score;
    }

    rec.best_ari = rec.per_x_ari[0];
    rec.best_x = grid_value(0);
    for (int i = 1; i < kGridSize; ++i) {
        if (rec.per_x_ari[static_cast<std::size_t>(i)] > rec.best_ari) {
            rec.best_ari = rec.per_x_ari[static_cast<std::size_t>(i)];
            rec.best_x = grid_value(i);
        }
    }
    return rec;
}

const char* criterion_name(TrialCriterion c) {
    return c == TrialCriterion::Inertia ? "inertia" : "modularity";
}

TrialCriterion parse_criterion(const std::string& name) {
    if (name == "inertia") return TrialCriterion::Inertia;
    if (name == "modularity") return TrialCriterion::Modularity;
    throw Error(ErrorCode::InvalidArgument, "unknown criterion: " + name);
}

void write_results_csv(const std::string& path, const std::vector<EvalRecord>& records) {
    std::string out = "graph_id,measure,variant,best_x,best_ari";
    for (int i = 0; i < kGridSize; ++i) out += ",ari_" + std::to_string(i);
    out += ",failures,criterion\n";
    for (const auto& r : records) {
        out += r.graph_id;
        out += ',';
        out += family_name(r.measure.family);
        out += ',';
        out += (r.measure.variant == Variant::Log ? "log" : "plain");
        out += ',';
        out += format_double(r.best_x);
        out += ',';
        out += format_double(r.best_ari);
        for (double v : r.per_x_ari) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += std::to_string(r.failures);
        out += ',';
        out += criterion_name(r.criterion);
        out += '\n';
    }
    atomic_write_file(path, out);
}

std::vector<EvalRecord> read_results_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty results file");

    std::vector<EvalRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != static_cast<std::size_t>(7 + kGridSize))
            throw Error(ErrorCode::IoError, "malformed results row: " + line);
        EvalRecord r;
        r.graph_id = f[0];
        const auto family = parse_measure(f[1]);
        if (!family) throw Error(ErrorCode::IoError, "unknown measure: " + f[1]);
        r.measure = {family->family, f[2] == "log" ? Variant::Log : Variant::Plain};
        if (catalog_index(r.measure) < 0)
            throw Error(ErrorCode::IoError, "invalid measure/variant row: " + line);
        r.best_x = std::stod(f[3]);
        r.best_ari = std::stod(f[4]);
        for (int i = 0; i < kGridSize; ++i)
            r.per_x_ari[static_cast<std::size_t>(i)] = std::stod(f[static_cast<std::size_t>(5 + i)]);
        r.failures = std::stoi(f[static_cast<std::size_t>(5 + kGridSize)]);
        r.criterion = parse_criterion(f[static_cast<std::size_t>(6 + kGridSize)]);
        records.push_back(std::move(r));
    }
    return records;
}

void write_features_csv(const std::string& path,
                        const std::vector<std::pair<std::string, GraphFeatures>>& rows) {
    std::string out = "graph_id,n,tau1,tau2,log_avg_degree,gt_modularity\n";
    for (const auto& [id, f] : rows) {
        out += id;
        out += ',';
        out += format_double(f.n);
        out += ',';
        out += format_double(f.tau1);
        out += ',';
        out += format_double(f.tau2);
        out += ',';
        out += format_double(f.log_avg_degree);
        out += ',';
        out += format_double(f.gt_modularity);
        out += '\n';
    }
    atomic_write_file(path, out);
}

std::map<std::string, GraphFeatures> read_features_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty features file");

    std::map<std::string, GraphFeatures> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw Error(ErrorCode::IoError, "malformed features row: " + line);
        GraphFeatures gf;
        gf.n = std::stod(f[1]);
        gf.tau1 = std::stod(f[2]);
        gf.tau2 = std::stod(f[3]);
        gf.log_avg_degree = std::stod(f[4]);
        gf.gt_modularity = std::stod(f[5]);
        out[f[0]] = gf;
    }
    return out;
}

BenchReport run_benchmark(const std::vector<GraphRecord>& dataset,
                          const std::vector<MeasureId>& measures, const BenchConfig& config,
                          const std::string& results_path, const std::string& features_path) {
    if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "no graphs to benchmark");
    if (measures.empty()) throw Error(ErrorCode::InvalidArgument, "no measures selected");

    std::vector<GraphRecord> graphs = dataset;
    std::sort(graphs.begin(), graphs.end(),
              [](const GraphRecord& a, const GraphRecord& b) { return a.graph_id < b.graph_id; });

    std::vector<EvalRecord> kept;
    std::map<std::pair<std::string, int>, bool> have;
    if (std::filesystem::exists(results_path)) {
        for (auto& r : read_results_csv(results_path)) {
            have[{r.graph_id, catalog_index(r.measure)}] = true;
            kept.push_back(std::move(r));
        }
    }

    struct Task {
        const GraphRecord* record;
        MeasureId measure;
    };
    std::vector<Task> tasks;
    BenchReport report;
    for (const auto& g : graphs) {
        for (const auto& m : measures) {
            if (have.count({g.graph_id, catalog_index(m)})) {
                ++report.skipped;
            } else {
                tasks.push_back({&g, m});
            }
        }
    }

    std::vector<EvalRecord> fresh;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<int> io_errors{0};
    std::size_t flushed_at = 0;

    auto flush_locked = [&]() {
        std::vector<EvalRecord> all = kept;
        all.insert(all.end(), fresh.begin(), fresh.end());
        std::sort(all.begin(), all.end(), record_order);
        write_results_csv(results_path, all);
    };

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            EvalRecord rec;
            try {
                const Graph g = load_graph(t.record->path);
                rec = evaluate_measure(g, t.record->graph_id, t.measure, config.criterion,
                                       config.measure_options);
            } catch (const std::exception& e) {
                ++io_errors;
                std::lock_guard<std::mutex> lock(mu);
                std::cerr << "error: " << t.record->graph_id << " " << measure_name(t.measure)
                          << ": " << e.what() << "\n";
                continue;
            }
            std::lock_guard<std::mutex> lock(mu);
            fresh.push_back(std::move(rec));
            if (fresh.size() - flushed_at >= kFlushEvery) {
                flush_locked();
                flushed_at = fresh.size();
            }
        }
    };

    const int threads = std::max(1, config.workers);
    if (threads == 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int spawn = static_cast<int>(
            std::min<std::size_t>(static_cast<std::size_t>(threads), tasks.size()));
        pool.reserve(static_cast<std::size_t>(spawn));
        for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    report.computed = static_cast<int>(fresh.size());
    report.io_errors = io_errors.load();
    flush_locked();

    std::vector<std::pair<std::string, GraphFeatures>> feature_rows;
    feature_rows.reserve(graphs.size());
    for (const auto& g : graphs) feature_rows.emplace_back(g.graph_id, g.features);
    write_features_csv(features_path, feature_rows);
    return report;
}

}  // namespace gm
