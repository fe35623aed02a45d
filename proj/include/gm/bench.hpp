#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gm/clustering.hpp"
#include "gm/graph.hpp"
#include "gm/lfr.hpp"
#include "gm/measures.hpp"

namespace gm {

inline constexpr int kGridSize = 16;

// x_i = i/15: linspace over [0, 1] including both endpoints.
double grid_value(int i);

struct GraphFeatures {
    double n = 0.0;
    double tau1 = 0.0;
    double tau2 = 0.0;
    double log_avg_degree = 0.0;
    double gt_modularity = 0.0;

    double avg_degree() const;
    // The reduced triple driving the leadership filter.
    std::array<double, 3> reduced() const { return {tau1, avg_degree(), gt_modularity}; }
};

GraphFeatures compute_features(const Graph& g, const LfrParams& params);

struct GraphRecord {
    std::string graph_id;
    LfrParams params;
    GraphFeatures features;
    std::string path;
};

struct EvalRecord {
    std::string graph_id;
    MeasureId measure;
    double best_x = 0.0;
    double best_ari = 0.0;
    std::array<double, kGridSize> per_x_ari{};
    int failures = 0;
    TrialCriterion criterion = TrialCriterion::Inertia;
};

// Deterministic per-trial seed; independent of worker scheduling.
std::uint64_t trial_seed(const std::string& graph_id, MeasureId m, int grid_index,
                         int trial_index);

// Sweeps the 16-point grid; failed kernel builds contribute ARI 0 and are
// counted. best_x is the first grid value attaining the maximum.
EvalRecord evaluate_measure(const Graph& g, const std::string& graph_id, MeasureId m,
                            TrialCriterion criterion, const MeasureOptions& opts = {});

struct BenchConfig {
    TrialCriterion criterion = TrialCriterion::Inertia;
    int workers = 1;
    MeasureOptions measure_options;
};

struct BenchReport {
    int computed = 0;
    int skipped = 0;   // pairs already present in the results store
    int io_errors = 0;
};

// Evaluates every (graph, measure) pair not yet present in the results store,
// then rewrites the store sorted by (graph_id, catalog order) and the features
// store sorted by graph_id. The final files are byte-identical for any worker
// count.
BenchReport run_benchmark(const std::vector<GraphRecord>& dataset,
                          const std::vector<MeasureId>& measures, const BenchConfig& config,
                          const std::string& results_path, const std::string& features_path);

const char* criterion_name(TrialCriterion c);
TrialCriterion parse_criterion(const std::string& name);

void write_results_csv(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> read_results_csv(const std::string& path);

void write_features_csv(const std::string& path,
                        const std::vector<std::pair<std::string, GraphFeatures>>& rows);
std::map<std::string, GraphFeatures> read_features_csv(const std::string& path);

}  // namespace gm
