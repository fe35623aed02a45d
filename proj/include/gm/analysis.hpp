#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gm/bench.hpp"

namespace gm {

enum class Subset { Associative, Dissociative, All };

struct LeaderboardRow {
    std::string measure;
    double mean_rank = 0.0;
    double wins_pct = 0.0;
    double mean_ari = 0.0;
};

// Fractional (average) ranks per graph, descending best_ari; a measure wins
// a graph when its best_ari equals the graph maximum (ties all win). Rows
// sorted by mean_rank ascending. Associative keeps gt_modularity >= 0.
std::vector<LeaderboardRow> leaderboard(const std::vector<EvalRecord>& records,
                                        const std::map<std::string, GraphFeatures>& features,
                                        Subset subset);

struct LdaResult {
    Eigen::MatrixXd components;  // one unit-norm direction per row
    std::vector<double> explained_variance_ratio;
    Eigen::MatrixXd feature_contributions;  // |components|
};

// Between-class vs within-class generalized eigenproblem; within-class
// scatter regularized by ridge * I. Callers pass standardized features.
LdaResult lda_importance(const Eigen::MatrixXd& features, const std::vector<int>& classes,
                         double ridge = 1e-6);

// (x - column mean) / column population std; zero-spread columns pass through.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m);

struct FilterConfig {
    double sigma = 0.6;
    int grid_resolution = 20;
    double cutoff() const { return 3.0 * sigma; }
};

struct FilterDataset {
    std::vector<std::string> graph_ids;     // row order (sorted ascending)
    std::vector<std::string> column_names;  // measure names plus "several"
    Eigen::MatrixXd points;                 // N x 3, normalized by feature std
    Eigen::MatrixXd aris;                   // N x columns
    std::vector<int> tie_order;             // column priority for exact ties
    std::array<double, 3> feature_std{};
};

// Joins records with features over {tau1, avg_degree, gt_modularity},
// appends the synthetic "several" column (1.0 where >= 2 measures reach
// ARI 1.0), and normalizes each feature by its dataset std.
FilterDataset build_filter_dataset(const std::vector<EvalRecord>& records,
                                   const std::map<std::string, GraphFeatures>& features);

struct LeadershipCell {
    std::array<double, 3> point{};  // normalized coordinates
    std::string winner;             // empty while support < 3
    int support = 0;
    double winner_ari = 0.0;        // smoothed value of the winning column
};

LeadershipCell gaussian_filter_winner(const std::array<double, 3>& point,
                                      const FilterDataset& data, const FilterConfig& config);

struct WinnerSummary {
    std::string winner;
    int cells = 0;
    int components = 0;  // 6-connected same-winner regions
};

struct LeadershipMap {
    std::vector<LeadershipCell> cells;  // tau1-major, modularity-minor order
    std::vector<WinnerSummary> summary;
    std::array<double, 3> feature_std{};
    int resolution = 0;
};

LeadershipMap leadership_map(const std::vector<EvalRecord>& records,
                             const std::map<std::string, GraphFeatures>& features,
                             const FilterConfig& config);

void write_leaderboard_csv(const std::string& path, const std::vector<LeaderboardRow>& rows);
void write_zones_csv(const std::string& path, const LeadershipMap& map);
void write_zone_summary_csv(const std::string& path, const LeadershipMap& map);

std::string lda_report_text(const LdaResult& lda, const std::vector<std::string>& feature_names,
                            const std::vector<std::pair<std::string, int>>& class_counts);
void write_lda_variance_csv(const std::string& path, const LdaResult& lda);
void write_lda_contributions_csv(const std::string& path, const LdaResult& lda,
                                 const std::vector<std::string>& feature_names);

// One SVG heat map per fixed-coordinate slice of the leadership grid.
void write_slice_svgs(const std::string& dir, const LeadershipMap& map);

}  // namespace gm
