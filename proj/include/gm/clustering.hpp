#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "gm/graph.hpp"

namespace gm {

enum class InitStrategy { RandomDataPoints, KMeansPlusPlus, RandomPartition };
enum class TrialCriterion { Inertia, Modularity };

struct ClusteringResult {
    std::vector<int> labels;
    double inertia = 0.0;
    double modularity = 0.0;  // filled by cluster_best_trial
    int iterations = 0;
    bool converged = false;
    int empty_cluster_events = 0;
    int trial_index = -1;  // winning trial under cluster_best_trial
};

// Initial labeling for one trial. All randomness comes from the seed.
std::vector<int> init_assignment(InitStrategy strategy, const Eigen::MatrixXd& kernel,
                                 int k, std::uint64_t seed);

// Lloyd-style kernel k-means with the kernel-trick distance
// d^2(i, c) = K_ii - (2/|c|) sum_{j in c} K_ij + (1/|c|^2) sum_{j,l in c} K_jl.
// Batch reassignment, ties to the lower cluster index; clusters emptied by a
// sweep are reseeded with the point farthest from its own centroid.
ClusteringResult kernel_kmeans_single(const Eigen::MatrixXd& kernel, int k,
                                      InitStrategy init, std::uint64_t seed,
                                      int max_iter = 100);

struct BestTrialOptions {
    TrialCriterion criterion = TrialCriterion::Inertia;
    int trials_per_strategy = 6;
    int max_iter = 100;
    std::uint64_t base_seed = 0;
    // Optional seed override, keyed by the global trial index.
    std::function<std::uint64_t(int)> seed_for_trial;
};

// Runs trials_per_strategy trials of each init strategy and keeps the best
// labeling: minimum inertia or maximum modularity, earlier trial on ties.
ClusteringResult cluster_best_trial(const Eigen::MatrixXd& kernel, int k,
                                    const Graph& graph, const BestTrialOptions& opts = {});

// Total d^2 between every point and its centroid for a fixed labeling.
double kernel_inertia(const Eigen::MatrixXd& kernel, const std::vector<int>& labels, int k);

}  // namespace gm
