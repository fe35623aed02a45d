#include "gm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gm/error.hpp"
#include "gm/rng.hpp"
#include "gm/scoring.hpp"

namespace gm {

namespace {

struct ClusterStats {
    std::vector<int> sizes;
    Eigen::MatrixXd colsum;  // colsum(i, c) = sum_{j in c} K(i, j)
    Eigen::VectorXd s2;      // s2(c) = sum_{j, l in c} K(j, l)
};

ClusterStats compute_stats(const Eigen::MatrixXd& k, const std::vector<int>& labels,
                           int clusters) {
    const Eigen::Index n = k.rows();
    ClusterStats st;
    st.sizes.assign(static_cast<std::size_t>(clusters), 0);
    st.colsum = Eigen::MatrixXd::Zero(n, clusters);
    st.s2 = Eigen::VectorXd::Zero(clusters);
    for (Eigen::Index j = 0; j < n; ++j) {
        const int c = labels[static_cast<std::size_t>(j)];
        st.colsum.col(c) += k.col(j);
        ++st.sizes[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const int c = labels[static_cast<std::size_t>(j)];
        st.s2(c) += st.colsum(j, c);
    }
    return st;
}

double point_dist2(const Eigen::MatrixXd& k, const ClusterStats& st, Eigen::Index i, int c) {
    const double size = static_cast<double>(st.sizes[static_cast<std::size_t>(c)]);
    return k(i, i) - 2.0 * st.colsum(i, c) / size + st.s2(c) / (size * size);
}

void validate_kernel(const Eigen::MatrixXd& k, int clusters) {
    if (k.rows() != k.cols())
        throw Error(ErrorCode::InvalidArgument, "kernel matrix must be square");
    if (clusters < 1 || clusters > k.rows())
        throw Error(ErrorCode::InvalidArgument, "cluster count outside [1, n]");
}

std::vector<int> assign_to_seeds(const Eigen::MatrixXd& k, const std::vector<int>& seeds) {
    const Eigen::Index n = k.rows();
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < seeds.size(); ++c) {
            const auto s = static_cast<Eigen::Index>(seeds[c]);
            const double d = k(i, i) - 2.0 * k(i, s) + k(s, s);
            if (d < best) {
                best = d;
                best_c = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best_c;
    }
    return labels;
}

}  // namespace

std::vector<int> init_assignment(InitStrategy strategy, const Eigen::MatrixXd& kernel,
                                 int k, std::uint64_t seed) {
    validate_kernel(kernel, k);
    const Eigen::Index n = kernel.rows();
    std::mt19937_64 g(seed);

    switch (strategy) {
        case InitStrategy::RandomDataPoints: {
            std::vector<int> idx(static_cast<std::size_t>(n));
            for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
            for (int i = 0; i < k; ++i) {
                const auto j = static_cast<std::size_t>(uniform_int(g, i, static_cast<long long>(n) - 1));
                std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
            }
            idx.resize(static_cast<std::size_t>(k));
            return assign_to_seeds(kernel, idx);
        }

        case InitStrategy::KMeansPlusPlus: {
            std::vector<int> seeds;
            seeds.reserve(static_cast<std::size_t>(k));
            std::vector<char> chosen(static_cast<std::size_t>(n), 0);
            const int first = static_cast<int>(uniform_int(g, 0, static_cast<long long>(n) - 1));
            seeds.push_back(first);
            chosen[static_cast<std::size_t>(first)] = 1;

            Eigen::VectorXd min_d2(n);
            for (Eigen::Index i = 0; i < n; ++i)
                min_d2(i) = kernel(i, i) - 2.0 * kernel(i, first) + kernel(first, first);

            while (static_cast<int>(seeds.size()) < k) {
                double total = 0.0;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (!chosen[static_cast<std::size_t>(i)]) total += std::max(min_d2(i), 0.0);

                int pick = -1;
                if (total > 0.0) {
                    const double r = uniform01(g) * total;
                    double cum = 0.0;
                    for (Eigen::Index i = 0; i < n; ++i) {
                        if (chosen[static_cast<std::size_t>(i)]) continue;
                        const double w = std::max(min_d2(i), 0.0);
                        if (w <= 0.0) continue;
                        cum += w;
                        if (cum > r) {
                            pick = static_cast<int>(i);
                            break;
                        }
                        pick = static_cast<int>(i);  // guards against round-off at the tail
                    }
                } else {
                    std::vector<int> open;
                    for (Eigen::Index i = 0; i < n; ++i)
                        if (!chosen[static_cast<std::size_t>(i)]) open.push_back(static_cast<int>(i));
                    pick = open[static_cast<std::size_t>(uniform_int(
                        g, 0, static_cast<long long>(open.size()) - 1))];
                }

                seeds.push_back(pick);
                chosen[static_cast<std::size_t>(pick)] = 1;
                for (Eigen::Index i = 0; i < n; ++i) {
                    const double d = kernel(i, i) - 2.0 * kernel(i, pick) + kernel(pick, pick);
                    min_d2(i) = std::min(min_d2(i), d);
                }
            }
            return assign_to_seeds(kernel, seeds);
        }

        case InitStrategy::RandomPartition: {
            std::vector<int> labels(static_cast<std::size_t>(n));
            std::vector<int> sizes(static_cast<std::size_t>(k), 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                const int c = static_cast<int>(uniform_int(g, 0, static_cast<long long>(k) - 1));
                labels[static_cast<std::size_t>(i)] = c;
                ++sizes[static_cast<std::size_t>(c)];
            }
            for (int c = 0; c < k; ++c) {
                if (sizes[static_cast<std::size_t>(c)] > 0) continue;
                std::vector<int> donors;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] > 1)
                        donors.push_back(static_cast<int>(i));
                const int pick = donors[static_cast<std::size_t>(uniform_int(
                    g, 0, static_cast<long long>(donors.size()) - 1))];
                --sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(pick)])];
                labels[static_cast<std::size_t>(pick)] = c;
                ++sizes[static_cast<std::size_t>(c)];
            }
            return labels;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown init strategy");
}

double kernel_inertia(const Eigen::MatrixXd& kernel, const std::vector<int>& labels, int k) {
    const ClusterStats st = compute_stats(kernel, labels, k);
    double total = 0.0;
    for (Eigen::Index i = 0; i < kernel.rows(); ++i)
        total += point_dist2(kernel, st, i, labels[static_cast<std::size_t>(i)]);
    return total;
}

ClusteringResult kernel_kmeans_single(const Eigen::MatrixXd& kernel, int k,
                                      InitStrategy init, std::uint64_t seed, int max_iter) {
    validate_kernel(kernel, k);
    const Eigen::Index n = kernel.rows();

    ClusteringResult res;
    res.labels = init_assignment(init, kernel, k, seed);
    res.modularity = std::numeric_limits<double>::quiet_NaN();

    for (int iter = 1; iter <= max_iter; ++iter) {
        res.iterations = iter;
        const ClusterStats st = compute_stats(kernel, res.labels, k);

        std::vector<int> next(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < k; ++c) {
                if (st.sizes[static_cast<std::size_t>(c)] == 0) continue;
                const double d = point_dist2(kernel, st, i, c);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            next[static_cast<std::size_t>(i)] = best_c;
        }

        // Reseed clusters emptied by the sweep with the worst-fit point.
        for (;;) {
            std::vector<int> sizes(static_cast<std::size_t>(k), 0);
            for (int c : next) ++sizes[static_cast<std::size_t>(c)];
            int empty = -1;
            for (int c = 0; c < k; ++c)
                if (sizes[static_cast<std::size_t>(c)] == 0) {
                    empty = c;
                    break;
                }
            if (empty < 0) break;

            const ClusterStats cur = compute_stats(kernel, next, k);
            double worst = -std::numeric_limits<double>::infinity();
            Eigen::Index worst_i = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int c = next[static_cast<std::size_t>(i)];
                if (cur.sizes[static_cast<std::size_t>(c)] < 2) continue;
                const double d = point_dist2(kernel, cur, i, c);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            next[static_cast<std::size_t>(worst_i)] = empty;
            ++res.empty_cluster_events;
        }

        if (next == res.labels) {
            res.converged = true;
            break;
        }
        res.labels = std::move(next);
    }

    res.inertia = kernel_inertia(kernel, res.labels, k);
    return res;
}

ClusteringResult cluster_best_trial(const Eigen::MatrixXd& kernel, int k,
                                    const Graph& graph, const BestTrialOptions& opts) {
    static const InitStrategy strategies[3] = {
        InitStrategy::RandomDataPoints, InitStrategy::KMeansPlusPlus,
        InitStrategy::RandomPartition};

    ClusteringResult best;
    bool have_best = false;
    for (int s = 0; s < 3; ++s) {
        for (int t = 0; t < opts.trials_per_strategy; ++t) {
            const int trial = s * opts.trials_per_strategy + t;
            const std::uint64_t seed =
                opts.seed_for_trial
                    ? opts.seed_for_trial(trial)
                    : splitmix64(opts.base_seed +
                                 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(trial + 1));
            ClusteringResult res =
                kernel_kmeans_single(kernel, k, strategies[s], seed, opts.max_iter);
            res.trial_index = trial;
            res.modularity = modularity(graph, res.labels);

            bool better = false;
            if (!have_best) {
                better = true;
            } else if (opts.criterion == TrialCriterion::Inertia) {
                better = res.inertia < best.inertia;
            } else {
                better = res.modularity > best.modularity;
            }
            if (better) {
                best = std::move(res);
                have_best = true;
            }
        }
    }
    return best;
}

}  // namespace gm
