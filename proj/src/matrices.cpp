#include "gm/matrices.hpp"

#include <cmath>

#include "gm/error.hpp"
#include "gm/linalg.hpp"

namespace gm {

DerivedMatrices derive_matrices(const Graph& g) {
    const int n = g.n;
    const auto adj = g.adjacency_list();
    for (int i = 0; i < n; ++i)
        if (adj[static_cast<std::size_t>(i)].empty())
            throw Error(ErrorCode::ZeroDegreeNode, "node " + std::to_string(i) + " has no edges");
    if (!is_connected(g))
        throw Error(ErrorCode::DisconnectedGraph, "measures need a connected graph");

    DerivedMatrices dm;
    dm.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [u, v] : g.edges) {
        dm.adjacency(u, v) = 1.0;
        dm.adjacency(v, u) = 1.0;
    }
    dm.degrees = dm.adjacency.rowwise().sum();
    dm.volume = dm.degrees.sum();
    dm.laplacian = Eigen::MatrixXd(dm.degrees.asDiagonal()) - dm.adjacency;

    const Eigen::VectorXd inv_d = dm.degrees.cwiseInverse();
    const Eigen::VectorXd inv_sqrt_d = dm.degrees.cwiseSqrt().cwiseInverse();
    dm.markov = inv_d.asDiagonal() * dm.adjacency;
    dm.norm_laplacian = inv_sqrt_d.asDiagonal() * dm.laplacian * inv_sqrt_d.asDiagonal();

    dm.hop_distance = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        const auto dist = bfs_distances(adj, s);
        for (int t = 0; t < n; ++t)
            dm.hop_distance(s, t) = static_cast<double>(dist[static_cast<std::size_t>(t)]);
    }

    dm.spectral_radius = spectral_radius_power(dm.adjacency);
    return dm;
}

}  // namespace gm
