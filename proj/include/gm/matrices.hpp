#pragma once

#include <Eigen/Dense>

#include "gm/graph.hpp"

namespace gm {

// Dense matrices derived once per graph; inputs to every measure family.
struct DerivedMatrices {
    Eigen::MatrixXd adjacency;       // A, symmetric 0/1
    Eigen::VectorXd degrees;         // d = A 1
    Eigen::MatrixXd laplacian;       // L = D - A
    Eigen::MatrixXd markov;          // P = D^-1 A
    Eigen::MatrixXd norm_laplacian;  // D^-1/2 L D^-1/2
    Eigen::MatrixXd hop_distance;    // C, BFS hop counts
    double volume = 0.0;             // sum of A = 2|E|
    double spectral_radius = 0.0;    // rho(A)

    int n() const { return static_cast<int>(adjacency.rows()); }
};

// Throws Error(DisconnectedGraph) / Error(ZeroDegreeNode).
DerivedMatrices derive_matrices(const Graph& g);

}  // namespace gm
