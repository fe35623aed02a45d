#pragma once

#include <Eigen/Dense>

namespace gm {

// Matrix exponential of a symmetric matrix via eigendecomposition.
Eigen::MatrixXd expm_symmetric(const Eigen::MatrixXd& m);

// Matrix exponential of a general square matrix via Pade [13/13] scaling and
// squaring. Kept as an independent second route for cross-checking.
Eigen::MatrixXd expm_pade(const Eigen::MatrixXd& m);

// Moore-Penrose pseudoinverse of a symmetric matrix. Eigenvalues with
// |lambda| <= tol * max|lambda| are treated as exact zeros.
Eigen::MatrixXd pinv_symmetric(const Eigen::MatrixXd& m, double tol = 1e-10);

// Spectral radius of an entrywise-nonnegative matrix. Power iteration runs on
// m + I with a deterministic all-ones start: the shift makes the Perron root
// strictly dominant even for bipartite adjacency spectra.
double spectral_radius_power(const Eigen::MatrixXd& m, double rel_tol = 1e-10,
                             int max_iter = 100000);

}  // namespace gm
