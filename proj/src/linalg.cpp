#include "gm/linalg.hpp"

#include <cmath>
#include <cstdint>

#include "gm/error.hpp"

namespace gm {

Eigen::MatrixXd expm_symmetric(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "eigendecomposition failed in expm");
    const Eigen::VectorXd exp_vals = es.eigenvalues().array().exp();
    return es.eigenvectors() * exp_vals.asDiagonal() * es.eigenvectors().transpose();
}

// Higham's [13/13] Pade approximant with scaling and squaring.
Eigen::MatrixXd expm_pade(const Eigen::MatrixXd& m) {
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const Eigen::Index n = m.rows();
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // induced 1-norm
    int squarings = 0;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    }
    const Eigen::MatrixXd a = m / std::pow(2.0, squarings);

    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

    const Eigen::MatrixXd u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
             b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Eigen::MatrixXd v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
        b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

    Eigen::MatrixXd r = (v - u).partialPivLu().solve(v + u);
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

Eigen::MatrixXd pinv_symmetric(const Eigen::MatrixXd& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "eigendecomposition failed in pinv");
    const Eigen::VectorXd vals = es.eigenvalues();
    const double cutoff = tol * vals.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv_vals = Eigen::VectorXd::Zero(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        if (std::abs(vals(i)) > cutoff) inv_vals(i) = 1.0 / vals(i);
    return es.eigenvectors() * inv_vals.asDiagonal() * es.eigenvectors().transpose();
}

double spectral_radius_power(const Eigen::MatrixXd& m, double rel_tol, int max_iter) {
    const Eigen::Index n = m.rows();
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double estimate = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd w = m * v + v;  // (m + I) v
        const double next = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        if (it > 0 && std::abs(next - estimate) <= rel_tol * std::abs(next)) {
            return next - 1.0;
        }
        estimate = next;
    }
    return estimate - 1.0;
}

}  // namespace gm
