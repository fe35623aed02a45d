#include "gm/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gm/error.hpp"
#include "gm/linalg.hpp"

namespace gm {

namespace {

constexpr double kGridClamp = 1e-4;
constexpr double kLogFloor = 1e-12;
constexpr double kSeriesTol = 1e-10;
constexpr int kSeriesCap = 200;

struct CatalogEntry {
    MeasureId id;
    const char* name;
};

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {{Family::Katz, Variant::Plain}, "Katz"},
        {{Family::Katz, Variant::Log}, "logKatz"},
        {{Family::Comm, Variant::Plain}, "Comm"},
        {{Family::Comm, Variant::Log}, "logComm"},
        {{Family::DF, Variant::Plain}, "DF"},
        {{Family::DF, Variant::Log}, "logDF"},
        {{Family::For, Variant::Plain}, "For"},
        {{Family::For, Variant::Log}, "logFor"},
        {{Family::Heat, Variant::Plain}, "Heat"},
        {{Family::Heat, Variant::Log}, "logHeat"},
        {{Family::NHeat, Variant::Plain}, "NHeat"},
        {{Family::NHeat, Variant::Log}, "logNHeat"},
        {{Family::Abs, Variant::Plain}, "Abs"},
        {{Family::Abs, Variant::Log}, "logAbs"},
        {{Family::PPR, Variant::Plain}, "PPR"},
        {{Family::PPR, Variant::Log}, "logPPR"},
        {{Family::MPPR, Variant::Plain}, "MPPR"},
        {{Family::MPPR, Variant::Log}, "logMPPR"},
        {{Family::HPR, Variant::Plain}, "HPR"},
        {{Family::HPR, Variant::Log}, "logHPR"},
        {{Family::RSP, Variant::Plain}, "RSP"},
        {{Family::FE, Variant::Plain}, "FE"},
        {{Family::SCT, Variant::Plain}, "SCT"},
        {{Family::SCCT, Variant::Plain}, "SCCT"},
        {{Family::SPCT, Variant::Plain}, "SP-CT"},
    };
    return entries;
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd& m) {
    const Eigen::VectorXd row_mean = m.rowwise().mean();
    const Eigen::VectorXd col_mean = m.colwise().mean();
    const double total_mean = m.mean();
    return m - row_mean.replicate(1, m.cols()) -
           col_mean.transpose().replicate(m.rows(), 1) +
           Eigen::MatrixXd::Constant(m.rows(), m.cols(), total_mean);
}

double stable_logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

const std::vector<MeasureId>& measure_catalog() {
    static const std::vector<MeasureId> ids = [] {
        std::vector<MeasureId> v;
        for (const auto& e : catalog_entries()) v.push_back(e.id);
        return v;
    }();
    return ids;
}

int catalog_index(MeasureId m) {
    const auto& entries = catalog_entries();
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].id == m) return static_cast<int>(i);
    return -1;
}

bool is_log_eligible(Family f) {
    switch (f) {
        case Family::Katz:
        case Family::Comm:
        case Family::DF:
        case Family::For:
        case Family::Heat:
        case Family::NHeat:
        case Family::Abs:
        case Family::PPR:
        case Family::MPPR:
        case Family::HPR:
            return true;
        default:
            return false;
    }
}

std::string family_name(Family f) {
    return measure_name({f, Variant::Plain});
}

std::string measure_name(MeasureId m) {
    const int idx = catalog_index(m);
    if (idx < 0) throw Error(ErrorCode::InvalidArgument, "unknown measure");
    return catalog_entries()[static_cast<std::size_t>(idx)].name;
}

std::optional<MeasureId> parse_measure(const std::string& name) {
    for (const auto& e : catalog_entries())
        if (name == e.name) return e.id;
    return std::nullopt;
}

MeasureParam map_param(MeasureId m, double x, const DerivedMatrices& dm) {
    if (!(x >= 0.0 && x <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "grid parameter outside [0, 1]");
    MeasureParam p;
    p.x = x;
    if (m.family == Family::SPCT) {
        p.native = x;  // lambda lives on the closed interval
        return p;
    }
    const double xc = std::clamp(x, kGridClamp, 1.0 - kGridClamp);
    switch (m.family) {
        case Family::Katz:
            p.native = xc / dm.spectral_radius;
            break;
        case Family::PPR:
        case Family::MPPR:
            p.native = xc;
            break;
        default:
            p.native = xc / (1.0 - xc);  // t or beta
            break;
    }
    return p;
}

Eigen::MatrixXd distance_to_kernel(const Eigen::MatrixXd& dist) {
    return -double_center(dist);
}

Eigen::MatrixXd elementwise_log(const Eigen::MatrixXd& k, int& clamped, double floor) {
    clamped = 0;
    Eigen::MatrixXd out(k.rows(), k.cols());
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
            double v = k(i, j);
            if (v < floor) {
                v = floor;
                ++clamped;
            }
            out(i, j) = std::log(v);
        }
    }
    return out;
}

double matrix_std(const Eigen::MatrixXd& m) {
    const double mean = m.mean();
    const double var = (m.array() - mean).square().mean();
    return std::sqrt(std::max(var, 0.0));
}

MeasureEngine::MeasureEngine(const DerivedMatrices& dm, MeasureOptions opts)
    : dm_(dm), opts_(opts) {}

MeasureEngine::Eig MeasureEngine::decompose(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "eigendecomposition failed");
    return {es.eigenvectors(), es.eigenvalues()};
}

const MeasureEngine::Eig& MeasureEngine::adjacency_eig() {
    if (!adj_eig_) adj_eig_ = decompose(dm_.adjacency);
    return *adj_eig_;
}

const MeasureEngine::Eig& MeasureEngine::laplacian_eig() {
    if (!lap_eig_) lap_eig_ = decompose(dm_.laplacian);
    return *lap_eig_;
}

const MeasureEngine::Eig& MeasureEngine::norm_laplacian_eig() {
    if (!nlap_eig_) nlap_eig_ = decompose(dm_.norm_laplacian);
    return *nlap_eig_;
}

Eigen::MatrixXd MeasureEngine::katz(double alpha) {
    const Eig& eig = adjacency_eig();
    Eigen::VectorXd inv(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double denom = 1.0 - alpha * eig.values(i);
        if (std::abs(denom) < 1e-12)
            throw Error(ErrorCode::SingularMatrix, "I - alpha A is singular");
        inv(i) = 1.0 / denom;
    }
    return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd MeasureEngine::communicability(double t) {
    const Eig& eig = adjacency_eig();
    const Eigen::VectorXd e = (t * eig.values.array()).exp();
    return eig.vectors * e.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd MeasureEngine::double_factorial(double t) {
    // sum_k t^k A^k / k!! through the adjacency eigenvalues: two interleaved
    // scalar chains with term_k = term_{k-2} (t lambda)^2 / k.
    const Eig& eig = adjacency_eig();
    const Eigen::Index n = eig.values.size();
    const Eigen::ArrayXd tl = t * eig.values.array();
    const Eigen::ArrayXd tl2 = tl.square();

    std::array<Eigen::ArrayXd, 2> last = {Eigen::ArrayXd::Ones(n), tl};  // k = 0, k = 1
    Eigen::ArrayXd sum = last[0] + last[1];
    bool converged = last[1].abs().maxCoeff() <= kSeriesTol * sum.abs().maxCoeff();
    for (int k = 2; k <= kSeriesCap && !converged; ++k) {
        last[k % 2] = last[k % 2] * tl2 / static_cast<double>(k);
        sum += last[k % 2];
        if (!last[k % 2].isFinite().all())
            throw Error(ErrorCode::SeriesDivergence, "double factorial series overflowed");
        converged = last[k % 2].abs().maxCoeff() <= kSeriesTol * sum.abs().maxCoeff();
    }
    if (!converged)
        throw Error(ErrorCode::SeriesDivergence, "double factorial series hit the term cap");
    return eig.vectors * sum.matrix().asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd MeasureEngine::forest(double t) {
    const Eig& eig = laplacian_eig();
    const Eigen::VectorXd inv = (1.0 + t * eig.values.array()).inverse();
    return eig.vectors * inv.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd MeasureEngine::heat(double t) {
    const Eig& eig = laplacian_eig();
    const Eigen::VectorXd e = (-t * eig.values.array()).exp();
    return eig.vectors * e.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd MeasureEngine::normalized_heat(double t) {
    const Eig& eig = norm_laplacian_eig();
    const Eigen::VectorXd e = (-t * eig.values.array()).exp();
    return eig.vectors * e.asDiagonal() * eig.vectors.transpose();
}

Eigen::MatrixXd MeasureEngine::absorption(double t) {
    const Eigen::MatrixXd m = t * dm_.adjacency + dm_.laplacian;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "eigendecomposition failed");
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd inv(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < inv.size(); ++i) {
        const double v = es.eigenvalues()(i);
        if (std::abs(v) <= 1e-12 * scale)
            throw Error(ErrorCode::SingularMatrix, "t A + L is singular");
        inv(i) = 1.0 / v;
    }
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd MeasureEngine::personalized_pagerank(double alpha) {
    // (I - alpha P)^-1 = (D - alpha A)^-1 D; the symmetric form solves faster.
    const Eigen::MatrixXd m = Eigen::MatrixXd(dm_.degrees.asDiagonal()) - alpha * dm_.adjacency;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "I - alpha P is singular");
    return llt.solve(Eigen::MatrixXd(dm_.degrees.asDiagonal()));
}

Eigen::MatrixXd MeasureEngine::modified_ppr(double alpha) {
    const Eigen::MatrixXd m = Eigen::MatrixXd(dm_.degrees.asDiagonal()) - alpha * dm_.adjacency;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "D - alpha A is singular");
    return llt.solve(Eigen::MatrixXd::Identity(dm_.n(), dm_.n()));
}

Eigen::MatrixXd MeasureEngine::heat_pagerank(double t) {
    // expm(-t (I - P)) = D^-1/2 expm(-t L_sym) D^1/2 since
    // D^1/2 (I - P) D^-1/2 = L_sym.
    const Eigen::VectorXd sqrt_d = dm_.degrees.cwiseSqrt();
    const Eigen::VectorXd inv_sqrt_d = sqrt_d.cwiseInverse();
    return inv_sqrt_d.asDiagonal() * normalized_heat(t) * sqrt_d.asDiagonal();
}

const Eigen::MatrixXd& MeasureEngine::commute_kernel() {
    if (!commute_kernel_) commute_kernel_ = pinv_symmetric(dm_.laplacian);
    return *commute_kernel_;
}

const Eigen::MatrixXd& MeasureEngine::commute_distance() {
    if (!commute_distance_) {
        const Eigen::MatrixXd& k = commute_kernel();
        const Eigen::VectorXd diag = k.diagonal();
        commute_distance_ =
            dm_.volume *
            (diag.replicate(1, dm_.n()) + diag.transpose().replicate(dm_.n(), 1) - 2.0 * k);
    }
    return *commute_distance_;
}

RspIntermediate MeasureEngine::rsp_intermediate(double beta) {
    const Eigen::Index n = dm_.adjacency.rows();
    RspIntermediate r;
    r.w = dm_.markov.cwiseProduct((-beta * dm_.hop_distance).array().exp().matrix());

    const double radius = spectral_radius_power(r.w);
    if (radius >= 1.0 - 1e-9)
        throw Error(ErrorCode::SpectralRadiusExceeded, "W has spectral radius >= 1");

    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    r.z = (id - r.w).partialPivLu().solve(id);

    const Eigen::MatrixXd cw = dm_.hop_distance.cwiseProduct(r.w);
    r.s = (r.z * cw * r.z).cwiseQuotient(r.z);
    r.cbar = r.s - r.s.diagonal().transpose().replicate(n, 1);

    const Eigen::VectorXd inv_diag = r.z.diagonal().cwiseInverse();
    r.ztilde = r.z * inv_diag.asDiagonal();
    r.log_clamps = 0;
    r.phi = -elementwise_log(r.ztilde, r.log_clamps, kLogFloor) / beta;
    return r;
}

Eigen::MatrixXd MeasureEngine::rsp_distance(double beta) {
    const RspIntermediate r = rsp_intermediate(beta);
    return 0.5 * (r.cbar + r.cbar.transpose());
}

Eigen::MatrixXd MeasureEngine::free_energy_distance(double beta, int* log_clamps) {
    const RspIntermediate r = rsp_intermediate(beta);
    if (log_clamps) *log_clamps = r.log_clamps;
    return 0.5 * (r.phi + r.phi.transpose());
}

Eigen::MatrixXd MeasureEngine::sigmoid_of(const Eigen::MatrixXd& kernel, double t,
                                          double std_dev) const {
    const double scale = (std_dev > 0.0 ? std_dev : 1.0);
    const double sign = (opts_.sigmoid_sign == SigmoidSign::Negative) ? -1.0 : 1.0;
    const double factor = sign * t / scale;
    Eigen::MatrixXd out(kernel.rows(), kernel.cols());
    for (Eigen::Index j = 0; j < kernel.cols(); ++j)
        for (Eigen::Index i = 0; i < kernel.rows(); ++i)
            out(i, j) = stable_logistic(factor * kernel(i, j));
    return out;
}

Eigen::MatrixXd MeasureEngine::sigmoid_commute(double t) {
    const Eigen::MatrixXd& k = commute_kernel();
    if (!commute_std_) commute_std_ = matrix_std(k);
    return sigmoid_of(k, t, *commute_std_);
}

Eigen::MatrixXd MeasureEngine::sigmoid_corrected_commute(double t) {
    if (!corrected_commute_) {
        const Eigen::Index n = dm_.adjacency.rows();
        const Eigen::VectorXd inv_sqrt_d = dm_.degrees.cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXd centered =
            dm_.adjacency - dm_.degrees * dm_.degrees.transpose() / dm_.volume;
        const Eigen::MatrixXd m =
            inv_sqrt_d.asDiagonal() * centered * inv_sqrt_d.asDiagonal();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        if (es.info() != Eigen::Success)
            throw Error(ErrorCode::SingularMatrix, "eigendecomposition failed");
        Eigen::VectorXd mapped(es.eigenvalues().size());
        for (Eigen::Index i = 0; i < mapped.size(); ++i) {
            const double mu = es.eigenvalues()(i);
            if (std::abs(1.0 - mu) < 1e-12)
                throw Error(ErrorCode::SingularMatrix, "I - M is singular");
            mapped(i) = mu * mu / (1.0 - mu);
        }
        const Eigen::MatrixXd core =
            es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
        corrected_commute_ = double_center(
            Eigen::MatrixXd(inv_sqrt_d.asDiagonal() * core * inv_sqrt_d.asDiagonal()));
        corrected_commute_std_ = matrix_std(*corrected_commute_);
    }
    return sigmoid_of(*corrected_commute_, t, *corrected_commute_std_);
}

Eigen::MatrixXd MeasureEngine::sp_ct(double lambda) {
    if (!sp_kernel_scaled_) {
        Eigen::MatrixXd k = distance_to_kernel(dm_.hop_distance);
        const double mean_diag = k.diagonal().mean();
        if (std::abs(mean_diag) > 0.0) k /= mean_diag;
        sp_kernel_scaled_ = std::move(k);
    }
    if (!ct_kernel_scaled_) {
        Eigen::MatrixXd k = distance_to_kernel(commute_distance());
        const double mean_diag = k.diagonal().mean();
        if (std::abs(mean_diag) > 0.0) k /= mean_diag;
        ct_kernel_scaled_ = std::move(k);
    }
    return lambda * (*sp_kernel_scaled_) + (1.0 - lambda) * (*ct_kernel_scaled_);
}

KernelBuild MeasureEngine::build(MeasureId m, double x) {
    if (m.variant == Variant::Log && !is_log_eligible(m.family))
        throw Error(ErrorCode::InvalidArgument,
                    "log variant not defined for " + family_name(m.family));

    KernelBuild out;
    out.measure = m;
    out.param = map_param(m, x, dm_);
    const double p = out.param.native;

    Eigen::MatrixXd k;
    switch (m.family) {
        case Family::Katz: k = katz(p); break;
        case Family::Comm: k = communicability(p); break;
        case Family::DF: k = double_factorial(p); break;
        case Family::For: k = forest(p); break;
        case Family::Heat: k = heat(p); break;
        case Family::NHeat: k = normalized_heat(p); break;
        case Family::Abs: k = absorption(p); break;
        case Family::PPR: k = personalized_pagerank(p); break;
        case Family::MPPR: k = modified_ppr(p); break;
        case Family::HPR: k = heat_pagerank(p); break;
        case Family::RSP: k = distance_to_kernel(rsp_distance(p)); break;
        case Family::FE: {
            int clamps = 0;
            k = distance_to_kernel(free_energy_distance(p, &clamps));
            out.log_clamps += clamps;
            break;
        }
        case Family::SCT: k = sigmoid_commute(p); break;
        case Family::SCCT: k = sigmoid_corrected_commute(p); break;
        case Family::SPCT: k = sp_ct(p); break;
    }

    if (m.variant == Variant::Log) {
        int clamps = 0;
        k = elementwise_log(k, clamps, kLogFloor);
        out.log_clamps += clamps;
    }

    out.values = 0.5 * (k + k.transpose());
    if (!out.values.allFinite())
        throw Error(ErrorCode::NonFiniteKernel,
                    measure_name(m) + " produced non-finite entries at x = " +
                        std::to_string(x));
    return out;
}

}  // namespace gm
