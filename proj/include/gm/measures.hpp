#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gm/matrices.hpp"

namespace gm {

enum class Family {
    Katz, Comm, DF, For, Heat, NHeat, Abs, PPR, MPPR, HPR,
    RSP, FE, SCT, SCCT, SPCT,
};

enum class Variant { Plain, Log };

struct MeasureId {
    Family family = Family::Katz;
    Variant variant = Variant::Plain;
    bool operator==(const MeasureId&) const = default;
};

// The 25 valid (family, variant) pairs: each of the first ten families in
// plain and log form, then the five distance/sigmoid families.
const std::vector<MeasureId>& measure_catalog();
int catalog_index(MeasureId m);
bool is_log_eligible(Family f);
std::string family_name(Family f);
std::string measure_name(MeasureId m);  // "Katz", "logKatz", ..., "SP-CT"
std::optional<MeasureId> parse_measure(const std::string& name);

// Grid parameter mapped to the family's native domain. x is clamped to
// [1e-4, 1 - 1e-4] except for SP-CT, whose lambda lives on the closed [0, 1].
// Katz: alpha = x / rho; PPR, MPPR: alpha = x; t and beta families: x/(1-x).
struct MeasureParam {
    double x = 0.0;
    double native = 0.0;
};
MeasureParam map_param(MeasureId m, double x, const DerivedMatrices& dm);

// Double centering -H D H with H = I - E/n; rows and columns sum to zero.
Eigen::MatrixXd distance_to_kernel(const Eigen::MatrixXd& dist);

// Elementwise natural log with entries clamped below at `floor` first;
// `clamped` reports how many entries were raised.
Eigen::MatrixXd elementwise_log(const Eigen::MatrixXd& k, int& clamped, double floor = 1e-12);

// Sign inside the sigmoid transfer of SCT and SCCT. Negative matches the
// printed formula sigma(-t K / std K); Positive flips it, which is what
// actually groups similar nodes under kernel k-means.
enum class SigmoidSign { Negative, Positive };

struct MeasureOptions {
    SigmoidSign sigmoid_sign = SigmoidSign::Negative;
};

struct KernelBuild {
    Eigen::MatrixXd values;  // symmetric, all entries finite
    MeasureId measure;
    MeasureParam param;
    int log_clamps = 0;
};

struct RspIntermediate {
    Eigen::MatrixXd w;       // P .* exp(-beta C)
    Eigen::MatrixXd z;       // (I - W)^-1
    Eigen::MatrixXd s;       // (Z (C .* W) Z) ./ Z
    Eigen::MatrixXd cbar;    // S - e diag(S)^T
    Eigen::MatrixXd ztilde;  // Z Diag(Z)^-1
    Eigen::MatrixXd phi;     // -(1/beta) log Ztilde
    int log_clamps = 0;
};

// Builds every measure family for one graph, caching parameter-independent
// pieces (spectral decompositions, L+, commute distances, the corrected
// commute-time base). Not safe for concurrent use from multiple threads.
class MeasureEngine {
public:
    explicit MeasureEngine(const DerivedMatrices& dm, MeasureOptions opts = {});

    const DerivedMatrices& matrices() const { return dm_; }
    const MeasureOptions& options() const { return opts_; }

    // Maps x, dispatches, applies the log variant, symmetrizes, validates.
    KernelBuild build(MeasureId m, double x);

    // Raw family formulas (pre-log, pre-symmetrization), exposed for oracles.
    Eigen::MatrixXd katz(double alpha);
    Eigen::MatrixXd communicability(double t);
    Eigen::MatrixXd double_factorial(double t);
    Eigen::MatrixXd forest(double t);
    Eigen::MatrixXd heat(double t);
    Eigen::MatrixXd normalized_heat(double t);
    Eigen::MatrixXd absorption(double t);
    Eigen::MatrixXd personalized_pagerank(double alpha);
    Eigen::MatrixXd modified_ppr(double alpha);
    Eigen::MatrixXd heat_pagerank(double t);
    RspIntermediate rsp_intermediate(double beta);
    Eigen::MatrixXd rsp_distance(double beta);
    Eigen::MatrixXd free_energy_distance(double beta, int* log_clamps = nullptr);
    Eigen::MatrixXd sigmoid_commute(double t);
    Eigen::MatrixXd sigmoid_corrected_commute(double t);
    Eigen::MatrixXd sp_ct(double lambda);

    const Eigen::MatrixXd& commute_kernel();    // L+
    const Eigen::MatrixXd& commute_distance();  // vol * (L+_ii + L+_jj - 2 L+_ij)

private:
    struct Eig {
        Eigen::MatrixXd vectors;
        Eigen::VectorXd values;
    };
    const Eig& adjacency_eig();
    const Eig& laplacian_eig();
    const Eig& norm_laplacian_eig();
    static Eig decompose(const Eigen::MatrixXd& m);

    Eigen::MatrixXd sigmoid_of(const Eigen::MatrixXd& kernel, double t, double std_dev) const;

    const DerivedMatrices& dm_;
    MeasureOptions opts_;

    std::optional<Eig> adj_eig_, lap_eig_, nlap_eig_;
    std::optional<Eigen::MatrixXd> commute_kernel_, commute_distance_;
    std::optional<double> commute_std_;
    std::optional<Eigen::MatrixXd> corrected_commute_;
    std::optional<double> corrected_commute_std_;
    std::optional<Eigen::MatrixXd> sp_kernel_scaled_, ct_kernel_scaled_;
};

// Population standard deviation over all n^2 entries.
double matrix_std(const Eigen::MatrixXd& m);

}  // namespace gm
