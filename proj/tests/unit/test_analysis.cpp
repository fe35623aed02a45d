#include <array>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <doctest.h>

#include "gm/analysis.hpp"
#include "gm/bench.hpp"
#include "gm/error.hpp"
#include "gm/rng.hpp"
#include "gm/textio.hpp"

using namespace gm;
namespace fs = std::filesystem;

namespace {

EvalRecord record_of(const std::string& graph_id, MeasureId m, double best_ari) {
    EvalRecord r;
    r.graph_id = graph_id;
    r.measure = m;
    r.best_ari = best_ari;
    r.best_x = 0.5;
    return r;
}

GraphFeatures features_of(double tau1, double avg_degree, double gt_modularity) {
    GraphFeatures f;
    f.n = 100;
    f.tau1 = tau1;
    f.tau2 = 1.5;
    f.log_avg_degree = std::log(avg_degree);
    f.gt_modularity = gt_modularity;
    return f;
}

const MeasureId kKatz{Family::Katz, Variant::Plain};
const MeasureId kHeat{Family::Heat, Variant::Plain};
const MeasureId kSpct{Family::SPCT, Variant::Plain};

ErrorCode thrown_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a throw");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("leaderboard splits wins and ranks between two alternating measures") {
    // Each measure wins one of the two graphs, so both end up with mean rank
    // (1+2)/2 and a 50% win share.
    std::vector<EvalRecord> records = {
        record_of("g1", kKatz, 0.9), record_of("g1", kHeat, 0.5),
        record_of("g2", kKatz, 0.4), record_of("g2", kHeat, 0.8)};
    std::map<std::string, GraphFeatures> features = {
        {"g1", features_of(2.0, 8.0, 0.4)}, {"g2", features_of(3.0, 10.0, 0.3)}};

    const auto rows = leaderboard(records, features, Subset::All);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.mean_rank == doctest::Approx(1.5));
        CHECK(row.wins_pct == doctest::Approx(50.0));
    }
    CHECK(rows[0].measure == "Katz");  // mean-rank tie resolves in catalog order
    CHECK(rows[0].mean_ari == doctest::Approx(0.65));
    CHECK(rows[1].measure == "Heat");
    CHECK(rows[1].mean_ari == doctest::Approx(0.65));
}

TEST_CASE("leaderboard gives every tied measure the averaged rank and a win") {
    std::vector<EvalRecord> records = {
        record_of("g1", kKatz, 0.7), record_of("g1", kHeat, 0.7),
        record_of("g2", kKatz, 0.6), record_of("g2", kHeat, 0.6)};
    std::map<std::string, GraphFeatures> features = {
        {"g1", features_of(2.0, 8.0, 0.4)}, {"g2", features_of(3.0, 10.0, 0.3)}};

    const auto rows = leaderboard(records, features, Subset::All);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.mean_rank == doctest::Approx(1.5));
        CHECK(row.wins_pct == doctest::Approx(100.0));
    }
}

TEST_CASE("leaderboard rank sums obey the permutation invariant") {
    // Whatever the scores, fractional ranks over m measures sum to
    // m(m+1)/2 per graph, so the mean of mean_rank is (m+1)/2.
    std::mt19937_64 rng(fnv1a64("rank-invariant"));
    std::vector<EvalRecord> records;
    std::map<std::string, GraphFeatures> features;
    const std::vector<MeasureId> measures = {kKatz, kHeat, kSpct};
    for (int g = 0; g < 7; ++g) {
        const std::string id = "g" + std::to_string(g);
        features[id] = features_of(2.0 + g, 5.0, 0.1 * g - 0.2);
        for (const auto& m : measures) {
            // Coarse scores force frequent exact ties.
            const double score = std::floor(uniform01(rng) * 3.0) / 3.0;
            records.push_back(record_of(id, m, score));
        }
    }
    const auto rows = leaderboard(records, features, Subset::All);
    REQUIRE(rows.size() == 3);
    double total = 0.0;
    for (const auto& row : rows) total += row.mean_rank;
    CHECK(total == doctest::Approx(3.0 * 4.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("leaderboard subsets split on the sign of the planted modularity") {
    std::vector<EvalRecord> records = {
        record_of("assoc", kKatz, 0.9), record_of("assoc", kHeat, 0.1),
        record_of("dissoc", kKatz, 0.2), record_of("dissoc", kHeat, 0.7)};
    std::map<std::string, GraphFeatures> features = {
        {"assoc", features_of(2.0, 8.0, 0.35)},
        {"dissoc", features_of(2.5, 6.0, -0.2)}};

    const auto assoc = leaderboard(records, features, Subset::Associative);
    REQUIRE(assoc.size() == 2);
    CHECK(assoc[0].measure == "Katz");
    CHECK(assoc[0].mean_rank == doctest::Approx(1.0));
    CHECK(assoc[0].wins_pct == doctest::Approx(100.0));
    CHECK(assoc[1].wins_pct == doctest::Approx(0.0));

    const auto dissoc = leaderboard(records, features, Subset::Dissociative);
    REQUIRE(dissoc.size() == 2);
    CHECK(dissoc[0].measure == "Heat");
    CHECK(dissoc[0].mean_ari == doctest::Approx(0.7));

    // A zero-modularity graph counts as associative (>= 0).
    features["dissoc"].gt_modularity = 0.0;
    const auto all_assoc = leaderboard(records, features, Subset::Associative);
    CHECK(all_assoc[0].mean_rank == doctest::Approx(1.5));

    // A subset with no graphs yields no rows.
    CHECK(leaderboard(records, features, Subset::Dissociative).empty());
}

TEST_CASE("leaderboard rejects incomplete inputs") {
    std::map<std::string, GraphFeatures> features = {
        {"g1", features_of(2.0, 8.0, 0.4)}, {"g2", features_of(3.0, 10.0, 0.3)}};
    CHECK(thrown_code([&] { leaderboard({}, features, Subset::All); }) ==
          ErrorCode::EmptyDataset);

    // g2 lacks the Heat record.
    std::vector<EvalRecord> partial = {record_of("g1", kKatz, 0.9),
                                       record_of("g1", kHeat, 0.5),
                                       record_of("g2", kKatz, 0.4)};
    CHECK(thrown_code([&] { leaderboard(partial, features, Subset::All); }) ==
          ErrorCode::MissingMeasure);

    // g3 has records but no feature row.
    std::vector<EvalRecord> orphan = {record_of("g3", kKatz, 0.9)};
    CHECK(thrown_code([&] { leaderboard(orphan, features, Subset::All); }) ==
          ErrorCode::MissingMeasure);
}

TEST_CASE("standardize_columns yields zero mean and unit spread") {
    Eigen::MatrixXd m(4, 3);
    m << 1, 10, 5,
         2, 20, 5,
         3, 30, 5,
         4, 40, 5;
    const Eigen::MatrixXd s = standardize_columns(m);
    for (int j = 0; j < 2; ++j) {
        CHECK(s.col(j).mean() == doctest::Approx(0.0).epsilon(1e-12));
        const double var = (s.col(j).array() - s.col(j).mean()).square().mean();
        CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
    }
    // A zero-spread column is centered but not divided.
    for (int i = 0; i < 4; ++i) CHECK(s(i, 2) == doctest::Approx(0.0));
    // Hand value: population std of {1,2,3,4} is sqrt(5)/2.
    CHECK(s(0, 0) == doctest::Approx(-1.5 / (std::sqrt(5.0) / 2.0)).epsilon(1e-12));
}

TEST_CASE("lda_importance finds the separating diagonal of two blobs") {
    // Class means sit at (-1,-1) and (1,1) with tiny isotropic spread, so the
    // discriminant direction is (1,1)/sqrt(2) up to sign.
    std::mt19937_64 rng(fnv1a64("lda-blobs"));
    const int per_class = 40;
    Eigen::MatrixXd x(2 * per_class, 2);
    std::vector<int> classes(2 * per_class);
    for (int i = 0; i < 2 * per_class; ++i) {
        const double c = i < per_class ? -1.0 : 1.0;
        x(i, 0) = c + 0.05 * (uniform01(rng) - 0.5);
        x(i, 1) = c + 0.05 * (uniform01(rng) - 0.5);
        classes[static_cast<std::size_t>(i)] = i < per_class ? 0 : 1;
    }

    const LdaResult res = lda_importance(standardize_columns(x), classes);
    REQUIRE(res.components.rows() == 1);
    CHECK(res.components.row(0).norm() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(res.components(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
    CHECK(std::abs(res.components(0, 1)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.05));
    // Both features contribute equally; the single component carries all the
    // explained variance.
    REQUIRE(res.explained_variance_ratio.size() == 1);
    CHECK(res.explained_variance_ratio[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.feature_contributions(0, 0) == doctest::Approx(std::abs(res.components(0, 0))));
}

TEST_CASE("lda_importance isolates the informative axis") {
    // Feature 0 is pure noise, feature 1 encodes the class: the component
    // must point (almost) straight along feature 1.
    std::mt19937_64 rng(fnv1a64("lda-axis"));
    const int per_class = 50;
    Eigen::MatrixXd x(2 * per_class, 2);
    std::vector<int> classes(2 * per_class);
    for (int i = 0; i < 2 * per_class; ++i) {
        classes[static_cast<std::size_t>(i)] = i < per_class ? 0 : 1;
        x(i, 0) = uniform01(rng) * 4.0 - 2.0;
        x(i, 1) = (i < per_class ? 0.0 : 5.0) + 0.1 * uniform01(rng);
    }
    const LdaResult res = lda_importance(standardize_columns(x), classes);
    CHECK(res.feature_contributions(0, 1) > 0.99);
    CHECK(res.feature_contributions(0, 0) < 0.15);
}

TEST_CASE("lda_importance keeps class-count-minus-one components") {
    std::mt19937_64 rng(fnv1a64("lda-three"));
    const int per_class = 30;
    Eigen::MatrixXd x(3 * per_class, 3);
    std::vector<int> classes(3 * per_class);
    for (int i = 0; i < 3 * per_class; ++i) {
        const int c = i / per_class;
        classes[static_cast<std::size_t>(i)] = c;
        for (int j = 0; j < 3; ++j)
            x(i, j) = (j == c ? 3.0 : 0.0) + 0.2 * uniform01(rng);
    }
    const LdaResult res = lda_importance(standardize_columns(x), classes);
    REQUIRE(res.components.rows() == 2);
    REQUIRE(res.explained_variance_ratio.size() == 2);
    const double total =
        res.explained_variance_ratio[0] + res.explained_variance_ratio[1];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.explained_variance_ratio[0] >= res.explained_variance_ratio[1]);
}

TEST_CASE("lda_importance rejects degenerate class layouts") {
    Eigen::MatrixXd x(4, 2);
    x << 0, 0, 1, 1, 2, 2, 3, 3;
    CHECK(thrown_code([&] { lda_importance(x, {0, 0, 0, 0}); }) ==
          ErrorCode::DegenerateClasses);
    CHECK(thrown_code([&] { lda_importance(x, {0, 0, 0, 1}); }) ==
          ErrorCode::DegenerateClasses);
    CHECK(thrown_code([&] { lda_importance(x, {0, 1}); }) ==
          ErrorCode::LengthMismatch);
    CHECK(thrown_code([&] { lda_importance(x, {0, 0, 1, -1}); }) ==
          ErrorCode::InvalidArgument);
}

namespace {

// Six graphs in two tau1 triplets far apart: the left triplet is Katz
// territory, the right one Heat territory; SP-CT never wins anywhere. The
// separation keeps each triplet outside the other's smoothing cutoff.
struct FilterFixture {
    std::vector<EvalRecord> records;
    std::map<std::string, GraphFeatures> features;

    FilterFixture() {
        const double katz_left[3] = {1.0, 0.8, 0.6};
        for (int i = 0; i < 6; ++i) {
            const std::string id = "g" + std::to_string(i);
            const bool left = i < 3;
            const double tau1 = left ? 2.0 + i : 29.0 + i;  // {2,3,4, 32,33,34}
            features[id] = features_of(tau1, 6.0, 0.3);
            records.push_back(record_of(id, kKatz, left ? katz_left[i] : 0.2));
            records.push_back(record_of(id, kHeat, left ? 0.4 : 0.9));
            records.push_back(record_of(id, kSpct, 0.1));
        }
    }
};

}  // namespace

TEST_CASE("build_filter_dataset joins, normalizes, and appends several") {
    FilterFixture fx;
    // Give g0 two perfect measures so "several" switches on there.
    fx.records[1].best_ari = 1.0;  // g0 Heat joins g0 Katz at 1.0
    const FilterDataset data = build_filter_dataset(fx.records, fx.features);

    REQUIRE(data.graph_ids.size() == 6);
    CHECK(std::is_sorted(data.graph_ids.begin(), data.graph_ids.end()));
    REQUIRE(data.column_names.size() == 4);
    CHECK(data.column_names[0] == "Katz");
    CHECK(data.column_names[1] == "Heat");
    CHECK(data.column_names[2] == "SP-CT");
    CHECK(data.column_names[3] == "several");

    // Points carry (tau1, avg_degree, modularity) divided by the column std.
    REQUIRE(data.points.rows() == 6);
    for (int d = 0; d < 3; ++d) {
        CHECK(data.feature_std[static_cast<std::size_t>(d)] > 0.0);
    }
    // tau1 of g0 is 2.0; the population std of {2,3,4,32,33,34} is
    // sqrt(677/3).
    const double tau_std = std::sqrt(677.0 / 3.0);
    CHECK(data.feature_std[0] == doctest::Approx(tau_std).epsilon(1e-12));
    CHECK(data.points(0, 0) == doctest::Approx(2.0 / tau_std).epsilon(1e-12));
    // Constant columns keep std 1 and pass through unchanged.
    CHECK(data.feature_std[1] == doctest::Approx(1.0));
    CHECK(data.points(0, 1) == doctest::Approx(6.0));
    CHECK(data.feature_std[2] == doctest::Approx(1.0));
    CHECK(data.points(0, 2) == doctest::Approx(0.3));

    // ARI columns mirror the records; several is 1 only on g0.
    CHECK(data.aris(0, 0) == doctest::Approx(1.0));
    CHECK(data.aris(0, 3) == doctest::Approx(1.0));
    for (int i = 1; i < 6; ++i) CHECK(data.aris(i, 3) == doctest::Approx(0.0));

    // Tie order starts at the synthetic column, then follows the global
    // leaderboard.
    REQUIRE(data.tie_order.size() == 4);
    CHECK(data.tie_order[0] == 3);
    const auto board = leaderboard(fx.records, fx.features, Subset::All);
    CHECK(data.column_names[static_cast<std::size_t>(data.tie_order[1])] ==
          board[0].measure);
}

TEST_CASE("gaussian_filter_winner needs support and weights by distance") {
    FilterFixture fx;
    const FilterDataset data = build_filter_dataset(fx.records, fx.features);
    FilterConfig config;  // sigma 0.6, cutoff 1.8

    // Far away from every sample: no support, no winner.
    const LeadershipCell empty =
        gaussian_filter_winner({100.0, 100.0, 100.0}, data, config);
    CHECK(empty.support == 0);
    CHECK(empty.winner.empty());
    CHECK(empty.winner_ari == doctest::Approx(0.0));

    // Centered on the left cluster: Katz wins with its smoothed score.
    const std::array<double, 3> left = {data.points(1, 0), data.points(1, 1),
                                        data.points(1, 2)};
    const LeadershipCell lcell = gaussian_filter_winner(left, data, config);
    CHECK(lcell.winner == "Katz");
    CHECK(lcell.winner_ari > 0.5);

    // Centered on the right cluster: Heat takes over.
    const std::array<double, 3> right = {data.points(4, 0), data.points(4, 1),
                                         data.points(4, 2)};
    const LeadershipCell rcell = gaussian_filter_winner(right, data, config);
    CHECK(rcell.winner == "Heat");

    // Frozen smoothing check at g1's location with the default sigma: the
    // cutoff admits exactly the left triplet, at distances {1, 0, 1} tau
    // units of 1/std each in normalized space; the right triplet sits more
    // than the cutoff away.
    const double u = 1.0 / data.feature_std[0];  // normalized unit spacing
    REQUIRE(2.0 * u < config.cutoff());
    REQUIRE(28.0 * u >= config.cutoff());
    const double w = std::exp(-u * u / (2.0 * config.sigma * config.sigma));
    const double want_katz = (w * 1.0 + 1.0 * 0.8 + w * 0.6) / (2.0 * w + 1.0);
    CHECK(lcell.support == 3);
    CHECK(lcell.winner_ari == doctest::Approx(want_katz).epsilon(1e-12));

    CHECK(thrown_code([&] {
              FilterConfig bad;
              bad.sigma = 0.0;
              gaussian_filter_winner({0, 0, 0}, data, bad);
          }) == ErrorCode::InvalidArgument);
}

TEST_CASE("gaussian_filter_winner breaks exact ties by tie order") {
    // Two measures with identical columns: the leaderboard puts the first
    // catalog entry ahead, so it wins the smoothed tie as well.
    std::vector<EvalRecord> records;
    std::map<std::string, GraphFeatures> features;
    for (int i = 0; i < 4; ++i) {
        const std::string id = "g" + std::to_string(i);
        features[id] = features_of(2.0 + i, 8.0, 0.3);
        records.push_back(record_of(id, kKatz, 0.6));
        records.push_back(record_of(id, kHeat, 0.6));
    }
    const FilterDataset data = build_filter_dataset(records, features);
    const LeadershipCell cell = gaussian_filter_winner(
        {data.points(1, 0), data.points(1, 1), data.points(1, 2)}, data,
        FilterConfig{});
    CHECK(cell.winner == "Katz");

    // When two measures are perfect on every graph, "several" outranks both.
    for (auto& r : records) r.best_ari = 1.0;
    const FilterDataset perfect = build_filter_dataset(records, features);
    const LeadershipCell pcell = gaussian_filter_winner(
        {perfect.points(1, 0), perfect.points(1, 1), perfect.points(1, 2)},
        perfect, FilterConfig{});
    CHECK(pcell.winner == "several");
}

TEST_CASE("leadership_map recovers the planted zones") {
    FilterFixture fx;
    FilterConfig config;
    config.grid_resolution = 7;
    const LeadershipMap map = leadership_map(fx.records, fx.features, config);

    CHECK(map.resolution == 7);
    REQUIRE(map.cells.size() == 7u * 7u * 7u);

    // Grid coordinates only vary along tau1 here (the other features are
    // constant), so winners change along the x index only: Katz low, Heat
    // high, and nothing else ever wins.
    int katz_cells = 0, heat_cells = 0;
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
        const auto& cell = map.cells[i];
        if (cell.winner.empty()) continue;
        if (cell.winner == "Katz") ++katz_cells;
        if (cell.winner == "Heat") ++heat_cells;
        CHECK((cell.winner == "Katz" || cell.winner == "Heat"));
    }
    CHECK(katz_cells > 0);
    CHECK(heat_cells > 0);

    // The first grid plane lies in Katz territory, the last in Heat's.
    CHECK(map.cells.front().winner == "Katz");
    CHECK(map.cells.back().winner == "Heat");

    // Summary counts agree with the cells and form one block each.
    REQUIRE(map.summary.size() == 2);
    int total = 0;
    for (const auto& s : map.summary) {
        total += s.cells;
        CHECK(s.components == 1);
        CHECK((s.winner == "Katz" || s.winner == "Heat"));
    }
    CHECK(total == katz_cells + heat_cells);
    CHECK(map.summary[0].cells >= map.summary[1].cells);

    // The map is insensitive to record order.
    std::vector<EvalRecord> shuffled = fx.records;
    std::reverse(shuffled.begin(), shuffled.end());
    const LeadershipMap again = leadership_map(shuffled, fx.features, config);
    REQUIRE(again.cells.size() == map.cells.size());
    for (std::size_t i = 0; i < map.cells.size(); ++i) {
        CHECK(again.cells[i].winner == map.cells[i].winner);
        CHECK(again.cells[i].support == map.cells[i].support);
    }

    CHECK(thrown_code([&] {
              FilterConfig bad;
              bad.grid_resolution = 1;
              leadership_map(fx.records, fx.features, bad);
          }) == ErrorCode::InvalidArgument);
}

TEST_CASE("analysis writers emit the documented headers and rows") {
    const fs::path dir = fs::temp_directory_path() / "gm_analysis_out";
    fs::remove_all(dir);
    fs::create_directories(dir);

    FilterFixture fx;
    const auto rows = leaderboard(fx.records, fx.features, Subset::All);
    const std::string lb_path = (dir / "leaderboard.csv").string();
    write_leaderboard_csv(lb_path, rows);
    const std::string lb = read_file(lb_path);
    CHECK(lb.rfind("measure,mean_rank,wins_pct,mean_ari\n", 0) == 0);
    CHECK(lb.find("Katz,") != std::string::npos);

    FilterConfig config;
    config.grid_resolution = 4;
    const LeadershipMap map = leadership_map(fx.records, fx.features, config);
    const std::string zones_path = (dir / "zones.csv").string();
    write_zones_csv(zones_path, map);
    const std::string zones = read_file(zones_path);
    CHECK(zones.rfind("tau1,avg_degree,modularity,winner,support\n", 0) == 0);
    // 64 cells plus the header, each row denormalized back to feature units.
    CHECK(std::count(zones.begin(), zones.end(), '\n') == 65);
    CHECK(zones.find(",6,") != std::string::npos);  // constant avg_degree axis

    const std::string summary_path = (dir / "summary.csv").string();
    write_zone_summary_csv(summary_path, map);
    CHECK(read_file(summary_path).rfind("winner,cells,components\n", 0) == 0);

    // LDA report plumbing over a tiny synthetic problem.
    std::mt19937_64 rng(fnv1a64("writer-lda"));
    Eigen::MatrixXd x(20, 2);
    std::vector<int> classes(20);
    for (int i = 0; i < 20; ++i) {
        classes[static_cast<std::size_t>(i)] = i < 10 ? 0 : 1;
        x(i, 0) = (i < 10 ? 0.0 : 4.0) + uniform01(rng);
        x(i, 1) = uniform01(rng);
    }
    const LdaResult lda = lda_importance(standardize_columns(x), classes);
    const std::string var_path = (dir / "lda_var.csv").string();
    write_lda_variance_csv(var_path, lda);
    CHECK(read_file(var_path).rfind("component,explained_variance_ratio\n", 0) == 0);

    const std::string contrib_path = (dir / "lda_contrib.csv").string();
    write_lda_contributions_csv(contrib_path, lda, {"f0", "f1"});
    const std::string contrib = read_file(contrib_path);
    CHECK(contrib.rfind("component,feature,abs_weight\n", 0) == 0);
    CHECK(contrib.find("0,f0,") != std::string::npos);
    CHECK(contrib.find("0,f1,") != std::string::npos);

    const std::string report = lda_report_text(lda, {"f0", "f1"}, {{"Katz", 10}, {"Heat", 10}});
    CHECK(report.find("Katz (10 graphs)") != std::string::npos);
    CHECK(report.find("component 0") != std::string::npos);
    CHECK(report.find("f0") != std::string::npos);

    // Slice SVGs: one file per axis and slice index, each well-formed.
    const std::string svg_dir = (dir / "svg").string();
    write_slice_svgs(svg_dir, map);
    int svg_count = 0;
    for (const auto& entry : fs::directory_iterator(svg_dir)) {
        ++svg_count;
        const std::string body = read_file(entry.path().string());
        CHECK(body.rfind("<svg", 0) == 0);
        CHECK(body.find("</svg>") != std::string::npos);
    }
    CHECK(svg_count == 3 * config.grid_resolution);
}
