#include "gm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "gm/error.hpp"
#include "gm/textio.hpp"

namespace gm {

namespace {

struct GraphEntry {
    std::string graph_id;
    GraphFeatures features;
    std::vector<double> aris;  // indexed like the shared measure list
};

// Groups records per graph, checks every graph carries the same measure set,
// and joins the features. Output is sorted by graph_id.
std::vector<GraphEntry> join_records(const std::vector<EvalRecord>& records,
                                     const std::map<std::string, GraphFeatures>& features,
                                     std::vector<MeasureId>& measures_out) {
    if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no evaluation records");

    std::map<std::string, std::map<int, double>> per_graph;
    std::set<int> measure_set;
    for (const auto& r : records) {
        const int idx = catalog_index(r.measure);
        per_graph[r.graph_id][idx] = r.best_ari;
        measure_set.insert(idx);
    }

    measures_out.clear();
    for (int idx : measure_set) measures_out.push_back(measure_catalog()[static_cast<std::size_t>(idx)]);

    std::vector<GraphEntry> entries;
    entries.reserve(per_graph.size());
    for (const auto& [id, aris] : per_graph) {
        if (aris.size() != measure_set.size())
            throw Error(ErrorCode::MissingMeasure, "graph " + id + " lacks some measure records");
        const auto feat = features.find(id);
        if (feat == features.end())
            throw Error(ErrorCode::MissingMeasure, "graph " + id + " missing from features");
        GraphEntry e;
        e.graph_id = id;
        e.features = feat->second;
        e.aris.reserve(aris.size());
        for (const auto& [idx, ari] : aris) e.aris.push_back(ari);
        entries.push_back(std::move(e));
    }
    return entries;
}

bool in_subset(const GraphFeatures& f, Subset subset) {
    switch (subset) {
        case Subset::Associative: return f.gt_modularity >= 0.0;
        case Subset::Dissociative: return f.gt_modularity < 0.0;
        case Subset::All: return true;
    }
    return true;
}

const std::array<const char*, 3> kFeatureAxisNames = {"tau1", "avg_degree", "modularity"};

}  // namespace

std::vector<LeaderboardRow> leaderboard(const std::vector<EvalRecord>& records,
                                        const std::map<std::string, GraphFeatures>& features,
                                        Subset subset) {
    std::vector<MeasureId> measures;
    const auto entries = join_records(records, features, measures);
    const std::size_t m = measures.size();

    std::vector<double> rank_sum(m, 0.0), ari_sum(m, 0.0);
    std::vector<int> wins(m, 0);
    int graphs = 0;

    for (const auto& e : entries) {
        if (!in_subset(e.features, subset)) continue;
        ++graphs;

        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (e.aris[a] != e.aris[b]) return e.aris[a] > e.aris[b];
            return a < b;
        });

        std::size_t pos = 0;
        while (pos < m) {
            std::size_t end = pos;
            while (end + 1 < m && e.aris[order[end + 1]] == e.aris[order[pos]]) ++end;
            const double avg_rank = 0.5 * static_cast<double>(pos + 1 + end + 1);
            for (std::size_t i = pos; i <= end; ++i) rank_sum[order[i]] += avg_rank;
            pos = end + 1;
        }

        const double best = *std::max_element(e.aris.begin(), e.aris.end());
        for (std::size_t i = 0; i < m; ++i) {
            ari_sum[i] += e.aris[i];
            if (e.aris[i] == best) ++wins[i];
        }
    }

    std::vector<LeaderboardRow> rows;
    if (graphs == 0) return rows;
    rows.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        LeaderboardRow row;
        row.measure = measure_name(measures[i]);
        row.mean_rank = rank_sum[i] / static_cast<double>(graphs);
        row.wins_pct = 100.0 * static_cast<double>(wins[i]) / static_cast<double>(graphs);
        row.mean_ari = ari_sum[i] / static_cast<double>(graphs);
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].mean_rank != rows[b].mean_rank) return rows[a].mean_rank < rows[b].mean_rank;
        return a < b;  // ties keep catalog order
    });
    std::vector<LeaderboardRow> sorted;
    sorted.reserve(m);
    for (std::size_t i : order) sorted.push_back(std::move(rows[i]));
    return sorted;
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out = m;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double mean = m.col(j).mean();
        const double var = (m.col(j).array() - mean).square().mean();
        const double std_dev = std::sqrt(std::max(var, 0.0));
        out.col(j).array() -= mean;
        if (std_dev > 0.0) out.col(j) /= std_dev;
    }
    return out;
}

LdaResult lda_importance(const Eigen::MatrixXd& features, const std::vector<int>& classes,
                         double ridge) {
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    if (static_cast<std::size_t>(n) != classes.size())
        throw Error(ErrorCode::LengthMismatch, "class labels do not cover every sample");

    int c_count = 0;
    for (int c : classes) {
        if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative class label");
        c_count = std::max(c_count, c + 1);
    }
    std::vector<int> sizes(static_cast<std::size_t>(c_count), 0);
    for (int c : classes) ++sizes[static_cast<std::size_t>(c)];
    if (c_count < 2)
        throw Error(ErrorCode::DegenerateClasses, "need at least two winner classes");
    for (int c = 0; c < c_count; ++c)
        if (sizes[static_cast<std::size_t>(c)] < 2)
            throw Error(ErrorCode::DegenerateClasses,
                        "class " + std::to_string(c) + " has fewer than two samples");

    const Eigen::VectorXd global_mean = features.colwise().mean();
    Eigen::MatrixXd class_means = Eigen::MatrixXd::Zero(c_count, p);
    for (Eigen::Index i = 0; i < n; ++i)
        class_means.row(classes[static_cast<std::size_t>(i)]) += features.row(i);
    for (int c = 0; c < c_count; ++c)
        class_means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);

    Eigen::MatrixXd sw = ridge * Eigen::MatrixXd::Identity(p, p);
    Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd d =
            features.row(i).transpose() - class_means.row(classes[static_cast<std::size_t>(i)]).transpose();
        sw += d * d.transpose();
    }
    for (int c = 0; c < c_count; ++c) {
        const Eigen::VectorXd d = class_means.row(c).transpose() - global_mean;
        sb += static_cast<double>(sizes[static_cast<std::size_t>(c)]) * d * d.transpose();
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sb, sw);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::SingularMatrix, "generalized eigensolver failed");

    const Eigen::Index keep = std::min<Eigen::Index>(p, c_count - 1);
    LdaResult res;
    res.components = Eigen::MatrixXd::Zero(keep, p);
    res.explained_variance_ratio.resize(static_cast<std::size_t>(keep), 0.0);

    double total = 0.0;
    std::vector<double> vals(static_cast<std::size_t>(keep), 0.0);
    for (Eigen::Index i = 0; i < keep; ++i) {
        const Eigen::Index src = p - 1 - i;  // eigenvalues come out ascending
        vals[static_cast<std::size_t>(i)] = std::max(solver.eigenvalues()(src), 0.0);
        total += vals[static_cast<std::size_t>(i)];
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        const double norm = v.norm();
        if (norm > 0.0) v /= norm;
        res.components.row(i) = v.transpose();
    }
    for (Eigen::Index i = 0; i < keep; ++i)
        res.explained_variance_ratio[static_cast<std::size_t>(i)] =
            total > 0.0 ? vals[static_cast<std::size_t>(i)] / total
                        : 1.0 / static_cast<double>(keep);

    res.feature_contributions = res.components.cwiseAbs();
    return res;
}

FilterDataset build_filter_dataset(const std::vector<EvalRecord>& records,
                                   const std::map<std::string, GraphFeatures>& features) {
    std::vector<MeasureId> measures;
    const auto entries = join_records(records, features, measures);
    const auto n = static_cast<Eigen::Index>(entries.size());
    const auto m = static_cast<Eigen::Index>(measures.size());

    FilterDataset data;
    for (const auto& id : measures) data.column_names.push_back(measure_name(id));
    data.column_names.push_back("several");

    data.points.resize(n, 3);
    data.aris.resize(n, m + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& e = entries[static_cast<std::size_t>(i)];
        data.graph_ids.push_back(e.graph_id);
        const auto reduced = e.features.reduced();
        for (int d = 0; d < 3; ++d) data.points(i, d) = reduced[static_cast<std::size_t>(d)];
        int perfect = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            data.aris(i, j) = e.aris[static_cast<std::size_t>(j)];
            if (e.aris[static_cast<std::size_t>(j)] == 1.0) ++perfect;
        }
        data.aris(i, m) = perfect >= 2 ? 1.0 : 0.0;
    }

    for (int d = 0; d < 3; ++d) {
        const double mean = data.points.col(d).mean();
        const double var = (data.points.col(d).array() - mean).square().mean();
        const double std_dev = std::sqrt(std::max(var, 0.0));
        // A spread at the rounding noise floor is a constant column; dividing
        // by it would blow the coordinates up by ~1e15.
        const double floor = 1e-12 * std::max(1.0, data.points.col(d).cwiseAbs().maxCoeff());
        data.feature_std[static_cast<std::size_t>(d)] = std_dev > floor ? std_dev : 1.0;
        data.points.col(d) /= data.feature_std[static_cast<std::size_t>(d)];
    }

    // Tie priority: "several" first, then global leaderboard order.
    data.tie_order.push_back(static_cast<int>(m));
    std::map<std::string, int> column_of;
    for (Eigen::Index j = 0; j < m; ++j)
        column_of[data.column_names[static_cast<std::size_t>(j)]] = static_cast<int>(j);
    for (const auto& row : leaderboard(records, features, Subset::All))
        data.tie_order.push_back(column_of.at(row.measure));
    return data;
}

LeadershipCell gaussian_filter_winner(const std::array<double, 3>& point,
                                      const FilterDataset& data, const FilterConfig& config) {
    if (config.sigma <= 0.0) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");

    LeadershipCell cell;
    cell.point = point;
    const double cutoff2 = config.cutoff() * config.cutoff();
    const double denom = 2.0 * config.sigma * config.sigma;

    Eigen::VectorXd acc = Eigen::VectorXd::Zero(data.aris.cols());
    double weight_sum = 0.0;
    for (Eigen::Index i = 0; i < data.points.rows(); ++i) {
        double d2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            const double delta = data.points(i, d) - point[static_cast<std::size_t>(d)];
            d2 += delta * delta;
        }
        if (d2 >= cutoff2) continue;
        ++cell.support;
        const double w = std::exp(-d2 / denom);
        weight_sum += w;
        acc += w * data.aris.row(i).transpose();
    }

    if (cell.support < 3 || weight_sum <= 0.0) return cell;

    acc /= weight_sum;
    int best_col = -1;
    double best = 0.0;
    for (int col : data.tie_order) {
        const double v = acc(col);
        if (best_col < 0 || v > best) {
            best_col = col;
            best = v;
        }
    }
    cell.winner = data.column_names[static_cast<std::size_t>(best_col)];
    cell.winner_ari = best;
    return cell;
}

LeadershipMap leadership_map(const std::vector<EvalRecord>& records,
                             const std::map<std::string, GraphFeatures>& features,
                             const FilterConfig& config) {
    if (config.grid_resolution < 2)
        throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 2");
    const FilterDataset data = build_filter_dataset(records, features);

    std::array<double, 3> lo{}, hi{};
    for (int d = 0; d < 3; ++d) {
        lo[static_cast<std::size_t>(d)] = data.points.col(d).minCoeff();
        hi[static_cast<std::size_t>(d)] = data.points.col(d).maxCoeff();
    }

    const int r = config.grid_resolution;
    auto coord = [&](int d, int i) {
        const double a = lo[static_cast<std::size_t>(d)];
        const double b = hi[static_cast<std::size_t>(d)];
        return a + (b - a) * static_cast<double>(i) / static_cast<double>(r - 1);
    };

    LeadershipMap map;
    map.resolution = r;
    map.feature_std = data.feature_std;
    map.cells.reserve(static_cast<std::size_t>(r) * static_cast<std::size_t>(r) *
                      static_cast<std::size_t>(r));
    for (int ix = 0; ix < r; ++ix)
        for (int iy = 0; iy < r; ++iy)
            for (int iz = 0; iz < r; ++iz)
                map.cells.push_back(gaussian_filter_winner(
                    {coord(0, ix), coord(1, iy), coord(2, iz)}, data, config));

    // Win counts and 6-connected component counts per winner.
    std::map<std::string, WinnerSummary> agg;
    for (const auto& cell : map.cells) {
        if (cell.winner.empty()) continue;
        auto& s = agg[cell.winner];
        s.winner = cell.winner;
        ++s.cells;
    }

    auto index_of = [&](int ix, int iy, int iz) {
        return (static_cast<std::size_t>(ix) * static_cast<std::size_t>(r) +
                static_cast<std::size_t>(iy)) *
                   static_cast<std::size_t>(r) +
               static_cast<std::size_t>(iz);
    };
    std::vector<char> seen(map.cells.size(), 0);
    for (int ix = 0; ix < r; ++ix) {
        for (int iy = 0; iy < r; ++iy) {
            for (int iz = 0; iz < r; ++iz) {
                const std::size_t start = index_of(ix, iy, iz);
                if (seen[start] || map.cells[start].winner.empty()) continue;
                const std::string& label = map.cells[start].winner;
                ++agg[label].components;
                std::vector<std::array<int, 3>> stack{{ix, iy, iz}};
                seen[start] = 1;
                while (!stack.empty()) {
                    const auto [cx, cy, cz] = stack.back();
                    stack.pop_back();
                    static const int steps[6][3] = {{1, 0, 0},  {-1, 0, 0}, {0, 1, 0},
                                                    {0, -1, 0}, {0, 0, 1},  {0, 0, -1}};
                    for (const auto& s : steps) {
                        const int nx = cx + s[0], ny = cy + s[1], nz = cz + s[2];
                        if (nx < 0 || ny < 0 || nz < 0 || nx >= r || ny >= r || nz >= r) continue;
                        const std::size_t ni = index_of(nx, ny, nz);
                        if (seen[ni] || map.cells[ni].winner != label) continue;
                        seen[ni] = 1;
                        stack.push_back({nx, ny, nz});
                    }
                }
            }
        }
    }

    for (auto& [name, s] : agg) map.summary.push_back(s);
    std::sort(map.summary.begin(), map.summary.end(), [](const WinnerSummary& a, const WinnerSummary& b) {
        if (a.cells != b.cells) return a.cells > b.cells;
        return a.winner < b.winner;
    });
    return map;
}

void write_leaderboard_csv(const std::string& path, const std::vector<LeaderboardRow>& rows) {
    std::string out = "measure,mean_rank,wins_pct,mean_ari\n";
    for (const auto& r : rows) {
        out += r.measure;
        out += ',';
        out += format_double(r.mean_rank);
        out += ',';
        out += format_double(r.wins_pct);
        out += ',';
        out += format_double(r.mean_ari);
        out += '\n';
    }
    atomic_write_file(path, out);
}

void write_zones_csv(const std::string& path, const LeadershipMap& map) {
    std::string out = "tau1,avg_degree,modularity,winner,support\n";
    for (const auto& cell : map.cells) {
        for (int d = 0; d < 3; ++d) {
            out += format_double(cell.point[static_cast<std::size_t>(d)] *
                                 map.feature_std[static_cast<std::size_t>(d)]);
            out += ',';
        }
        out += cell.winner.empty() ? "none" : cell.winner;
        out += ',';
        out += std::to_string(cell.support);
        out += '\n';
    }
    atomic_write_file(path, out);
}

void write_zone_summary_csv(const std::string& path, const LeadershipMap& map) {
    std::string out = "winner,cells,components\n";
    for (const auto& s : map.summary) {
        out += s.winner;
        out += ',';
        out += std::to_string(s.cells);
        out += ',';
        out += std::to_string(s.components);
        out += '\n';
    }
    atomic_write_file(path, out);
}

std::string lda_report_text(const LdaResult& lda, const std::vector<std::string>& feature_names,
                            const std::vector<std::pair<std::string, int>>& class_counts) {
    std::string out = "LDA winner-class separability\n\nclasses:\n";
    for (const auto& [name, count] : class_counts)
        out += "  " + name + " (" + std::to_string(count) + " graphs)\n";
    out += "\n";
    for (Eigen::Index c = 0; c < lda.components.rows(); ++c) {
        out += "component " + std::to_string(c) + ": explained variance ratio " +
               format_double(lda.explained_variance_ratio[static_cast<std::size_t>(c)]) + "\n";
        std::vector<std::size_t> order(feature_names.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = lda.feature_contributions(c, static_cast<Eigen::Index>(a));
            const double vb = lda.feature_contributions(c, static_cast<Eigen::Index>(b));
            if (va != vb) return va > vb;
            return a < b;
        });
        for (std::size_t i : order)
            out += "  " + feature_names[i] + " " +
                   format_double(lda.feature_contributions(c, static_cast<Eigen::Index>(i))) + "\n";
        out += "\n";
    }
    return out;
}

void write_lda_variance_csv(const std::string& path, const LdaResult& lda) {
    std::string out = "component,explained_variance_ratio\n";
    for (std::size_t i = 0; i < lda.explained_variance_ratio.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(lda.explained_variance_ratio[i]);
        out += '\n';
    }
    atomic_write_file(path, out);
}

void write_lda_contributions_csv(const std::string& path, const LdaResult& lda,
                                 const std::vector<std::string>& feature_names) {
    std::string out = "component,feature,abs_weight\n";
    for (Eigen::Index c = 0; c < lda.components.rows(); ++c) {
        for (std::size_t f = 0; f < feature_names.size(); ++f) {
            out += std::to_string(c);
            out += ',';
            out += feature_names[f];
            out += ',';
            out += format_double(lda.feature_contributions(c, static_cast<Eigen::Index>(f)));
            out += '\n';
        }
    }
    atomic_write_file(path, out);
}

void write_slice_svgs(const std::string& dir, const LeadershipMap& map) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    static const char* palette[12] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                      "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                      "#9c755f", "#bab0ac", "#1170aa", "#fc7d0b"};
    std::map<std::string, std::string> color;
    for (std::size_t i = 0; i < map.summary.size(); ++i)
        color[map.summary[i].winner] = palette[i % 12];

    const int r = map.resolution;
    auto cell_at = [&](int ix, int iy, int iz) -> const LeadershipCell& {
        return map.cells[(static_cast<std::size_t>(ix) * static_cast<std::size_t>(r) +
                          static_cast<std::size_t>(iy)) *
                             static_cast<std::size_t>(r) +
                         static_cast<std::size_t>(iz)];
    };

    constexpr int cell_px = 18;
    constexpr int margin = 70;
    constexpr int legend_w = 170;

    for (int axis = 0; axis < 3; ++axis) {
        const int h_axis = axis == 0 ? 1 : 0;
        const int v_axis = axis == 2 ? 1 : 2;
        for (int s = 0; s < r; ++s) {
            std::string svg;
            const int plot = r * cell_px;
            const int width = margin + plot + legend_w;
            const int height = margin + plot + 40;
            svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                   std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
            svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

            std::set<std::string> present;
            for (int ih = 0; ih < r; ++ih) {
                for (int iv = 0; iv < r; ++iv) {
                    int idx[3];
                    idx[axis] = s;
                    idx[h_axis] = ih;
                    idx[v_axis] = iv;
                    const LeadershipCell& cell = cell_at(idx[0], idx[1], idx[2]);
                    const std::string fill =
                        cell.winner.empty() ? "#e8e8e8" : color.at(cell.winner);
                    if (!cell.winner.empty()) present.insert(cell.winner);
                    const int x = margin + ih * cell_px;
                    const int y = 30 + (r - 1 - iv) * cell_px;
                    svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
                           "\" width=\"" + std::to_string(cell_px) + "\" height=\"" +
                           std::to_string(cell_px) + "\" fill=\"" + fill + "\"/>\n";
                }
            }

            int idx0[3] = {0, 0, 0};
            idx0[axis] = s;
            const double slice_value =
                cell_at(idx0[0], idx0[1], idx0[2]).point[static_cast<std::size_t>(axis)] *
                map.feature_std[static_cast<std::size_t>(axis)];
            svg += "<text x=\"" + std::to_string(margin) + "\" y=\"20\" font-size=\"14\">" +
                   std::string(kFeatureAxisNames[static_cast<std::size_t>(axis)]) + " = " +
                   format_double(slice_value) + "</text>\n";
            svg += "<text x=\"" + std::to_string(margin + plot / 2) + "\" y=\"" +
                   std::to_string(30 + plot + 30) + "\" font-size=\"12\" text-anchor=\"middle\">" +
                   kFeatureAxisNames[static_cast<std::size_t>(h_axis)] + "</text>\n";
            svg += "<text x=\"15\" y=\"" + std::to_string(30 + plot / 2) +
                   "\" font-size=\"12\" transform=\"rotate(-90 15 " +
                   std::to_string(30 + plot / 2) + ")\" text-anchor=\"middle\">" +
                   kFeatureAxisNames[static_cast<std::size_t>(v_axis)] + "</text>\n";

            int ly = 40;
            for (const auto& name : present) {
                const int lx = margin + plot + 15;
                svg += "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(ly - 10) +
                       "\" width=\"12\" height=\"12\" fill=\"" + color.at(name) + "\"/>\n";
                svg += "<text x=\"" + std::to_string(lx + 18) + "\" y=\"" + std::to_string(ly) +
                       "\" font-size=\"11\">" + name + "</text>\n";
                ly += 18;
            }

            svg += "</svg>\n";
            char fname[64];
            std::snprintf(fname, sizeof(fname), "slice_%s_%02d.svg",
                          kFeatureAxisNames[static_cast<std::size_t>(axis)], s);
            atomic_write_file((fs::path(dir) / fname).string(), svg);
        }
    }
}

}  // namespace gm
