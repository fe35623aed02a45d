#include "gm/scoring.hpp"

#include <unordered_map>
#include <vector>

#include "gm/error.hpp"

namespace gm {

namespace {

std::vector<int> compact_labels(const std::vector<int>& labels, int& k) {
    std::unordered_map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    k = static_cast<int>(remap.size());
    return out;
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
    if (labels_a.size() != labels_b.size())
        throw Error(ErrorCode::LengthMismatch, "labelings have different lengths");
    const auto n = static_cast<double>(labels_a.size());
    if (labels_a.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "ari needs at least two nodes");

    int ka = 0, kb = 0;
    const auto a = compact_labels(labels_a, ka);
    const auto b = compact_labels(labels_b, kb);

    std::vector<double> table(static_cast<std::size_t>(ka) * static_cast<std::size_t>(kb), 0.0);
    std::vector<double> row(static_cast<std::size_t>(ka), 0.0), col(static_cast<std::size_t>(kb), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[static_cast<std::size_t>(a[i]) * static_cast<std::size_t>(kb) +
              static_cast<std::size_t>(b[i])] += 1.0;
        row[static_cast<std::size_t>(a[i])] += 1.0;
        col[static_cast<std::size_t>(b[i])] += 1.0;
    }

    double sum_cells = 0.0;
    for (double c : table) sum_cells += choose2(c);
    double sum_rows = 0.0;
    for (double r : row) sum_rows += choose2(r);
    double sum_cols = 0.0;
    for (double c : col) sum_cols += choose2(c);

    const double total = choose2(n);
    const double expected = sum_rows * sum_cols / total;
    const double maximum = 0.5 * (sum_rows + sum_cols);
    const double denom = maximum - expected;
    if (denom == 0.0) return 1.0;  // both all-singleton or both single-cluster
    return (sum_cells - expected) / denom;
}

double modularity(const Graph& g, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != g.n)
        throw Error(ErrorCode::LengthMismatch, "labeling does not cover every node");
    if (g.edges.empty()) throw Error(ErrorCode::NoEdges, "modularity needs at least one edge");

    int k = 0;
    for (int c : labels) {
        if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative label");
        k = std::max(k, c + 1);
    }

    const double m = static_cast<double>(g.edges.size());
    std::vector<double> internal(static_cast<std::size_t>(k), 0.0);
    std::vector<double> degree_sum(static_cast<std::size_t>(k), 0.0);
    for (const auto& [u, v] : g.edges) {
        const int cu = labels[static_cast<std::size_t>(u)];
        const int cv = labels[static_cast<std::size_t>(v)];
        if (cu == cv) internal[static_cast<std::size_t>(cu)] += 1.0;
        degree_sum[static_cast<std::size_t>(cu)] += 1.0;
        degree_sum[static_cast<std::size_t>(cv)] += 1.0;
    }

    double q = 0.0;
    for (int c = 0; c < k; ++c) {
        const double dc = degree_sum[static_cast<std::size_t>(c)] / (2.0 * m);
        q += internal[static_cast<std::size_t>(c)] / m - dc * dc;
    }
    return q;
}

}  // namespace gm
