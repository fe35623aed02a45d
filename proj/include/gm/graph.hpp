#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gm {

// Undirected simple graph with one ground-truth community label per node.
// Edges are stored once, normalized to u < v and sorted lexicographically.
// Labels are contiguous: every value in [0, k) occurs at least once.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> communities;

    int community_count() const;
    std::vector<int> degrees() const;
    std::vector<std::vector<int>> adjacency_list() const;
};

// Validates and canonicalizes. Throws Error(InvalidArgument) on self loops,
// duplicate edges, out-of-range endpoints, or non-contiguous labels.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges, std::vector<int> communities);

bool is_connected(const Graph& g);

// Hop distances from a source; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source);

// Text format: an "n k" header line, one "u v" line per edge with u < v,
// and a trailing "labels l0 l1 ... l(n-1)" line. Round-trips exactly.
std::string to_text(const Graph& g);
Graph from_text(const std::string& text);

void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace gm
