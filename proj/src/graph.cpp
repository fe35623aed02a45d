#include "gm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <sstream>

#include "gm/error.hpp"
#include "gm/textio.hpp"

namespace gm {

int Graph::community_count() const {
    int k = 0;
    for (int c : communities) k = std::max(k, c + 1);
    return k;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : edges) {
        ++d[static_cast<std::size_t>(u)];
        ++d[static_cast<std::size_t>(v)];
    }
    return d;
}

std::vector<std::vector<int>> Graph::adjacency_list() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    return adj;
}

Graph make_graph(int n, std::vector<std::pair<int, int>> edges, std::vector<int> communities) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "graph needs at least one node");
    if (static_cast<int>(communities.size()) != n)
        throw Error(ErrorCode::InvalidArgument, "community labels must cover every node");

    for (auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
        if (u == v) throw Error(ErrorCode::InvalidArgument, "self loops are not allowed");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw Error(ErrorCode::InvalidArgument, "duplicate edge");

    int k = 0;
    for (int c : communities) {
        if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative community label");
        k = std::max(k, c + 1);
    }
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    for (int c : communities) seen[static_cast<std::size_t>(c)] = 1;
    for (int c = 0; c < k; ++c)
        if (!seen[static_cast<std::size_t>(c)])
            throw Error(ErrorCode::InvalidArgument, "community labels must be contiguous from 0");

    Graph g;
    g.n = n;
    g.edges = std::move(edges);
    g.communities = std::move(communities);
    return g;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source) {
    std::vector<int> dist(adj.size(), -1);
    std::deque<int> queue;
    dist[static_cast<std::size_t>(source)] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

bool is_connected(const Graph& g) {
    if (g.n <= 1) return true;
    const auto dist = bfs_distances(g.adjacency_list(), 0);
    return std::find(dist.begin(), dist.end(), -1) == dist.end();
}

std::string to_text(const Graph& g) {
    std::string out;
    out += std::to_string(g.n);
    out += ' ';
    out += std::to_string(g.community_count());
    out += '\n';
    for (const auto& [u, v] : g.edges) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    out += "labels";
    for (int c : g.communities) {
        out += ' ';
        out += std::to_string(c);
    }
    out += '\n';
    return out;
}

Graph from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::IoError, "empty graph text");

    int n = 0, k = 0;
    {
        std::istringstream header(line);
        if (!(header >> n >> k)) throw Error(ErrorCode::IoError, "bad graph header");
    }

    std::vector<std::pair<int, int>> edges;
    std::vector<int> labels;
    bool saw_labels = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("labels", 0) == 0) {
            std::istringstream ls(line.substr(6));
            int c = 0;
            while (ls >> c) labels.push_back(c);
            saw_labels = true;
            break;
        }
        std::istringstream es(line);
        int u = 0, v = 0;
        if (!(es >> u >> v)) throw Error(ErrorCode::IoError, "bad edge line: " + line);
        edges.emplace_back(u, v);
    }
    if (!saw_labels) throw Error(ErrorCode::IoError, "graph text missing labels line");
    if (static_cast<int>(labels.size()) != n)
        throw Error(ErrorCode::IoError, "labels line length does not match node count");

    Graph g = make_graph(n, std::move(edges), std::move(labels));
    if (g.community_count() != k)
        throw Error(ErrorCode::IoError, "label count in header does not match labels line");
    return g;
}

void save_graph(const Graph& g, const std::string& path) {
    atomic_write_file(path, to_text(g));
}

Graph load_graph(const std::string& path) {
    return from_text(read_file(path));
}

}  // namespace gm
