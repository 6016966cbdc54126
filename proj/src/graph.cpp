#include "cfcc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

namespace cfcc {

void NodeSet::normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    if (!ids_.empty() && ids_.front() < 0)
        throw data_error("NodeSet: negative node id");
}

bool NodeSet::contains(node_t v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
}

void NodeSet::insert(node_t v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) ids_.insert(it, v);
}

NodeSet NodeSet::unite(const NodeSet &other) const {
    std::vector<node_t> out;
    out.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                   std::back_inserter(out));
    NodeSet r;
    r.ids_ = std::move(out);
    return r;
}

NodeSet NodeSet::minus(const NodeSet &other) const {
    std::vector<node_t> out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                        std::back_inserter(out));
    NodeSet r;
    r.ids_ = std::move(out);
    return r;
}

Graph::Graph(node_t n, const std::vector<std::pair<node_t, node_t>> &edges,
             std::vector<int64_t> labels)
    : n_(n) {
    if (n <= 0) throw data_error("empty graph");
    std::vector<node_t> deg(n, 0);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw data_error("edge endpoint out of range");
        if (u == v) throw data_error("self-loop in edge set");
        ++deg[u];
        ++deg[v];
    }
    offsets_.assign(n + 1, 0);
    for (node_t u = 0; u < n; ++u) offsets_[u + 1] = offsets_[u] + deg[u];
    adj_.resize(offsets_[n]);
    std::vector<int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
        adj_[cursor[u]++] = v;
        adj_[cursor[v]++] = u;
    }
    for (node_t u = 0; u < n; ++u) {
        std::sort(adj_.begin() + offsets_[u], adj_.begin() + offsets_[u + 1]);
        for (int64_t i = offsets_[u] + 1; i < offsets_[u + 1]; ++i)
            if (adj_[i] == adj_[i - 1]) throw data_error("duplicate edge in edge set");
    }
    m_ = (int64_t)edges.size();

    if (labels.empty()) {
        labels_.resize(n);
        for (node_t u = 0; u < n; ++u) labels_[u] = u;
    } else {
        if ((node_t)labels.size() != n) throw data_error("label vector size mismatch");
        labels_ = std::move(labels);
    }
    id_map_.reserve(n);
    for (node_t u = 0; u < n; ++u) id_map_[labels_[u]] = u;
}

bool Graph::has_edge(node_t u, node_t v) const {
    return std::binary_search(neighbors_begin(u), neighbors_end(u), v);
}

node_t Graph::max_degree() const {
    node_t best = 0;
    for (node_t u = 0; u < n_; ++u) best = std::max(best, degree(u));
    return best;
}

node_t Graph::max_degree_node() const {
    node_t best = 0;
    for (node_t u = 1; u < n_; ++u)
        if (degree(u) > degree(best)) best = u;
    return best;
}

bool Graph::is_connected() const {
    std::vector<char> seen(n_, 0);
    std::deque<node_t> queue{0};
    seen[0] = 1;
    node_t count = 1;
    while (!queue.empty()) {
        node_t u = queue.front();
        queue.pop_front();
        for (auto it = neighbors_begin(u); it != neighbors_end(u); ++it)
            if (!seen[*it]) {
                seen[*it] = 1;
                ++count;
                queue.push_back(*it);
            }
    }
    return count == n_;
}

namespace {

Graph build_from_labeled_edges(std::vector<std::pair<int64_t, int64_t>> &raw,
                               const LoadOptions &options, const std::string &name) {
    // Dense relabeling in order of first appearance of each label; the
    // final ids are assigned by ascending label so loads are stable.
    std::vector<int64_t> labels;
    labels.reserve(raw.size() * 2);
    for (auto &[a, b] : raw) {
        labels.push_back(a);
        labels.push_back(b);
    }
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.empty()) throw data_error(name + ": empty graph");

    std::unordered_map<int64_t, node_t> to_dense;
    to_dense.reserve(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) to_dense[labels[i]] = (node_t)i;

    std::vector<std::pair<node_t, node_t>> edges;
    edges.reserve(raw.size());
    for (auto &[a, b] : raw) {
        node_t u = to_dense[a], v = to_dense[b];
        if (u == v) {
            if (!options.drop_self_loops) throw parse_error(name + ": self-loop on node " + std::to_string(a));
            continue;
        }
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::unique(edges.begin(), edges.end());
    if (dup != edges.end() && !options.collapse_duplicates)
        throw parse_error(name + ": duplicate edge");
    edges.erase(dup, edges.end());
    if (edges.empty()) throw data_error(name + ": graph has no edges");

    node_t n = (node_t)labels.size();
    return Graph(n, edges, std::move(labels));
}

} // namespace

Graph parse_edge_list(std::istream &in, const LoadOptions &options, const std::string &name) {
    std::vector<std::pair<int64_t, int64_t>> raw;
    std::string line;
    int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t pos = line.find_first_not_of(" \t\r\n");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#' || line[pos] == '%') continue;
        std::istringstream ls(line);
        int64_t a, b;
        if (!(ls >> a >> b) || a < 0 || b < 0)
            throw parse_error(name + ":" + std::to_string(line_no) +
                              ": expected two non-negative integer tokens");
        raw.emplace_back(a, b);
    }
    if (raw.empty()) throw data_error(name + ": empty graph");
    return build_from_labeled_edges(raw, options, name);
}

Graph load_edge_list(const std::string &path, const LoadOptions &options) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");
    return parse_edge_list(in, options, path);
}

void write_edge_list(const Graph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw parse_error(path + ": cannot open file for writing");
    for (node_t u = 0; u < g.num_nodes(); ++u)
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            if (u < *it) out << g.original_label(u) << ' ' << g.original_label(*it) << '\n';
}

Graph largest_connected_component(const Graph &g) {
    node_t n = g.num_nodes();
    std::vector<node_t> comp(n, -1);
    node_t n_comp = 0;
    std::vector<int64_t> comp_size;
    for (node_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = n_comp;
        int64_t size = 1;
        std::deque<node_t> queue{start};
        while (!queue.empty()) {
            node_t u = queue.front();
            queue.pop_front();
            for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
                if (comp[*it] < 0) {
                    comp[*it] = n_comp;
                    ++size;
                    queue.push_back(*it);
                }
        }
        comp_size.push_back(size);
        ++n_comp;
    }
    // Components are discovered in ascending smallest-member order, so a
    // strict comparison implements the smallest-id tie-break.
    node_t best = 0;
    for (node_t c = 1; c < n_comp; ++c)
        if (comp_size[c] > comp_size[best]) best = c;

    std::vector<node_t> to_new(n, -1);
    std::vector<int64_t> labels;
    node_t next = 0;
    for (node_t u = 0; u < n; ++u)
        if (comp[u] == best) {
            to_new[u] = next++;
            labels.push_back(g.original_label(u));
        }
    std::vector<std::pair<node_t, node_t>> edges;
    for (node_t u = 0; u < n; ++u) {
        if (comp[u] != best) continue;
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            if (u < *it) edges.emplace_back(to_new[u], to_new[*it]);
    }
    return Graph(next, edges, std::move(labels));
}

BfsStructure bfs_structure(const Graph &g, const NodeSet &roots) {
    node_t n = g.num_nodes();
    if (roots.empty()) throw data_error("bfs_structure: empty root set");
    for (node_t r : roots)
        if (r >= n) throw data_error("bfs_structure: root id out of range");

    BfsStructure bfs;
    bfs.roots = roots;
    bfs.parent.assign(n, std::nullopt);
    bfs.depth.assign(n, -1);
    bfs.order.reserve(n);

    std::deque<node_t> queue;
    for (node_t r : roots) {
        bfs.depth[r] = 0;
        queue.push_back(r);
        bfs.order.push_back(r);
    }
    while (!queue.empty()) {
        node_t u = queue.front();
        queue.pop_front();
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            if (bfs.depth[*it] < 0) {
                bfs.depth[*it] = bfs.depth[u] + 1;
                queue.push_back(*it);
                bfs.order.push_back(*it);
            }
    }
    if ((node_t)bfs.order.size() != n)
        throw data_error("bfs_structure: graph is not connected");

    // Parent = lowest-id neighbor one level closer (queue discovery order
    // would depend on the traversal, so assign in a second pass).
    for (node_t v = 0; v < n; ++v) {
        if (bfs.depth[v] == 0) continue;
        for (auto it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
            if (bfs.depth[*it] == bfs.depth[v] - 1) {
                bfs.parent[v] = *it;
                break;
            }
    }
    return bfs;
}

namespace {

// Returns (eccentricity, farthest node with lowest id) of source.
std::pair<node_t, node_t> bfs_eccentricity(const Graph &g, node_t source) {
    std::vector<node_t> dist(g.num_nodes(), -1);
    std::deque<node_t> queue{source};
    dist[source] = 0;
    node_t ecc = 0, far = source;
    while (!queue.empty()) {
        node_t u = queue.front();
        queue.pop_front();
        if (dist[u] > ecc) {
            ecc = dist[u];
            far = u;
        }
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            if (dist[*it] < 0) {
                dist[*it] = dist[u] + 1;
                queue.push_back(*it);
            }
    }
    for (node_t u = 0; u < g.num_nodes(); ++u)
        if (dist[u] < 0) throw data_error("diameter_estimate: graph is not connected");
    return {ecc, far};
}

} // namespace

node_t diameter_estimate(const Graph &g, int sweeps, bool exact) {
    if (exact) {
        node_t best = 0;
        for (node_t u = 0; u < g.num_nodes(); ++u)
            best = std::max(best, bfs_eccentricity(g, u).first);
        return std::max<node_t>(best, 1);
    }
    node_t start = g.max_degree_node();
    node_t best = 0;
    for (int i = 0; i < sweeps; ++i) {
        auto [ecc, far] = bfs_eccentricity(g, start);
        best = std::max(best, ecc);
        if (far == start) break;
        start = far;
    }
    return std::max<node_t>(best, 1);
}

node_t max_degree_after_removal(const Graph &g, const NodeSet &removed) {
    std::vector<char> gone(g.num_nodes(), 0);
    for (node_t r : removed) {
        if (r >= g.num_nodes()) throw data_error("max_degree_after_removal: id out of range");
        gone[r] = 1;
    }
    node_t best = 0;
    for (node_t u = 0; u < g.num_nodes(); ++u) {
        if (gone[u]) continue;
        node_t d = 0;
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            if (!gone[*it]) ++d;
        best = std::max(best, d);
    }
    return best;
}

} // namespace cfcc
