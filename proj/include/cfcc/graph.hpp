#ifndef CFCC_GRAPH_HPP_
#define CFCC_GRAPH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfcc/errors.hpp"

namespace cfcc {

using node_t = int32_t;

/// Ordered set of dense node ids: sorted ascending, no duplicates.
class NodeSet {
public:
    NodeSet() = default;
    NodeSet(std::initializer_list<node_t> ids) : ids_(ids) { normalize(); }
    explicit NodeSet(std::vector<node_t> ids) : ids_(std::move(ids)) { normalize(); }

    bool contains(node_t v) const;
    void insert(node_t v);
    bool empty() const { return ids_.empty(); }
    size_t size() const { return ids_.size(); }
    node_t operator[](size_t i) const { return ids_[i]; }
    const std::vector<node_t> &ids() const { return ids_; }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }

    /// Set union (result stays sorted-unique).
    NodeSet unite(const NodeSet &other) const;
    /// Elements of this set not in other.
    NodeSet minus(const NodeSet &other) const;

    bool operator==(const NodeSet &other) const = default;

private:
    void normalize();
    std::vector<node_t> ids_;
};

/// Immutable simple undirected graph in compressed sparse form.
/// Nodes are dense ids 0..n-1; original file labels live in the id map.
class Graph {
public:
    Graph(node_t n, const std::vector<std::pair<node_t, node_t>> &edges,
          std::vector<int64_t> labels = {});

    node_t num_nodes() const { return n_; }
    int64_t num_edges() const { return m_; }
    node_t degree(node_t u) const { return offsets_[u + 1] - offsets_[u]; }

    /// Sorted neighbor list of u.
    const node_t *neighbors_begin(node_t u) const { return adj_.data() + offsets_[u]; }
    const node_t *neighbors_end(node_t u) const { return adj_.data() + offsets_[u + 1]; }
    bool has_edge(node_t u, node_t v) const;

    node_t max_degree() const;
    node_t max_degree_node() const;  // ties -> lowest id

    bool is_connected() const;

    int64_t original_label(node_t u) const { return labels_[u]; }
    const std::unordered_map<int64_t, node_t> &id_map() const { return id_map_; }

private:
    node_t n_;
    int64_t m_;
    std::vector<int64_t> offsets_;
    std::vector<node_t> adj_;
    std::vector<int64_t> labels_;
    std::unordered_map<int64_t, node_t> id_map_;
};

struct LoadOptions {
    bool drop_self_loops = true;     // false: self-loop is a parse error
    bool collapse_duplicates = true; // false: duplicate edge is a parse error
};

/// Parses a whitespace-separated edge list ('#'/'%' lines ignored),
/// remapping arbitrary non-negative labels to dense ids.
Graph load_edge_list(const std::string &path, const LoadOptions &options = {});
Graph parse_edge_list(std::istream &in, const LoadOptions &options = {},
                      const std::string &name = "<stream>");

/// Writes "u v" lines using original labels, one edge per line.
void write_edge_list(const Graph &g, const std::string &path);

/// Induced subgraph on the largest component; ties broken toward the
/// component containing the smallest original dense id.
Graph largest_connected_component(const Graph &g);

struct BfsStructure {
    std::vector<node_t> order;                 // visit order, roots first
    std::vector<std::optional<node_t>> parent; // lowest-id neighbor one level up
    std::vector<node_t> depth;
    NodeSet roots;
};

/// Multi-source BFS with deterministic parent assignment.
BfsStructure bfs_structure(const Graph &g, const NodeSet &roots);

/// Diameter via repeated double-sweep BFS (exact mode for small graphs
/// runs all-pairs). The sweep value is the max eccentricity seen, so it
/// never undercuts any endpoint's eccentricity but is not a certified
/// upper bound on general graphs.
node_t diameter_estimate(const Graph &g, int sweeps = 4, bool exact = false);

/// Max degree in the subgraph with `removed` (and incident edges) deleted.
node_t max_degree_after_removal(const Graph &g, const NodeSet &removed);

} // namespace cfcc

#endif // CFCC_GRAPH_HPP_
