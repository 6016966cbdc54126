#ifndef CFCC_TESTS_FIXTURES_HPP_
#define CFCC_TESTS_FIXTURES_HPP_

#include <utility>
#include <vector>

#include "cfcc/graph.hpp"
#include "cfcc/random.hpp"

namespace cfcc::testing {

using EdgeList = std::vector<std::pair<node_t, node_t>>;

inline Graph path_graph(node_t n) {
    EdgeList edges;
    for (node_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    return Graph(n, edges);
}

inline Graph cycle_graph(node_t n) {
    EdgeList edges;
    for (node_t u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
    edges.emplace_back(n - 1, 0);
    return Graph(n, edges);
}

/// Star with `leaves` leaves; node 0 is the center.
inline Graph star_graph(node_t leaves) {
    EdgeList edges;
    for (node_t u = 1; u <= leaves; ++u) edges.emplace_back(0, u);
    return Graph(leaves + 1, edges);
}

inline Graph complete_graph(node_t n) {
    EdgeList edges;
    for (node_t u = 0; u < n; ++u)
        for (node_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, edges);
}

/// Random spanning tree plus extra random edges; always connected.
inline Graph random_connected_graph(node_t n, double extra_edge_prob, uint64_t seed) {
    RandomStream rng(seed, 0xF1C5ull);
    EdgeList edges;
    for (node_t u = 1; u < n; ++u) edges.emplace_back((node_t)rng.next_below(u), u);
    for (node_t u = 0; u < n; ++u)
        for (node_t v = u + 1; v < n; ++v)
            if (rng.next_double() < extra_edge_prob) edges.emplace_back(u, v);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(n, edges);
}

/// Preferential attachment: each new node attaches `m_per_node` edges,
/// endpoints drawn proportional to degree (repeat-endpoint draws are
/// collapsed, so early nodes can get fewer edges).
inline Graph preferential_attachment(node_t n, int m_per_node, uint64_t seed) {
    RandomStream rng(seed, 0xBA11ull);
    EdgeList edges;
    std::vector<node_t> endpoint_pool; // one entry per edge endpoint
    for (node_t u = 0; u <= m_per_node && u < n; ++u)
        for (node_t v = 0; v < u; ++v) {
            edges.emplace_back(v, u);
            endpoint_pool.push_back(v);
            endpoint_pool.push_back(u);
        }
    std::vector<node_t> targets;
    for (node_t u = (node_t)m_per_node + 1; u < n; ++u) {
        targets.clear();
        while ((int)targets.size() < m_per_node) {
            node_t pick = endpoint_pool[rng.next_below(endpoint_pool.size())];
            if (std::find(targets.begin(), targets.end(), pick) == targets.end())
                targets.push_back(pick);
        }
        for (node_t v : targets) {
            edges.emplace_back(v, u);
            endpoint_pool.push_back(v);
            endpoint_pool.push_back(u);
        }
    }
    return Graph(n, edges);
}

/// Zachary karate club (34 nodes, 78 edges).
inline Graph karate_graph() {
    static const EdgeList edges = {
        {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},
        {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},
        {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},
        {2, 3},   {2, 7},   {2, 8},   {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},
        {3, 7},   {3, 12},  {3, 13},  {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},
        {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33},
        {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
        {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25}, {24, 27},
        {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
        {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33}};
    return Graph(34, edges);
}

/// Deterministic 62-node test graph: ring lattice (each node linked to the
/// two nearest on each side) with a few extra seeded chords. Connected by
/// construction.
inline Graph test62_graph() {
    const node_t n = 62;
    RandomStream rng(62, 0x62ull);
    EdgeList edges;
    for (node_t u = 0; u < n; ++u) {
        edges.emplace_back(u, (node_t)((u + 1) % n));
        edges.emplace_back(u, (node_t)((u + 2) % n));
    }
    for (int i = 0; i < 25; ++i) {
        node_t a = (node_t)rng.next_below(n);
        node_t b = (node_t)rng.next_below(n);
        if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    for (auto &[a, b] : edges)
        if (a > b) std::swap(a, b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(n, edges);
}

} // namespace cfcc::testing

#endif // CFCC_TESTS_FIXTURES_HPP_
