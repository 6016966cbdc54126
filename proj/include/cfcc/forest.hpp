#ifndef CFCC_FOREST_HPP_
#define CFCC_FOREST_HPP_

#include <cstdint>
#include <vector>

#include "cfcc/graph.hpp"
#include "cfcc/random.hpp"

namespace cfcc {

/// Spanning forest rooted at a node set. `parent[u]` is meaningful for
/// non-roots only; `order` lists every non-root exactly once, each node
/// appearing before its parent whenever the parent is also a non-root.
/// That ordering is what makes one-pass subtree aggregation possible.
struct SpanningForest {
    std::vector<node_t> parent;  // parent[root] == -1
    std::vector<node_t> order;

    bool is_root(node_t u) const { return parent[u] < 0; }
};

enum class SourceOrder { ascending, descending };

/// Scratch buffers for repeated sampling on the same graph.
class ForestSampler {
public:
    explicit ForestSampler(const Graph &g);

    /// Uniform random spanning forest rooted at `roots` via loop-erased
    /// random walks. Pure function of (graph, roots, stream). The source
    /// order only affects the draw sequence, not the distribution.
    SpanningForest sample(const NodeSet &roots, RandomStream stream,
                          SourceOrder source_order = SourceOrder::ascending);

    /// Walk steps consumed by the last sample() call.
    int64_t last_walk_steps() const { return last_walk_steps_; }

private:
    const Graph &g_;
    std::vector<char> in_forest_;
    std::vector<node_t> chain_;
    int64_t last_walk_steps_ = 0;
};

/// One-shot convenience wrapper.
SpanningForest sample_forest(const Graph &g, const NodeSet &roots, RandomStream stream,
                             SourceOrder source_order = SourceOrder::ascending);

} // namespace cfcc

#endif // CFCC_FOREST_HPP_
