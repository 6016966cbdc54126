#include "cfcc/forest.hpp"

#include <algorithm>

namespace cfcc {

namespace {
constexpr int64_t kWalkStepCap = 10'000'000'000LL;
}

ForestSampler::ForestSampler(const Graph &g) : g_(g), in_forest_(g.num_nodes(), 0) {
    chain_.reserve(g.num_nodes());
}

SpanningForest ForestSampler::sample(const NodeSet &roots, RandomStream stream,
                                     SourceOrder source_order) {
    const node_t n = g_.num_nodes();
    if (roots.empty()) throw data_error("sample_forest: empty root set");

    SpanningForest forest;
    forest.parent.assign(n, -1);
    forest.order.clear();
    forest.order.reserve(n - roots.size());

    std::fill(in_forest_.begin(), in_forest_.end(), 0);
    for (node_t r : roots) {
        if (r >= n) throw data_error("sample_forest: root id out of range");
        in_forest_[r] = 1;
    }

    int64_t steps = 0;
    auto run_from = [&](node_t source) {
        if (in_forest_[source]) return;
        // Walk until the forest is hit; loops are erased implicitly
        // because re-entering a node overwrites its tentative parent.
        node_t i = source;
        while (!in_forest_[i]) {
            node_t d = g_.degree(i);
            node_t pick = g_.neighbors_begin(i)[stream.next_below((uint64_t)d)];
            forest.parent[i] = pick;
            i = pick;
            if (++steps > kWalkStepCap)
                throw numerical_error("sample_forest: walk step cap exceeded");
        }
        // Freeze the surviving chain; append it reversed so that, after
        // the final global reversal, children precede their parents.
        i = source;
        chain_.clear();
        while (!in_forest_[i]) {
            in_forest_[i] = 1;
            chain_.push_back(i);
            i = forest.parent[i];
        }
        forest.order.insert(forest.order.end(), chain_.rbegin(), chain_.rend());
    };

    if (source_order == SourceOrder::ascending) {
        for (node_t u = 0; u < n; ++u) run_from(u);
    } else {
        for (node_t u = n - 1; u >= 0; --u) run_from(u);
    }
    std::reverse(forest.order.begin(), forest.order.end());
    last_walk_steps_ = steps;
    return forest;
}

SpanningForest sample_forest(const Graph &g, const NodeSet &roots, RandomStream stream,
                             SourceOrder source_order) {
    ForestSampler sampler(g);
    return sampler.sample(roots, std::move(stream), source_order);
}

} // namespace cfcc
