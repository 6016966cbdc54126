#include "cfcc/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "cfcc/exact.hpp"

namespace cfcc {

namespace {

// stable rank: score descending (or ascending), id ascending on ties
template <typename Score>
NodeSet take_top(node_t n, int k, Score score, bool descending) {
    std::vector<node_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    std::sort(ids.begin(), ids.end(), [&](node_t a, node_t b) {
        auto sa = score(a), sb = score(b);
        if (sa != sb) return descending ? sa > sb : sa < sb;
        return a < b;
    });
    ids.resize(k);
    return NodeSet(ids);
}

} // namespace

NodeSet degree_baseline(const Graph &g, int k) {
    if (k < 1 || k >= g.num_nodes()) throw data_error("degree_baseline: need 1 <= k < n");
    return take_top(g.num_nodes(), k, [&](node_t u) { return g.degree(u); }, true);
}

NodeSet top_cfcc_baseline(const Graph &g, int k, TopCfccMode mode, const SamplingControls &ctl) {
    if (k < 1 || k >= g.num_nodes()) throw data_error("top_cfcc_baseline: need 1 <= k < n");
    // Single-node CFCC is n / (Tr(pinv) + n * pinv_uu): ranking by CFCC
    // descending is ranking by the pseudoinverse diagonal ascending.
    if (mode == TopCfccMode::exact) {
        Eigen::MatrixXd pinv = exact::pseudoinverse(g);
        return take_top(g.num_nodes(), k, [&](node_t u) { return pinv(u, u); }, false);
    }
    auto [x, samples] = estimate_pseudo_ranking(g, ctl);
    (void)samples;
    return take_top(g.num_nodes(), k, [&](node_t u) { return x[u]; }, false);
}

} // namespace cfcc
