#ifndef CFCC_ESTIMATORS_HPP_
#define CFCC_ESTIMATORS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfcc/forest.hpp"
#include "cfcc/graph.hpp"

namespace cfcc {

/// Random sign projection for sketching columns of the grounded inverse.
/// The dimension from the JL bound is clamped to the candidate count (and
/// an optional cap); once no reduction is possible the projector degrades
/// to the exact identity, which the tests also use directly.
class JLProjector {
public:
    enum class Mode { random, identity };

    static int required_dim(double eps, node_t n);

    static JLProjector random(const std::vector<node_t> &candidates, node_t n, double eps,
                              uint64_t seed, int dim_cap = 0);
    static JLProjector identity(const std::vector<node_t> &candidates, node_t n);
    /// random unless the JL dimension cannot reduce below the candidate count.
    static JLProjector automatic(const std::vector<node_t> &candidates, node_t n, double eps,
                                 uint64_t seed, int dim_cap = 0);

    Mode mode() const { return mode_; }
    int dim() const { return dim_; }
    double scale() const { return scale_; }
    size_t num_candidates() const { return candidates_.size(); }
    const std::vector<node_t> &candidates() const { return candidates_; }

    /// Column of sign entries for node v (length dim(), values in scale
    /// units), or nullptr when v is not a candidate.
    const int8_t *column(node_t v) const {
        int c = col_of_[v];
        return c < 0 ? nullptr : entries_.data() + (size_t)c * dim_;
    }
    int candidate_index(node_t v) const { return col_of_[v]; }

private:
    Mode mode_ = Mode::identity;
    int dim_ = 0;
    double scale_ = 1.0;
    std::vector<node_t> candidates_;
    std::vector<int> col_of_;
    std::vector<int8_t> entries_; // column-major, dim_ per candidate
};

/// Per-forest scalar stream statistics kept as exact integer sums so that
/// merged results do not depend on worker count or merge order.
struct StreamStats {
    int64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;
};

/// Tallies over a batch of spanning forests sharing one root set:
/// directed-edge traversal counts, subtree-weighted aggregates for the
/// sketch rows, the all-ones aggregates for the pseudoinverse phase, and
/// per-node variance statistics for the adaptive stopping rule.
class EdgeCounters {
public:
    /// `projector` may be null (no sketch accumulation). `track_ones_stats`
    /// additionally tracks the all-ones stream moments used by the
    /// first-node phase.
    EdgeCounters(const Graph &g, BfsStructure bfs, const JLProjector *projector,
                 bool track_ones_stats);

    void accumulate(const SpanningForest &forest);
    void merge_from(const EdgeCounters &other);
    void reset(); // zero all tallies, keep the layout

    int64_t total() const { return total_; }
    const BfsStructure &bfs() const { return bfs_; }
    const NodeSet &roots() const { return bfs_.roots; }
    const JLProjector *projector() const { return projector_; }

    /// F(a,S,a,parent) tally for the directed edge a->b; zero if not an edge.
    int64_t edge_count(node_t a, node_t b) const;
    int64_t ones_aggregate(node_t a, node_t b) const;

    /// z-stream stats for node u (mean equals the diagonal estimate).
    StreamStats z_stats(node_t u) const;
    /// Stats of the combined first-phase stream x = z - (2/n) * ones.
    StreamStats pseudo_stats(node_t u) const;

    // Raw integer sketch flux along the stored BFS tree, used by the
    // extraction routines below.
    const std::vector<int64_t> &flux_up() const { return flux_up_; }
    const std::vector<int64_t> &flux_down() const { return flux_down_; }

private:
    int64_t slot(node_t a, node_t b) const; // CSR position of b in adj(a)

    const Graph &g_;
    BfsStructure bfs_;
    const JLProjector *projector_;
    int dim_;
    bool track_ones_stats_;

    int64_t total_ = 0;
    std::vector<int64_t> count_;      // per directed edge (CSR slot)
    std::vector<int64_t> ones_;       // per directed edge (CSR slot)
    std::vector<int64_t> flux_up_;    // node-major [v*dim+j], edge v->bfsparent(v)
    std::vector<int64_t> flux_down_;  // edge bfsparent(v)->v
    std::vector<int64_t> zsum_, zsq_;
    // the ones-stream moments can overflow 64 bits on large graphs
    std::vector<int64_t> osum_;
    std::vector<__int128> osq_, xo_;

    // per-forest scratch
    std::vector<int32_t> wsub_;
    std::vector<int32_t> sub_ones_;
    std::vector<int32_t> x_scratch_, o_scratch_;
};

/// Free-function form; asserts the projector matches the counters.
void accumulate_forest(EdgeCounters &counters, const SpanningForest &forest,
                       const JLProjector *projector);

/// Unbiased diagonal estimates of the grounded inverse at the counters'
/// root set, telescoped along the given BFS tree. Roots get zero.
std::vector<double> estimate_diagonals(const EdgeCounters &counters, const BfsStructure &bfs);

/// Sketch matrix Y with E[Y] = W * L_{-S}^{-1}; columns of roots are zero.
/// Must be extracted along the BFS tree the counters were built with.
Eigen::MatrixXd estimate_projected_rows(const EdgeCounters &counters, const BfsStructure &bfs,
                                        const JLProjector &projector);

/// Single-root pseudoinverse-diagonal estimates up to a shared constant:
/// x_u = z_u - (2/n) * ones_u, x_s = 0. argmin x equals argmin of the
/// pseudoinverse diagonal in expectation.
std::vector<double> estimate_pseudo_diagonals(const EdgeCounters &counters,
                                              const BfsStructure &bfs, node_t n);

enum class HalfwidthMode { bernstein, hoeffding };

/// Confidence half-width for an empirical mean: empirical Bernstein
/// (variance-adaptive) or the Hoeffding bound at level delta.
double confidence_halfwidth(const StreamStats &stats, double x_sup, double delta,
                            HalfwidthMode mode);

enum class BudgetKind { first_node, forest_delta, schur_delta };

/// Worst-case sample budgets. These are deliberately conservative; the
/// adaptive stop dominates them in practice, hence the saturation cap.
uint64_t sample_budget(BudgetKind kind, double eps, node_t tau, node_t degree_arg, node_t n,
                       uint64_t r_max = uint64_t{1} << 24);

/// Final per-candidate output of a gain-estimation round.
struct GainEstimates {
    std::vector<node_t> candidates;  // ascending ids, all of V minus S
    std::vector<double> z;           // diagonal estimates
    std::vector<double> gain;        // ||sketch column||^2 / z
    std::vector<double> z_halfwidth;
    std::vector<double> gain_halfwidth;
    Eigen::MatrixXd sketch;          // dim x candidates
    int64_t samples = 0;
};

} // namespace cfcc

#endif // CFCC_ESTIMATORS_HPP_
