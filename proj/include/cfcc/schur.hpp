#ifndef CFCC_SCHUR_HPP_
#define CFCC_SCHUR_HPP_

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "cfcc/estimators.hpp"
#include "cfcc/forest.hpp"
#include "cfcc/graph.hpp"

namespace cfcc {

/// Per-(node, auxiliary root) tallies of which tree a node landed in,
/// shared across workers (integer increments commute, so values are
/// independent of scheduling).
class RootedCounts {
public:
    RootedCounts(const Graph &g, NodeSet t);

    /// Folds the root labels of one forest (rooted at S u T) into the
    /// counts. Labels resolve in one reverse pass over `order`.
    void track_roots(const SpanningForest &forest);

    int64_t total() const { return total_.load(std::memory_order_relaxed); }
    const NodeSet &t() const { return t_; }

    int64_t count(node_t u, node_t t) const;

    /// Row-normalized estimate F~(u, t) = R(u, t) / total as a |V| x |T|
    /// matrix (rows of T and other roots are zero).
    Eigen::MatrixXd estimate(const std::vector<node_t> &rows) const;

private:
    const Graph &g_;
    NodeSet t_;
    std::vector<int> t_index_;
    std::atomic<int64_t> total_{0};
    std::unique_ptr<std::atomic<uint32_t>[]> counts_; // node-major |V| x |T|
};

/// Assembled Schur complement over the auxiliary root set.
struct SchurBlock {
    NodeSet t;
    Eigen::MatrixXd m;     // symmetrized estimate of Sc(L_{-S} onto T)
    Eigen::MatrixXd m_inv;
};

/// Greedy max-degree peel; returns the prefix T* balancing |T| against the
/// max remaining degree (argmin of ||T| - d_max(T)|, ties to smaller |T|).
NodeSet select_root_set(const Graph &g);

/// Schur assembly from rooted probabilities. `f` must have one row per
/// graph node (zero rows for nodes outside U) and |T| columns ordered like
/// the sorted T. Result is symmetrized.
Eigen::MatrixXd assemble_schur(const Graph &g, const Eigen::MatrixXd &f, const NodeSet &s,
                               const NodeSet &t);

/// Exact rooted-probability matrix F = -L_UU^{-1} L_UT as |V| x |T| (dense
/// oracle route, used by tests and the identity checks).
Eigen::MatrixXd exact_rooted_probabilities(const Graph &g, const NodeSet &s, const NodeSet &t);

/// Dense inversion with a positive-definiteness check; throws
/// numerical_error when the sample estimate is not invertible yet.
Eigen::MatrixXd invert_schur(const Eigen::MatrixXd &m);

/// Recombines the U-block estimates with the Schur block (the block
/// inverse identity): updates diagonals and sketch columns for u in U and
/// fills the T entries, then forms gains = ||sketch||^2 / z.
GainEstimates combine_blocks(const std::vector<double> &z_u, const Eigen::MatrixXd &y_u,
                             const Eigen::MatrixXd &f, const SchurBlock &block,
                             const JLProjector &projector, const NodeSet &s, const NodeSet &t,
                             int threads = 1);

} // namespace cfcc

#endif // CFCC_SCHUR_HPP_
