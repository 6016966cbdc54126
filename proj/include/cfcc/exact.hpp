#ifndef CFCC_EXACT_HPP_
#define CFCC_EXACT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cfcc/graph.hpp"

namespace cfcc {

/// Dense matrix with the node ids its rows/columns correspond to.
struct LabeledMatrix {
    Eigen::MatrixXd values;
    std::vector<node_t> nodes; // row/col i <-> nodes[i]

    int index_of(node_t u) const;
};

/// Ground-truth computations for graphs small enough for dense algebra.
/// Everything here exists to verify the sampling estimators, so the code
/// favors the formula-faithful route over the fastest one.
namespace exact {

constexpr node_t kDenseLimit = 5000;
constexpr int64_t kEnumerationCap = 10'000'000;

Eigen::MatrixXd laplacian(const Graph &g);

/// L with rows/columns of S removed, plus the surviving node ids.
LabeledMatrix grounded_laplacian(const Graph &g, const NodeSet &s);

/// Moore-Penrose pseudoinverse via the rank-correction identity
/// (L + J/n)^{-1} - J/n, valid on connected graphs.
Eigen::MatrixXd pseudoinverse(const Graph &g);

struct GroupScore {
    double trace; // Tr(L_{-S}^{-1})
    double cfcc;  // n / trace
};

GroupScore group_cfcc(const Graph &g, const NodeSet &s);

/// Marginal gain of adding u to S, computed both as the trace difference
/// and as the diagonal ratio; throws if the two routes disagree by more
/// than 1e-10 (they are algebraically identical).
double exact_gain(const Graph &g, const NodeSet &s, node_t u);

struct OptimumResult {
    NodeSet best;
    double cfcc;
};

/// Exact argmax of group CFCC over all k-subsets. Ties resolve to the
/// lexicographically smallest set. Throws if C(n,k) exceeds the cap.
OptimumResult exhaustive_optimum(const Graph &g, int k, int threads = 1);

struct ExactTrace {
    std::vector<node_t> chosen;
    std::vector<double> gains; // gains[0] is the first-round row sum objective
    double cfcc;
};

/// Greedy with exact gains: pseudoinverse diagonal for round one,
/// trace-difference gains afterwards. Ties break to the lowest id.
ExactTrace greedy_exact(const Graph &g, int k);

/// Number of spanning forests rooted at S (matrix-forest theorem).
double forest_count(const Graph &g, const NodeSet &s);

struct IterativeScore {
    double trace;
    double cfcc;
    double std_error; // probe-count based standard error of the trace
};

/// Hutchinson +/-1 probe estimate of Tr(L_{-S}^{-1}); each probe is solved
/// with conjugate gradients on the SDD system, matrix-free.
IterativeScore cfcc_iterative(const Graph &g, const NodeSet &s, int probes, double tol,
                              uint64_t seed = 1, int threads = 1);

} // namespace exact
} // namespace cfcc

#endif // CFCC_EXACT_HPP_
