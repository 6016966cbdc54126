#ifndef CFCC_GREEDY_HPP_
#define CFCC_GREEDY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cfcc/estimators.hpp"
#include "cfcc/graph.hpp"
#include "cfcc/schur.hpp"

namespace cfcc {

enum class Algorithm { forest, schur };

/// Stopping policy for the doubling-batch sampling loop. `paper` stops
/// only on the per-candidate relative-precision check; `adaptive` also
/// stops once the best candidate is separated from the rest, which is
/// what the greedy selection actually needs.
enum class StopRule { paper, adaptive };

struct RunConfig {
    int k = 1;
    double eps = 0.2;
    uint64_t seed = 1;
    int workers = 0;               // 0 = hardware concurrency
    uint64_t r_max = uint64_t{1} << 24;
    Algorithm algorithm = Algorithm::forest;
    int schur_roots = -1;          // -1 = size T by the balance rule
    int jl_dim_cap = 64;           // sketch rows beyond this add little
    StopRule stop = StopRule::adaptive;

    void validate(node_t n) const;
};

struct IterationRecord {
    node_t chosen;
    int64_t samples;
    double gain;     // estimated gain of the chosen node (first round: x value)
    double seconds;
};

struct SelectionTrace {
    std::vector<node_t> chosen;
    std::vector<IterationRecord> iterations;
    int64_t total_samples() const;
};

/// Knobs threaded through the sampling phases; filled from RunConfig.
struct SamplingControls {
    double eps = 0.2;
    uint64_t seed = 1;
    int workers = 1;
    uint64_t r_max = uint64_t{1} << 24;
    int jl_dim_cap = 64;
    StopRule stop = StopRule::adaptive;
    node_t tau = 0; // 0 = estimate from the graph
};

/// Pseudoinverse-diagonal scores (up to a shared constant) for every node
/// from single-root forest sampling; the root is the max-degree node.
/// Returns the scores and the number of forests consumed.
std::pair<std::vector<double>, int64_t> estimate_pseudo_ranking(const Graph &g,
                                                                const SamplingControls &ctl);

/// First greedy pick: argmin of the pseudoinverse diagonal estimates,
/// ties to the lowest id.
node_t select_first_node(const Graph &g, double eps, uint64_t seed);
node_t select_first_node(const Graph &g, const SamplingControls &ctl, int64_t *samples = nullptr);

/// Marginal-gain estimates for all candidates via forests rooted at S.
GainEstimates forest_delta(const Graph &g, const NodeSet &s, const SamplingControls &ctl);

/// Schur-accelerated variant: forests rooted at S u T, rooted-probability
/// estimation, Schur assembly/inversion and block recombination. With an
/// empty T this is exactly forest_delta.
GainEstimates schur_delta(const Graph &g, const NodeSet &s, const NodeSet &t,
                          const SamplingControls &ctl);

SelectionTrace forest_cfcm(const Graph &g, const RunConfig &config);
SelectionTrace schur_cfcm(const Graph &g, const RunConfig &config);

/// Dispatch helper for the CLI.
SelectionTrace run_maximizer(const Graph &g, const RunConfig &config);

} // namespace cfcc

#endif // CFCC_GREEDY_HPP_
