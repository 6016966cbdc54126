#ifndef CFCC_BASELINES_HPP_
#define CFCC_BASELINES_HPP_

#include "cfcc/graph.hpp"
#include "cfcc/greedy.hpp"

namespace cfcc {

/// Top-k nodes by degree, ties to the lowest id.
NodeSet degree_baseline(const Graph &g, int k);

enum class TopCfccMode { exact, estimated };

/// Top-k nodes by single-node CFCC, i.e. ascending pseudoinverse diagonal.
/// Estimated mode ranks by the sampled scores so it also runs where the
/// dense pseudoinverse does not.
NodeSet top_cfcc_baseline(const Graph &g, int k, TopCfccMode mode,
                          const SamplingControls &ctl = {});

} // namespace cfcc

#endif // CFCC_BASELINES_HPP_
