#include "cfcc/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <thread>

#include "cfcc/forest.hpp"
#include "cfcc/random.hpp"

namespace cfcc {

namespace {

constexpr uint64_t kFirstPhaseTag = 0xF1257ull;
constexpr uint64_t kIterationTag = 0x17E4ull;
constexpr int64_t kMinSamplesBeforeStop = 32;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int effective_workers(int requested, const Graph &g, int dim) {
    int hw = (int)std::thread::hardware_concurrency();
    int workers = requested > 0 ? requested : std::max(1, hw);
    // keep per-worker counter memory within a sane envelope
    double per_worker = 8.0 * (4.0 * (double)g.num_edges() +
                               (double)g.num_nodes() * (2.0 * dim + 8.0));
    double budget = 2.0e9;
    int cap = std::max(1, (int)(budget / std::max(per_worker, 1.0)));
    return std::max(1, std::min(workers, cap));
}

/// Runs the doubling-batch sampling schedule. Forest i is a pure function
/// of (seed, i), so results do not depend on the worker count. The stop
/// callback sees the merged counters after every batch.
int64_t sampling_loop(const Graph &g, const BfsStructure &bfs, const JLProjector *projector,
                      bool track_ones, uint64_t seed, uint64_t budget, int workers,
                      EdgeCounters &global, RootedCounts *rooted,
                      const std::function<bool(int64_t, double)> &should_stop) {
    int total_batches = 1;
    while ((uint64_t{1} << (total_batches + 1)) - 2 < budget && total_batches < 62)
        ++total_batches;

    std::vector<EdgeCounters> locals;
    locals.reserve(workers);
    for (int t = 0; t < workers; ++t) locals.emplace_back(g, bfs, projector, track_ones);

    int64_t total = 0;
    for (int batch = 1; batch <= total_batches; ++batch) {
        int64_t batch_size = int64_t{1} << batch;
        int64_t lo = total;
        int64_t chunk = (batch_size + workers - 1) / workers;
        auto work = [&](int t) {
            int64_t begin = lo + t * chunk;
            int64_t end = std::min(lo + batch_size, begin + chunk);
            if (begin >= end) return;
            ForestSampler sampler(g);
            EdgeCounters &counters = locals[t];
            for (int64_t i = begin; i < end; ++i) {
                SpanningForest forest = sampler.sample(bfs.roots, RandomStream(seed, (uint64_t)i));
                counters.accumulate(forest);
                if (rooted) rooted->track_roots(forest);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < workers; ++t) pool.emplace_back(work, t);
        work(0);
        for (auto &t : pool) t.join();

        for (auto &local : locals) {
            global.merge_from(local);
            local.reset();
        }
        total += batch_size;

        double delta = 1.0 / (3.0 * (double)g.num_nodes() * (double)total_batches);
        if (total >= kMinSamplesBeforeStop && should_stop(total, delta)) break;
    }
    return total;
}

struct StopChecks {
    // the per-candidate relative-precision rule from the sampling analysis
    static bool paper(const std::vector<double> &value, const std::vector<double> &halfwidth,
                      double eps) {
        for (size_t i = 0; i < value.size(); ++i)
            if (halfwidth[i] > eps * (value[i] - halfwidth[i])) return false;
        return true;
    }
    // best-candidate separation: the greedy answer cannot change anymore
    static bool separated(const std::vector<double> &value, const std::vector<double> &halfwidth,
                          bool maximize) {
        if (value.size() <= 1) return false; // nothing to separate, let the precision rule decide
        size_t best = 0;
        for (size_t i = 1; i < value.size(); ++i)
            if (maximize ? value[i] > value[best] : value[i] < value[best]) best = i;
        for (size_t i = 0; i < value.size(); ++i) {
            if (i == best) continue;
            if (maximize) {
                if (value[best] - halfwidth[best] < value[i] + halfwidth[i]) return false;
            } else {
                if (value[best] + halfwidth[best] > value[i] - halfwidth[i]) return false;
            }
        }
        return true;
    }
};

} // namespace

void RunConfig::validate(node_t n) const {
    if (k < 1 || k >= n) throw data_error("RunConfig: need 1 <= k < n");
    if (eps <= 0.0 || eps >= 1.0) throw data_error("RunConfig: eps must be in (0,1)");
    if (r_max < 2) throw data_error("RunConfig: r_max too small");
}

int64_t SelectionTrace::total_samples() const {
    int64_t sum = 0;
    for (const auto &it : iterations) sum += it.samples;
    return sum;
}

std::pair<std::vector<double>, int64_t> estimate_pseudo_ranking(const Graph &g,
                                                                const SamplingControls &ctl) {
    if (!g.is_connected()) throw data_error("estimate_pseudo_ranking: graph must be connected");
    const node_t n = g.num_nodes();
    node_t s = g.max_degree_node();
    NodeSet roots{s};
    BfsStructure bfs = bfs_structure(g, roots);
    node_t tau = ctl.tau > 0 ? ctl.tau : diameter_estimate(g);
    uint64_t budget =
        sample_budget(BudgetKind::first_node, ctl.eps, tau, g.degree(s), n, ctl.r_max);
    uint64_t seed = derive_seed(ctl.seed, kFirstPhaseTag);
    int workers = effective_workers(ctl.workers, g, 0);

    EdgeCounters counters(g, bfs, nullptr, /*track_ones_stats=*/true);
    std::vector<double> x;
    const double x_sup = 3.0 * (double)tau; // |x - (2/n) ones| along a BFS path

    auto stop = [&](int64_t, double delta) {
        x = estimate_pseudo_diagonals(counters, bfs, n);
        std::vector<double> hw(n, 0.0);
        for (node_t u = 0; u < n; ++u) {
            if (u == s) continue; // x_s is exact
            hw[u] = confidence_halfwidth(counters.pseudo_stats(u), x_sup, delta,
                                         HalfwidthMode::bernstein);
        }
        if (StopChecks::paper(x, hw, ctl.eps)) return true;
        return ctl.stop == StopRule::adaptive && StopChecks::separated(x, hw, /*maximize=*/false);
    };
    int64_t used = sampling_loop(g, bfs, nullptr, true, seed, budget, workers, counters, nullptr,
                                 stop);
    x = estimate_pseudo_diagonals(counters, bfs, n);
    return {std::move(x), used};
}

node_t select_first_node(const Graph &g, const SamplingControls &ctl, int64_t *samples) {
    auto [x, used] = estimate_pseudo_ranking(g, ctl);
    if (samples) *samples = used;
    node_t best = 0;
    for (node_t u = 1; u < g.num_nodes(); ++u)
        if (x[u] < x[best]) best = u;
    return best;
}

node_t select_first_node(const Graph &g, double eps, uint64_t seed) {
    SamplingControls ctl;
    ctl.eps = eps;
    ctl.seed = seed;
    ctl.workers = 0;
    return select_first_node(g, ctl);
}

namespace {

/// Shared body of forest_delta / schur_delta. With an empty T the Schur
/// machinery drops out entirely.
GainEstimates delta_round(const Graph &g, const NodeSet &s, const NodeSet &t,
                          const SamplingControls &ctl) {
    if (s.empty()) throw data_error("delta: S must be non-empty");
    for (node_t u : s)
        if (u >= g.num_nodes()) throw data_error("delta: node id out of range");
    if (t.minus(s).size() != t.size()) throw data_error("delta: T must be disjoint from S");

    const node_t n = g.num_nodes();
    const bool use_schur = !t.empty();
    NodeSet roots = s.unite(t);

    std::vector<node_t> candidates; // V \ S, the nodes gains are about
    for (node_t u = 0; u < n; ++u)
        if (!s.contains(u)) candidates.push_back(u);
    if (candidates.empty()) throw data_error("delta: no candidates left");

    BfsStructure bfs = bfs_structure(g, roots);
    node_t tau = ctl.tau > 0 ? ctl.tau : diameter_estimate(g);
    uint64_t budget = sample_budget(use_schur ? BudgetKind::schur_delta : BudgetKind::forest_delta,
                                    ctl.eps, tau, max_degree_after_removal(g, roots), n, ctl.r_max);
    uint64_t seed = derive_seed(ctl.seed, 0x0de17aull);
    JLProjector projector = JLProjector::automatic(candidates, n, ctl.eps,
                                                   derive_seed(ctl.seed, 0x4a11ull), ctl.jl_dim_cap);
    int workers = effective_workers(ctl.workers, g, projector.dim());

    EdgeCounters counters(g, bfs, &projector, /*track_ones_stats=*/false);
    std::unique_ptr<RootedCounts> rooted;
    if (use_schur) rooted = std::make_unique<RootedCounts>(g, t);

    std::vector<node_t> u_nodes; // candidates that are not additional roots
    for (node_t u : candidates)
        if (!t.contains(u)) u_nodes.push_back(u);

    const double x_sup = (double)tau;
    GainEstimates result;

    auto extract = [&](double delta, bool *ok) -> GainEstimates {
        *ok = true;
        std::vector<double> z = estimate_diagonals(counters, bfs);
        Eigen::MatrixXd y = estimate_projected_rows(counters, bfs, projector);

        GainEstimates est;
        if (use_schur) {
            Eigen::MatrixXd f = rooted->estimate(u_nodes);
            SchurBlock block;
            block.t = t;
            block.m = assemble_schur(g, f, s, t);
            try {
                block.m_inv = invert_schur(block.m);
            } catch (const numerical_error &) {
                *ok = false; // not enough samples yet; next batch retries
                return est;
            }
            est = combine_blocks(z, y, f, block, projector, s, t, workers);
        } else {
            est.candidates = candidates;
            size_t nc = candidates.size();
            est.z.resize(nc);
            est.gain.resize(nc);
            est.sketch.resize(projector.dim(), nc);
            for (size_t c = 0; c < nc; ++c) {
                node_t u = candidates[c];
                est.z[c] = z[u];
                est.sketch.col(c) = y.col(u);
                est.gain[c] = est.z[c] > 0.0 ? est.sketch.col(c).squaredNorm() / est.z[c] : 0.0;
            }
        }
        est.samples = counters.total();

        // Bernstein half-width of the z stream, pushed through the gain
        // ratio to first order. T nodes have no per-forest stream; they
        // inherit the worst relative width seen over U.
        size_t nc = est.candidates.size();
        est.z_halfwidth.assign(nc, 0.0);
        est.gain_halfwidth.assign(nc, 0.0);
        double worst_rel = 0.0;
        for (size_t c = 0; c < nc; ++c) {
            node_t u = est.candidates[c];
            if (use_schur && t.contains(u)) continue;
            double hw = confidence_halfwidth(counters.z_stats(u), x_sup, delta,
                                             HalfwidthMode::bernstein);
            est.z_halfwidth[c] = hw;
            if (est.z[c] <= 0.0 || est.gain[c] <= 0.0) {
                est.gain_halfwidth[c] = std::numeric_limits<double>::infinity();
                *ok = false;
                continue;
            }
            double rel = hw / est.z[c];
            worst_rel = std::max(worst_rel, rel);
            est.gain_halfwidth[c] = est.gain[c] * 2.0 * rel;
        }
        if (use_schur)
            for (size_t c = 0; c < nc; ++c)
                if (t.contains(est.candidates[c]))
                    est.gain_halfwidth[c] = est.gain[c] * 2.0 * worst_rel;
        return est;
    };

    auto stop = [&](int64_t, double delta) {
        bool ok = false;
        GainEstimates est = extract(delta, &ok);
        if (!ok) return false;
        result = std::move(est);
        if (StopChecks::paper(result.gain, result.gain_halfwidth, ctl.eps)) return true;
        return ctl.stop == StopRule::adaptive &&
               StopChecks::separated(result.gain, result.gain_halfwidth, /*maximize=*/true);
    };

    int64_t used = sampling_loop(g, bfs, &projector, false, seed, budget, workers, counters,
                                 rooted.get(), stop);
    if (result.samples != counters.total()) {
        bool ok = false;
        double delta = 1.0 / (3.0 * (double)n);
        GainEstimates est = extract(delta, &ok);
        if (est.candidates.empty())
            throw numerical_error("schur_delta: Schur estimate stayed singular at the budget cap");
        result = std::move(est);
    }
    result.samples = used;
    return result;
}

} // namespace

GainEstimates forest_delta(const Graph &g, const NodeSet &s, const SamplingControls &ctl) {
    return delta_round(g, s, NodeSet{}, ctl);
}

GainEstimates schur_delta(const Graph &g, const NodeSet &s, const NodeSet &t,
                          const SamplingControls &ctl) {
    return delta_round(g, s, t, ctl);
}

namespace {

SamplingControls controls_for_iteration(const RunConfig &config, node_t tau, int iteration) {
    SamplingControls ctl;
    ctl.eps = config.eps;
    ctl.seed = derive_seed(config.seed, kIterationTag + (uint64_t)iteration);
    ctl.workers = config.workers;
    ctl.r_max = config.r_max;
    ctl.jl_dim_cap = config.jl_dim_cap;
    ctl.stop = config.stop;
    ctl.tau = tau;
    return ctl;
}

SelectionTrace greedy_drive(const Graph &g, const RunConfig &config, bool use_schur) {
    config.validate(g.num_nodes());
    if (!g.is_connected()) throw data_error("maximizer: graph must be connected");
    node_t tau = diameter_estimate(g);

    NodeSet t;
    if (use_schur) {
        if (config.schur_roots < 0) {
            t = select_root_set(g);
        } else {
            // explicit size: same max-degree peel, fixed length
            std::vector<node_t> picked;
            std::vector<node_t> deg(g.num_nodes());
            std::vector<char> gone(g.num_nodes(), 0);
            for (node_t u = 0; u < g.num_nodes(); ++u) deg[u] = g.degree(u);
            for (int i = 0; i < config.schur_roots && i < g.num_nodes(); ++i) {
                node_t pick = -1;
                for (node_t u = 0; u < g.num_nodes(); ++u)
                    if (!gone[u] && (pick < 0 || deg[u] > deg[pick])) pick = u;
                gone[pick] = 1;
                picked.push_back(pick);
                for (auto it = g.neighbors_begin(pick); it != g.neighbors_end(pick); ++it)
                    if (!gone[*it]) --deg[*it];
            }
            t = NodeSet(picked);
        }
    }

    SelectionTrace trace;
    double t0 = now_seconds();
    // The single-root phase is shared verbatim by both drivers, so the
    // same seed yields the same first pick either way.
    SamplingControls first_ctl = controls_for_iteration(config, tau, 0);
    first_ctl.seed = config.seed;
    auto [x, first_samples] = estimate_pseudo_ranking(g, first_ctl);
    node_t first = 0;
    for (node_t u = 1; u < g.num_nodes(); ++u)
        if (x[u] < x[first]) first = u;
    trace.chosen.push_back(first);
    trace.iterations.push_back({first, first_samples, x[first], now_seconds() - t0});

    NodeSet s{first};
    for (int round = 1; round < config.k; ++round) {
        double t1 = now_seconds();
        SamplingControls ctl = controls_for_iteration(config, tau, round);
        GainEstimates est = use_schur ? schur_delta(g, s, t.minus(s), ctl)
                                      : forest_delta(g, s, ctl);
        size_t best = 0;
        for (size_t c = 1; c < est.candidates.size(); ++c)
            if (est.gain[c] > est.gain[best]) best = c;
        node_t chosen = est.candidates[best];
        trace.chosen.push_back(chosen);
        trace.iterations.push_back({chosen, est.samples, est.gain[best], now_seconds() - t1});
        s.insert(chosen);
    }
    return trace;
}

} // namespace

SelectionTrace forest_cfcm(const Graph &g, const RunConfig &config) {
    return greedy_drive(g, config, /*use_schur=*/false);
}

SelectionTrace schur_cfcm(const Graph &g, const RunConfig &config) {
    return greedy_drive(g, config, /*use_schur=*/true);
}

SelectionTrace run_maximizer(const Graph &g, const RunConfig &config) {
    return config.algorithm == Algorithm::schur ? schur_cfcm(g, config) : forest_cfcm(g, config);
}

} // namespace cfcc
