#include "cfcc/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "cfcc/random.hpp"

namespace cfcc {

int JLProjector::required_dim(double eps, node_t n) {
    if (eps <= 0.0 || eps >= 1.0) throw data_error("JLProjector: eps must be in (0,1)");
    double w = 24.0 * 49.0 / (eps * eps) * std::log((double)std::max<node_t>(n, 2));
    return (int)std::ceil(w);
}

JLProjector JLProjector::random(const std::vector<node_t> &candidates, node_t n, double eps,
                                uint64_t seed, int dim_cap) {
    int w = required_dim(eps, n);
    if (dim_cap > 0) w = std::min(w, dim_cap);
    w = std::min<int>(w, (int)candidates.size());
    w = std::max(w, 1);

    JLProjector p;
    p.mode_ = Mode::random;
    p.dim_ = w;
    p.scale_ = 1.0 / std::sqrt((double)w);
    p.candidates_ = candidates;
    p.col_of_.assign(n, -1);
    for (size_t c = 0; c < candidates.size(); ++c) p.col_of_[candidates[c]] = (int)c;
    p.entries_.resize((size_t)w * candidates.size());
    RandomStream stream(derive_seed(seed, 0x4A4CBEEFull), 0);
    for (auto &e : p.entries_) e = (int8_t)stream.next_sign();
    return p;
}

JLProjector JLProjector::identity(const std::vector<node_t> &candidates, node_t n) {
    JLProjector p;
    p.mode_ = Mode::identity;
    p.dim_ = (int)candidates.size();
    p.scale_ = 1.0;
    p.candidates_ = candidates;
    p.col_of_.assign(n, -1);
    for (size_t c = 0; c < candidates.size(); ++c) p.col_of_[candidates[c]] = (int)c;
    p.entries_.assign((size_t)p.dim_ * candidates.size(), 0);
    for (size_t c = 0; c < candidates.size(); ++c) p.entries_[c * p.dim_ + c] = 1;
    return p;
}

JLProjector JLProjector::automatic(const std::vector<node_t> &candidates, node_t n, double eps,
                                   uint64_t seed, int dim_cap) {
    int w = required_dim(eps, n);
    if (dim_cap > 0) w = std::min(w, dim_cap);
    if (w >= (int)candidates.size()) return identity(candidates, n);
    return random(candidates, n, eps, seed, dim_cap);
}

EdgeCounters::EdgeCounters(const Graph &g, BfsStructure bfs, const JLProjector *projector,
                           bool track_ones_stats)
    : g_(g),
      bfs_(std::move(bfs)),
      projector_(projector),
      dim_(projector ? projector->dim() : 0),
      track_ones_stats_(track_ones_stats) {
    node_t n = g.num_nodes();
    count_.assign(2 * g.num_edges(), 0);
    ones_.assign(2 * g.num_edges(), 0);
    if (dim_ > 0) {
        flux_up_.assign((size_t)n * dim_, 0);
        flux_down_.assign((size_t)n * dim_, 0);
    }
    zsum_.assign(n, 0);
    zsq_.assign(n, 0);
    if (track_ones_stats_) {
        osum_.assign(n, 0);
        osq_.assign(n, 0);
        xo_.assign(n, 0);
    }
    wsub_.assign((size_t)n * std::max(dim_, 1), 0);
    sub_ones_.assign(n, 0);
    // roots stay zero; non-root entries are written before read per forest
    x_scratch_.assign(n, 0);
    if (track_ones_stats_) o_scratch_.assign(n, 0);
}

int64_t EdgeCounters::slot(node_t a, node_t b) const {
    const node_t *begin = g_.neighbors_begin(a);
    const node_t *end = g_.neighbors_end(a);
    const node_t *it = std::lower_bound(begin, end, b);
    if (it == end || *it != b) throw data_error("edge counter slot: not an edge");
    return (begin - g_.neighbors_begin(0)) + (it - begin);
}

void EdgeCounters::accumulate(const SpanningForest &forest) {
    const node_t n = g_.num_nodes();
    if ((node_t)forest.parent.size() != n ||
        forest.order.size() != (size_t)(n - bfs_.roots.size()))
        throw data_error("accumulate_forest: forest size does not match counters");
    for (node_t r : bfs_.roots)
        if (!forest.is_root(r)) throw data_error("accumulate_forest: root set mismatch");

    // Children precede parents in `order`, so one pass accumulates every
    // subtree sum in O(1) amortized per node. The sketch scratch column is
    // consumed (and reset) exactly when its node is processed.
    const auto &order = forest.order;
    for (size_t idx = 0; idx < order.size(); ++idx) {
        if (dim_ > 0 && idx + 8 < order.size()) {
            // scratch lines for upcoming nodes are the dominant misses
            node_t fu = order[idx + 8];
            node_t fp = forest.parent[fu];
            __builtin_prefetch(wsub_.data() + (size_t)fu * dim_);
            __builtin_prefetch(wsub_.data() + (size_t)fu * dim_ + 16);
            __builtin_prefetch(wsub_.data() + (size_t)fp * dim_);
            __builtin_prefetch(wsub_.data() + (size_t)fp * dim_ + 16);
        }
        node_t u = order[idx];
        node_t p = forest.parent[u];
        int64_t s = slot(u, p);
        count_[s] += 1;
        int32_t ones_val = sub_ones_[u] + 1;
        ones_[s] += ones_val;
        if (!forest.is_root(p)) sub_ones_[p] += ones_val;

        if (dim_ > 0) {
            // one fused pass: finish u's subtree sum, store it on the BFS
            // tree edge if there is one, push it to the forest parent, and
            // hand the scratch slot back zeroed
            int32_t *sub = wsub_.data() + (size_t)u * dim_;
            const int8_t *col = projector_->column(u);
            int64_t *dst = nullptr;
            if (bfs_.parent[u] && *bfs_.parent[u] == p)
                dst = flux_up_.data() + (size_t)u * dim_;
            else if (bfs_.parent[p] && *bfs_.parent[p] == u)
                dst = flux_down_.data() + (size_t)p * dim_;
            int32_t *psub = forest.is_root(p) ? nullptr : wsub_.data() + (size_t)p * dim_;
            for (int j = 0; j < dim_; ++j) {
                int32_t val = sub[j] + (col ? col[j] : 0);
                sub[j] = 0;
                if (dst) dst[j] += val;
                if (psub) psub[j] += val;
            }
        }
    }

    // Telescoped per-forest increments along the stored BFS tree feed the
    // variance statistics for the Bernstein stop.
    for (node_t v : bfs_.order) {
        if (!bfs_.parent[v]) continue;
        node_t b = *bfs_.parent[v];
        int32_t step = (forest.parent[v] == b ? 1 : 0) - (forest.parent[b] == v ? 1 : 0);
        int32_t x = x_scratch_[b] + step;
        x_scratch_[v] = x;
        zsum_[v] += x;
        zsq_[v] += (int64_t)x * x;
        if (track_ones_stats_) {
            int32_t o = o_scratch_[b];
            if (forest.parent[v] == b) o += sub_ones_[v] + 1;
            if (forest.parent[b] == v) o -= sub_ones_[b] + 1;
            o_scratch_[v] = o;
            osum_[v] += o;
            osq_[v] += (__int128)((int64_t)o * o);
            xo_[v] += (__int128)((int64_t)x * o);
        }
    }

    std::fill(sub_ones_.begin(), sub_ones_.end(), 0);
    ++total_;
}

void EdgeCounters::merge_from(const EdgeCounters &other) {
    if (other.dim_ != dim_ || other.bfs_.roots != bfs_.roots ||
        other.track_ones_stats_ != track_ones_stats_)
        throw data_error("merge_from: counter layout mismatch");
    auto add = [](auto &a, const auto &b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(count_, other.count_);
    add(ones_, other.ones_);
    add(flux_up_, other.flux_up_);
    add(flux_down_, other.flux_down_);
    add(zsum_, other.zsum_);
    add(zsq_, other.zsq_);
    if (track_ones_stats_) {
        add(osum_, other.osum_);
        add(osq_, other.osq_);
        add(xo_, other.xo_);
    }
    total_ += other.total_;
}

void EdgeCounters::reset() {
    auto zero = [](auto &a) { std::fill(a.begin(), a.end(), 0); };
    zero(count_);
    zero(ones_);
    zero(flux_up_);
    zero(flux_down_);
    zero(zsum_);
    zero(zsq_);
    zero(osum_);
    zero(osq_);
    zero(xo_);
    total_ = 0;
}

int64_t EdgeCounters::edge_count(node_t a, node_t b) const { return count_[slot(a, b)]; }
int64_t EdgeCounters::ones_aggregate(node_t a, node_t b) const { return ones_[slot(a, b)]; }

StreamStats EdgeCounters::z_stats(node_t u) const {
    StreamStats s;
    s.count = total_;
    if (total_ == 0) return s;
    double mean = (double)zsum_[u] / (double)total_;
    s.mean = mean;
    if (total_ > 1)
        s.variance = ((double)zsq_[u] - (double)total_ * mean * mean) / (double)(total_ - 1);
    s.variance = std::max(s.variance, 0.0);
    return s;
}

StreamStats EdgeCounters::pseudo_stats(node_t u) const {
    if (!track_ones_stats_) throw data_error("pseudo_stats: ones stream not tracked");
    StreamStats s;
    s.count = total_;
    if (total_ == 0) return s;
    double n = (double)g_.num_nodes();
    double c = 2.0 / n;
    double mean = ((double)zsum_[u] - c * (double)osum_[u]) / (double)total_;
    s.mean = mean;
    if (total_ > 1) {
        // Var(x - c*o) from the exact integer moment sums.
        double sum_sq =
            (double)zsq_[u] - 2.0 * c * (double)xo_[u] + c * c * (double)osq_[u];
        s.variance = (sum_sq - (double)total_ * mean * mean) / (double)(total_ - 1);
    }
    s.variance = std::max(s.variance, 0.0);
    return s;
}

void accumulate_forest(EdgeCounters &counters, const SpanningForest &forest,
                       const JLProjector *projector) {
    if (projector != counters.projector())
        throw data_error("accumulate_forest: projector does not match counters");
    counters.accumulate(forest);
}

std::vector<double> estimate_diagonals(const EdgeCounters &counters, const BfsStructure &bfs) {
    if (counters.total() < 1) throw data_error("estimate_diagonals: no forests accumulated");
    if (bfs.roots != counters.roots())
        throw data_error("estimate_diagonals: BFS root set mismatch");
    double inv_n = 1.0 / (double)counters.total();
    std::vector<double> z(bfs.parent.size(), 0.0);
    for (node_t v : bfs.order) {
        if (!bfs.parent[v]) continue;
        node_t b = *bfs.parent[v];
        z[v] = z[b] + inv_n * (double)(counters.edge_count(v, b) - counters.edge_count(b, v));
    }
    return z;
}

Eigen::MatrixXd estimate_projected_rows(const EdgeCounters &counters, const BfsStructure &bfs,
                                        const JLProjector &projector) {
    if (counters.total() < 1) throw data_error("estimate_projected_rows: no forests accumulated");
    if (&projector != counters.projector())
        throw data_error("estimate_projected_rows: projector mismatch");
    const auto &stored = counters.bfs();
    if (bfs.parent != stored.parent)
        throw data_error("estimate_projected_rows: sketch flux is tied to the counters' BFS tree");

    int w = projector.dim();
    node_t n = (node_t)bfs.parent.size();
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(w, n);
    double scale = projector.scale() / (double)counters.total();
    const auto &up = counters.flux_up();
    const auto &down = counters.flux_down();
    for (node_t v : bfs.order) {
        if (!bfs.parent[v]) continue;
        node_t b = *bfs.parent[v];
        for (int j = 0; j < w; ++j)
            y(j, v) = y(j, b) + scale * (double)(up[(size_t)v * w + j] - down[(size_t)v * w + j]);
    }
    return y;
}

std::vector<double> estimate_pseudo_diagonals(const EdgeCounters &counters,
                                              const BfsStructure &bfs, node_t n) {
    if (counters.roots().size() != 1)
        throw data_error("estimate_pseudo_diagonals: requires a single root");
    if (bfs.roots != counters.roots())
        throw data_error("estimate_pseudo_diagonals: BFS root set mismatch");
    if (counters.total() < 1) throw data_error("estimate_pseudo_diagonals: no forests");

    double inv_total = 1.0 / (double)counters.total();
    std::vector<double> z(bfs.parent.size(), 0.0), ones(bfs.parent.size(), 0.0);
    for (node_t v : bfs.order) {
        if (!bfs.parent[v]) continue;
        node_t b = *bfs.parent[v];
        z[v] = z[b] + inv_total * (double)(counters.edge_count(v, b) - counters.edge_count(b, v));
        ones[v] =
            ones[b] + inv_total * (double)(counters.ones_aggregate(v, b) - counters.ones_aggregate(b, v));
    }
    std::vector<double> x(bfs.parent.size(), 0.0);
    for (size_t u = 0; u < x.size(); ++u) x[u] = z[u] - 2.0 / (double)n * ones[u];
    for (node_t r : counters.roots()) x[r] = 0.0;
    return x;
}

double confidence_halfwidth(const StreamStats &stats, double x_sup, double delta,
                            HalfwidthMode mode) {
    if (x_sup <= 0.0) throw data_error("confidence_halfwidth: X_sup must be positive");
    double count = (double)stats.count;
    if (mode == HalfwidthMode::hoeffding) {
        // tail level must keep log(2/delta) positive
        if (delta <= 0.0 || delta >= 2.0) throw data_error("confidence_halfwidth: invalid delta");
        if (stats.count < 1) throw data_error("confidence_halfwidth: empty stream");
        return x_sup * std::sqrt(std::log(2.0 / delta) / (2.0 * count));
    }
    if (delta <= 0.0 || delta >= 3.0) throw data_error("confidence_halfwidth: invalid delta");
    if (stats.count < 2) throw data_error("confidence_halfwidth: Bernstein needs count >= 2");
    double log_term = std::log(3.0 / delta);
    return std::sqrt(2.0 * stats.variance * log_term / count) + 3.0 * x_sup * log_term / count;
}

uint64_t sample_budget(BudgetKind kind, double eps, node_t tau, node_t degree_arg, node_t n,
                       uint64_t r_max) {
    if (eps <= 0.0 || eps >= 1.0) throw data_error("sample_budget: eps must be in (0,1)");
    if (n < 2 || tau < 1) throw data_error("sample_budget: degenerate graph parameters");
    // Computed in log space: the d^(2*tau+2) factor overflows doubles long
    // before the cap applies.
    double log_r;
    double log_tau = std::log((double)tau);
    double log_of_log2n = std::log(std::log(2.0 * (double)n));
    switch (kind) {
    case BudgetKind::first_node:
        log_r = std::log(18.0) - 2.0 * std::log(eps) + 2.0 * log_tau +
                2.0 * std::log((double)std::max<node_t>(degree_arg, 1)) -
                4.0 * std::log1p(-1.0 / (double)n) + log_of_log2n;
        break;
    case BudgetKind::forest_delta:
    case BudgetKind::schur_delta: {
        double lead = (kind == BudgetKind::schur_delta) ? 8.0 : 2.0;
        // an all-isolated remainder collapses the degree power; the other
        // factors still give the precision budget
        double deg = (double)std::max<node_t>(degree_arg, 1);
        log_r = std::log(lead) + 2.0 * std::log(15.0 / eps) + 2.0 * log_tau +
                (2.0 * tau + 2.0) * std::log(deg) + log_of_log2n;
        break;
    }
    default:
        throw data_error("sample_budget: unknown kind");
    }
    if (log_r >= std::log((double)r_max)) return r_max;
    double r = std::exp(log_r);
    uint64_t out = (uint64_t)std::ceil(r);
    return std::max<uint64_t>(std::min(out, r_max), 1);
}

} // namespace cfcc
