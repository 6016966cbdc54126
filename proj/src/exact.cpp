#include "cfcc/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "cfcc/random.hpp"
#include "cfcc/welford.hpp"

namespace cfcc {

int LabeledMatrix::index_of(node_t u) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), u);
    if (it == nodes.end() || *it != u) throw data_error("node not present in labeled matrix");
    return (int)(it - nodes.begin());
}

namespace exact {

namespace {

// Exact ties come out of floating point a few ulps apart; the id
// tie-break only makes sense with a noise margin.
constexpr double kTieTol = 1e-9;

bool strictly_less(double candidate, double best) {
    return candidate < best - kTieTol * std::max(1.0, std::abs(best));
}

bool strictly_greater(double candidate, double best) {
    return candidate > best + kTieTol * std::max(1.0, std::abs(best));
}

} // namespace

Eigen::MatrixXd laplacian(const Graph &g) {
    node_t n = g.num_nodes();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (node_t u = 0; u < n; ++u) {
        lap(u, u) = g.degree(u);
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            lap(u, *it) = -1.0;
    }
    return lap;
}

LabeledMatrix grounded_laplacian(const Graph &g, const NodeSet &s) {
    node_t n = g.num_nodes();
    if (s.empty()) throw data_error("grounded_laplacian: empty ground set");
    LabeledMatrix out;
    out.nodes.reserve(n - s.size());
    for (node_t u = 0; u < n; ++u)
        if (!s.contains(u)) out.nodes.push_back(u);
    int dim = (int)out.nodes.size();
    out.values = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        node_t u = out.nodes[i];
        out.values(i, i) = g.degree(u);
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it) {
            if (s.contains(*it)) continue;
            auto pos = std::lower_bound(out.nodes.begin(), out.nodes.end(), *it);
            out.values(i, (int)(pos - out.nodes.begin())) = -1.0;
        }
    }
    return out;
}

Eigen::MatrixXd pseudoinverse(const Graph &g) {
    node_t n = g.num_nodes();
    if (n > kDenseLimit)
        throw data_error("pseudoinverse: graph too large for the dense path, use cfcc_iterative");
    if (!g.is_connected()) throw data_error("pseudoinverse: graph is not connected");
    double inv_n = 1.0 / (double)n;
    Eigen::MatrixXd shifted = laplacian(g);
    shifted.array() += inv_n;
    Eigen::MatrixXd result = shifted.llt().solve(Eigen::MatrixXd::Identity(n, n));
    result.array() -= inv_n;
    return result;
}

namespace {

Eigen::MatrixXd grounded_inverse(const Graph &g, const NodeSet &s) {
    LabeledMatrix sub = grounded_laplacian(g, s);
    Eigen::LLT<Eigen::MatrixXd> llt(sub.values);
    if (llt.info() != Eigen::Success)
        throw numerical_error("grounded Laplacian is not positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(sub.values.rows(), sub.values.cols()));
}

} // namespace

GroupScore group_cfcc(const Graph &g, const NodeSet &s) {
    if (s.empty()) throw data_error("group_cfcc: empty group");
    if ((node_t)s.size() >= g.num_nodes()) throw data_error("group_cfcc: group covers all nodes");
    double trace = grounded_inverse(g, s).trace();
    return {trace, (double)g.num_nodes() / trace};
}

double exact_gain(const Graph &g, const NodeSet &s, node_t u) {
    if (s.empty()) throw data_error("exact_gain: S must be non-empty");
    if (s.contains(u)) throw data_error("exact_gain: u already in S");

    LabeledMatrix sub = grounded_laplacian(g, s);
    Eigen::MatrixXd inv =
        sub.values.llt().solve(Eigen::MatrixXd::Identity(sub.values.rows(), sub.values.cols()));
    int ui = sub.index_of(u);
    double ratio = inv.col(ui).squaredNorm() / inv(ui, ui);

    NodeSet grown = s;
    grown.insert(u);
    double diff;
    if ((node_t)grown.size() == g.num_nodes()) {
        diff = inv.trace(); // removing the last free node empties the matrix
    } else {
        diff = inv.trace() - grounded_inverse(g, grown).trace();
    }
    if (std::abs(diff - ratio) > 1e-10 * std::max(1.0, std::abs(diff)))
        throw numerical_error("exact_gain: trace difference and diagonal ratio disagree");
    return ratio;
}

OptimumResult exhaustive_optimum(const Graph &g, int k, int threads) {
    node_t n = g.num_nodes();
    if (k < 1 || k >= n) throw data_error("exhaustive_optimum: need 1 <= k < n");
    double combos = 1.0;
    for (int i = 0; i < k; ++i) combos *= (double)(n - i) / (double)(i + 1);
    if (combos > (double)kEnumerationCap)
        throw data_error("exhaustive_optimum: C(n,k) exceeds the enumeration cap");

    // Enumerate k-subsets in lexicographic order; strict improvement keeps
    // the lexicographically smallest maximizer.
    std::vector<std::vector<node_t>> subsets;
    subsets.reserve((size_t)combos);
    std::vector<node_t> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        subsets.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }

    std::vector<double> scores(subsets.size());
    threads = std::max(1, threads);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        Eigen::MatrixXd lap = laplacian(g);
        Eigen::MatrixXd sub;
        std::vector<node_t> keep;
        for (size_t idx; (idx = next.fetch_add(1)) < subsets.size();) {
            const auto &set = subsets[idx];
            keep.clear();
            size_t si = 0;
            for (node_t u = 0; u < n; ++u) {
                if (si < set.size() && set[si] == u) { ++si; continue; }
                keep.push_back(u);
            }
            int dim = (int)keep.size();
            sub.resize(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) sub(i, j) = lap(keep[i], keep[j]);
            scores[idx] = sub.llt().solve(Eigen::MatrixXd::Identity(dim, dim)).trace();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();

    size_t best = 0;
    for (size_t i = 1; i < scores.size(); ++i)
        if (strictly_less(scores[i], scores[best])) best = i;
    return {NodeSet(subsets[best]), (double)n / scores[best]};
}

ExactTrace greedy_exact(const Graph &g, int k) {
    node_t n = g.num_nodes();
    if (k < 1 || k >= n) throw data_error("greedy_exact: need 1 <= k < n");
    if (n > kDenseLimit) throw data_error("greedy_exact: graph too large for the dense path");

    ExactTrace trace;
    Eigen::MatrixXd pinv = pseudoinverse(g);
    node_t first = 0;
    for (node_t u = 1; u < n; ++u)
        if (strictly_less(pinv(u, u), pinv(first, first))) first = u;
    trace.chosen.push_back(first);
    trace.gains.push_back(pinv.trace() + n * pinv(first, first));

    NodeSet s{first};
    for (int round = 1; round < k; ++round) {
        LabeledMatrix sub = grounded_laplacian(g, s);
        Eigen::MatrixXd inv =
            sub.values.llt().solve(Eigen::MatrixXd::Identity(sub.values.rows(), sub.values.cols()));
        node_t best = -1;
        double best_gain = -1.0;
        for (int i = 0; i < (int)sub.nodes.size(); ++i) {
            double gain = inv.col(i).squaredNorm() / inv(i, i);
            if (best < 0 || strictly_greater(gain, best_gain)) {
                best_gain = gain;
                best = sub.nodes[i];
            }
        }
        trace.chosen.push_back(best);
        trace.gains.push_back(best_gain);
        s.insert(best);
    }
    trace.cfcc = group_cfcc(g, s).cfcc;
    return trace;
}

double forest_count(const Graph &g, const NodeSet &s) {
    if (g.num_nodes() > kDenseLimit) throw data_error("forest_count: graph too large");
    if ((node_t)s.size() == g.num_nodes()) return 1.0; // the empty forest
    LabeledMatrix sub = grounded_laplacian(g, s);
    return sub.values.llt().matrixL().determinant() *
           sub.values.llt().matrixL().determinant();
}

namespace {

// Matrix-free y = L_{-S} x over the surviving nodes.
void apply_grounded(const Graph &g, const std::vector<char> &gone,
                    const std::vector<int> &dense_of, const std::vector<node_t> &nodes,
                    const Eigen::VectorXd &x, Eigen::VectorXd &y) {
    for (size_t i = 0; i < nodes.size(); ++i) {
        node_t u = nodes[i];
        double acc = (double)g.degree(u) * x[i];
        for (auto it = g.neighbors_begin(u); it != g.neighbors_end(u); ++it)
            if (!gone[*it]) acc -= x[dense_of[*it]];
        y[i] = acc;
    }
}

} // namespace

IterativeScore cfcc_iterative(const Graph &g, const NodeSet &s, int probes, double tol,
                              uint64_t seed, int threads) {
    if (s.empty()) throw data_error("cfcc_iterative: empty group");
    if (probes < 1) throw data_error("cfcc_iterative: need at least one probe");
    node_t n = g.num_nodes();
    std::vector<char> gone(n, 0);
    for (node_t r : s) gone[r] = 1;
    std::vector<node_t> nodes;
    std::vector<int> dense_of(n, -1);
    for (node_t u = 0; u < n; ++u)
        if (!gone[u]) {
            dense_of[u] = (int)nodes.size();
            nodes.push_back(u);
        }
    int dim = (int)nodes.size();
    if (dim == 0) throw data_error("cfcc_iterative: group covers all nodes");
    const int max_iter = std::max(1000, 20 * dim);

    std::vector<double> quad(probes);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        Eigen::VectorXd x(dim), r(dim), p(dim), ap(dim), b(dim);
        for (int probe; (probe = next.fetch_add(1)) < probes;) {
            RandomStream stream(derive_seed(seed, 0xCF5EEDull), (uint64_t)probe);
            for (int i = 0; i < dim; ++i) b[i] = (double)stream.next_sign();
            // Plain CG; L_{-S} is SPD on connected graphs with non-empty S.
            x.setZero();
            r = b;
            p = r;
            double rr = r.squaredNorm();
            double b_norm = std::sqrt(rr);
            int it = 0;
            while (std::sqrt(rr) > tol * b_norm) {
                if (++it > max_iter) { failed = true; return; }
                apply_grounded(g, gone, dense_of, nodes, p, ap);
                double alpha = rr / p.dot(ap);
                x += alpha * p;
                r -= alpha * ap;
                double rr_new = r.squaredNorm();
                p = r + (rr_new / rr) * p;
                rr = rr_new;
            }
            quad[probe] = b.dot(x);
        }
    };
    threads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
    if (failed) throw numerical_error("cfcc_iterative: CG did not converge within the iteration cap");

    WelfordAccumulator stats;
    for (double q : quad) stats.add(q);
    double trace = stats.mean();
    double se = probes > 1 ? std::sqrt(stats.variance() / (double)probes) : 0.0;
    return {trace, (double)n / trace, se};
}

} // namespace exact
} // namespace cfcc
