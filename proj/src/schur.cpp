#include "cfcc/schur.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cfcc/exact.hpp"

namespace cfcc {

RootedCounts::RootedCounts(const Graph &g, NodeSet t) : g_(g), t_(std::move(t)) {
    t_index_.assign(g.num_nodes(), -1);
    for (size_t i = 0; i < t_.size(); ++i) t_index_[t_[i]] = (int)i;
    size_t cells = (size_t)g.num_nodes() * t_.size();
    counts_ = std::make_unique<std::atomic<uint32_t>[]>(cells);
    for (size_t i = 0; i < cells; ++i) counts_[i].store(0, std::memory_order_relaxed);
}

void RootedCounts::track_roots(const SpanningForest &forest) {
    // Reverse order visits parents before children, so each label is a
    // single lookup away.
    thread_local std::vector<node_t> label;
    label.assign(g_.num_nodes(), -1);
    for (auto it = forest.order.rbegin(); it != forest.order.rend(); ++it) {
        node_t u = *it;
        node_t p = forest.parent[u];
        node_t root = forest.is_root(p) ? p : label[p];
        label[u] = root;
        int ti = t_index_[root];
        if (ti >= 0 && t_index_[u] < 0)
            counts_[(size_t)u * t_.size() + ti].fetch_add(1, std::memory_order_relaxed);
    }
    total_.fetch_add(1, std::memory_order_relaxed);
}

int64_t RootedCounts::count(node_t u, node_t t) const {
    int ti = t_index_[t];
    if (ti < 0) throw data_error("RootedCounts: node not in T");
    return counts_[(size_t)u * t_.size() + ti].load(std::memory_order_relaxed);
}

Eigen::MatrixXd RootedCounts::estimate(const std::vector<node_t> &rows) const {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(g_.num_nodes(), t_.size());
    int64_t n = total();
    if (n == 0) return f;
    for (node_t u : rows)
        for (size_t j = 0; j < t_.size(); ++j)
            f(u, j) = (double)counts_[(size_t)u * t_.size() + j].load(std::memory_order_relaxed) /
                      (double)n;
    return f;
}

NodeSet select_root_set(const Graph &g) {
    node_t n = g.num_nodes();
    std::vector<node_t> deg(n);
    for (node_t u = 0; u < n; ++u) deg[u] = g.degree(u);
    std::vector<char> peeled(n, 0);

    std::vector<node_t> order;
    node_t best_size = 0;
    // |T| = 0 is a valid answer.
    int64_t best_diff = std::abs((int64_t)g.max_degree());
    node_t remaining_max = g.max_degree();

    while ((node_t)order.size() < n && (node_t)order.size() <= remaining_max) {
        node_t pick = -1;
        for (node_t u = 0; u < n; ++u)
            if (!peeled[u] && (pick < 0 || deg[u] > deg[pick])) pick = u;
        peeled[pick] = 1;
        order.push_back(pick);
        for (auto it = g.neighbors_begin(pick); it != g.neighbors_end(pick); ++it)
            if (!peeled[*it]) --deg[*it];
        remaining_max = 0;
        for (node_t u = 0; u < n; ++u)
            if (!peeled[u]) remaining_max = std::max(remaining_max, deg[u]);
        int64_t diff = std::abs((int64_t)order.size() - (int64_t)remaining_max);
        if (diff < best_diff) {
            best_diff = diff;
            best_size = (node_t)order.size();
        }
        // once |T| >= d_max(T) the difference only grows
        if ((node_t)order.size() >= remaining_max) break;
    }
    order.resize(best_size);
    return NodeSet(order);
}

Eigen::MatrixXd assemble_schur(const Graph &g, const Eigen::MatrixXd &f, const NodeSet &s,
                               const NodeSet &t) {
    if (f.rows() != g.num_nodes() || f.cols() != (Eigen::Index)t.size())
        throw data_error("assemble_schur: F has the wrong shape");
    size_t k = t.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(k, k);
    std::vector<int> t_index(g.num_nodes(), -1);
    for (size_t i = 0; i < k; ++i) t_index[t[i]] = (int)i;

    for (size_t i = 0; i < k; ++i) {
        node_t ti = t[i];
        m(i, i) = (double)g.degree(ti);
        for (size_t j = 0; j < k; ++j) {
            node_t tj = t[j];
            if (i != j && g.has_edge(ti, tj)) m(i, j) += -1.0;
            // subtract rooted probabilities of U-neighbors of t_i
            double corr = 0.0;
            for (auto it = g.neighbors_begin(ti); it != g.neighbors_end(ti); ++it) {
                node_t u = *it;
                if (t_index[u] >= 0 || s.contains(u)) continue;
                corr += f(u, j);
            }
            m(i, j) -= corr;
        }
    }
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd exact_rooted_probabilities(const Graph &g, const NodeSet &s, const NodeSet &t) {
    NodeSet roots = s.unite(t);
    LabeledMatrix sub = exact::grounded_laplacian(g, roots); // = L_UU
    Eigen::MatrixXd l_ut(sub.nodes.size(), t.size());
    for (size_t i = 0; i < sub.nodes.size(); ++i)
        for (size_t j = 0; j < t.size(); ++j)
            l_ut(i, j) = g.has_edge(sub.nodes[i], t[j]) ? -1.0 : 0.0;
    Eigen::MatrixXd f_small = -sub.values.llt().solve(l_ut);
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(g.num_nodes(), t.size());
    for (size_t i = 0; i < sub.nodes.size(); ++i) f.row(sub.nodes[i]) = f_small.row(i);
    return f;
}

Eigen::MatrixXd invert_schur(const Eigen::MatrixXd &m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw data_error("invert_schur: not square");
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw numerical_error("invert_schur: estimate not positive definite (insufficient samples)");
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    double residual = (m * inv - Eigen::MatrixXd::Identity(m.rows(), m.cols()))
                          .cwiseAbs()
                          .maxCoeff();
    if (residual > 1e-8)
        throw numerical_error("invert_schur: inverse residual too large (ill-conditioned estimate)");
    return inv;
}

GainEstimates combine_blocks(const std::vector<double> &z_u, const Eigen::MatrixXd &y_u,
                             const Eigen::MatrixXd &f, const SchurBlock &block,
                             const JLProjector &projector, const NodeSet &s, const NodeSet &t,
                             int threads) {
    const node_t n = (node_t)z_u.size();
    const int w = projector.dim();
    const size_t tk = t.size();
    if (y_u.rows() != w || y_u.cols() != n || f.rows() != n ||
        f.cols() != (Eigen::Index)tk || block.m_inv.rows() != (Eigen::Index)tk)
        throw data_error("combine_blocks: dimension mismatch");

    GainEstimates out;
    out.candidates.reserve(n - s.size());
    for (node_t u = 0; u < n; ++u)
        if (!s.contains(u)) out.candidates.push_back(u);
    size_t nc = out.candidates.size();
    out.z.assign(nc, 0.0);
    out.gain.assign(nc, 0.0);
    out.sketch.resize(w, nc);

    // Q holds the projector columns of the T nodes; WF the projected
    // rooted probabilities over U.
    Eigen::MatrixXd wf_plus_q = Eigen::MatrixXd::Zero(w, tk);
    for (size_t j = 0; j < tk; ++j) {
        const int8_t *col = projector.column(t[j]);
        if (!col) throw data_error("combine_blocks: T node is not a candidate");
        for (int i = 0; i < w; ++i) wf_plus_q(i, j) = projector.scale() * (double)col[i];
    }
    for (node_t u = 0; u < n; ++u) {
        if (s.contains(u) || t.contains(u)) continue;
        const int8_t *col = projector.column(u);
        if (!col) continue;
        for (size_t j = 0; j < tk; ++j) {
            double fu = f(u, j);
            if (fu == 0.0) continue;
            for (int i = 0; i < w; ++i) wf_plus_q(i, j) += projector.scale() * (double)col[i] * fu;
        }
    }

    Eigen::MatrixXd correction = wf_plus_q * block.m_inv;    // w x |T|
    Eigen::MatrixXd f_minv = f * block.m_inv;                // n x |T| (zero rows off U)

    auto process = [&](size_t begin, size_t end) {
        for (size_t c = begin; c < end; ++c) {
            node_t u = out.candidates[c];
            if (t.contains(u)) {
                size_t j = 0;
                while (t[j] != u) ++j;
                out.z[c] = block.m_inv(j, j);
                out.sketch.col(c) = correction.col(j);
            } else {
                out.z[c] = z_u[u] + f_minv.row(u).dot(f.row(u));
                out.sketch.col(c) = y_u.col(u) + correction * f.row(u).transpose();
            }
            out.gain[c] = out.sketch.col(c).squaredNorm() / out.z[c];
        }
    };
    threads = std::max(1, threads);
    if (threads == 1 || nc < 256) {
        process(0, nc);
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (nc + threads - 1) / threads;
        for (int ti = 0; ti < threads; ++ti) {
            size_t b = ti * chunk, e = std::min(nc, b + chunk);
            if (b < e) pool.emplace_back(process, b, e);
        }
        for (auto &th : pool) th.join();
    }
    return out;
}

} // namespace cfcc
