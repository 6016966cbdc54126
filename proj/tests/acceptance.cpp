// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Each criterion prints its measured evidence so failures
// are diagnosable from the log alone.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "cfcc/baselines.hpp"
#include "cfcc/chisq.hpp"
#include "cfcc/exact.hpp"
#include "cfcc/forest.hpp"
#include "cfcc/greedy.hpp"
#include "cfcc/schur.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace cfcc;
using namespace cfcc::testing;
namespace ex = cfcc::exact;

namespace {

int g_failures = 0;

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void report(int criterion, bool pass, const std::string &what, double seconds,
            double budget_seconds) {
    bool in_budget = budget_seconds <= 0.0 || seconds < budget_seconds;
    bool ok = pass && in_budget;
    std::printf("[%s] criterion %2d: %s (%.1f s%s)\n", ok ? "PASS" : "FAIL", criterion,
                what.c_str(), seconds,
                budget_seconds > 0.0 ? (" / budget " + std::to_string((int)budget_seconds) + " s").c_str()
                                     : "");
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

RunConfig driver_config(Algorithm algo, int k, double eps, uint64_t seed) {
    RunConfig cfg;
    cfg.algorithm = algo;
    cfg.k = k;
    cfg.eps = eps;
    cfg.seed = seed;
    cfg.workers = 0;
    return cfg;
}

double prefix_cfcc(const Graph &g, const std::vector<node_t> &chosen, size_t len) {
    NodeSet s(std::vector<node_t>(chosen.begin(), chosen.begin() + len));
    return ex::group_cfcc(g, s).cfcc;
}

// ---- criterion 1 ----------------------------------------------------------

bool sampler_distribution_ok(const Graph &g, const NodeSet &roots, int64_t samples,
                             uint64_t seed, double *p_out) {
    double cells = std::round(ex::forest_count(g, roots));
    std::map<std::vector<node_t>, int64_t> hist;
    ForestSampler sampler(g);
    for (int64_t i = 0; i < samples; ++i)
        ++hist[sampler.sample(roots, RandomStream(seed, (uint64_t)i)).parent];
    if ((double)hist.size() > cells) return false; // impossible forest seen
    std::vector<int64_t> occupied;
    for (const auto &[f, c] : hist) occupied.push_back(c);
    double p = chi_square_uniform_sparse_p(occupied, cells, samples);
    *p_out = p;
    return p > 0.001;
}

void criterion_1() {
    double t0 = now_s();
    const int64_t samples = 100000;
    std::vector<Graph> graphs;
    graphs.push_back(complete_graph(3));
    for (int n = 2; n <= 6; ++n)
        for (const auto &edges : connected_graph_classes(n)) graphs.push_back(Graph(n, edges));

    std::atomic<size_t> next{0};
    std::atomic<int> bad{0};
    std::atomic<double> min_p{1.0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < graphs.size();) {
            double p = 0.0;
            if (!sampler_distribution_ok(graphs[i], NodeSet{0}, samples, 1000 + i, &p)) ++bad;
            double seen = min_p.load();
            while (p < seen && !min_p.compare_exchange_weak(seen, p)) {}
        }
    };
    std::thread other(worker);
    worker();
    other.join();

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "sampler distribution: %zu graphs (all connected classes n<=6 + K3), "
                  "1e5 samples each, min p=%.4f",
                  graphs.size(), min_p.load());
    report(1, bad == 0, buf, now_s() - t0, 10.0);
}

// ---- criterion 2 ----------------------------------------------------------

void criterion_2() {
    double t0 = now_s();
    Graph karate = karate_graph();
    NodeSet s{karate.max_degree_node()};
    BfsStructure bfs = bfs_structure(karate, s);
    EdgeCounters counters(karate, bfs, nullptr, false);
    ForestSampler sampler(karate);
    const int64_t total = 200000;
    for (int64_t i = 0; i < total; ++i)
        counters.accumulate(sampler.sample(s, RandomStream(4, (uint64_t)i)));
    auto z = estimate_diagonals(counters, bfs);

    LabeledMatrix sub = ex::grounded_laplacian(karate, s);
    Eigen::MatrixXd inv =
        sub.values.llt().solve(Eigen::MatrixXd::Identity(sub.values.rows(), sub.values.cols()));
    double worst = 0.0;
    for (size_t i = 0; i < sub.nodes.size(); ++i) {
        double truth = inv(i, i);
        worst = std::max(worst, std::abs(z[sub.nodes[i]] - truth) / truth);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "diagonal estimates on karate, 2e5 forests, worst relative error %.4f", worst);
    report(2, worst < 0.02, buf, now_s() - t0, 60.0);
}

// ---- criterion 3 ----------------------------------------------------------

void criterion_3() {
    double t0 = now_s();
    Graph karate = karate_graph();
    Eigen::MatrixXd pinv = ex::pseudoinverse(karate);
    node_t truth = 0;
    for (node_t u = 1; u < karate.num_nodes(); ++u)
        if (pinv(u, u) < pinv(truth, truth)) truth = u;

    int hits = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        SamplingControls ctl;
        ctl.eps = 0.2;
        ctl.seed = seed;
        ctl.workers = 0;
        if (select_first_node(karate, ctl) == truth) ++hits;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "first-node phase matches dense argmin (node %d) in %d/10 seeds",
                  truth, hits);
    report(3, hits >= 8, buf, now_s() - t0, 60.0);
}

// ---- criterion 4 ----------------------------------------------------------

void criterion_4() {
    double t0 = now_s();
    double worst_assembly = 0.0, worst_block = 0.0, worst_lemma = 0.0;
    RandomStream rng(404, 0);
    for (int trial = 0; trial < 50; ++trial) {
        node_t n = 8 + (node_t)rng.next_below(43); // up to 50 nodes
        Graph g = random_connected_graph(n, 0.12, 9000 + trial);
        NodeSet s{(node_t)rng.next_below(n)};
        NodeSet t;
        while (t.size() < 1 + rng.next_below(4)) {
            node_t cand = (node_t)rng.next_below(n);
            if (!s.contains(cand)) t.insert(cand);
        }

        // Eq. 10: assembly from exact rooted probabilities
        Eigen::MatrixXd f = exact_rooted_probabilities(g, s, t);
        Eigen::MatrixXd m = assemble_schur(g, f, s, t);
        Eigen::MatrixXd truth = dense_schur_complement(g, s, t);
        worst_assembly = std::max(worst_assembly, (m - truth).cwiseAbs().maxCoeff());

        // Lemma 12: grounded Schur equals sub-Schur of the full Laplacian
        NodeSet st = s.unite(t);
        Eigen::MatrixXd lap = ex::laplacian(g);
        std::vector<int> st_rows, u_rows;
        for (node_t v = 0; v < n; ++v) (st.contains(v) ? st_rows : u_rows).push_back(v);
        Eigen::MatrixXd pp(st_rows.size(), st_rows.size()), pu(st_rows.size(), u_rows.size()),
            uu(u_rows.size(), u_rows.size());
        for (size_t i = 0; i < st_rows.size(); ++i)
            for (size_t j = 0; j < st_rows.size(); ++j) pp(i, j) = lap(st_rows[i], st_rows[j]);
        for (size_t i = 0; i < st_rows.size(); ++i)
            for (size_t j = 0; j < u_rows.size(); ++j) pu(i, j) = lap(st_rows[i], u_rows[j]);
        for (size_t i = 0; i < u_rows.size(); ++i)
            for (size_t j = 0; j < u_rows.size(); ++j) uu(i, j) = lap(u_rows[i], u_rows[j]);
        Eigen::MatrixXd whole =
            u_rows.empty() ? pp : pp - pu * uu.llt().solve(pu.transpose());
        std::vector<int> keep;
        for (size_t i = 0; i < st_rows.size(); ++i)
            if (t.contains(st_rows[i])) keep.push_back((int)i);
        Eigen::MatrixXd reduced(keep.size(), keep.size());
        for (size_t i = 0; i < keep.size(); ++i)
            for (size_t j = 0; j < keep.size(); ++j) reduced(i, j) = whole(keep[i], keep[j]);
        worst_lemma = std::max(worst_lemma, (reduced - truth).cwiseAbs().maxCoeff());

        // Eq. 8: block reconstruction of the grounded inverse
        NodeSet roots = s.unite(t);
        std::vector<node_t> candidates;
        for (node_t u = 0; u < n; ++u)
            if (!s.contains(u)) candidates.push_back(u);
        JLProjector proj = JLProjector::identity(candidates, n);
        std::vector<double> z(n, 0.0);
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero((int)candidates.size(), n);
        if ((node_t)roots.size() < n) {
            LabeledMatrix uu_sub = ex::grounded_laplacian(g, roots);
            Eigen::MatrixXd uinv = uu_sub.values.llt().solve(
                Eigen::MatrixXd::Identity(uu_sub.values.rows(), uu_sub.values.cols()));
            for (size_t i = 0; i < uu_sub.nodes.size(); ++i) {
                z[uu_sub.nodes[i]] = uinv(i, i);
                for (size_t j = 0; j < uu_sub.nodes.size(); ++j)
                    y(proj.candidate_index(uu_sub.nodes[i]), uu_sub.nodes[j]) = uinv(i, j);
            }
        }
        SchurBlock block{t, m, invert_schur(m)};
        GainEstimates est = combine_blocks(z, y, f, block, proj, s, t);
        LabeledMatrix sub = ex::grounded_laplacian(g, s);
        Eigen::MatrixXd inv = sub.values.llt().solve(
            Eigen::MatrixXd::Identity(sub.values.rows(), sub.values.cols()));
        for (size_t c = 0; c < est.candidates.size(); ++c) {
            int ui = sub.index_of(est.candidates[c]);
            worst_block = std::max(worst_block, std::abs(est.z[c] - inv(ui, ui)));
            for (size_t c2 = 0; c2 < est.candidates.size(); ++c2)
                worst_block = std::max(
                    worst_block,
                    std::abs(est.sketch(c2, c) - inv(sub.index_of(est.candidates[c2]), ui)));
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "Schur identities on 50 graphs: assembly %.2e, block %.2e, sub-Schur %.2e",
                  worst_assembly, worst_block, worst_lemma);
    report(4, worst_assembly < 1e-10 && worst_block < 1e-10 && worst_lemma < 1e-10, buf,
           now_s() - t0, 30.0);
}

// ---- criterion 5 ----------------------------------------------------------

void criterion_5() {
    double t0 = now_s();
    Graph karate = karate_graph();
    NodeSet t{0, 32, 33}; // top-3 degrees
    std::vector<node_t> u_nodes;
    for (node_t u = 0; u < karate.num_nodes(); ++u)
        if (!t.contains(u)) u_nodes.push_back(u);
    RootedCounts counts(karate, t);
    ForestSampler sampler(karate);
    for (int64_t i = 0; i < 100000; ++i)
        counts.track_roots(sampler.sample(t, RandomStream(55, (uint64_t)i)));
    Eigen::MatrixXd f_hat = counts.estimate(u_nodes);
    Eigen::MatrixXd f = exact_rooted_probabilities(karate, NodeSet{}, t);
    double worst = (f_hat - f).cwiseAbs().maxCoeff();
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "rooted probabilities on karate, T = top-3 degrees, max |F~ - F| = %.4f", worst);
    report(5, worst <= 0.01, buf, now_s() - t0, 60.0);
}

// ---- criterion 6 ----------------------------------------------------------

void criterion_6() {
    double t0 = now_s();
    RandomStream rng(606, 0);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        node_t n = 6 + (node_t)rng.next_below(35); // up to 40 nodes
        Graph g = random_connected_graph(n, 0.15, 7000 + done);
        NodeSet s{(node_t)rng.next_below(n)};
        if (rng.next_below(2)) s.insert((node_t)rng.next_below(n));
        node_t u = (node_t)rng.next_below(n);
        if (s.contains(u) || (node_t)s.size() >= n - 1) continue;

        LabeledMatrix sub = ex::grounded_laplacian(g, s);
        Eigen::MatrixXd inv = sub.values.llt().solve(
            Eigen::MatrixXd::Identity(sub.values.rows(), sub.values.cols()));
        int ui = sub.index_of(u);
        double ratio = inv.col(ui).squaredNorm() / inv(ui, ui);
        NodeSet grown = s;
        grown.insert(u);
        double diff = inv.trace();
        if ((node_t)grown.size() < n) diff -= ex::group_cfcc(g, grown).trace;
        worst = std::max(worst, std::abs(ratio - diff) / std::max(1.0, std::abs(diff)));
        ++done;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "gain identity (ratio vs trace difference) on 100 instances, worst %.2e", worst);
    report(6, worst < 1e-10, buf, now_s() - t0, 30.0);
}

// ---- criterion 7 ----------------------------------------------------------

void criterion_7() {
    double t0 = now_s();
    // Real-network-like instances: the near-optimality finding is about
    // those. Highly symmetric toys break it for the exact greedy already
    // (the P4 k=2 greedy-gap instance is covered by the oracle tests).
    struct Fixture { const char *name; Graph g; };
    std::vector<Fixture> fixtures;
    fixtures.push_back({"rand16", random_connected_graph(16, 0.2, 72)});
    fixtures.push_back({"rand20", random_connected_graph(20, 0.15, 92)});
    fixtures.push_back({"rand23", random_connected_graph(23, 0.15, 73)});
    fixtures.push_back({"rand28", random_connected_graph(28, 0.12, 74)});
    fixtures.push_back({"karate", karate_graph()});

    bool all_ok = true;
    double worst_ratio = 1.0;
    std::string worst_at = "-";
    for (const auto &[name, g] : fixtures) {
        for (int k = 1; k <= 4 && k < g.num_nodes() - 1; ++k) {
            double optimum = ex::exhaustive_optimum(g, k, 2).cfcc;
            for (uint64_t seed = 1; seed <= 10; ++seed) {
                for (auto algo : {Algorithm::forest, Algorithm::schur}) {
                    SelectionTrace tr = run_maximizer(g, driver_config(algo, k, 0.2, seed));
                    double ratio = prefix_cfcc(g, tr.chosen, k) / optimum;
                    if (ratio < worst_ratio) {
                        worst_ratio = ratio;
                        worst_at = std::string(name) + " k=" + std::to_string(k);
                    }
                    if (ratio < 0.95) all_ok = false;
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "near-optimality (k<=4, eps=0.2, 10 seeds, both drivers): worst CFCC ratio "
                  "%.4f at %s",
                  worst_ratio, worst_at.c_str());
    report(7, all_ok, buf, now_s() - t0, 600.0);
}

// ---- criterion 8 ----------------------------------------------------------

void criterion_8() {
    double t0 = now_s();
    struct Fixture { const char *name; Graph g; };
    std::vector<Fixture> fixtures;
    fixtures.push_back({"karate", karate_graph()});
    fixtures.push_back({"test62", test62_graph()});
    const int k = 10;
    const double eps = 0.15;

    bool all_final_close = true;
    bool schur_dominates = true;
    double worst_gap = 0.0, worst_dom = 1.0;
    for (const auto &[name, g] : fixtures) {
        double exact_cfcc = ex::greedy_exact(g, k).cfcc;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            SelectionTrace forest = run_maximizer(g, driver_config(Algorithm::forest, k, eps, seed));
            SelectionTrace schur = run_maximizer(g, driver_config(Algorithm::schur, k, eps, seed));
            double forest_final = prefix_cfcc(g, forest.chosen, k);
            double schur_final = prefix_cfcc(g, schur.chosen, k);
            worst_gap = std::max({worst_gap, (exact_cfcc - forest_final) / exact_cfcc,
                                  (exact_cfcc - schur_final) / exact_cfcc});
            if (forest_final < 0.98 * exact_cfcc || schur_final < 0.98 * exact_cfcc)
                all_final_close = false;
            for (int i = 1; i <= k; ++i) {
                double fd = prefix_cfcc(g, forest.chosen, i);
                double sd = prefix_cfcc(g, schur.chosen, i);
                worst_dom = std::min(worst_dom, sd / fd);
                if (sd < 0.99 * fd) schur_dominates = false;
            }
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "greedy agreement at k=10, eps=0.15 (10 seeds): worst gap to exact %.4f, "
                  "worst schur/forest per-iteration ratio %.4f",
                  worst_gap, worst_dom);
    report(8, all_final_close && schur_dominates, buf, now_s() - t0, 900.0);
}

// ---- criterion 9 ----------------------------------------------------------

void criterion_9() {
    double t0 = now_s();
    Graph p4 = path_graph(4);
    double greedy_p4 = ex::group_cfcc(p4, NodeSet(ex::greedy_exact(p4, 2).chosen)).cfcc;
    double top_p4 =
        ex::group_cfcc(p4, top_cfcc_baseline(p4, 2, TopCfccMode::exact)).cfcc;

    Graph karate = karate_graph();
    double greedy_k = ex::group_cfcc(karate, NodeSet(ex::greedy_exact(karate, 5).chosen)).cfcc;
    double top_k = ex::group_cfcc(karate, top_cfcc_baseline(karate, 5, TopCfccMode::exact)).cfcc;

    bool ok = greedy_p4 > top_p4 && std::abs(greedy_p4 - 8.0 / 3.0) < 1e-9 &&
              std::abs(top_p4 - 2.0) < 1e-9 && greedy_k >= top_k;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "baseline gap: P4 greedy %.4f > top-cfcc %.4f; karate k=5 greedy %.4f >= "
                  "top-cfcc %.4f",
                  greedy_p4, top_p4, greedy_k, top_k);
    report(9, ok, buf, now_s() - t0, 0.0);
}

// ---- criterion 10 ---------------------------------------------------------

void criterion_10() {
    double t0 = now_s();
    // Timing-trend runs use a bounded sample cap and an explicit |T| so the
    // two drivers face identical work budgets at every size.
    auto config = [](Algorithm algo, uint64_t seed) {
        RunConfig cfg = driver_config(algo, 5, 0.2, seed);
        cfg.r_max = uint64_t{1} << 12;
        cfg.jl_dim_cap = 32;
        cfg.schur_roots = 64;
        return cfg;
    };
    std::vector<node_t> sizes{25000, 50000, 100000};
    std::map<std::pair<Algorithm, node_t>, double> wall;
    for (node_t n : sizes) {
        Graph g = preferential_attachment(n, 2, 10);
        for (auto algo : {Algorithm::forest, Algorithm::schur}) {
            double s0 = now_s();
            SelectionTrace tr = run_maximizer(g, config(algo, 1));
            wall[{algo, n}] = now_s() - s0;
            if ((int)tr.chosen.size() != 5) g_failures++;
        }
    }
    double f25 = wall[{Algorithm::forest, 25000}], f50 = wall[{Algorithm::forest, 50000}],
           f100 = wall[{Algorithm::forest, 100000}];
    double s25 = wall[{Algorithm::schur, 25000}], s50 = wall[{Algorithm::schur, 50000}],
           s100 = wall[{Algorithm::schur, 100000}];
    bool schur_faster_50k = s50 <= f50;
    bool scaling = f50 / f25 <= 2.6 && f100 / f50 <= 2.6 && s50 / s25 <= 2.6 && s100 / s50 <= 2.6;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "efficiency trend on PA graphs: forest %.1f/%.1f/%.1f s, schur %.1f/%.1f/%.1f s "
                  "(25k/50k/100k); schur<=forest at 50k: %s; per-doubling <= 2.6x: %s",
                  f25, f50, f100, s25, s50, s100, schur_faster_50k ? "yes" : "no",
                  scaling ? "yes" : "no");
    report(10, schur_faster_50k && scaling, buf, now_s() - t0, 0.0);
}

// ---- criterion 11 ---------------------------------------------------------

void criterion_11() {
    double t0 = now_s();
    Graph karate = karate_graph();
    const int k = 5;
    double exact_cfcc = ex::greedy_exact(karate, k).cfcc;
    std::vector<double> epses{0.4, 0.3, 0.2, 0.15};
    std::vector<double> runtimes, gaps;
    for (double eps : epses) {
        double spent = 0.0, gap_sum = 0.0;
        int runs = 0;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            for (auto algo : {Algorithm::forest, Algorithm::schur}) {
                double s0 = now_s();
                SelectionTrace tr = run_maximizer(karate, driver_config(algo, k, eps, seed));
                spent += now_s() - s0;
                double cfcc = prefix_cfcc(karate, tr.chosen, k);
                gap_sum += std::max(0.0, (exact_cfcc - cfcc) / exact_cfcc);
                ++runs;
            }
        }
        runtimes.push_back(spent);
        gaps.push_back(gap_sum / runs);
    }
    // runtime must not shrink as eps decreases; gaps below 0.2% count as
    // converged when checking the monotone trend
    bool runtime_monotone = true, gap_monotone = true;
    for (size_t i = 1; i < epses.size(); ++i) {
        if (runtimes[i] < runtimes[i - 1] * 0.999) runtime_monotone = false;
        double prev = gaps[i - 1] <= 0.002 ? 0.0 : gaps[i - 1];
        double cur = gaps[i] <= 0.002 ? 0.0 : gaps[i];
        if (cur > prev) gap_monotone = false;
    }
    bool tight_at_small_eps = gaps[2] < 0.02 && gaps[3] < 0.02;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "eps sweep on karate k=5: runtimes %.2f/%.2f/%.2f/%.2f s, mean gaps "
                  "%.4f/%.4f/%.4f/%.4f for eps 0.4/0.3/0.2/0.15",
                  runtimes[0], runtimes[1], runtimes[2], runtimes[3], gaps[0], gaps[1], gaps[2],
                  gaps[3]);
    report(11, runtime_monotone && gap_monotone && tight_at_small_eps, buf, now_s() - t0, 0.0);
}

} // namespace

int main(int argc, char **argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i)
        if (i + 1 < argc && std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

    using Fn = void (*)();
    Fn criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,
                     criterion_6, criterion_7, criterion_8, criterion_9,  criterion_10,
                     criterion_11};
    for (int i = 0; i < 11; ++i) {
        if (only != 0 && only != i + 1) continue;
        criteria[i]();
    }
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
