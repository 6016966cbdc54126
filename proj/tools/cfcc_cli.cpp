// Command-line front end: greedy maximizers, heuristic baselines, exact
// oracles, solution evaluation and sampler validation.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cfcc/baselines.hpp"
#include "cfcc/chisq.hpp"
#include "cfcc/exact.hpp"
#include "cfcc/forest.hpp"
#include "cfcc/graph.hpp"
#include "cfcc/greedy.hpp"
#include "cfcc/result.hpp"

using namespace cfcc;
namespace ex = cfcc::exact;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

Graph load_graph(const std::string &path) {
    Graph raw = load_edge_list(path);
    return largest_connected_component(raw);
}

std::string graph_name(const std::string &path) {
    return std::filesystem::path(path).stem().string();
}

std::vector<int64_t> parse_id_list(const std::string &text) {
    std::vector<int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoll(item));
    }
    if (out.empty()) throw data_error("empty id list");
    return out;
}

NodeSet to_dense_set(const Graph &g, const std::vector<int64_t> &labels) {
    std::vector<node_t> ids;
    for (int64_t label : labels) {
        auto it = g.id_map().find(label);
        if (it == g.id_map().end())
            throw data_error("node label " + std::to_string(label) +
                             " not present in the largest component");
        ids.push_back(it->second);
    }
    return NodeSet(ids);
}

double evaluate_set(const Graph &g, const NodeSet &s, const std::string &method, int probes,
                    double tol, uint64_t seed, int threads) {
    if (method == "dense") return ex::group_cfcc(g, s).cfcc;
    if (method == "cg") return ex::cfcc_iterative(g, s, probes, tol, seed, threads).cfcc;
    throw data_error("unknown evaluation method: " + method);
}

void emit(const ResultRecord &rec, const std::string &out_path, const std::string &format,
          bool with_header) {
    std::string text =
        format == "json" ? rec.to_json() + "\n"
                         : (with_header ? ResultRecord::csv_header() + "\n" : "") + rec.to_csv();
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw data_error("cannot open output file " + out_path);
        out << text;
    }
}

struct MaximizeArgs {
    std::string graph_path, algo = "schur", out_path, format = "csv", schur_roots = "auto";
    std::string eval = "auto";
    int k = 1;
    double eps = 0.2;
    uint64_t seed = 1;
    int threads = 0;
    uint64_t rmax = uint64_t{1} << 24;
    int jl_cap = 64;
    bool eval_each = false;
};

ResultRecord run_maximize(const MaximizeArgs &args) {
    Graph g = load_graph(args.graph_path);
    double t0 = now_seconds();

    ResultRecord rec;
    rec.algorithm = args.algo;
    rec.graph_name = graph_name(args.graph_path);
    rec.n = g.num_nodes();
    rec.m = g.num_edges();
    rec.k = args.k;
    rec.eps = args.eps;
    rec.seed = args.seed;

    std::vector<node_t> chosen;
    if (args.algo == "forest" || args.algo == "schur") {
        RunConfig cfg;
        cfg.k = args.k;
        cfg.eps = args.eps;
        cfg.seed = args.seed;
        cfg.workers = args.threads;
        cfg.r_max = args.rmax;
        cfg.jl_dim_cap = args.jl_cap;
        cfg.algorithm = args.algo == "schur" ? Algorithm::schur : Algorithm::forest;
        if (args.schur_roots != "auto") cfg.schur_roots = std::stoi(args.schur_roots);
        SelectionTrace trace = run_maximizer(g, cfg);
        chosen = trace.chosen;
        for (const auto &it : trace.iterations) rec.samples_per_iter.push_back(it.samples);
    } else if (args.algo == "exact") {
        ex::ExactTrace trace = ex::greedy_exact(g, args.k);
        chosen = trace.chosen;
        rec.samples_per_iter.assign(args.k, 0);
    } else if (args.algo == "degree" || args.algo == "topcfcc") {
        NodeSet set;
        if (args.algo == "degree") {
            set = degree_baseline(g, args.k);
        } else {
            SamplingControls ctl;
            ctl.eps = args.eps;
            ctl.seed = args.seed;
            ctl.workers = args.threads;
            ctl.r_max = args.rmax;
            bool dense_ok = g.num_nodes() <= ex::kDenseLimit;
            set = top_cfcc_baseline(g, args.k,
                                    dense_ok ? TopCfccMode::exact : TopCfccMode::estimated, ctl);
        }
        chosen.assign(set.begin(), set.end());
        rec.samples_per_iter.assign(args.k, 0);
    } else {
        throw data_error("unknown algorithm: " + args.algo);
    }

    std::string method = args.eval;
    if (method == "auto") method = g.num_nodes() <= ex::kDenseLimit ? "dense" : "cg";
    rec.evaluation = method;
    for (size_t i = 1; i <= chosen.size(); ++i) {
        double value = std::nan("");
        if (method != "none" && (args.eval_each || i == chosen.size())) {
            NodeSet prefix(std::vector<node_t>(chosen.begin(), chosen.begin() + i));
            value = evaluate_set(g, prefix, method, 64, 1e-6, args.seed, args.threads);
        }
        rec.cfcc_per_iter.push_back(value);
    }
    rec.cfcc = rec.cfcc_per_iter.back();
    for (node_t u : chosen) rec.chosen.push_back(g.original_label(u));
    rec.seconds = now_seconds() - t0;
    return rec;
}

int run_sampler_check(const std::string &graph_path, const std::string &roots_arg,
                      int64_t samples, uint64_t seed) {
    Graph g = load_graph(graph_path);
    NodeSet roots = to_dense_set(g, parse_id_list(roots_arg));
    double cells = ex::forest_count(g, roots);
    if (cells > 2e6) throw data_error("sampler-check: too many forests to tally, use a tinier graph");

    std::map<std::vector<node_t>, int64_t> hist;
    ForestSampler sampler(g);
    for (int64_t i = 0; i < samples; ++i)
        ++hist[sampler.sample(roots, RandomStream(seed, (uint64_t)i)).parent];

    std::vector<int64_t> occupied;
    occupied.reserve(hist.size());
    for (const auto &[f, c] : hist) occupied.push_back(c);
    double rounded_cells = std::round(cells);
    double p = chi_square_uniform_sparse_p(occupied, rounded_cells, samples);

    std::cout << "forests_expected=" << (int64_t)rounded_cells
              << " forests_observed=" << hist.size() << " samples=" << samples << " p_value=" << p
              << '\n';
    if ((double)hist.size() > rounded_cells)
        throw numerical_error("sampler produced a forest outside the enumerated support");
    if (p <= 0.001) {
        std::cout << "FAIL: sampler distribution rejected at p <= 0.001\n";
        return kExitNumerical;
    }
    std::cout << "OK: uniform forest distribution not rejected\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Current-flow closeness group maximization toolkit"};
    app.require_subcommand(1);

    MaximizeArgs margs;
    auto *maximize = app.add_subcommand("maximize", "Select a k-node group maximizing group CFCC");
    maximize->add_option("--graph", margs.graph_path, "edge-list file")->required();
    maximize->add_option("--algo", margs.algo, "forest|schur|exact|degree|topcfcc");
    maximize->add_option("--k", margs.k, "group size")->required();
    maximize->add_option("--eps", margs.eps, "error parameter in (0,1)");
    maximize->add_option("--seed", margs.seed, "random seed");
    maximize->add_option("--threads", margs.threads, "worker threads (0 = all cores)");
    maximize->add_option("--schur-roots", margs.schur_roots, "auto or explicit |T|");
    maximize->add_option("--rmax", margs.rmax, "cap on the per-phase sample budget");
    maximize->add_option("--jl-cap", margs.jl_cap, "cap on the sketch dimension");
    maximize->add_option("--out", margs.out_path, "output file (default stdout)");
    maximize->add_option("--format", margs.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    maximize->add_option("--eval", margs.eval, "auto|dense|cg|none");
    maximize->add_flag("--eval-each", margs.eval_each, "evaluate CFCC after every iteration");

    std::string eval_graph, eval_set, eval_method = "dense";
    int eval_probes = 128;
    double eval_tol = 1e-8;
    uint64_t eval_seed = 1;
    int eval_threads = 0;
    auto *evaluate = app.add_subcommand("evaluate", "Compute the CFCC of a given node set");
    evaluate->add_option("--graph", eval_graph)->required();
    evaluate->add_option("--set", eval_set, "comma-separated original labels")->required();
    evaluate->add_option("--method", eval_method, "dense|cg");
    evaluate->add_option("--probes", eval_probes, "Hutchinson probes for cg");
    evaluate->add_option("--tol", eval_tol, "CG residual tolerance");
    evaluate->add_option("--seed", eval_seed);
    evaluate->add_option("--threads", eval_threads);

    std::string opt_graph;
    int opt_k = 1;
    auto *optimum = app.add_subcommand("optimum", "Exhaustive optimum over all k-subsets");
    optimum->add_option("--graph", opt_graph)->required();
    optimum->add_option("--k", opt_k)->required();

    std::string chk_graph, chk_roots = "0";
    int64_t chk_samples = 100000;
    uint64_t chk_seed = 1;
    auto *checker = app.add_subcommand("sampler-check",
                                       "Chi-square test of the forest sampler distribution");
    checker->add_option("--graph", chk_graph)->required();
    checker->add_option("--roots", chk_roots, "comma-separated original labels");
    checker->add_option("--samples", chk_samples);
    checker->add_option("--seed", chk_seed);

    std::string bench_graph, bench_eps = "0.3,0.2,0.15", bench_algos = "forest,schur",
                bench_out;
    int bench_k = 20;
    uint64_t bench_seed = 1;
    int bench_threads = 0;
    auto *bench = app.add_subcommand("bench", "Sweep eps and emit a plot-ready CSV");
    bench->add_option("--graph", bench_graph)->required();
    bench->add_option("--eps", bench_eps, "comma-separated eps values");
    bench->add_option("--algos", bench_algos, "comma-separated algorithms");
    bench->add_option("--k", bench_k);
    bench->add_option("--seed", bench_seed);
    bench->add_option("--threads", bench_threads);
    bench->add_option("--out", bench_out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (maximize->parsed()) {
            ResultRecord rec = run_maximize(margs);
            emit(rec, margs.out_path, margs.format, true);
            return 0;
        }
        if (evaluate->parsed()) {
            Graph g = load_graph(eval_graph);
            NodeSet s = to_dense_set(g, parse_id_list(eval_set));
            double value =
                evaluate_set(g, s, eval_method, eval_probes, eval_tol, eval_seed, eval_threads);
            std::cout << "cfcc=" << std::setprecision(12) << value << '\n';
            return 0;
        }
        if (optimum->parsed()) {
            Graph g = load_graph(opt_graph);
            auto best = ex::exhaustive_optimum(g, opt_k, 2);
            std::cout << "cfcc=" << std::setprecision(12) << best.cfcc << " set=";
            for (size_t i = 0; i < best.best.size(); ++i)
                std::cout << (i ? "," : "") << g.original_label(best.best[i]);
            std::cout << '\n';
            return 0;
        }
        if (checker->parsed()) return run_sampler_check(chk_graph, chk_roots, chk_samples, chk_seed);
        if (bench->parsed()) {
            std::ostringstream csv;
            csv << ResultRecord::csv_header() << '\n';
            std::stringstream algos(bench_algos);
            std::string algo;
            while (std::getline(algos, algo, ',')) {
                std::stringstream epses(bench_eps);
                std::string eps;
                while (std::getline(epses, eps, ',')) {
                    MaximizeArgs run;
                    run.graph_path = bench_graph;
                    run.algo = algo;
                    run.k = bench_k;
                    run.eps = std::stod(eps);
                    run.seed = bench_seed;
                    run.threads = bench_threads;
                    ResultRecord rec = run_maximize(run);
                    // one summary row per (algo, eps)
                    std::istringstream rows(rec.to_csv());
                    std::string row, last;
                    while (std::getline(rows, row))
                        if (!row.empty()) last = row;
                    csv << last << '\n';
                }
            }
            if (bench_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(bench_out);
                if (!out) throw data_error("cannot open output file " + bench_out);
                out << csv.str();
            }
            return 0;
        }
    } catch (const parse_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const data_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const numerical_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
