#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinperc/exact.hpp"
#include "spinperc/monte_carlo.hpp"
#include "spinperc/percolation.hpp"
#include "spinperc/specs.hpp"
#include "spinperc/verify.hpp"

using nlohmann::json;
using namespace spinperc;

namespace {

struct CommonArgs {
    std::string graph;
    std::string channel;
    std::string channel_file;
    std::string gamma;
    int u = 0;
    int v = -1;
    std::string set;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    int max_len = 8;
    std::string format;
    std::string out;
};

Budget budget_from_env() {
    Budget b;
    if (const char* env = std::getenv("SPINPERC_BUDGET")) {
        std::uint64_t cap = std::strtoull(env, nullptr, 10);
        if (cap == 0) throw std::invalid_argument("SPINPERC_BUDGET: expected a positive term count");
        b.exact_terms = cap;
        b.inner_terms = cap;
        int log2cap = 0;
        while ((std::uint64_t{1} << (log2cap + 1)) <= cap && log2cap < 62) ++log2cap;
        b.perc_edges = log2cap;
    }
    return b;
}

Graph load_graph(const std::string& text) {
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        std::string family = text.substr(0, colon);
        if (family == "path" || family == "complete" || family == "grid" || family == "er" ||
            family == "tree")
            return GraphSpec::parse(text).build();
    }
    std::ifstream in(text);
    if (!in)
        throw std::invalid_argument("graph \"" + text +
                                    "\": not a generator spec and not a readable edge-list file");
    return parse_edge_list(in);
}

SyncModel load_model(const CommonArgs& a) {
    Graph g = load_graph(a.graph);
    if (!a.channel.empty() && !a.channel_file.empty())
        throw std::invalid_argument("give either --channel or --channel-file, not both");
    if (!a.channel.empty()) return uniform_model(std::move(g), parse_channel_spec(a.channel));
    if (!a.channel_file.empty()) {
        auto channels = parse_channel_file(a.channel_file, g);
        return SyncModel(std::move(g), std::move(channels));
    }
    throw std::invalid_argument("a channel is required (--channel or --channel-file)");
}

std::vector<int> endpoints_set(const CommonArgs& a) {
    if (!a.set.empty()) return parse_int_list(a.set);
    if (a.v < 0) throw std::invalid_argument("a target is required (--v or --set)");
    return {a.v};
}

McConfig mc_config(const CommonArgs& a) {
    McConfig cfg;
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    cfg.workers = a.workers;
    return cfg;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file \"" + path + "\"");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_channel, bool needs_gamma) {
    cmd->add_option("--graph", a.graph, "generator spec (path:N, complete:N, grid:WxH, er:N:C:SEED, tree:B:D) or edge-list file")
        ->required();
    if (needs_channel) {
        cmd->add_option("--channel", a.channel, "uniform channel spec, e.g. bsc:0.25");
        cmd->add_option("--channel-file", a.channel_file, "per-edge channel file (u v spec lines)");
    }
    if (needs_gamma)
        cmd->add_option("--gamma", a.gamma, "open probability: single value or per-edge list");
    cmd->add_option("--u", a.u, "source vertex");
    cmd->add_option("--v", a.v, "target vertex");
    cmd->add_option("--set", a.set, "target vertex set, comma separated");
    cmd->add_option("--samples", a.samples, "monte carlo sample count");
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--workers", a.workers, "worker threads");
    cmd->add_option("--out", a.out, "output path (default stdout)");
}

PercolationSpec load_percolation(const CommonArgs& a) {
    if (!a.gamma.empty()) {
        Graph g = load_graph(a.graph);
        auto gammas = parse_gamma_arg(a.gamma, g.edges.size());
        return PercolationSpec(std::move(g), std::move(gammas));
    }
    if (!a.channel.empty() || !a.channel_file.empty()) return percolation_from_model(load_model(a));
    throw std::invalid_argument("open probabilities required (--gamma, or --channel to derive them)");
}

json instance_echo(const CommonArgs& a, const char* op) {
    json j;
    j["op"] = op;
    j["graph"] = a.graph;
    if (!a.channel.empty()) j["channel"] = a.channel;
    if (!a.channel_file.empty()) j["channel_file"] = a.channel_file;
    if (!a.gamma.empty()) j["gamma"] = a.gamma;
    j["u"] = a.u;
    if (!a.set.empty())
        j["set"] = a.set;
    else if (a.v >= 0)
        j["v"] = a.v;
    return j;
}

void emit_info(Output& out, const CommonArgs& a, const char* op, const InfoResult& r) {
    json j = instance_echo(a, op);
    j.update(json::parse(info_result_json(r)));
    out.stream() << j.dump() << '\n';
}

void emit_prob(Output& out, const CommonArgs& a, const char* op, const ProbResult& r) {
    json j = instance_echo(a, op);
    j.update(json::parse(prob_result_json(r)));
    out.stream() << j.dump() << '\n';
}

void emit_rows(Output& out, const std::vector<SweepRow>& rows, const std::string& format) {
    if (format == "json") {
        for (const auto& row : rows) {
            json j;
            j["family"] = row.family;
            j["param"] = row.param;
            j["gamma"] = row.gamma;
            if (row.info) j["info"] = json::parse(info_result_json(*row.info));
            if (row.perc) j["perc"] = json::parse(prob_result_json(*row.perc));
            if (row.info) {
                j["slack"] = row.slack;
                j["holds"] = row.holds;
            }
            j["verdict"] = row.verdict;
            out.stream() << j.dump() << '\n';
        }
    } else {
        out.stream() << sweep_csv_header() << '\n';
        for (const auto& row : rows) out.stream() << sweep_csv_row(row) << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chi-squared information and bond percolation on spin synchronization instances"};
    app.require_subcommand(1);

    CommonArgs a;
    int suite_n_max = 7, suite_m_max = 12, suite_instances = 200, suite_set_size = 0;
    int interp_edge = 0;
    std::string t_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    int bot_b = 2, bot_depth = 3;
    double bot_epsilon = 0.25;
    std::string sweep_family, sweep_kind = "bsc", sweep_params, sweep_radii;
    double sweep_gamma = -1.0;

    auto* info_exact = app.add_subcommand("info-exact", "exact chi-squared information");
    add_common(info_exact, a, true, false);
    info_exact->add_flag("--kl", "compute the KL information in bits instead");

    auto* info_mc = app.add_subcommand("info-mc", "monte carlo chi-squared information");
    add_common(info_mc, a, true, false);

    auto* perc_exact = app.add_subcommand("perc-exact", "exact connection probability");
    add_common(perc_exact, a, true, true);

    auto* perc_mc = app.add_subcommand("perc-mc", "monte carlo connection probability");
    add_common(perc_mc, a, true, true);

    auto* path_bound = app.add_subcommand("path-bound", "self-avoiding-path union bound");
    add_common(path_bound, a, true, true);
    path_bound->add_option("--max-len", a.max_len, "maximum path length in edges");

    auto* check = app.add_subcommand("check-bound", "information vs percolation bound");
    add_common(check, a, true, false);

    auto* suite = app.add_subcommand("suite", "randomized bound-falsification suite");
    suite->add_option("--n-max", suite_n_max, "maximum vertex count");
    suite->add_option("--m-max", suite_m_max, "maximum edge count");
    suite->add_option("--instances", suite_instances, "number of random instances");
    suite->add_option("--seed", a.seed, "random seed");
    suite->add_option("--set-size", suite_set_size, "target set size (0 = vertex pairs)");
    suite->add_option("--samples", a.samples, "monte carlo fallback samples");
    suite->add_option("--workers", a.workers, "worker threads");
    suite->add_option("--out", a.out, "output path (default stdout)");

    auto* interp = app.add_subcommand("interp", "single-edge interpolation growth check");
    add_common(interp, a, true, false);
    interp->add_option("--edge", interp_edge, "edge index to sweep");
    interp->add_option("--t-grid", t_grid, "comma-separated grid of t values in [0,1]");

    auto* bot = app.add_subcommand("bot", "broadcast decay on the regular tree");
    bot->add_option("--b", bot_b, "branching factor");
    bot->add_option("--depth-max", bot_depth, "maximum depth");
    bot->add_option("--epsilon", bot_epsilon, "BSC flip probability");
    bot->add_option("--samples", a.samples, "monte carlo samples");
    bot->add_option("--seed", a.seed, "random seed");
    bot->add_option("--workers", a.workers, "worker threads");
    bot->add_option("--format", a.format, "csv (default) or json");
    bot->add_option("--out", a.out, "output path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "channel-parameter regime sweep");
    sweep->add_option("--family", sweep_family, "graph generator spec")->required();
    sweep->add_option("--channel-kind", sweep_kind, "bsc, awgn, or erasure");
    sweep->add_option("--params", sweep_params, "comma-separated channel parameters");
    sweep->add_option("--radii", sweep_radii, "grid family: center-to-ring radii");
    sweep->add_option("--gamma", sweep_gamma, "grid family: uniform open probability");
    sweep->add_option("--u", a.u, "source vertex");
    sweep->add_option("--v", a.v, "target vertex");
    sweep->add_option("--samples", a.samples, "monte carlo samples");
    sweep->add_option("--seed", a.seed, "random seed");
    sweep->add_option("--workers", a.workers, "worker threads");
    sweep->add_option("--format", a.format, "csv (default) or json");
    sweep->add_option("--out", a.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "spinperc: error: " << e.what() << '\n';
        return 2;
    }

    try {
        Budget budget = budget_from_env();
        CheckConfig check_cfg;
        check_cfg.budget = budget;
        check_cfg.mc = mc_config(a);
        Output out(a.out);

        if (*info_exact) {
            SyncModel m = load_model(a);
            auto targets = endpoints_set(a);
            InfoResult r;
            if (info_exact->count("--kl")) {
                if (targets.size() != 1)
                    throw std::invalid_argument("--kl supports vertex pairs only");
                r = exact_pairwise_kl(m, a.u, targets[0], budget);
            } else if (targets.size() == 1) {
                r = exact_pairwise_chi2(m, a.u, targets[0], budget);
            } else {
                r = exact_set_chi2(m, a.u, targets, budget);
            }
            emit_info(out, a, "info-exact", r);
        } else if (*info_mc) {
            SyncModel m = load_model(a);
            auto targets = endpoints_set(a);
            InfoResult r = targets.size() == 1
                               ? mc_pairwise_chi2(m, a.u, targets[0], mc_config(a), budget)
                               : mc_set_chi2(m, a.u, targets, mc_config(a), budget);
            emit_info(out, a, "info-mc", r);
        } else if (*perc_exact) {
            PercolationSpec spec = load_percolation(a);
            auto targets = endpoints_set(a);
            emit_prob(out, a, "perc-exact", exact_connection_prob(spec, a.u, targets, budget));
        } else if (*perc_mc) {
            PercolationSpec spec = load_percolation(a);
            auto targets = endpoints_set(a);
            emit_prob(out, a, "perc-mc", mc_connection_prob(spec, a.u, targets, mc_config(a)));
        } else if (*path_bound) {
            PercolationSpec spec = load_percolation(a);
            if (a.v < 0) throw std::invalid_argument("path-bound needs --v");
            emit_prob(out, a, "path-bound", path_union_bound(spec, a.u, a.v, a.max_len, budget));
        } else if (*check) {
            SyncModel m = load_model(a);
            auto targets = endpoints_set(a);
            BoundReport rep = check_bound(m, a.u, targets, check_cfg);
            rep.instance = instance_echo(a, "check-bound").dump();
            out.stream() << bound_report_json(rep) << '\n';
        } else if (*suite) {
            SuiteResult res = random_bound_suite(suite_n_max, suite_m_max, suite_instances,
                                                 a.seed, suite_set_size, check_cfg);
            for (const auto& rep : res.reports) out.stream() << bound_report_json(rep) << '\n';
            json summary;
            summary["instances"] = res.reports.size();
            summary["violations"] = res.violations;
            summary["erasure_defects"] = res.erasure_defects;
            out.stream() << summary.dump() << '\n';
            if (res.violations > 0 || res.erasure_defects > 0) return 4;
        } else if (*interp) {
            SyncModel m = load_model(a);
            if (a.v < 0) throw std::invalid_argument("interp needs --v");
            auto grid = parse_double_list(t_grid);
            auto points = interpolation_check(m, interp_edge, a.u, a.v, grid, budget);
            for (const auto& p : points) {
                json j;
                j["t"] = p.t;
                j["g"] = p.g;
                j["bound"] = p.bound;
                j["ok"] = p.ok;
                out.stream() << j.dump() << '\n';
            }
        } else if (*bot) {
            auto rows = bot_experiment(bot_b, bot_depth, bot_epsilon, check_cfg);
            emit_rows(out, rows, a.format.empty() ? "csv" : a.format);
        } else if (*sweep) {
            std::vector<SweepRow> rows;
            if (!sweep_radii.empty()) {
                GraphSpec gs = GraphSpec::parse(sweep_family);
                if (gs.family != GraphSpec::Family::grid)
                    throw std::invalid_argument("--radii applies to the grid family only");
                if (sweep_gamma < 0.0)
                    throw std::invalid_argument("--radii needs --gamma");
                auto radii = parse_int_list(sweep_radii);
                rows = grid_ring_decay(static_cast<int>(gs.a), static_cast<int>(gs.b), sweep_gamma,
                                       radii, mc_config(a));
            } else {
                if (sweep_params.empty()) throw std::invalid_argument("sweep needs --params");
                ChannelKind kind = sweep_kind == "bsc"       ? ChannelKind::bsc
                                   : sweep_kind == "awgn"    ? ChannelKind::awgn
                                   : sweep_kind == "erasure" ? ChannelKind::erasure
                                                             : throw std::invalid_argument(
                                                                   "unknown channel kind \"" +
                                                                   sweep_kind + "\"");
                auto params = parse_double_list(sweep_params);
                SweepConfig cfg;
                cfg.check = check_cfg;
                cfg.u = a.u;
                cfg.v = a.v;
                rows = table_sweep(sweep_family, kind, params, cfg);
            }
            emit_rows(out, rows, a.format.empty() ? "csv" : a.format);
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "spinperc: budget: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "spinperc: error: " << e.what() << '\n';
        return 2;
    } catch (const ImpossibleObservation& e) {
        std::cerr << "spinperc: error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "spinperc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
