#include "spinperc/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "spinperc/exact.hpp"
#include "spinperc/monte_carlo.hpp"
#include "spinperc/specs.hpp"

namespace spinperc {
namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

json info_json_obj(const InfoResult& r) {
    json j;
    j["value"] = r.value;
    j["method"] = method_name(r.method);
    if (r.std_error) j["stderr"] = *r.std_error;
    if (r.samples) j["samples"] = *r.samples;
    return j;
}

json prob_json_obj(const ProbResult& r) {
    json j;
    j["value"] = r.value;
    j["method"] = method_name(r.method);
    if (r.std_error) j["stderr"] = *r.std_error;
    if (r.samples) j["samples"] = *r.samples;
    if (r.method == Method::path_bound) j["vacuous"] = r.vacuous;
    return j;
}

// Number of edges the exact percolation enumeration would actually visit.
int undetermined_edges(const PercolationSpec& spec) {
    int m = 0;
    for (double p : spec.gamma)
        if (p > 0.0 && p < 1.0) ++m;
    return m;
}

ProbResult percolation_leg(const PercolationSpec& spec, int u, std::span<const int> targets,
                           const CheckConfig& cfg) {
    if (undetermined_edges(spec) <= cfg.budget.perc_edges)
        return exact_connection_prob(spec, u, targets, cfg.budget);
    return mc_connection_prob(spec, u, targets, cfg.mc);
}

InfoResult information_leg(const SyncModel& m, int u, std::span<const int> targets,
                           const CheckConfig& cfg) {
    bool pair = targets.size() == 1;
    bool discrete = !has_continuous_channel(m);
    if (discrete) {
        std::uint64_t weighted;
        if (pair) {
            weighted = exact_weighted_terms(m);
            if (weighted <= cfg.budget.exact_terms)
                return exact_pairwise_chi2(m, u, targets[0], cfg.budget);
        } else {
            SyncModel aug = with_virtual_vertex(m, targets);
            weighted = exact_weighted_terms(aug);
            if (weighted <= cfg.budget.exact_terms) return exact_set_chi2(m, u, targets, cfg.budget);
        }
    }
    if (pair) return mc_pairwise_chi2(m, u, targets[0], cfg.mc, cfg.budget);
    return mc_set_chi2(m, u, targets, cfg.mc, cfg.budget);
}

double bound_tolerance(const InfoResult& lhs, const ProbResult& rhs, const CheckConfig& cfg) {
    double se = lhs.std_error.value_or(0.0) + rhs.std_error.value_or(0.0);
    bool both_exact = !lhs.std_error && !rhs.std_error;
    return both_exact ? cfg.tol_exact : 4.0 * se;
}

} // namespace

BoundReport check_bound(const SyncModel& m, int u, std::span<const int> targets,
                        const CheckConfig& cfg) {
    if (targets.empty()) throw std::invalid_argument("check_bound: empty target set");
    for (int t : targets)
        if (t == u) throw std::invalid_argument("check_bound: u must not belong to the target set");

    BoundReport rep;
    rep.lhs = information_leg(m, u, targets, cfg);
    rep.rhs = percolation_leg(percolation_from_model(m), u, targets, cfg);
    rep.slack = rep.rhs.value - rep.lhs.value;
    rep.holds = rep.slack >= -bound_tolerance(rep.lhs, rep.rhs, cfg);
    return rep;
}

SuiteResult random_bound_suite(int n_max, int m_max, int instances, std::uint64_t seed,
                               int set_size, const CheckConfig& cfg) {
    if (n_max < 2) throw std::invalid_argument("suite: n_max must be >= 2");
    if (instances < 0) throw std::invalid_argument("suite: instances must be >= 0");
    if (set_size < 0 || set_size > n_max - 1)
        throw std::invalid_argument("suite: set size must fit in the graph");

    std::mt19937_64 rng(seed);
    SuiteResult result;
    int n_min = std::max(2, set_size + 1);

    for (int inst = 0; inst < instances; ++inst) {
        int n = std::uniform_int_distribution<int>(n_min, n_max)(rng);
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
        std::shuffle(pairs.begin(), pairs.end(), rng);
        int m = std::uniform_int_distribution<int>(
            1, std::min<int>(m_max, static_cast<int>(pairs.size())))(rng);
        std::vector<std::pair<int, int>> edges(pairs.begin(), pairs.begin() + m);
        std::sort(edges.begin(), edges.end());

        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<EdgeChannel> channels;
        bool all_erasure = true;
        for (int e = 0; e < m; ++e) {
            if (unit(rng) < 0.5) {
                channels.push_back(EdgeChannel::bsc(0.02 + 0.96 * unit(rng)));
                all_erasure = false;
            } else {
                channels.push_back(EdgeChannel::erasure(unit(rng)));
            }
        }
        SyncModel model(Graph(n, std::move(edges)), std::move(channels));

        int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
        std::vector<int> targets;
        int want = std::max(1, set_size);
        while (static_cast<int>(targets.size()) < want) {
            int t = std::uniform_int_distribution<int>(0, n - 1)(rng);
            if (t == u) continue;
            if (std::find(targets.begin(), targets.end(), t) != targets.end()) continue;
            targets.push_back(t);
        }
        std::sort(targets.begin(), targets.end());

        BoundReport rep = check_bound(model, u, targets, cfg);
        std::ostringstream desc;
        desc << "i=" << inst << ";n=" << n << ";m=" << m << ";u=" << u << ";t=";
        for (std::size_t i = 0; i < targets.size(); ++i)
            desc << (i ? "|" : "") << targets[i];
        rep.instance = desc.str();

        if (!rep.holds) ++result.violations;
        if (all_erasure && std::abs(rep.slack) > 1e-9) ++result.erasure_defects;
        result.reports.push_back(std::move(rep));
    }
    return result;
}

std::vector<InterpPoint> interpolation_check(const SyncModel& m, int edge_f, int u, int v,
                                             std::span<const double> t_grid, const Budget& budget,
                                             double tol) {
    if (edge_f < 0 || edge_f >= static_cast<int>(m.graph.edges.size()))
        throw std::invalid_argument("interpolation_check: edge index out of range");
    for (const auto& ch : m.channels)
        if (ch.kind != ChannelKind::bsc)
            throw std::invalid_argument("interpolation_check: all channels must be BSC");
    for (double t : t_grid)
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("interpolation_check: grid values must lie in [0,1]");

    auto eval = [&](double t) {
        SyncModel variant = m;
        variant.channels[edge_f] = EdgeChannel::bsc((1.0 - t) / 2.0);
        return exact_pairwise_chi2(variant, u, v, budget).value;
    };
    double g0 = eval(0.0), g1 = eval(1.0);

    std::vector<InterpPoint> out;
    for (double t : t_grid) {
        InterpPoint p;
        p.t = t;
        p.g = t == 0.0 ? g0 : t == 1.0 ? g1 : eval(t);
        p.bound = g0 + (g1 - g0) * t * t;
        p.ok = p.g <= p.bound + tol;
        out.push_back(p);
    }
    return out;
}

std::vector<SweepRow> bot_experiment(int b, int depth_max, double epsilon,
                                     const CheckConfig& cfg) {
    if (b < 1) throw std::invalid_argument("bot: branching must be >= 1");
    if (depth_max < 1) throw std::invalid_argument("bot: depth_max must be >= 1");
    double delta = 1.0 - 2.0 * epsilon;
    double gamma = delta * delta;

    std::vector<SweepRow> rows;
    for (int d = 1; d <= depth_max; ++d) {
        RegularTree tree = make_regular_tree(b, d);
        SyncModel model = uniform_model(tree.graph, EdgeChannel::bsc(epsilon));
        std::vector<int> leaves = tree.leaves();

        // Deeper rows enumerate exponentially larger inner sums; shrink the
        // sample count so every row costs roughly the same.
        CheckConfig depth_cfg = cfg;
        {
            SyncModel aug = with_virtual_vertex(model, leaves);
            int free = static_free_count(aug);
            if (free < 62) {
                std::uint64_t affordable =
                    std::max<std::uint64_t>(16, (std::uint64_t{1} << 33) >> free);
                depth_cfg.mc.samples = std::min(cfg.mc.samples, affordable);
            }
        }

        SweepRow row;
        row.family = "tree:" + std::to_string(b) + ":d=" + std::to_string(d);
        row.param = epsilon;
        row.gamma = gamma;
        row.info = information_leg(model, 0, leaves, depth_cfg);
        row.perc =
            percolation_leg(PercolationSpec(tree.graph, std::vector<double>(
                                                            tree.graph.edges.size(), gamma)),
                            0, leaves, depth_cfg);
        double union_bound = std::min(1.0, std::pow(b * gamma, d));
        row.slack = union_bound - row.info->value;
        double se = row.info->std_error.value_or(0.0);
        row.holds = row.slack >= -(row.info->std_error ? 4.0 * se : cfg.tol_exact);
        row.verdict = b * gamma <= 1.0 ? "sub" : "super";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> grid_ring(int w, int h, int r) {
    int ci = w / 2, cj = h / 2;
    std::vector<int> ring;
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < h; ++j)
            if (std::max(std::abs(i - ci), std::abs(j - cj)) == r)
                ring.push_back(grid_vertex(i, j, h));
    return ring;
}

std::vector<SweepRow> grid_ring_decay(int w, int h, double gamma, std::span<const int> radii,
                                      const McConfig& mc) {
    Graph g = make_grid_box(w, h);
    PercolationSpec spec(g, std::vector<double>(g.edges.size(), gamma));
    int center = grid_vertex(w / 2, h / 2, h);

    std::vector<SweepRow> rows;
    for (int r : radii) {
        std::vector<int> ring = grid_ring(w, h, r);
        if (ring.empty()) throw std::invalid_argument("grid_ring_decay: radius outside the box");
        SweepRow row;
        row.family = "grid:" + std::to_string(w) + "x" + std::to_string(h) + ":r=" +
                     std::to_string(r);
        row.param = gamma;
        row.gamma = gamma;
        row.perc = mc_connection_prob(spec, center, ring, mc);
        row.verdict = 2.0 * gamma <= 1.0 ? "sub" : "super";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> table_sweep(const std::string& graph_spec, ChannelKind kind,
                                  std::span<const double> params, const SweepConfig& cfg) {
    GraphSpec spec = GraphSpec::parse(graph_spec);
    Graph g = spec.build();
    if (g.n < 2) throw std::invalid_argument("table_sweep: graph needs at least two vertices");
    int u = cfg.u >= 0 ? cfg.u : 0;
    int v = cfg.v >= 0 ? cfg.v : g.n - 1;
    double branching = spec.effective_branching();

    std::vector<SweepRow> rows;
    for (double p : params) {
        EdgeChannel ch = kind == ChannelKind::bsc      ? EdgeChannel::bsc(p)
                         : ChannelKind::awgn == kind   ? EdgeChannel::awgn(p)
                                                       : EdgeChannel::erasure(p);
        SyncModel model = uniform_model(g, ch);
        double gamma = edge_chi2_info(ch);

        SweepRow row;
        row.family = graph_spec;
        row.param = p;
        row.gamma = gamma;
        std::vector<int> targets{v};
        try {
            row.info = information_leg(model, u, targets, cfg.check);
        } catch (const BudgetExceeded&) {
            // beyond desk scale: report the percolation side only
        }
        row.perc = percolation_leg(percolation_from_model(model), u, targets, cfg.check);
        if (row.info) {
            row.slack = row.perc->value - row.info->value;
            row.holds = row.slack >= -bound_tolerance(*row.info, *row.perc, cfg.check);
        }
        row.verdict = branching * gamma <= 1.0 ? "sub" : "super";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string info_result_json(const InfoResult& r) { return info_json_obj(r).dump(); }
std::string prob_result_json(const ProbResult& r) { return prob_json_obj(r).dump(); }

std::string bound_report_json(const BoundReport& r) {
    json j;
    j["lhs"] = info_json_obj(r.lhs);
    j["rhs"] = prob_json_obj(r.rhs);
    j["slack"] = r.slack;
    j["holds"] = r.holds;
    j["instance"] = r.instance;
    return j.dump();
}

std::string sweep_csv_header() {
    return "family,param,gamma,info,info_stderr,perc,perc_stderr,slack,holds,verdict";
}

std::string sweep_csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << row.family << ',' << fmt(row.param) << ',' << fmt(row.gamma) << ',';
    if (row.info) {
        os << fmt(row.info->value) << ',';
        os << (row.info->std_error ? fmt(*row.info->std_error) : "") << ',';
    } else {
        os << ",,";
    }
    if (row.perc) {
        os << fmt(row.perc->value) << ',';
        os << (row.perc->std_error ? fmt(*row.perc->std_error) : "") << ',';
    } else {
        os << ",,";
    }
    if (row.info)
        os << fmt(row.slack) << ',' << (row.holds ? "true" : "false");
    else
        os << ',';
    os << ',' << row.verdict;
    return os.str();
}

} // namespace spinperc
