#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinperc/model.hpp"
#include "spinperc/percolation.hpp"
#include "spinperc/types.hpp"

namespace spinperc {

// One information-percolation comparison. slack = rhs - lhs; with exact
// values on both sides the bound holds when slack >= -tol_exact, and with
// Monte Carlo legs when slack >= -4 * (combined standard error).
struct BoundReport {
    InfoResult lhs;
    ProbResult rhs;
    double slack = 0.0;
    bool holds = true;
    std::string instance;
};

// One row of a regime sweep. `family` carries the instance descriptor
// (e.g. "tree:2:d=3"), `param` the channel parameter, `gamma` the coupled
// open probability. `info` is absent when both the exact and the Monte
// Carlo information budgets are exceeded. `verdict` is "sub" or "super"
// depending on the family's percolation threshold.
struct SweepRow {
    std::string family;
    double param = 0.0;
    double gamma = 0.0;
    std::optional<InfoResult> info;
    std::optional<ProbResult> perc;
    double slack = 0.0;
    bool holds = true;
    std::string verdict;
};

struct CheckConfig {
    Budget budget;
    McConfig mc;
    double tol_exact = 1e-10;
};

// Compute both sides of the information-percolation bound: the information
// leg exactly when the model is discrete and within budget, otherwise by
// Monte Carlo; the percolation leg with gamma_e = edge_chi2_info(channel_e),
// exactly when the edge count allows, otherwise by Monte Carlo.
BoundReport check_bound(const SyncModel& m, int u, std::span<const int> targets,
                        const CheckConfig& cfg = {});

struct SuiteResult {
    std::vector<BoundReport> reports;
    int violations = 0;
    // erasure-only instances must have slack 0 exactly; any |slack| > 1e-9
    // is flagged as a defect
    int erasure_defects = 0;
};

// Randomized falsification harness: random graphs with mixed BSC/erasure
// edges and random endpoints. set_size 0 checks vertex pairs, otherwise
// the set bound with |S| = set_size.
SuiteResult random_bound_suite(int n_max, int m_max, int instances, std::uint64_t seed,
                               int set_size = 0, const CheckConfig& cfg = {});

// Growth of the exact information when one edge's correlation is swept:
// replace edge f by a BSC with 1-2*epsilon = t and check
// g(t) <= g(0) + (g(1) - g(0)) * t^2 at each grid point.
struct InterpPoint {
    double t = 0.0;
    double g = 0.0;
    double bound = 0.0;
    bool ok = true;
};

std::vector<InterpPoint> interpolation_check(const SyncModel& m, int edge_f, int u, int v,
                                             std::span<const double> t_grid,
                                             const Budget& budget = {}, double tol = 1e-10);

// Broadcast decay on the regular tree: information between the root and the
// depth-d vertices against the percolation union bound min(1, (b*gamma)^d).
std::vector<SweepRow> bot_experiment(int b, int depth_max, double epsilon,
                                     const CheckConfig& cfg = {});

// Channel-parameter sweep over one graph family. graph_spec uses the CLI
// generator grammar ("path:8", "tree:2:3", "grid:41x41", "er:400:2:1",
// "complete:12"). Endpoints default to (0, n-1).
struct SweepConfig {
    CheckConfig check;
    int u = -1;
    int v = -1;
};

std::vector<SweepRow> table_sweep(const std::string& graph_spec, ChannelKind kind,
                                  std::span<const double> params, const SweepConfig& cfg = {});

// Center-to-ring connection probabilities on a (2r_max+1)-sized grid box at
// uniform open probability gamma; one row per radius.
std::vector<SweepRow> grid_ring_decay(int w, int h, double gamma, std::span<const int> radii,
                                      const McConfig& mc);

// Vertices at Chebyshev distance r from the center of the w x h box.
std::vector<int> grid_ring(int w, int h, int r);

// Serialization: one JSON object per BoundReport; CSV rows for sweeps with
// the fixed column order family, param, gamma, info, info_stderr, perc,
// perc_stderr, slack, holds, then the regime verdict.
std::string bound_report_json(const BoundReport& r);
std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);
std::string info_result_json(const InfoResult& r);
std::string prob_result_json(const ProbResult& r);

} // namespace spinperc
