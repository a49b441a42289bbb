#pragma once

#include "nhlat/analysis.hpp"
#include "nhlat/lattice.hpp"
#include "nhlat/spectral.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nhlat {

enum class Action { spectrum, sweep, find_zero, analyze, reproduce };

Action action_from_string(const std::string& s);
std::string to_string(Action a);

struct GridSpec {
    double lo = 0.0;
    double hi = 1.3;
    double step = 0.005;

    std::vector<double> points() const;
};

struct Tolerances {
    double tol_e = 1e-8;
    double tol_re = 1e-8;
    double ep_gap = 1e-4;
    double ep_overlap = 0.99;
    double overlap_floor = 0.5;
};

/// A validated scenario: either a named preset or a custom graph, plus the
/// physical parameters, grid, and tolerance overrides. Produced by
/// parse_config (strict: unknown keys are rejected).
struct ScenarioConfig {
    int version = 1;
    std::optional<PresetVariant> preset;
    std::optional<LatticeGraph> custom_graph;
    PresetParams params;
    std::optional<double> t_prime;
    GridSpec grid;
    Tolerances tol;
    std::optional<Action> analysis;
    std::optional<std::string> figure;     // for reproduce
    std::optional<std::string> output_dir; // default when --out is not given
};

/// Strict structured parse of the JSON config document. Syntax errors report
/// line and column; semantic errors name the offending key.
ScenarioConfig parse_config(const std::string& text);

/// Inverse of the custom-graph config block (round-trips through parse_config).
std::string graph_to_config_json(const LatticeGraph& g);

// --- output files ------------------------------------------------------

void write_spectrum_csv(const std::filesystem::path& path, double t_prime,
                        const std::vector<Mode>& modes);
void write_sweep_csv(const std::filesystem::path& path, const SweepTrajectory& traj);
void write_mode_csv(const std::filesystem::path& path, const LatticeGraph& lattice,
                    const Mode& mode);
Eigen::VectorXcd read_mode_csv(const std::filesystem::path& path);
void write_report_json(const std::filesystem::path& path, const AnalysisReport& report);
AnalysisReport read_report_json(const std::filesystem::path& path);
void write_events_json(const std::filesystem::path& path,
                       const std::vector<SweepEvent>& events);

// --- figure reproduction ------------------------------------------------

struct CheckLine {
    std::string id;
    bool pass;
    std::string detail;
};

struct ReproduceResult {
    std::vector<CheckLine> checks;

    bool all_pass() const;
};

/// Run one bundled reference scenario ("fig1", "fig2a", "fig2c", "fig3",
/// "fig4"), write its outputs under out_dir, and evaluate the built-in
/// checks at their pinned tolerances.
ReproduceResult run_reproduce(const std::string& figure,
                              const std::filesystem::path& out_dir);

/// Exit codes: 0 success, 2 validation error, 3 numerical failure,
/// 4 reproduce-check failure.
int run_scenario(const ScenarioConfig& config, Action action,
                 const std::filesystem::path& out_dir);

} // namespace nhlat
