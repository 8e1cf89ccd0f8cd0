#pragma once

#include <curveflow/config.hpp>
#include <curveflow/metrics.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace curveflow {

/// Output root: CURVEFLOW_OUT env var when set, else the current directory.
std::filesystem::path output_root();

/// Scalar results mirrored into summary.json.
struct RunSummary {
    std::string scheme;
    std::string flow;
    int n = 0;
    double dt = 0.0;
    double t_final = 0.0;
    int r = 0;
    int steps = 0;
    double final_energy = 0.0;
    double final_modified_energy = 0.0;
    double max_energy_gap = 0.0;
    double total_area_loss_rel = 0.0;
    double total_area_loss_abs = 0.0;
    double max_mesh_ratio = 0.0;
    double final_mesh_ratio = 0.0;
    double final_area = 0.0;
    double contact_left = 0.0;   // final contact angle, SSD only
    double contact_right = 0.0;  // final contact angle, SSD only
};

struct RunArtifacts {
    std::filesystem::path dir;
    std::vector<StepDiagnostics> diagnostics;
    CurveState final_curve;
    RunSummary summary;
};

/// Execute one simulation and write diagnostics.csv, curve_<m>.csv
/// snapshots, final_curve.csv, series_*.csv, summary.json and timing.txt
/// under output_root()/cfg.output_dir.
RunArtifacts run_experiment(const RunConfig& cfg);

/// Run the dt halving study and write convergence.csv plus a log-log SVG.
ErrorTable converge_experiment(const RunConfig& cfg,
                               const std::vector<double>& dt_list);

struct SweepGrid {
    std::vector<std::string> schemes;  // empty axis = keep base value
    std::vector<int> rs;
    std::vector<double> betas;
    std::vector<double> dts;

    bool empty() const {
        return schemes.empty() && rs.empty() && betas.empty() && dts.empty();
    }
};

/// Parse "scheme=a,b;r=2,3;beta=0,0.05;dt=0.01,0.005".
SweepGrid parse_sweep_grid(const std::string& text);

struct SweepResult {
    struct Point {
        std::string name;
        bool ok = false;
        std::string error;
        RunSummary summary;
    };
    std::vector<Point> points;
    int failures = 0;
};

/// Fan the grid product out over a worker pool; one run directory per grid
/// point plus aggregate.csv and, on partial failure, failures.txt.
SweepResult sweep_experiment(const RunConfig& base, const SweepGrid& grid);

/// Render evolution.svg and series SVGs from a finished run directory.
void plot_run_dir(const std::filesystem::path& dir);

void write_summary_json(const std::filesystem::path& path, const RunSummary& s);

} // namespace curveflow
