#include <curveflow/experiment.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>

namespace cf = curveflow;

namespace {

cf::RunConfig load_config(const std::string& path) {
    // Accept either a preset name or a config file path.
    const auto names = cf::preset_names();
    if (std::find(names.begin(), names.end(), path) != names.end())
        return cf::preset(path);
    return cf::parse_run_config(cf::KeyValueFile::parse_file(path));
}

int cmd_run(const std::string& cfg_path) {
    const cf::RunConfig cfg = load_config(cfg_path);
    const cf::RunArtifacts art = cf::run_experiment(cfg);
    std::cout << "run complete: " << art.summary.steps << " steps, W_h="
              << cf::format_double(art.summary.final_energy)
              << ", dA_rel=" << cf::format_double(art.summary.total_area_loss_rel)
              << ", psi_max=" << cf::format_double(art.summary.max_mesh_ratio)
              << "\nartifacts: " << art.dir.string() << '\n';
    return 0;
}

int cmd_converge(const std::string& cfg_path, std::vector<double> dt_list) {
    const cf::RunConfig cfg = load_config(cfg_path);
    if (dt_list.empty()) {
        dt_list = cf::preset_dt_list(cfg_path);
    }
    const cf::ErrorTable table = cf::converge_experiment(cfg, dt_list);
    std::cout << "dt,error,order\n";
    for (const auto& row : table.rows) {
        std::cout << cf::format_double(row.dt) << ',';
        if (std::isfinite(row.error)) std::cout << cf::format_double(row.error);
        std::cout << ',';
        if (std::isfinite(row.order)) std::cout << cf::format_double(row.order);
        std::cout << '\n';
    }
    return 0;
}

int cmd_sweep(const std::string& cfg_path, const std::string& grid_text) {
    const cf::RunConfig cfg = load_config(cfg_path);
    const cf::SweepGrid grid = cf::parse_sweep_grid(grid_text);
    const cf::SweepResult result = cf::sweep_experiment(cfg, grid);
    std::cout << result.points.size() - result.failures << "/"
              << result.points.size() << " grid points succeeded\n";
    if (result.failures > 0) {
        std::cerr << "failed grid points:\n";
        for (const auto& p : result.points)
            if (!p.ok) std::cerr << "  " << p.name << ": " << p.error << '\n';
        return 3;
    }
    return 0;
}

int cmd_plot(const std::string& dir) {
    cf::plot_run_dir(dir);
    std::cout << "plots written to " << dir << '\n';
    return 0;
}

int cmd_presets() {
    for (const auto& name : cf::preset_names()) std::cout << name << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curveflow: energy-stable parametric FEM for curve evolution"};
    app.require_subcommand(1);

    std::string cfg_path, plot_dir, grid_text;
    std::vector<double> dt_list;

    auto* run = app.add_subcommand("run", "execute one simulation");
    run->add_option("config", cfg_path, "config file or preset name")->required();

    auto* conv = app.add_subcommand("converge", "dt halving convergence study");
    conv->add_option("config", cfg_path, "config file or preset name")->required();
    conv->add_option("--dt-list", dt_list, "halving dt values (largest first)");

    auto* sweep = app.add_subcommand("sweep", "parameter grid of runs");
    sweep->add_option("config", cfg_path, "base config file or preset name")
        ->required();
    sweep->add_option("--grid", grid_text, "scheme=..;r=..;beta=..;dt=..")
        ->required();

    auto* plot = app.add_subcommand("plot", "render SVGs for a run directory");
    plot->add_option("dir", plot_dir, "run directory")->required();

    app.add_subcommand("presets", "list experiment presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(cfg_path);
        if (conv->parsed()) return cmd_converge(cfg_path, dt_list);
        if (sweep->parsed()) return cmd_sweep(cfg_path, grid_text);
        if (plot->parsed()) return cmd_plot(plot_dir);
        return cmd_presets();
    } catch (const cf::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
