#include <curveflow/experiment.hpp>

#include <curveflow/svg.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace curveflow {

std::filesystem::path output_root() {
    if (const char* env = std::getenv("CURVEFLOW_OUT"); env && *env)
        return fs::path(env);
    return fs::current_path();
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    return os;
}

std::string flow_name(FlowKind f) {
    return f == FlowKind::ClosedSdf ? "sdf" : "ssd";
}

void write_diagnostics_csv(const fs::path& path,
                           const std::vector<StepDiagnostics>& diags) {
    auto os = open_out(path);
    os << "m,t,R,W_h,dW,A_h,dA_rel,psi,xi,zeta,D,x_l,x_r,fp_iters\n";
    for (const auto& d : diags) {
        os << d.step << ',' << format_double(d.time) << ','
           << format_double(d.aux_r) << ',' << format_double(d.energy) << ','
           << format_double(d.energy_gap) << ',' << format_double(d.area) << ','
           << format_double(d.area_loss_rel) << ','
           << format_double(d.mesh_ratio) << ',' << format_double(d.xi) << ','
           << format_double(d.zeta) << ',' << format_double(d.dissipation)
           << ',' << format_double(d.contact_left) << ','
           << format_double(d.contact_right) << ',' << d.fixed_point_iterations
           << '\n';
    }
}

void write_series_csv(const fs::path& path, const std::string& name,
                      const std::vector<double>& t,
                      const std::vector<double>& v) {
    auto os = open_out(path);
    os << "t," << name << '\n';
    for (size_t i = 0; i < t.size(); ++i)
        os << format_double(t[i]) << ',' << format_double(v[i]) << '\n';
}

} // namespace

void write_summary_json(const std::filesystem::path& path, const RunSummary& s) {
    auto os = open_out(path);
    auto num = [&](const char* key, double v, bool last = false) {
        os << "  \"" << key << "\": " << format_double(v) << (last ? "\n" : ",\n");
    };
    os << "{\n";
    os << "  \"scheme\": \"" << s.scheme << "\",\n";
    os << "  \"flow\": \"" << s.flow << "\",\n";
    os << "  \"n\": " << s.n << ",\n";
    num("dt", s.dt);
    num("t_final", s.t_final);
    os << "  \"r\": " << s.r << ",\n";
    os << "  \"steps\": " << s.steps << ",\n";
    num("final_energy", s.final_energy);
    num("final_modified_energy", s.final_modified_energy);
    num("max_energy_gap", s.max_energy_gap);
    num("total_area_loss_rel", s.total_area_loss_rel);
    num("total_area_loss_abs", s.total_area_loss_abs);
    num("max_mesh_ratio", s.max_mesh_ratio);
    num("final_mesh_ratio", s.final_mesh_ratio);
    num("final_area", s.final_area);
    num("contact_left", s.contact_left);
    num("contact_right", s.contact_right, true);
    os << "}\n";
}

RunArtifacts run_experiment(const RunConfig& cfg) {
    cfg.validate();
    const fs::path dir = output_root() / cfg.output_dir;
    fs::create_directories(dir);

    const auto wall_start = std::chrono::steady_clock::now();

    SavStepper stepper(cfg.make_initial_curve(), cfg.make_energy(),
                       cfg.stepper_options());
    const int steps = static_cast<int>(std::lround(cfg.t_final / cfg.dt));
    const int stride = std::max(1, steps / std::max(1, cfg.snapshot_count));

    write_curve_csv((dir / "curve_0.csv").string(), stepper.curve(), 0.0);

    SavStepper::Observer snapshotter =
        [&](const StepDiagnostics& d, const CurveState& c) {
            if (d.step % stride == 0 || d.step == steps)
                write_curve_csv((dir / ("curve_" + std::to_string(d.step) + ".csv"))
                                    .string(),
                                c, d.time);
        };
    std::vector<StepDiagnostics> diags = stepper.run(cfg.t_final, {snapshotter});

    write_curve_csv((dir / "final_curve.csv").string(), stepper.curve(),
                    stepper.time());
    write_diagnostics_csv(dir / "diagnostics.csv", diags);

    std::vector<double> t, energy, area, psi;
    for (const auto& d : diags) {
        t.push_back(d.time);
        energy.push_back(d.energy);
        area.push_back(d.area);
        psi.push_back(d.mesh_ratio);
    }
    write_series_csv(dir / "series_energy.csv", "W_h", t, energy);
    write_series_csv(dir / "series_area.csv", "A_h", t, area);
    write_series_csv(dir / "series_mesh_ratio.csv", "psi", t, psi);

    RunSummary s;
    s.scheme = scheme_name(cfg.scheme);
    s.flow = flow_name(cfg.flow);
    s.n = cfg.n;
    s.dt = cfg.dt;
    s.t_final = cfg.t_final;
    s.r = cfg.r;
    s.steps = steps;
    const StepDiagnostics& last = diags.back();
    s.final_energy = last.energy;
    s.final_modified_energy = last.aux_r;
    s.total_area_loss_rel = last.area_loss_rel;
    s.total_area_loss_abs = std::abs(last.area - stepper.initial_area());
    s.final_mesh_ratio = last.mesh_ratio;
    s.final_area = last.area;
    for (const auto& d : diags) {
        s.max_energy_gap = std::max(s.max_energy_gap, d.energy_gap);
        s.max_mesh_ratio = std::max(s.max_mesh_ratio, d.mesh_ratio);
    }
    if (cfg.flow == FlowKind::Ssd)
        std::tie(s.contact_left, s.contact_right) = contact_angles(stepper.curve());
    write_summary_json(dir / "summary.json", s);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      wall_start)
            .count();
    open_out(dir / "timing.txt") << "wall_seconds=" << format_double(wall) << '\n';

    return RunArtifacts{dir, std::move(diags), stepper.curve(), std::move(s)};
}

ErrorTable converge_experiment(const RunConfig& cfg,
                               const std::vector<double>& dt_list) {
    if (dt_list.size() < 3)
        throw ValidationError("converge needs a halving dt list of length >= 3");
    cfg.validate();
    const fs::path dir = output_root() / cfg.output_dir;
    fs::create_directories(dir);

    auto runner = [&](double dt) {
        RunConfig c = cfg;
        c.dt = dt;
        SavStepper stepper(c.make_initial_curve(), c.make_energy(),
                           c.stepper_options());
        stepper.run(c.t_final);
        return stepper.curve();
    };
    ErrorTable table = convergence_table(runner, dt_list, cfg.t_final,
                                         scheme_name(cfg.scheme));

    auto os = open_out(dir / "convergence.csv");
    os << "dt,error,order\n";
    for (const auto& row : table.rows) {
        os << format_double(row.dt) << ',';
        os << (std::isfinite(row.error) ? format_double(row.error) : "") << ',';
        os << (std::isfinite(row.order) ? format_double(row.order) : "") << '\n';
    }

    svg::Series err;
    err.label = table.scheme_label;
    err.color = "#c02020";
    for (const auto& row : table.rows)
        if (std::isfinite(row.error)) {
            err.x.push_back(row.dt);
            err.y.push_back(row.error);
        }
    svg::PlotOptions opt;
    opt.log_x = opt.log_y = true;
    opt.title = "manifold distance vs dt, T=" + format_double(cfg.t_final);
    svg::write_plot((dir / "convergence.svg").string(), {err}, opt);
    return table;
}

SweepGrid parse_sweep_grid(const std::string& text) {
    SweepGrid grid;
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ValidationError("grid axis '" + part + "' lacks '='");
        const std::string key = part.substr(0, eq);
        std::istringstream vs(part.substr(eq + 1));
        std::string item;
        while (std::getline(vs, item, ',')) {
            if (key == "scheme") grid.schemes.push_back(item);
            else if (key == "r") grid.rs.push_back(std::stoi(item));
            else if (key == "beta") grid.betas.push_back(std::stod(item));
            else if (key == "dt") grid.dts.push_back(std::stod(item));
            else throw ValidationError("unknown grid axis '" + key + "'");
        }
    }
    return grid;
}

SweepResult sweep_experiment(const RunConfig& base, const SweepGrid& grid) {
    if (grid.empty()) throw ValidationError("sweep grid is empty");
    base.validate();

    std::vector<std::string> schemes =
        grid.schemes.empty() ? std::vector<std::string>{scheme_name(base.scheme)}
                             : grid.schemes;
    std::vector<int> rs = grid.rs.empty() ? std::vector<int>{base.r} : grid.rs;
    std::vector<double> betas =
        grid.betas.empty() ? std::vector<double>{base.gamma_beta} : grid.betas;
    std::vector<double> dts =
        grid.dts.empty() ? std::vector<double>{base.dt} : grid.dts;

    struct PointCfg {
        std::string name;
        RunConfig cfg;
    };
    std::vector<PointCfg> points;
    for (const auto& scheme : schemes)
        for (int r : rs)
            for (double beta : betas)
                for (double dt : dts) {
                    RunConfig c = base;
                    if (scheme == "bdf1_sav") c.scheme = Scheme::Bdf1Sav;
                    else if (scheme == "bdf1_csav") c.scheme = Scheme::Bdf1Csav;
                    else if (scheme == "bdf2_sav") c.scheme = Scheme::Bdf2Sav;
                    else throw ValidationError("unknown scheme '" + scheme + "'");
                    c.r = r;
                    c.gamma_beta = beta;
                    if (beta != 0.0 && c.gamma_kind == "isotropic")
                        c.gamma_kind = "fourfold";
                    if (beta == 0.0) c.gamma_kind = "isotropic";
                    c.dt = dt;
                    std::ostringstream name;
                    name << scheme << "_r" << r << "_beta" << format_double(beta)
                         << "_dt" << format_double(dt);
                    c.output_dir =
                        (fs::path(base.output_dir) / name.str()).string();
                    c.validate();
                    points.push_back({name.str(), std::move(c)});
                }

    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        points.size()));
    SweepResult result;
    result.points.resize(points.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            SweepResult::Point& p = result.points[i];
            p.name = points[i].name;
            try {
                p.summary = run_experiment(points[i].cfg).summary;
                p.ok = true;
            } catch (const std::exception& e) {
                p.ok = false;
                p.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    const fs::path dir = output_root() / base.output_dir;
    fs::create_directories(dir);
    auto os = open_out(dir / "aggregate.csv");
    os << "name,status,scheme,r,dt,final_energy,max_energy_gap,"
          "total_area_loss_rel,max_mesh_ratio\n";
    for (const auto& p : result.points) {
        if (!p.ok) {
            ++result.failures;
            os << p.name << ",failed,,,,,,,\n";
            continue;
        }
        const RunSummary& s = p.summary;
        os << p.name << ",ok," << s.scheme << ',' << s.r << ','
           << format_double(s.dt) << ',' << format_double(s.final_energy) << ','
           << format_double(s.max_energy_gap) << ','
           << format_double(s.total_area_loss_rel) << ','
           << format_double(s.max_mesh_ratio) << '\n';
    }
    if (result.failures > 0) {
        auto fo = open_out(dir / "failures.txt");
        for (const auto& p : result.points)
            if (!p.ok) fo << p.name << ": " << p.error << '\n';
    }
    return result;
}

namespace {

std::vector<std::pair<int, fs::path>> snapshot_files(const fs::path& dir) {
    std::vector<std::pair<int, fs::path>> files;
    if (fs::is_directory(dir))
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("curve_", 0) == 0 && name.size() > 10 &&
                name.substr(name.size() - 4) == ".csv")
                files.emplace_back(std::stoi(name.substr(6)), entry.path());
        }
    std::sort(files.begin(), files.end());
    return files;
}

struct DiagSeries {
    std::vector<double> t, energy, area, psi;
};

bool read_diag_series(const fs::path& path, DiagSeries& out) {
    std::ifstream is(path);
    if (!is) return false;
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() < 8) continue;
        out.t.push_back(row[1]);
        out.energy.push_back(row[3]);
        out.area.push_back(row[5]);
        out.psi.push_back(row[7]);
    }
    return !out.t.empty();
}

} // namespace

void plot_run_dir(const std::filesystem::path& dir) {
    const auto files = snapshot_files(dir);
    if (files.empty())
        throw MissingSnapshots("no curve_<m>.csv snapshots in " + dir.string());

    std::vector<svg::Series> series;
    bool any_open = false;
    double xmin = 0.0, xmax = 0.0;
    for (size_t k = 0; k < files.size(); ++k) {
        double t = 0.0;
        const CurveState c = read_curve_csv(files[k].second.string(), &t);
        svg::Series s;
        s.label = "t=" + format_double(t);
        s.color = svg::ramp_color(static_cast<int>(k),
                                  static_cast<int>(files.size()));
        for (const auto& p : c.nodes()) {
            s.x.push_back(p.x());
            s.y.push_back(p.y());
            xmin = std::min(xmin, p.x());
            xmax = std::max(xmax, p.x());
        }
        if (c.closed()) {
            s.x.push_back(c.node(0).x());
            s.y.push_back(c.node(0).y());
        } else {
            any_open = true;
        }
        series.push_back(std::move(s));
    }
    if (any_open) {
        svg::Series base;
        base.label = "substrate";
        base.color = "#404040";
        base.x = {xmin - 0.2, xmax + 0.2};
        base.y = {0.0, 0.0};
        series.push_back(std::move(base));
    }
    svg::PlotOptions opt;
    opt.equal_aspect = true;
    opt.title = "curve evolution";
    svg::write_plot((dir / "evolution.svg").string(), series, opt);

    DiagSeries d;
    if (read_diag_series(dir / "diagnostics.csv", d)) {
        auto one = [&](const std::string& name, const std::vector<double>& y,
                       const std::string& color) {
            svg::Series s{name, color, d.t, y};
            svg::PlotOptions o;
            o.title = name + " vs t";
            svg::write_plot((dir / ("series_" + name + ".svg")).string(), {s}, o);
        };
        one("energy", d.energy, "#2040c0");
        one("area", d.area, "#20a040");
        one("mesh_ratio", d.psi, "#c04020");
    }
}

} // namespace curveflow
