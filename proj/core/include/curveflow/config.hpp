#pragma once

#include <curveflow/curve.hpp>
#include <curveflow/energy.hpp>
#include <curveflow/ssd.hpp>
#include <curveflow/stepper.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curveflow {

/// Flat "key = value" file with dotted section keys and '#' comments.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_string(const std::string& text,
                                     const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double dflt) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int dflt) const;

    const std::map<std::string, std::string>& entries() const { return map_; }
    void set(const std::string& key, const std::string& value) { map_[key] = value; }

private:
    std::map<std::string, std::string> map_;
    std::map<std::string, int> lines_;
    std::string origin_;
    [[noreturn]] void missing(const std::string& key) const;
};

/// Tiny expression grammar for substrate.sigma_expr:
/// number, pi, cos(expr), products and quotients, implicit number*pi.
double parse_sigma_expr(const std::string& text);

struct RunConfig {
    FlowKind flow = FlowKind::ClosedSdf;
    Scheme scheme = Scheme::Bdf1Sav;

    std::string gamma_kind = "isotropic";  // isotropic | fourfold
    double gamma_beta = 0.0;
    int gamma_fold = 4;
    double gamma_stability_factor = 2.0;

    SubstrateConfig substrate;  // used when flow == Ssd

    ShapeSpec shape;
    int n = 80;
    double dt = 1e-3;
    double t_final = 1.0;
    int r = 2;

    std::string output_dir = "out";
    int snapshot_count = 10;

    SurfaceEnergy make_energy() const;
    CurveState make_initial_curve() const;
    SavStepper::Options stepper_options() const;
    void validate() const;
};

/// Parse and validate a RunConfig; `min_n` is relaxed for unit tests.
RunConfig parse_run_config(const KeyValueFile& kv, int min_n = 8);

/// Named experiment presets (figure reproductions).
std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);
/// dt halving list attached to the convergence presets.
std::vector<double> preset_dt_list(const std::string& name);

} // namespace curveflow
