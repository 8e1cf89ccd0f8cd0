#include <curveflow/config.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace curveflow {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

} // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str(), path);
}

KeyValueFile KeyValueFile::parse_string(const std::string& text,
                                        const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError(origin + ":" + std::to_string(lineno) +
                                  ": empty key or value");
        kv.map_[key] = value;
        kv.lines_[key] = lineno;
    }
    return kv;
}

void KeyValueFile::missing(const std::string& key) const {
    throw ValidationError(origin_ + ": missing required key '" + key + "'");
}

bool KeyValueFile::has(const std::string& key) const { return map_.count(key) > 0; }

std::string KeyValueFile::get_string(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) missing(key);
    return it->second;
}
std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& dflt) const {
    const auto it = map_.find(key);
    return it == map_.end() ? dflt : it->second;
}
double KeyValueFile::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ValidationError(origin_ + ": key '" + key + "': bad number '" + v + "'");
    return x;
}
double KeyValueFile::get_double(const std::string& key, double dflt) const {
    return has(key) ? get_double(key) : dflt;
}
int KeyValueFile::get_int(const std::string& key) const {
    const double x = get_double(key);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-12)
        throw ValidationError(origin_ + ": key '" + key + "' must be an integer");
    return i;
}
int KeyValueFile::get_int(const std::string& key, int dflt) const {
    return has(key) ? get_int(key) : dflt;
}

// ---------------------------------------------------------------------------
// sigma expression grammar: expr := factor (('*'|'/') factor)*
//                           factor := number ['pi'] | 'pi' | 'cos' '(' expr ')'
namespace {

struct SigmaParser {
    const std::string& s;
    size_t pos = 0;

    void skip() { while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos; }

    bool eat(const std::string& word) {
        skip();
        if (s.compare(pos, word.size(), word) == 0) { pos += word.size(); return true; }
        return false;
    }

    [[noreturn]] void fail(const std::string& why) {
        throw ValidationError("sigma_expr '" + s + "': " + why + " at position " +
                              std::to_string(pos));
    }

    double factor() {
        skip();
        if (eat("cos")) {
            if (!eat("(")) fail("expected '(' after cos");
            const double v = expr();
            if (!eat(")")) fail("expected ')'");
            return std::cos(v);
        }
        if (eat("pi")) return M_PI;
        char* end = nullptr;
        const double v = std::strtod(s.c_str() + pos, &end);
        if (end == s.c_str() + pos) fail("expected a number, pi, or cos(...)");
        pos = static_cast<size_t>(end - s.c_str());
        if (eat("pi")) return v * M_PI;  // juxtaposition: 3pi
        return v;
    }

    double expr() {
        double v = factor();
        for (;;) {
            if (eat("*")) v *= factor();
            else if (eat("/")) v /= factor();
            else return v;
        }
    }
};

} // namespace

double parse_sigma_expr(const std::string& text) {
    SigmaParser p{text};
    const double v = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing characters");
    return v;
}

// ---------------------------------------------------------------------------

SurfaceEnergy RunConfig::make_energy() const {
    if (gamma_kind == "isotropic")
        return SurfaceEnergy::isotropic(gamma_stability_factor);
    if (gamma_kind == "fourfold")
        return SurfaceEnergy::fourfold_cosine(gamma_beta, gamma_fold,
                                              gamma_stability_factor);
    throw ValidationError("gamma.kind must be isotropic or fourfold, got '" +
                          gamma_kind + "'");
}

CurveState RunConfig::make_initial_curve() const { return initial_shape(shape, n); }

SavStepper::Options RunConfig::stepper_options() const {
    SavStepper::Options opt;
    opt.scheme = scheme;
    opt.r = r;
    opt.dt = dt;
    opt.flow = flow;
    if (flow == FlowKind::Ssd) opt.substrate = substrate;
    return opt;
}

void RunConfig::validate() const {
    if (r < 2) throw ValidationError("r must be >= 2");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    const double steps = t_final / dt;
    if (std::abs(steps - std::lround(steps)) > 1e-9)
        throw ValidationError("t_final must be an integer multiple of dt");
    if (flow == FlowKind::Ssd && shape.kind == ShapeSpec::Kind::Ellipse)
        throw ValidationError("SSD flow needs an open initial shape");
    make_energy();  // validates gamma keys
}

RunConfig parse_run_config(const KeyValueFile& kv, int min_n) {
    RunConfig cfg;
    const std::string flow = kv.get_string("flow");
    if (flow == "sdf") cfg.flow = FlowKind::ClosedSdf;
    else if (flow == "ssd") cfg.flow = FlowKind::Ssd;
    else throw ValidationError("flow must be sdf or ssd, got '" + flow + "'");

    const std::string scheme = kv.get_string("scheme");
    if (scheme == "bdf1_sav") cfg.scheme = Scheme::Bdf1Sav;
    else if (scheme == "bdf1_csav") cfg.scheme = Scheme::Bdf1Csav;
    else if (scheme == "bdf2_sav") cfg.scheme = Scheme::Bdf2Sav;
    else throw ValidationError("scheme must be one of bdf1_sav, bdf1_csav, bdf2_sav");

    cfg.gamma_kind = kv.get_string("gamma.kind", "isotropic");
    cfg.gamma_beta = kv.get_double("gamma.beta", 0.0);
    cfg.gamma_fold = kv.get_int("gamma.fold", 4);
    cfg.gamma_stability_factor = kv.get_double("gamma.stability_factor", 2.0);

    if (cfg.flow == FlowKind::Ssd) {
        cfg.substrate.sigma = parse_sigma_expr(kv.get_string("substrate.sigma_expr"));
        cfg.substrate.eta = kv.get_double("substrate.eta", 100.0);
        cfg.substrate.validate();
    }

    const std::string shape = kv.get_string("shape.kind");
    if (shape == "ellipse") cfg.shape.kind = ShapeSpec::Kind::Ellipse;
    else if (shape == "semi_ellipse") cfg.shape.kind = ShapeSpec::Kind::SemiEllipse;
    else if (shape == "rectangle") cfg.shape.kind = ShapeSpec::Kind::Rectangle;
    else throw ValidationError("shape.kind must be ellipse, semi_ellipse or rectangle");
    cfg.shape.a = kv.get_double("shape.a", 2.0);
    cfg.shape.b = kv.get_double("shape.b", 1.0);

    cfg.n = kv.get_int("n");
    if (cfg.n < min_n)
        throw ValidationError("n must be at least " + std::to_string(min_n));
    cfg.dt = kv.get_double("dt");
    cfg.t_final = kv.get_double("t_final");
    cfg.r = kv.get_int("r");
    cfg.output_dir = kv.get_string("output.dir", "out");
    cfg.snapshot_count = kv.get_int("output.snapshots", 10);
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------

namespace {

RunConfig base_sdf() {
    RunConfig c;
    c.flow = FlowKind::ClosedSdf;
    c.shape.kind = ShapeSpec::Kind::Ellipse;
    c.shape.a = 2.0;
    c.shape.b = 1.0;
    return c;
}

RunConfig base_ssd() {
    RunConfig c;
    c.flow = FlowKind::Ssd;
    c.shape.kind = ShapeSpec::Kind::SemiEllipse;
    c.shape.a = 2.0;
    c.shape.b = 1.0;
    c.substrate.sigma = std::cos(3.0 * M_PI / 4.0);
    c.substrate.eta = 100.0;
    return c;
}

void set_gamma(RunConfig& c, double beta) {
    if (beta == 0.0) { c.gamma_kind = "isotropic"; c.gamma_beta = 0.0; }
    else { c.gamma_kind = "fourfold"; c.gamma_beta = beta; }
}

} // namespace

std::vector<std::string> preset_names() {
    return {
        "fig5_1_iso_bdf1",  "fig5_1_iso_bdf2",  "fig5_1_ani_bdf1",
        "fig5_1_ani_bdf2",  "fig5_2_iso_r6",    "fig5_2_ani05_r6",
        "fig5_2_ani01_r6",  "fig5_3_energy_iso", "fig5_4_mesh_iso",
        "fig5_4_mesh_ani",  "fig5_5_csav_area", "fig5_7_gap_ani01",
        "fig5_8_ssd_iso_bdf1", "fig5_8_ssd_iso_bdf2", "fig5_9_evolution_iso",
        "fig5_10_ssd_evolution_iso",
    };
}

RunConfig preset(const std::string& name) {
    RunConfig c;
    if (name.rfind("fig5_1_", 0) == 0) {
        c = base_sdf();
        c.n = 512;
        c.t_final = 0.1;
        set_gamma(c, name.find("ani") != std::string::npos ? 0.05 : 0.0);
        const bool bdf2 = name.find("bdf2") != std::string::npos;
        c.scheme = bdf2 ? Scheme::Bdf2Sav : Scheme::Bdf1Sav;
        c.r = bdf2 ? 3 : 2;
        c.dt = 1.0 / 640.0;
    } else if (name.rfind("fig5_2_", 0) == 0) {
        c = base_sdf();
        c.n = 80;
        c.dt = 1.0 / 160.0;
        c.t_final = 2.0;
        c.r = 6;
        set_gamma(c, name.find("ani05") != std::string::npos ? 0.05
                  : name.find("ani01") != std::string::npos ? 0.1 : 0.0);
    } else if (name == "fig5_3_energy_iso") {
        c = base_sdf();
        c.n = 640;
        c.dt = 1.0 / 640.0;
        c.t_final = 1.0;
        c.r = 6;
    } else if (name.rfind("fig5_4_mesh_", 0) == 0) {
        c = base_sdf();
        c.n = 128;
        c.dt = 1e-3;
        c.t_final = 2.0;
        c.r = 3;
        set_gamma(c, name.find("ani") != std::string::npos ? 0.05 : 0.0);
    } else if (name == "fig5_5_csav_area") {
        c = base_sdf();
        c.scheme = Scheme::Bdf1Csav;
        c.n = 80;
        c.dt = 1.0 / 160.0;
        c.t_final = 2.0;
        c.r = 3;
    } else if (name == "fig5_7_gap_ani01") {
        c = base_sdf();
        c.n = 640;
        c.dt = 1.0 / 160.0;
        c.t_final = 0.5;
        c.r = 3;
        set_gamma(c, 0.1);
    } else if (name.rfind("fig5_8_ssd_", 0) == 0) {
        c = base_ssd();
        c.n = 256;
        c.t_final = 0.1;
        const bool bdf2 = name.find("bdf2") != std::string::npos;
        c.scheme = bdf2 ? Scheme::Bdf2Sav : Scheme::Bdf1Sav;
        c.r = bdf2 ? 3 : 2;
        c.dt = 1.0 / 640.0;
    } else if (name == "fig5_9_evolution_iso") {
        c = base_sdf();
        c.shape.kind = ShapeSpec::Kind::Rectangle;
        c.shape.a = 4.0;
        c.shape.b = 1.0;
        c.n = 72;
        c.dt = 1e-3;
        c.t_final = 2.0;
        c.r = 3;
    } else if (name == "fig5_10_ssd_evolution_iso") {
        c = base_ssd();
        c.n = 72;
        c.dt = 1e-3;
        c.t_final = 2.0;
        c.r = 3;
    } else {
        throw ValidationError("unknown preset '" + name + "'");
    }
    c.output_dir = name;
    c.validate();
    return c;
}

std::vector<double> preset_dt_list(const std::string& name) {
    if (name.rfind("fig5_1_", 0) == 0 || name.rfind("fig5_8_", 0) == 0)
        return {1.0 / 40, 1.0 / 80, 1.0 / 160, 1.0 / 320, 1.0 / 640};
    throw ValidationError("preset '" + name + "' has no dt list");
}

} // namespace curveflow
