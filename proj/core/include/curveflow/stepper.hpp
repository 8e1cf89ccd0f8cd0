#pragma once

#include <curveflow/assembly.hpp>

#include <functional>
#include <optional>

namespace curveflow {

enum class Scheme { Bdf1Sav, Bdf1Csav, Bdf2Sav };
enum class FlowKind { ClosedSdf, Ssd };

std::string scheme_name(Scheme s);

/// xi = R_prev / (W_bar + dt D) and R_next = xi W_bar, so that
/// R_next - R_prev = -dt xi D.
std::pair<double, double> xi_update(double r_prev, double w_bar,
                                    double dissipation, double dt);

/// zeta = 1 - (1 - xi)^r.
double zeta(double xi, int r);

/// Per-step record of the §-style diagnostics.
struct StepDiagnostics {
    int step = 0;
    double time = 0.0;
    double xi = 1.0;
    double zeta = 1.0;
    double aux_r = 0.0;          // modified energy R^{m+1}
    double energy = 0.0;         // original energy W^h (L^h when isotropic)
    double energy_gap = 0.0;     // |R - W^h|
    double area = 0.0;
    double area_loss_rel = 0.0;
    double mesh_ratio = 1.0;
    double dissipation = 0.0;
    double contact_left = 0.0;   // SSD only
    double contact_right = 0.0;  // SSD only
    int fixed_point_iterations = 0;
};

/// Full stepper state for the three schemes.
class SavStepper {
public:
    struct Options {
        Scheme scheme = Scheme::Bdf1Sav;
        int r = 2;                 // correction exponent, >= 2
        double dt = 1e-3;
        FlowKind flow = FlowKind::ClosedSdf;
        std::optional<SubstrateConfig> substrate;  // required for Ssd
        double csav_tol_rel = 1e-12;
        int csav_max_iter = 50;
    };

    SavStepper(CurveState initial, SurfaceEnergy energy, Options options);

    const CurveState& curve() const { return curve_; }
    const std::optional<CurveState>& prev_curve() const { return prev_curve_; }
    double aux() const { return aux_r_; }
    double time() const { return time_; }
    int step_index() const { return step_index_; }
    const Options& options() const { return options_; }
    const SurfaceEnergy& energy() const { return energy_; }
    double initial_area() const { return initial_area_; }

    /// Intermediate curve A^h(Xbar^{m+1}) of the last step (CSAV area audit).
    double last_intermediate_area() const { return last_intermediate_area_; }

    StepDiagnostics step();

    using Observer = std::function<void(const StepDiagnostics&, const CurveState&)>;

    /// Advance to time T = M dt; observers fire after every step.
    std::vector<StepDiagnostics> run(double final_time,
                                     const std::vector<Observer>& observers = {});

private:
    double original_energy(const CurveState& c, const SegmentFrame& f) const;
    SolveResult candidate_solve();

    CurveState curve_;
    std::optional<CurveState> prev_curve_;
    SurfaceEnergy energy_;
    Options options_;
    double aux_r_;
    double initial_aux_;
    double initial_area_;
    double time_ = 0.0;
    int step_index_ = 0;
    double last_intermediate_area_ = 0.0;
};

} // namespace curveflow
