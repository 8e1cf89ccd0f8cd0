#include <curveflow/stepper.hpp>

#include <cmath>

namespace curveflow {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Bdf1Sav: return "bdf1_sav";
        case Scheme::Bdf1Csav: return "bdf1_csav";
        case Scheme::Bdf2Sav: return "bdf2_sav";
    }
    return "?";
}

std::pair<double, double> xi_update(double r_prev, double w_bar,
                                    double dissipation, double dt) {
    if (!(w_bar > 0.0))
        throw NonpositiveEnergy("W^h(Xbar) = " + std::to_string(w_bar) +
                                " <= 0; auxiliary update undefined");
    if (r_prev < 0.0)
        throw NonpositiveEnergy("R^m must be nonnegative");
    const double xi = r_prev / (w_bar + dt * dissipation);
    return {xi, xi * w_bar};
}

double zeta(double xi, int r) {
    if (r < 2) throw ValidationError("correction exponent r must be >= 2");
    return 1.0 - std::pow(1.0 - xi, r);
}

SavStepper::SavStepper(CurveState initial, SurfaceEnergy energy, Options options)
    : curve_(std::move(initial)), energy_(std::move(energy)),
      options_(std::move(options)) {
    if (options_.flow == FlowKind::Ssd) {
        if (!options_.substrate)
            throw BadSubstrate("SSD flow needs a substrate config");
        options_.substrate->validate();
        if (curve_.closed())
            throw BadShapeParams("SSD flow needs an open curve");
    } else if (!curve_.closed()) {
        throw BadShapeParams("closed SDF flow needs a closed curve");
    }
    if (options_.r < 2) throw ValidationError("r must be >= 2");
    if (!(options_.dt > 0.0)) throw ValidationError("dt must be positive");
    const SegmentFrame f = segment_frame(curve_);
    aux_r_ = original_energy(curve_, f);
    initial_aux_ = aux_r_;
    initial_area_ = enclosed_area(curve_);
    if (aux_r_ < 0.0)
        throw NonpositiveEnergy("initial energy R^0 < 0 (sigma too large?)");
}

double SavStepper::original_energy(const CurveState& c,
                                   const SegmentFrame& f) const {
    if (options_.flow == FlowKind::Ssd)
        return ssd_energy(c, f, energy_, *options_.substrate);
    return discrete_energy(f, energy_);
}

SolveResult SavStepper::candidate_solve() {
    const std::optional<SubstrateConfig>& sub =
        options_.flow == FlowKind::Ssd ? options_.substrate : std::nullopt;
    switch (options_.scheme) {
        case Scheme::Bdf1Sav: {
            const SegmentFrame frame = segment_frame(curve_);
            return solve_step(curve_, frame, frame.normals, bdf1_stencil(curve_),
                              energy_, options_.dt, sub);
        }
        case Scheme::Bdf1Csav:
            return csav_fixed_point(curve_, energy_, options_.dt, sub,
                                    options_.csav_tol_rel, options_.csav_max_iter);
        case Scheme::Bdf2Sav: {
            // Geometry predictor: a plain BDF1 solve, no SAV scaling.
            const SegmentFrame frame = segment_frame(curve_);
            const SolveResult predictor =
                solve_step(curve_, frame, frame.normals, bdf1_stencil(curve_),
                           energy_, options_.dt, sub);
            const SegmentFrame pred_frame = segment_frame(predictor.curve);
            return solve_step(predictor.curve, pred_frame, pred_frame.normals,
                              bdf2_stencil(curve_, *prev_curve_), energy_,
                              options_.dt, sub);
        }
    }
    throw Error("unknown scheme");
}

StepDiagnostics SavStepper::step() {
    const bool ssd = options_.flow == FlowKind::Ssd;
    const bool bootstrap =
        options_.scheme == Scheme::Bdf2Sav && !prev_curve_.has_value();

    const SolveResult candidate = [&] {
        if (!bootstrap) return candidate_solve();
        // The two-step scheme is not self-starting; the first step is BDF1.
        const SegmentFrame frame = segment_frame(curve_);
        return solve_step(curve_, frame, frame.normals, bdf1_stencil(curve_),
                          energy_, options_.dt,
                          ssd ? options_.substrate : std::nullopt);
    }();

    const SegmentFrame cand_frame = segment_frame(candidate.curve);
    last_intermediate_area_ = enclosed_area(candidate.curve);

    double dissipation = stiffness_pairing(candidate.mu, candidate.mu,
                                           cand_frame, curve_.topology());
    if (ssd) {
        const double dxl =
            (candidate.curve.node(0).x() - curve_.node(0).x()) / options_.dt;
        const int last = curve_.node_count() - 1;
        const double dxr =
            (candidate.curve.node(last).x() - curve_.node(last).x()) / options_.dt;
        dissipation += (dxl * dxl + dxr * dxr) / options_.substrate->eta;
    }

    const double w_bar = original_energy(candidate.curve, cand_frame);
    const auto [xi, r_next] = xi_update(aux_r_, w_bar, dissipation, options_.dt);
    const double z = zeta(xi, options_.r);
    if (z < 0.0 && !energy_.pi_periodic())
        throw OrientationHazard(
            "zeta < 0 with a non pi-periodic energy: original-energy bound lost");

    if (r_next > aux_r_ + 1e-12 * initial_aux_)
        throw EnergyIncreased("modified energy increased: R " +
                              std::to_string(aux_r_) + " -> " +
                              std::to_string(r_next));

    std::vector<Vec2> scaled(candidate.curve.nodes());
    for (auto& p : scaled) p *= z;
    CurveState next = candidate.curve.with_nodes(std::move(scaled));
    if (ssd) {
        // Scaling about the origin preserves y = 0 exactly.
        if (next.node(0).y() != 0.0 || next.node(next.node_count() - 1).y() != 0.0)
            throw Error("contact nodes left the substrate after scaling");
    }

    prev_curve_ = std::move(curve_);
    curve_ = std::move(next);
    aux_r_ = r_next;
    time_ += options_.dt;
    ++step_index_;

    const SegmentFrame frame = segment_frame(curve_);
    StepDiagnostics d;
    d.step = step_index_;
    d.time = time_;
    d.xi = xi;
    d.zeta = z;
    d.aux_r = aux_r_;
    d.energy = original_energy(curve_, frame);
    d.energy_gap = std::abs(aux_r_ - d.energy);
    d.area = enclosed_area(curve_);
    d.area_loss_rel =
        initial_area_ != 0.0 ? (d.area - initial_area_) / initial_area_ : 0.0;
    d.mesh_ratio = frame.max_length() / frame.min_length();
    d.dissipation = dissipation;
    d.fixed_point_iterations = candidate.iterations;
    if (ssd) {
        d.contact_left = curve_.node(0).x();
        d.contact_right = curve_.node(curve_.node_count() - 1).x();
    }
    return d;
}

std::vector<StepDiagnostics> SavStepper::run(
    double final_time, const std::vector<Observer>& observers) {
    const double steps_exact = final_time / options_.dt;
    const long steps = std::lround(steps_exact);
    if (std::abs(steps_exact - static_cast<double>(steps)) > 1e-9 || steps < 0)
        throw ValidationError("final time must be an integer multiple of dt");
    std::vector<StepDiagnostics> trajectory;
    trajectory.reserve(static_cast<size_t>(steps));
    for (long m = 0; m < steps; ++m) {
        const StepDiagnostics d = step();
        for (const auto& obs : observers) obs(d, curve_);
        trajectory.push_back(d);
    }
    return trajectory;
}

} // namespace curveflow
