#include <curveflow/ssd.hpp>

#include <cmath>

namespace curveflow {

double young_force(const SurfaceEnergy& energy, double theta, double sigma) {
    const GammaEval g = energy.gamma(theta);
    return g.value * std::cos(theta) - g.d1 * std::sin(theta) - sigma;
}

EquilibriumAngles equilibrium_angle(const SurfaceEnergy& energy, double sigma) {
    constexpr int kScan = 2048;
    EquilibriumAngles result{0.0, {}};
    double prev_theta = 0.0;
    double prev_f = young_force(energy, prev_theta, sigma);
    for (int i = 1; i <= kScan; ++i) {
        const double theta = M_PI * i / kScan;
        const double f = young_force(energy, theta, sigma);
        if (prev_f == 0.0) {
            result.all_roots.push_back(prev_theta);
        } else if (prev_f * f < 0.0) {
            double lo = prev_theta, hi = theta, flo = prev_f;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                const double fm = young_force(energy, mid, sigma);
                if (flo * fm <= 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            result.all_roots.push_back(0.5 * (lo + hi));
        }
        prev_theta = theta;
        prev_f = f;
    }
    if (result.all_roots.empty())
        throw NoRoot("f(theta; sigma) has no sign change in (0, pi)");
    result.smallest = result.all_roots.front();
    return result;
}

double ssd_energy(const CurveState& curve, const SegmentFrame& frame,
                  const SurfaceEnergy& energy, const SubstrateConfig& substrate) {
    if (curve.closed()) throw BadShapeParams("ssd_energy needs an open curve");
    const double surface = discrete_energy(frame, energy);
    const double spread = curve.node(curve.node_count() - 1).x() - curve.node(0).x();
    return surface - spread * substrate.sigma;
}

std::pair<double, double> contact_angles(const CurveState& curve) {
    if (curve.closed()) throw BadShapeParams("contact_angles needs an open curve");
    const Vec2 first = curve.segment(0);
    const Vec2 last = -curve.segment(curve.segment_count() - 1);
    if (first.norm() < 1e-300 || last.norm() < 1e-300)
        throw DegenerateSegment("zero-length contact segment");
    const double theta_l = std::atan2(first.y(), first.x());
    // Right angle measured against the negative substrate direction.
    const double theta_r = std::atan2(last.y(), -last.x());
    return {theta_l, theta_r};
}

} // namespace curveflow
