#pragma once

#include <curveflow/curve.hpp>
#include <curveflow/energy.hpp>

#include <vector>

namespace curveflow {

/// Substrate parameters for solid-state dewetting.
struct SubstrateConfig {
    /// sigma = (gamma_VS - gamma_FS) / gamma_FV.
    double sigma = 0.0;
    /// Contact line mobility, > 0.
    double eta = 100.0;

    void validate() const {
        if (!(eta > 0.0)) throw BadSubstrate("substrate.eta must be > 0");
        if (!std::isfinite(sigma)) throw BadSubstrate("substrate.sigma not finite");
    }
};

/// f(theta; sigma) = gamma(theta) cos(theta) - gamma'(theta) sin(theta) - sigma.
double young_force(const SurfaceEnergy& energy, double theta, double sigma);

struct EquilibriumAngles {
    double smallest;               // smallest root in (0, pi)
    std::vector<double> all_roots; // every sign-change root found on the scan
};

/// Roots of f(theta; sigma) in (0, pi), bisected to 1e-12.
EquilibriumAngles equilibrium_angle(const SurfaceEnergy& energy, double sigma);

/// W^h = sum |h_j| gamma(theta_j) - (x_r - x_l) sigma for an open curve.
double ssd_energy(const CurveState& curve, const SegmentFrame& frame,
                  const SurfaceEnergy& energy, const SubstrateConfig& substrate);

/// Interior contact angles at the left and right contact points, measured
/// from the first/last segment directions. Both lie in (0, pi) for graphs
/// above the substrate.
std::pair<double, double> contact_angles(const CurveState& curve);

} // namespace curveflow
