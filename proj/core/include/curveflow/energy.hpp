#pragma once

#include <curveflow/curve.hpp>

#include <Eigen/Core>
#include <functional>

namespace curveflow {

using Mat2 = Eigen::Matrix2d;

struct GammaEval {
    double value;
    double d1;
    double d2;
};

/// Anisotropic surface energy density gamma(theta) with derivatives, the
/// stabilized stiffness matrix B(theta), and the discrete energies.
///
/// The stabilization is S(theta) = c_s * S0(theta) with the minimal
/// stability function S0 = (gamma^2 + gamma'^2)/gamma, below which B(theta)
/// loses positive definiteness. Default c_s = 2; note that for the
/// isotropic density this makes B the identity.
class SurfaceEnergy {
public:
    using Callback = std::function<GammaEval(double)>;

    static SurfaceEnergy isotropic(double stability_factor = 2.0);
    /// gamma = 1 + beta cos(k theta), default k = 4.
    static SurfaceEnergy fourfold_cosine(double beta, int fold = 4,
                                         double stability_factor = 2.0);
    /// User-supplied gamma, gamma', gamma'' evaluated pointwise.
    static SurfaceEnergy tabulated(Callback cb, double stability_factor = 2.0);

    GammaEval gamma(double theta) const;

    /// Minimal stability function S0(theta).
    double stability_min(double theta) const;

    /// B(theta) with S = stability_factor * S0(theta).
    Mat2 b_matrix(double theta) const;

    /// B(theta) with an explicit stability value (test hook; not PD-checked).
    Mat2 b_matrix_with_stability(double theta, double stability) const;

    bool is_isotropic() const;
    bool pi_periodic() const { return pi_periodic_; }
    double stability_factor() const { return stability_factor_; }

    /// Min eigenvalue of B over a uniform theta grid.
    struct PdReport {
        double min_eigenvalue;
        double argmin_theta;
        bool pass;
    };
    PdReport pd_check(int grid_size = 4096) const;

private:
    SurfaceEnergy(Callback cb, double stability_factor);

    Callback eval_;
    double stability_factor_;
    bool isotropic_ = false;
    bool pi_periodic_ = false;
};

/// W^h = sum_j |h_j| gamma(theta_j); equals the perimeter for gamma == 1.
double discrete_energy(const SegmentFrame& frame, const SurfaceEnergy& energy);

} // namespace curveflow
