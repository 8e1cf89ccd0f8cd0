#pragma once

#include <curveflow/curve.hpp>
#include <curveflow/energy.hpp>
#include <curveflow/ssd.hpp>

#include <Eigen/Sparse>
#include <optional>

namespace curveflow {

/// Sparse saddle system for one implicit step.
///
/// Unknown layout: [x_0..x_{K-1}, y_0..y_{K-1}, mu_0..mu_{K-1}] where K = N
/// for closed curves and K = N+1 for open curves. Rows 0..K-1 test the
/// velocity/potential equation with nodal hats; the remaining rows test the
/// position/curvature equation with vector hats (x block then y block).
class LinearSystem {
public:
    explicit LinearSystem(int dimension);

    int dimension() const { return dim_; }
    void add(int row, int col, double value);
    void set_rhs(int row, double value);
    void add_rhs(int row, double value);

    /// Mark a row as strongly constrained: a single unit entry at the given
    /// column, given rhs. Entries added to a replaced row are dropped.
    void replace_row(int row, int col, double rhs_value);

    void finalize();
    const Eigen::SparseMatrix<double>& matrix() const;
    const Eigen::VectorXd& rhs() const { return rhs_; }

private:
    int dim_;
    std::vector<Eigen::Triplet<double>> triplets_;
    std::vector<char> replaced_;
    Eigen::VectorXd rhs_;
    Eigen::SparseMatrix<double> matrix_;
    bool finalized_ = false;
};

/// Direct sparse LU with residual verification.
Eigen::VectorXd solve(LinearSystem& system);

/// Time-stencil data shared by the BDF1 (alpha = 1, combo = X^m) and BDF2
/// (alpha = 3/2, combo = 2 X^m - 1/2 X^{m-1}) assemblies.
struct TimeStencil {
    double alpha = 1.0;
    std::vector<Vec2> combo;  // per node of the unknown curve
};

TimeStencil bdf1_stencil(const CurveState& prev);
TimeStencil bdf2_stencil(const CurveState& prev, const CurveState& prev2);

/// One implicit step for a closed curve: all inner products mass-lumped on
/// the given integration curve with the given per-segment normal field
/// (not necessarily unit; the CSAV half-step normal is passed here).
LinearSystem assemble_closed(const CurveState& integration_curve,
                             const SegmentFrame& frame,
                             const std::vector<Vec2>& normals,
                             const TimeStencil& bdf,
                             const SurfaceEnergy& energy, double dt);

/// Open-curve variant with contact-line friction, substrate tension and the
/// strongly enforced y = 0 rows at both contact nodes.
LinearSystem assemble_ssd(const CurveState& integration_curve,
                          const SegmentFrame& frame,
                          const std::vector<Vec2>& normals,
                          const TimeStencil& bdf,
                          const SurfaceEnergy& energy, double dt,
                          const SubstrateConfig& substrate);

struct SolveResult {
    CurveState curve;            // candidate positions (pre SAV scaling)
    std::vector<double> mu;      // nodal chemical potential
    double residual = 0.0;
    int iterations = 0;          // CSAV fixed-point count, 0 otherwise
};

/// Assemble + solve + unpack for a prescribed normal field.
SolveResult solve_step(const CurveState& integration_curve,
                       const SegmentFrame& frame,
                       const std::vector<Vec2>& normals,
                       const TimeStencil& bdf, const SurfaceEnergy& energy,
                       double dt,
                       const std::optional<SubstrateConfig>& substrate);

/// Resolve the CSAV half-step normal (it depends on the unknown curve) by
/// lagged fixed-point iteration starting from the previous normals.
SolveResult csav_fixed_point(const CurveState& curve_prev,
                             const SurfaceEnergy& energy, double dt,
                             const std::optional<SubstrateConfig>& substrate,
                             double tol_rel = 1e-12, int max_iter = 50);

} // namespace curveflow
