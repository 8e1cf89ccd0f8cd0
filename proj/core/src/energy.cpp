#include <curveflow/energy.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

namespace curveflow {

namespace {
constexpr int kConstructionGrid = 4096;
}

SurfaceEnergy::SurfaceEnergy(Callback cb, double stability_factor)
    : eval_(std::move(cb)), stability_factor_(stability_factor) {
    // Positivity and pi-periodicity, sampled once at construction.
    pi_periodic_ = true;
    for (int i = 0; i < kConstructionGrid; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * i / kConstructionGrid;
        const GammaEval g = eval_(theta);
        if (!(g.value > 0.0))
            throw NonpositiveGamma("gamma(theta) <= 0 at theta=" +
                                   std::to_string(theta));
        if (std::abs(g.value - eval_(theta + M_PI).value) > 1e-13)
            pi_periodic_ = false;
    }
}

SurfaceEnergy SurfaceEnergy::isotropic(double stability_factor) {
    SurfaceEnergy e([](double) { return GammaEval{1.0, 0.0, 0.0}; },
                    stability_factor);
    e.isotropic_ = true;
    return e;
}

SurfaceEnergy SurfaceEnergy::fourfold_cosine(double beta, int fold,
                                             double stability_factor) {
    const double k = fold;
    return SurfaceEnergy(
        [beta, k](double theta) {
            return GammaEval{1.0 + beta * std::cos(k * theta),
                             -k * beta * std::sin(k * theta),
                             -k * k * beta * std::cos(k * theta)};
        },
        stability_factor);
}

SurfaceEnergy SurfaceEnergy::tabulated(Callback cb, double stability_factor) {
    return SurfaceEnergy(std::move(cb), stability_factor);
}

GammaEval SurfaceEnergy::gamma(double theta) const { return eval_(theta); }

bool SurfaceEnergy::is_isotropic() const { return isotropic_; }

double SurfaceEnergy::stability_min(double theta) const {
    const GammaEval g = eval_(theta);
    if (!(g.value > 0.0)) throw NonpositiveGamma("gamma(theta) <= 0");
    return (g.value * g.value + g.d1 * g.d1) / g.value;
}

Mat2 SurfaceEnergy::b_matrix_with_stability(double theta, double stability) const {
    const GammaEval g = eval_(theta);
    const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
    Mat2 rot;
    rot << c, s, s, -c;
    Mat2 gm;
    gm << g.value, -g.d1, g.d1, g.value;
    return gm * rot + stability * 0.5 * (Mat2::Identity() - rot);
}

Mat2 SurfaceEnergy::b_matrix(double theta) const {
    const Mat2 b =
        b_matrix_with_stability(theta, stability_factor_ * stability_min(theta));
    const Eigen::SelfAdjointEigenSolver<Mat2> es(b);
    if (!(es.eigenvalues().minCoeff() > 0.0))
        throw NotPositiveDefinite("B(theta) not positive definite at theta=" +
                                  std::to_string(theta) +
                                  "; raise gamma.stability_factor above 1");
    return b;
}

SurfaceEnergy::PdReport SurfaceEnergy::pd_check(int grid_size) const {
    PdReport report{std::numeric_limits<double>::infinity(), 0.0, false};
    for (int i = 0; i < grid_size; ++i) {
        const double theta = -M_PI + 2.0 * M_PI * i / grid_size;
        const Mat2 b = b_matrix_with_stability(
            theta, stability_factor_ * stability_min(theta));
        const Eigen::SelfAdjointEigenSolver<Mat2> es(b);
        const double lmin = es.eigenvalues().minCoeff();
        if (lmin < report.min_eigenvalue) {
            report.min_eigenvalue = lmin;
            report.argmin_theta = theta;
        }
    }
    report.pass = report.min_eigenvalue > 0.0;
    return report;
}

double discrete_energy(const SegmentFrame& frame, const SurfaceEnergy& energy) {
    double w = 0.0;
    for (int j = 0; j < frame.segment_count(); ++j)
        w += frame.lengths[static_cast<size_t>(j)] *
             energy.gamma(frame.angles[static_cast<size_t>(j)]).value;
    return w;
}

} // namespace curveflow
