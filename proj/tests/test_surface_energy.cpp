#include <curveflow/energy.hpp>

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace cf = curveflow;

namespace {

cf::CurveState regular_ngon(int n, double radius = 1.0) {
    std::vector<cf::Vec2> nodes;
    for (int j = 0; j < n; ++j) {
        const double phi = 2.0 * M_PI * j / n;
        nodes.emplace_back(radius * std::cos(phi), radius * std::sin(phi));
    }
    return cf::CurveState(std::move(nodes), cf::Topology::Closed);
}

double min_eig(const cf::Mat2& m) {
    return Eigen::SelfAdjointEigenSolver<cf::Mat2>(m).eigenvalues().minCoeff();
}

} // namespace

TEST_CASE("gamma evaluation") {
    const cf::SurfaceEnergy iso = cf::SurfaceEnergy::isotropic();
    for (double theta : {0.0, 1.0, -2.5}) {
        const cf::GammaEval g = iso.gamma(theta);
        CHECK(g.value == 1.0);
        CHECK(g.d1 == 0.0);
        CHECK(g.d2 == 0.0);
    }
    const cf::SurfaceEnergy ani = cf::SurfaceEnergy::fourfold_cosine(0.05);
    const cf::GammaEval g0 = ani.gamma(0.0);
    CHECK(g0.value == doctest::Approx(1.05));
    CHECK(g0.d1 == doctest::Approx(0.0));
    CHECK(g0.d2 == doctest::Approx(-0.8));
    const cf::GammaEval g4 = ani.gamma(M_PI / 4);
    CHECK(g4.value == doctest::Approx(0.95));
    CHECK(g4.d1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g4.d2 == doctest::Approx(0.8));
}

TEST_CASE("nonpositive gamma rejected at construction") {
    CHECK_THROWS_AS(cf::SurfaceEnergy::fourfold_cosine(1.5), cf::NonpositiveGamma);
    CHECK_THROWS_AS(cf::SurfaceEnergy::tabulated([](double theta) {
                        return cf::GammaEval{std::cos(theta), 0.0, 0.0};
                    }),
                    cf::NonpositiveGamma);
}

TEST_CASE("minimal stability function") {
    const cf::SurfaceEnergy iso = cf::SurfaceEnergy::isotropic();
    CHECK(iso.stability_min(0.37) == doctest::Approx(1.0));
    const cf::SurfaceEnergy ani = cf::SurfaceEnergy::fourfold_cosine(0.05);
    CHECK(ani.stability_min(0.0) == doctest::Approx(1.05));
    CHECK(ani.stability_min(M_PI / 8) == doctest::Approx(1.04));
}

TEST_CASE("stability_min is the PD threshold (eigenvalue oracle)") {
    const cf::SurfaceEnergy ani = cf::SurfaceEnergy::fourfold_cosine(0.1);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    for (int trial = 0; trial < 200; ++trial) {
        const double theta = u(rng);
        const double s0 = ani.stability_min(theta);
        CHECK(min_eig(ani.b_matrix_with_stability(theta, s0 + 1e-8)) > 0.0);
        CHECK(min_eig(ani.b_matrix_with_stability(theta, s0 - 1e-8)) < 0.0);
    }
}

TEST_CASE("b_matrix test hooks") {
    const cf::SurfaceEnergy iso = cf::SurfaceEnergy::isotropic();
    cf::Mat2 expect;
    expect << 1, 0, 0, -1;
    CHECK((iso.b_matrix_with_stability(0.0, 0.0) - expect).cwiseAbs().maxCoeff() <
          1e-15);
    CHECK((iso.b_matrix_with_stability(0.0, 2.0) - cf::Mat2::Identity())
              .cwiseAbs()
              .maxCoeff() < 1e-15);
    // Default c_s = 2 keeps the isotropic B equal to the identity at every
    // angle, so the anisotropic assembly path degenerates exactly.
    for (double theta : {0.0, 0.4, -1.9, 3.0})
        CHECK((iso.b_matrix(theta) - cf::Mat2::Identity()).cwiseAbs().maxCoeff() <
              1e-14);
}

TEST_CASE("b_matrix symmetry and positive definiteness on random angles") {
    const cf::SurfaceEnergy ani = cf::SurfaceEnergy::fourfold_cosine(0.05);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 10000; ++trial) {
        const double theta = u(rng);
        const cf::Mat2 b = ani.b_matrix(theta);
        CHECK((b - b.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        if (trial % 100 == 0) CHECK(min_eig(b) > 0.0);
    }
}

TEST_CASE("PD bracket at S0 for the isotropic density") {
    const cf::SurfaceEnergy iso = cf::SurfaceEnergy::isotropic();
    CHECK(min_eig(iso.b_matrix_with_stability(0.31, 1.0 + 1e-8)) > 0.0);
    CHECK(min_eig(iso.b_matrix_with_stability(0.31, 1.0 - 1e-8)) < 0.0);
}

TEST_CASE("pd_check pass and fail cases") {
    const auto ok = cf::SurfaceEnergy::isotropic().pd_check();
    CHECK(ok.pass);
    CHECK(ok.min_eigenvalue == doctest::Approx(1.0));

    const auto bad = cf::SurfaceEnergy::isotropic(0.5).pd_check();
    CHECK_FALSE(bad.pass);

    const auto ani = cf::SurfaceEnergy::fourfold_cosine(0.05, 4, 1.5).pd_check();
    CHECK(ani.pass);

    CHECK_THROWS_AS(cf::SurfaceEnergy::isotropic(0.5).b_matrix(0.1),
                    cf::NotPositiveDefinite);
}

TEST_CASE("pi periodicity flag") {
    CHECK(cf::SurfaceEnergy::isotropic().pi_periodic());
    CHECK(cf::SurfaceEnergy::fourfold_cosine(0.05, 4).pi_periodic());
    CHECK_FALSE(cf::SurfaceEnergy::fourfold_cosine(0.05, 3).pi_periodic());
}

TEST_CASE("discrete energy examples") {
    const cf::CurveState sq({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, cf::Topology::Closed);
    const cf::SegmentFrame f = cf::segment_frame(sq);
    CHECK(cf::discrete_energy(f, cf::SurfaceEnergy::isotropic()) ==
          doctest::Approx(4.0));
    CHECK(cf::discrete_energy(f, cf::SurfaceEnergy::fourfold_cosine(0.05)) ==
          doctest::Approx(4.2));

    // Regular octagon with unit sides: segment angles step by pi/4, so the
    // fourfold factor alternates 1.05 / 0.95.
    std::vector<cf::Vec2> oct;
    cf::Vec2 p(0, 0);
    for (int j = 0; j < 8; ++j) {
        oct.push_back(p);
        const double theta = M_PI / 4 * j;
        p += cf::Vec2(std::cos(theta), std::sin(theta));
    }
    const cf::CurveState c(oct, cf::Topology::Closed);
    CHECK(cf::discrete_energy(cf::segment_frame(c),
                              cf::SurfaceEnergy::fourfold_cosine(0.05)) ==
          doctest::Approx(8.0));
}

TEST_CASE("curvature consistency oracle on a fine circle is O(h^2)") {
    // For a circle of radius rho the solved potential satisfies
    // mu w_i n_i = sum_j B tau_j tested with the hat at node i; with the
    // isotropic B = I the defect of that nodal identity at mu = 1/rho must
    // shrink by ~4x when N doubles.
    auto defect = [](int n) {
        const double rho = 1.0;
        const cf::CurveState c = regular_ngon(n, rho);
        const cf::SegmentFrame f = cf::segment_frame(c);
        const cf::SurfaceEnergy iso = cf::SurfaceEnergy::isotropic();
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const int prev = (i + n - 1) % n;
            const cf::Vec2 w =
                0.5 * (f.lengths[prev] * f.normals[prev] + f.lengths[i] * f.normals[i]);
            const cf::Vec2 lhs = (1.0 / rho) * w;
            const cf::Vec2 rhs = iso.b_matrix(f.angles[prev]) * f.tangents[prev] -
                                 iso.b_matrix(f.angles[i]) * f.tangents[i];
            worst = std::max(worst, (lhs - rhs).norm() / f.lengths[i]);
        }
        return worst;
    };
    const double e1 = defect(64);
    const double e2 = defect(128);
    CHECK(e1 < 1e-2);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("energy invariance under translation and rotation") {
    const cf::SurfaceEnergy ani = cf::SurfaceEnergy::fourfold_cosine(0.05);
    const cf::CurveState c = regular_ngon(30, 1.3);
    const cf::SegmentFrame f = cf::segment_frame(c);
    const double w = cf::discrete_energy(f, ani);

    std::vector<cf::Vec2> shifted;
    for (const auto& p : c.nodes()) shifted.push_back(p + cf::Vec2(3.1, -0.7));
    CHECK(cf::discrete_energy(cf::segment_frame(c.with_nodes(shifted)), ani) ==
          doctest::Approx(w).epsilon(1e-13));

    const double alpha = 0.41;
    std::vector<cf::Vec2> rotated;
    for (const auto& p : c.nodes())
        rotated.emplace_back(std::cos(alpha) * p.x() - std::sin(alpha) * p.y(),
                             std::sin(alpha) * p.x() + std::cos(alpha) * p.y());
    const cf::SurfaceEnergy shifted_gamma = cf::SurfaceEnergy::tabulated(
        [alpha](double theta) {
            const double t = theta - alpha;
            return cf::GammaEval{1.0 + 0.05 * std::cos(4.0 * t),
                                 -0.2 * std::sin(4.0 * t),
                                 -0.8 * std::cos(4.0 * t)};
        });
    CHECK(cf::discrete_energy(cf::segment_frame(c.with_nodes(rotated)),
                              shifted_gamma) == doctest::Approx(w).epsilon(1e-12));
}
