#include <curveflow/curve.hpp>

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace cf = curveflow;

namespace {

cf::CurveState unit_square() {
    return cf::CurveState({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, cf::Topology::Closed);
}

cf::CurveState regular_ngon(int n, double radius = 1.0) {
    std::vector<cf::Vec2> nodes;
    for (int j = 0; j < n; ++j) {
        const double phi = 2.0 * M_PI * j / n;
        nodes.emplace_back(radius * std::cos(phi), radius * std::sin(phi));
    }
    return cf::CurveState(std::move(nodes), cf::Topology::Closed);
}

// Independent shoelace implementation (cross-product form, not trapezoid).
double shoelace(const std::vector<cf::Vec2>& p) {
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        const cf::Vec2& a = p[i];
        const cf::Vec2& b = p[(i + 1) % p.size()];
        s += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * s;
}

} // namespace

TEST_CASE("segment frame conventions") {
    const cf::SegmentFrame f = cf::segment_frame(unit_square());
    CHECK(f.tangents[0].isApprox(cf::Vec2(1, 0), 1e-15));
    CHECK(f.normals[0].isApprox(cf::Vec2(0, -1), 1e-15));
    CHECK(f.angles[0] == doctest::Approx(0.0));

    // h = (0, 2): tau = (0,1), outward n = (1,0), theta = pi/2.
    const cf::CurveState c({{0, 0}, {0, 2}, {-2, 2}, {-2, 0}}, cf::Topology::Closed);
    const cf::SegmentFrame g = cf::segment_frame(c);
    CHECK(g.tangents[0].isApprox(cf::Vec2(0, 1), 1e-15));
    CHECK(g.normals[0].isApprox(cf::Vec2(1, 0), 1e-15));
    CHECK(g.angles[0] == doctest::Approx(M_PI / 2));
}

TEST_CASE("segment frame unit and orthogonality invariants") {
    const cf::SegmentFrame f = cf::segment_frame(regular_ngon(37));
    for (int j = 0; j < f.segment_count(); ++j) {
        CHECK(std::abs(f.tangents[j].norm() - 1.0) < 1e-14);
        CHECK(std::abs(f.normals[j].norm() - 1.0) < 1e-14);
        CHECK(std::abs(f.normals[j].dot(f.tangents[j])) < 1e-14);
    }
}

TEST_CASE("regular n-gon chord lengths") {
    for (int n : {8, 64, 257}) {
        const cf::SegmentFrame f = cf::segment_frame(regular_ngon(n));
        const double chord = 2.0 * std::sin(M_PI / n);
        for (double l : f.lengths) CHECK(l == doctest::Approx(chord).epsilon(1e-13));
    }
}

TEST_CASE("outward normal on the unit circle") {
    const cf::CurveState c = regular_ngon(64);
    const cf::SegmentFrame f = cf::segment_frame(c);
    for (int j = 0; j < 64; ++j) {
        const cf::Vec2 mid = 0.5 * (c.node(j) + c.node((j + 1) % 64));
        CHECK(f.normals[j].dot(mid) > 0.0);
    }
}

TEST_CASE("rotation maps angles and preserves lengths") {
    const double alpha = 0.73;
    const cf::CurveState c = regular_ngon(23, 1.4);
    std::vector<cf::Vec2> rotated;
    for (const auto& p : c.nodes())
        rotated.emplace_back(std::cos(alpha) * p.x() - std::sin(alpha) * p.y(),
                             std::sin(alpha) * p.x() + std::cos(alpha) * p.y());
    const cf::SegmentFrame f0 = cf::segment_frame(c);
    const cf::SegmentFrame f1 = cf::segment_frame(c.with_nodes(rotated));
    for (int j = 0; j < f0.segment_count(); ++j) {
        CHECK(std::abs(f1.lengths[j] - f0.lengths[j]) < 1e-13);
        double d = f1.angles[j] - f0.angles[j] - alpha;
        d = std::remainder(d, 2.0 * M_PI);
        CHECK(std::abs(d) < 1e-13);
    }
}

TEST_CASE("perimeter oracles") {
    CHECK(cf::perimeter(unit_square()) == doctest::Approx(4.0));
    for (int n : {16, 100})
        CHECK(cf::perimeter(regular_ngon(n)) ==
              doctest::Approx(2.0 * n * std::sin(M_PI / n)).epsilon(1e-13));

    // Ellipse x^2/4 + y^2 = 1: quadrature oracle for the arclength integral.
    const int q = 1 << 20;
    double exact = 0.0;
    for (int i = 0; i < q; ++i) {
        const double t = 2.0 * M_PI * (i + 0.5) / q;
        exact += std::hypot(2.0 * std::sin(t), std::cos(t));
    }
    exact *= 2.0 * M_PI / q;
    CHECK(exact == doctest::Approx(9.6884).epsilon(1e-4));
    const cf::CurveState e = cf::initial_shape(cf::ShapeSpec{}, 4000);
    CHECK(cf::perimeter(e) == doctest::Approx(exact).epsilon(1e-5));
}

TEST_CASE("perimeter equals lumped_inner(1,1)") {
    for (int n : {5, 32}) {
        const cf::CurveState c = regular_ngon(n);
        const cf::SegmentFrame f = cf::segment_frame(c);
        const cf::Field one = cf::Field::nodal_scalar(std::vector<double>(n, 1.0));
        CHECK(cf::lumped_inner(one, one, f, c.topology()) ==
              doctest::Approx(cf::perimeter(c)).epsilon(1e-15));
    }
}

TEST_CASE("enclosed area oracles") {
    CHECK(cf::enclosed_area(unit_square()) == doctest::Approx(1.0));
    for (int n : {6, 40})
        CHECK(cf::enclosed_area(regular_ngon(n)) ==
              doctest::Approx(0.5 * n * std::sin(2.0 * M_PI / n)).epsilon(1e-13));

    cf::ShapeSpec semi;
    semi.kind = cf::ShapeSpec::Kind::SemiEllipse;
    semi.a = 1.0;
    semi.b = 1.0;
    const cf::CurveState half = cf::initial_shape(semi, 1000);
    CHECK(std::abs(cf::enclosed_area(half) - M_PI / 2) < 1e-4);

    cf::ShapeSpec rect;
    rect.kind = cf::ShapeSpec::Kind::Rectangle;
    rect.a = 4.0;
    rect.b = 1.0;
    CHECK(std::abs(cf::enclosed_area(cf::initial_shape(rect, 37)) - 4.0) < 1e-12);
}

TEST_CASE("area matches an independent shoelace to 1e-14 relative") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.2, 1.7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<cf::Vec2> nodes;
        const int n = 12;
        for (int j = 0; j < n; ++j) {
            const double phi = 2.0 * M_PI * j / n;
            const double r = u(rng);
            nodes.emplace_back(r * std::cos(phi), r * std::sin(phi));
        }
        const cf::CurveState c(nodes, cf::Topology::Closed);
        const double ref = shoelace(nodes);
        CHECK(std::abs(cf::enclosed_area(c) - ref) <= 1e-14 * std::abs(ref));
    }
}

TEST_CASE("mesh ratio") {
    CHECK(cf::mesh_ratio(regular_ngon(17)) == doctest::Approx(1.0));
    const cf::CurveState c({{0, 0}, {1, 0}, {1, 2}, {0, 2}}, cf::Topology::Closed);
    CHECK(cf::mesh_ratio(c) == doctest::Approx(2.0));
}

TEST_CASE("lumped_inner examples and bilinearity") {
    const cf::CurveState sq = unit_square();
    const cf::SegmentFrame f = cf::segment_frame(sq);

    std::vector<double> hat(4, 0.0);
    hat[1] = 1.0;
    const cf::Field uh = cf::Field::nodal_scalar(hat);
    CHECK(cf::lumped_inner(uh, uh, f, sq.topology()) == doctest::Approx(1.0));

    const cf::Field zero = cf::Field::nodal_scalar(std::vector<double>(4, 0.0));
    CHECK(cf::lumped_inner(uh, zero, f, sq.topology()) == doctest::Approx(0.0));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    auto rand_field = [&] {
        std::vector<double> v(4);
        for (auto& x : v) x = un(rng);
        return v;
    };
    const std::vector<double> a = rand_field(), b = rand_field(), c = rand_field();
    auto ip = [&](const std::vector<double>& u, const std::vector<double>& v) {
        return cf::lumped_inner(cf::Field::nodal_scalar(u),
                                cf::Field::nodal_scalar(v), f, sq.topology());
    };
    CHECK(ip(a, b) == doctest::Approx(ip(b, a)).epsilon(1e-14));
    std::vector<double> combo(4);
    for (int i = 0; i < 4; ++i) combo[i] = 2.0 * a[i] + 3.0 * b[i];
    CHECK(ip(combo, c) ==
          doctest::Approx(2.0 * ip(a, c) + 3.0 * ip(b, c)).epsilon(1e-13));
}

TEST_CASE("lumped_inner with segment fields uses one-sided limits") {
    const cf::CurveState sq = unit_square();
    const cf::SegmentFrame f = cf::segment_frame(sq);
    std::vector<double> seg = {1.0, 2.0, 3.0, 4.0};
    const cf::Field s = cf::Field::segment_scalar(seg);
    const cf::Field one = cf::Field::nodal_scalar(std::vector<double>(4, 1.0));
    CHECK(cf::lumped_inner(s, one, f, sq.topology()) == doctest::Approx(10.0));
    CHECK_THROWS_AS(cf::lumped_inner(cf::Field::nodal_scalar({1.0, 2.0}), one, f,
                                     sq.topology()),
                    cf::DimensionMismatch);
}

TEST_CASE("stiffness pairing examples and PSD with constant kernel") {
    const cf::CurveState sq = unit_square();
    const cf::SegmentFrame f = cf::segment_frame(sq);
    const std::vector<double> c4(4, 3.7);
    std::vector<double> v = {0.0, 1.0, -0.5, 2.0};
    CHECK(cf::stiffness_pairing(c4, v, f, sq.topology()) == doctest::Approx(0.0));

    // Single-segment contribution: du = dv = 1, |h| = 0.5 gives 2; built from
    // a flat open 4-node polyline of 0.5-length segments with a ramp field.
    const cf::CurveState flat({{0, 0}, {0.5, 0.0}, {1.0, 0.0}, {1.5, 0.0}},
                              cf::Topology::OpenOnSubstrate);
    const cf::SegmentFrame ff = cf::segment_frame(flat);
    CHECK(cf::stiffness_pairing({0, 1, 1, 1}, {0, 1, 1, 1}, ff, flat.topology()) ==
          doctest::Approx(2.0));

    // Linear ramp 0..1 over total length L telescopes to 1/L.
    CHECK(cf::stiffness_pairing({0.0, 1.0 / 3, 2.0 / 3, 1.0},
                                {0.0, 1.0 / 3, 2.0 / 3, 1.0}, ff,
                                flat.topology()) == doctest::Approx(1.0 / 1.5));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> un(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> u(4);
        for (auto& x : u) x = un(rng);
        CHECK(cf::stiffness_pairing(u, u, f, sq.topology()) >= 0.0);
    }
}

TEST_CASE("initial shapes") {
    const cf::CurveState e = cf::initial_shape(cf::ShapeSpec{}, 4);
    CHECK(e.node(0).isApprox(cf::Vec2(2, 0), 1e-14));
    CHECK(e.node(1).isApprox(cf::Vec2(0, 1), 1e-14));
    CHECK(e.node(2).isApprox(cf::Vec2(-2, 0), 1e-14));
    CHECK(e.node(3).isApprox(cf::Vec2(0, -1), 1e-14));

    cf::ShapeSpec semi;
    semi.kind = cf::ShapeSpec::Kind::SemiEllipse;
    const cf::CurveState h = cf::initial_shape(semi, 3);
    CHECK(h.node_count() == 4);
    CHECK(h.node(0).y() == 0.0);
    CHECK(h.node(3).y() == 0.0);
    CHECK(h.node(0).x() < h.node(3).x());

    for (int n = 3; n < 40; ++n)
        CHECK(cf::enclosed_area(cf::initial_shape(cf::ShapeSpec{}, n)) > 0.0);

    cf::ShapeSpec bad;
    bad.a = -1.0;
    CHECK_THROWS_AS(cf::initial_shape(bad, 8), cf::BadShapeParams);
}

TEST_CASE("degenerate segments rejected") {
    CHECK_THROWS_AS(cf::CurveState({{0, 0}, {0, 0}, {1, 0}, {1, 1}},
                                   cf::Topology::Closed),
                    cf::DegenerateSegment);
    CHECK_THROWS_AS(cf::CurveState({{0, 1}, {1, 0}, {2, 0}, {3, 0}},
                                   cf::Topology::OpenOnSubstrate),
                    cf::BadShapeParams);
    CHECK_THROWS_AS(cf::CurveState({{3, 0}, {2, 1}, {1, 1}, {0, 0}},
                                   cf::Topology::OpenOnSubstrate),
                    cf::BadShapeParams);
}

TEST_CASE("csv round trip is bit exact") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<cf::Vec2> nodes;
    for (int j = 0; j < 9; ++j) {
        const double phi = 2.0 * M_PI * j / 9;
        nodes.emplace_back((2 + u(rng) * 0.1) * std::cos(phi),
                           (1 + u(rng) * 0.1) * std::sin(phi));
    }
    const cf::CurveState c(nodes, cf::Topology::Closed);
    std::stringstream ss;
    cf::write_curve_csv(ss, c, 0.12345678901234567);
    double t = 0.0;
    const cf::CurveState back = cf::read_curve_csv(ss, &t);
    CHECK(t == 0.12345678901234567);
    CHECK(back.closed());
    REQUIRE(back.node_count() == c.node_count());
    for (int i = 0; i < c.node_count(); ++i) {
        CHECK(back.node(i).x() == c.node(i).x());
        CHECK(back.node(i).y() == c.node(i).y());
    }

    std::stringstream bad("no header\n0,0\n");
    CHECK_THROWS_AS(cf::read_curve_csv(bad), cf::ValidationError);
}

TEST_CASE("format_double round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.7182818284590452, 1e-17, 12345.678901234567}) {
        CHECK(std::stod(cf::format_double(v)) == v);
    }
}
