#include <curveflow/assembly.hpp>

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

namespace curveflow {

LinearSystem::LinearSystem(int dimension)
    : dim_(dimension),
      replaced_(static_cast<size_t>(dimension), 0),
      rhs_(Eigen::VectorXd::Zero(dimension)) {}

void LinearSystem::add(int row, int col, double value) {
    if (replaced_[static_cast<size_t>(row)]) return;
    triplets_.emplace_back(row, col, value);
}

void LinearSystem::set_rhs(int row, double value) {
    if (replaced_[static_cast<size_t>(row)]) return;
    rhs_[row] = value;
}

void LinearSystem::add_rhs(int row, double value) {
    if (replaced_[static_cast<size_t>(row)]) return;
    rhs_[row] += value;
}

void LinearSystem::replace_row(int row, int col, double rhs_value) {
    std::erase_if(triplets_, [row](const Eigen::Triplet<double>& t) {
        return t.row() == row;
    });
    replaced_[static_cast<size_t>(row)] = 1;
    rhs_[row] = rhs_value;
    triplets_.emplace_back(row, col, 1.0);
}

void LinearSystem::finalize() {
    matrix_.resize(dim_, dim_);
    matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
    matrix_.makeCompressed();
    finalized_ = true;
}

const Eigen::SparseMatrix<double>& LinearSystem::matrix() const {
    if (!finalized_) throw Error("LinearSystem::matrix before finalize");
    return matrix_;
}

Eigen::VectorXd solve(LinearSystem& system) {
    system.finalize();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(system.matrix());
    if (lu.info() != Eigen::Success)
        throw SingularMatrix("sparse LU factorization failed");
    Eigen::VectorXd x = lu.solve(system.rhs());
    const double rhs_norm = system.rhs().lpNorm<Eigen::Infinity>();
    // Mixed-precision iterative refinement: the double-precision residual of
    // an ill-conditioned step stagnates at rounding level u * |A| * |x|, so
    // the residual is accumulated in long double.
    const Eigen::SparseMatrix<double>& a = system.matrix();
    auto residual = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd r(v.size());
        std::vector<long double> acc(static_cast<size_t>(v.size()));
        for (Eigen::Index i = 0; i < v.size(); ++i)
            acc[static_cast<size_t>(i)] =
                static_cast<long double>(system.rhs()[i]);
        for (int col = 0; col < a.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it;
                 ++it)
                acc[static_cast<size_t>(it.row())] -=
                    static_cast<long double>(it.value()) *
                    static_cast<long double>(v[col]);
        for (Eigen::Index i = 0; i < v.size(); ++i)
            r[i] = static_cast<double>(acc[static_cast<size_t>(i)]);
        return r;
    };
    double resid = std::numeric_limits<double>::infinity();
    Eigen::VectorXd prev_x = x;
    for (int refine = 0; refine < 10; ++refine) {
        const Eigen::VectorXd r = residual(x);
        const double rn = r.lpNorm<Eigen::Infinity>() / (1.0 + rhs_norm);
        if (rn >= resid) {  // stagnation: the previous iterate was better
            x = prev_x;
            break;
        }
        resid = rn;
        if (resid < 1e-14) break;
        prev_x = x;
        x += lu.solve(r);
    }
    resid = residual(x).lpNorm<Eigen::Infinity>() / (1.0 + rhs_norm);
    if (!(resid < 1e-11))
        throw ResidualTooLarge("solver residual " + format_double(resid));
    return x;
}

TimeStencil bdf1_stencil(const CurveState& prev) {
    return TimeStencil{1.0, prev.nodes()};
}

TimeStencil bdf2_stencil(const CurveState& prev, const CurveState& prev2) {
    if (prev.node_count() != prev2.node_count())
        throw DimensionMismatch("bdf2 stencil: node count mismatch");
    TimeStencil st{1.5, prev.nodes()};
    for (size_t i = 0; i < st.combo.size(); ++i)
        st.combo[i] = 2.0 * prev.nodes()[i] - 0.5 * prev2.nodes()[i];
    return st;
}

namespace {

// Shared body for the closed and open assemblies. K is the node count of
// the unknown curve; segment j joins nodes j and j+1 (mod K when closed).
LinearSystem assemble_body(const CurveState& curve, const SegmentFrame& frame,
                           const std::vector<Vec2>& normals,
                           const TimeStencil& bdf, const SurfaceEnergy& energy,
                           double dt,
                           const SubstrateConfig* substrate) {
    const bool closed = curve.closed();
    const int nseg = curve.segment_count();
    const int k = closed ? nseg : nseg + 1;
    if (static_cast<int>(normals.size()) != nseg)
        throw DimensionMismatch("normal field must have one entry per segment");
    if (static_cast<int>(bdf.combo.size()) != k)
        throw DimensionMismatch("time stencil size mismatch");
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");

    LinearSystem sys(3 * k);
    const auto col_x = [&](int i) { return i; };
    const auto col_y = [&](int i) { return k + i; };
    const auto col_mu = [&](int i) { return 2 * k + i; };
    const auto row_first = [&](int i) { return i; };
    const auto row_x = [&](int i) { return k + i; };
    const auto row_y = [&](int i) { return 2 * k + i; };

    if (substrate) {
        substrate->validate();
        sys.replace_row(row_y(0), col_y(0), 0.0);
        sys.replace_row(row_y(k - 1), col_y(k - 1), 0.0);
    }

    // Lumped weights w_i = 1/2 sum over adjacent segments of |h_j| n_j.
    std::vector<Vec2> w(static_cast<size_t>(k), Vec2::Zero());
    for (int j = 0; j < nseg; ++j) {
        const int a = j;
        const int b = closed ? (j + 1) % k : j + 1;
        const Vec2 contrib = 0.5 * frame.lengths[static_cast<size_t>(j)] *
                             normals[static_cast<size_t>(j)];
        w[static_cast<size_t>(a)] += contrib;
        w[static_cast<size_t>(b)] += contrib;
    }

    // First equation, scaled by dt:
    //   alpha w_i . Xbar_i + dt K(mu) = w_i . combo_i
    for (int i = 0; i < k; ++i) {
        sys.add(row_first(i), col_x(i), bdf.alpha * w[static_cast<size_t>(i)].x());
        sys.add(row_first(i), col_y(i), bdf.alpha * w[static_cast<size_t>(i)].y());
        sys.set_rhs(row_first(i),
                    w[static_cast<size_t>(i)].dot(bdf.combo[static_cast<size_t>(i)]));
    }
    for (int j = 0; j < nseg; ++j) {
        const int a = j;
        const int b = closed ? (j + 1) % k : j + 1;
        const double c = dt / frame.lengths[static_cast<size_t>(j)];
        sys.add(row_first(a), col_mu(a), c);
        sys.add(row_first(a), col_mu(b), -c);
        sys.add(row_first(b), col_mu(b), c);
        sys.add(row_first(b), col_mu(a), -c);
    }

    // Second equation: (mu n, omega)^h - (B(theta) ds X, ds omega)^h [+ bc].
    for (int i = 0; i < k; ++i) {
        sys.add(row_x(i), col_mu(i), w[static_cast<size_t>(i)].x());
        sys.add(row_y(i), col_mu(i), w[static_cast<size_t>(i)].y());
    }
    for (int j = 0; j < nseg; ++j) {
        const int a = j;
        const int b = closed ? (j + 1) % k : j + 1;
        const Mat2 bm = energy.b_matrix(frame.angles[static_cast<size_t>(j)]);
        const double inv_len = 1.0 / frame.lengths[static_cast<size_t>(j)];
        for (int rc = 0; rc < 2; ++rc) {
            const int rb = rc == 0 ? row_x(b) : row_y(b);
            const int ra = rc == 0 ? row_x(a) : row_y(a);
            const double cx = bm(rc, 0) * inv_len;
            const double cy = bm(rc, 1) * inv_len;
            // test at node b: -(1/len) [B (X_b - X_a)]_rc
            sys.add(rb, col_x(b), -cx);
            sys.add(rb, col_y(b), -cy);
            sys.add(rb, col_x(a), cx);
            sys.add(rb, col_y(a), cy);
            // test at node a: +(1/len) [B (X_b - X_a)]_rc
            sys.add(ra, col_x(b), cx);
            sys.add(ra, col_y(b), cy);
            sys.add(ra, col_x(a), -cx);
            sys.add(ra, col_y(a), -cy);
        }
    }

    if (substrate) {
        // Contact-point friction -(1/eta)(alpha xbar - combo_x)/dt and the
        // substrate tension +sigma [omega(1) - omega(0)] in the x rows of
        // the contact nodes. The contact-line condition y = 0 is enforced
        // strongly above.
        const double f = 1.0 / (substrate->eta * dt);
        sys.add(row_x(0), col_x(0), -bdf.alpha * f);
        sys.add_rhs(row_x(0), substrate->sigma - bdf.combo.front().x() * f);
        sys.add(row_x(k - 1), col_x(k - 1), -bdf.alpha * f);
        sys.add_rhs(row_x(k - 1), -substrate->sigma - bdf.combo.back().x() * f);
    }
    return sys;
}

} // namespace

LinearSystem assemble_closed(const CurveState& integration_curve,
                             const SegmentFrame& frame,
                             const std::vector<Vec2>& normals,
                             const TimeStencil& bdf,
                             const SurfaceEnergy& energy, double dt) {
    if (!integration_curve.closed())
        throw DimensionMismatch("assemble_closed on an open curve");
    return assemble_body(integration_curve, frame, normals, bdf, energy, dt,
                         nullptr);
}

LinearSystem assemble_ssd(const CurveState& integration_curve,
                          const SegmentFrame& frame,
                          const std::vector<Vec2>& normals,
                          const TimeStencil& bdf,
                          const SurfaceEnergy& energy, double dt,
                          const SubstrateConfig& substrate) {
    if (integration_curve.closed())
        throw DimensionMismatch("assemble_ssd on a closed curve");
    return assemble_body(integration_curve, frame, normals, bdf, energy, dt,
                         &substrate);
}

SolveResult solve_step(const CurveState& integration_curve,
                       const SegmentFrame& frame,
                       const std::vector<Vec2>& normals,
                       const TimeStencil& bdf, const SurfaceEnergy& energy,
                       double dt,
                       const std::optional<SubstrateConfig>& substrate) {
    LinearSystem sys =
        substrate ? assemble_ssd(integration_curve, frame, normals, bdf, energy,
                                 dt, *substrate)
                  : assemble_closed(integration_curve, frame, normals, bdf,
                                    energy, dt);
    const Eigen::VectorXd x = solve(sys);
    const int k = sys.dimension() / 3;
    std::vector<Vec2> nodes(static_cast<size_t>(k));
    std::vector<double> mu(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        nodes[static_cast<size_t>(i)] = Vec2(x[i], x[k + i]);
        mu[static_cast<size_t>(i)] = x[2 * k + i];
    }
    const double resid =
        (sys.matrix() * x - sys.rhs()).lpNorm<Eigen::Infinity>() /
        (1.0 + sys.rhs().lpNorm<Eigen::Infinity>());
    if (substrate) {
        // The contact rows are strongly enforced; pin them bit-exactly so the
        // open-curve invariant survives repeated factorization round-off.
        nodes.front().y() = 0.0;
        nodes.back().y() = 0.0;
    }
    return SolveResult{integration_curve.with_nodes(std::move(nodes)),
                       std::move(mu), resid, 0};
}

namespace {

// n_j = -(hbar_j + h_j)^perp / (2 |h_j|), reducing to the previous unit
// normal when the candidate equals the previous curve.
std::vector<Vec2> half_step_normals(const CurveState& prev,
                                    const CurveState& candidate) {
    const int nseg = prev.segment_count();
    std::vector<Vec2> normals(static_cast<size_t>(nseg));
    for (int j = 0; j < nseg; ++j) {
        const Vec2 h_prev = prev.segment(j);
        const Vec2 h_cand = candidate.segment(j);
        normals[static_cast<size_t>(j)] =
            -perp(h_prev + h_cand) / (2.0 * h_prev.norm());
    }
    return normals;
}

} // namespace

SolveResult csav_fixed_point(const CurveState& curve_prev,
                             const SurfaceEnergy& energy, double dt,
                             const std::optional<SubstrateConfig>& substrate,
                             double tol_rel, int max_iter) {
    const SegmentFrame frame = segment_frame(curve_prev);
    const TimeStencil bdf = bdf1_stencil(curve_prev);
    const double tol = tol_rel * curve_prev.diameter();

    std::vector<Vec2> normals = frame.normals;
    SolveResult result = solve_step(curve_prev, frame, normals, bdf, energy,
                                    dt, substrate);
    double prev_increment = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= max_iter; ++it) {
        normals = half_step_normals(curve_prev, result.curve);
        SolveResult next = solve_step(curve_prev, frame, normals, bdf, energy,
                                      dt, substrate);
        double increment = 0.0;
        for (int i = 0; i < next.curve.node_count(); ++i)
            increment = std::max(
                increment, (next.curve.node(i) - result.curve.node(i)).norm());
        next.iterations = it;
        result = std::move(next);
        if (increment < tol) return result;
        if (it == max_iter) {
            if (increment > prev_increment)
                throw FixedPointDiverged(
                    "half-step normal iteration diverged after " +
                    std::to_string(max_iter) + " iterations");
            throw FixedPointDiverged(
                "half-step normal iteration did not converge in " +
                std::to_string(max_iter) + " iterations (last increment " +
                std::to_string(increment) + ")");
        }
        prev_increment = increment;
    }
    return result;
}

} // namespace curveflow
