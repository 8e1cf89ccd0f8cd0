#include <curveflow/curve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace curveflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CurveState::CurveState(std::vector<Vec2> nodes, Topology topology)
    : nodes_(std::move(nodes)), topology_(topology) {
    const int n = segment_count();
    if (n < 3)
        throw BadShapeParams("curve needs at least 3 segments, got " +
                             std::to_string(n));
    if (topology_ == Topology::OpenOnSubstrate) {
        if (nodes_.front().y() != 0.0 || nodes_.back().y() != 0.0)
            throw BadShapeParams("open curve endpoints must lie on y=0");
        if (!(nodes_.front().x() < nodes_.back().x()))
            throw BadShapeParams("open curve must run left to right");
    }
    double total = 0.0, hmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double l = segment(j).norm();
        total += l;
        hmin = std::min(hmin, l);
    }
    if (!(hmin > 1e-14 * total))
        throw DegenerateSegment("segment length below 1e-14 x perimeter");
}

Vec2 CurveState::segment(int j) const {
    const int n = node_count();
    const int next = closed() ? (j + 1) % n : j + 1;
    return nodes_[static_cast<size_t>(next)] - nodes_[static_cast<size_t>(j)];
}

double CurveState::diameter() const {
    double xmin = nodes_[0].x(), xmax = xmin, ymin = nodes_[0].y(), ymax = ymin;
    for (const auto& p : nodes_) {
        xmin = std::min(xmin, p.x()); xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y()); ymax = std::max(ymax, p.y());
    }
    return std::hypot(xmax - xmin, ymax - ymin);
}

double SegmentFrame::perimeter() const {
    double s = 0.0;
    for (double l : lengths) s += l;
    return s;
}
double SegmentFrame::min_length() const {
    return *std::min_element(lengths.begin(), lengths.end());
}
double SegmentFrame::max_length() const {
    return *std::max_element(lengths.begin(), lengths.end());
}

SegmentFrame segment_frame(const CurveState& curve) {
    const int n = curve.segment_count();
    SegmentFrame f;
    f.lengths.resize(static_cast<size_t>(n));
    f.tangents.resize(static_cast<size_t>(n));
    f.normals.resize(static_cast<size_t>(n));
    f.angles.resize(static_cast<size_t>(n));
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const Vec2 h = curve.segment(j);
        f.lengths[static_cast<size_t>(j)] = h.norm();
        total += h.norm();
    }
    for (int j = 0; j < n; ++j) {
        const double l = f.lengths[static_cast<size_t>(j)];
        if (!(l >= 1e-14 * total))
            throw DegenerateSegment("segment " + std::to_string(j) +
                                    " shorter than 1e-14 x perimeter");
        const Vec2 tau = curve.segment(j) / l;
        f.tangents[static_cast<size_t>(j)] = tau;
        f.normals[static_cast<size_t>(j)] = -perp(tau);
        f.angles[static_cast<size_t>(j)] = std::atan2(tau.y(), tau.x());
    }
    return f;
}

double perimeter(const CurveState& curve) {
    double s = 0.0;
    for (int j = 0; j < curve.segment_count(); ++j) s += curve.segment(j).norm();
    return s;
}

double enclosed_area(const CurveState& curve) {
    // Trapezoid sum 1/2 sum (x_j - x_{j-1})(y_{j-1} + y_j) equals the
    // integral of y dx along the traversal; for closed CCW curves that is
    // minus the area, so the closed case carries the opposite sign.
    const int n = curve.node_count();
    double s = 0.0;
    const int nseg = curve.segment_count();
    for (int j = 0; j < nseg; ++j) {
        const Vec2& p = curve.node(j);
        const Vec2& q = curve.node(curve.closed() ? (j + 1) % n : j + 1);
        s += (q.x() - p.x()) * (p.y() + q.y());
    }
    return curve.closed() ? -0.5 * s : 0.5 * s;
}

double mesh_ratio(const CurveState& curve) {
    const SegmentFrame f = segment_frame(curve);
    return f.max_length() / f.min_length();
}

Field Field::nodal_scalar(const std::vector<double>& v) {
    Field f;
    f.per_segment = false;
    f.values.reserve(v.size());
    for (double x : v) f.values.emplace_back(x, 0.0);
    return f;
}

Field Field::segment_scalar(const std::vector<double>& v) {
    Field f = nodal_scalar(v);
    f.per_segment = true;
    return f;
}

namespace {

// Value of a field at the one-sided limit inside segment j at its start (+)
// or end (-) node.
Vec2 limit_value(const Field& u, int seg, bool at_end, int n_nodes, bool closed) {
    if (u.per_segment) return u.values[static_cast<size_t>(seg)];
    int node = at_end ? seg + 1 : seg;
    if (closed) node %= n_nodes;
    return u.values[static_cast<size_t>(node)];
}

} // namespace

double lumped_inner(const Field& u, const Field& v, const SegmentFrame& frame,
                    Topology topology) {
    const int n = frame.segment_count();
    const bool closed = topology == Topology::Closed;
    const int n_nodes = closed ? n : n + 1;
    auto check = [&](const Field& f, const char* name) {
        const size_t expect = f.per_segment ? static_cast<size_t>(n)
                                            : static_cast<size_t>(n_nodes);
        if (f.values.size() != expect)
            throw DimensionMismatch(std::string(name) + " field has " +
                                    std::to_string(f.values.size()) +
                                    " entries, expected " + std::to_string(expect));
    };
    check(u, "u");
    check(v, "v");

    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double uv_end = limit_value(u, j, true, n_nodes, closed)
                                  .dot(limit_value(v, j, true, n_nodes, closed));
        const double uv_start = limit_value(u, j, false, n_nodes, closed)
                                    .dot(limit_value(v, j, false, n_nodes, closed));
        s += 0.5 * frame.lengths[static_cast<size_t>(j)] * (uv_end + uv_start);
    }
    return s;
}

double stiffness_pairing(const std::vector<double>& u,
                         const std::vector<double>& v,
                         const SegmentFrame& frame, Topology topology) {
    const int n = frame.segment_count();
    const bool closed = topology == Topology::Closed;
    const size_t n_nodes = static_cast<size_t>(closed ? n : n + 1);
    if (u.size() != n_nodes || v.size() != n_nodes)
        throw DimensionMismatch("stiffness_pairing: nodal field size mismatch");
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const size_t a = static_cast<size_t>(j);
        const size_t b = closed ? static_cast<size_t>((j + 1) % n)
                                : static_cast<size_t>(j + 1);
        s += (u[b] - u[a]) * (v[b] - v[a]) / frame.lengths[a];
    }
    return s;
}

namespace {

CurveState make_ellipse(double a, double b, int n) {
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double phi = 2.0 * M_PI * j / n;
        nodes.emplace_back(a * std::cos(phi), b * std::sin(phi));
    }
    return CurveState(std::move(nodes), Topology::Closed);
}

CurveState make_semi_ellipse(double a, double b, int n) {
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<size_t>(n + 1));
    for (int j = 0; j <= n; ++j) {
        const double phi = M_PI * (1.0 - static_cast<double>(j) / n);
        double y = b * std::sin(phi);
        if (j == 0 || j == n) y = 0.0;  // pin endpoints exactly
        nodes.emplace_back(a * std::cos(phi), y);
    }
    return CurveState(std::move(nodes), Topology::OpenOnSubstrate);
}

CurveState make_rectangle(double w, double h, int n) {
    if (n < 4) throw BadShapeParams("rectangle needs at least 4 segments");
    // CCW corners, centered at the origin.
    const Vec2 corners[4] = {Vec2(w / 2, -h / 2), Vec2(w / 2, h / 2),
                             Vec2(-w / 2, h / 2), Vec2(-w / 2, -h / 2)};
    const double edge_len[4] = {h, w, h, w};
    const double per = 2 * (w + h);
    // Distribute the N segments over the four edges proportionally to edge
    // length; each edge keeps at least one segment so corners survive.
    int seg[4];
    int assigned = 0;
    for (int e = 0; e < 4; ++e) {
        seg[e] = std::max(1, static_cast<int>(std::floor(n * edge_len[e] / per)));
        assigned += seg[e];
    }
    // Fix up rounding by adjusting the longest edges first.
    while (assigned < n) {
        int best = 0;
        double worst = -1.0;
        for (int e = 0; e < 4; ++e) {
            const double density = edge_len[e] / seg[e];
            if (density > worst) { worst = density; best = e; }
        }
        ++seg[best];
        ++assigned;
    }
    while (assigned > n) {
        int best = -1;
        double least = std::numeric_limits<double>::infinity();
        for (int e = 0; e < 4; ++e) {
            if (seg[e] <= 1) continue;
            const double density = edge_len[e] / seg[e];
            if (density < least) { least = density; best = e; }
        }
        if (best < 0) throw BadShapeParams("too few segments for rectangle");
        --seg[best];
        --assigned;
    }
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<size_t>(n));
    // Start from the corner before edge 0 (bottom-right), walk CCW.
    for (int e = 0; e < 4; ++e) {
        const Vec2 from = corners[e];
        const Vec2 to = corners[(e + 1) % 4];
        for (int k = 0; k < seg[e]; ++k)
            nodes.emplace_back(from + (to - from) * (static_cast<double>(k) / seg[e]));
    }
    return CurveState(std::move(nodes), Topology::Closed);
}

} // namespace

CurveState initial_shape(const ShapeSpec& spec, int n_segments) {
    if (spec.kind != ShapeSpec::Kind::Custom && (spec.a <= 0.0 || spec.b <= 0.0))
        throw BadShapeParams("shape dimensions must be positive");
    switch (spec.kind) {
        case ShapeSpec::Kind::Ellipse:
            return make_ellipse(spec.a, spec.b, n_segments);
        case ShapeSpec::Kind::SemiEllipse:
            return make_semi_ellipse(spec.a, spec.b, n_segments);
        case ShapeSpec::Kind::Rectangle:
            return make_rectangle(spec.a, spec.b, n_segments);
        case ShapeSpec::Kind::Custom:
            return CurveState(spec.custom_nodes, spec.custom_topology);
    }
    throw BadShapeParams("unknown shape kind");
}

void write_curve_csv(std::ostream& os, const CurveState& curve, double time) {
    os << "# topology=" << (curve.closed() ? "closed" : "open")
       << " N=" << curve.segment_count() << " t=" << format_double(time) << "\n";
    for (const auto& p : curve.nodes())
        os << format_double(p.x()) << "," << format_double(p.y()) << "\n";
}

void write_curve_csv(const std::string& path, const CurveState& curve, double time) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_curve_csv(os, curve, time);
}

CurveState read_curve_csv(std::istream& is, double* time_out) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# topology=", 0) != 0)
        throw ValidationError("curve csv: missing header line");
    Topology topo = header.find("topology=open") != std::string::npos
                        ? Topology::OpenOnSubstrate
                        : Topology::Closed;
    if (time_out) {
        const auto pos = header.find("t=");
        *time_out = pos == std::string::npos ? 0.0
                                             : std::strtod(header.c_str() + pos + 2, nullptr);
    }
    std::vector<Vec2> nodes;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError("curve csv: bad node line '" + line + "'");
        nodes.emplace_back(std::strtod(line.c_str(), nullptr),
                           std::strtod(line.c_str() + comma + 1, nullptr));
    }
    return CurveState(std::move(nodes), topo);
}

CurveState read_curve_csv(const std::string& path, double* time_out) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_curve_csv(is, time_out);
}

} // namespace curveflow
