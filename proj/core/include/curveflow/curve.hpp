#pragma once

#include <curveflow/errors.hpp>

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

namespace curveflow {

using Vec2 = Eigen::Vector2d;

enum class Topology { Closed, OpenOnSubstrate };

/// Polygonal curve at one time level.
///
/// Closed curves store N nodes (the closing node is implicit; all loops
/// index modulo N, giving N segments). Open curves on the substrate store
/// N+1 nodes with y=0 at both endpoints and x front < x back.
class CurveState {
public:
    CurveState(std::vector<Vec2> nodes, Topology topology);

    Topology topology() const { return topology_; }
    bool closed() const { return topology_ == Topology::Closed; }

    /// Number of segments N.
    int segment_count() const {
        return closed() ? static_cast<int>(nodes_.size())
                        : static_cast<int>(nodes_.size()) - 1;
    }
    int node_count() const { return static_cast<int>(nodes_.size()); }

    const Vec2& node(int i) const { return nodes_[static_cast<size_t>(i)]; }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    /// Segment vector h_j = X_{j+1} - X_j (indices mod N for closed curves).
    Vec2 segment(int j) const;

    double diameter() const;

    /// Rebuild with the same topology from transformed nodes.
    CurveState with_nodes(std::vector<Vec2> nodes) const {
        return CurveState(std::move(nodes), topology_);
    }

private:
    std::vector<Vec2> nodes_;
    Topology topology_;
};

/// Per-segment derived geometry: length, unit tangent/normal, inclination.
///
/// Convention: tau_j = h_j/|h_j|, n_j = -(tau_j)^perp with (a,b)^perp = (-b,a),
/// theta_j = atan2(tau_y, tau_x). For a CCW closed curve n_j points outward.
struct SegmentFrame {
    std::vector<double> lengths;
    std::vector<Vec2> tangents;
    std::vector<Vec2> normals;
    std::vector<double> angles;

    int segment_count() const { return static_cast<int>(lengths.size()); }
    double perimeter() const;
    double min_length() const;
    double max_length() const;
};

/// Counterclockwise rotation by 90 degrees: (a,b) -> (-b,a).
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

SegmentFrame segment_frame(const CurveState& curve);

double perimeter(const CurveState& curve);

/// Signed trapezoid-rule area. Positive for CCW closed curves and for open
/// curves above the substrate traversed left to right (implicitly closed
/// along y=0).
double enclosed_area(const CurveState& curve);

/// max |h_j| / min |h_j|.
double mesh_ratio(const CurveState& curve);

/// Piecewise-linear nodal field (one value per node) or piecewise-constant
/// segment field (one value per segment); scalar components stacked per entry.
struct Field {
    // values[i] is the 2-vector (or [v,0] for scalars) at node/segment i.
    std::vector<Vec2> values;
    bool per_segment = false;

    static Field nodal_scalar(const std::vector<double>& v);
    static Field nodal_vector(const std::vector<Vec2>& v) { return {v, false}; }
    static Field segment_scalar(const std::vector<double>& v);
    static Field segment_vector(const std::vector<Vec2>& v) { return {v, true}; }
};

/// Mass-lumped inner product (u,v)^h over the frame's curve.
/// One-sided limits at nodes take the adjacent segment's value for
/// segment fields.
double lumped_inner(const Field& u, const Field& v, const SegmentFrame& frame,
                    Topology topology);

/// Sum_j (u_j - u_{j-1})(v_j - v_{j-1}) / |h_j| for nodal scalar fields.
double stiffness_pairing(const std::vector<double>& u,
                         const std::vector<double>& v,
                         const SegmentFrame& frame, Topology topology);

struct ShapeSpec {
    enum class Kind { Ellipse, Rectangle, SemiEllipse, Custom };
    Kind kind = Kind::Ellipse;
    double a = 2.0;   // semi-axis / width
    double b = 1.0;   // semi-axis / height
    std::vector<Vec2> custom_nodes;
    Topology custom_topology = Topology::Closed;
};

/// Build an initial curve with N segments.
/// Ellipse: nodes at uniform parameter angles, CCW.
/// SemiEllipse: upper half, endpoints on y=0, left to right.
/// Rectangle: corner nodes mandatory, remaining nodes per edge proportional
/// to edge length.
CurveState initial_shape(const ShapeSpec& spec, int n_segments);

/// Plain-text CSV: header "# topology=... N=... t=..." then "x,y" per node,
/// 17 significant digits (bit-exact round trip).
void write_curve_csv(std::ostream& os, const CurveState& curve, double time);
void write_curve_csv(const std::string& path, const CurveState& curve, double time);
CurveState read_curve_csv(std::istream& is, double* time_out = nullptr);
CurveState read_curve_csv(const std::string& path, double* time_out = nullptr);

/// 17-significant-digit decimal formatting used by all CSV/JSON output.
std::string format_double(double v);

} // namespace curveflow
