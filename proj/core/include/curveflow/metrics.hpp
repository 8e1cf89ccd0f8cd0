#pragma once

#include <curveflow/curve.hpp>
#include <curveflow/stepper.hpp>

#include <functional>
#include <string>
#include <vector>

namespace curveflow {

/// Closed polygon as a plain CCW vertex loop (metrics-internal form).
using Polygon = std::vector<Vec2>;

/// Region enclosed by a curve; open curves are closed along the substrate.
Polygon region_polygon(const CurveState& curve);

bool is_simple_polygon(const Polygon& poly);

double polygon_area(const Polygon& poly);

/// Area of the intersection of two simple polygons, by exact clipping of
/// the boundary segments (Green's theorem over the pieces of each boundary
/// inside the other region).
double intersection_area(const Polygon& a, const Polygon& b);

/// Scanline rasterization of the symmetric difference area.
double rasterized_symmetric_difference(const Polygon& a, const Polygon& b,
                                       int resolution = 4096);

struct ManifoldDistanceResult {
    double value = 0.0;
    bool used_rasterization = false;  // clipping failed, fell back
};

/// M(G1, G2) = |A1| + |A2| - 2 |A1 n A2|.
ManifoldDistanceResult manifold_distance_checked(const CurveState& g1,
                                                 const CurveState& g2);
double manifold_distance(const CurveState& g1, const CurveState& g2);

struct ErrorTable {
    struct Row {
        double dt;
        double error;   // e_dt = M(final(dt), final(dt/2)); NaN for last row
        double order;   // log2(e_{2dt}/e_dt); NaN for the first rows
    };
    std::vector<Row> rows;
    double final_time = 0.0;
    std::string scheme_label;
};

/// Runs the configured flow to time T once per dt and compares consecutive
/// final curves. dt_list must halve strictly.
ErrorTable convergence_table(
    const std::function<CurveState(double dt)>& run_to_final,
    const std::vector<double>& dt_list, double final_time,
    std::string scheme_label);

struct AreaLossSeries {
    std::vector<double> time;
    std::vector<double> relative;  // (A^m - A^0)/A^0
    std::vector<double> absolute;  // |A^m - A^0|
};

AreaLossSeries area_loss_series(const std::vector<StepDiagnostics>& diags,
                                double initial_area);

/// |R^m - W^h(X^m)| per step.
std::vector<double> energy_gap_series(const std::vector<StepDiagnostics>& diags);

} // namespace curveflow
