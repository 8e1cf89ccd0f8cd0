#include <curveflow/metrics.hpp>

#include <algorithm>
#include <cmath>

namespace curveflow {

namespace {

double cross(const Vec2& u, const Vec2& v) {
    return u.x() * v.y() - u.y() * v.x();
}

double polygon_scale(const Polygon& poly) {
    double xmin = poly[0].x(), xmax = xmin, ymin = poly[0].y(), ymax = ymin;
    for (const auto& p : poly) {
        xmin = std::min(xmin, p.x()); xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y()); ymax = std::max(ymax, p.y());
    }
    return std::max(xmax - xmin, ymax - ymin);
}

// -1 outside, 0 on boundary (within eps), +1 strictly inside.
int point_location(const Vec2& p, const Polygon& poly, double eps) {
    const size_t n = poly.size();
    bool inside = false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const Vec2 ab = b - a;
        const double len2 = ab.squaredNorm();
        const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        if ((p - (a + t * ab)).norm() <= eps) return 0;
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x_cross = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * ab.x();
            if (x_cross > p.x()) inside = !inside;
        }
    }
    return inside ? 1 : -1;
}

// Green's-theorem contribution of the parts of boundary(a) that lie inside
// region(b). `include_boundary` decides how on-boundary pieces count; the
// two passes over a pair use opposite settings so shared boundary is
// counted exactly once.
double boundary_inside_contribution(const Polygon& a, const Polygon& b,
                                    bool include_boundary, double eps) {
    const size_t na = a.size(), nb = b.size();
    double total = 0.0;
    std::vector<double> cuts;
    for (size_t i = 0; i < na; ++i) {
        const Vec2& p = a[i];
        const Vec2& q = a[(i + 1) % na];
        const Vec2 d = q - p;
        cuts.clear();
        cuts.push_back(0.0);
        cuts.push_back(1.0);
        for (size_t j = 0; j < nb; ++j) {
            const Vec2& r = b[j];
            const Vec2& s = b[(j + 1) % nb];
            const Vec2 e = s - r;
            const double denom = cross(d, e);
            if (denom == 0.0) continue;  // parallel: handled by midpoint tests
            const double t = cross(r - p, e) / denom;
            const double u = cross(r - p, d) / denom;
            if (t > 0.0 && t < 1.0 && u >= 0.0 && u <= 1.0) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        for (size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double t0 = cuts[k], t1 = cuts[k + 1];
            if (t1 - t0 < 1e-15) continue;
            const Vec2 mid = p + 0.5 * (t0 + t1) * d;
            const int loc = point_location(mid, b, eps);
            if (loc == 1 || (loc == 0 && include_boundary)) {
                const Vec2 p0 = p + t0 * d;
                const Vec2 p1 = p + t1 * d;
                total += 0.5 * cross(p0, p1);
            }
        }
    }
    return total;
}

} // namespace

Polygon region_polygon(const CurveState& curve) {
    Polygon poly(curve.nodes().begin(), curve.nodes().end());
    if (curve.closed()) {
        if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    } else {
        // Close along the substrate; reversing the node order makes the
        // implicit y=0 edge the loop closure and orients the region CCW.
        std::reverse(poly.begin(), poly.end());
    }
    return poly;
}

double polygon_area(const Polygon& poly) {
    double s = 0.0;
    for (size_t i = 0; i < poly.size(); ++i)
        s += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * s;
}

bool is_simple_polygon(const Polygon& poly) {
    const size_t n = poly.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        for (size_t j = i + 1; j < n; ++j) {
            // skip adjacent edges (shared vertex)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            const Vec2& r = poly[j];
            const Vec2& s = poly[(j + 1) % n];
            const double d1 = cross(q - p, r - p);
            const double d2 = cross(q - p, s - p);
            const double d3 = cross(s - r, p - r);
            const double d4 = cross(s - r, q - r);
            if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return false;
        }
    }
    return true;
}

double intersection_area(const Polygon& a, const Polygon& b) {
    const double eps =
        1e-12 * std::max(polygon_scale(a), polygon_scale(b));
    return boundary_inside_contribution(a, b, true, eps) +
           boundary_inside_contribution(b, a, false, eps);
}

double rasterized_symmetric_difference(const Polygon& a, const Polygon& b,
                                       int resolution) {
    double ymin = a[0].y(), ymax = ymin;
    for (const auto& p : a) { ymin = std::min(ymin, p.y()); ymax = std::max(ymax, p.y()); }
    for (const auto& p : b) { ymin = std::min(ymin, p.y()); ymax = std::max(ymax, p.y()); }
    const double dy = (ymax - ymin) / resolution;
    if (!(dy > 0.0)) return 0.0;

    auto row_intervals = [](const Polygon& poly, double y) {
        std::vector<double> xs;
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec2& p = poly[i];
            const Vec2& q = poly[(i + 1) % n];
            if ((p.y() > y) != (q.y() > y))
                xs.push_back(p.x() + (y - p.y()) / (q.y() - p.y()) * (q.x() - p.x()));
        }
        std::sort(xs.begin(), xs.end());
        return xs;  // pairs of entry/exit crossings
    };

    auto xor_length = [&](double y) {
        const std::vector<double> xa = row_intervals(a, y);
        const std::vector<double> xb = row_intervals(b, y);
        // XOR length of the two interval unions along this scanline.
        std::vector<std::pair<double, int>> events;
        for (size_t i = 0; i + 1 < xa.size(); i += 2) {
            events.emplace_back(xa[i], +1);
            events.emplace_back(xa[i + 1], -1);
        }
        for (size_t i = 0; i + 1 < xb.size(); i += 2) {
            events.emplace_back(xb[i], +2);
            events.emplace_back(xb[i + 1], -2);
        }
        std::sort(events.begin(), events.end());
        int in_a = 0, in_b = 0;
        double last_x = 0.0, length = 0.0;
        bool have_last = false;
        for (const auto& [x, tag] : events) {
            if (have_last && ((in_a > 0) != (in_b > 0))) length += x - last_x;
            if (tag == +1) ++in_a;
            else if (tag == -1) --in_a;
            else if (tag == +2) ++in_b;
            else --in_b;
            last_x = x;
            have_last = true;
        }
        return length;
    };

    // The XOR length is piecewise linear in y; its kinks sit at vertex heights
    // and at boundary crossings. A strip midpoint sample is exact only away
    // from kinks, so split each strip at those heights before sampling.
    std::vector<double> kinks;
    for (const auto& p : a) kinks.push_back(p.y());
    for (const auto& p : b) kinks.push_back(p.y());
    for (size_t i = 0; i < a.size(); ++i) {
        const Vec2& p = a[i];
        const Vec2& q = a[(i + 1) % a.size()];
        for (size_t j = 0; j < b.size(); ++j) {
            const Vec2& r = b[j];
            const Vec2& s = b[(j + 1) % b.size()];
            const double denom = cross(q - p, s - r);
            if (denom == 0.0) continue;
            const double t = cross(r - p, s - r) / denom;
            const double u = cross(r - p, q - p) / denom;
            if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0)
                kinks.push_back(p.y() + t * (q.y() - p.y()));
        }
    }
    std::sort(kinks.begin(), kinks.end());

    double area = 0.0;
    size_t k = 0;
    for (int row = 0; row < resolution; ++row) {
        const double y0 = ymin + row * dy;
        const double y1 = (row + 1 == resolution) ? ymax : y0 + dy;
        double lo = y0;
        while (k < kinks.size() && kinks[k] < y1) {
            const double split = kinks[k++];
            if (split > lo) {
                area += xor_length(0.5 * (lo + split)) * (split - lo);
                lo = split;
            }
        }
        if (y1 > lo) area += xor_length(0.5 * (lo + y1)) * (y1 - lo);
    }
    return area;
}

ManifoldDistanceResult manifold_distance_checked(const CurveState& g1,
                                                 const CurveState& g2) {
    const Polygon a = region_polygon(g1);
    const Polygon b = region_polygon(g2);
    if (!is_simple_polygon(a) || !is_simple_polygon(b))
        throw SelfIntersecting("manifold_distance: polygon self-intersects");
    const double area_a = polygon_area(a);
    const double area_b = polygon_area(b);
    const double inter = intersection_area(a, b);
    ManifoldDistanceResult result;
    const double slack = 1e-9 * std::max(area_a, area_b);
    if (!std::isfinite(inter) || inter < -slack ||
        inter > std::min(area_a, area_b) + slack) {
        result.used_rasterization = true;
        result.value = rasterized_symmetric_difference(a, b);
        return result;
    }
    result.value = std::max(0.0, area_a + area_b - 2.0 * inter);
    return result;
}

double manifold_distance(const CurveState& g1, const CurveState& g2) {
    return manifold_distance_checked(g1, g2).value;
}

ErrorTable convergence_table(
    const std::function<CurveState(double dt)>& run_to_final,
    const std::vector<double>& dt_list, double final_time,
    std::string scheme_label) {
    if (dt_list.size() < 2)
        throw ValidationError("convergence table needs at least two dt values");
    for (size_t i = 1; i < dt_list.size(); ++i)
        if (std::abs(dt_list[i] - 0.5 * dt_list[i - 1]) > 1e-9 * dt_list[i - 1])
            throw ValidationError("dt list must halve strictly");

    std::vector<CurveState> finals;
    finals.reserve(dt_list.size());
    for (double dt : dt_list) finals.push_back(run_to_final(dt));

    ErrorTable table;
    table.final_time = final_time;
    table.scheme_label = std::move(scheme_label);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 0; i < dt_list.size(); ++i) {
        ErrorTable::Row row{dt_list[i], nan, nan};
        if (i + 1 < dt_list.size())
            row.error = manifold_distance(finals[i], finals[i + 1]);
        table.rows.push_back(row);
    }
    for (size_t i = 1; i + 1 < table.rows.size() + 1; ++i) {
        if (i < table.rows.size() && std::isfinite(table.rows[i].error) &&
            std::isfinite(table.rows[i - 1].error) && table.rows[i].error > 0.0)
            table.rows[i].order =
                std::log2(table.rows[i - 1].error / table.rows[i].error);
    }
    return table;
}

AreaLossSeries area_loss_series(const std::vector<StepDiagnostics>& diags,
                                double initial_area) {
    if (diags.empty()) throw ValidationError("area_loss_series: empty trajectory");
    if (initial_area == 0.0) throw ZeroInitialArea("initial area is zero");
    AreaLossSeries s;
    s.time.reserve(diags.size());
    for (const auto& d : diags) {
        s.time.push_back(d.time);
        s.relative.push_back((d.area - initial_area) / initial_area);
        s.absolute.push_back(std::abs(d.area - initial_area));
    }
    return s;
}

std::vector<double> energy_gap_series(const std::vector<StepDiagnostics>& diags) {
    std::vector<double> gaps;
    gaps.reserve(diags.size());
    for (const auto& d : diags) gaps.push_back(d.energy_gap);
    return gaps;
}

} // namespace curveflow
