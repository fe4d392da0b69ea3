#pragma once
#include "bvrelax/plateau.hpp"
#include "bvrelax/scene.hpp"

namespace bvrelax {

// ---------------------------------------------------------------------------
// AreaBreakdown: regular graph area + per-curve jump-surface areas +
// per-junction Plateau certificates.
// ---------------------------------------------------------------------------

struct AreaBreakdown {
    double regular = 0.0;
    std::vector<std::pair<int, double>> jump_terms;                   // curve id -> surface area
    std::vector<std::pair<int, PlateauCertificate>> junction_terms;   // junction index -> certificate
    double total_lower = 0.0;
    double total_upper = 0.0;

    [[nodiscard]] double jump_total() const {
        double s = 0.0;
        for (const auto& [id, v] : jump_terms) s += v;
        return s;
    }
    [[nodiscard]] double junction_lower_total() const {
        double s = 0.0;
        for (const auto& [id, c] : junction_terms) s += c.lower;
        return s;
    }
    [[nodiscard]] double junction_upper_total() const {
        double s = 0.0;
        for (const auto& [id, c] : junction_terms) s += c.upper;
        return s;
    }

    void finalize() {
        total_lower = regular + jump_total() + junction_lower_total();
        total_upper = regular + jump_total() + junction_upper_total();
    }
};

// ---------------------------------------------------------------------------
// Regular term: ∫ sqrt(1 + |∇u|^2 + (det ∇u)^2) per region, closed form for
// constant and affine restrictions.
// ---------------------------------------------------------------------------

namespace detail {

inline double graph_area_integrand(const RegionMapSpec& map, Point2 x) {
    const double h = 1e-6;
    const Point2 dx = (map.eval({x.x + h, x.y}) - map.eval({x.x - h, x.y})) / (2 * h);
    const Point2 dy = (map.eval({x.x, x.y + h}) - map.eval({x.x, x.y - h})) / (2 * h);
    const double jac = dx.x * dy.y - dy.x * dx.y;
    return std::sqrt(1.0 + norm2(dx) + norm2(dy) + jac * jac);
}

} // namespace detail

inline double regular_area_term(const PiecewiseMapScene& scene, double tol) {
    double total_area = 0.0;
    for (const auto& [region, map] : scene.regions) total_area += region.area();
    double sum = 0.0;
    for (const auto& [region, map] : scene.regions) {
        if (map.is_constant()) {
            sum += region.area();
            continue;
        }
        if (map.is_affine()) {
            const AffineMap& a = std::get<AffineMap>(map.map);
            const double det = a.determinant();
            sum += region.area() * std::sqrt(1.0 + a.frobenius2() + det * det);
            continue;
        }
        const double share = std::max(1e-3, region.area() / std::max(total_area, 1e-300));
        sum += detail::integrate_region_mapaware(
            region, map, [&](Point2 x) { return detail::graph_area_integrand(map, x); }, tol * share);
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Jump term: area of the ruled surface (t, s u⁺(t) + (1-s) u⁻(t)).
// ---------------------------------------------------------------------------

// with d = u⁺ - u⁻ and m_s = s u̇⁺ + (1-s) u̇⁻ the semicartesian area element
// is sqrt(|d|^2 + (m_s ∧ d)^2)
inline double jump_surface_integrand(const JumpCurve& curve, double t, double s) {
    const Point2 d = curve.trace_plus.eval(t) - curve.trace_minus.eval(t);
    const Point2 dp = curve.trace_plus.deriv(t, curve.param_begin(), curve.param_end());
    const Point2 dm = curve.trace_minus.deriv(t, curve.param_begin(), curve.param_end());
    const Point2 ms = s * dp + (1.0 - s) * dm;
    const double wedge = cross(ms, d);
    return std::sqrt(norm2(d) + wedge * wedge);
}

// The traces are taken in arc length of the source curve, so the same formula
// serves straight and curved jumps.
inline double jump_surface_area(const JumpCurve& curve, double tol) {
    return integrate_rect([&](double t, double s) { return jump_surface_integrand(curve, t, s); },
                          curve.param_begin(), curve.param_end(), 0.0, 1.0, tol);
}

// ---------------------------------------------------------------------------
// Full decomposition
// ---------------------------------------------------------------------------

namespace detail {

inline double junction_ball_radius(const PiecewiseMapScene& scene, std::size_t junction_index) {
    const Junction& j = scene.junctions[junction_index];
    double r = domain_boundary_distance(scene.domain, j.point);
    for (std::size_t i = 0; i < scene.junctions.size(); ++i)
        if (i != junction_index) r = std::min(r, dist(scene.junctions[i].point, j.point));
    for (const JumpCurve& c : scene.jump_curves) {
        const bool incident = dist(c.alpha.start(), j.point) <= 1e-7 || dist(c.alpha.end(), j.point) <= 1e-7;
        if (incident)
            r = std::min(r, c.alpha.length);
        else
            r = std::min(r, distance_to_curve(c.alpha, j.point));
    }
    return 0.4 * r;
}

} // namespace detail

inline AreaBreakdown relaxed_area_bv(const PiecewiseMapScene& scene, double tol = 1e-6,
                                     const PlateauOptions& popts = {}) {
    const auto report = validate_network(scene);
    if (!report.pass) {
        std::string msg = "relaxed_area_bv: invalid scene:";
        for (const auto& v : report.violations) msg += " [" + v + "]";
        throw InvalidSceneError(msg);
    }
    AreaBreakdown out;
    out.regular = regular_area_term(scene, tol);
    const double curve_tol = scene.jump_curves.empty() ? tol : tol / double(scene.jump_curves.size());
    for (const JumpCurve& c : scene.jump_curves)
        out.jump_terms.emplace_back(c.id, jump_surface_area(c, curve_tol));
    for (std::size_t i = 0; i < scene.junctions.size(); ++i) {
        const double rho = detail::junction_ball_radius(scene, i);
        const auto trace = junction_trace(scene, i, rho);
        out.junction_terms.emplace_back(int(i), plateau_relaxed(trace.limit, popts));
    }
    out.finalize();
    return out;
}

// ---------------------------------------------------------------------------
// n-uple point specialization: relaxed area = pi r^2 + r L(γ) + P̄(γ)
// ---------------------------------------------------------------------------

// L(γ) = Σ |α_{i+1} - α_i| over the cyclic value sequence
inline double gamma_polygon_length(const StepCircleMap& gamma) { return gamma.total_variation(); }

inline AreaBreakdown n_uple_point_area(const StepCircleMap& gamma, double r, const PlateauOptions& popts = {}) {
    if (r <= 0) throw Error("n_uple_point_area: radius must be positive");
    AreaBreakdown out;
    out.regular = pi * r * r;
    out.jump_terms.emplace_back(0, r * gamma_polygon_length(gamma));
    out.junction_terms.emplace_back(0, plateau_relaxed(gamma, popts));
    out.finalize();
    return out;
}

// Relaxed Jacobian total variation of the homogeneous map γ(x/|x|) on B_r:
// equal to P̄(γ) and independent of r.
inline PlateauCertificate relaxed_tvj(const StepCircleMap& gamma, double r, const PlateauOptions& popts = {}) {
    if (r <= 0) throw Error("relaxed_tvj: radius must be positive");
    (void)r; // the relaxation does not depend on the radius
    return plateau_relaxed(gamma, popts);
}

// ---------------------------------------------------------------------------
// Infinite triple point example, finite truncations.
//
// Equilateral triangle with apex at the origin and unit vertical base on the
// circle; each generation splits the inner triangle by the vertical segment
// through the midpoints of the oblique sides.  Horizontal bands alternate
// between the values b and c, the disk complement carries a.  A level-N
// truncation subdivides generations 0..N, leaving N+1 interior vertical jumps
// and (per side) N+1 triple points.
// ---------------------------------------------------------------------------

struct InfiniteTripleReport {
    int levels = 0;
    double tv_partial_sum = 0.0;  // total variation of the truncated map
    double tv_limit = 0.0;        // 7/3 |b-a| + 2/3 |a-c| + |b-c|
    double tvj_lower_bound = 0.0; // levels * |T_abc|
    double l1_upper_bound = 0.0;  // pi + 23/6 |b-a| + 13/6 |a-c|
    double triangle_area = 0.0;
};

namespace detail {

inline Point2 infinite_triple_apex_vertex(int i, int sign) {
    // A_i (sign +1) / B_i (sign -1): on the oblique sides, |O A_i| = 2^{-i}
    const double s = std::ldexp(1.0, -i);
    return {-s * std::sqrt(3.0) / 2.0, sign * s * 0.5};
}

} // namespace detail

inline PiecewiseMapScene make_infinite_triple_scene(Point2 a, Point2 b, Point2 c, int levels) {
    if (levels < 0) throw Error("make_infinite_triple_scene: levels must be >= 0");
    const int m = levels + 1; // interior verticals A_1 B_1 ... A_m B_m
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::disk({0, 0}, 1.0);

    const auto A = [](int i) { return detail::infinite_triple_apex_vertex(i, +1); };
    const auto B = [](int i) { return detail::infinite_triple_apex_vertex(i, -1); };
    const auto band_value = [&](int i) { return (i % 2 == 0) ? b : c; };

    // disk complement of the triangle: a pinched region; two polygonal pieces
    // (left circular segment and the big right part) both carrying `a`
    {
        std::vector<Point2> left = {A(0)};
        const int arcs = 24;
        for (int k = 1; k < arcs; ++k)
            left.push_back(unit_dir(5.0 * pi / 6.0 + (pi / 3.0) * k / arcs));
        left.push_back(B(0));
        scene.regions.emplace_back(RegionSpec::polygon(std::move(left)), RegionMapSpec::constant(a));

        std::vector<Point2> right = {A(0), {0, 0}, B(0)};
        const int arcb = 96;
        for (int k = 1; k < arcb; ++k)
            right.push_back(unit_dir(7.0 * pi / 6.0 + (5.0 * pi / 3.0) * k / arcb));
        scene.regions.emplace_back(RegionSpec::polygon(std::move(right)), RegionMapSpec::constant(a));
    }
    for (int i = 0; i < m; ++i)
        scene.regions.emplace_back(RegionSpec::polygon({A(i), B(i), B(i + 1), A(i + 1)}),
                                   RegionMapSpec::constant(band_value(i)));
    scene.regions.emplace_back(RegionSpec::polygon({A(m), B(m), {0, 0}}), RegionMapSpec::constant(band_value(m)));

    int id = 0;
    const auto add_curve = [&](SourceCurve alpha, Point2 plus_value, Point2 minus_value) {
        JumpCurve jc;
        jc.id = id++;
        jc.alpha = std::move(alpha);
        jc.trace_plus.value = [plus_value](double) { return plus_value; };
        jc.trace_plus.derivative = [](double) { return Point2{0, 0}; };
        jc.trace_minus.value = [minus_value](double) { return minus_value; };
        jc.trace_minus.derivative = [](double) { return Point2{0, 0}; };
        scene.jump_curves.push_back(std::move(jc));
    };

    // outer boundary of band 0 between the first pair of triple points; the
    // corners A_0, B_0 are curve-interior points, not junctions, so the
    // first oblique pieces and the base form one polyline
    add_curve(SourceCurve::polyline({A(1), A(0), B(0), B(1)}), band_value(0), a);
    // interior verticals A_i B_i: rotated tangent points into band i
    for (int i = 1; i <= m; ++i)
        add_curve(SourceCurve::segment(A(i), B(i)), band_value(i), band_value(i - 1));
    // oblique pieces between consecutive triple points
    for (int i = 1; i < m; ++i) {
        add_curve(SourceCurve::segment(A(i), A(i + 1)), a, band_value(i));
        add_curve(SourceCurve::segment(B(i), B(i + 1)), band_value(i), a);
    }
    // the inner triangle's oblique sides form one polyline through the apex
    add_curve(SourceCurve::polyline({A(m), {0, 0}, B(m)}), a, band_value(m));

    for (int i = 1; i <= m; ++i) {
        Junction up;
        up.point = A(i);
        up.start_angle = 5.0 * pi / 6.0;
        up.sector_angles = {two_pi / 3.0, pi / 3.0, pi};
        up.sector_values = {band_value(i - 1), band_value(i), a};
        scene.junctions.push_back(std::move(up));

        Junction down;
        down.point = B(i);
        down.start_angle = pi / 6.0;
        down.sector_angles = {pi / 3.0, two_pi / 3.0, pi};
        down.sector_values = {band_value(i), band_value(i - 1), a};
        scene.junctions.push_back(std::move(down));
    }
    return scene;
}

inline InfiniteTripleReport infinite_triple_point_report(Point2 a, Point2 b, Point2 c, int levels) {
    if (levels < 1) throw Error("infinite_triple_point_report: levels must be >= 1");
    const double ba = dist(b, a), ca = dist(c, a), bc = dist(b, c);
    InfiniteTripleReport rep;
    rep.levels = levels;
    rep.triangle_area = 0.5 * std::abs(cross(b - a, c - a));
    rep.tv_limit = 7.0 / 3.0 * ba + 2.0 / 3.0 * ca + bc;
    rep.tvj_lower_bound = double(levels) * rep.triangle_area;
    rep.l1_upper_bound = pi + 23.0 / 6.0 * ba + 13.0 / 6.0 * ca;

    // geometric series for the truncated map (m = levels + 1 verticals)
    const int m = levels + 1;
    double tv = ba;                              // base jump, length 1
    tv += (1.0 - std::ldexp(1.0, -m)) * bc;      // verticals Σ_{i=1..m} 2^{-i}
    for (int i = 0; i < m; ++i)                  // oblique bands, both sides
        tv += 2.0 * std::ldexp(1.0, -(i + 1)) * ((i % 2 == 0) ? ba : ca);
    tv += 2.0 * std::ldexp(1.0, -m) * ((m % 2 == 0) ? ba : ca); // inner triangle sides
    rep.tv_partial_sum = tv;
    return rep;
}

} // namespace bvrelax
