#pragma once
#include <functional>
#include <optional>

#include "bvrelax/geometry.hpp"
#include "bvrelax/quadrature.hpp"

namespace bvrelax {

struct BallTooLargeError : Error { using Error::Error; };
struct InvalidSceneError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Region maps: the restriction of u to one partition region.
// ---------------------------------------------------------------------------

struct ConstantMap {
    Point2 value;
};

struct AffineMap {
    // u(x) = A x + b
    std::array<double, 4> a{1, 0, 0, 1}; // row major
    Point2 b;

    [[nodiscard]] Point2 apply(Point2 x) const {
        return {a[0] * x.x + a[1] * x.y + b.x, a[2] * x.x + a[3] * x.y + b.y};
    }
    [[nodiscard]] double frobenius2() const { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3]; }
    [[nodiscard]] double determinant() const { return a[0] * a[3] - a[1] * a[2]; }
};

struct RadialAngularMap {
    // u(x) = profile(angle(x - center)); 0-homogeneous around `center`
    Point2 center;
    SampledCircleMap profile;
};

struct CallableMap {
    std::function<Point2(Point2)> handle;
};

struct RegionMapSpec {
    std::variant<ConstantMap, AffineMap, RadialAngularMap, CallableMap> map;

    RegionMapSpec() : map(ConstantMap{}) {}
    RegionMapSpec(ConstantMap m) : map(m) {}
    RegionMapSpec(AffineMap m) : map(m) {}
    RegionMapSpec(RadialAngularMap m) : map(std::move(m)) {}
    RegionMapSpec(CallableMap m) : map(std::move(m)) {}

    static RegionMapSpec constant(Point2 c) { return RegionMapSpec(ConstantMap{c}); }
    static RegionMapSpec affine(std::array<double, 4> a, Point2 b) { return RegionMapSpec(AffineMap{a, b}); }
    static RegionMapSpec callable(std::function<Point2(Point2)> f) { return RegionMapSpec(CallableMap{std::move(f)}); }

    [[nodiscard]] Point2 eval(Point2 x) const {
        if (const auto* c = std::get_if<ConstantMap>(&map)) return c->value;
        if (const auto* a = std::get_if<AffineMap>(&map)) return a->apply(x);
        if (const auto* r = std::get_if<RadialAngularMap>(&map)) {
            const Point2 rel = x - r->center;
            if (norm(rel) < 1e-300) return r->profile.eval(0.0);
            return r->profile.eval(angle_of(rel));
        }
        return std::get<CallableMap>(map).handle(x);
    }

    [[nodiscard]] bool is_constant() const { return std::holds_alternative<ConstantMap>(map); }
    [[nodiscard]] bool is_affine() const { return std::holds_alternative<AffineMap>(map); }
};

// ---------------------------------------------------------------------------
// Jump curves: arc-length parametrized source curve with two trace curves.
// ---------------------------------------------------------------------------

struct SegmentCurve {
    Point2 from, to;
};

struct ArcCurve {
    Point2 center;
    double radius = 1.0;
    double angle_start = 0.0;
    int direction = +1; // +1 counterclockwise, -1 clockwise
};

struct PolylineCurve {
    std::vector<Point2> points;
};

// arc-length parametrized source curve alpha: [0, length] -> Omega
struct SourceCurve {
    std::variant<SegmentCurve, ArcCurve, PolylineCurve> shape;
    double length = 0.0;

    static SourceCurve segment(Point2 from, Point2 to) {
        SourceCurve c;
        c.shape = SegmentCurve{from, to};
        c.length = dist(from, to);
        return c;
    }
    static SourceCurve arc(Point2 center, double radius, double angle_start, double sweep) {
        SourceCurve c;
        c.shape = ArcCurve{center, radius, angle_start, sweep >= 0 ? +1 : -1};
        c.length = radius * std::abs(sweep);
        return c;
    }
    static SourceCurve polyline(std::vector<Point2> pts) {
        SourceCurve c;
        double L = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) L += dist(pts[i], pts[i + 1]);
        c.shape = PolylineCurve{std::move(pts)};
        c.length = L;
        return c;
    }

    [[nodiscard]] Point2 eval(double t) const {
        t = std::clamp(t, 0.0, length);
        if (const auto* s = std::get_if<SegmentCurve>(&shape)) {
            const double L = dist(s->from, s->to);
            return L > 0 ? s->from + (t / L) * (s->to - s->from) : s->from;
        }
        if (const auto* a = std::get_if<ArcCurve>(&shape)) {
            const double phi = a->angle_start + a->direction * t / a->radius;
            return a->center + a->radius * unit_dir(phi);
        }
        const auto& p = std::get<PolylineCurve>(shape).points;
        double s = t;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const double e = dist(p[i], p[i + 1]);
            if (s <= e || i + 2 == p.size()) {
                const double u = e > 0 ? std::clamp(s / e, 0.0, 1.0) : 0.0;
                return p[i] + u * (p[i + 1] - p[i]);
            }
            s -= e;
        }
        return p.empty() ? Point2{} : p.back();
    }

    // unit tangent (one-sided at polyline corners)
    [[nodiscard]] Point2 tangent(double t) const {
        const double h = std::max(1e-7, length * 1e-9);
        const Point2 d = eval(std::min(t + h, length)) - eval(std::max(t - h, 0.0));
        const double n = norm(d);
        return n > 0 ? d / n : Point2{1, 0};
    }

    [[nodiscard]] Point2 start() const { return eval(0.0); }
    [[nodiscard]] Point2 end() const { return eval(length); }
};

// a trace curve t -> u±(alpha(t)) with an optional analytic derivative
struct TraceCurve {
    std::function<Point2(double)> value;
    std::function<Point2(double)> derivative; // empty: central differences

    [[nodiscard]] Point2 eval(double t) const { return value(t); }
    [[nodiscard]] Point2 deriv(double t, double lo, double hi) const {
        if (derivative) return derivative(t);
        const double h = 1e-6;
        const double a = std::max(lo, t - h), b = std::min(hi, t + h);
        return (value(b) - value(a)) / (b - a);
    }
};

struct JumpCurve {
    int id = 0;
    SourceCurve alpha;       // |α̇| = 1, params [0, alpha.length]
    TraceCurve trace_plus;   // side pointed to by the rotated tangent α̇⊥
    TraceCurve trace_minus;
    int plus_region = -1;    // indices into Scene::regions, -1 when free-standing
    int minus_region = -1;

    [[nodiscard]] double param_begin() const { return 0.0; }
    [[nodiscard]] double param_end() const { return alpha.length; }
};

// ---------------------------------------------------------------------------
// Junctions and scenes
// ---------------------------------------------------------------------------

struct Junction {
    Point2 point;
    double start_angle = 0.0;            // angle of the boundary ray before sector 1
    std::vector<double> sector_angles;   // θ_i^k, counterclockwise, sum 2π
    std::vector<Point2> sector_values;   // β_i^k

    [[nodiscard]] std::size_t sector_count() const { return sector_angles.size(); }

    [[nodiscard]] double sector_mid_angle(std::size_t k) const {
        double a = start_angle;
        for (std::size_t j = 0; j < k; ++j) a += sector_angles[j];
        return wrap_angle(a + 0.5 * sector_angles[k]);
    }

    // the declared limiting datum as a step map with wrapped, increasing starts
    [[nodiscard]] StepCircleMap limit_map() const {
        StepCircleMap g;
        double a = start_angle;
        for (std::size_t k = 0; k < sector_angles.size(); ++k) {
            g.arc_starts.push_back(wrap_angle(a));
            g.values.push_back(sector_values[k]);
            a += sector_angles[k];
        }
        std::size_t rot = 0;
        for (std::size_t k = 1; k < g.arc_starts.size(); ++k)
            if (g.arc_starts[k] < g.arc_starts[rot]) rot = k;
        std::rotate(g.arc_starts.begin(), g.arc_starts.begin() + long(rot), g.arc_starts.end());
        std::rotate(g.values.begin(), g.values.begin() + long(rot), g.values.end());
        return g;
    }
};

struct PiecewiseMapScene {
    RegionSpec domain;
    std::vector<std::pair<RegionSpec, RegionMapSpec>> regions;
    std::vector<JumpCurve> jump_curves;
    std::vector<Junction> junctions;

    [[nodiscard]] int locate_region(Point2 x) const {
        for (std::size_t k = 0; k < regions.size(); ++k)
            if (regions[k].first.contains(x)) return int(k);
        return -1;
    }

    [[nodiscard]] Point2 eval(Point2 x) const {
        const int k = locate_region(x);
        if (k < 0) throw Error("scene eval: point not covered by any region");
        return regions[std::size_t(k)].second.eval(x);
    }
};

// Build the two traces of a jump curve from its adjacent region maps.  The
// traces own copies of the maps, so they stay valid if the scene moves.
inline void attach_traces(JumpCurve& curve, const PiecewiseMapScene& scene) {
    const auto make = [&](int region, int side) {
        TraceCurve tc;
        if (region < 0 || region >= int(scene.regions.size()))
            throw Error("attach_traces: jump curve side has no adjacent region; set the trace directly");
        const RegionMapSpec& spec = scene.regions[std::size_t(region)].second;
        if (spec.is_constant()) {
            const Point2 c = std::get<ConstantMap>(spec.map).value;
            tc.value = [c](double) { return c; };
            tc.derivative = [](double) { return Point2{0, 0}; };
            return tc;
        }
        if (spec.is_affine()) {
            const AffineMap a = std::get<AffineMap>(spec.map);
            const SourceCurve alpha = curve.alpha;
            tc.value = [a, alpha](double t) { return a.apply(alpha.eval(t)); };
            tc.derivative = [a, alpha](double t) {
                const Point2 tau = alpha.tangent(t);
                return Point2{a.a[0] * tau.x + a.a[1] * tau.y, a.a[2] * tau.x + a.a[3] * tau.y};
            };
            return tc;
        }
        // callable regions: one-sided samples offset along the curve normal
        const SourceCurve alpha = curve.alpha;
        tc.value = [alpha, map = spec, side](double t) {
            const Point2 n = perp(alpha.tangent(t));
            return map.eval(alpha.eval(t) + side * 1e-6 * n);
        };
        return tc;
    };
    curve.trace_plus = make(curve.plus_region, +1);
    curve.trace_minus = make(curve.minus_region, -1);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    void fail(std::string msg) {
        pass = false;
        violations.push_back(std::move(msg));
    }
};

namespace detail {

inline double domain_boundary_distance(const RegionSpec& domain, Point2 p) {
    if (const auto* d = std::get_if<DiskRegion>(&domain.shape))
        return std::abs(dist(p, d->center) - d->radius);
    if (const auto* s = std::get_if<SectorRegion>(&domain.shape)) {
        double best = std::abs(dist(p, s->center) - s->radius);
        best = std::min(best, point_segment_distance(p, s->center, s->center + s->radius * unit_dir(s->angle_start)));
        best = std::min(best, point_segment_distance(p, s->center, s->center + s->radius * unit_dir(s->angle_end)));
        return best;
    }
    const auto& poly = std::get<PolygonRegion>(domain.shape);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.vertices.size(); ++i)
        best = std::min(best, point_segment_distance(p, poly.vertices[i],
                                                     poly.vertices[(i + 1) % poly.vertices.size()]));
    return best;
}

// direction of the domain boundary near p (for the transversality check)
inline Point2 domain_boundary_tangent(const RegionSpec& domain, Point2 p) {
    if (const auto* d = std::get_if<DiskRegion>(&domain.shape)) return perp(p - d->center) / std::max(dist(p, d->center), 1e-12);
    if (const auto* s = std::get_if<SectorRegion>(&domain.shape)) return perp(p - s->center) / std::max(dist(p, s->center), 1e-12);
    const auto& poly = std::get<PolygonRegion>(domain.shape);
    double best = std::numeric_limits<double>::infinity();
    Point2 tangent{1, 0};
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
        const Point2 a = poly.vertices[i], b = poly.vertices[(i + 1) % poly.vertices.size()];
        const double d = point_segment_distance(p, a, b);
        if (d < best && dist(a, b) > 0) {
            best = d;
            tangent = (b - a) / dist(a, b);
        }
    }
    return tangent;
}

inline std::vector<Point2> discretize_curve(const SourceCurve& c, int n = 64) {
    std::vector<Point2> pts;
    if (const auto* p = std::get_if<PolylineCurve>(&c.shape)) return p->points;
    for (int i = 0; i <= n; ++i) pts.push_back(c.eval(c.length * i / n));
    return pts;
}

} // namespace detail

// Structural checks from the network definition: curves meet only at
// junctions, endpoints land on junctions or the domain boundary, every
// junction has at least three sectors summing to a full angle.  Tangential
// boundary hits below 1e-3 rad are warned about, not failed.
inline ValidationReport validate_network(const PiecewiseMapScene& scene) {
    ValidationReport report;

    for (std::size_t i = 0; i < scene.junctions.size(); ++i) {
        const Junction& j = scene.junctions[i];
        if (j.sector_count() < 3)
            report.fail("junction " + std::to_string(i) + ": N_i < 3");
        if (j.sector_values.size() != j.sector_angles.size())
            report.fail("junction " + std::to_string(i) + ": sector values/angles size mismatch");
        double sum = 0.0;
        for (double a : j.sector_angles) sum += a;
        if (std::abs(sum - two_pi) > 1e-9)
            report.fail("junction " + std::to_string(i) + ": sector angles sum to " + std::to_string(sum));
    }

    const double tol = 1e-9;
    const auto near_junction = [&](Point2 p) {
        for (const Junction& j : scene.junctions)
            if (dist(p, j.point) <= 1e-7) return true;
        return false;
    };

    for (std::size_t l = 0; l < scene.jump_curves.size(); ++l) {
        const JumpCurve& c = scene.jump_curves[l];
        for (const Point2 endpoint : {c.alpha.start(), c.alpha.end()}) {
            const bool on_boundary = detail::domain_boundary_distance(scene.domain, endpoint) <= 1e-7;
            if (!near_junction(endpoint) && !on_boundary) {
                report.fail("curve " + std::to_string(l) + ": endpoint not at a junction or on the domain boundary");
            } else if (on_boundary && !near_junction(endpoint)) {
                const Point2 tau = c.alpha.tangent(dist(endpoint, c.alpha.start()) < tol ? 0.0 : c.alpha.length);
                const Point2 btau = detail::domain_boundary_tangent(scene.domain, endpoint);
                const double angle = std::asin(std::clamp(std::abs(cross(tau, btau)), 0.0, 1.0));
                if (angle < 1e-3)
                    report.warnings.push_back("curve " + std::to_string(l) +
                                              ": nearly tangential boundary hit (angle " + std::to_string(angle) + ")");
            }
        }
        // arc-length sanity at a few interior nodes; one-sided differences so
        // polyline corners are not misread as speed defects
        for (double f : {0.21, 0.5, 0.83}) {
            const double t = f * c.alpha.length;
            const double h = std::min(1e-5, 0.25 * c.alpha.length);
            const double fwd = dist(c.alpha.eval(t + h), c.alpha.eval(t)) / h;
            const double bwd = dist(c.alpha.eval(t), c.alpha.eval(t - h)) / h;
            const double err = std::min(std::abs(fwd - 1.0), std::abs(bwd - 1.0));
            if (c.alpha.length > 0 && err > 1e-4)
                report.fail("curve " + std::to_string(l) + ": not arc-length parametrized");
        }
    }

    // pairwise intersections away from junctions; endpoint touches count
    for (std::size_t a = 0; a < scene.jump_curves.size(); ++a) {
        const auto pa = detail::discretize_curve(scene.jump_curves[a].alpha);
        for (std::size_t b = a + 1; b < scene.jump_curves.size(); ++b) {
            const auto pb = detail::discretize_curve(scene.jump_curves[b].alpha);
            bool hit = false;
            for (std::size_t i = 0; i + 1 < pa.size() && !hit; ++i)
                for (std::size_t j = 0; j + 1 < pb.size() && !hit; ++j) {
                    Point2 q;
                    if (detail::segments_properly_intersect(pa[i], pa[i + 1], pb[j], pb[j + 1])) {
                        q = 0.25 * (pa[i] + pa[i + 1] + pb[j] + pb[j + 1]);
                    } else if (point_segment_distance(pa[i], pb[j], pb[j + 1]) <= 1e-9) {
                        q = pa[i];
                    } else if (point_segment_distance(pb[j], pa[i], pa[i + 1]) <= 1e-9) {
                        q = pb[j];
                    } else {
                        continue;
                    }
                    if (!near_junction(q)) hit = true;
                }
            if (hit)
                report.fail("curves " + std::to_string(a) + "," + std::to_string(b) + " intersect off-junction");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Junction traces
// ---------------------------------------------------------------------------

struct JunctionTrace {
    SampledCircleMap samples;  // u on ∂B_ρ(p_i)
    StepCircleMap limit;       // γ^i: values β_i^k on angles θ_i^k as ρ→0
};

namespace detail {

inline double distance_to_curve(const SourceCurve& c, Point2 p) {
    const auto pts = discretize_curve(c, 128);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        best = std::min(best, point_segment_distance(p, pts[i], pts[i + 1]));
    return best;
}

} // namespace detail

// Sample u on ∂B_ρ(p_i) and extract the ρ→0 limit datum: exact for constant
// and affine regions, Richardson extrapolation over ρ, ρ/2, ρ/4 for callable
// ones.  Throws BallTooLargeError when the ball reaches a non-incident curve.
inline JunctionTrace junction_trace(const PiecewiseMapScene& scene, std::size_t junction_index, double rho,
                                    int n_samples = 256) {
    const Junction& junction = scene.junctions.at(junction_index);
    const Point2 p = junction.point;

    for (const JumpCurve& c : scene.jump_curves) {
        const bool incident = dist(c.alpha.start(), p) <= 1e-7 || dist(c.alpha.end(), p) <= 1e-7;
        if (!incident && detail::distance_to_curve(c.alpha, p) <= rho)
            throw BallTooLargeError("junction_trace: ball meets a non-incident curve");
    }

    JunctionTrace out;
    for (int s = 0; s < n_samples; ++s) {
        const double theta = two_pi * (s + 0.5) / n_samples; // offset to dodge the jump rays
        out.samples.angles.push_back(theta);
        out.samples.values.push_back(scene.eval(p + rho * unit_dir(theta)));
    }

    out.limit.arc_starts.reserve(junction.sector_count());
    out.limit.values.reserve(junction.sector_count());
    double a = junction.start_angle;
    for (std::size_t k = 0; k < junction.sector_count(); ++k) {
        const double mid = junction.sector_mid_angle(k);
        const Point2 dir = unit_dir(mid);
        const int region = scene.locate_region(p + 0.5 * rho * dir);
        if (region < 0) throw Error("junction_trace: sector midpoint not covered by a region");
        const RegionMapSpec& map = scene.regions[std::size_t(region)].second;
        Point2 beta;
        if (map.is_constant()) {
            beta = map.eval(p);
        } else if (map.is_affine()) {
            beta = map.eval(p); // affine maps are continuous up to the junction
        } else {
            // kill the O(ρ) and O(ρ²) terms: with f(ρ) = u(p + ρ dir),
            // A_j = 2 f(ρ/2^{j+1}) - f(ρ/2^j), limit = (4 A_2 - A_1)/3
            const Point2 f1 = map.eval(p + rho * dir);
            const Point2 f2 = map.eval(p + 0.5 * rho * dir);
            const Point2 f4 = map.eval(p + 0.25 * rho * dir);
            const Point2 a1 = 2.0 * f2 - f1;
            const Point2 a2 = 2.0 * f4 - f2;
            beta = (4.0 * a2 - a1) / 3.0;
        }
        out.limit.arc_starts.push_back(wrap_angle(a));
        out.limit.values.push_back(beta);
        a += junction.sector_angles[k];
    }
    // wrap_angle may fold the starts; restore cyclic increasing order
    std::size_t rot = 0;
    for (std::size_t k = 1; k < out.limit.arc_starts.size(); ++k)
        if (out.limit.arc_starts[k] < out.limit.arc_starts[rot]) rot = k;
    std::rotate(out.limit.arc_starts.begin(), out.limit.arc_starts.begin() + long(rot), out.limit.arc_starts.end());
    std::rotate(out.limit.values.begin(), out.limit.values.begin() + long(rot), out.limit.values.end());
    return out;
}

// ---------------------------------------------------------------------------
// Total variation
// ---------------------------------------------------------------------------

namespace detail {

// Frobenius norm of ∇u at x; analytic for constant/affine, central
// differences (h = 1e-6) otherwise
inline double gradient_frobenius(const RegionMapSpec& map, Point2 x) {
    if (map.is_constant()) return 0.0;
    if (map.is_affine()) return std::sqrt(std::get<AffineMap>(map.map).frobenius2());
    const double h = 1e-6;
    const Point2 dx = (map.eval({x.x + h, x.y}) - map.eval({x.x - h, x.y})) / (2 * h);
    const Point2 dy = (map.eval({x.x, x.y + h}) - map.eval({x.x, x.y - h})) / (2 * h);
    return std::sqrt(norm2(dx) + norm2(dy));
}

// A radial-angular map is smooth only between the rays of its profile
// breakpoints; an adaptive rule that never lands inside a narrow transition
// wedge would accept a wrong cell, so centered disks and sectors integrate
// wedge by wedge.  Returns nullopt when the region is not aligned.
template <class F>
std::optional<double> integrate_radial_aligned(const RegionSpec& region, const RadialAngularMap& rmap,
                                               const F& f, double tol) {
    Point2 center;
    double radius, t0, t1;
    if (const auto* d = std::get_if<DiskRegion>(&region.shape)) {
        center = d->center; radius = d->radius; t0 = 0.0; t1 = two_pi;
    } else if (const auto* s = std::get_if<SectorRegion>(&region.shape)) {
        center = s->center; radius = s->radius; t0 = s->angle_start; t1 = s->angle_end;
    } else {
        return std::nullopt;
    }
    if (dist(center, rmap.center) > 1e-12) return std::nullopt;

    std::vector<double> cuts = {t0, t1};
    for (double a : rmap.profile.angles) {
        const double rel = t0 + wrap_angle(a - t0);
        if (rel > t0 + 1e-12 && rel < t1 - 1e-12) cuts.push_back(rel);
    }
    std::sort(cuts.begin(), cuts.end());

    double sum = 0.0;
    const double share = tol / double(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-14) continue;
        sum += integrate_rect([&](double rho, double theta) { return f(center + rho * unit_dir(theta)) * rho; },
                              0.0, radius, cuts[i], cuts[i + 1], share);
    }
    return sum;
}

template <class F>
double integrate_region_mapaware(const RegionSpec& region, const RegionMapSpec& map, const F& f, double tol) {
    if (const auto* r = std::get_if<RadialAngularMap>(&map.map))
        if (const auto aligned = integrate_radial_aligned(region, *r, f, tol)) return *aligned;
    return integrate_region(region, f, tol);
}

} // namespace detail

// |Du|(Ω) = ∫_{Ω∖Σ} |∇u| dx + Σ_l ∫ |u_l⁺ - u_l⁻| dt
inline double total_variation(const PiecewiseMapScene& scene, double tol) {
    double tv = 0.0;
    double total_area = 0.0;
    for (const auto& [region, map] : scene.regions) total_area += region.area();
    for (const auto& [region, map] : scene.regions) {
        if (map.is_constant()) continue;
        if (map.is_affine()) {
            tv += std::sqrt(std::get<AffineMap>(map.map).frobenius2()) * region.area();
            continue;
        }
        const double share = std::max(1e-3, region.area() / std::max(total_area, 1e-300));
        tv += detail::integrate_region_mapaware(
            region, map, [&](Point2 x) { return detail::gradient_frobenius(map, x); }, 0.5 * tol * share);
    }
    const double curve_tol = scene.jump_curves.empty() ? tol : 0.5 * tol / double(scene.jump_curves.size());
    for (const JumpCurve& c : scene.jump_curves)
        tv += integrate_interval(
            [&](double t) { return dist(c.trace_plus.eval(t), c.trace_minus.eval(t)); },
            c.param_begin(), c.param_end(), curve_tol);
    return tv;
}

// total variation of `map` restricted to ∂B_r(center), sampled closed loop
template <class MapFn>
double circular_slice_tv(const MapFn& map, Point2 center, double r, int n_samples) {
    if (n_samples < 16) throw Error("circular_slice_tv: needs at least 16 samples");
    std::vector<Point2> samples;
    samples.reserve(std::size_t(n_samples) + 1);
    for (int s = 0; s <= n_samples; ++s) {
        const double theta = two_pi * (s % n_samples + 0.5) / n_samples;
        samples.push_back(map(center + r * unit_dir(theta)));
    }
    return curve_tv(samples);
}

inline double circular_slice_tv(const PiecewiseMapScene& scene, Point2 center, double r, int n_samples) {
    return circular_slice_tv([&](Point2 x) { return scene.eval(x); }, center, r, n_samples);
}

// ---------------------------------------------------------------------------
// Canonical scene builders
// ---------------------------------------------------------------------------

// homogeneous n-uple point scene on B_r(0): sectors with constant values,
// jump radii where adjacent values differ, one junction at the origin
inline PiecewiseMapScene make_homogeneous_scene(const StepCircleMap& gamma, double r) {
    gamma.validate();
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::disk({0, 0}, r);
    const std::size_t n = gamma.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double a0 = gamma.arc_starts[k];
        const double a1 = (k + 1 < n) ? gamma.arc_starts[k + 1] : gamma.arc_starts[0] + two_pi;
        scene.regions.emplace_back(RegionSpec::sector({0, 0}, r, a0, a1),
                                   RegionMapSpec::constant(gamma.values[k]));
    }
    int id = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t prev = (k + n - 1) % n;
        if (dist(gamma.values[k], gamma.values[prev]) <= 1e-12) continue;
        JumpCurve c;
        c.id = id++;
        c.alpha = SourceCurve::segment({0, 0}, r * unit_dir(gamma.arc_starts[k]));
        c.plus_region = int(k);      // α̇⊥ points counterclockwise: the arc after the ray
        c.minus_region = int(prev);
        scene.jump_curves.push_back(std::move(c));
    }
    if (scene.jump_curves.size() >= 3 || (n >= 3 && !scene.jump_curves.empty())) {
        Junction j;
        j.point = {0, 0};
        j.start_angle = gamma.arc_starts[0];
        for (std::size_t k = 0; k < n; ++k) {
            j.sector_angles.push_back(gamma.arc_length(k));
            j.sector_values.push_back(gamma.values[k]);
        }
        scene.junctions.push_back(std::move(j));
    }
    for (JumpCurve& c : scene.jump_curves) attach_traces(c, scene);
    return scene;
}

inline PiecewiseMapScene make_triple_point_scene(Point2 a, Point2 b, Point2 c, double r = 1.0) {
    StepCircleMap gamma;
    gamma.arc_starts = {0.0, two_pi / 3.0, 2.0 * two_pi / 3.0};
    gamma.values = {a, b, c};
    return make_homogeneous_scene(gamma, r);
}

// piecewise Lipschitz map on R = [a,b] x [-1,1] jumping on [a,b] x {0}
inline PiecewiseMapScene make_straight_jump_scene(double a, double b, RegionMapSpec upper, RegionMapSpec lower) {
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::rectangle(a, -1.0, b, 1.0);
    scene.regions.emplace_back(RegionSpec::polygon({{a, 0}, {b, 0}, {b, 1}, {a, 1}}), std::move(upper));
    scene.regions.emplace_back(RegionSpec::polygon({{a, -1}, {b, -1}, {b, 0}, {a, 0}}), std::move(lower));
    JumpCurve c;
    c.id = 0;
    c.alpha = SourceCurve::segment({a, 0}, {b, 0});
    c.plus_region = 0;  // α̇ = e1, α̇⊥ = e2: upper region
    c.minus_region = 1;
    scene.jump_curves.push_back(std::move(c));
    for (JumpCurve& jc : scene.jump_curves) attach_traces(jc, scene);
    return scene;
}

} // namespace bvrelax
