#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvrelax {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PointOnBoundaryError : Error { using Error::Error; };
struct OriginHitError : Error { using Error::Error; };
struct AmbiguousDegreeError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Point2
// ---------------------------------------------------------------------------

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
constexpr Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
constexpr Point2 operator/(Point2 p, double s) { return {p.x / s, p.y / s}; }
constexpr Point2 operator-(Point2 p) { return {-p.x, -p.y}; }

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
constexpr double norm2(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// counterclockwise 90-degree rotation
constexpr Point2 perp(Point2 p) { return {-p.y, p.x}; }

inline Point2 unit_dir(double angle) { return {std::cos(angle), std::sin(angle)}; }
inline double angle_of(Point2 p) { return std::atan2(p.y, p.x); }

// wrap an angle into [0, 2*pi)
inline double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = norm2(ab);
    if (len2 == 0.0) return dist(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

// ---------------------------------------------------------------------------
// BoundaryLoop — closed polyline in the target plane.  Repeated traversals
// appear as repeated edges; the loop may self-intersect.
// ---------------------------------------------------------------------------

struct BoundaryLoop {
    std::vector<Point2> vertices;

    BoundaryLoop() = default;
    explicit BoundaryLoop(std::vector<Point2> vs) : vertices(std::move(vs)) {}

    [[nodiscard]] std::size_t size() const { return vertices.size(); }

    // edges including the closing edge last->first
    [[nodiscard]] std::vector<std::pair<Point2, Point2>> edges() const {
        std::vector<std::pair<Point2, Point2>> out;
        const std::size_t n = vertices.size();
        if (n < 2) return out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.emplace_back(vertices[i], vertices[(i + 1) % n]);
        return out;
    }

    [[nodiscard]] double length() const {
        const std::size_t n = vertices.size();
        if (n < 2) return 0.0;
        double L = 0.0;
        for (std::size_t i = 0; i < n; ++i) L += dist(vertices[i], vertices[(i + 1) % n]);
        return L;
    }

    // remove zero-length edges (consecutive equal vertices, including wrap)
    [[nodiscard]] BoundaryLoop collapsed(double tol = 1e-12) const {
        BoundaryLoop out;
        for (const Point2& v : vertices) {
            if (out.vertices.empty() || dist(out.vertices.back(), v) > tol) out.vertices.push_back(v);
        }
        while (out.vertices.size() > 1 && dist(out.vertices.front(), out.vertices.back()) <= tol)
            out.vertices.pop_back();
        return out;
    }

    [[nodiscard]] BoundaryLoop reversed() const {
        BoundaryLoop out = *this;
        std::reverse(out.vertices.begin(), out.vertices.end());
        return out;
    }

    [[nodiscard]] BoundaryLoop scaled(double s) const {
        BoundaryLoop out = *this;
        for (Point2& v : out.vertices) v = s * v;
        return out;
    }

    [[nodiscard]] BoundaryLoop transformed(double angle, Point2 shift) const {
        BoundaryLoop out = *this;
        const double c = std::cos(angle), s = std::sin(angle);
        for (Point2& v : out.vertices) v = Point2{c * v.x - s * v.y, s * v.x + c * v.y} + shift;
        return out;
    }

    // constant-speed point at arc-length fraction u in [0,1)
    [[nodiscard]] Point2 at_fraction(double u) const {
        const std::size_t n = vertices.size();
        if (n == 0) return {};
        if (n == 1) return vertices[0];
        const double L = length();
        if (L == 0.0) return vertices[0];
        double s = std::clamp(u, 0.0, 1.0) * L;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = vertices[i], b = vertices[(i + 1) % n];
            const double e = dist(a, b);
            if (s <= e || i + 1 == n) {
                const double t = e > 0 ? std::clamp(s / e, 0.0, 1.0) : 0.0;
                return a + t * (b - a);
            }
            s -= e;
        }
        return vertices[0];
    }
};

// ---------------------------------------------------------------------------
// Winding numbers
// ---------------------------------------------------------------------------

namespace detail {

// Sunday's winding algorithm; assumes y is not on an edge.
inline int winding_unchecked(std::span<const std::pair<Point2, Point2>> edges, Point2 y) {
    int w = 0;
    for (const auto& [a, b] : edges) {
        if (a.y <= y.y) {
            if (b.y > y.y && cross(b - a, y - a) > 0) ++w;
        } else {
            if (b.y <= y.y && cross(b - a, y - a) < 0) --w;
        }
    }
    return w;
}

} // namespace detail

// Signed number of times `loop` winds around `y`.  Throws PointOnBoundaryError
// if y is within tol_edge of an edge.
inline int polygon_winding(const BoundaryLoop& loop, Point2 y, double tol_edge = 1e-12) {
    const auto edges = loop.edges();
    for (const auto& [a, b] : edges)
        if (point_segment_distance(y, a, b) <= tol_edge)
            throw PointOnBoundaryError("polygon_winding: query point lies on a loop edge");
    return detail::winding_unchecked(edges, y);
}

namespace detail {

struct Box {
    double x0, y0, x1, y1;
    [[nodiscard]] double area() const { return (x1 - x0) * (y1 - y0); }
    [[nodiscard]] Point2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

inline bool segment_intersects_box(Point2 a, Point2 b, const Box& c) {
    const double lox = std::min(a.x, b.x), hix = std::max(a.x, b.x);
    const double loy = std::min(a.y, b.y), hiy = std::max(a.y, b.y);
    if (hix < c.x0 || lox > c.x1 || hiy < c.y0 || loy > c.y1) return false;
    // separating-line test against the segment's own line
    const Point2 d = b - a;
    const double c00 = cross(d, Point2{c.x0, c.y0} - a);
    const double c01 = cross(d, Point2{c.x0, c.y1} - a);
    const double c10 = cross(d, Point2{c.x1, c.y0} - a);
    const double c11 = cross(d, Point2{c.x1, c.y1} - a);
    if (c00 > 0 && c01 > 0 && c10 > 0 && c11 > 0) return false;
    if (c00 < 0 && c01 < 0 && c10 < 0 && c11 < 0) return false;
    return true;
}

// clip an axis box against the half plane cross(d, p - a) >= 0 (Sutherland-Hodgman)
inline std::vector<Point2> clip_box_halfplane(const Box& c, Point2 a, Point2 d, int side) {
    std::vector<Point2> poly = {{c.x0, c.y0}, {c.x1, c.y0}, {c.x1, c.y1}, {c.x0, c.y1}};
    std::vector<Point2> out;
    const auto val = [&](Point2 p) { return side * cross(d, p - a); };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2 p = poly[i], q = poly[(i + 1) % poly.size()];
        const double vp = val(p), vq = val(q);
        if (vp >= 0) out.push_back(p);
        if ((vp > 0 && vq < 0) || (vp < 0 && vq > 0)) {
            const double t = vp / (vp - vq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

inline double polygon_area_signed(std::span<const Point2> vs) {
    const std::size_t n = vs.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += cross(vs[i], vs[(i + 1) % n]);
    return 0.5 * s;
}

inline bool points_equal(Point2 a, Point2 b, double tol) { return dist(a, b) <= tol; }

inline bool segments_properly_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline bool is_simple_polygon(std::span<const Point2> vs, double tol = 1e-12) {
    const std::size_t n = vs.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (points_equal(vs[i], vs[j], tol)) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = vs[i], b = vs[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point2 c = vs[j], d = vs[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // shared endpoint only; reject overlap along a line
                const Point2 shared = (j == i + 1) ? b : a;
                const Point2 e1 = (j == i + 1) ? a - shared : b - shared;
                const Point2 e2 = (j == i + 1) ? d - shared : c - shared;
                if (std::abs(cross(e1, e2)) <= tol * norm(e1) * norm(e2) && dot(e1, e2) > 0) return false;
                continue;
            }
            if (segments_properly_intersect(a, b, c, d)) return false;
            if (point_segment_distance(c, a, b) <= tol || point_segment_distance(a, c, d) <= tol) return false;
        }
    }
    return true;
}

inline Point2 polygon_centroid(std::span<const Point2> vs) {
    const std::size_t n = vs.size();
    double a = 0.0;
    Point2 c{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const double w = cross(vs[i], vs[(i + 1) % n]);
        a += w;
        c = c + w * (vs[i] + vs[(i + 1) % n]);
    }
    if (std::abs(a) < 1e-300) {
        for (const Point2& v : vs) c = c + v;
        return c / double(n);
    }
    return c / (3.0 * a);
}

} // namespace detail

// ∫_{R^2} |w(y)| dy for the polygonal loop, by edge-aware quadtree subdivision.
// A cell crossed by no edge has constant winding (evaluated at its center); a
// cell whose crossing edges are all collinear is split exactly by that line;
// remaining cells are refined until the pending error budget drops below tol.
inline double winding_area_integral(const BoundaryLoop& loop0, double tol) {
    if (tol <= 0) throw Error("winding_area_integral: tol must be positive");
    const BoundaryLoop loop = loop0.collapsed();
    if (loop.vertices.size() < 3 || loop.length() <= 0) return 0.0;

    const auto edges = loop.edges();

    double lox = loop.vertices[0].x, hix = lox, loy = loop.vertices[0].y, hiy = loy;
    for (const Point2& v : loop.vertices) {
        lox = std::min(lox, v.x); hix = std::max(hix, v.x);
        loy = std::min(loy, v.y); hiy = std::max(hiy, v.y);
    }
    // pad so loop edges do not coincide with the dyadic grid
    const double diam = std::max(hix - lox, hiy - loy);
    const double pad = 0.031415926 * diam + 1e-12;
    const detail::Box root{lox - pad, loy - pad, lox - pad + (diam + 2 * pad), loy - pad + (diam + 2 * pad)};

    struct Node {
        detail::Box box;
        double err;
        int k;
        std::uint64_t id;
        bool operator<(const Node& o) const {
            if (err != o.err) return err < o.err;
            return id > o.id; // older cells first on ties
        }
    };

    double exact_sum = 0.0;
    std::priority_queue<Node> pending;
    double pending_err = 0.0;
    std::uint64_t next_id = 0;

    const auto winding_at = [&](Point2 y) { return detail::winding_unchecked(edges, y); };

    const auto classify = [&](const detail::Box& c) {
        std::vector<std::size_t> crossing;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (detail::segment_intersects_box(edges[i].first, edges[i].second, c)) crossing.push_back(i);

        if (crossing.empty()) {
            exact_sum += c.area() * std::abs(winding_at(c.center()));
            return;
        }
        // collinear bundle: winding is constant on each side of the common line
        const auto [a0, b0] = edges[crossing[0]];
        const Point2 d0 = b0 - a0;
        const double scale = std::max({std::abs(c.x0), std::abs(c.x1), std::abs(c.y0), std::abs(c.y1), 1.0});
        bool collinear = norm(d0) > 0;
        for (std::size_t idx : crossing) {
            const auto& [a, b] = edges[idx];
            if (std::abs(cross(d0, b - a)) > 1e-12 * scale * norm(d0) ||
                std::abs(cross(d0, a - a0)) > 1e-12 * scale * norm(d0)) {
                collinear = false;
                break;
            }
        }
        if (collinear) {
            for (int side : {+1, -1}) {
                const auto part = detail::clip_box_halfplane(c, a0, d0, side);
                const double area = std::abs(detail::polygon_area_signed(part));
                if (area < 1e-30) continue;
                exact_sum += area * std::abs(winding_at(detail::polygon_centroid(part)));
            }
            return;
        }
        const double err = c.area() * double(crossing.size());
        pending_err += err;
        pending.push(Node{c, err, int(crossing.size()), next_id++});
    };

    classify(root);
    const std::size_t max_nodes = 1u << 22;
    std::size_t processed = 0;
    while (!pending.empty() && pending_err > tol && processed < max_nodes) {
        const Node worst = pending.top();
        pending.pop();
        pending_err -= worst.err;
        const auto& c = worst.box;
        const double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
        classify({c.x0, c.y0, mx, my});
        classify({mx, c.y0, c.x1, my});
        classify({c.x0, my, mx, c.y1});
        classify({mx, my, c.x1, c.y1});
        processed += 4;
    }
    // residual impure cells: estimate at center, error already within budget
    while (!pending.empty()) {
        const Node n = pending.top();
        pending.pop();
        exact_sum += n.box.area() * std::abs(winding_at(n.box.center()));
    }
    return exact_sum;
}

// ---------------------------------------------------------------------------
// Sampled circle maps
// ---------------------------------------------------------------------------

// A map S^1 -> R^2 given by samples (angle, value) with linear interpolation
// in the angle.  Angles are strictly increasing in [0, 2*pi).
struct SampledCircleMap {
    std::vector<double> angles;
    std::vector<Point2> values;

    [[nodiscard]] std::size_t size() const { return angles.size(); }

    void validate() const {
        if (angles.size() != values.size()) throw Error("SampledCircleMap: size mismatch");
        if (angles.size() < 8) throw Error("SampledCircleMap: needs at least 8 samples");
        for (std::size_t i = 0; i < angles.size(); ++i) {
            if (angles[i] < 0 || angles[i] >= two_pi) throw Error("SampledCircleMap: angle out of [0,2pi)");
            if (i > 0 && angles[i] <= angles[i - 1]) throw Error("SampledCircleMap: angles not strictly increasing");
        }
    }

    [[nodiscard]] Point2 eval(double theta) const {
        const std::size_t n = angles.size();
        if (n == 0) return {};
        if (n == 1) return values[0];
        const double t = wrap_angle(theta);
        auto it = std::upper_bound(angles.begin(), angles.end(), t);
        const std::size_t j = (it == angles.begin()) ? n - 1 : std::size_t(it - angles.begin()) - 1;
        const std::size_t j1 = (j + 1) % n;
        const double a0 = angles[j];
        double a1 = angles[j1];
        double tt = t;
        if (j1 == 0) { a1 += two_pi; if (tt < a0) tt += two_pi; }
        const double span = a1 - a0;
        const double u = span > 0 ? (tt - a0) / span : 0.0;
        return values[j] + u * (values[j1] - values[j]);
    }

    // total variation of the closed sample polyline (exact if the map is
    // piecewise affine with breakpoints among the samples)
    [[nodiscard]] double total_variation() const {
        const std::size_t n = values.size();
        if (n < 2) return 0.0;
        double tv = 0.0;
        for (std::size_t i = 0; i < n; ++i) tv += dist(values[i], values[(i + 1) % n]);
        return tv;
    }
};

// Piecewise constant circle data: value[i] on the arc [arc_starts[i],
// arc_starts[i+1]) in counterclockwise order, wrapping at 2*pi.
struct StepCircleMap {
    std::vector<double> arc_starts;
    std::vector<Point2> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }

    void validate() const {
        if (arc_starts.size() != values.size()) throw Error("StepCircleMap: size mismatch");
        if (values.empty()) throw Error("StepCircleMap: empty");
        for (std::size_t i = 0; i < arc_starts.size(); ++i) {
            if (arc_starts[i] < 0 || arc_starts[i] >= two_pi) throw Error("StepCircleMap: arc start out of [0,2pi)");
            if (i > 0 && arc_starts[i] <= arc_starts[i - 1]) throw Error("StepCircleMap: arc starts not increasing");
        }
    }

    [[nodiscard]] Point2 value_at(double theta) const {
        const double t = wrap_angle(theta);
        auto it = std::upper_bound(arc_starts.begin(), arc_starts.end(), t);
        const std::size_t j = (it == arc_starts.begin()) ? values.size() - 1 : std::size_t(it - arc_starts.begin()) - 1;
        return values[j];
    }

    [[nodiscard]] double arc_length(std::size_t i) const {
        const std::size_t n = arc_starts.size();
        const double a0 = arc_starts[i];
        const double a1 = (i + 1 < n) ? arc_starts[i + 1] : arc_starts[0] + two_pi;
        return a1 - a0;
    }

    [[nodiscard]] double min_arc_length() const {
        double m = two_pi;
        for (std::size_t i = 0; i < size(); ++i) m = std::min(m, arc_length(i));
        return m;
    }

    // |γ̇|(S^1) = Σ |value_{i+1} - value_i| over the cyclic jump sequence
    [[nodiscard]] double total_variation() const {
        const std::size_t n = values.size();
        if (n < 2) return 0.0;
        double tv = 0.0;
        for (std::size_t i = 0; i < n; ++i) tv += dist(values[i], values[(i + 1) % n]);
        return tv;
    }
};

// Total lifted angle around `origin` divided by 2*pi.  Fails loudly instead of
// guessing: consecutive increments must stay below pi.
inline int circle_map_degree(const SampledCircleMap& map, Point2 origin) {
    const std::size_t n = map.size();
    if (n < 2) throw Error("circle_map_degree: needs at least 2 samples");
    for (const Point2& v : map.values)
        if (dist(v, origin) < 1e-9) throw OriginHitError("circle_map_degree: sample coincides with origin");
    double total = 0.0;
    double prev = angle_of(map.values[0] - origin);
    for (std::size_t i = 1; i <= n; ++i) {
        const double cur = angle_of(map.values[i % n] - origin);
        double inc = cur - prev;
        while (inc > pi) inc -= two_pi;
        while (inc <= -pi) inc += two_pi;
        if (std::abs(inc) >= pi - 1e-12)
            throw AmbiguousDegreeError("circle_map_degree: angular increment >= pi; resample finer");
        total += inc;
        prev = cur;
    }
    return int(std::lround(total / two_pi));
}

// Sum of consecutive sample distances.  Closed curves: append the first
// sample before calling.
inline double curve_tv(std::span<const Point2> samples) {
    if (samples.size() < 2) return 0.0;
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) tv += dist(samples[i], samples[i + 1]);
    return tv;
}

inline double curve_tv(const std::vector<Point2>& samples) {
    return curve_tv(std::span<const Point2>(samples.data(), samples.size()));
}

} // namespace bvrelax
