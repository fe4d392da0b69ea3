#pragma once
#include <functional>
#include <variant>

#include "bvrelax/geometry.hpp"

namespace bvrelax {

struct NonFiniteError : Error { using Error::Error; };

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1]
inline constexpr double gl3_x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
inline constexpr double gl3_w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

inline constexpr double gl5_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
inline constexpr double gl5_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};

inline constexpr double gl7_x[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                                    0.0, 0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
inline constexpr double gl7_w[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                                    0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                                    0.1294849661688697};

inline void check_finite(double v) {
    if (!std::isfinite(v)) throw NonFiniteError("quadrature: integrand returned a non-finite value");
}

template <class F>
double gl_interval(const F& f, double a, double b, const double* xs, const double* ws, int n) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = f(m + h * xs[i]);
        check_finite(v);
        s += ws[i] * v;
    }
    return h * s;
}

template <class F>
double gl_rect(const F& f, double x0, double x1, double y0, double y1,
               const double* xs, const double* ws, int n) {
    const double hx = 0.5 * (x1 - x0), mx = 0.5 * (x0 + x1);
    const double hy = 0.5 * (y1 - y0), my = 0.5 * (y0 + y1);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = f(mx + hx * xs[i], my + hy * xs[j]);
            check_finite(v);
            s += ws[i] * ws[j] * v;
        }
    return hx * hy * s;
}

// Seven-point degree-5 rule on a triangle given by barycentric coordinates.
template <class F>
double tri_rule(const F& f, Point2 p0, Point2 p1, Point2 p2) {
    static constexpr double w0 = 0.225;
    static constexpr double a1 = 0.0597158717897698, b1 = 0.4701420641051151, w1 = 0.1323941527885062;
    static constexpr double a2 = 0.7974269853530873, b2 = 0.1012865073234563, w2 = 0.1259391805448272;
    const double area = 0.5 * std::abs(cross(p1 - p0, p2 - p0));
    const auto at = [&](double l0, double l1, double l2) {
        const Point2 q = l0 * p0 + l1 * p1 + l2 * p2;
        const double v = f(q);
        check_finite(v);
        return v;
    };
    double s = w0 * at(1.0 / 3, 1.0 / 3, 1.0 / 3);
    s += w1 * (at(a1, b1, b1) + at(b1, a1, b1) + at(b1, b1, a1));
    s += w2 * (at(a2, b2, b2) + at(b2, a2, b2) + at(b2, b2, a2));
    return area * s;
}

// deterministic worst-first refinement queue shared by the adaptive drivers
template <class Cell>
struct RefineQueue {
    struct Entry {
        Cell cell;
        double val, err;
        std::uint64_t id;
        bool operator<(const Entry& o) const {
            if (err != o.err) return err < o.err;
            return id > o.id;
        }
    };
    std::priority_queue<Entry> q;
    double total = 0.0, total_err = 0.0;
    std::uint64_t next_id = 0;

    void push(Cell c, double val, double err) {
        total += val;
        total_err += err;
        q.push(Entry{std::move(c), val, err, next_id++});
    }
    Entry pop() {
        Entry e = q.top();
        q.pop();
        total -= e.val;
        total_err -= e.err;
        return e;
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Adaptive drivers.  Deterministic: fixed rules, worst-first refinement with
// insertion-order tie-breaks.
// ---------------------------------------------------------------------------

template <class F>
double integrate_interval(const F& f, double a, double b, double tol, std::size_t max_cells = 200000) {
    if (!(b > a)) return 0.0;
    struct Cell { double a, b; };
    detail::RefineQueue<Cell> q;
    const auto eval = [&](double x0, double x1) {
        const double v7 = detail::gl_interval(f, x0, x1, detail::gl7_x, detail::gl7_w, 7);
        const double v3 = detail::gl_interval(f, x0, x1, detail::gl3_x, detail::gl3_w, 3);
        return std::pair{v7, std::abs(v7 - v3)};
    };
    auto [v, e] = eval(a, b);
    q.push(Cell{a, b}, v, e);
    std::size_t cells = 1;
    while (q.total_err > tol && cells < max_cells) {
        const auto worst = q.pop();
        const double m = 0.5 * (worst.cell.a + worst.cell.b);
        for (const auto& [x0, x1] : {std::pair{worst.cell.a, m}, std::pair{m, worst.cell.b}}) {
            auto [cv, ce] = eval(x0, x1);
            q.push(Cell{x0, x1}, cv, ce);
        }
        cells += 2;
    }
    return q.total;
}

template <class F> // f(x, y)
double integrate_rect(const F& f, double x0, double x1, double y0, double y1, double tol,
                      std::size_t max_cells = 400000) {
    if (!(x1 > x0) || !(y1 > y0)) return 0.0;
    struct Cell { double x0, x1, y0, y1; };
    detail::RefineQueue<Cell> q;
    const auto eval = [&](const Cell& c) {
        const double v5 = detail::gl_rect(f, c.x0, c.x1, c.y0, c.y1, detail::gl5_x, detail::gl5_w, 5);
        const double v3 = detail::gl_rect(f, c.x0, c.x1, c.y0, c.y1, detail::gl3_x, detail::gl3_w, 3);
        return std::pair{v5, std::abs(v5 - v3)};
    };
    Cell root{x0, x1, y0, y1};
    auto [v, e] = eval(root);
    q.push(root, v, e);
    std::size_t cells = 1;
    while (q.total_err > tol && cells < max_cells) {
        const auto worst = q.pop();
        const auto& c = worst.cell;
        const double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
        const Cell kids[4] = {{c.x0, mx, c.y0, my}, {mx, c.x1, c.y0, my},
                              {c.x0, mx, my, c.y1}, {mx, c.x1, my, c.y1}};
        for (const Cell& k : kids) {
            auto [kv, ke] = eval(k);
            q.push(k, kv, ke);
        }
        cells += 4;
    }
    return q.total;
}

template <class F> // f(Point2)
double integrate_triangles(const F& f, std::vector<std::array<Point2, 3>> tris, double tol,
                           std::size_t max_cells = 400000) {
    struct Cell { std::array<Point2, 3> t; };
    detail::RefineQueue<Cell> q;
    const auto eval = [&](const std::array<Point2, 3>& t) {
        const double parent = detail::tri_rule(f, t[0], t[1], t[2]);
        const Point2 m01 = 0.5 * (t[0] + t[1]), m12 = 0.5 * (t[1] + t[2]), m02 = 0.5 * (t[0] + t[2]);
        const double refined = detail::tri_rule(f, t[0], m01, m02) + detail::tri_rule(f, m01, t[1], m12) +
                               detail::tri_rule(f, m02, m12, t[2]) + detail::tri_rule(f, m01, m12, m02);
        return std::pair{refined, std::abs(parent - refined)};
    };
    std::size_t cells = 0;
    for (auto& t : tris) {
        auto [v, e] = eval(t);
        q.push(Cell{t}, v, e);
        ++cells;
    }
    while (q.total_err > tol && cells < max_cells) {
        const auto worst = q.pop();
        const auto& t = worst.cell.t;
        const Point2 m01 = 0.5 * (t[0] + t[1]), m12 = 0.5 * (t[1] + t[2]), m02 = 0.5 * (t[0] + t[2]);
        const std::array<Point2, 3> kids[4] = {{t[0], m01, m02}, {m01, t[1], m12},
                                               {m02, m12, t[2]}, {m01, m12, m02}};
        for (const auto& k : kids) {
            auto [kv, ke] = eval(k);
            q.push(Cell{k}, kv, ke);
        }
        cells += 4;
    }
    return q.total;
}

// ---------------------------------------------------------------------------
// Regions: disk, disk sector, or simple polygon.
// ---------------------------------------------------------------------------

struct DiskRegion {
    Point2 center;
    double radius = 1.0;
};

struct SectorRegion {
    Point2 center;
    double radius = 1.0;
    double angle_start = 0.0; // radians; arc covers [angle_start, angle_end], end may exceed 2*pi
    double angle_end = two_pi;
};

struct PolygonRegion {
    std::vector<Point2> vertices;
};

struct RegionSpec {
    std::variant<DiskRegion, SectorRegion, PolygonRegion> shape;

    RegionSpec() : shape(DiskRegion{}) {}
    RegionSpec(DiskRegion d) : shape(d) {}
    RegionSpec(SectorRegion s) : shape(s) {}
    RegionSpec(PolygonRegion p) : shape(std::move(p)) {}

    static RegionSpec disk(Point2 c, double r) { return RegionSpec(DiskRegion{c, r}); }
    static RegionSpec sector(Point2 c, double r, double a0, double a1) {
        return RegionSpec(SectorRegion{c, r, a0, a1});
    }
    static RegionSpec polygon(std::vector<Point2> vs) { return RegionSpec(PolygonRegion{std::move(vs)}); }
    static RegionSpec rectangle(double x0, double y0, double x1, double y1) {
        return polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
    }

    [[nodiscard]] double area() const {
        if (const auto* d = std::get_if<DiskRegion>(&shape)) return pi * d->radius * d->radius;
        if (const auto* s = std::get_if<SectorRegion>(&shape))
            return 0.5 * s->radius * s->radius * (s->angle_end - s->angle_start);
        const auto& p = std::get<PolygonRegion>(shape);
        return std::abs(detail::polygon_area_signed(p.vertices));
    }

    [[nodiscard]] bool contains(Point2 q) const {
        if (const auto* d = std::get_if<DiskRegion>(&shape)) return dist(q, d->center) <= d->radius;
        if (const auto* s = std::get_if<SectorRegion>(&shape)) {
            const Point2 rel = q - s->center;
            if (norm(rel) > s->radius) return false;
            if (norm(rel) == 0.0) return true;
            const double span = s->angle_end - s->angle_start;
            if (span >= two_pi) return true;
            const double a = wrap_angle(angle_of(rel) - s->angle_start);
            return a <= span;
        }
        const auto& p = std::get<PolygonRegion>(shape);
        BoundaryLoop loop(p.vertices);
        const auto edges = loop.edges();
        for (const auto& [a, b] : edges)
            if (point_segment_distance(q, a, b) <= 1e-12) return true;
        return detail::winding_unchecked(edges, q) != 0;
    }

    [[nodiscard]] detail::Box bounding_box() const {
        if (const auto* d = std::get_if<DiskRegion>(&shape))
            return {d->center.x - d->radius, d->center.y - d->radius,
                    d->center.x + d->radius, d->center.y + d->radius};
        if (const auto* s = std::get_if<SectorRegion>(&shape))
            return {s->center.x - s->radius, s->center.y - s->radius,
                    s->center.x + s->radius, s->center.y + s->radius};
        const auto& p = std::get<PolygonRegion>(shape);
        detail::Box b{p.vertices[0].x, p.vertices[0].y, p.vertices[0].x, p.vertices[0].y};
        for (const Point2& v : p.vertices) {
            b.x0 = std::min(b.x0, v.x); b.x1 = std::max(b.x1, v.x);
            b.y0 = std::min(b.y0, v.y); b.y1 = std::max(b.y1, v.y);
        }
        return b;
    }
};

namespace detail {

// ear clipping for simple polygons; input orientation arbitrary
inline std::vector<std::array<Point2, 3>> triangulate_polygon(std::vector<Point2> vs) {
    std::vector<std::array<Point2, 3>> out;
    if (vs.size() < 3) return out;
    if (polygon_area_signed(vs) < 0) std::reverse(vs.begin(), vs.end());
    std::vector<std::size_t> idx(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) idx[i] = i;

    const auto inside_tri = [](Point2 p, Point2 a, Point2 b, Point2 c) {
        const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
        return d1 >= 0 && d2 >= 0 && d3 >= 0;
    };

    std::size_t guard = 0;
    while (idx.size() > 3 && guard < vs.size() * vs.size() + 16) {
        ++guard;
        bool clipped = false;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const std::size_t i0 = idx[(i + idx.size() - 1) % idx.size()];
            const std::size_t i1 = idx[i];
            const std::size_t i2 = idx[(i + 1) % idx.size()];
            const Point2 a = vs[i0], b = vs[i1], c = vs[i2];
            if (cross(b - a, c - a) <= 1e-18) continue; // reflex or degenerate
            bool ear = true;
            for (std::size_t j : idx) {
                if (j == i0 || j == i1 || j == i2) continue;
                if (inside_tri(vs[j], a, b, c)) { ear = false; break; }
            }
            if (!ear) continue;
            out.push_back({a, b, c});
            idx.erase(idx.begin() + long(i));
            clipped = true;
            break;
        }
        if (!clipped) break; // numerically stuck; fall through with the remainder fan
    }
    if (idx.size() == 3) {
        out.push_back({vs[idx[0]], vs[idx[1]], vs[idx[2]]});
    } else if (idx.size() > 3) {
        for (std::size_t i = 1; i + 1 < idx.size(); ++i)
            out.push_back({vs[idx[0]], vs[idx[i]], vs[idx[i + 1]]});
    }
    return out;
}

} // namespace detail

// Adaptive integral of a scalar field over a region, absolute error target
// tol.  Disks and sectors integrate in polar coordinates; polygons are
// ear-clipped and refined per triangle.
template <class F> // f(Point2) -> double
double integrate_region(const RegionSpec& region, const F& f, double tol) {
    if (tol <= 0) throw Error("integrate_region: tol must be positive");
    if (const auto* d = std::get_if<DiskRegion>(&region.shape)) {
        const Point2 c = d->center;
        return integrate_rect(
            [&](double rho, double theta) { return f(c + rho * unit_dir(theta)) * rho; },
            0.0, d->radius, 0.0, two_pi, tol);
    }
    if (const auto* s = std::get_if<SectorRegion>(&region.shape)) {
        const Point2 c = s->center;
        return integrate_rect(
            [&](double rho, double theta) { return f(c + rho * unit_dir(theta)) * rho; },
            0.0, s->radius, s->angle_start, s->angle_end, tol);
    }
    const auto& p = std::get<PolygonRegion>(region.shape);
    return integrate_triangles(f, detail::triangulate_polygon(p.vertices), tol);
}

} // namespace bvrelax
