#pragma once
#include <array>
#include <memory>
#include <optional>
#include <random>

#include "bvrelax/geometry.hpp"
#include "bvrelax/quadrature.hpp"

namespace bvrelax {

struct DegenerateTriangleError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// DiskMesh — polar triangulation of the closed unit disk: a center vertex,
// nRings concentric rings, the same angular grid on every ring.
// ---------------------------------------------------------------------------

struct DiskMesh {
    int n_rings = 0;
    std::vector<double> angles;            // sorted, in [0, 2*pi)
    std::vector<Point2> vertices;          // index 0 = center, then ring-major
    std::vector<std::array<int, 3>> triangles; // positively oriented
    std::vector<int> boundary_vertices;    // outer ring, counterclockwise

    [[nodiscard]] int n_angular() const { return int(angles.size()); }
    [[nodiscard]] int vertex_index(int ring, int k) const { return 1 + (ring - 1) * n_angular() + k; }
    [[nodiscard]] double ring_radius(int ring) const { return double(ring) / double(n_rings); }

    static DiskMesh polar(int n_rings, int n_angular) {
        std::vector<double> angles(static_cast<std::size_t>(n_angular));
        for (int k = 0; k < n_angular; ++k) angles[std::size_t(k)] = two_pi * k / n_angular;
        return polar_with_angles(n_rings, std::move(angles));
    }

    static DiskMesh polar_with_angles(int n_rings, std::vector<double> angles) {
        if (n_rings < 1 || angles.size() < 3) throw Error("DiskMesh: bad resolution");
        DiskMesh m;
        m.n_rings = n_rings;
        m.angles = std::move(angles);
        const int na = m.n_angular();
        m.vertices.reserve(std::size_t(1 + n_rings * na));
        m.vertices.push_back({0, 0});
        for (int j = 1; j <= n_rings; ++j) {
            const double rho = double(j) / n_rings;
            for (int k = 0; k < na; ++k) m.vertices.push_back(rho * unit_dir(m.angles[std::size_t(k)]));
        }
        for (int k = 0; k < na; ++k)
            m.triangles.push_back({0, m.vertex_index(1, k), m.vertex_index(1, (k + 1) % na)});
        for (int j = 1; j < n_rings; ++j)
            for (int k = 0; k < na; ++k) {
                const int k1 = (k + 1) % na;
                const int a = m.vertex_index(j, k), b = m.vertex_index(j + 1, k);
                const int c = m.vertex_index(j + 1, k1), d = m.vertex_index(j, k1);
                m.triangles.push_back({a, b, c});
                m.triangles.push_back({a, c, d});
            }
        m.boundary_vertices.resize(std::size_t(na));
        for (int k = 0; k < na; ++k) m.boundary_vertices[std::size_t(k)] = m.vertex_index(n_rings, k);
        return m;
    }

    [[nodiscard]] double covered_area() const {
        double s = 0.0;
        for (const auto& t : triangles)
            s += 0.5 * std::abs(cross(vertices[std::size_t(t[1])] - vertices[std::size_t(t[0])],
                                      vertices[std::size_t(t[2])] - vertices[std::size_t(t[0])]));
        return s;
    }
};

// ---------------------------------------------------------------------------
// DiscreteMap — piecewise affine map on a DiskMesh: one value per vertex.
// ---------------------------------------------------------------------------

struct DiscreteMap {
    std::shared_ptr<const DiskMesh> mesh;
    std::vector<Point2> values;

    DiscreteMap() = default;
    explicit DiscreteMap(std::shared_ptr<const DiskMesh> m)
        : mesh(std::move(m)), values(mesh->vertices.size()) {}
    explicit DiscreteMap(const DiskMesh& m) : DiscreteMap(std::make_shared<const DiskMesh>(m)) {}

    // 2x2 gradient of the affine map on triangle t, columns d/dx, d/dy
    [[nodiscard]] std::array<double, 4> triangle_gradient(std::size_t t) const {
        const auto& tr = mesh->triangles[t];
        const Point2 p0 = mesh->vertices[std::size_t(tr[0])];
        const Point2 e1 = mesh->vertices[std::size_t(tr[1])] - p0;
        const Point2 e2 = mesh->vertices[std::size_t(tr[2])] - p0;
        const double det = cross(e1, e2);
        if (std::abs(det) < 2e-14)
            throw DegenerateTriangleError("DiscreteMap: source triangle area below 1e-14");
        const Point2 q0 = values[std::size_t(tr[0])];
        const Point2 f1 = values[std::size_t(tr[1])] - q0;
        const Point2 f2 = values[std::size_t(tr[2])] - q0;
        // [f1 f2] * inverse([e1 e2])
        return {(f1.x * e2.y - f2.x * e1.y) / det, (f2.x * e1.x - f1.x * e2.x) / det,
                (f1.y * e2.y - f2.y * e1.y) / det, (f2.y * e1.x - f1.y * e2.x) / det};
    }

    // Piecewise affine evaluation in the polar parameter chart (rho, theta).
    // Inside the innermost ring the map is the cone over the ring-1 trace, so
    // the boundary trace restricted to |x| = 1 is piecewise linear in theta.
    [[nodiscard]] Point2 eval_polar(double rho, double theta) const {
        const int na = mesh->n_angular();
        const double th = wrap_angle(theta);
        auto it = std::upper_bound(mesh->angles.begin(), mesh->angles.end(), th);
        const int k = (it == mesh->angles.begin()) ? na - 1 : int(it - mesh->angles.begin()) - 1;
        const int k1 = (k + 1) % na;
        const double a0 = mesh->angles[std::size_t(k)];
        double a1 = mesh->angles[std::size_t(k1)];
        double t = th;
        if (k1 == 0) { a1 += two_pi; if (t < a0) t += two_pi; }
        const double u = (a1 > a0) ? (t - a0) / (a1 - a0) : 0.0;

        const double r1 = 1.0 / mesh->n_rings;
        rho = std::clamp(rho, 0.0, 1.0);
        if (rho <= r1) {
            const Point2 ringval = values[std::size_t(mesh->vertex_index(1, k))] +
                                   u * (values[std::size_t(mesh->vertex_index(1, k1))] -
                                        values[std::size_t(mesh->vertex_index(1, k))]);
            const double w = rho / r1;
            return (1.0 - w) * values[0] + w * ringval;
        }
        int j = std::min(int(rho * mesh->n_rings), mesh->n_rings - 1);
        if (rho <= mesh->ring_radius(j)) j = std::max(1, j - 1);
        const double rj = mesh->ring_radius(j), rj1 = mesh->ring_radius(j + 1);
        const double w = (rho - rj) / (rj1 - rj);
        const Point2 vjk = values[std::size_t(mesh->vertex_index(j, k))];
        const Point2 vj1k = values[std::size_t(mesh->vertex_index(j + 1, k))];
        const Point2 vj1k1 = values[std::size_t(mesh->vertex_index(j + 1, k1))];
        const Point2 vjk1 = values[std::size_t(mesh->vertex_index(j, k1))];
        // quad split along the (j,k)-(j+1,k+1) diagonal, matching the triangles
        if (w >= u) {
            const double l1 = w - u, l2 = u;
            return (1 - l1 - l2) * vjk + l1 * vj1k + l2 * vj1k1;
        }
        const double l2 = w, l3 = u - w;
        return (1 - l2 - l3) * vjk + l2 * vj1k1 + l3 * vjk1;
    }

    // crude upper estimate of the Lipschitz constant of the chart evaluation
    [[nodiscard]] double lipschitz_estimate() const {
        const int na = mesh->n_angular();
        double c = 0.0;
        const double r1 = 1.0 / mesh->n_rings;
        for (int k = 0; k < na; ++k) {
            const int k1 = (k + 1) % na;
            const double dth = wrap_angle(mesh->angles[std::size_t(k1)] - mesh->angles[std::size_t(k)]);
            const double radial = dist(values[std::size_t(mesh->vertex_index(1, k))], values[0]) / r1;
            const double angular = dist(values[std::size_t(mesh->vertex_index(1, k1))],
                                        values[std::size_t(mesh->vertex_index(1, k))]) /
                                   std::max(dth, 1e-12) / r1;
            c = std::max(c, std::hypot(radial, angular));
        }
        for (int j = 1; j <= mesh->n_rings; ++j) {
            const double rj = mesh->ring_radius(j);
            const double dr = (j < mesh->n_rings) ? mesh->ring_radius(j + 1) - rj : 1.0 / mesh->n_rings;
            for (int k = 0; k < na; ++k) {
                const int k1 = (k + 1) % na;
                const double dth = wrap_angle(mesh->angles[std::size_t(k1)] - mesh->angles[std::size_t(k)]);
                const double radial = (j < mesh->n_rings)
                                          ? dist(values[std::size_t(mesh->vertex_index(j + 1, k))],
                                                 values[std::size_t(mesh->vertex_index(j, k))]) / dr
                                          : 0.0;
                const double angular = dist(values[std::size_t(mesh->vertex_index(j, k1))],
                                            values[std::size_t(mesh->vertex_index(j, k))]) /
                                       std::max(dth, 1e-12) / rj;
                c = std::max(c, std::hypot(radial, angular));
            }
        }
        return c;
    }
};

// Σ_T area(T) · |det ∇v_T|; exact for piecewise affine maps.  The per-triangle
// value reduces to half the absolute target-edge cross product.
inline double jacobian_mass(const DiscreteMap& map) {
    double s = 0.0;
    for (std::size_t t = 0; t < map.mesh->triangles.size(); ++t) {
        const auto& tr = map.mesh->triangles[t];
        const Point2 p0 = map.mesh->vertices[std::size_t(tr[0])];
        const Point2 e1 = map.mesh->vertices[std::size_t(tr[1])] - p0;
        const Point2 e2 = map.mesh->vertices[std::size_t(tr[2])] - p0;
        if (0.5 * std::abs(cross(e1, e2)) < 1e-14)
            throw DegenerateTriangleError("jacobian_mass: source triangle area below 1e-14");
        const Point2 q0 = map.values[std::size_t(tr[0])];
        const Point2 f1 = map.values[std::size_t(tr[1])] - q0;
        const Point2 f2 = map.values[std::size_t(tr[2])] - q0;
        s += 0.5 * std::abs(cross(f1, f2));
    }
    return s;
}

// v(x) = |x| * phi(x/|x|), the homogeneous competitor contained in the
// admissible class for every boundary datum.
inline DiscreteMap cone_extension(const SampledCircleMap& boundary, std::shared_ptr<const DiskMesh> mesh) {
    DiscreteMap v(std::move(mesh));
    const DiskMesh& m = *v.mesh;
    v.values[0] = {0, 0};
    for (int j = 1; j <= m.n_rings; ++j) {
        const double rho = m.ring_radius(j);
        for (int k = 0; k < m.n_angular(); ++k)
            v.values[std::size_t(m.vertex_index(j, k))] = rho * boundary.eval(m.angles[std::size_t(k)]);
    }
    return v;
}

inline DiscreteMap cone_extension(const SampledCircleMap& boundary, const DiskMesh& mesh) {
    return cone_extension(boundary, std::make_shared<const DiskMesh>(mesh));
}

// ---------------------------------------------------------------------------
// tilde_gamma — the closed polygon through the jump values of a piecewise
// constant circle datum, zero-length edges collapsed.
// ---------------------------------------------------------------------------

inline BoundaryLoop tilde_gamma(const StepCircleMap& gamma) {
    return BoundaryLoop(gamma.values).collapsed(1e-12);
}

// ---------------------------------------------------------------------------
// Closed forms for recognized loop classes
// ---------------------------------------------------------------------------

namespace detail {

struct BouquetPetals {
    std::vector<Point2> petal_a, petal_b; // simple cycles through the base vertex
    double area_a = 0.0, area_b = 0.0;
};

// Recognize the double-eight pattern: two simple petals sharing exactly the
// base vertex, each traversed once in each orientation, interleaved
// A B A' B' (the commutator word).  Near-coincident base vertices within
// snap_tol are treated as shared.
inline std::optional<BouquetPetals> recognize_two_petal_bouquet(std::span<const Point2> vs,
                                                                double snap_tol = 1e-9) {
    const std::size_t n = vs.size();
    if (n < 6) return std::nullopt;

    // candidate base: the most repeated vertex value
    std::size_t base_idx = n;
    int best_count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        int count = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (points_equal(vs[i], vs[j], snap_tol)) ++count;
        if (count > best_count) { best_count = count; base_idx = i; }
    }
    if (base_idx == n || best_count != 4) return std::nullopt;
    const Point2 base = vs[base_idx];

    std::vector<std::size_t> marks;
    for (std::size_t i = 0; i < n; ++i)
        if (points_equal(vs[i], base, snap_tol)) marks.push_back(i);

    // split the cyclic walk at the base occurrences into 4 petal traversals
    std::vector<std::vector<Point2>> petals;
    for (std::size_t m = 0; m < marks.size(); ++m) {
        std::vector<Point2> petal = {base};
        for (std::size_t i = (marks[m] + 1) % n; i != marks[(m + 1) % marks.size()]; i = (i + 1) % n)
            petal.push_back(vs[i]);
        if (petal.size() < 3) return std::nullopt;
        petals.push_back(std::move(petal));
    }

    const auto same_forward = [&](const std::vector<Point2>& p, const std::vector<Point2>& q) {
        if (p.size() != q.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!points_equal(p[i], q[i], snap_tol)) return false;
        return true;
    };
    const auto same_reversed = [&](const std::vector<Point2>& p, const std::vector<Point2>& q) {
        if (p.size() != q.size()) return false;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (!points_equal(p[i], q[p.size() - i], snap_tol)) return false;
        return true;
    };

    // commutator pattern: petals 0/2 and 1/3 are mutual reversals
    if (!same_reversed(petals[0], petals[2]) || !same_reversed(petals[1], petals[3])) return std::nullopt;
    if (same_forward(petals[0], petals[1]) || same_reversed(petals[0], petals[1])) return std::nullopt;

    for (const auto& p : {petals[0], petals[1]})
        if (!is_simple_polygon(std::span<const Point2>(p.data(), p.size()))) return std::nullopt;

    // petals must share only the base vertex, with non-crossing edges
    for (std::size_t i = 1; i < petals[0].size(); ++i)
        for (std::size_t j = 1; j < petals[1].size(); ++j)
            if (points_equal(petals[0][i], petals[1][j], snap_tol)) return std::nullopt;
    for (std::size_t i = 0; i < petals[0].size(); ++i)
        for (std::size_t j = 0; j < petals[1].size(); ++j) {
            const Point2 a = petals[0][i], b = petals[0][(i + 1) % petals[0].size()];
            const Point2 c = petals[1][j], d = petals[1][(j + 1) % petals[1].size()];
            if (segments_properly_intersect(a, b, c, d)) return std::nullopt;
        }

    BouquetPetals out;
    out.petal_a = petals[0];
    out.petal_b = petals[1];
    out.area_a = std::abs(polygon_area_signed(std::span<const Point2>(out.petal_a.data(), out.petal_a.size())));
    out.area_b = std::abs(polygon_area_signed(std::span<const Point2>(out.petal_b.data(), out.petal_b.size())));
    return out;
}

} // namespace detail

// Exact value of the Plateau functional for recognized loop classes:
//   (a) simple polygon -> enclosed area,
//   (b) coherently oriented d-fold traversal of a simple polygon -> |d| * area,
//   (c) two-petal commutator bouquet -> 2 * min(petal areas).
// Returns nullopt when unrecognized.
inline std::optional<double> plateau_closed_form(const BoundaryLoop& loop0) {
    const BoundaryLoop loop = loop0.collapsed();
    const std::size_t n = loop.vertices.size();
    if (n < 3) return 0.0; // point or back-and-forth segment encloses nothing
    const auto vs = std::span<const Point2>(loop.vertices.data(), n);

    if (detail::is_simple_polygon(vs)) return std::abs(detail::polygon_area_signed(vs));

    for (std::size_t p = 3; p <= n / 2; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i)
            periodic = detail::points_equal(vs[i], vs[i % p], 1e-12);
        if (!periodic) continue;
        const auto base = vs.subspan(0, p);
        if (detail::is_simple_polygon(base))
            return double(n / p) * std::abs(detail::polygon_area_signed(base));
    }

    if (auto bouquet = detail::recognize_two_petal_bouquet(vs))
        return 2.0 * std::min(bouquet->area_a, bouquet->area_b);

    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constructive bouquet competitor: contract both copies of the smaller-word
// petals through their triangles (cost = 2 min area), then unwind the
// remaining back-tracking word at zero Jacobian cost.
// ---------------------------------------------------------------------------

namespace detail {

// evaluate the two-stage null homotopy at polar point (rho, theta) given the
// four petal traversals of the loop laid out on [0,1) by arc-length fraction
struct BouquetHomotopy {
    BoundaryLoop loop;                 // collapsed 12-ish vertex loop
    std::vector<double> word_breaks;   // fractions of arc length at base hits: 0=w0<w1<w2<w3<1
    Point2 base;

    [[nodiscard]] Point2 eval(double rho, double theta) const {
        const double u = wrap_angle(theta) / two_pi; // loop fraction
        const auto seg = [&](int i) { return std::pair{word_breaks[std::size_t(i)],
                                                       i + 1 < 4 ? word_breaks[std::size_t(i + 1)] : 1.0}; };
        int w = 3;
        for (int i = 0; i < 4; ++i)
            if (u >= seg(i).first && u < seg(i).second) { w = i; break; }
        const auto [w0, w1] = seg(w);
        const double local = (u - w0) / (w1 - w0); // position inside the petal word

        if (rho >= 0.5) {
            // stage 1: contract petal copies A (w=0) and A' (w=2) toward the base
            const double s = 2.0 * (1.0 - rho); // 0 at boundary, 1 at rho = 1/2
            Point2 v = loop.at_fraction(u);
            if (w == 0 || w == 2) v = base + (1.0 - s) * (v - base);
            return v;
        }
        // stage 2: word is (base) B (base) B'; unwind B against its reversal.
        // The arc between them tracks the turning point B(1-s) so every seam
        // stays continuous and the whole image lies on the petal curve.
        const double s = 1.0 - 2.0 * rho; // 0 at rho = 1/2, 1 at center
        if (w == 1) {
            const double t = std::min(local, 1.0 - s);
            return loop.at_fraction(w0 + t * (w1 - w0));
        }
        if (w == 3) {
            const double t = std::max(local, s);
            return loop.at_fraction(w0 + t * (w1 - w0));
        }
        if (w == 2) {
            const auto [b0, b1] = seg(1);
            return loop.at_fraction(b0 + (1.0 - s) * (b1 - b0));
        }
        return base;
    }
};

inline std::optional<BouquetHomotopy> make_bouquet_homotopy(const BoundaryLoop& loop0) {
    const BoundaryLoop loop = loop0.collapsed();
    const auto vs = std::span<const Point2>(loop.vertices.data(), loop.vertices.size());
    auto bouquet = recognize_two_petal_bouquet(vs);
    if (!bouquet) return std::nullopt;
    const Point2 base = bouquet->petal_a[0];

    std::vector<std::size_t> marks;
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (points_equal(vs[i], base, 1e-9)) marks.push_back(i);
    if (marks.size() != 4) return std::nullopt;

    // rotate the walk to a base hit so the word breaks start at fraction 0,
    // beginning with the smaller petal pair (the one contracted in stage 1)
    const std::size_t start = bouquet->area_a <= bouquet->area_b ? marks[0] : marks[1];
    std::vector<Point2> rotated;
    rotated.reserve(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) rotated.push_back(vs[(start + i) % vs.size()]);

    BouquetHomotopy h;
    h.base = base;
    h.loop = BoundaryLoop(std::move(rotated));
    const double L = h.loop.length();
    double acc = 0.0;
    for (std::size_t i = 0; i < h.loop.vertices.size(); ++i) {
        if (points_equal(h.loop.vertices[i], base, 1e-9)) h.word_breaks.push_back(acc / L);
        acc += dist(h.loop.vertices[i], h.loop.vertices[(i + 1) % h.loop.vertices.size()]);
    }
    if (h.word_breaks.size() != 4 || h.word_breaks.front() != 0.0) return std::nullopt;
    return h;
}

} // namespace detail

// Sample the bouquet null-homotopy on the mesh.  Returns nullopt when the loop
// is not a recognized two-petal bouquet.  The boundary row equals the
// constant-speed loop parametrization.
inline std::optional<DiscreteMap> bouquet_constructive_map(const BoundaryLoop& loop,
                                                           std::shared_ptr<const DiskMesh> mesh) {
    auto h = detail::make_bouquet_homotopy(loop);
    if (!h) return std::nullopt;
    DiscreteMap v(std::move(mesh));
    const DiskMesh& m = *v.mesh;
    v.values[0] = h->base;
    for (int j = 1; j <= m.n_rings; ++j)
        for (int k = 0; k < m.n_angular(); ++k)
            v.values[std::size_t(m.vertex_index(j, k))] =
                h->eval(m.ring_radius(j), m.angles[std::size_t(k)]);
    return v;
}

inline std::optional<DiscreteMap> bouquet_constructive_map(const BoundaryLoop& loop, const DiskMesh& mesh) {
    return bouquet_constructive_map(loop, std::make_shared<const DiskMesh>(mesh));
}

// ---------------------------------------------------------------------------
// Smoothed L1-Jacobian minimization over interior vertex values
// ---------------------------------------------------------------------------

struct PlateauOptions {
    int n_rings = 24;
    int n_angular = 96;
    std::uint64_t seed = 0;
    int max_iters_per_stage = 400;
    double rel_tol = 1e-6;
    std::vector<double> smoothing_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    int jitter_starts = 2;
    double quad_tol = 1e-4;        // lower-bound quadtree tolerance
    bool always_optimize = false;  // run the mesh optimizer even when a closed form applies
    bool constructive_init = true; // seed the bouquet homotopy as a start when recognized
};

struct OptimizeResult {
    DiscreteMap map;
    double mass = 0.0; // exact jacobian_mass of the final iterate
    bool converged = true;
    int iterations = 0;
    std::string init_name;
};

namespace detail {

// objective Σ_T A_T (sqrt(det_T^2 + eps^2) - eps) and its gradient wrt the
// free vertex values; det_T = cross(target edges) / (2 A_T)
struct SmoothedMassProblem {
    const DiskMesh* mesh;
    std::vector<double> source_area;

    explicit SmoothedMassProblem(const DiskMesh& m) : mesh(&m) {
        source_area.reserve(m.triangles.size());
        for (const auto& t : m.triangles)
            source_area.push_back(0.5 * std::abs(cross(m.vertices[std::size_t(t[1])] - m.vertices[std::size_t(t[0])],
                                                       m.vertices[std::size_t(t[2])] - m.vertices[std::size_t(t[0])])));
    }

    [[nodiscard]] double value(const std::vector<Point2>& q, double eps) const {
        double E = 0.0;
        for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
            const auto& tr = mesh->triangles[t];
            const double c = cross(q[std::size_t(tr[1])] - q[std::size_t(tr[0])],
                                   q[std::size_t(tr[2])] - q[std::size_t(tr[0])]);
            const double A = source_area[t];
            const double det = c / (2.0 * A);
            E += A * (std::sqrt(det * det + eps * eps) - eps);
        }
        return E;
    }

    void gradient(const std::vector<Point2>& q, double eps, std::vector<Point2>& g) const {
        std::fill(g.begin(), g.end(), Point2{0, 0});
        for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
            const auto& tr = mesh->triangles[t];
            const Point2 q0 = q[std::size_t(tr[0])], q1 = q[std::size_t(tr[1])], q2 = q[std::size_t(tr[2])];
            const double c = cross(q1 - q0, q2 - q0);
            const double A = source_area[t];
            const double det = c / (2.0 * A);
            const double w = det / (2.0 * std::sqrt(det * det + eps * eps)); // dE/dc
            const Point2 d1{w * (q2.y - q0.y), -w * (q2.x - q0.x)};
            const Point2 d2{-w * (q1.y - q0.y), w * (q1.x - q0.x)};
            g[std::size_t(tr[1])] = g[std::size_t(tr[1])] + d1;
            g[std::size_t(tr[2])] = g[std::size_t(tr[2])] + d2;
            g[std::size_t(tr[0])] = g[std::size_t(tr[0])] - d1 - d2;
        }
    }
};

// gradient descent with Barzilai-Borwein step and Armijo backtracking,
// warm-started through the smoothing schedule
inline std::pair<bool, int> minimize_stagewise(const SmoothedMassProblem& prob, std::vector<Point2>& q,
                                               const std::vector<char>& free_vertex, const PlateauOptions& opts) {
    const std::size_t nv = q.size();
    std::vector<Point2> g(nv), g_prev(nv), q_prev(nv), trial(nv);
    bool all_converged = true;
    int total_iters = 0;

    for (double eps : opts.smoothing_schedule) {
        double E = prob.value(q, eps);
        prob.gradient(q, eps, g);
        for (std::size_t i = 0; i < nv; ++i)
            if (!free_vertex[i]) g[i] = {0, 0};
        double step = 1.0;
        bool stage_converged = false;

        for (int it = 0; it < opts.max_iters_per_stage; ++it) {
            ++total_iters;
            double gnorm2 = 0.0;
            for (const Point2& gi : g) gnorm2 += norm2(gi);
            if (gnorm2 < 1e-30) { stage_converged = true; break; }

            // Armijo backtracking from the BB step
            double E_new = E;
            double s = step;
            for (int bt = 0; bt < 40; ++bt) {
                for (std::size_t i = 0; i < nv; ++i) trial[i] = q[i] - s * g[i];
                E_new = prob.value(trial, eps);
                if (E_new <= E - 1e-4 * s * gnorm2) break;
                s *= 0.5;
            }
            q_prev = q;
            g_prev = g;
            q = trial;
            const double rel_dec = (E - E_new) / std::max(std::abs(E), 1e-30);
            E = E_new;
            prob.gradient(q, eps, g);
            for (std::size_t i = 0; i < nv; ++i)
                if (!free_vertex[i]) g[i] = {0, 0};

            if (rel_dec >= 0 && rel_dec < opts.rel_tol) { stage_converged = true; break; }

            // BB1 step for the next iteration
            double sy = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < nv; ++i) {
                const Point2 ds = q[i] - q_prev[i];
                const Point2 dy = g[i] - g_prev[i];
                ss += norm2(ds);
                sy += dot(ds, dy);
            }
            step = (sy > 1e-30) ? std::clamp(ss / sy, 1e-12, 1e6) : std::max(s, 1e-12);
        }
        all_converged = all_converged && stage_converged;
    }
    return {all_converged, total_iters};
}

} // namespace detail

// Boundary values for the mesh's angular grid: constant-speed parametrization
// of a loop, or direct sampling of an angle-parametrized map.
inline std::vector<Point2> boundary_values_from_loop(const BoundaryLoop& loop, const DiskMesh& mesh) {
    std::vector<Point2> out(std::size_t(mesh.n_angular()));
    for (int k = 0; k < mesh.n_angular(); ++k)
        out[std::size_t(k)] = loop.at_fraction(mesh.angles[std::size_t(k)] / two_pi);
    return out;
}

inline std::vector<Point2> boundary_values_from_map(const SampledCircleMap& map, const DiskMesh& mesh) {
    std::vector<Point2> out(std::size_t(mesh.n_angular()));
    for (int k = 0; k < mesh.n_angular(); ++k) out[std::size_t(k)] = map.eval(mesh.angles[std::size_t(k)]);
    return out;
}

// Minimize the smoothed Jacobian mass over interior vertex values with the
// boundary row fixed.  Deterministic multi-start: cone extension, centroid
// collapse, seeded jittered cones, plus the constructive bouquet homotopy
// when recognized; returns the start with the smallest exact mass.
inline OptimizeResult plateau_upper_on_mesh(std::shared_ptr<const DiskMesh> mesh_ptr,
                                            const std::vector<Point2>& boundary_values,
                                            const PlateauOptions& opts,
                                            const std::optional<DiscreteMap>& extra_start = std::nullopt) {
    const DiskMesh& mesh = *mesh_ptr;
    if (int(boundary_values.size()) != mesh.n_angular())
        throw Error("plateau_upper: boundary sample count must match the mesh angular resolution");

    std::vector<char> free_vertex(mesh.vertices.size(), 1);
    for (int b : mesh.boundary_vertices) free_vertex[std::size_t(b)] = 0;

    SampledCircleMap boundary_map;
    boundary_map.angles = mesh.angles;
    boundary_map.values = boundary_values;

    Point2 centroid{0, 0};
    for (const Point2& v : boundary_values) centroid = centroid + v;
    centroid = centroid / double(boundary_values.size());
    double spread = 0.0;
    for (const Point2& v : boundary_values) spread = std::max(spread, dist(v, centroid));

    struct Start { std::string name; DiscreteMap map; };
    std::vector<Start> starts;

    starts.push_back({"cone", cone_extension(boundary_map, mesh_ptr)});

    DiscreteMap collapse(mesh_ptr);
    for (Point2& v : collapse.values) v = centroid;
    for (int k = 0; k < mesh.n_angular(); ++k)
        collapse.values[std::size_t(mesh.vertex_index(mesh.n_rings, k))] = boundary_values[std::size_t(k)];
    starts.push_back({"centroid-collapse", std::move(collapse)});

    for (int s = 0; s < opts.jitter_starts; ++s) {
        std::mt19937_64 rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * std::uint64_t(s + 1)));
        std::uniform_real_distribution<double> noise(-0.25 * spread, 0.25 * spread);
        DiscreteMap jittered = cone_extension(boundary_map, mesh_ptr);
        for (std::size_t i = 0; i < jittered.values.size(); ++i)
            if (free_vertex[i]) jittered.values[i] = jittered.values[i] + Point2{noise(rng), noise(rng)};
        starts.push_back({"jitter-" + std::to_string(s), std::move(jittered)});
    }

    if (extra_start) starts.push_back({"constructive", *extra_start});

    detail::SmoothedMassProblem prob(mesh);
    OptimizeResult best;
    best.mass = std::numeric_limits<double>::infinity();
    for (auto& start : starts) {
        for (int k = 0; k < mesh.n_angular(); ++k)
            start.map.values[std::size_t(mesh.vertex_index(mesh.n_rings, k))] = boundary_values[std::size_t(k)];
        auto [converged, iters] = detail::minimize_stagewise(prob, start.map.values, free_vertex, opts);
        const double mass = jacobian_mass(start.map);
        if (mass < best.mass) {
            best.map = std::move(start.map);
            best.mass = mass;
            best.converged = converged;
            best.iterations = iters;
            best.init_name = start.name;
        }
    }
    return best;
}

inline OptimizeResult plateau_upper(const BoundaryLoop& loop, const PlateauOptions& opts = {}) {
    auto mesh = std::make_shared<const DiskMesh>(DiskMesh::polar(opts.n_rings, opts.n_angular));
    std::optional<DiscreteMap> constructive;
    if (opts.constructive_init) constructive = bouquet_constructive_map(loop, mesh);
    return plateau_upper_on_mesh(mesh, boundary_values_from_loop(loop, *mesh), opts, constructive);
}

inline OptimizeResult plateau_upper(const SampledCircleMap& boundary, const PlateauOptions& opts = {}) {
    auto mesh = std::make_shared<const DiskMesh>(DiskMesh::polar(opts.n_rings, opts.n_angular));
    return plateau_upper_on_mesh(mesh, boundary_values_from_map(boundary, *mesh), opts);
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

// windingAreaIntegral is a lower bound for P up to its own tolerance.
inline double plateau_lower(const BoundaryLoop& loop, double tol) {
    return winding_area_integral(loop, tol);
}

struct PlateauCertificate {
    enum class Method { closed_form, constructive, mesh_optimizer, cone_extension };

    double lower = 0.0;       // max(0, winding integral - tol): certified one-sided
    double upper = 0.0;       // min over candidates, floored at `lower`
    Method upper_method = Method::closed_form;
    double raw_upper = 0.0;   // best candidate before the floor
    double mesh_slack = 0.0;  // upper - raw_upper
    double lower_tol = 0.0;
    int iterations = 0;
    bool converged = true;
    int n_rings = 0, n_angular = 0;

    [[nodiscard]] double gap() const { return upper - lower; }
};

inline const char* to_string(PlateauCertificate::Method m) {
    switch (m) {
        case PlateauCertificate::Method::closed_form: return "closedForm";
        case PlateauCertificate::Method::constructive: return "constructive";
        case PlateauCertificate::Method::mesh_optimizer: return "meshOptimizer";
        case PlateauCertificate::Method::cone_extension: return "coneExtension";
    }
    return "?";
}

inline PlateauCertificate plateau_certify(const BoundaryLoop& loop, const PlateauOptions& opts = {}) {
    PlateauCertificate cert;
    cert.lower_tol = opts.quad_tol;
    cert.n_rings = opts.n_rings;
    cert.n_angular = opts.n_angular;
    const double wint = winding_area_integral(loop, opts.quad_tol);
    cert.lower = std::max(0.0, wint - opts.quad_tol);

    double best = std::numeric_limits<double>::infinity();
    auto method = PlateauCertificate::Method::cone_extension;

    const auto closed = plateau_closed_form(loop);
    if (closed) {
        best = *closed;
        method = PlateauCertificate::Method::closed_form;
    }

    const BoundaryLoop collapsed = loop.collapsed();
    const bool degenerate = collapsed.vertices.size() < 3 || collapsed.length() <= 0;

    if (!degenerate && (!closed || opts.always_optimize)) {
        auto mesh = std::make_shared<const DiskMesh>(DiskMesh::polar(opts.n_rings, opts.n_angular));
        std::optional<DiscreteMap> constructive;
        if (opts.constructive_init) constructive = bouquet_constructive_map(loop, mesh);
        if (constructive) {
            // the certificate candidate uses a refined sampling of the same
            // homotopy; the optimizer-mesh copy only seeds a start
            const auto fine = bouquet_constructive_map(
                loop, DiskMesh::polar(std::max(48, opts.n_rings), std::max(192, 2 * opts.n_angular)));
            const double cmass = jacobian_mass(*fine);
            if (cmass < best) { best = cmass; method = PlateauCertificate::Method::constructive; }
        }
        const auto opt = plateau_upper_on_mesh(mesh, boundary_values_from_loop(loop, *mesh), opts, constructive);
        cert.iterations = opt.iterations;
        cert.converged = opt.converged;
        if (opt.mass < best) {
            best = opt.mass;
            method = opt.init_name == "constructive" ? PlateauCertificate::Method::constructive
                                                     : PlateauCertificate::Method::mesh_optimizer;
        }
    }
    if (degenerate && !closed) { best = 0.0; method = PlateauCertificate::Method::closed_form; }

    cert.raw_upper = best;
    cert.upper = std::max(best, cert.lower); // coarse meshes may undershoot the certified lower bound
    cert.mesh_slack = cert.upper - cert.raw_upper;
    cert.upper_method = method;
    // the reported gap never claims more precision than the quadrature tolerance
    if (cert.upper > cert.lower_tol)
        cert.lower = std::max(0.0, std::min(cert.lower, cert.upper - cert.lower_tol));
    return cert;
}

// P̄(γ) = P(γ̃) for piecewise constant boundary data with finitely many jumps.
inline PlateauCertificate plateau_relaxed(const StepCircleMap& gamma, const PlateauOptions& opts = {}) {
    return plateau_certify(tilde_gamma(gamma), opts);
}

} // namespace bvrelax
