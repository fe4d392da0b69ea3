#include <catch2/catch.hpp>

#include "bvrelax/plateau.hpp"
#include "helpers.hpp"

using namespace bvrelax;
using namespace testing_helpers;

namespace {

PlateauOptions fast_opts(std::uint64_t seed = 0) {
    PlateauOptions o;
    o.n_rings = 12;
    o.n_angular = 48;
    o.seed = seed;
    o.jitter_starts = 1;
    return o;
}

SampledCircleMap circle_boundary(int degree, int n) {
    SampledCircleMap m;
    for (int k = 0; k < n; ++k) {
        const double t = two_pi * k / n;
        m.angles.push_back(t);
        m.values.push_back(unit_dir(degree * t));
    }
    return m;
}

} // namespace

TEST_CASE("tilde_gamma builds the jump polygon") {
    const auto tri = tilde_gamma(triple_step_map());
    REQUIRE(tri.vertices.size() == 3);
    CHECK(tri.length() == Approx(2.0 + std::sqrt(2.0)));

    const auto eight = tilde_gamma(butterfly_step_map());
    CHECK(eight.vertices.size() == 12); // all consecutive values distinct
    CHECK(polygon_winding(eight, {0.25, 0.25}) == 0);

    StepCircleMap constant;
    constant.arc_starts = {0.0, 2.0, 4.0};
    constant.values = {{1, 1}, {1, 1}, {1, 1}};
    CHECK(tilde_gamma(constant).vertices.size() == 1);
    CHECK(tilde_gamma(constant).length() == 0.0);
}

TEST_CASE("plateau_lower via the winding integral") {
    CHECK(plateau_lower(circle_loop(1, 256), 1e-4) == Approx(pi).margin(0.005));
    CHECK(plateau_lower(triangle_loop(), 1e-5) == Approx(0.5).margin(1e-5));
    CHECK(plateau_lower(double_eight_loop(), 1e-6) == Approx(0.0).margin(1e-9));
}

TEST_CASE("cone_extension formula and masses") {
    const auto mesh = DiskMesh::polar(8, 32);

    SampledCircleMap constant;
    for (int k = 0; k < 16; ++k) {
        constant.angles.push_back(two_pi * k / 16);
        constant.values.push_back({2.0, -1.0});
    }
    const auto cone_const = cone_extension(constant, mesh);
    CHECK(dist(cone_const.values[0], {0, 0}) == 0.0);
    const int mid = mesh.vertex_index(4, 0);
    CHECK(dist(cone_const.values[std::size_t(mid)], 0.5 * Point2{2.0, -1.0}) < 1e-12);
    CHECK(jacobian_mass(cone_const) == Approx(0.0).margin(1e-15));

    // degree-1 boundary: discrete mass approaches pi under refinement
    const auto coarse = cone_extension(circle_boundary(1, 64), DiskMesh::polar(6, 24));
    const auto fine = cone_extension(circle_boundary(1, 256), DiskMesh::polar(24, 96));
    CHECK(std::abs(jacobian_mass(fine) - pi) < std::abs(jacobian_mass(coarse) - pi));
    CHECK(jacobian_mass(fine) == Approx(pi).epsilon(0.01));

    // triangle boundary: evaluate the discrete objective as the oracle
    SampledCircleMap tri_boundary;
    const auto tri = triangle_loop();
    for (int k = 0; k < 96; ++k) {
        tri_boundary.angles.push_back(two_pi * k / 96);
        tri_boundary.values.push_back(tri.at_fraction(k / 96.0));
    }
    const double tri_mass = jacobian_mass(cone_extension(tri_boundary, DiskMesh::polar(24, 96)));
    CHECK(tri_mass >= 0.5 - 0.02);
}

TEST_CASE("jacobian_mass basics") {
    const auto mesh = DiskMesh::polar(16, 64);

    DiscreteMap identity(mesh);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) identity.values[i] = mesh.vertices[i];
    CHECK(jacobian_mass(identity) == Approx(mesh.covered_area()).margin(1e-12));
    CHECK(jacobian_mass(identity) == Approx(pi).epsilon(0.01));
    for (std::size_t t : {std::size_t(0), mesh.triangles.size() / 2}) {
        const auto g = identity.triangle_gradient(t);
        CHECK(g[0] == Approx(1.0).margin(1e-12));
        CHECK(g[1] == Approx(0.0).margin(1e-12));
        CHECK(g[2] == Approx(0.0).margin(1e-12));
        CHECK(g[3] == Approx(1.0).margin(1e-12));
    }

    DiscreteMap constant(mesh);
    for (Point2& v : constant.values) v = {3.0, 4.0};
    CHECK(jacobian_mass(constant) == 0.0);

    const auto cone2 = cone_extension(circle_boundary(2, 256), DiskMesh::polar(24, 96));
    CHECK(jacobian_mass(cone2) >= 2 * pi * (1 - 0.02));

    // maps factoring through a line have exactly zero mass (dyadic data)
    DiscreteMap line(mesh);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const double t = 0.25 * double(i % 64) / 64.0 + 0.5 * double(i % 3);
        line.values[i] = Point2{1.0, 2.0} * t + Point2{0.5, 0.25};
    }
    CHECK(jacobian_mass(line) == 0.0);
}

TEST_CASE("plateau_closed_form recognizes the spec classes") {
    const auto tri = plateau_closed_form(triangle_loop());
    REQUIRE(tri.has_value());
    CHECK(*tri == Approx(0.5));

    BoundaryLoop square_twice;
    for (int rep = 0; rep < 2; ++rep)
        for (const Point2& v : unit_square_loop().vertices) square_twice.vertices.push_back(v);
    const auto twice = plateau_closed_form(square_twice);
    REQUIRE(twice.has_value());
    CHECK(*twice == Approx(2.0));

    const auto eight = plateau_closed_form(double_eight_loop());
    REQUIRE(eight.has_value());
    CHECK(*eight == Approx(2.0 * std::min(0.5, 2.0)));

    // all values equal: degenerate point loop
    CHECK(plateau_closed_form(BoundaryLoop({{1, 1}, {1, 1}, {1, 1}})).value() == 0.0);

    // pentagram: self-intersecting, neither periodic nor a bouquet
    BoundaryLoop star;
    for (int k = 0; k < 5; ++k) star.vertices.push_back(unit_dir(two_pi * (2 * k % 5) / 5.0));
    CHECK_FALSE(plateau_closed_form(star).has_value());

    // back-tracking word a a^-1 b b^-1 is not the commutator pattern
    const auto a = butterfly_values();
    BoundaryLoop backtrack({a[0], a[1], a[2], a[0], a[2], a[1], a[0], a[3], a[4], a[0], a[4], a[3]});
    CHECK_FALSE(plateau_closed_form(backtrack).has_value());
}

TEST_CASE("near-bouquets snap within 1e-9 and fall back to bounds beyond") {
    auto perturbed = [](double delta) {
        auto loop = double_eight_loop();
        // move one base-vertex occurrence off the shared point
        loop.vertices[3] = loop.vertices[3] + Point2{delta, -delta};
        return loop;
    };
    const auto snapped = plateau_closed_form(perturbed(2e-10));
    REQUIRE(snapped.has_value());
    CHECK(*snapped == Approx(1.0).margin(1e-8));

    CHECK_FALSE(plateau_closed_form(perturbed(1e-6)).has_value());
}

TEST_CASE("smoothed mass gradient matches finite differences") {
    const auto mesh = DiskMesh::polar(4, 12);
    detail::SmoothedMassProblem prob(mesh);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point2> q(mesh.vertices.size());
    for (Point2& v : q) v = {u(rng), u(rng)};
    for (double eps : {1e-1, 1e-3}) {
        std::vector<Point2> g(q.size());
        prob.gradient(q, eps, g);
        const double h = 1e-6;
        for (std::size_t i : {std::size_t(0), q.size() / 3, q.size() - 2}) {
            for (int axis = 0; axis < 2; ++axis) {
                auto qp = q, qm = q;
                (axis == 0 ? qp[i].x : qp[i].y) += h;
                (axis == 0 ? qm[i].x : qm[i].y) -= h;
                const double fd = (prob.value(qp, eps) - prob.value(qm, eps)) / (2 * h);
                const double an = axis == 0 ? g[i].x : g[i].y;
                CHECK(an == Approx(fd).margin(1e-5 * (1 + std::abs(fd))));
            }
        }
    }
}

TEST_CASE("plateau_upper approaches the known values") {
    const auto tri = plateau_upper(triangle_loop(), fast_opts());
    CHECK(tri.mass == Approx(0.5).epsilon(0.03));

    const auto circ = plateau_upper(circle_loop(1, 128), fast_opts(1));
    CHECK(circ.mass == Approx(pi).epsilon(0.03));
}

TEST_CASE("constructive bouquet competitor certifies 2 min area") {
    const auto competitor = bouquet_constructive_map(double_eight_loop(), DiskMesh::polar(48, 192));
    REQUIRE(competitor.has_value());
    CHECK(jacobian_mass(*competitor) <= 1.0 * 1.02);
    CHECK(jacobian_mass(*competitor) >= 1.0 * 0.90);

    // a rotated walk (starting mid-petal) is recognized and rotated back
    BoundaryLoop rotated;
    const auto vs = double_eight_loop().vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) rotated.vertices.push_back(vs[(i + 5) % vs.size()]);
    const auto rot_comp = bouquet_constructive_map(rotated, DiskMesh::polar(48, 192));
    REQUIRE(rot_comp.has_value());
    CHECK(jacobian_mass(*rot_comp) == Approx(1.0).epsilon(0.02));
    CHECK(plateau_certify(rotated, fast_opts()).upper == Approx(1.0));

    CHECK_FALSE(bouquet_constructive_map(triangle_loop(), DiskMesh::polar(12, 48)).has_value());
}

TEST_CASE("plateau_certify on the canonical inputs") {
    auto opts = fast_opts();
    const auto tri = plateau_certify(triangle_loop(), opts);
    CHECK(tri.lower == Approx(0.5).margin(2 * opts.quad_tol));
    CHECK(tri.upper == Approx(0.5).margin(2 * opts.quad_tol));
    CHECK(tri.upper_method == PlateauCertificate::Method::closed_form);
    CHECK(tri.lower <= tri.upper + 1e-9);

    const auto eight = plateau_certify(double_eight_loop(), opts);
    CHECK(eight.lower == Approx(0.0).margin(1e-9));
    CHECK(eight.upper == Approx(1.0).epsilon(1e-12));
    CHECK(eight.upper_method == PlateauCertificate::Method::closed_form);

    // degree-2 loop on a 128-gon: coherent 2-fold traversal of a 64-gon
    const auto deg2 = plateau_certify(circle_loop(2, 128), opts);
    CHECK(deg2.upper == Approx(2 * pi).epsilon(0.01));
    CHECK(deg2.lower == Approx(2 * pi).epsilon(0.01));
    CHECK(deg2.lower <= deg2.upper + 1e-9);
}

TEST_CASE("certificate floors a coarse-mesh undershoot at the certified lower bound") {
    // a degree-3 sampled circle is not a recognized closed-form class; on a
    // coarse mesh the discrete optimum drops below the winding bound and the
    // certificate records the slack instead of violating its invariant
    auto opts = fast_opts(2);
    opts.n_rings = 10;
    opts.n_angular = 36;
    const auto cert = plateau_certify(circle_loop(3, 256), opts);
    CHECK(cert.lower <= cert.upper + 1e-9);
    CHECK(cert.raw_upper <= cert.upper);
    CHECK(cert.mesh_slack == Approx(cert.upper - cert.raw_upper));
    CHECK(cert.mesh_slack > 0.0);
    CHECK(cert.upper == Approx(3 * pi).epsilon(0.01));
    CHECK(cert.raw_upper == Approx(3 * pi).epsilon(0.06));
}

TEST_CASE("certificate invariant holds on random loops") {
    std::mt19937_64 rng(31337);
    auto opts = fast_opts(9);
    opts.n_rings = 8;
    opts.n_angular = 32;
    opts.always_optimize = true;
    opts.max_iters_per_stage = 150;
    for (int trial = 0; trial < 3; ++trial) {
        const auto loop = random_star_polygon(rng);
        const auto cert = plateau_certify(loop, opts);
        CHECK(cert.lower <= cert.upper + 1e-9);
        CHECK(cert.lower >= 0.0);
        CHECK(cert.upper >= 0.0);
    }
}

TEST_CASE("certificates rescale like r^2") {
    auto opts = fast_opts(3);
    const auto base = plateau_certify(triangle_loop(), opts);
    for (double r : {0.5, 2.0}) {
        const auto scaled = plateau_certify(triangle_loop().scaled(r), opts);
        // each certificate carries an independent quadtree error up to quad_tol
        CHECK(scaled.lower == Approx(r * r * base.lower).margin(1.5 * (1 + r * r) * opts.quad_tol + 1e-9));
        CHECK(std::abs(scaled.upper - r * r * base.upper) <= 1e-2 * r * r * base.upper + 1e-9);
    }
}

TEST_CASE("P is Lipschitz in the boundary datum on Jordan polygons") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        const auto l1 = random_convex_polygon(rng);
        const auto l2 = random_convex_polygon(rng);
        const auto p1 = plateau_closed_form(l1);
        const auto p2 = plateau_closed_form(l2);
        REQUIRE(p1.has_value());
        REQUIRE(p2.has_value());
        double dinf = 0.0;
        const int samples = 512;
        for (int k = 0; k < samples; ++k)
            dinf = std::max(dinf, dist(l1.at_fraction(double(k) / samples), l2.at_fraction(double(k) / samples)));
        CHECK(std::abs(*p1 - *p2) <= 2.0 * dinf * (l1.length() + l2.length()) + 1e-12);
    }
}

TEST_CASE("relaxed plateau value is continuous in the datum for triangles") {
    const auto base = plateau_relaxed(triple_step_map(), fast_opts());
    for (double delta : {1e-2, 1e-3}) {
        StepCircleMap g = triple_step_map();
        g.arc_starts[1] += delta;
        g.arc_starts[2] -= delta;
        for (Point2& v : g.values) v = v + Point2{delta, -delta};
        const auto moved = plateau_relaxed(g, fast_opts());
        CHECK(std::abs(moved.upper - base.upper) <= 5.0 * delta);
    }
}

TEST_CASE("plateau_relaxed equals the certified jump-polygon value") {
    const auto tri = plateau_relaxed(triple_step_map(), fast_opts());
    CHECK(tri.upper == Approx(0.5));

    StepCircleMap constant;
    constant.arc_starts = {0.0, 3.0};
    constant.values = {{2, 2}, {2, 2}};
    const auto c = plateau_relaxed(constant, fast_opts());
    CHECK(c.upper == 0.0);
    CHECK(c.lower == 0.0);

    const auto eight = plateau_relaxed(butterfly_step_map(), fast_opts());
    CHECK(eight.upper == Approx(1.0));
}
