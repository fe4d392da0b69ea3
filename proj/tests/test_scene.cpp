#include <catch2/catch.hpp>

#include "bvrelax/scene.hpp"
#include "helpers.hpp"

using namespace bvrelax;
using namespace testing_helpers;

TEST_CASE("validate_network accepts the canonical triple point") {
    const auto scene = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
    const auto report = validate_network(scene);
    CHECK(report.pass);
    CHECK(report.violations.empty());
    REQUIRE(scene.junctions.size() == 1);
    CHECK(scene.junctions[0].sector_count() == 3);
}

TEST_CASE("validate_network flags off-junction crossings") {
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::disk({0, 0}, 2.0);
    scene.regions.emplace_back(RegionSpec::disk({0, 0}, 2.0), RegionMapSpec::constant({0, 0}));
    JumpCurve c1, c2;
    c1.alpha = SourceCurve::segment({-1, -1}, {1, 1});
    c1.plus_region = c1.minus_region = 0;
    c2.alpha = SourceCurve::segment({-1, 1}, {1, -1});
    c2.plus_region = c2.minus_region = 0;
    scene.jump_curves = {c1, c2};
    for (auto& c : scene.jump_curves) attach_traces(c, scene);
    const auto report = validate_network(scene);
    CHECK_FALSE(report.pass);
    bool found = false;
    for (const auto& v : report.violations) found = found || v.find("intersect off-junction") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate_network flags junctions with fewer than three sectors") {
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::disk({0, 0}, 1.0);
    scene.regions.emplace_back(RegionSpec::disk({0, 0}, 1.0), RegionMapSpec::constant({0, 0}));
    Junction j;
    j.point = {0, 0};
    j.sector_angles = {pi, pi};
    j.sector_values = {{0, 0}, {1, 1}};
    scene.junctions.push_back(j);
    const auto report = validate_network(scene);
    CHECK_FALSE(report.pass);
    bool found = false;
    for (const auto& v : report.violations) found = found || v.find("N_i < 3") != std::string::npos;
    CHECK(found);
}

TEST_CASE("junction_trace limits") {
    SECTION("triple point: piecewise constant datum on 120-degree arcs") {
        const auto scene = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
        for (double rho : {0.5, 0.25, 0.03}) {
            const auto trace = junction_trace(scene, 0, rho);
            REQUIRE(trace.limit.size() == 3);
            CHECK(dist(trace.limit.values[0], {0, 0}) < 1e-12);
            CHECK(dist(trace.limit.values[1], {1, 0}) < 1e-12);
            CHECK(dist(trace.limit.values[2], {0, 1}) < 1e-12);
            CHECK(trace.limit.arc_length(0) == Approx(two_pi / 3));
        }
    }

    SECTION("affine regions: limit values A p + b") {
        PiecewiseMapScene scene;
        scene.domain = RegionSpec::disk({0.2, -0.1}, 1.8);
        const Point2 p{0.2, -0.1};
        std::vector<AffineMap> maps = {
            AffineMap{{1, 0, 0, 1}, {0.5, 0}}, AffineMap{{2, 1, 0, 1}, {0, 0}}, AffineMap{{0, -1, 1, 0}, {-1, 2}}};
        for (int k = 0; k < 3; ++k) {
            const double a0 = 0.3 + two_pi * k / 3.0;
            scene.regions.emplace_back(RegionSpec::sector(p, 1.8, a0, a0 + two_pi / 3.0),
                                       RegionMapSpec(maps[std::size_t(k)]));
        }
        Junction j;
        j.point = p;
        j.start_angle = 0.3;
        j.sector_angles = {two_pi / 3, two_pi / 3, two_pi / 3};
        for (const auto& m : maps) j.sector_values.push_back(m.apply(p));
        scene.junctions.push_back(j);
        for (int k = 0; k < 3; ++k) {
            JumpCurve c;
            c.alpha = SourceCurve::segment(p, p + 1.2 * unit_dir(0.3 + two_pi * k / 3.0));
            scene.jump_curves.push_back(c);
        }
        const auto trace = junction_trace(scene, 0, 0.2);
        for (int k = 0; k < 3; ++k)
            CHECK(dist(trace.limit.values[std::size_t(k)], maps[std::size_t(k)].apply(p)) < 1e-12);
    }

    SECTION("callable regions: Richardson extrapolation of quadratic perturbations") {
        PiecewiseMapScene scene;
        scene.domain = RegionSpec::disk({0, 0}, 1.0);
        const std::array<Point2, 3> betas = {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}};
        for (int k = 0; k < 3; ++k) {
            const Point2 beta = betas[std::size_t(k)];
            scene.regions.emplace_back(
                RegionSpec::sector({0, 0}, 1.0, two_pi * k / 3.0, two_pi * (k + 1) / 3.0),
                RegionMapSpec::callable([beta](Point2 x) { return beta + norm2(x) * Point2{0.7, -0.3}; }));
        }
        Junction j;
        j.point = {0, 0};
        j.sector_angles = {two_pi / 3, two_pi / 3, two_pi / 3};
        j.sector_values = {betas[0], betas[1], betas[2]};
        scene.junctions.push_back(j);
        for (int k = 0; k < 3; ++k) {
            JumpCurve c;
            c.alpha = SourceCurve::segment({0, 0}, unit_dir(two_pi * k / 3.0));
            scene.jump_curves.push_back(c);
        }
        const auto trace = junction_trace(scene, 0, 0.1);
        for (int k = 0; k < 3; ++k)
            CHECK(dist(trace.limit.values[std::size_t(k)], betas[std::size_t(k)]) < 1e-6);

        // extrapolated values stable under halving rho
        const auto half = junction_trace(scene, 0, 0.05);
        for (int k = 0; k < 3; ++k)
            CHECK(dist(trace.limit.values[std::size_t(k)], half.limit.values[std::size_t(k)]) < 1e-6);
    }

    SECTION("ball reaching a non-incident curve is rejected") {
        auto scene = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
        JumpCurve far;
        far.alpha = SourceCurve::segment({0.4, -0.8}, {0.4, 0.8});
        far.plus_region = 0;
        far.minus_region = 0;
        attach_traces(far, scene);
        scene.jump_curves.push_back(far);
        CHECK_THROWS_AS(junction_trace(scene, 0, 0.6), BallTooLargeError);
    }
}

TEST_CASE("total_variation of canonical scenes") {
    const auto triple = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
    CHECK(total_variation(triple, 1e-8) == Approx(2.0 + std::sqrt(2.0)).margin(1e-7));

    PiecewiseMapScene constant;
    constant.domain = RegionSpec::rectangle(0, 0, 1, 1);
    constant.regions.emplace_back(RegionSpec::rectangle(0, 0, 1, 1), RegionMapSpec::constant({3, -2}));
    CHECK(total_variation(constant, 1e-8) == 0.0);
}

TEST_CASE("total_variation is additive over sub-scenes sharing the network") {
    const AffineMap upper{{0.5, 0.25, -0.75, 1.0}, {0, 0}};
    const double tol = 1e-7;
    const auto whole = make_straight_jump_scene(0.0, 2.0, RegionMapSpec(upper), RegionMapSpec::constant({1, 1}));
    const double tv_whole = total_variation(whole, tol);

    // split at t = 0.8 into two straight-jump sub-scenes
    const auto left = make_straight_jump_scene(0.0, 0.8, RegionMapSpec(upper), RegionMapSpec::constant({1, 1}));
    const auto right = make_straight_jump_scene(0.8, 2.0, RegionMapSpec(upper), RegionMapSpec::constant({1, 1}));
    CHECK(std::abs(tv_whole - total_variation(left, tol) - total_variation(right, tol)) <= 2 * tol + 1e-9);
}

TEST_CASE("circular_slice_tv") {
    const auto constant = [](Point2) { return Point2{2, 2}; };
    CHECK(circular_slice_tv(constant, {0, 0}, 0.7, 64) == 0.0);

    const auto triple = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
    const double expect = 2.0 + std::sqrt(2.0);
    CHECK(circular_slice_tv(triple, {0, 0}, 0.5, 4096) == Approx(expect).margin(1e-3));
    // homogeneity: independent of the radius up to sampling error
    CHECK(circular_slice_tv(triple, {0, 0}, 0.25, 4096) ==
          Approx(circular_slice_tv(triple, {0, 0}, 0.75, 4096)).margin(1e-9));

    const auto identity = [](Point2 x) { return x; };
    CHECK(circular_slice_tv(identity, {0, 0}, 1.0, 8192) == Approx(two_pi).margin(1e-3));
}

TEST_CASE("junction limit_map wraps and orders the declared datum") {
    Junction j;
    j.point = {0, 0};
    j.start_angle = 5.0; // wraps past 2*pi
    j.sector_angles = {two_pi / 3, two_pi / 3, two_pi / 3};
    j.sector_values = {{1, 0}, {0, 1}, {-1, 0}};
    const auto g = j.limit_map();
    g.validate();
    CHECK(dist(g.value_at(5.0 + 0.1), {1, 0}) == 0.0);
    CHECK(dist(g.value_at(5.0 + two_pi / 3 + 0.1), {0, 1}) == 0.0);
    CHECK(g.total_variation() == Approx(j.limit_map().total_variation()));
}

TEST_CASE("scene evaluation and traces") {
    const auto scene = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
    CHECK(dist(scene.eval(0.5 * unit_dir(0.3)), {0, 0}) == 0.0);
    CHECK(dist(scene.eval(0.5 * unit_dir(two_pi / 3 + 0.3)), {1, 0}) == 0.0);

    // trace orientation: plus side is pointed to by the rotated tangent
    const JumpCurve& ray0 = scene.jump_curves[0]; // along angle 0
    CHECK(dist(ray0.trace_plus.eval(0.5), {0, 0}) == 0.0);   // sector [0, 2pi/3)
    CHECK(dist(ray0.trace_minus.eval(0.5), {0, 1}) == 0.0);  // sector before angle 0
}
