#include <catch2/catch.hpp>
#include <random>

#include "bvrelax/recovery.hpp"
#include "bvrelax/relaxed_area.hpp"
#include "helpers.hpp"

using namespace bvrelax;
using namespace testing_helpers;

namespace {

PlateauOptions fast_opts() {
    PlateauOptions o;
    o.n_rings = 12;
    o.n_angular = 48;
    o.jitter_starts = 1;
    return o;
}

JumpCurve make_curve_with_traces(SourceCurve alpha, std::function<Point2(double)> plus,
                                 std::function<Point2(double)> minus) {
    JumpCurve c;
    c.alpha = std::move(alpha);
    c.trace_plus.value = std::move(plus);
    c.trace_minus.value = std::move(minus);
    return c;
}

} // namespace

TEST_CASE("regular_area_term closed forms") {
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::rectangle(0, 0, 1, 1);
    scene.regions.emplace_back(RegionSpec::rectangle(0, 0, 1, 1), RegionMapSpec::constant({0.5, 0.5}));
    CHECK(regular_area_term(scene, 1e-9) == Approx(1.0));

    scene.regions[0].second = RegionMapSpec::affine({1, 0, 0, 1}, {0, 0});
    CHECK(regular_area_term(scene, 1e-9) == Approx(2.0));

    scene.regions[0].second = RegionMapSpec::affine({2, 0, 0, 3}, {0, 0});
    CHECK(regular_area_term(scene, 1e-9) == Approx(std::sqrt(50.0)));

    // same affine map through the finite-difference path
    scene.regions[0].second = RegionMapSpec::callable([](Point2 x) { return Point2{2 * x.x, 3 * x.y}; });
    CHECK(regular_area_term(scene, 1e-8) == Approx(std::sqrt(50.0)).margin(1e-6));
}

TEST_CASE("regular term dominates the domain area and the gradient mass") {
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::rectangle(0, 0, 2, 1);
    scene.regions.emplace_back(RegionSpec::rectangle(0, 0, 2, 1),
                               RegionMapSpec::affine({0.5, -1.25, 2.0, 0.75}, {3, -1}));
    const double regular = regular_area_term(scene, 1e-9);
    CHECK(regular >= scene.domain.area());
    CHECK(regular >= total_variation(scene, 1e-9)); // = ∫ |∇u| here (no jumps)

    scene.regions[0].second = RegionMapSpec::callable(
        [](Point2 x) { return Point2{std::sin(3 * x.x) + x.y, std::cos(2 * x.y)}; });
    const double regular_callable = regular_area_term(scene, 1e-7);
    CHECK(regular_callable >= scene.domain.area() - 1e-6);
    CHECK(regular_callable >= total_variation(scene, 1e-7) - 1e-6);
}

TEST_CASE("jump_surface_integrand") {
    // constant traces with |d| = 1
    const auto constant = make_curve_with_traces(SourceCurve::segment({0, 0}, {1, 0}),
                                                 [](double) { return Point2{1, 0}; },
                                                 [](double) { return Point2{0, 0}; });
    for (double t : {0.1, 0.5, 0.9})
        for (double s : {0.0, 0.3, 1.0}) CHECK(jump_surface_integrand(constant, t, s) == Approx(1.0));

    // u+ = (t, 0): d = (t,0), m_s = (s,0), wedge 0, integrand t
    const auto linear_x = make_curve_with_traces(SourceCurve::segment({0, 0}, {1, 0}),
                                                 [](double t) { return Point2{t, 0}; },
                                                 [](double) { return Point2{0, 0}; });
    CHECK(jump_surface_integrand(linear_x, 0.4, 0.7) == Approx(0.4).margin(1e-9));

    // u+ = (0, t): same by symmetry
    const auto linear_y = make_curve_with_traces(SourceCurve::segment({0, 0}, {1, 0}),
                                                 [](double t) { return Point2{0, t}; },
                                                 [](double) { return Point2{0, 0}; });
    CHECK(jump_surface_integrand(linear_y, 0.4, 0.2) == Approx(0.4).margin(1e-9));
}

TEST_CASE("jump_surface_area") {
    const auto constant = make_curve_with_traces(SourceCurve::segment({0, 0}, {2.5, 0}),
                                                 [](double) { return Point2{0.6, -0.8}; },
                                                 [](double) { return Point2{0, 0}; });
    CHECK(jump_surface_area(constant, 1e-10) == Approx(2.5 * 1.0).margin(1e-9));

    const auto linear_x = make_curve_with_traces(SourceCurve::segment({0, 0}, {1, 0}),
                                                 [](double t) { return Point2{t, 0}; },
                                                 [](double) { return Point2{0, 0}; });
    CHECK(jump_surface_area(linear_x, 1e-10) == Approx(0.5).margin(1e-8)); // ∫ t dt

    const auto linear_y = make_curve_with_traces(SourceCurve::segment({0, 0}, {1, 0}),
                                                 [](double t) { return Point2{0, t}; },
                                                 [](double) { return Point2{0, 0}; });
    CHECK(jump_surface_area(linear_y, 1e-10) == Approx(0.5).margin(1e-8));
}

TEST_CASE("jump term bounds on randomized Lipschitz traces") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // piecewise-smooth traces from a small random Fourier sum
        const double a1 = coeff(rng), a2 = coeff(rng), b1 = coeff(rng), b2 = coeff(rng);
        const double c1 = coeff(rng), c2 = coeff(rng);
        auto plus = [=](double t) { return Point2{a1 * std::sin(2 * t) + c1, a2 * std::cos(t)}; };
        auto minus = [=](double t) { return Point2{b1 * t + c2, b2 * std::sin(3 * t)}; };
        const auto curve = make_curve_with_traces(SourceCurve::segment({0, 0}, {1, 0}), plus, minus);

        const double value = jump_surface_area(curve, 1e-8);
        const double wall = integrate_interval(
            [&](double t) { return dist(plus(t), minus(t)); }, 0.0, 1.0, 1e-10);
        CHECK(value >= wall - 1e-7); // the ruled surface dominates the vertical wall

        double dinf = 0.0, lplus = 0.0, lminus = 0.0;
        const int n = 2000;
        for (int k = 0; k < n; ++k) {
            const double t0 = double(k) / n, t1 = double(k + 1) / n;
            dinf = std::max(dinf, dist(plus(t0), minus(t0)));
            lplus += dist(plus(t1), plus(t0));
            lminus += dist(minus(t1), minus(t0));
        }
        CHECK(value <= wall + dinf * (lplus + lminus) + 1e-6);
    }
}

TEST_CASE("curved jump curves integrate in arc length") {
    // quarter-circle jump with constant traces: plain wall area length * |d|
    const auto arc = SourceCurve::arc({0, 0}, 2.0, 0.0, pi / 2);
    REQUIRE(arc.length == Approx(pi));
    const auto wall = make_curve_with_traces(arc, [](double) { return Point2{3, 4}; },
                                             [](double) { return Point2{0, 0}; });
    CHECK(jump_surface_area(wall, 1e-10) == Approx(pi * 5.0).margin(1e-8));

    // affine traces over the arc, checked against a dense Riemann sum
    const AffineMap ap{{1.0, 0.5, -0.25, 2.0}, {0.1, -0.3}};
    const AffineMap am{{0.5, 0.0, 0.75, 1.0}, {-1.0, 0.2}};
    JumpCurve curved;
    curved.alpha = arc;
    curved.trace_plus.value = [&](double t) { return ap.apply(arc.eval(t)); };
    curved.trace_minus.value = [&](double t) { return am.apply(arc.eval(t)); };
    const double value = jump_surface_area(curved, 1e-9);

    double riemann = 0.0;
    const int nt = 4000, ns = 200;
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < ns; ++j) {
            const double t = arc.length * (i + 0.5) / nt, s = (j + 0.5) / ns;
            riemann += jump_surface_integrand(curved, t, s) * (arc.length / nt) * (1.0 / ns);
        }
    CHECK(value == Approx(riemann).margin(5e-6));
}

TEST_CASE("jump term is additive under splitting the curve") {
    auto plus = [](double t) { return Point2{std::sin(t), 0.3 * t}; };
    auto minus = [](double) { return Point2{0.0, -0.5}; };
    const double tol = 1e-9;
    const auto whole = make_curve_with_traces(SourceCurve::segment({0, 0}, {2, 0}), plus, minus);
    const auto left = make_curve_with_traces(SourceCurve::segment({0, 0}, {0.7, 0}), plus, minus);
    const auto right = make_curve_with_traces(SourceCurve::segment({0.7, 0}, {2, 0}),
                                              [&](double t) { return plus(t + 0.7); },
                                              [&](double t) { return minus(t + 0.7); });
    CHECK(std::abs(jump_surface_area(whole, tol) - jump_surface_area(left, tol) -
                   jump_surface_area(right, tol)) <= 2 * tol + 1e-9);
}

TEST_CASE("relaxed_area_bv on the triple point scene") {
    const auto scene = make_triple_point_scene({0, 0}, {1, 0}, {0, 1});
    const auto breakdown = relaxed_area_bv(scene, 1e-7, fast_opts());

    const double expected = pi + 2.0 + std::sqrt(2.0) + 0.5;
    CHECK(breakdown.regular == Approx(pi).margin(1e-6));
    CHECK(breakdown.jump_total() == Approx(2.0 + std::sqrt(2.0)).margin(1e-6));
    REQUIRE(breakdown.junction_terms.size() == 1);
    CHECK(breakdown.junction_terms[0].second.upper == Approx(0.5));
    CHECK(breakdown.total_lower <= expected + 1e-6);
    CHECK(breakdown.total_upper >= expected - 1e-3);
    CHECK(breakdown.total_upper - breakdown.total_lower < 0.01 * expected);
}

TEST_CASE("relaxed_area_bv without junctions") {
    const auto jump = make_straight_jump_scene(0.0, 1.0, RegionMapSpec::constant({1, 0}),
                                               RegionMapSpec::constant({0, 0}));
    const auto breakdown = relaxed_area_bv(jump, 1e-8, fast_opts());
    CHECK(breakdown.junction_terms.empty());
    CHECK(breakdown.regular == Approx(2.0)); // two unit-area constant regions
    CHECK(breakdown.jump_total() == Approx(1.0).margin(1e-7));
    CHECK(breakdown.total_upper == Approx(breakdown.total_lower));

    PiecewiseMapScene smooth;
    smooth.domain = RegionSpec::rectangle(0, 0, 1, 1);
    smooth.regions.emplace_back(RegionSpec::rectangle(0, 0, 1, 1), RegionMapSpec::affine({1, 0, 0, 1}, {0, 0}));
    const auto s = relaxed_area_bv(smooth, 1e-8, fast_opts());
    CHECK(s.jump_terms.empty());
    CHECK(s.junction_terms.empty());
    CHECK(s.total_upper == Approx(2.0));
}

TEST_CASE("relaxed_area_bv rejects invalid scenes") {
    PiecewiseMapScene scene;
    scene.domain = RegionSpec::disk({0, 0}, 1.0);
    scene.regions.emplace_back(RegionSpec::disk({0, 0}, 1.0), RegionMapSpec::constant({0, 0}));
    JumpCurve dangling;
    dangling.alpha = SourceCurve::segment({-0.5, 0}, {0.5, 0}); // endpoints in the interior
    dangling.plus_region = dangling.minus_region = 0;
    attach_traces(dangling, scene);
    scene.jump_curves.push_back(dangling);
    CHECK_THROWS_AS(relaxed_area_bv(scene, 1e-6, fast_opts()), InvalidSceneError);
}

TEST_CASE("n_uple_point_area closed forms") {
    const auto triple = n_uple_point_area(triple_step_map(), 1.0, fast_opts());
    CHECK(triple.regular == Approx(pi));
    CHECK(triple.jump_total() == Approx(2.0 + std::sqrt(2.0)));
    CHECK(triple.junction_terms[0].second.upper == Approx(0.5));
    CHECK(triple.total_upper == Approx(pi + 2.0 + std::sqrt(2.0) + 0.5));

    const auto scaled = n_uple_point_area(triple_step_map(), 2.0, fast_opts());
    CHECK(scaled.total_upper == Approx(pi * 4.0 + 2.0 * (2.0 + std::sqrt(2.0)) + 0.5));

    StepCircleMap constant;
    constant.arc_starts = {0.0};
    constant.values = {{0.7, 0.7}};
    const auto single = n_uple_point_area(constant, 1.5, fast_opts());
    CHECK(single.total_upper == Approx(pi * 2.25));
    CHECK(single.jump_total() == 0.0);

    const auto butterfly = n_uple_point_area(butterfly_step_map(), 1.0, fast_opts());
    CHECK(butterfly.total_upper ==
          Approx(pi + gamma_polygon_length(butterfly_step_map()) + 1.0).epsilon(1e-9));
}

TEST_CASE("radial-angular regions integrate like their wedge closed form") {
    // u(x) = profile(angle x) on an annulus: |∇u| = |profile'|/ρ, zero Jacobian,
    // so the graph area is Σ wedges ∫∫ sqrt(ρ² + |profile'|²) dρ dθ
    const auto profile = mollified_circle_map(triple_step_map(), 10);
    RadialAngularMap map;
    map.center = {0, 0};
    map.profile = profile;

    PiecewiseMapScene scene;
    scene.domain = RegionSpec::disk({0, 0}, 1.0);
    scene.regions.emplace_back(RegionSpec::sector({0, 0}, 1.0, 0.0, two_pi), RegionMapSpec(map));

    double oracle = 0.0;
    const auto& angles = profile.angles;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double a0 = angles[i];
        const double a1 = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + two_pi;
        if (a1 - a0 < 1e-15) continue;
        const double g2 = norm2((profile.values[(i + 1) % angles.size()] - profile.values[i]) / (a1 - a0));
        oracle += (a1 - a0) * integrate_interval(
                                  [&](double rho) { return std::sqrt(rho * rho + g2); }, 0.0, 1.0, 1e-10);
    }
    CHECK(regular_area_term(scene, 1e-4) == Approx(oracle).epsilon(5e-3));
}

TEST_CASE("the relaxed plateau value ignores the arc layout of the datum") {
    std::mt19937_64 rng(1717);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        auto gamma = butterfly_step_map();
        double acc = 0.0;
        std::vector<double> gaps(gamma.size());
        for (double& g : gaps) { g = u(rng); acc += g; }
        double pos = 0.0;
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            gamma.arc_starts[i] = pos;
            pos += gaps[i] / acc * two_pi;
        }
        const auto cert = plateau_relaxed(gamma, PlateauOptions{});
        CHECK(cert.upper == Approx(1.0));
        CHECK(cert.lower == Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("n_uple_point_area matches relaxed_area_bv on the generated scene") {
    const auto gamma = triple_step_map();
    const auto formula = n_uple_point_area(gamma, 1.0, fast_opts());
    const auto scene_value = relaxed_area_bv(make_homogeneous_scene(gamma, 1.0), 1e-7, fast_opts());
    CHECK(formula.total_upper == Approx(scene_value.total_upper).epsilon(1e-3));
    CHECK(formula.total_lower == Approx(scene_value.total_lower).epsilon(1e-3));
}

TEST_CASE("relaxed_tvj") {
    const auto opts = fast_opts();
    CHECK(relaxed_tvj(triple_step_map(), 1.0, opts).upper == Approx(0.5));
    CHECK(relaxed_tvj(butterfly_step_map(), 1.0, opts).upper == Approx(1.0));

    StepCircleMap constant;
    constant.arc_starts = {0.0, 1.0};
    constant.values = {{1, 2}, {1, 2}};
    CHECK(relaxed_tvj(constant, 1.0, opts).upper == 0.0);

    // bitwise independent of the radius
    const auto r05 = relaxed_tvj(triple_step_map(), 0.5, opts);
    const auto r1 = relaxed_tvj(triple_step_map(), 1.0, opts);
    const auto r2 = relaxed_tvj(triple_step_map(), 2.0, opts);
    CHECK(r05.upper == r1.upper);
    CHECK(r1.upper == r2.upper);
    CHECK(r05.lower == r1.lower);
    CHECK(r1.lower == r2.lower);
}

TEST_CASE("infinite triple point report") {
    const Point2 a{0, 0}, b{1, 0}, c{0, 1};

    const auto rep20 = infinite_triple_point_report(a, b, c, 20);
    CHECK(rep20.tv_limit == Approx(3.0 + std::sqrt(2.0)));
    CHECK(std::abs(rep20.tv_partial_sum - rep20.tv_limit) <= 1e-6);
    CHECK(rep20.l1_upper_bound == Approx(pi + 6.0));

    const auto rep10 = infinite_triple_point_report(a, b, c, 10);
    CHECK(rep10.tvj_lower_bound == Approx(5.0));

    // partial sums increase toward the limit
    double prev = 0.0;
    for (int n : {1, 3, 6, 12}) {
        const auto rep = infinite_triple_point_report(a, b, c, n);
        CHECK(rep.tv_partial_sum > prev);
        CHECK(rep.tv_partial_sum < rep.tv_limit);
        prev = rep.tv_partial_sum;
    }
}

TEST_CASE("truncated infinite-triple scene matches the series and validates") {
    const Point2 a{0, 0}, b{1, 0}, c{0, 1};
    const int levels = 3;
    const auto scene = make_infinite_triple_scene(a, b, c, levels);
    const auto report = validate_network(scene);
    CAPTURE(report.violations);
    CHECK(report.pass);

    const auto rep = infinite_triple_point_report(a, b, c, levels);
    CHECK(total_variation(scene, 1e-9) == Approx(rep.tv_partial_sum).margin(1e-7));
}
