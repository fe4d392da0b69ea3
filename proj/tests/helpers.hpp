#pragma once
#include <random>

#include "bvrelax/geometry.hpp"

namespace testing_helpers {

using bvrelax::BoundaryLoop;
using bvrelax::Point2;
using bvrelax::StepCircleMap;

// Two triangles with a common vertex at the origin, areas 0.5 and 2.
inline std::array<Point2, 5> butterfly_values() {
    return {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}, Point2{-2, 0}, Point2{0, -2}};
}

// The 12-value sequence a1 a2 a3 a1 a4 a5 a1 a3 a2 a1 a5 a4: both triangles
// traversed once in each orientation.
inline StepCircleMap butterfly_step_map() {
    const auto a = butterfly_values();
    StepCircleMap g;
    const int order[12] = {0, 1, 2, 0, 3, 4, 0, 2, 1, 0, 4, 3};
    for (int i = 0; i < 12; ++i) {
        g.arc_starts.push_back(bvrelax::two_pi * i / 12.0);
        g.values.push_back(a[std::size_t(order[i])]);
    }
    return g;
}

inline BoundaryLoop double_eight_loop() { return BoundaryLoop(butterfly_step_map().values); }

inline BoundaryLoop unit_square_loop() {
    return BoundaryLoop({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

inline BoundaryLoop triangle_loop() {
    return BoundaryLoop({{0, 0}, {1, 0}, {0, 1}});
}

// piecewise constant circle datum with the triangle values on thirds
inline StepCircleMap triple_step_map(Point2 a = {0, 0}, Point2 b = {1, 0}, Point2 c = {0, 1}) {
    StepCircleMap g;
    g.arc_starts = {0.0, bvrelax::two_pi / 3.0, 2.0 * bvrelax::two_pi / 3.0};
    g.values = {a, b, c};
    return g;
}

// closed polygon sampling a degree-d circle with n vertices
inline BoundaryLoop circle_loop(int degree, int n, double radius = 1.0) {
    BoundaryLoop loop;
    for (int k = 0; k < n; ++k) {
        const double t = bvrelax::two_pi * k / n;
        loop.vertices.push_back(radius * bvrelax::unit_dir(degree * t));
    }
    return loop;
}

// star-shaped simple polygon with random radii, deterministic for a seed
inline BoundaryLoop random_star_polygon(std::mt19937_64& rng, int n_min = 5, int n_max = 12) {
    std::uniform_int_distribution<int> nd(n_min, n_max);
    std::uniform_real_distribution<double> rd(0.4, 1.6);
    std::uniform_real_distribution<double> cd(-0.5, 0.5);
    const int n = nd(rng);
    const Point2 c{cd(rng), cd(rng)};
    BoundaryLoop loop;
    for (int k = 0; k < n; ++k)
        loop.vertices.push_back(c + rd(rng) * bvrelax::unit_dir(bvrelax::two_pi * k / n));
    return loop;
}

// convex polygon through random points on a circle (sorted hull of a circle
// sample is the sample itself)
inline BoundaryLoop random_convex_polygon(std::mt19937_64& rng, int n_min = 4, int n_max = 10) {
    std::uniform_int_distribution<int> nd(n_min, n_max);
    std::uniform_real_distribution<double> ad(0.0, bvrelax::two_pi);
    std::uniform_real_distribution<double> rd(0.5, 1.5);
    std::uniform_real_distribution<double> cd(-0.3, 0.3);
    const int n = nd(rng);
    const double r = rd(rng);
    const Point2 c{cd(rng), cd(rng)};
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) a = ad(rng);
    std::sort(angles.begin(), angles.end());
    for (std::size_t i = 1; i < angles.size(); ++i)
        if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
    BoundaryLoop loop;
    for (double a : angles) loop.vertices.push_back(c + r * bvrelax::unit_dir(a));
    return loop;
}

// Monte Carlo oracle for the winding area integral: mean of |w| over uniform
// bounding-box samples.  Returns (estimate, standard error).
inline std::pair<double, double> winding_integral_monte_carlo(const BoundaryLoop& loop, std::size_t n,
                                                              std::uint64_t seed) {
    const auto edges = loop.edges();
    double lox = loop.vertices[0].x, hix = lox, loy = loop.vertices[0].y, hiy = loy;
    for (const Point2& v : loop.vertices) {
        lox = std::min(lox, v.x); hix = std::max(hix, v.x);
        loy = std::min(loy, v.y); hiy = std::max(hiy, v.y);
    }
    const double pad = 1e-6;
    lox -= pad; loy -= pad; hix += pad; hiy += pad;
    const double box_area = (hix - lox) * (hiy - loy);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lox, hix), uy(loy, hiy);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 y{ux(rng), uy(rng)};
        const double w = std::abs(bvrelax::detail::winding_unchecked(edges, y));
        sum += w;
        sum2 += w * w;
    }
    const double mean = sum / double(n);
    const double var = std::max(0.0, sum2 / double(n) - mean * mean);
    return {box_area * mean, box_area * std::sqrt(var / double(n))};
}

} // namespace testing_helpers
