#pragma once
#include "bvrelax/relaxed_area.hpp"

namespace bvrelax {

struct WindowOverlapError : Error { using Error::Error; };
struct BoundaryMismatchError : Error { using Error::Error; };

namespace detail {

// 2x2 gradient of a region map, columns d/dx and d/dy; analytic where possible
inline std::array<double, 4> region_map_gradient(const RegionMapSpec& map, Point2 x) {
    if (map.is_constant()) return {0, 0, 0, 0};
    if (map.is_affine()) return std::get<AffineMap>(map.map).a;
    const double h = 1e-6;
    const Point2 dx = (map.eval({x.x + h, x.y}) - map.eval({x.x - h, x.y})) / (2 * h);
    const Point2 dy = (map.eval({x.x, x.y + h}) - map.eval({x.x, x.y - h})) / (2 * h);
    return {dx.x, dy.x, dx.y, dy.y};
}

inline double frobenius(const std::array<double, 4>& g) {
    return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
}

inline double determinant(const std::array<double, 4>& g) { return g[0] * g[3] - g[1] * g[2]; }

} // namespace detail

// ---------------------------------------------------------------------------
// Straight-jump recovery: affine interpolation across the strip |y| < eps.
// ---------------------------------------------------------------------------

class StraightJumpRecovery {
  public:
    StraightJumpRecovery(double a, double b, RegionMapSpec upper, RegionMapSpec lower, double eps)
        : a_(a), b_(b), upper_(std::move(upper)), lower_(std::move(lower)), eps_(eps) {
        if (!(eps > 0 && eps < 1)) throw Error("straight_jump_recovery: eps must be in (0,1)");
    }

    [[nodiscard]] double eps() const { return eps_; }

    [[nodiscard]] Point2 eval_u(Point2 p) const { return p.y > 0 ? upper_.eval(p) : lower_.eval(p); }

    [[nodiscard]] Point2 eval(Point2 p) const {
        if (p.y >= eps_ || p.y <= -eps_) return eval_u(p);
        const Point2 up = upper_.eval({p.x, eps_});
        const Point2 low = lower_.eval({p.x, -eps_});
        return ((eps_ + p.y) * up + (eps_ - p.y) * low) / (2.0 * eps_);
    }

    [[nodiscard]] std::array<double, 4> gradient(Point2 p) const {
        if (p.y >= eps_) return detail::region_map_gradient(upper_, p);
        if (p.y <= -eps_) return detail::region_map_gradient(lower_, p);
        const auto gu = detail::region_map_gradient(upper_, {p.x, eps_});
        const auto gl = detail::region_map_gradient(lower_, {p.x, -eps_});
        const double wu = (eps_ + p.y) / (2 * eps_), wl = (eps_ - p.y) / (2 * eps_);
        const Point2 dsig = (upper_.eval({p.x, eps_}) - lower_.eval({p.x, -eps_})) / (2 * eps_);
        // d/dx blends the traces' tangential derivatives; d/dy is the chord
        return {wu * gu[0] + wl * gl[0], dsig.x, wu * gu[2] + wl * gl[2], dsig.y};
    }

    [[nodiscard]] double total_variation(double tol) const {
        return integrate_bands([&](Point2 p) { return detail::frobenius(gradient(p)); }, tol);
    }

    [[nodiscard]] double area(double tol) const {
        return integrate_bands(
            [&](Point2 p) {
                const auto g = gradient(p);
                const double det = detail::determinant(g);
                return std::sqrt(1.0 + g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3] + det * det);
            },
            tol);
    }

    [[nodiscard]] double l1_distance_to_u(double tol) const {
        // v_eps equals u outside the strip by construction
        const double half = 0.5 * tol;
        const auto diff = [&](Point2 p) { return dist(eval(p), eval_u(p)); };
        return integrate_rect([&](double x, double y) { return diff({x, y}); }, a_, b_, -eps_, 0.0, half) +
               integrate_rect([&](double x, double y) { return diff({x, y}); }, a_, b_, 0.0, eps_, half);
    }

  private:
    template <class F>
    double integrate_bands(const F& f, double tol) const {
        // integrands are smooth per band; split at the strip edges
        const double share = tol / 3.0;
        double s = 0.0;
        s += integrate_rect([&](double x, double y) { return f({x, y}); }, a_, b_, -1.0, -eps_, share);
        s += integrate_rect([&](double x, double y) { return f({x, y}); }, a_, b_, -eps_, eps_, share);
        s += integrate_rect([&](double x, double y) { return f({x, y}); }, a_, b_, eps_, 1.0, share);
        return s;
    }

    double a_, b_;
    RegionMapSpec upper_, lower_;
    double eps_;
};

// Expects the canonical straight-jump layout of make_straight_jump_scene:
// two regions over R = [a,b] x [-1,1] with the jump on [a,b] x {0}.
inline StraightJumpRecovery straight_jump_recovery(const PiecewiseMapScene& scene, double eps) {
    if (scene.regions.size() != 2 || scene.jump_curves.size() != 1)
        throw Error("straight_jump_recovery: scene must carry exactly the straight jump layout");
    const SourceCurve& alpha = scene.jump_curves[0].alpha;
    const Point2 s = alpha.start(), e = alpha.end();
    if (std::abs(s.y) > 1e-12 || std::abs(e.y) > 1e-12)
        throw Error("straight_jump_recovery: jump must lie on y = 0");
    return StraightJumpRecovery(s.x, e.x, scene.regions[0].second, scene.regions[1].second, eps);
}

// ---------------------------------------------------------------------------
// Mollified boundary datum γ_k: piecewise affine transitions of width 2/k
// centered at the jumps; the total variation of γ is preserved exactly.
// ---------------------------------------------------------------------------

inline SampledCircleMap mollified_circle_map(const StepCircleMap& gamma, int k) {
    gamma.validate();
    const double delta = 2.0 / k;
    std::size_t n = gamma.size();
    // a window only matters across an actual jump; constant data mollifies to itself
    double min_arc = two_pi;
    bool any_jump = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (dist(gamma.values[i], gamma.values[(i + 1) % n]) > 0) any_jump = true;
        min_arc = std::min(min_arc, gamma.arc_length(i));
    }
    if (any_jump && delta >= min_arc)
        throw WindowOverlapError("mollified_circle_map: transition width 2/k exceeds the smallest arc");

    if (!any_jump) {
        SampledCircleMap constant;
        for (int j = 0; j < 8; ++j) {
            constant.angles.push_back(two_pi * j / 8.0);
            constant.values.push_back(gamma.values[0]);
        }
        return constant;
    }

    SampledCircleMap out;
    const auto push = [&](double angle, Point2 value) {
        out.angles.push_back(wrap_angle(angle));
        out.values.push_back(value);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double jump_angle = gamma.arc_starts[i]; // jump between value[i-1] and value[i]
        push(jump_angle - 0.5 * delta, gamma.values[(i + n - 1) % n]);
        push(jump_angle + 0.5 * delta, gamma.values[i]);
        // plateau interior samples keep the datum exact between windows and
        // provide the minimum sample count for small n
        const double plateau = gamma.arc_length(i) - delta;
        push(jump_angle + 0.5 * delta + 0.4 * plateau, gamma.values[i]);
        push(jump_angle + 0.5 * delta + 0.6 * plateau, gamma.values[i]);
    }
    // sort by wrapped angle, drop duplicates
    std::vector<std::size_t> idx(out.angles.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return out.angles[x] < out.angles[y]; });
    SampledCircleMap sorted;
    for (std::size_t i : idx) {
        if (!sorted.angles.empty() && out.angles[i] - sorted.angles.back() < 1e-12) continue;
        sorted.angles.push_back(out.angles[i]);
        sorted.values.push_back(out.values[i]);
    }
    return sorted;
}

// ---------------------------------------------------------------------------
// n-uple recovery: angular map γ_k(x/|x|) outside B_{ρ_k}, rescaled Plateau
// competitor inside; ρ_k = min(r/2, 1/(k max(1, c_k))) keeps c_k ρ_k -> 0.
// ---------------------------------------------------------------------------

class NUpleRecovery {
  public:
    NUpleRecovery(StepCircleMap gamma, SampledCircleMap gamma_k, double r, int k, DiscreteMap competitor)
        : gamma_(std::move(gamma)), gamma_k_(std::move(gamma_k)), r_(r), k_(k),
          competitor_(std::move(competitor)) {
        const DiskMesh& mesh = *competitor_.mesh;
        for (int j = 0; j < mesh.n_angular(); ++j) {
            const double theta = mesh.angles[std::size_t(j)];
            const Point2 bv = competitor_.values[std::size_t(mesh.boundary_vertices[std::size_t(j)])];
            if (dist(bv, gamma_k_.eval(theta)) > 1e-9)
                throw BoundaryMismatchError("n_uple_recovery: competitor boundary differs from the mollified datum");
        }
        c_k_ = competitor_.lipschitz_estimate();
        rho_k_ = std::min(0.5 * r_, 1.0 / (double(k_) * std::max(1.0, c_k_)));
    }

    [[nodiscard]] double rho() const { return rho_k_; }
    [[nodiscard]] double lipschitz_constant() const { return c_k_; }
    [[nodiscard]] double radius() const { return r_; }

    [[nodiscard]] Point2 eval(Point2 x) const {
        const double rho = norm(x);
        if (rho >= rho_k_) return gamma_k_.eval(angle_of(x));
        return competitor_.eval_polar(rho / rho_k_, rho > 0 ? angle_of(x) : 0.0);
    }

    // On the annulus the map depends on the angle alone, so its Jacobian
    // determinant vanishes identically; inside, the piecewise affine chart
    // gives det ∇v = (g_ρ ∧ g_θ) / (ρ_k^2 ρ_loc).
    [[nodiscard]] double jacobian_at(Point2 x) const {
        const double rho = norm(x);
        if (rho >= rho_k_) return 0.0;
        const double h = 1e-7 * rho_k_;
        const double rho_loc = std::max(rho / rho_k_, 1e-9);
        const double theta = rho > 0 ? angle_of(x) : 0.0;
        const Point2 grho = (competitor_.eval_polar(std::min(rho_loc + h, 1.0), theta) -
                             competitor_.eval_polar(std::max(rho_loc - h, 0.0), theta)) /
                            (std::min(rho_loc + h, 1.0) - std::max(rho_loc - h, 0.0));
        const Point2 gtheta = (competitor_.eval_polar(rho_loc, theta + h) -
                               competitor_.eval_polar(rho_loc, theta - h)) / (2 * h);
        return cross(grho, gtheta) / (rho_k_ * rho_k_ * rho_loc);
    }

    // |Du_k|(B_r): the angular part integrates radially in closed form, the
    // rescaled competitor contributes ρ_k ∫ |∇v|
    [[nodiscard]] double total_variation(double tol) const {
        const double annulus = (r_ - rho_k_) * gamma_k_.total_variation();
        return annulus + rho_k_ * competitor_gradient_l1(tol);
    }

    [[nodiscard]] double inner_gradient_l1(double tol) const { return rho_k_ * competitor_gradient_l1(tol); }

    [[nodiscard]] double area(double tol) const {
        // annulus wedges in polar coordinates: integrand sqrt(ρ² + |γ_k'(θ)|²)
        double s = 0.0;
        const auto& angles = gamma_k_.angles;
        const std::size_t n = angles.size();
        const double wedge_tol = 0.5 * tol / double(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double a0 = angles[i];
            const double a1 = (i + 1 < n) ? angles[i + 1] : angles[0] + two_pi;
            if (a1 - a0 < 1e-15) continue;
            const Point2 dv = (gamma_k_.values[(i + 1) % n] - gamma_k_.values[i]) / (a1 - a0);
            const double g2 = norm2(dv);
            s += (a1 - a0) * integrate_interval(
                                 [&](double rho) { return std::sqrt(rho * rho + g2); }, rho_k_, r_, wedge_tol);
        }
        return s + inner_area(0.5 * tol);
    }

    [[nodiscard]] double l1_distance_to_limit(double tol) const {
        const double angular = integrate_interval(
            [&](double theta) { return dist(gamma_k_.eval(theta), gamma_.value_at(theta)); }, 0.0, two_pi,
            0.5 * tol / std::max(1.0, 0.5 * (r_ * r_)));
        double s = 0.5 * (r_ * r_ - rho_k_ * rho_k_) * angular;
        // inner disk: coarse cell sums are enough for this o(ρ_k²) term
        s += inner_cell_sum([&](Point2 x, Point2 v) { return dist(v, gamma_.value_at(angle_of(x))); });
        return s;
    }

  private:
    template <class F>
    double inner_cell_sum(const F& f) const {
        const DiskMesh& mesh = *competitor_.mesh;
        double s = 0.0;
        for (const auto& tri : mesh.triangles) {
            const Point2 p0 = mesh.vertices[std::size_t(tri[0])], p1 = mesh.vertices[std::size_t(tri[1])],
                         p2 = mesh.vertices[std::size_t(tri[2])];
            const double area = 0.5 * std::abs(cross(p1 - p0, p2 - p0)) * rho_k_ * rho_k_;
            const Point2 centroid = (p0 + p1 + p2) / 3.0;
            const Point2 value = (competitor_.values[std::size_t(tri[0])] + competitor_.values[std::size_t(tri[1])] +
                                  competitor_.values[std::size_t(tri[2])]) / 3.0;
            s += area * f(rho_k_ * centroid, value);
        }
        return s;
    }

    // ∫_{B_1} |∇v| for the chart competitor, by parameter-cell quadrature
    [[nodiscard]] double competitor_gradient_l1(double tol) const {
        return integrate_param_cells([&](double frob2, double /*det*/) { return std::sqrt(frob2); }, tol, 1.0);
    }

    [[nodiscard]] double inner_area(double tol) const {
        return integrate_param_cells(
            [&](double frob2, double det) { return std::sqrt(1.0 + frob2 + det * det); }, tol, rho_k_);
    }

    // Integrate f(|∇w|_F², det ∇w) over the inner disk of radius `scale`,
    // where w(x) = v(x/scale) for the piecewise affine chart map v.  The
    // integrand is smooth per parameter cell, so fixed low-order rules per
    // cell suffice.
    template <class F>
    double integrate_param_cells(const F& f, double /*tol*/, double scale) const {
        const DiskMesh& mesh = *competitor_.mesh;
        const int nr = mesh.n_rings, na = mesh.n_angular();
        const double inv = 1.0 / scale;
        double s = 0.0;

        const auto node_value = [&](Point2 gr, Point2 gt, double rho) {
            const double frob2 = (norm2(gr) + norm2(gt) / (rho * rho)) * inv * inv;
            const double det = cross(gr, gt) / (rho * scale * scale);
            return f(frob2, det) * rho;
        };

        // fan: v = (1 - ρ/ρ₁) c₀ + (ρ/ρ₁) ring(θ); g_ρ varies in θ, g_θ in ρ
        const double rho1 = mesh.ring_radius(1);
        for (int kk = 0; kk < na; ++kk) {
            const int k1 = (kk + 1) % na;
            const double th0 = mesh.angles[std::size_t(kk)];
            double th1 = mesh.angles[std::size_t(k1)];
            if (k1 == 0) th1 += two_pi;
            const Point2 vc = competitor_.values[0];
            const Point2 v0 = competitor_.values[std::size_t(mesh.vertex_index(1, kk))];
            const Point2 v1 = competitor_.values[std::size_t(mesh.vertex_index(1, k1))];
            double acc = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double rho = 0.5 * rho1 + 0.5 * rho1 * detail::gl3_x[i];
                    const double th = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * detail::gl3_x[j];
                    const double u = (th - th0) / (th1 - th0);
                    const Point2 ring = v0 + u * (v1 - v0);
                    const Point2 gr = (ring - vc) / rho1;
                    const Point2 gt = (rho / rho1) * (v1 - v0) / (th1 - th0);
                    acc += detail::gl3_w[i] * detail::gl3_w[j] * node_value(gr, gt, std::max(rho, 1e-12));
                }
            s += acc * 0.25 * rho1 * (th1 - th0) * scale * scale;
        }

        // ring bands: per parameter triangle the gradient is constant
        for (int j = 1; j < nr; ++j) {
            const double r0 = mesh.ring_radius(j), r1v = mesh.ring_radius(j + 1);
            for (int kk = 0; kk < na; ++kk) {
                const int k1 = (kk + 1) % na;
                const double th0 = mesh.angles[std::size_t(kk)];
                double th1 = mesh.angles[std::size_t(k1)];
                if (k1 == 0) th1 += two_pi;
                const double dth = th1 - th0, dr = r1v - r0;
                const Point2 vjk = competitor_.values[std::size_t(mesh.vertex_index(j, kk))];
                const Point2 vj1k = competitor_.values[std::size_t(mesh.vertex_index(j + 1, kk))];
                const Point2 vj1k1 = competitor_.values[std::size_t(mesh.vertex_index(j + 1, k1))];
                const Point2 vjk1 = competitor_.values[std::size_t(mesh.vertex_index(j, k1))];
                const struct {
                    Point2 gr, gt;
                    double pr[3], pt[3]; // parameter-triangle vertices
                } halves[2] = {
                    {(vj1k - vjk) / dr, (vj1k1 - vj1k) / dth, {r0, r1v, r1v}, {th0, th0, th1}},
                    {(vj1k1 - vjk1) / dr, (vjk1 - vjk) / dth, {r0, r1v, r0}, {th0, th1, th1}},
                };
                for (const auto& h : halves) {
                    static constexpr double bary[3][3] = {
                        {2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};
                    double acc = 0.0;
                    for (int q = 0; q < 3; ++q) {
                        const double rr = bary[q][0] * h.pr[0] + bary[q][1] * h.pr[1] + bary[q][2] * h.pr[2];
                        acc += node_value(h.gr, h.gt, rr) / 3.0;
                    }
                    s += acc * 0.5 * dr * dth * scale * scale;
                }
            }
        }
        return s;
    }

    StepCircleMap gamma_;
    SampledCircleMap gamma_k_;
    double r_;
    int k_;
    DiscreteMap competitor_;
    double c_k_ = 0.0;
    double rho_k_ = 0.0;
};

inline NUpleRecovery n_uple_recovery(const StepCircleMap& gamma, double r, int k, DiscreteMap competitor) {
    return NUpleRecovery(gamma, mollified_circle_map(gamma, k), r, k, std::move(competitor));
}

// Full pipeline: mollify γ, build a mesh whose angular grid resolves the
// transition windows exactly, optimize the Plateau competitor with that
// boundary, assemble the recovery map.
inline NUpleRecovery make_n_uple_recovery(const StepCircleMap& gamma, double r, int k,
                                          const PlateauOptions& opts = {}) {
    const SampledCircleMap gamma_k = mollified_circle_map(gamma, k);
    std::vector<double> angles;
    for (int j = 0; j < opts.n_angular; ++j) angles.push_back(two_pi * j / opts.n_angular);
    for (double a : gamma_k.angles) angles.push_back(a);
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double x, double y) { return y - x < 1e-9; }),
                 angles.end());
    while (angles.size() > 1 && angles.front() + two_pi - angles.back() < 1e-9) angles.pop_back();

    auto mesh = std::make_shared<const DiskMesh>(DiskMesh::polar_with_angles(opts.n_rings, angles));
    const auto boundary = boundary_values_from_map(gamma_k, *mesh);
    auto opt = plateau_upper_on_mesh(mesh, boundary, opts);
    return NUpleRecovery(gamma, gamma_k, r, k, std::move(opt.map));
}

// ---------------------------------------------------------------------------
// Convergence reports
// ---------------------------------------------------------------------------

struct ConvergenceRow {
    double param = 0.0;
    double l1_gap = 0.0;
    double tv_gap = 0.0;
    double area_gap = 0.0;
    double max_slice_delta = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    bool gaps_non_increasing = true;
    double fitted_rate = 0.0; // least-squares slope of log(gap) vs log(param)
    double final_l1_gap = 0.0;
    double final_tv_gap = 0.0;
    double final_area_gap = 0.0;

    void finalize() {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].l1_gap > rows[i - 1].l1_gap + 1e-12) gaps_non_increasing = false;
            if (rows[i].tv_gap > rows[i - 1].tv_gap + 1e-12) gaps_non_increasing = false;
        }
        if (!rows.empty()) {
            final_l1_gap = rows.back().l1_gap;
            final_tv_gap = rows.back().tv_gap;
            final_area_gap = rows.back().area_gap;
        }
        // fit the area gaps where positive
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& row : rows) {
            if (row.area_gap <= 0 || row.param <= 0) continue;
            const double x = std::log(row.param), y = std::log(row.area_gap);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
        if (n >= 2 && sxx * n - sx * sx > 1e-30) fitted_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
};

// element interface for the generic checks
struct RecoveryElement {
    double param = 0.0;
    std::function<double(double)> l1_gap;  // tol -> ∫ |v - u|
    std::function<double(double)> tv;      // tol -> |Dv|(Ω)
    std::function<double(double)> area;    // tol -> 𝒜(v)
    std::function<double()> max_slice_delta; // empty when slices do not apply
};

inline ConvergenceReport strict_convergence_check(const std::vector<RecoveryElement>& elements,
                                                  double target_tv, double tol) {
    ConvergenceReport report;
    for (const auto& e : elements) {
        ConvergenceRow row;
        row.param = e.param;
        row.l1_gap = e.l1_gap(tol);
        row.tv_gap = std::abs(e.tv(tol) - target_tv);
        if (e.max_slice_delta) row.max_slice_delta = e.max_slice_delta();
        report.rows.push_back(row);
    }
    report.finalize();
    return report;
}

inline ConvergenceReport area_convergence_check(const std::vector<RecoveryElement>& elements,
                                                double formula_value, double tol) {
    ConvergenceReport report;
    for (const auto& e : elements) {
        ConvergenceRow row;
        row.param = e.param;
        row.area_gap = std::abs(e.area(tol) - formula_value);
        report.rows.push_back(row);
    }
    // monotonicity over the area column for this report
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        if (report.rows[i].area_gap > report.rows[i - 1].area_gap + 1e-12) report.gaps_non_increasing = false;
    report.finalize();
    return report;
}

// ready-made element lists for the two recovery families
inline std::vector<RecoveryElement> straight_jump_elements(const PiecewiseMapScene& scene,
                                                           const std::vector<double>& eps_values) {
    std::vector<RecoveryElement> out;
    for (double eps : eps_values) {
        auto rec = std::make_shared<StraightJumpRecovery>(straight_jump_recovery(scene, eps));
        RecoveryElement e;
        e.param = eps;
        e.l1_gap = [rec](double tol) { return rec->l1_distance_to_u(tol); };
        e.tv = [rec](double tol) { return rec->total_variation(tol); };
        e.area = [rec](double tol) { return rec->area(tol); };
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<RecoveryElement> n_uple_elements(const StepCircleMap& gamma, double r,
                                                    const std::vector<int>& ks, const PlateauOptions& opts,
                                                    std::vector<std::shared_ptr<NUpleRecovery>>* keep = nullptr) {
    std::vector<RecoveryElement> out;
    for (int k : ks) {
        auto rec = std::make_shared<NUpleRecovery>(make_n_uple_recovery(gamma, r, k, opts));
        if (keep) keep->push_back(rec);
        RecoveryElement e;
        e.param = 1.0 / double(k);
        e.l1_gap = [rec](double tol) { return rec->l1_distance_to_limit(tol); };
        e.tv = [rec](double tol) { return rec->total_variation(tol); };
        e.area = [rec](double tol) { return rec->area(tol); };
        e.max_slice_delta = [rec, target = gamma.total_variation()]() {
            double delta = 0.0;
            for (double rr : {0.3 * rec->radius(), 0.6 * rec->radius(), 0.9 * rec->radius()}) {
                const double slice = circular_slice_tv([&](Point2 x) { return rec->eval(x); }, {0, 0}, rr, 2048);
                delta = std::max(delta, std::abs(slice - target));
            }
            return delta;
        };
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace bvrelax
