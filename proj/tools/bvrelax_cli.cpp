// bvrelax: relaxed area of piecewise Lipschitz planar maps under strict BV
// convergence: regular graph area + jump-surface terms + junction Plateau
// certificates, with recovery-sequence convergence checks.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bvrelax/io.hpp"
#include "bvrelax/svg.hpp"

namespace {

using namespace bvrelax;

constexpr int exit_ok = 0;
constexpr int exit_io = 1;
constexpr int exit_invalid_scene = 2;
constexpr int exit_numerical = 3;
constexpr int exit_unknown_example = 4;

struct CommonConfig {
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int rings = 24;
    int angular = 96;
    double r = 1.0;
    int levels = 20;
    std::string scene_path, loop_path, csv_path, svg_path;
    std::string kind = "straight";

    [[nodiscard]] PlateauOptions plateau_options() const {
        PlateauOptions o;
        o.n_rings = rings;
        o.n_angular = angular;
        o.seed = seed;
        o.quad_tol = std::max(tol, 1e-10);
        return o;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
}

void print_breakdown(const AreaBreakdown& b) {
    std::printf("regular term          %.9f\n", b.regular);
    for (const auto& [id, v] : b.jump_terms) std::printf("jump term (curve %d)   %.9f\n", id, v);
    for (const auto& [id, c] : b.junction_terms)
        std::printf("junction %d            [%.9f, %.9f]  (%s)\n", id, c.lower, c.upper,
                    to_string(c.upper_method));
    std::printf("total                 [%.9f, %.9f]\n", b.total_lower, b.total_upper);
}

int run_area(const CommonConfig& cfg) {
    const auto scene = load_scene(cfg.scene_path);
    const auto report = validate_network(scene);
    for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (!report.pass) {
        for (const auto& v : report.violations) std::fprintf(stderr, "invalid scene: %s\n", v.c_str());
        return exit_invalid_scene;
    }
    const auto breakdown = relaxed_area_bv(scene, cfg.tol, cfg.plateau_options());
    print_breakdown(breakdown);
    if (!cfg.csv_path.empty())
        write_text(cfg.csv_path, breakdown_csv_header(breakdown) + "\n" + breakdown_csv_row(breakdown) + "\n");
    if (!cfg.svg_path.empty()) svg::write_scene(scene, cfg.svg_path);
    return exit_ok;
}

int run_tvj(const CommonConfig& cfg) {
    const auto gamma = load_step_map(cfg.scene_path);
    const auto cert = relaxed_tvj(gamma, cfg.r, cfg.plateau_options());
    std::printf("relaxed TVJ           [%.9f, %.9f]  (%s)\n", cert.lower, cert.upper,
                to_string(cert.upper_method));
    if (!cfg.csv_path.empty())
        write_text(cfg.csv_path, certificate_csv_header() + "\n" + certificate_csv_row(cert) + "\n");
    if (!cfg.svg_path.empty()) svg::write_loop(tilde_gamma(gamma), cfg.svg_path);
    return exit_ok;
}

int run_plateau(const CommonConfig& cfg) {
    const auto loop = load_loop(cfg.loop_path);
    const auto cert = plateau_certify(loop, cfg.plateau_options());
    std::printf("plateau lower bound   %.9f\n", cert.lower);
    std::printf("plateau upper bound   %.9f  (%s)\n", cert.upper, to_string(cert.upper_method));
    if (!cert.converged) std::printf("note: optimizer returned best-so-far without convergence\n");
    if (!cfg.csv_path.empty())
        write_text(cfg.csv_path, certificate_csv_header() + "\n" + certificate_csv_row(cert) + "\n");
    if (!cfg.svg_path.empty()) svg::write_winding_heatmap(loop, cfg.svg_path);
    return exit_ok;
}

int run_recovery_check(const CommonConfig& cfg) {
    ConvergenceReport strict, area;
    if (cfg.kind == "straight") {
        PiecewiseMapScene scene;
        if (!cfg.scene_path.empty()) {
            scene = load_scene(cfg.scene_path);
        } else {
            scene = make_straight_jump_scene(0.0, 1.0, RegionMapSpec::constant({1, 0}),
                                             RegionMapSpec::constant({0, 0}));
        }
        const auto elements = straight_jump_elements(scene, {1e-1, 1e-2, 1e-3});
        const double target_tv = total_variation(scene, 1e-9);
        const double formula =
            regular_area_term(scene, 1e-9) + jump_surface_area(scene.jump_curves.at(0), 1e-9);
        strict = strict_convergence_check(elements, target_tv, cfg.tol);
        area = area_convergence_check(elements, formula, cfg.tol);
        std::printf("straight-jump recovery against TV %.9f, area %.9f\n", target_tv, formula);
    } else if (cfg.kind == "nuple") {
        StepCircleMap gamma;
        gamma.arc_starts = {0.0, two_pi / 3.0, 2.0 * two_pi / 3.0};
        gamma.values = {{0, 0}, {1, 0}, {0, 1}};
        auto opts = cfg.plateau_options();
        const auto elements = n_uple_elements(gamma, cfg.r, {10, 40, 160}, opts);
        const double target_tv = cfg.r * gamma.total_variation();
        const auto cert = plateau_relaxed(gamma, opts);
        const double formula = pi * cfg.r * cfg.r + target_tv + cert.upper;
        strict = strict_convergence_check(elements, target_tv, cfg.tol);
        area = area_convergence_check(elements, formula, cfg.tol);
        std::printf("n-uple recovery against TV %.9f, area %.9f\n", target_tv, formula);
    } else {
        std::fprintf(stderr, "unknown recovery kind '%s' (straight|nuple)\n", cfg.kind.c_str());
        return exit_unknown_example;
    }
    std::printf("%12s %14s %14s %14s\n", "parameter", "l1 gap", "tv gap", "area gap");
    for (std::size_t i = 0; i < strict.rows.size(); ++i)
        std::printf("%12g %14.6e %14.6e %14.6e\n", strict.rows[i].param, strict.rows[i].l1_gap,
                    strict.rows[i].tv_gap, area.rows[i].area_gap);
    std::printf("gaps non-increasing: %s; fitted area rate: %.3f\n",
                strict.gaps_non_increasing && area.gaps_non_increasing ? "yes" : "no", area.fitted_rate);
    if (!cfg.csv_path.empty()) write_text(cfg.csv_path, convergence_csv(strict, area));
    if (!cfg.svg_path.empty()) svg::write_convergence(strict, area, cfg.svg_path);
    return exit_ok;
}

StepCircleMap triple_gamma(Point2 a, Point2 b, Point2 c) {
    StepCircleMap gamma;
    gamma.arc_starts = {0.0, two_pi / 3.0, 2.0 * two_pi / 3.0};
    gamma.values = {a, b, c};
    return gamma;
}

StepCircleMap butterfly_gamma() {
    const std::array<Point2, 5> v = {Point2{0, 0}, Point2{1, 0}, Point2{0, 1}, Point2{-2, 0}, Point2{0, -2}};
    const int order[12] = {0, 1, 2, 0, 3, 4, 0, 2, 1, 0, 4, 3};
    StepCircleMap gamma;
    for (int i = 0; i < 12; ++i) {
        gamma.arc_starts.push_back(two_pi * i / 12.0);
        gamma.values.push_back(v[std::size_t(order[i])]);
    }
    return gamma;
}

int run_example(const std::string& name, const CommonConfig& cfg) {
    const auto opts = cfg.plateau_options();
    if (name == "triple") {
        const Point2 a{0, 0}, b{1, 0}, c{0, 1};
        const double r = cfg.r;
        const auto formula = n_uple_point_area(triple_gamma(a, b, c), r, opts);
        const auto scene_value = relaxed_area_bv(make_triple_point_scene(a, b, c, r), cfg.tol, opts);
        const double closed = pi * r * r + r * (2.0 + std::sqrt(2.0)) + 0.5;
        std::printf("triple point map on B_%g, values (0,0),(1,0),(0,1)\n", r);
        std::printf("  closed form  pi r^2 + r L + P    = %.9f\n", closed);
        std::printf("  n-uple formula total             = [%.9f, %.9f]\n", formula.total_lower,
                    formula.total_upper);
        std::printf("  scene decomposition total        = [%.9f, %.9f]\n", scene_value.total_lower,
                    scene_value.total_upper);
        if (!cfg.csv_path.empty())
            write_text(cfg.csv_path,
                       breakdown_csv_header(formula) + "\n" + breakdown_csv_row(formula) + "\n");
        if (!cfg.svg_path.empty()) svg::write_scene(make_triple_point_scene(a, b, c, r), cfg.svg_path);
        return exit_ok;
    }
    if (name == "butterfly") {
        const auto gamma = butterfly_gamma();
        const auto cert = relaxed_tvj(gamma, 1.0, opts);
        const auto loop = tilde_gamma(gamma);
        const double t123 = 0.5, t145 = 2.0;
        std::printf("double butterfly, triangle areas %.3f and %.3f\n", t123, t145);
        std::printf("  closed form 2 min                = %.9f\n", 2.0 * std::min(t123, t145));
        std::printf("  certificate                      = [%.9f, %.9f]  (%s)\n", cert.lower, cert.upper,
                    to_string(cert.upper_method));
        const auto breakdown = n_uple_point_area(gamma, cfg.r, opts);
        std::printf("  n-uple total on B_%g              = [%.9f, %.9f]\n", cfg.r, breakdown.total_lower,
                    breakdown.total_upper);
        if (!cfg.csv_path.empty())
            write_text(cfg.csv_path, certificate_csv_header() + "\n" + certificate_csv_row(cert) + "\n");
        if (!cfg.svg_path.empty()) svg::write_winding_heatmap(loop, cfg.svg_path);
        return exit_ok;
    }
    if (name == "nuple") {
        // five values tracing a self-intersecting jump polygon; only bounds
        // are reported for this configuration
        StepCircleMap gamma;
        for (int k = 0; k < 5; ++k) {
            gamma.arc_starts.push_back(two_pi * k / 5.0);
            gamma.values.push_back(unit_dir(two_pi * (2 * k % 5) / 5.0));
        }
        const auto breakdown = n_uple_point_area(gamma, cfg.r, opts);
        std::printf("5-uple point map with a self-intersecting jump polygon, r = %g\n", cfg.r);
        print_breakdown(breakdown);
        if (!cfg.csv_path.empty())
            write_text(cfg.csv_path,
                       breakdown_csv_header(breakdown) + "\n" + breakdown_csv_row(breakdown) + "\n");
        if (!cfg.svg_path.empty()) svg::write_winding_heatmap(tilde_gamma(gamma), cfg.svg_path);
        return exit_ok;
    }
    if (name == "infinite-triple") {
        const Point2 a{0, 0}, b{1, 0}, c{0, 1};
        const auto rep = infinite_triple_point_report(a, b, c, cfg.levels);
        std::printf("infinite triple point, level-%d truncation\n", rep.levels);
        std::printf("  TV partial sum                   = %.9f\n", rep.tv_partial_sum);
        std::printf("  TV limit 7/3|b-a|+2/3|a-c|+|b-c| = %.9f\n", rep.tv_limit);
        std::printf("  TVJ lower bound N |T|            = %.9f\n", rep.tvj_lower_bound);
        std::printf("  L1-relaxation context bound      = %.9f\n", rep.l1_upper_bound);
        if (!cfg.csv_path.empty()) {
            std::string csv = "levels,tv_partial_sum,tv_limit,tvj_lower_bound,l1_upper_bound\n";
            char row[256];
            std::snprintf(row, sizeof row, "%d,%.12g,%.12g,%.12g,%.12g\n", rep.levels, rep.tv_partial_sum,
                          rep.tv_limit, rep.tvj_lower_bound, rep.l1_upper_bound);
            write_text(cfg.csv_path, csv + row);
        }
        if (!cfg.svg_path.empty())
            svg::write_scene(make_infinite_triple_scene(a, b, c, std::min(cfg.levels, 6)), cfg.svg_path);
        return exit_ok;
    }
    std::fprintf(stderr, "unknown example '%s' (triple|nuple|butterfly|infinite-triple)\n", name.c_str());
    return exit_unknown_example;
}


} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaxed BV area of piecewise Lipschitz planar maps"};
    app.require_subcommand(1);

    CommonConfig cfg;
    std::string example_name;

    const auto add_common = [&](CLI::App* cmd, bool scene, bool loop) {
        cmd->add_option("--tol", cfg.tol, "absolute tolerance for quadratures")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", cfg.seed, "seed for the optimizer multi-starts");
        cmd->add_option("--rings", cfg.rings, "disk mesh rings")->check(CLI::PositiveNumber);
        cmd->add_option("--angular", cfg.angular, "disk mesh angular resolution")->check(CLI::PositiveNumber);
        cmd->add_option("--csv", cfg.csv_path, "write the machine-readable CSV here");
        cmd->add_option("--svg", cfg.svg_path, "write a static SVG plot here");
        if (scene) cmd->add_option("--scene", cfg.scene_path, "input scene file (JSON)");
        if (loop) cmd->add_option("--loop", cfg.loop_path, "input loop file (JSON)");
    };

    auto* area = app.add_subcommand("area", "relaxed area decomposition of a scene");
    add_common(area, true, false);
    area->get_option("--scene")->required();

    auto* tvj = app.add_subcommand("tvj", "relaxed Jacobian total variation of a homogeneous map");
    add_common(tvj, true, false);
    tvj->add_option("--r", cfg.r, "disk radius (the result is independent of it)");
    tvj->get_option("--scene")->required();

    auto* plateau = app.add_subcommand("plateau", "certified Plateau bounds for a boundary loop");
    add_common(plateau, false, true);
    plateau->get_option("--loop")->required();

    auto* recovery = app.add_subcommand("recovery-check", "strict-convergence witnesses");
    add_common(recovery, true, false);
    recovery->add_option("--kind", cfg.kind, "family: straight | nuple");
    recovery->add_option("--r", cfg.r, "disk radius for the n-uple family");

    auto* example = app.add_subcommand("example", "reproduce a named configuration");
    add_common(example, false, false);
    example->add_option("name", example_name, "triple | nuple | butterfly | infinite-triple")->required();
    example->add_option("--r", cfg.r, "disk radius");
    example->add_option("--levels", cfg.levels, "truncation level for infinite-triple")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (area->parsed()) return run_area(cfg);
        if (tvj->parsed()) return run_tvj(cfg);
        if (plateau->parsed()) return run_plateau(cfg);
        if (recovery->parsed()) return run_recovery_check(cfg);
        if (example->parsed()) return run_example(example_name, cfg);
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return exit_io;
    } catch (const SceneFormatError& e) {
        std::fprintf(stderr, "scene error: %s\n", e.what());
        return exit_invalid_scene;
    } catch (const InvalidSceneError& e) {
        std::fprintf(stderr, "invalid scene: %s\n", e.what());
        return exit_invalid_scene;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_numerical;
    }
    return exit_ok;
}
