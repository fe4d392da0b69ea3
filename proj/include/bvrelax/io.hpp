#pragma once
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bvrelax/recovery.hpp"

namespace bvrelax {

struct IoError : Error { using Error::Error; };
struct SceneFormatError : Error { using Error::Error; };

inline constexpr const char* schema_version = "bv-relax/1";

namespace io_detail {

using nlohmann::json;

inline json to_json(Point2 p) { return json::array({p.x, p.y}); }

inline Point2 point_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SceneFormatError(std::string("expected [x, y] for ") + what);
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Point2> points_from(const json& j, const char* what) {
    std::vector<Point2> out;
    if (!j.is_array()) throw SceneFormatError(std::string("expected an array of points for ") + what);
    for (const auto& e : j) out.push_back(point_from(e, what));
    return out;
}

inline json region_to_json(const RegionSpec& r) {
    json j;
    if (const auto* d = std::get_if<DiskRegion>(&r.shape)) {
        j["type"] = "disk";
        j["center"] = to_json(d->center);
        j["radius"] = d->radius;
    } else if (const auto* s = std::get_if<SectorRegion>(&r.shape)) {
        j["type"] = "sector";
        j["center"] = to_json(s->center);
        j["radius"] = s->radius;
        j["angle_start"] = s->angle_start;
        j["angle_end"] = s->angle_end;
    } else {
        const auto& p = std::get<PolygonRegion>(r.shape);
        j["type"] = "polygon";
        j["vertices"] = json::array();
        for (const Point2& v : p.vertices) j["vertices"].push_back(to_json(v));
    }
    return j;
}

inline RegionSpec region_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "disk")
        return RegionSpec::disk(point_from(j.at("center"), "domain center"), j.at("radius").get<double>());
    if (type == "sector")
        return RegionSpec::sector(point_from(j.at("center"), "sector center"), j.at("radius").get<double>(),
                                  j.at("angle_start").get<double>(), j.at("angle_end").get<double>());
    if (type == "polygon") return RegionSpec::polygon(points_from(j.at("vertices"), "polygon vertices"));
    throw SceneFormatError("unknown region type '" + type + "'");
}

inline json map_to_json(const RegionMapSpec& m) {
    json j;
    if (const auto* c = std::get_if<ConstantMap>(&m.map)) {
        j["type"] = "constant";
        j["value"] = to_json(c->value);
    } else if (const auto* a = std::get_if<AffineMap>(&m.map)) {
        j["type"] = "affine";
        j["matrix"] = json::array({json::array({a->a[0], a->a[1]}), json::array({a->a[2], a->a[3]})});
        j["offset"] = to_json(a->b);
    } else if (const auto* r = std::get_if<RadialAngularMap>(&m.map)) {
        j["type"] = "radial_angular";
        j["center"] = to_json(r->center);
        j["angles"] = r->profile.angles;
        j["values"] = json::array();
        for (const Point2& v : r->profile.values) j["values"].push_back(to_json(v));
    } else {
        throw SceneFormatError("callable region maps cannot be serialized");
    }
    return j;
}

inline RegionMapSpec map_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return RegionMapSpec::constant(point_from(j.at("value"), "constant value"));
    if (type == "affine") {
        const auto& mat = j.at("matrix");
        if (!mat.is_array() || mat.size() != 2 || mat[0].size() != 2 || mat[1].size() != 2)
            throw SceneFormatError("affine matrix must be 2x2");
        return RegionMapSpec::affine({mat[0][0].get<double>(), mat[0][1].get<double>(),
                                      mat[1][0].get<double>(), mat[1][1].get<double>()},
                                     point_from(j.at("offset"), "affine offset"));
    }
    if (type == "radial_angular") {
        RadialAngularMap r;
        r.center = point_from(j.at("center"), "radial_angular center");
        r.profile.angles = j.at("angles").get<std::vector<double>>();
        r.profile.values = points_from(j.at("values"), "radial_angular values");
        r.profile.validate();
        return RegionMapSpec(std::move(r));
    }
    throw SceneFormatError("unknown map type '" + type + "'");
}

inline json curve_to_json(const SourceCurve& c) {
    json j;
    if (const auto* s = std::get_if<SegmentCurve>(&c.shape)) {
        j["type"] = "segment";
        j["from"] = to_json(s->from);
        j["to"] = to_json(s->to);
    } else if (const auto* a = std::get_if<ArcCurve>(&c.shape)) {
        j["type"] = "arc";
        j["center"] = to_json(a->center);
        j["radius"] = a->radius;
        j["angle_start"] = a->angle_start;
        j["sweep"] = a->direction * c.length / a->radius;
    } else {
        const auto& p = std::get<PolylineCurve>(c.shape);
        j["type"] = "polyline";
        j["points"] = json::array();
        for (const Point2& v : p.points) j["points"].push_back(to_json(v));
    }
    return j;
}

inline SourceCurve curve_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "segment")
        return SourceCurve::segment(point_from(j.at("from"), "segment from"), point_from(j.at("to"), "segment to"));
    if (type == "arc")
        return SourceCurve::arc(point_from(j.at("center"), "arc center"), j.at("radius").get<double>(),
                                j.at("angle_start").get<double>(), j.at("sweep").get<double>());
    if (type == "polyline") return SourceCurve::polyline(points_from(j.at("points"), "polyline points"));
    throw SceneFormatError("unknown curve type '" + type + "'");
}

inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line:column for the diagnostic
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
        }
        throw SceneFormatError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

inline void check_schema(const json& j, const std::string& path) {
    if (!j.contains("schema") || !j["schema"].is_string())
        throw SceneFormatError(path + ": missing schema field");
    const auto schema = j["schema"].get<std::string>();
    if (schema != schema_version)
        throw SceneFormatError(path + ": unsupported schema '" + schema + "' (expected '" +
                               schema_version + "')");
}

} // namespace io_detail

// ---------------------------------------------------------------------------
// Scene files
// ---------------------------------------------------------------------------

inline nlohmann::json scene_to_json(const PiecewiseMapScene& scene) {
    using io_detail::to_json;
    nlohmann::json j;
    j["schema"] = schema_version;
    j["domain"] = io_detail::region_to_json(scene.domain);
    j["regions"] = nlohmann::json::array();
    for (const auto& [region, map] : scene.regions)
        j["regions"].push_back({{"region", io_detail::region_to_json(region)},
                                {"map", io_detail::map_to_json(map)}});
    j["jump_curves"] = nlohmann::json::array();
    for (const JumpCurve& c : scene.jump_curves) {
        nlohmann::json cj;
        cj["id"] = c.id;
        cj["curve"] = io_detail::curve_to_json(c.alpha);
        cj["plus_region"] = c.plus_region;
        cj["minus_region"] = c.minus_region;
        j["jump_curves"].push_back(std::move(cj));
    }
    j["junctions"] = nlohmann::json::array();
    for (const Junction& junction : scene.junctions) {
        nlohmann::json ju;
        ju["point"] = to_json(junction.point);
        ju["start_angle"] = junction.start_angle;
        ju["sector_angles"] = junction.sector_angles;
        ju["sector_values"] = nlohmann::json::array();
        for (const Point2& v : junction.sector_values) ju["sector_values"].push_back(to_json(v));
        j["junctions"].push_back(std::move(ju));
    }
    return j;
}

inline PiecewiseMapScene scene_from_json(const nlohmann::json& j) {
    PiecewiseMapScene scene;
    scene.domain = io_detail::region_from_json(j.at("domain"));
    for (const auto& rj : j.at("regions"))
        scene.regions.emplace_back(io_detail::region_from_json(rj.at("region")),
                                   io_detail::map_from_json(rj.at("map")));
    int next_id = 0;
    if (j.contains("jump_curves"))
        for (const auto& cj : j.at("jump_curves")) {
            JumpCurve c;
            c.id = cj.value("id", next_id);
            next_id = c.id + 1;
            c.alpha = io_detail::curve_from_json(cj.at("curve"));
            c.plus_region = cj.value("plus_region", -1);
            c.minus_region = cj.value("minus_region", -1);
            scene.jump_curves.push_back(std::move(c));
        }
    if (j.contains("junctions"))
        for (const auto& ju : j.at("junctions")) {
            Junction junction;
            junction.point = io_detail::point_from(ju.at("point"), "junction point");
            junction.start_angle = ju.value("start_angle", 0.0);
            junction.sector_angles = ju.at("sector_angles").get<std::vector<double>>();
            junction.sector_values = io_detail::points_from(ju.at("sector_values"), "junction sector values");
            scene.junctions.push_back(std::move(junction));
        }
    for (JumpCurve& c : scene.jump_curves)
        if (c.plus_region >= 0 && c.minus_region >= 0) attach_traces(c, scene);
    return scene;
}

inline void save_scene(const PiecewiseMapScene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << scene_to_json(scene).dump(2) << "\n";
}

inline PiecewiseMapScene load_scene(const std::string& path) {
    const auto j = io_detail::parse_file(path);
    io_detail::check_schema(j, path);
    if (!j.contains("domain")) throw SceneFormatError(path + ": missing 'domain'");
    return scene_from_json(j);
}

// ---------------------------------------------------------------------------
// Loop and gamma files
// ---------------------------------------------------------------------------

inline void save_loop(const BoundaryLoop& loop, const std::string& path) {
    nlohmann::json j;
    j["schema"] = schema_version;
    j["loop"]["vertices"] = nlohmann::json::array();
    for (const Point2& v : loop.vertices) j["loop"]["vertices"].push_back(io_detail::to_json(v));
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

inline BoundaryLoop load_loop(const std::string& path) {
    const auto j = io_detail::parse_file(path);
    io_detail::check_schema(j, path);
    if (!j.contains("loop") || !j["loop"].contains("vertices"))
        throw SceneFormatError(path + ": missing 'loop.vertices'");
    return BoundaryLoop(io_detail::points_from(j["loop"]["vertices"], "loop vertices"));
}

inline void save_step_map(const StepCircleMap& gamma, const std::string& path) {
    nlohmann::json j;
    j["schema"] = schema_version;
    j["gamma"]["arc_starts"] = gamma.arc_starts;
    j["gamma"]["values"] = nlohmann::json::array();
    for (const Point2& v : gamma.values) j["gamma"]["values"].push_back(io_detail::to_json(v));
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

inline StepCircleMap load_step_map(const std::string& path) {
    const auto j = io_detail::parse_file(path);
    io_detail::check_schema(j, path);
    if (!j.contains("gamma")) throw SceneFormatError(path + ": missing 'gamma'");
    StepCircleMap gamma;
    gamma.arc_starts = j["gamma"].at("arc_starts").get<std::vector<double>>();
    gamma.values = io_detail::points_from(j["gamma"].at("values"), "gamma values");
    gamma.validate();
    return gamma;
}

// ---------------------------------------------------------------------------
// Reports: fixed %.12g formatting keeps identical configs byte-identical
// ---------------------------------------------------------------------------

namespace io_detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace io_detail

inline nlohmann::json certificate_to_json(const PlateauCertificate& cert) {
    nlohmann::json j;
    j["schema"] = schema_version;
    j["lower"] = cert.lower;
    j["upper"] = cert.upper;
    j["method"] = to_string(cert.upper_method);
    j["raw_upper"] = cert.raw_upper;
    j["mesh_slack"] = cert.mesh_slack;
    j["lower_tol"] = cert.lower_tol;
    j["iterations"] = cert.iterations;
    j["converged"] = cert.converged;
    j["mesh"] = {{"n_rings", cert.n_rings}, {"n_angular", cert.n_angular}};
    return j;
}

inline std::string certificate_csv_header() { return "lower,upper,method"; }

inline std::string certificate_csv_row(const PlateauCertificate& cert) {
    return io_detail::fmt(cert.lower) + "," + io_detail::fmt(cert.upper) + "," + to_string(cert.upper_method);
}

inline std::string breakdown_csv_header(const AreaBreakdown& b) {
    std::string h = "regular";
    for (const auto& [id, v] : b.jump_terms) h += ",jump_" + std::to_string(id);
    for (const auto& [id, c] : b.junction_terms)
        h += ",junction_" + std::to_string(id) + "_lower,junction_" + std::to_string(id) + "_upper";
    h += ",total_lower,total_upper";
    return h;
}

inline std::string breakdown_csv_row(const AreaBreakdown& b) {
    std::string r = io_detail::fmt(b.regular);
    for (const auto& [id, v] : b.jump_terms) r += "," + io_detail::fmt(v);
    for (const auto& [id, c] : b.junction_terms)
        r += "," + io_detail::fmt(c.lower) + "," + io_detail::fmt(c.upper);
    r += "," + io_detail::fmt(b.total_lower) + "," + io_detail::fmt(b.total_upper);
    return r;
}

inline nlohmann::json breakdown_to_json(const AreaBreakdown& b) {
    nlohmann::json j;
    j["schema"] = schema_version;
    j["regular"] = b.regular;
    j["jump_terms"] = nlohmann::json::array();
    for (const auto& [id, v] : b.jump_terms) j["jump_terms"].push_back({{"curve", id}, {"value", v}});
    j["junction_terms"] = nlohmann::json::array();
    for (const auto& [id, c] : b.junction_terms)
        j["junction_terms"].push_back({{"junction", id},
                                       {"lower", c.lower},
                                       {"upper", c.upper},
                                       {"method", to_string(c.upper_method)}});
    j["total_lower"] = b.total_lower;
    j["total_upper"] = b.total_upper;
    return j;
}

inline std::string convergence_csv_header() { return "parameter,l1_gap,tv_gap,area_gap"; }

inline std::string convergence_csv(const ConvergenceReport& strict, const ConvergenceReport& area) {
    std::string out = convergence_csv_header() + "\n";
    for (std::size_t i = 0; i < strict.rows.size(); ++i) {
        const double area_gap = i < area.rows.size() ? area.rows[i].area_gap : 0.0;
        out += io_detail::fmt(strict.rows[i].param) + "," + io_detail::fmt(strict.rows[i].l1_gap) + "," +
               io_detail::fmt(strict.rows[i].tv_gap) + "," + io_detail::fmt(area_gap) + "\n";
    }
    return out;
}

} // namespace bvrelax
