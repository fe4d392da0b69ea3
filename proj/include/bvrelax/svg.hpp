#pragma once
#include <fstream>

#include "bvrelax/recovery.hpp"

namespace bvrelax {

// Minimal static SVG emitter: scene partitions, loops, winding heatmaps,
// convergence curves.  Plot output only.
class SvgCanvas {
  public:
    SvgCanvas(double x0, double y0, double x1, double y1, int width = 640)
        : x0_(x0), y0_(y0), x1_(x1), y1_(y1), width_(width) {
        const double aspect = (y1 - y0) / std::max(x1 - x0, 1e-12);
        height_ = int(width * aspect + 0.5);
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    void polyline(const std::vector<Point2>& pts, const std::string& color, double stroke = 1.5,
                  bool closed = false) {
        if (pts.size() < 2) return;
        body_ += closed ? "<polygon points=\"" : "<polyline points=\"";
        for (const Point2& p : pts) body_ += coord(p) + " ";
        body_ += "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + num(stroke) + "\"/>\n";
    }

    void filled_polygon(const std::vector<Point2>& pts, const std::string& fill, double opacity = 0.35) {
        if (pts.size() < 3) return;
        body_ += "<polygon points=\"";
        for (const Point2& p : pts) body_ += coord(p) + " ";
        body_ += "\" fill=\"" + fill + "\" fill-opacity=\"" + num(opacity) + "\" stroke=\"none\"/>\n";
    }

    void circle(Point2 c, double r, const std::string& color, bool fill = false) {
        body_ += "<circle cx=\"" + num(sx(c.x)) + "\" cy=\"" + num(sy(c.y)) + "\" r=\"" +
                 num(r * scale()) + "\" fill=\"" + (fill ? color : std::string("none")) + "\" stroke=\"" +
                 color + "\"/>\n";
    }

    void dot(Point2 c, const std::string& color, double px = 3.0) {
        body_ += "<circle cx=\"" + num(sx(c.x)) + "\" cy=\"" + num(sy(c.y)) + "\" r=\"" + num(px) +
                 "\" fill=\"" + color + "\"/>\n";
    }

    void cell(Point2 lo, Point2 hi, const std::string& fill) {
        body_ += "<rect x=\"" + num(sx(lo.x)) + "\" y=\"" + num(sy(hi.y)) + "\" width=\"" +
                 num((hi.x - lo.x) * scale()) + "\" height=\"" + num((hi.y - lo.y) * scale()) +
                 "\" fill=\"" + fill + "\" stroke=\"none\"/>\n";
    }

    void text(Point2 at, const std::string& label, int px = 12) {
        body_ += "<text x=\"" + num(sx(at.x)) + "\" y=\"" + num(sy(at.y)) + "\" font-size=\"" +
                 std::to_string(px) + "\" font-family=\"monospace\">" + label + "</text>\n";
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw Error("svg: cannot write '" + path + "'");
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_ << "\" height=\"" << height_
            << "\" viewBox=\"0 0 " << width_ << " " << height_ << "\">\n"
            << body_ << "</svg>\n";
    }

  private:
    [[nodiscard]] double scale() const { return width_ / std::max(x1_ - x0_, 1e-12); }
    [[nodiscard]] double sx(double x) const { return (x - x0_) * scale(); }
    [[nodiscard]] double sy(double y) const { return height_ - (y - y0_) * scale(); }
    [[nodiscard]] std::string coord(Point2 p) const { return num(sx(p.x)) + "," + num(sy(p.y)); }
    static std::string num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    double x0_, y0_, x1_, y1_;
    int width_, height_;
    std::string body_;
};

namespace svg {

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44", "#66ccee", "#aa3377"};
    return colors[i % 6];
}

inline void write_loop(const BoundaryLoop& loop, const std::string& path) {
    const auto box = [&] {
        double lox = loop.vertices[0].x, hix = lox, loy = loop.vertices[0].y, hiy = loy;
        for (const Point2& v : loop.vertices) {
            lox = std::min(lox, v.x); hix = std::max(hix, v.x);
            loy = std::min(loy, v.y); hiy = std::max(hiy, v.y);
        }
        const double pad = 0.1 * std::max(hix - lox, hiy - loy) + 1e-6;
        return std::array<double, 4>{lox - pad, loy - pad, hix + pad, hiy + pad};
    }();
    SvgCanvas canvas(box[0], box[1], box[2], box[3]);
    canvas.polyline(loop.vertices, palette(0), 2.0, true);
    for (const Point2& v : loop.vertices) canvas.dot(v, palette(1), 2.5);
    canvas.write(path);
}

inline void write_winding_heatmap(const BoundaryLoop& loop, const std::string& path, int cells = 96) {
    double lox = loop.vertices[0].x, hix = lox, loy = loop.vertices[0].y, hiy = loy;
    for (const Point2& v : loop.vertices) {
        lox = std::min(lox, v.x); hix = std::max(hix, v.x);
        loy = std::min(loy, v.y); hiy = std::max(hiy, v.y);
    }
    const double pad = 0.08 * std::max(hix - lox, hiy - loy) + 1e-6;
    lox -= pad; loy -= pad; hix += pad; hiy += pad;
    SvgCanvas canvas(lox, loy, hix, hiy);
    const auto edges = loop.edges();
    int max_abs = 1;
    std::vector<int> w(std::size_t(cells) * std::size_t(cells));
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const Point2 c{lox + (hix - lox) * (i + 0.5) / cells, loy + (hiy - loy) * (j + 0.5) / cells};
            w[std::size_t(i * cells + j)] = detail::winding_unchecked(edges, c);
            max_abs = std::max(max_abs, std::abs(w[std::size_t(i * cells + j)]));
        }
    for (int i = 0; i < cells; ++i)
        for (int j = 0; j < cells; ++j) {
            const int v = w[std::size_t(i * cells + j)];
            if (v == 0) continue;
            const int shade = 255 - int(200.0 * std::abs(v) / max_abs);
            char color[8];
            std::snprintf(color, sizeof color, v > 0 ? "#%02xff%02x" : "#ff%02x%02x", shade, shade);
            canvas.cell({lox + (hix - lox) * i / cells, loy + (hiy - loy) * j / cells},
                        {lox + (hix - lox) * (i + 1) / cells, loy + (hiy - loy) * (j + 1) / cells}, color);
        }
    canvas.polyline(loop.vertices, "#222222", 1.5, true);
    canvas.write(path);
}

inline void write_scene(const PiecewiseMapScene& scene, const std::string& path) {
    const auto box = scene.domain.bounding_box();
    const double pad = 0.08 * std::max(box.x1 - box.x0, box.y1 - box.y0);
    SvgCanvas canvas(box.x0 - pad, box.y0 - pad, box.x1 + pad, box.y1 + pad);
    for (std::size_t k = 0; k < scene.regions.size(); ++k) {
        if (const auto* p = std::get_if<PolygonRegion>(&scene.regions[k].first.shape))
            canvas.filled_polygon(p->vertices, palette(k), 0.25);
        if (const auto* s = std::get_if<SectorRegion>(&scene.regions[k].first.shape)) {
            std::vector<Point2> pts = {s->center};
            for (int i = 0; i <= 24; ++i)
                pts.push_back(s->center +
                              s->radius * unit_dir(s->angle_start + (s->angle_end - s->angle_start) * i / 24.0));
            canvas.filled_polygon(pts, palette(k), 0.25);
        }
    }
    if (const auto* d = std::get_if<DiskRegion>(&scene.domain.shape)) canvas.circle(d->center, d->radius, "#333333");
    if (const auto* p = std::get_if<PolygonRegion>(&scene.domain.shape))
        canvas.polyline(p->vertices, "#333333", 1.5, true);
    for (const JumpCurve& c : scene.jump_curves)
        canvas.polyline(detail::discretize_curve(c.alpha, 48), "#222222", 2.0);
    for (const Junction& j : scene.junctions) canvas.dot(j.point, "#cc2222", 4.0);
    canvas.write(path);
}

// log-log gap plot: one polyline per column with markers
inline void write_convergence(const ConvergenceReport& strict, const ConvergenceReport& area,
                              const std::string& path) {
    std::vector<std::array<double, 2>> series[3];
    const auto log10s = [](double v) { return std::log10(std::max(v, 1e-16)); };
    for (const auto& row : strict.rows) {
        series[0].push_back({log10s(row.param), log10s(row.l1_gap)});
        series[1].push_back({log10s(row.param), log10s(row.tv_gap)});
    }
    for (const auto& row : area.rows) series[2].push_back({log10s(row.param), log10s(row.area_gap)});
    double lox = 0, hix = 1, loy = 0, hiy = 1;
    bool first = true;
    for (const auto& s : series)
        for (const auto& p : s) {
            if (first) { lox = hix = p[0]; loy = hiy = p[1]; first = false; }
            lox = std::min(lox, p[0]); hix = std::max(hix, p[0]);
            loy = std::min(loy, p[1]); hiy = std::max(hiy, p[1]);
        }
    const double padx = 0.1 * (hix - lox + 1e-6), pady = 0.1 * (hiy - loy + 1e-6);
    SvgCanvas canvas(lox - padx, loy - pady, hix + padx, hiy + pady);
    const char* labels[3] = {"l1", "tv", "area"};
    for (int s = 0; s < 3; ++s) {
        std::vector<Point2> pts;
        for (const auto& p : series[s]) pts.push_back({p[0], p[1]});
        canvas.polyline(pts, palette(std::size_t(s)), 2.0);
        for (const Point2& p : pts) canvas.dot(p, palette(std::size_t(s)), 3.0);
        if (!pts.empty()) canvas.text(pts.front() + Point2{0.02, 0.02}, labels[s]);
    }
    canvas.write(path);
}

} // namespace svg
} // namespace bvrelax
