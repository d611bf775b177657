#pragma once

// 2D world primitives. Signed distances are exact Euclidean distances to
// the shape boundary, positive inside, so they double as the predicate
// robustness of region membership (meters of margin).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stlplan/mathutil.hpp"

namespace stlplan {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
};

struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    Point center() const { return {(xmin + xmax) / 2.0, (ymin + ymax) / 2.0}; }
};

struct ConvexPolygon {
    std::vector<Point> vertices;  // counterclockwise, strictly convex
};

using Shape = std::variant<Circle, Rect, ConvexPolygon>;

// Returns an error message when the shape invariants fail, nullopt when ok.
inline std::optional<std::string> shape_invariant_error(const Shape& shape) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        if (!(c->r > 0.0)) {
            return "circle radius must be > 0";
        }
        return std::nullopt;
    }
    if (const auto* r = std::get_if<Rect>(&shape)) {
        if (!(r->xmin < r->xmax) || !(r->ymin < r->ymax)) {
            return "rect requires xmin < xmax and ymin < ymax";
        }
        return std::nullopt;
    }
    const auto& poly = std::get<ConvexPolygon>(shape);
    const std::size_t n = poly.vertices.size();
    if (n < 3) {
        return "polygon requires at least 3 vertices";
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p0 = poly.vertices[i];
        const Point& p1 = poly.vertices[(i + 1) % n];
        const Point& p2 = poly.vertices[(i + 2) % n];
        if (cross(p1 - p0, p2 - p1) <= 0.0) {
            return "polygon must be strictly convex and counterclockwise";
        }
    }
    return std::nullopt;
}

namespace detail {

inline double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

inline double rect_signed_distance(const Rect& r, Point p) {
    const double inside = std::min(std::min(p.x - r.xmin, r.xmax - p.x),
                                   std::min(p.y - r.ymin, r.ymax - p.y));
    if (inside >= 0.0) {
        return inside;
    }
    const double dx = std::max({r.xmin - p.x, 0.0, p.x - r.xmax});
    const double dy = std::max({r.ymin - p.y, 0.0, p.y - r.ymax});
    return -std::hypot(dx, dy);
}

inline double polygon_signed_distance(const ConvexPolygon& poly, Point p) {
    const std::size_t n = poly.vertices.size();
    double min_line = std::numeric_limits<double>::infinity();
    double min_seg = std::numeric_limits<double>::infinity();
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly.vertices[i];
        const Point b = poly.vertices[(i + 1) % n];
        const Point e = b - a;
        const double line = cross(e, p - a) / norm(e);  // >0 left of edge = inside
        inside = inside && line >= 0.0;
        min_line = std::min(min_line, line);
        min_seg = std::min(min_seg, point_segment_distance(p, a, b));
    }
    return inside ? min_line : -min_seg;
}

}  // namespace detail

inline double signed_distance(const Shape& shape, Point p) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return c->r - std::hypot(p.x - c->cx, p.y - c->cy);
    }
    if (const auto* r = std::get_if<Rect>(&shape)) {
        return detail::rect_signed_distance(*r, p);
    }
    return detail::polygon_signed_distance(std::get<ConvexPolygon>(shape), p);
}

// Gradient of signed_distance with respect to p. Undefined on measure-zero
// kink sets (shape boundaries' medial axis, circle centers); returns an
// arbitrary subgradient there.
inline Point signed_distance_gradient(const Shape& shape, Point p) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        const Point d = p - Point{c->cx, c->cy};
        const double len = norm(d);
        if (len == 0.0) {
            return {0.0, 0.0};
        }
        return {-d.x / len, -d.y / len};
    }
    if (const auto* r = std::get_if<Rect>(&shape)) {
        const double terms[4] = {p.x - r->xmin, r->xmax - p.x, p.y - r->ymin, r->ymax - p.y};
        const Point grads[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        const int k = static_cast<int>(std::min_element(terms, terms + 4) - terms);
        if (terms[k] >= 0.0) {
            return grads[k];
        }
        const Point q{std::clamp(p.x, r->xmin, r->xmax), std::clamp(p.y, r->ymin, r->ymax)};
        const Point d = p - q;
        const double len = norm(d);
        return {-d.x / len, -d.y / len};
    }
    const auto& poly = std::get<ConvexPolygon>(shape);
    const std::size_t n = poly.vertices.size();
    double best_line = std::numeric_limits<double>::infinity();
    Point best_normal{0, 0};
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly.vertices[i];
        const Point b = poly.vertices[(i + 1) % n];
        const Point e = b - a;
        const double elen = norm(e);
        const double line = cross(e, p - a) / elen;
        inside = inside && line >= 0.0;
        if (line < best_line) {
            best_line = line;
            best_normal = {-e.y / elen, e.x / elen};  // left normal, points inward
        }
    }
    if (inside) {
        return best_normal;
    }
    // outside: closest boundary point q; sd = -|p - q|
    double best = std::numeric_limits<double>::infinity();
    Point q{0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly.vertices[i];
        const Point b = poly.vertices[(i + 1) % n];
        const Point ab = b - a;
        double t = dot(p - a, ab) / dot(ab, ab);
        t = std::clamp(t, 0.0, 1.0);
        const Point cand = a + t * ab;
        const double d = distance(p, cand);
        if (d < best) {
            best = d;
            q = cand;
        }
    }
    const Point d = p - q;
    return {-d.x / best, -d.y / best};
}

inline Point centroid(const Shape& shape) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return {c->cx, c->cy};
    }
    if (const auto* r = std::get_if<Rect>(&shape)) {
        return r->center();
    }
    const auto& poly = std::get<ConvexPolygon>(shape);
    double area2 = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly.vertices[i];
        const Point b = poly.vertices[(i + 1) % n];
        const double w = cross(a, b);
        area2 += w;
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    return {cx / (3.0 * area2), cy / (3.0 * area2)};
}

// Axis-aligned bounding box, used for world-containment checks.
inline Rect bounding_box(const Shape& shape) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return {c->cx - c->r, c->cy - c->r, c->cx + c->r, c->cy + c->r};
    }
    if (const auto* r = std::get_if<Rect>(&shape)) {
        return *r;
    }
    const auto& poly = std::get<ConvexPolygon>(shape);
    Rect box{poly.vertices[0].x, poly.vertices[0].y, poly.vertices[0].x, poly.vertices[0].y};
    for (const Point& v : poly.vertices) {
        box.xmin = std::min(box.xmin, v.x);
        box.ymin = std::min(box.ymin, v.y);
        box.xmax = std::max(box.xmax, v.x);
        box.ymax = std::max(box.ymax, v.y);
    }
    return box;
}

inline bool shape_within(const Rect& world, const Shape& shape) {
    const Rect box = bounding_box(shape);
    return box.xmin >= world.xmin && box.ymin >= world.ymin && box.xmax <= world.xmax &&
           box.ymax <= world.ymax;
}

// Soft obstacle barrier: sum_k softplus(sharpness * sd_k(p)) / sharpness.
// Approaches the positive part of the signed distance inside an obstacle
// and decays to zero away from it; scale stays in meters.
inline double obstacle_penalty(Point p, std::span<const Shape> obstacles, double sharpness) {
    if (!(sharpness > 0.0)) {
        throw std::invalid_argument("obstacle penalty sharpness must be > 0");
    }
    double total = 0.0;
    for (const Shape& obs : obstacles) {
        total += softplus(sharpness * signed_distance(obs, p)) / sharpness;
    }
    return total;
}

}  // namespace stlplan
