#pragma once

// Triangle scene in local km, a procedural street-grid city, and a BVH for
// nearest-hit ray queries.

#include "leochan/core/error.hpp"
#include "leochan/core/vec3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace leochan {

struct Material {
    std::string name;
    double relative_permittivity{1.0};
    double conductivity{0.0}; ///< S/m

    static Material concrete() { return {"concrete", 5.31, 0.1395}; }
};

struct Triangle {
    std::array<Vec3, 3> v;
    int material_id{0};
    int face_id{0}; ///< shared by the triangles of one planar face

    Vec3 unnormalized_normal() const { return cross(v[1] - v[0], v[2] - v[0]); }
    Vec3 normal() const { return normalize(unnormalized_normal()); }
    double area() const { return 0.5 * norm(unnormalized_normal()); }
};

struct Hit {
    double distance{0.0};
    int face_id{-1};
    int triangle{-1};
    int material_id{-1};
    Vec3 point;
    Vec3 normal; ///< unit, facing the incoming ray
};

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void expand(const Vec3& p)
    {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    void expand(const Aabb& b)
    {
        expand(b.lo);
        expand(b.hi);
    }
    bool empty() const { return lo.x > hi.x; }
    Vec3 extent() const { return hi - lo; }
    std::array<Vec3, 8> corners() const
    {
        return {Vec3{lo.x, lo.y, lo.z}, Vec3{hi.x, lo.y, lo.z}, Vec3{lo.x, hi.y, lo.z}, Vec3{hi.x, hi.y, lo.z},
                Vec3{lo.x, lo.y, hi.z}, Vec3{hi.x, lo.y, hi.z}, Vec3{lo.x, hi.y, hi.z}, Vec3{hi.x, hi.y, hi.z}};
    }
    int longest_axis() const
    {
        const Vec3 e = extent();
        if (e.x >= e.y && e.x >= e.z) return 0;
        return e.y >= e.z ? 1 : 2;
    }
};

namespace detail {

inline double axis(const Vec3& v, int a) { return a == 0 ? v.x : (a == 1 ? v.y : v.z); }

/// Möller–Trumbore. Returns the ray parameter or a negative value on a miss.
inline double intersect_triangle(const Triangle& tri, const Vec3& o, const Vec3& d)
{
    const Vec3 e1 = tri.v[1] - tri.v[0];
    const Vec3 e2 = tri.v[2] - tri.v[0];
    const Vec3 p = cross(d, e2);
    const double det = dot(e1, p);
    if (std::fabs(det) < 1e-18) return -1.0;
    const double inv = 1.0 / det;
    const Vec3 s = o - tri.v[0];
    const double u = dot(s, p) * inv;
    if (u < 0.0 || u > 1.0) return -1.0;
    const Vec3 q = cross(s, e1);
    const double v = dot(d, q) * inv;
    if (v < 0.0 || u + v > 1.0) return -1.0;
    return dot(e2, q) * inv;
}

/// Slab test; returns the entry parameter clipped to [t0, t1], or +inf on a miss.
inline double slab_entry(const Aabb& b, const Vec3& o, const Vec3& inv_d, const Vec3& d, double t0, double t1)
{
    for (int a = 0; a < 3; ++a) {
        const double oa = axis(o, a), lo = axis(b.lo, a), hi = axis(b.hi, a);
        if (axis(d, a) == 0.0) {
            if (oa < lo || oa > hi) return std::numeric_limits<double>::infinity();
            continue;
        }
        double tn = (lo - oa) * axis(inv_d, a);
        double tf = (hi - oa) * axis(inv_d, a);
        if (tn > tf) std::swap(tn, tf);
        t0 = std::max(t0, tn);
        t1 = std::min(t1, tf);
        if (t0 > t1) return std::numeric_limits<double>::infinity();
    }
    return t0;
}

} // namespace detail

class Scene {
public:
    Scene() = default;

    Scene(std::vector<Triangle> triangles, std::vector<Material> materials)
        : tris_(std::move(triangles)), materials_(std::move(materials))
    {
        for (const auto& m : materials_) {
            if (!(m.relative_permittivity >= 1.0) || !(m.conductivity >= 0.0))
                throw Error(ErrorCode::InvalidDimensions, "material '" + m.name + "' has eps_r < 1 or sigma < 0");
        }
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            const auto& t = tris_[i];
            if (!(t.area() > 1e-12))
                throw Error(ErrorCode::InvalidDimensions, "triangle " + std::to_string(i) + " is degenerate");
            if (t.material_id < 0 || static_cast<std::size_t>(t.material_id) >= materials_.size())
                throw Error(ErrorCode::InvalidDimensions,
                            "triangle " + std::to_string(i) + " references unknown material " +
                                std::to_string(t.material_id));
            for (const auto& v : t.v) bounds_.expand(v);
        }
        build_bvh();
    }

    const std::vector<Triangle>& triangles() const { return tris_; }
    const std::vector<Material>& materials() const { return materials_; }
    const Aabb& bounds() const { return bounds_; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Nearest hit with distance in (t_min, t_max]; ties go to the lowest triangle index.
    std::optional<Hit> intersect(const Vec3& o, const Vec3& d, double t_min = 0.0,
                                 double t_max = std::numeric_limits<double>::infinity()) const
    {
        if (nodes_.empty()) return std::nullopt;
        const Vec3 inv{1.0 / d.x, 1.0 / d.y, 1.0 / d.z};
        double best_t = t_max;
        int best = -1;
        std::array<std::pair<int, double>, 64> stack;
        int sp = 0;
        const double root_t = detail::slab_entry(nodes_[0].box, o, inv, d, t_min, best_t);
        if (std::isinf(root_t)) return std::nullopt;
        stack[sp++] = {0, root_t};
        while (sp > 0) {
            const auto [ni, entry] = stack[--sp];
            if (entry > best_t) continue;
            const Node& n = nodes_[static_cast<std::size_t>(ni)];
            if (n.count > 0) {
                for (int k = 0; k < n.count; ++k) {
                    const int ti = order_[static_cast<std::size_t>(n.first + k)];
                    const double t = detail::intersect_triangle(tris_[static_cast<std::size_t>(ti)], o, d);
                    if (t > t_min && (t < best_t || (t == best_t && (best < 0 || ti < best)))) {
                        if (t <= t_max) {
                            best_t = t;
                            best = ti;
                        }
                    }
                }
                continue;
            }
            const int l = n.first, r = n.first + 1;
            const double tl = detail::slab_entry(nodes_[static_cast<std::size_t>(l)].box, o, inv, d, t_min, best_t);
            const double tr = detail::slab_entry(nodes_[static_cast<std::size_t>(r)].box, o, inv, d, t_min, best_t);
            // Push the far child first so the near one is popped next.
            if (tl <= tr) {
                if (!std::isinf(tr)) stack[sp++] = {r, tr};
                if (!std::isinf(tl)) stack[sp++] = {l, tl};
            } else {
                if (!std::isinf(tl)) stack[sp++] = {l, tl};
                if (!std::isinf(tr)) stack[sp++] = {r, tr};
            }
        }
        if (best < 0) return std::nullopt;
        return make_hit(best, best_t, o, d);
    }

    /// Reference implementation over every triangle.
    std::optional<Hit> intersect_brute_force(const Vec3& o, const Vec3& d, double t_min = 0.0,
                                             double t_max = std::numeric_limits<double>::infinity()) const
    {
        double best_t = t_max;
        int best = -1;
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            const double t = detail::intersect_triangle(tris_[i], o, d);
            if (t > t_min && t <= t_max && (best < 0 || t < best_t)) {
                best_t = t;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) return std::nullopt;
        return make_hit(best, best_t, o, d);
    }

    /// All hits along the ray in (t_min, t_max], sorted by distance. Used for parity checks.
    std::vector<Hit> all_hits(const Vec3& o, const Vec3& d, double t_min = 0.0,
                              double t_max = std::numeric_limits<double>::infinity()) const
    {
        std::vector<Hit> out;
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            const double t = detail::intersect_triangle(tris_[i], o, d);
            if (t > t_min && t <= t_max) out.push_back(make_hit(static_cast<int>(i), t, o, d));
        }
        std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.triangle < b.triangle);
        });
        return out;
    }

private:
    struct Node {
        Aabb box;
        int first{0}; ///< leaf: offset into order_; inner: index of the left child (right = first + 1)
        int count{0}; ///< > 0 for leaves
    };

    static constexpr int kLeafSize = 4;
    static constexpr double kBoxPad = 1e-7; // km

    Hit make_hit(int ti, double t, const Vec3& o, const Vec3& d) const
    {
        const Triangle& tri = tris_[static_cast<std::size_t>(ti)];
        Hit h;
        h.distance = t;
        h.triangle = ti;
        h.face_id = tri.face_id;
        h.material_id = tri.material_id;
        h.point = o + d * t;
        h.normal = tri.normal();
        if (dot(h.normal, d) > 0.0) h.normal = -h.normal;
        return h;
    }

    void build_bvh()
    {
        nodes_.clear();
        if (tris_.empty()) return;
        order_.resize(tris_.size());
        std::iota(order_.begin(), order_.end(), 0);
        centroids_.resize(tris_.size());
        boxes_.resize(tris_.size());
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            centroids_[i] = (tris_[i].v[0] + tris_[i].v[1] + tris_[i].v[2]) / 3.0;
            Aabb b;
            for (const auto& v : tris_[i].v) b.expand(v);
            b.lo -= Vec3{kBoxPad, kBoxPad, kBoxPad};
            b.hi += Vec3{kBoxPad, kBoxPad, kBoxPad};
            boxes_[i] = b;
        }
        nodes_.reserve(2 * tris_.size());
        nodes_.push_back({});
        build(0, 0, static_cast<int>(tris_.size()));
        centroids_.clear();
        centroids_.shrink_to_fit();
        boxes_.clear();
        boxes_.shrink_to_fit();
    }

    void build(int ni, int first, int count)
    {
        Aabb box, cbox;
        for (int k = first; k < first + count; ++k) {
            const auto i = static_cast<std::size_t>(order_[static_cast<std::size_t>(k)]);
            box.expand(boxes_[i]);
            cbox.expand(centroids_[i]);
        }
        nodes_[static_cast<std::size_t>(ni)].box = box;
        if (count <= kLeafSize) {
            nodes_[static_cast<std::size_t>(ni)].first = first;
            nodes_[static_cast<std::size_t>(ni)].count = count;
            return;
        }
        const int ax = cbox.longest_axis();
        const int mid = first + count / 2;
        auto b = order_.begin() + first;
        std::nth_element(b, order_.begin() + mid, b + count, [&](int x, int y) {
            const double cx = detail::axis(centroids_[static_cast<std::size_t>(x)], ax);
            const double cy = detail::axis(centroids_[static_cast<std::size_t>(y)], ax);
            return cx < cy || (cx == cy && x < y);
        });
        const int left = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_.push_back({});
        nodes_[static_cast<std::size_t>(ni)].first = left;
        nodes_[static_cast<std::size_t>(ni)].count = 0;
        build(left, first, mid - first);
        build(left + 1, mid, first + count - mid);
    }

    std::vector<Triangle> tris_;
    std::vector<Material> materials_;
    Aabb bounds_;
    std::vector<Node> nodes_;
    std::vector<int> order_;
    std::vector<Vec3> centroids_;
    std::vector<Aabb> boxes_;
};

// ---------------------------------------------------------------------------
// Procedural city

struct HeightLaw {
    enum class Kind { Uniform, Constant };
    Kind kind{Kind::Constant};
    double h_min_m{20.0};
    double h_max_m{20.0};
    std::uint64_t seed{1};

    static HeightLaw uniform(double h_min_m, double h_max_m, std::uint64_t seed)
    {
        return {Kind::Uniform, h_min_m, h_max_m, seed};
    }
    static HeightLaw constant(double h_m) { return {Kind::Constant, h_m, h_m, 0}; }
};

struct CityParams {
    int grid_nx{4};
    int grid_ny{4};
    double block_w_m{80.0};
    double street_w_m{20.0};
    HeightLaw heights{HeightLaw::uniform(20.0, 120.0, 1)};
    double ground_margin_m{50.0}; ///< ground plane overhang beyond the outer streets
    Material building_material{Material::concrete()};
    Material ground_material{Material::concrete()};
};

namespace detail {

// Two triangles over the planar quad a-b-c-d (counter-clockwise seen from the outside).
inline void push_quad(std::vector<Triangle>& out, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                      int material, int face)
{
    out.push_back({{a, b, c}, material, face});
    out.push_back({{a, c, d}, material, face});
}

inline void push_box(std::vector<Triangle>& out, const Vec3& lo, const Vec3& hi, int material, int first_face)
{
    const Vec3 p000{lo.x, lo.y, lo.z}, p100{hi.x, lo.y, lo.z}, p010{lo.x, hi.y, lo.z}, p110{hi.x, hi.y, lo.z};
    const Vec3 p001{lo.x, lo.y, hi.z}, p101{hi.x, lo.y, hi.z}, p011{lo.x, hi.y, hi.z}, p111{hi.x, hi.y, hi.z};
    push_quad(out, p000, p010, p110, p100, material, first_face + 0); // bottom, -z
    push_quad(out, p001, p101, p111, p011, material, first_face + 1); // top, +z
    push_quad(out, p000, p100, p101, p001, material, first_face + 2); // -y
    push_quad(out, p110, p010, p011, p111, material, first_face + 3); // +y
    push_quad(out, p100, p110, p111, p101, material, first_face + 4); // +x
    push_quad(out, p010, p000, p001, p011, material, first_face + 5); // -x
}

} // namespace detail

/// Flat square ground at z = 0 centred on the origin, face id 0.
inline Scene make_ground_scene(double half_extent_km, Material ground = Material::concrete())
{
    if (!(half_extent_km > 0.0)) throw Error(ErrorCode::InvalidDimensions, "ground half extent must be positive");
    std::vector<Triangle> tris;
    const double h = half_extent_km;
    detail::push_quad(tris, {-h, -h, 0.0}, {h, -h, 0.0}, {h, h, 0.0}, {-h, h, 0.0}, 0, 0);
    return Scene(std::move(tris), {std::move(ground)});
}

/// Axis-aligned box buildings on a street grid over a ground plane.
///
/// Block (i, j) spans [x0 + i·p + s/2, x0 + i·p + s/2 + w] with period p = w + s and
/// x0 = -nx·p/2 (same in y), so for even grid counts the origin is the centre of a
/// street intersection. Face ids: 0 is the ground, building b owns 1 + 6b ... 6 + 6b.
inline Scene generate_city(const CityParams& c)
{
    if (c.grid_nx <= 0 || c.grid_ny <= 0 || static_cast<long>(c.grid_nx) * c.grid_ny > 10000)
        throw Error(ErrorCode::InvalidDimensions, "grid counts must be positive with nx*ny <= 10^4");
    if (!(c.block_w_m > 0.0) || !(c.street_w_m >= 0.0) || !(c.ground_margin_m >= 0.0))
        throw Error(ErrorCode::InvalidDimensions, "block width must be positive, street width and margin >= 0");
    if (!(c.heights.h_min_m > 0.0) || !(c.heights.h_max_m >= c.heights.h_min_m))
        throw Error(ErrorCode::InvalidDimensions, "building heights need 0 < h_min <= h_max");

    const double km = 1e-3;
    const double w = c.block_w_m * km, s = c.street_w_m * km, p = w + s;
    const double x0 = -c.grid_nx * p / 2.0, y0 = -c.grid_ny * p / 2.0;

    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(c.grid_nx * c.grid_ny) * 12 + 2);
    const double gx = c.grid_nx * p / 2.0 + c.ground_margin_m * km;
    const double gy = c.grid_ny * p / 2.0 + c.ground_margin_m * km;
    detail::push_quad(tris, {-gx, -gy, 0.0}, {gx, -gy, 0.0}, {gx, gy, 0.0}, {-gx, gy, 0.0}, 1, 0);

    std::mt19937_64 rng(c.heights.seed);
    std::uniform_real_distribution<double> height(c.heights.h_min_m, c.heights.h_max_m);
    int building = 0;
    for (int j = 0; j < c.grid_ny; ++j) {
        for (int i = 0; i < c.grid_nx; ++i) {
            const double h = c.heights.kind == HeightLaw::Kind::Uniform ? height(rng) : c.heights.h_min_m;
            const Vec3 lo{x0 + i * p + s / 2.0, y0 + j * p + s / 2.0, 0.0};
            const Vec3 hi{lo.x + w, lo.y + w, h * km};
            detail::push_box(tris, lo, hi, 0, 1 + 6 * building);
            ++building;
        }
    }
    return Scene(std::move(tris), {c.building_material, c.ground_material});
}

// ---------------------------------------------------------------------------
// Plain-text triangle list.
//
//   # comment
//   material <name> <relative_permittivity> <conductivity_S_per_m>
//   x0 y0 z0 x1 y1 z1 x2 y2 z2 material_id [face_id]
//
// Coordinates are local km. Materials are numbered in declaration order; a file
// without material lines gets a single concrete material. Without a face id each
// triangle is its own face.

inline void write_scene(std::ostream& out, const Scene& scene)
{
    out << "# leochan scene: " << scene.triangles().size() << " triangles, local km\n";
    out << std::setprecision(17);
    for (const auto& m : scene.materials())
        out << "material " << m.name << ' ' << m.relative_permittivity << ' ' << m.conductivity << '\n';
    for (const auto& t : scene.triangles()) {
        for (const auto& v : t.v) out << v.x << ' ' << v.y << ' ' << v.z << ' ';
        out << t.material_id << ' ' << t.face_id << '\n';
    }
}

inline Scene read_scene(std::istream& in)
{
    std::vector<Material> materials;
    std::vector<Triangle> tris;
    std::string line;
    int line_no = 0;
    const auto bad = [&](const std::string& why) {
        throw Error(ErrorCode::ConfigError, "scene line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        if (line.compare(first, 8, "material") == 0) {
            std::string kw;
            Material m;
            if (!(ss >> kw >> m.name >> m.relative_permittivity >> m.conductivity)) bad("malformed material line");
            materials.push_back(m);
            continue;
        }
        std::vector<double> vals;
        double x;
        while (ss >> x) vals.push_back(x);
        if (!ss.eof()) bad("non-numeric token");
        if (vals.size() != 10 && vals.size() != 11) bad("expected 10 or 11 numbers");
        Triangle t;
        for (int k = 0; k < 3; ++k) t.v[static_cast<std::size_t>(k)] = {vals[3 * k], vals[3 * k + 1], vals[3 * k + 2]};
        t.material_id = static_cast<int>(vals[9]);
        t.face_id = vals.size() == 11 ? static_cast<int>(vals[10]) : static_cast<int>(tris.size());
        tris.push_back(t);
    }
    if (materials.empty()) materials.push_back(Material::concrete());
    return Scene(std::move(tris), std::move(materials));
}

inline Scene read_scene_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open scene file " + path);
    return read_scene(in);
}

inline void write_scene_file(const std::string& path, const Scene& scene)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write scene file " + path);
    write_scene(out, scene);
}

} // namespace leochan
