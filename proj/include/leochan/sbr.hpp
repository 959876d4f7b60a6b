#pragma once

// Shooting and bouncing rays with a planar launch wavefront.
//
// The satellite is far enough away that its wavefront is treated as planar
// over the scene. A grid of parallel rays starts on a plane perpendicular to
// the satellite direction just in front of the scene; each ray bounces
// specularly and is captured whenever a segment passes within rx_radius of
// the receiver. The total path length is split as
//   D = d_atmosphere + d_near_ground
// where d_atmosphere (satellite to plane) is common to all rays.

#include "leochan/core/error.hpp"
#include "leochan/core/state.hpp"
#include "leochan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>
#include <vector>

namespace leochan {

inline constexpr double kSelfOcclusionOffsetKm = 1e-7;
inline constexpr double kLaunchPlaneMarginKm = 0.05;

struct LaunchPlane {
    Vec3 direction;          ///< unit, satellite -> scene
    Vec3 satellite;          ///< satellite position, local km
    Vec3 center;             ///< receiver projected onto the plane
    Vec3 u, v;               ///< in-plane unit axes
    int nu{0}, nv{0};        ///< launch grid size; the middle point is `center`
    double spacing_km{0.0};
    double d_atmosphere{0.0}; ///< satellite to plane along `direction`, km
    double plane_altitude{0.0}; ///< height of `center` above the scene top, km

    std::size_t ray_count() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
    double extent_u() const { return (nu - 1) * spacing_km; }
    double extent_v() const { return (nv - 1) * spacing_km; }

    Vec3 launch_point(std::size_t index) const
    {
        const int i = static_cast<int>(index % static_cast<std::size_t>(nu));
        const int j = static_cast<int>(index / static_cast<std::size_t>(nu));
        return center + u * ((i - (nu - 1) / 2) * spacing_km) + v * ((j - (nv - 1) / 2) * spacing_km);
    }
};

/// Plane through the receiver's projection, in front of every scene corner by
/// `margin_km`, sized to the scene's projected footprint plus one spacing.
inline LaunchPlane build_launch_plane(const StateVector& sat_local, const Scene& scene, const Vec3& receiver,
                                      double spacing_m, double margin_km = kLaunchPlaneMarginKm)
{
    require_frame(sat_local, Frame::LOCAL, "build_launch_plane");
    if (!(spacing_m > 0.0)) throw Error(ErrorCode::NonPositiveInput, "launch spacing must be positive");
    const Vec3 to_rx = receiver - sat_local.position;
    if (!(to_rx.z < 0.0))
        throw Error(ErrorCode::SatelliteBelowHorizon, "satellite is not above the receiver's horizon");

    LaunchPlane p;
    p.satellite = sat_local.position;
    p.direction = normalize(to_rx);
    p.spacing_km = spacing_m * 1e-3;

    // Orthonormal in-plane axes; seed with the axis least aligned with the direction.
    const Vec3& d = p.direction;
    const Vec3 seed = std::fabs(d.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    p.u = normalize(cross(seed, d));
    p.v = cross(d, p.u);

    std::vector<Vec3> pts;
    if (!scene.bounds().empty())
        for (const auto& c : scene.bounds().corners()) pts.push_back(c);
    pts.push_back(receiver);

    double front = 0.0; // most negative along-ray coordinate relative to the receiver
    double half_u = 0.0, half_v = 0.0;
    for (const auto& c : pts) {
        const Vec3 r = c - receiver;
        front = std::min(front, dot(r, d));
        half_u = std::max(half_u, std::fabs(dot(r, p.u)));
        half_v = std::max(half_v, std::fabs(dot(r, p.v)));
    }
    const double along = front - margin_km;
    p.center = receiver + d * along;
    p.d_atmosphere = dot(p.center - sat_local.position, d);
    if (!(p.d_atmosphere > 0.0))
        throw Error(ErrorCode::DomainError, "satellite lies inside the launch region");
    const double top = scene.bounds().empty() ? receiver.z : std::max(scene.bounds().hi.z, receiver.z);
    p.plane_altitude = p.center.z - top;

    half_u += p.spacing_km;
    half_v += p.spacing_km;
    p.nu = 2 * static_cast<int>(std::ceil(half_u / p.spacing_km)) + 1;
    p.nv = 2 * static_cast<int>(std::ceil(half_v / p.spacing_km)) + 1;
    return p;
}

struct Interaction {
    Vec3 point;
    int face_id{-1};
    int triangle{-1};
    int material_id{-1};
    Vec3 normal;                ///< unit, facing the incoming ray
    double incidence_angle{0.0}; ///< from the surface normal, rad
};

struct PathRecord {
    std::size_t launch_index{0};
    std::vector<Interaction> interactions;
    Vec3 launch_point;
    Vec3 capture_point;          ///< closest approach to the receiver on the final segment
    double capture_distance{0.0}; ///< km
    double d_near_ground{0.0};   ///< plane -> interactions -> capture point, km
    double d_atmosphere{0.0};
    Vec3 aod; ///< unit, satellite -> first interaction (receiver for LOS)
    Vec3 aoa; ///< unit, direction of arrival at the receiver
    int bounce_count{0};

    double total_length() const { return d_atmosphere + d_near_ground; }
    std::vector<int> face_sequence() const
    {
        std::vector<int> f;
        for (const auto& i : interactions) f.push_back(i.face_id);
        return f;
    }
};

struct TraceOptions {
    double rx_radius_m{0.0}; ///< 0 picks 1.5 x spacing
    int max_bounces{2};
    unsigned threads{0};     ///< 0 picks the hardware concurrency
};

namespace detail {

inline void trace_ray(const LaunchPlane& plane, const Scene& scene, const Vec3& rx, double rx_radius_km,
                      int max_bounces, std::size_t index, std::vector<PathRecord>& out)
{
    Vec3 o = plane.launch_point(index);
    Vec3 d = plane.direction;
    double travelled = 0.0;
    std::vector<Interaction> chain;
    for (int bounce = 0;; ++bounce) {
        const double t_min = bounce == 0 ? 0.0 : kSelfOcclusionOffsetKm;
        const auto hit = scene.intersect(o, d, t_min);
        const double seg_end = hit ? hit->distance : std::numeric_limits<double>::infinity();

        const double tc = dot(rx - o, d);
        if (tc > t_min && tc <= seg_end) {
            const Vec3 c = o + d * tc;
            const double miss = norm(rx - c);
            if (miss <= rx_radius_km) {
                PathRecord p;
                p.launch_index = index;
                p.interactions = chain;
                p.launch_point = plane.launch_point(index);
                p.capture_point = c;
                p.capture_distance = miss;
                p.d_near_ground = travelled + tc;
                p.d_atmosphere = plane.d_atmosphere;
                const Vec3 first = chain.empty() ? rx : chain.front().point;
                p.aod = normalize(first - plane.satellite);
                p.aoa = d;
                p.bounce_count = static_cast<int>(chain.size());
                out.push_back(std::move(p));
            }
        }
        if (!hit || bounce == max_bounces) break;

        Interaction in;
        in.point = hit->point;
        in.face_id = hit->face_id;
        in.triangle = hit->triangle;
        in.material_id = hit->material_id;
        in.normal = hit->normal;
        in.incidence_angle = angle_between(-d, hit->normal);
        chain.push_back(in);
        travelled += hit->distance;
        d = normalize(d - hit->normal * (2.0 * dot(d, hit->normal)));
        o = hit->point;
    }
}

} // namespace detail

/// Traces every launch ray and returns one path per distinct interaction sequence,
/// sorted by (bounce_count, d_near_ground). Receivers do not stop rays.
inline std::vector<PathRecord> trace(const LaunchPlane& plane, const Scene& scene, const Vec3& receiver,
                                     const TraceOptions& opt = {})
{
    if (opt.max_bounces < 0) throw Error(ErrorCode::NonPositiveInput, "max_bounces must be >= 0");
    const double radius_km = opt.rx_radius_m > 0.0 ? opt.rx_radius_m * 1e-3 : 1.5 * plane.spacing_km;
    if (!(radius_km > 0.0)) throw Error(ErrorCode::NonPositiveInput, "receiver radius must be positive");

    const std::size_t n = plane.ray_count();
    unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n / 4096)));
    std::vector<std::vector<PathRecord>> parts(workers);
    const auto run = [&](unsigned w) {
        const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
        for (std::size_t i = lo; i < hi; ++i)
            detail::trace_ray(plane, scene, receiver, radius_km, opt.max_bounces, i, parts[w]);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }

    // Chunks are contiguous index ranges, so concatenation is already in launch order.
    std::map<std::vector<int>, PathRecord> best;
    for (auto& part : parts) {
        for (auto& p : part) {
            auto key = p.face_sequence();
            auto it = best.find(key);
            if (it == best.end())
                best.emplace(std::move(key), std::move(p));
            else if (p.capture_distance < it->second.capture_distance)
                it->second = std::move(p);
        }
    }
    std::vector<PathRecord> out;
    out.reserve(best.size());
    for (auto& [k, p] : best) out.push_back(std::move(p));
    std::sort(out.begin(), out.end(), [](const PathRecord& a, const PathRecord& b) {
        if (a.bounce_count != b.bounce_count) return a.bounce_count < b.bounce_count;
        if (a.d_near_ground != b.d_near_ground) return a.d_near_ground < b.d_near_ground;
        return a.launch_index < b.launch_index;
    });
    return out;
}

inline std::vector<PathRecord> trace(const LaunchPlane& plane, const Scene& scene, const Vec3& receiver,
                                     double rx_radius_m, int max_bounces, unsigned threads = 0)
{
    return trace(plane, scene, receiver, TraceOptions{rx_radius_m, max_bounces, threads});
}

} // namespace leochan
