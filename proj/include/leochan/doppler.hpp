#pragma once

// Elevation, pass windows and Doppler shift.
//
// Geometry is spherical around the Earth's centre: the site sits at radius
// rE = |site|, the satellite at r = |sat|, and gamma is the central angle
// between them. Pass scanning works in ECEF so Earth rotation is part of
// the sampled geometry.

#include "leochan/core/error.hpp"
#include "leochan/frames.hpp"
#include "leochan/link.hpp"
#include "leochan/sbr.hpp"
#include "leochan/sgp4.hpp"
#include "leochan/tle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

namespace leochan {

/// Central angle between two geocentric vectors, in [0, pi].
inline double central_angle(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

/// Elevation of `sat_ecef` above the geocentric horizon of `site_ecef`.
inline double elevation(const Vec3& site_ecef, const Vec3& sat_ecef)
{
    const Vec3 slant = sat_ecef - site_ecef;
    const Vec3 zenith = normalize(site_ecef);
    return std::numbers::pi / 2.0 - angle_between(zenith, slant);
}

namespace detail {

/// Angle opposite side `c` in a triangle with sides a, b, c (Kahan's stable form of the law of cosines).
inline double triangle_angle(double a, double b, double c)
{
    if (a < b) std::swap(a, b);
    double mu;
    if (b >= c) mu = c - (a - b);
    else mu = b - (a - c);
    const double num = ((a - b) + c) * mu;
    const double den = (a + (b + c)) * ((a - c) + b);
    if (num <= 0.0) return 0.0;
    if (den <= 0.0) return std::numbers::pi;
    return 2.0 * std::atan(std::sqrt(num / den));
}

} // namespace detail

/// Elevation from the O-R-S triangle: theta = pi/2 - gamma - angle(RSO).
inline double elevation_triangle(const Vec3& site_ecef, const Vec3& sat_ecef)
{
    const double re = norm(site_ecef), r = norm(sat_ecef), d = norm(sat_ecef - site_ecef);
    const double gamma = detail::triangle_angle(re, r, d);
    const double at_sat = detail::triangle_angle(r, d, re);
    return std::numbers::pi / 2.0 - gamma - at_sat;
}

/// Central angle site <-> sub-satellite point when the satellite is seen at `elevation_rad`.
inline double gamma_at_culmination(double elevation_rad, double earth_radius_km, double orbit_radius_km)
{
    if (!(orbit_radius_km > earth_radius_km) || !(earth_radius_km > 0.0))
        throw Error(ErrorCode::DomainError, "orbit radius must exceed the Earth radius");
    if (elevation_rad < 0.0 || elevation_rad > std::numbers::pi / 2.0)
        throw Error(ErrorCode::DomainError, "elevation must lie in [0, 90] deg");
    return std::acos(earth_radius_km / orbit_radius_km * std::cos(elevation_rad)) - elevation_rad;
}

/// How the angular rate of the sub-satellite point is taken.
enum class TrackRate {
    Constant,      ///< mean motion minus Earth rate times cos(inclination)
    Instantaneous, ///< |r x v| / |r|^2 from the ECEF state
};

struct PassGeometry {
    double earth_radius_km{0.0};
    double orbit_radius_km{0.0};
    double gamma_t0{0.0};      ///< rad
    double omega_f{0.0};       ///< rad/s, relative track rate
    double omega_s{0.0};       ///< rad/s, inertial mean motion
    double omega_e{kEarthRotationRate};
    double inclination{0.0};   ///< rad
    double fc_hz{2e9};
    double c_km_s{kSpeedOfLightKmPerS};
};

/// Closed-form Doppler for a signed along-track angle from culmination (negative before t0).
inline double doppler_closed_form(double delta_psi, const PassGeometry& g, double omega_f)
{
    const double re = g.earth_radius_km, r = g.orbit_radius_km;
    const double cg = std::cos(g.gamma_t0);
    const double range = std::sqrt(re * re + r * r - 2.0 * re * r * std::cos(delta_psi) * cg);
    return -g.fc_hz * re * r * std::sin(delta_psi) * cg * omega_f / (g.c_km_s * range);
}

inline double doppler_closed_form(double delta_psi, const PassGeometry& g)
{
    return doppler_closed_form(delta_psi, g, g.omega_f);
}

/// Projection of the satellite velocity onto the departure direction of one path.
inline double per_path_doppler(const PathRecord& path, const Vec3& sat_velocity_local, double fc_hz)
{
    return fc_hz / kSpeedOfLightKmPerS * dot(sat_velocity_local, path.aod);
}

/// Satellite state in ECEF at `t`.
inline StateVector ecef_state(const Sgp4& sgp, const Instant& t)
{
    return teme_to_ecef(sgp.propagate(t), earth_orientation(t));
}

struct PassWindow {
    Instant t_start, t_end, t0;
    double theta_max{0.0};       ///< rad
    double theta_min{0.0};       ///< rad
    double gamma_t0{0.0};        ///< rad
    double t_du_min{0.0};        ///< scanned duration, minutes
    double t_du_analytic_min{0.0}; ///< closed-form estimate, minutes
    PassGeometry geometry;
};

struct PassSearch {
    double theta_min_rad{0.0};
    double step_s{10.0};
    double horizon_h{48.0};
    double min_peak_rad{-1.0}; ///< skip passes culminating below this; < 0 means theta_min
    double fc_hz{2e9};
};

namespace detail {

inline double elevation_at(const Sgp4& sgp, const Vec3& site_ecef, const Instant& t)
{
    return elevation(site_ecef, ecef_state(sgp, t).position);
}

/// Golden-section maximum of elevation on [a, b]; returns the instant.
inline Instant golden_max(const Sgp4& sgp, const Vec3& site, Instant a, Instant b)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = b.seconds_since(a);
    const auto f = [&](double s) { return elevation_at(sgp, site, a.plus_seconds(s)); };
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return a.plus_seconds((lo + hi) / 2.0);
}

/// Threshold crossing between `above` (elevation >= theta) and `below`, to 0.1 s.
inline Instant bisect_crossing(const Sgp4& sgp, const Vec3& site, double theta, Instant above, Instant below)
{
    while (std::fabs(below.seconds_since(above)) > 0.1) {
        const Instant mid = Instant::from_days_since_j2000((above.days_since_j2000() + below.days_since_j2000()) / 2.0);
        if (elevation_at(sgp, site, mid) >= theta) above = mid;
        else below = mid;
    }
    return above;
}

} // namespace detail

/// Relative angular rate of the sub-satellite track, rad/s.
inline double track_rate_constant(const Sgp4& sgp)
{
    return sgp.brouwer_mean_motion() / 60.0 - kEarthRotationRate * std::cos(sgp.inclination_rad());
}

inline double track_rate_instantaneous(const StateVector& ecef)
{
    require_frame(ecef, Frame::ECEF, "track_rate_instantaneous");
    return norm(cross(ecef.position, ecef.velocity)) / dot(ecef.position, ecef.position);
}

/// Closed-form duration estimate above `theta_min` for a pass culminating at `gamma_t0`, minutes.
inline double pass_duration_analytic_min(double theta_min_rad, double gamma_t0, double earth_radius_km,
                                         double orbit_radius_km, double omega_f)
{
    const double gamma_min = gamma_at_culmination(theta_min_rad, earth_radius_km, orbit_radius_km);
    const double ratio = std::clamp(std::cos(gamma_min) / std::cos(gamma_t0), -1.0, 1.0);
    return 2.0 / omega_f * std::acos(ratio) / 60.0;
}

/// First complete pass after `start` culminating at or above the requested peak.
inline PassWindow find_pass(const Sgp4& sgp, const Geodetic& site, const Instant& start, const PassSearch& opt = {})
{
    if (!(opt.step_s > 0.0) || !(opt.horizon_h > 0.0))
        throw Error(ErrorCode::NonPositiveInput, "pass search needs a positive step and horizon");
    const Vec3 site_ecef = geodetic_to_ecef(site);
    const double theta = opt.theta_min_rad;
    const double peak_floor = opt.min_peak_rad < 0.0 ? theta : std::max(theta, opt.min_peak_rad);
    const auto at = [&](long k) { return start.plus_seconds(static_cast<double>(k) * opt.step_s); };
    const auto el = [&](const Instant& t) { return detail::elevation_at(sgp, site_ecef, t); };
    const long n = static_cast<long>(std::floor(opt.horizon_h * 3600.0 / opt.step_s));

    double prev2 = el(at(0)), prev1 = el(at(1));
    for (long k = 2; k <= n; ++k) {
        const double cur = el(at(k));
        const bool local_max = prev1 > prev2 && prev1 >= cur;
        const long km = k - 1;
        prev2 = prev1;
        prev1 = cur;
        if (!local_max) continue;

        const Instant t0 = detail::golden_max(sgp, site_ecef, at(km - 1), at(km + 1));
        const double theta_max = el(t0);
        if (theta_max < peak_floor) continue;

        // Walk outward to samples below the threshold; a pass already in progress at `start` is skipped.
        long lo = km;
        while (lo >= 0 && el(at(lo)) >= theta) --lo;
        if (lo < 0) continue;
        long hi = km;
        while (hi <= n && el(at(hi)) >= theta) ++hi;
        if (hi > n) break;

        PassWindow w;
        w.t0 = t0;
        w.theta_max = theta_max;
        w.theta_min = theta;
        if (theta_max <= theta) {
            w.t_start = w.t_end = t0;
        } else {
            const Instant rise_above = t0.seconds_since(at(lo + 1)) > 0.0 ? at(lo + 1) : t0;
            const Instant set_above = at(hi - 1).seconds_since(t0) > 0.0 ? at(hi - 1) : t0;
            w.t_start = detail::bisect_crossing(sgp, site_ecef, theta, rise_above, at(lo));
            w.t_end = detail::bisect_crossing(sgp, site_ecef, theta, set_above, at(hi));
        }
        w.t_du_min = w.t_end.minutes_since(w.t_start);

        const StateVector sat0 = ecef_state(sgp, t0);
        PassGeometry& g = w.geometry;
        g.earth_radius_km = norm(site_ecef);
        g.orbit_radius_km = norm(sat0.position);
        g.omega_s = sgp.brouwer_mean_motion() / 60.0;
        g.inclination = sgp.inclination_rad();
        g.omega_f = track_rate_constant(sgp);
        g.fc_hz = opt.fc_hz;
        g.gamma_t0 = gamma_at_culmination(std::max(theta_max, 0.0), g.earth_radius_km, g.orbit_radius_km);
        w.gamma_t0 = g.gamma_t0;
        w.t_du_analytic_min =
            theta_max > theta ? pass_duration_analytic_min(theta, g.gamma_t0, g.earth_radius_km, g.orbit_radius_km, g.omega_f)
                              : 0.0;
        return w;
    }
    throw Error(ErrorCode::NoPassFound, "no pass above the elevation threshold within the search horizon");
}

inline PassWindow find_pass(const Tle& tle, const Geodetic& site, const PassSearch& opt = {})
{
    return find_pass(Sgp4(tle), site, tle.epoch(), opt);
}

/// Signed central angle between the sub-satellite points at `t` and at culmination.
inline double track_angle_from_culmination(const Sgp4& sgp, const PassWindow& w, const Instant& t)
{
    const Vec3 n = ecef_state(sgp, t).position;
    const Vec3 m = ecef_state(sgp, w.t0).position;
    const double a = central_angle(n, m);
    return t.seconds_since(w.t0) < 0.0 ? -a : a;
}

/// Closed-form Doppler at `t` using the propagated track.
inline double doppler_at(const Sgp4& sgp, const PassWindow& w, const Instant& t, TrackRate rate = TrackRate::Constant)
{
    const double dpsi = track_angle_from_culmination(sgp, w, t);
    const double omega = rate == TrackRate::Constant ? w.geometry.omega_f : track_rate_instantaneous(ecef_state(sgp, t));
    return doppler_closed_form(dpsi, w.geometry, omega);
}

} // namespace leochan
