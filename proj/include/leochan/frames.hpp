#pragma once

// Reference-frame chain TEME -> ECI (J2000) -> ECEF -> LOCAL.
//
// Conventions:
//  * Mat3 rot_x/rot_y/rot_z are frame (passive) rotations.
//  * r_MOD = P r_J2000, r_TOD = N r_MOD, r_TOD = R3(-eqe) r_TEME,
//    r_ECEF = R3(GAST) r_TOD = R3(GMST) r_TEME.
//  * Polar motion is ignored and UT1 is taken equal to UTC.
//  * The local scene frame has its origin at the city anchor and +z along the
//    geocentric direction of the anchor (South-East-Up for the default gamma/beta).

#include "leochan/core/error.hpp"
#include "leochan/core/state.hpp"
#include "leochan/core/time.hpp"
#include "leochan/core/vec3.hpp"
#include "leochan/nutation1980_table.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace leochan {

inline constexpr double kEarthRotationRate = 7.2921150e-5; // rad/s
inline constexpr double kArcsecToRad = std::numbers::pi / (180.0 * 3600.0);
inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

enum class NutationSeries {
    Truncated4, ///< four largest-amplitude IAU 1980 terms
    Full106,
};

struct EarthOrientation {
    double gmst{0.0};           ///< rad
    double zeta{0.0};           ///< precession angles, rad
    double z{0.0};
    double theta{0.0};
    double dpsi{0.0};           ///< nutation in longitude, rad
    double deps{0.0};           ///< nutation in obliquity, rad
    double mean_obliquity{0.0}; ///< rad
    double earth_rotation_rate{kEarthRotationRate};

    double equation_of_equinoxes() const { return dpsi * std::cos(mean_obliquity); }
    double gast() const { return gmst + equation_of_equinoxes(); }

    /// All angles zero: every rotation in the chain collapses to identity.
    static EarthOrientation identity() { return {}; }
};

/// Greenwich mean sidereal time (IAU 1982), UT1 = UTC.
inline double gmst_1982(const Instant& t)
{
    const double days = t.days_since_j2000();
    const double tu = days / 36525.0;
    // The 86400·days part of the linear term is taken modulo one day first to keep precision.
    double sec = 67310.54841 + 86400.0 * std::fmod(days, 1.0) +
                 ((8640184.812866 + (0.093104 - 6.2e-6 * tu) * tu) * tu);
    sec = std::fmod(sec, kSecondsPerDay);
    if (sec < 0.0) sec += kSecondsPerDay;
    return sec / kSecondsPerDay * 2.0 * std::numbers::pi;
}

/// Mean obliquity of the ecliptic (IAU 1980), rad; `t_tt` in Julian centuries TT.
inline double mean_obliquity_1980(double t_tt)
{
    return (84381.448 + (-46.8150 + (-0.00059 + 0.001813 * t_tt) * t_tt) * t_tt) * kArcsecToRad;
}

struct PrecessionAngles {
    double zeta, z, theta;
};

/// Equatorial precession angles of the IAU 2000/2006 (P03) precession, rad.
inline PrecessionAngles precession_angles(double t_tt)
{
    const double t = t_tt;
    const double zeta =
        2.650545 + t * (2306.083227 + t * (0.2988499 + t * (0.01801828 + t * (-0.000005971 + t * -0.0000003173))));
    const double z =
        -2.650545 + t * (2306.077181 + t * (1.0927348 + t * (0.01826837 + t * (-0.000028596 + t * -0.0000002904))));
    const double theta = t * (2004.191903 + t * (-0.4294934 + t * (-0.04182264 + t * (-0.000007089 + t * -0.0000001274))));
    return {zeta * kArcsecToRad, z * kArcsecToRad, theta * kArcsecToRad};
}

namespace detail {

inline double wrap_pm_pi(double a)
{
    double w = std::fmod(a, 2.0 * std::numbers::pi);
    if (std::fabs(w) >= std::numbers::pi) w -= std::copysign(2.0 * std::numbers::pi, a);
    return w;
}

// Indices of the series ordered by decreasing longitude amplitude.
inline std::array<int, 106> nutation_terms_by_amplitude()
{
    std::array<int, 106> idx{};
    for (int i = 0; i < 106; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::stable_sort(idx.begin(), idx.end(), [](int a, int b) {
        return std::fabs(kNutation1980[static_cast<std::size_t>(a)].sp) >
               std::fabs(kNutation1980[static_cast<std::size_t>(b)].sp);
    });
    return idx;
}

} // namespace detail

struct NutationAngles {
    double dpsi, deps;
};

/// IAU 1980 nutation, rad. `t_tt` in Julian centuries TT.
inline NutationAngles nutation_1980(double t_tt, NutationSeries series = NutationSeries::Truncated4)
{
    using detail::wrap_pm_pi;
    constexpr double twopi = 2.0 * std::numbers::pi;
    const double t = t_tt;
    const double el = wrap_pm_pi((485866.733 + (715922.633 + (31.310 + 0.064 * t) * t) * t) * kArcsecToRad +
                                 std::fmod(1325.0 * t, 1.0) * twopi);
    const double elp = wrap_pm_pi((1287099.804 + (1292581.224 + (-0.577 - 0.012 * t) * t) * t) * kArcsecToRad +
                                  std::fmod(99.0 * t, 1.0) * twopi);
    const double f = wrap_pm_pi((335778.877 + (295263.137 + (-13.257 + 0.011 * t) * t) * t) * kArcsecToRad +
                                std::fmod(1342.0 * t, 1.0) * twopi);
    const double d = wrap_pm_pi((1072261.307 + (1105601.328 + (-6.891 + 0.019 * t) * t) * t) * kArcsecToRad +
                                std::fmod(1236.0 * t, 1.0) * twopi);
    const double om = wrap_pm_pi((450160.280 + (-482890.539 + (7.455 + 0.008 * t) * t) * t) * kArcsecToRad +
                                 std::fmod(-5.0 * t, 1.0) * twopi);

    static const auto order = detail::nutation_terms_by_amplitude();
    const int n = series == NutationSeries::Full106 ? 106 : 4;
    double dp = 0.0;
    double de = 0.0;
    // Smallest terms first.
    for (int k = n - 1; k >= 0; --k) {
        const auto& x = detail::kNutation1980[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        const double arg = x.nl * el + x.nlp * elp + x.nf * f + x.nd * d + x.nom * om;
        dp += (x.sp + x.spt * t) * std::sin(arg);
        de += (x.ce + x.cet * t) * std::cos(arg);
    }
    const double u2r = kArcsecToRad / 1e4;
    return {dp * u2r, de * u2r};
}

inline EarthOrientation earth_orientation(const Instant& t, NutationSeries series = NutationSeries::Truncated4)
{
    const double ttt = t.tt_centuries();
    const auto p = precession_angles(ttt);
    const auto n = nutation_1980(ttt, series);
    EarthOrientation eo;
    eo.gmst = gmst_1982(t);
    eo.zeta = p.zeta;
    eo.z = p.z;
    eo.theta = p.theta;
    eo.dpsi = n.dpsi;
    eo.deps = n.deps;
    eo.mean_obliquity = mean_obliquity_1980(ttt);
    return eo;
}

/// r_MOD = P r_J2000.
inline Mat3 precession_matrix(const EarthOrientation& eo)
{
    return rot_z(-eo.z) * rot_y(eo.theta) * rot_z(-eo.zeta);
}

/// r_TOD = N r_MOD.
inline Mat3 nutation_matrix(const EarthOrientation& eo)
{
    return rot_x(-(eo.mean_obliquity + eo.deps)) * rot_z(-eo.dpsi) * rot_x(eo.mean_obliquity);
}

/// r_ECI = M r_TEME.
inline Mat3 teme_to_eci_matrix(const EarthOrientation& eo)
{
    return precession_matrix(eo).transposed() * nutation_matrix(eo).transposed() *
           rot_z(-eo.equation_of_equinoxes());
}

/// r_ECEF = M r_ECI.
inline Mat3 eci_to_ecef_matrix(const EarthOrientation& eo)
{
    return rot_z(eo.gast()) * nutation_matrix(eo) * precession_matrix(eo);
}

inline StateVector teme_to_eci(const StateVector& s, const EarthOrientation& eo)
{
    require_frame(s, Frame::TEME, "teme_to_eci");
    const Mat3 m = teme_to_eci_matrix(eo);
    return {Frame::ECI, s.t, m * s.position, m * s.velocity};
}

inline StateVector eci_to_teme(const StateVector& s, const EarthOrientation& eo)
{
    require_frame(s, Frame::ECI, "eci_to_teme");
    const Mat3 m = teme_to_eci_matrix(eo).transposed();
    return {Frame::TEME, s.t, m * s.position, m * s.velocity};
}

inline StateVector eci_to_ecef(const StateVector& s, const EarthOrientation& eo)
{
    require_frame(s, Frame::ECI, "eci_to_ecef");
    const Mat3 m = eci_to_ecef_matrix(eo);
    const Vec3 r = m * s.position;
    const Vec3 w{0.0, 0.0, eo.earth_rotation_rate};
    return {Frame::ECEF, s.t, r, m * s.velocity - cross(w, r)};
}

inline StateVector ecef_to_eci(const StateVector& s, const EarthOrientation& eo)
{
    require_frame(s, Frame::ECEF, "ecef_to_eci");
    const Mat3 mt = eci_to_ecef_matrix(eo).transposed();
    const Vec3 w{0.0, 0.0, eo.earth_rotation_rate};
    return {Frame::ECI, s.t, mt * s.position, mt * (s.velocity + cross(w, s.position))};
}

/// Direct TEME -> ECEF through GMST; equal to the composed TEME -> ECI -> ECEF chain.
inline StateVector teme_to_ecef(const StateVector& s, const EarthOrientation& eo)
{
    require_frame(s, Frame::TEME, "teme_to_ecef");
    const Mat3 m = rot_z(eo.gmst);
    const Vec3 r = m * s.position;
    const Vec3 w{0.0, 0.0, eo.earth_rotation_rate};
    return {Frame::ECEF, s.t, r, m * s.velocity - cross(w, r)};
}

// ---------------------------------------------------------------------------
// Geodetic coordinates on the WGS-84 ellipsoid.

inline constexpr double kWgs84A = 6378.137;                 // km
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);

struct Geodetic {
    double lat_rad{0.0};
    double lon_rad{0.0};
    double alt_km{0.0};

    static Geodetic from_degrees(double lat_deg, double lon_deg, double alt_m)
    {
        return {lat_deg * kDegToRad, lon_deg * kDegToRad, alt_m / 1000.0};
    }
};

inline Vec3 geodetic_to_ecef(const Geodetic& g)
{
    const double sl = std::sin(g.lat_rad), cl = std::cos(g.lat_rad);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sl * sl);
    return {(n + g.alt_km) * cl * std::cos(g.lon_rad), (n + g.alt_km) * cl * std::sin(g.lon_rad),
            (n * (1.0 - kWgs84E2) + g.alt_km) * sl};
}

/// Bowring's parametric-latitude iteration, converged to 1e-9 km in height.
inline Geodetic ecef_to_geodetic(const Vec3& r)
{
    const double p = std::hypot(r.x, r.y);
    const double ep2 = kWgs84E2 / (1.0 - kWgs84E2);
    Geodetic g;
    g.lon_rad = std::atan2(r.y, r.x);
    if (p < 1e-12) {
        g.lat_rad = std::copysign(std::numbers::pi / 2.0, r.z);
        g.alt_km = std::fabs(r.z) - kWgs84B;
        return g;
    }
    double beta = std::atan2(r.z, (1.0 - kWgs84F) * p);
    double lat = 0.0;
    double h_prev = 1e300;
    for (int i = 0; i < 20; ++i) {
        const double sb = std::sin(beta), cb = std::cos(beta);
        lat = std::atan2(r.z + ep2 * kWgs84B * sb * sb * sb, p - kWgs84E2 * kWgs84A * cb * cb * cb);
        beta = std::atan2((1.0 - kWgs84F) * std::sin(lat), std::cos(lat));
        const double sl = std::sin(lat);
        const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * sl * sl);
        const double h = std::fabs(lat) < std::numbers::pi / 4.0 ? p / std::cos(lat) - n
                                                                   : r.z / sl - n * (1.0 - kWgs84E2);
        if (std::fabs(h - h_prev) < 1e-9) {
            g.alt_km = h;
            break;
        }
        h_prev = h;
        g.alt_km = h;
    }
    g.lat_rad = lat;
    return g;
}

// ---------------------------------------------------------------------------
// Local scene frame: two rotations and a translation,
//   local = Ry(beta) · Rz(gamma) · r_ecef + k
// where Rz, Ry are the active rotation matrices
//   Rz(g) = [cos g, -sin g, 0; sin g, cos g, 0; 0, 0, 1]
//   Ry(b) = [cos b, 0, sin b; 0, 1, 0; -sin b, 0, cos b].
// gamma swings the Earth-centre -> anchor vector into the xOz plane, beta
// then turns it onto +z, and k moves the anchor to the origin.

struct LocalFrame {
    Vec3 origin_ecef;
    double gamma{0.0};
    double beta{0.0};
    Vec3 translation;

    Mat3 rotation() const
    {
        const double cg = std::cos(gamma), sg = std::sin(gamma);
        const double cb = std::cos(beta), sb = std::sin(beta);
        Mat3 rz = Mat3::identity();
        rz(0, 0) = cg; rz(0, 1) = -sg;
        rz(1, 0) = sg; rz(1, 1) = cg;
        Mat3 ry = Mat3::identity();
        ry(0, 0) = cb;  ry(0, 2) = sb;
        ry(2, 0) = -sb; ry(2, 2) = cb;
        return ry * rz;
    }

    /// Unit zenith (+z local) expressed in ECEF.
    Vec3 zenith_ecef() const { return rotation().transposed() * Vec3{0.0, 0.0, 1.0}; }
};

/// Builds the local frame anchored at `ecef_anchor` (km); the anchor must lie within 1 km of `site`.
inline LocalFrame build_local_frame(const Geodetic& site, const Vec3& ecef_anchor)
{
    if (std::fabs(site.lat_rad) > std::numbers::pi / 2.0 + 1e-15)
        throw Error(ErrorCode::DomainError, "site latitude outside [-90, 90] deg");
    if (norm(geodetic_to_ecef(site) - ecef_anchor) > 1.0)
        throw Error(ErrorCode::DomainError, "anchor is more than 1 km from the geodetic site");

    LocalFrame f;
    f.origin_ecef = ecef_anchor;
    const double rho = std::hypot(ecef_anchor.x, ecef_anchor.y);
    if (rho < 1e-9) {
        // Pole: the anchor is already on the z axis, gamma is defined as zero.
        f.gamma = 0.0;
        f.beta = ecef_anchor.z >= 0.0 ? 0.0 : std::numbers::pi;
    } else {
        f.gamma = -std::atan2(ecef_anchor.y, ecef_anchor.x);
        f.beta = std::atan2(-rho, ecef_anchor.z);
    }
    f.translation = -(f.rotation() * ecef_anchor);
    return f;
}

inline LocalFrame build_local_frame(const Geodetic& site)
{
    return build_local_frame(site, geodetic_to_ecef(site));
}

inline StateVector global_to_local(const StateVector& s, const LocalFrame& f)
{
    require_frame(s, Frame::ECEF, "global_to_local");
    const Mat3 r = f.rotation();
    return {Frame::LOCAL, s.t, r * s.position + f.translation, r * s.velocity};
}

inline StateVector local_to_global(const StateVector& s, const LocalFrame& f)
{
    require_frame(s, Frame::LOCAL, "local_to_global");
    const Mat3 rt = f.rotation().transposed();
    return {Frame::ECEF, s.t, rt * (s.position - f.translation), rt * s.velocity};
}

} // namespace leochan
