#include <catch2/catch_amalgamated.hpp>

#include "leochan/frames.hpp"

#include <random>

using namespace leochan;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct OrientationRow {
    const char* label;
    int y, mo, d, h, mi;
    double zeta, z, theta, dpsi, deps, eps, gmst;
};

// tests/oracles/earth_orientation_reference.py (ERFA; 106-term nutation, TT = UTC + 69.184 s, UT1 = UTC).
const OrientationRow kOrientation[] = {
    {"2022-06-15T06:30:00", 2022, 6, 15, 6, 30, 0.0025231589838920327, 0.0024976460331870036, 0.0021815105128751631,
     -6.4518169753474198e-05, 2.5016034043850312e-05, 0.40904184476796029, 0.017956144981376099},
    {"2024-04-09T12:00:00", 2024, 4, 9, 12, 0, 0.0027264903659160468, 0.0027010095892895346, 0.002358194387835048,
     -2.623203602023204e-05, 4.5036813927783008e-05, 0.40903771726480542, 0.31807828622590506},
};

double angle_diff(double a, double b) { return std::fabs(std::remainder(a - b, 2.0 * std::numbers::pi)); }

double max_abs_diff(const Mat3& a, const Mat3& b)
{
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m = std::max(m, std::fabs(a(i, j) - b(i, j)));
    return m;
}

Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> n;
    return normalize(Vec3{n(rng), n(rng), n(rng)});
}

StateVector random_state(std::mt19937_64& rng, Frame f)
{
    std::uniform_real_distribution<double> radius(6500.0, 42000.0), speed(0.0, 8.0);
    return {f, Instant::from_calendar(2024, 1, 1), random_unit(rng) * radius(rng), random_unit(rng) * speed(rng)};
}

Geodetic random_site(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0), alt(-100.0, 3000.0);
    return Geodetic::from_degrees(lat(rng), lon(rng), alt(rng));
}

} // namespace

TEST_CASE("Earth orientation matches ERFA", "[frames]")
{
    for (const auto& row : kOrientation) {
        INFO(row.label);
        const Instant t = Instant::from_calendar(row.y, static_cast<unsigned>(row.mo), static_cast<unsigned>(row.d),
                                                 row.h, row.mi);
        const auto full = earth_orientation(t, NutationSeries::Full106);
        CHECK_THAT(full.zeta, WithinAbs(row.zeta, 1e-12));
        CHECK_THAT(full.z, WithinAbs(row.z, 1e-12));
        CHECK_THAT(full.theta, WithinAbs(row.theta, 1e-12));
        CHECK_THAT(full.mean_obliquity, WithinAbs(row.eps, 1e-12));
        CHECK_THAT(full.dpsi, WithinAbs(row.dpsi, 1e-12));
        CHECK_THAT(full.deps, WithinAbs(row.deps, 1e-12));
        CHECK(angle_diff(full.gmst, row.gmst) < 1e-11);

        // Four-term truncation stays within 0.3 arcsec of the full series.
        const auto trunc = earth_orientation(t, NutationSeries::Truncated4);
        CHECK(std::fabs(trunc.dpsi - row.dpsi) < 0.3 * kArcsecToRad);
        CHECK(std::fabs(trunc.deps - row.deps) < 0.3 * kArcsecToRad);
        CHECK(trunc.gmst == full.gmst);
    }
}

TEST_CASE("truncated nutation error bound over two decades", "[frames]")
{
    double worst = 0.0;
    for (double d = 0.0; d < 365.25 * 20; d += 3.7) {
        const double t = Instant::from_days_since_j2000(d + 7300.0).tt_centuries();
        const auto full = nutation_1980(t, NutationSeries::Full106);
        const auto trunc = nutation_1980(t, NutationSeries::Truncated4);
        worst = std::max(worst, std::fabs(full.dpsi - trunc.dpsi));
    }
    CHECK(worst * kRadToDeg < 0.003);
}

TEST_CASE("GMST at the J2000 epoch", "[frames]")
{
    // 18h 41m 50.54841s at 2000-01-01 12:00 UT1.
    const double expected = (18.0 + 41.0 / 60.0 + 50.54841 / 3600.0) * 15.0 * kDegToRad;
    CHECK_THAT(gmst_1982(Instant::from_days_since_j2000(0.0)), WithinAbs(expected, 1e-12));
}

TEST_CASE("TEME to ECI", "[frames]")
{
    std::mt19937_64 rng(11);
    SECTION("identity orientation leaves the state unchanged")
    {
        for (int i = 0; i < 100; ++i) {
            const auto s = random_state(rng, Frame::TEME);
            const auto e = teme_to_eci(s, EarthOrientation::identity());
            CHECK(e.frame == Frame::ECI);
            CHECK(norm(e.position - s.position) < 1e-12);
            CHECK(norm(e.velocity - s.velocity) < 1e-12);
        }
    }
    SECTION("norm preserved and inverse recovers the input")
    {
        const auto eo = earth_orientation(Instant::from_calendar(2022, 6, 15, 6, 30));
        for (int i = 0; i < 10000; ++i) {
            const auto s = random_state(rng, Frame::TEME);
            const auto e = teme_to_eci(s, eo);
            CHECK_THAT(norm(e.position), WithinRel(norm(s.position), 1e-9));
            CHECK(norm(eci_to_teme(e, eo).position - s.position) < 1e-9);
        }
    }
    SECTION("a 2022 epoch tilts TEME away from J2000 by a precession-sized angle")
    {
        const auto eo = earth_orientation(Instant::from_calendar(2022, 6, 15, 6, 30));
        // Rough order-of-magnitude oracle: general precession ~50.3 arcsec/yr over 22.45 yr.
        const double precession_deg = 50.29 * 22.45 / 3600.0;
        CHECK(precession_deg > 0.05);
        CHECK(precession_deg < 0.4);
        const Mat3 m = teme_to_eci_matrix(eo);
        const double net_deg = std::acos(0.5 * (m(0, 0) + m(1, 1) + m(2, 2) - 1.0)) * kRadToDeg;
        CHECK(net_deg >= 0.05);
        CHECK(net_deg <= 0.4);
        for (int i = 0; i < 1000; ++i) {
            const auto s = random_state(rng, Frame::TEME);
            const double off = angle_between(teme_to_eci(s, eo).position, s.position) * kRadToDeg;
            CHECK(off <= 0.4);
            // The axis sits near the ecliptic pole, so vectors near the equator see most of the rotation.
            if (std::fabs(normalize(s.position).z) < 0.3) CHECK(off >= 0.05);
        }
    }
    SECTION("wrong tag")
    {
        auto s = random_state(rng, Frame::ECI);
        CHECK_THROWS_MATCHES(teme_to_eci(s, EarthOrientation::identity()), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == ErrorCode::FrameMismatch;
                             }));
    }
}

TEST_CASE("ECI to ECEF", "[frames]")
{
    std::mt19937_64 rng(12);
    const Vec3 w{0.0, 0.0, kEarthRotationRate};
    SECTION("zero angles: only the frame-rate term changes")
    {
        const auto s = random_state(rng, Frame::ECI);
        const auto e = eci_to_ecef(s, EarthOrientation::identity());
        CHECK(norm(e.position - s.position) < 1e-12);
        CHECK(norm(e.velocity - (s.velocity - cross(w, s.position))) < 1e-15);
    }
    SECTION("geostationary co-rotation is at rest in ECEF")
    {
        const auto eo = earth_orientation(Instant::from_calendar(2024, 3, 1, 5, 0));
        const Vec3 r_ecef{42164.0 * std::cos(1.1), 42164.0 * std::sin(1.1), 0.0};
        const Mat3 m = eci_to_ecef_matrix(eo);
        const Vec3 r_eci = m.transposed() * r_ecef;
        // Inertial velocity of a point co-rotating about the ECEF pole.
        const Vec3 v_eci = m.transposed() * cross(w, r_ecef);
        const auto e = eci_to_ecef({Frame::ECI, Instant{}, r_eci, v_eci}, eo);
        CHECK(norm(e.velocity) < 1e-6);
    }
    SECTION("round trips")
    {
        for (int i = 0; i < 10000; ++i) {
            const auto s = random_state(rng, Frame::ECI);
            const auto eo = earth_orientation(Instant::from_days_since_j2000(8000.0 + i * 0.37));
            const auto back = ecef_to_eci(eci_to_ecef(s, eo), eo);
            CHECK(norm(back.position - s.position) < 1e-9);
            CHECK(norm(back.velocity - s.velocity) < 1e-12);
        }
    }
}

TEST_CASE("rotation matrices are orthonormal", "[frames][property]")
{
    for (int i = 0; i < 1000; ++i) {
        const auto eo = earth_orientation(Instant::from_days_since_j2000(-3000.0 + i * 13.1), NutationSeries::Full106);
        for (const Mat3& m : {precession_matrix(eo), nutation_matrix(eo), teme_to_eci_matrix(eo), eci_to_ecef_matrix(eo)}) {
            CHECK(orthonormality_error(m) < 1e-12);
            CHECK_THAT(m.determinant(), WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("TEME to LOCAL chain composition", "[frames][property]")
{
    std::mt19937_64 rng(13);
    const auto eo = earth_orientation(Instant::from_calendar(2024, 4, 9, 12, 0));
    const auto lf = build_local_frame(Geodetic::from_degrees(40.75, -73.99, 10.0));
    const Mat3 composed = lf.rotation() * eci_to_ecef_matrix(eo) * teme_to_eci_matrix(eo);
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_state(rng, Frame::TEME);
        const auto seq = global_to_local(eci_to_ecef(teme_to_eci(s, eo), eo), lf);
        CHECK(norm(seq.position - (composed * s.position + lf.translation)) < 1e-10 + 1e-15 * norm(s.position) * 10);
        // The direct GMST route is algebraically the same rotation.
        CHECK(norm(teme_to_ecef(s, eo).position - eci_to_ecef(teme_to_eci(s, eo), eo).position) < 1e-8);
        CHECK(norm(teme_to_ecef(s, eo).velocity - eci_to_ecef(teme_to_eci(s, eo), eo).velocity) < 1e-11);
    }
}

TEST_CASE("transformed velocity matches finite differences of transformed position", "[frames][property]")
{
    // Uniform circular motion in TEME has an exact velocity, unlike SGP4 output.
    const Instant ref = Instant::from_calendar(2024, 4, 9, 12, 0);
    const double a = 6920.0, n = std::sqrt(398600.8 / (a * a * a));
    const Vec3 p = normalize(Vec3{1.0, 0.3, -0.2});
    const Vec3 q = normalize(cross(Vec3{0.2, -0.5, 1.0}, p));
    const auto teme_at = [&](const Instant& t) {
        const double u = n * t.seconds_since(ref);
        return StateVector{Frame::TEME, t, (p * std::cos(u) + q * std::sin(u)) * a,
                           (q * std::cos(u) - p * std::sin(u)) * (a * n)};
    };
    const auto lf = build_local_frame(Geodetic::from_degrees(35.0, 139.0, 40.0));
    const auto to_local = [&](const Instant& t) {
        const auto eo = earth_orientation(t);
        return global_to_local(eci_to_ecef(teme_to_eci(teme_at(t), eo), eo), lf);
    };
    const auto to_ecef_direct = [&](const Instant& t) { return teme_to_ecef(teme_at(t), earth_orientation(t)); };
    for (double m = 0.0; m < 100.0; m += 3.3) {
        const Instant mid = ref.plus_minutes(m);
        const Instant lo = mid.plus_seconds(-0.0005), hi = mid.plus_seconds(0.0005);
        const double dt = hi.seconds_since(lo);
        const Vec3 fd = (to_local(hi).position - to_local(lo).position) / dt;
        CHECK(norm(fd - to_local(mid).velocity) < 1e-6);
        const Vec3 fd_direct = (to_ecef_direct(hi).position - to_ecef_direct(lo).position) / dt;
        CHECK(norm(fd_direct - to_ecef_direct(mid).velocity) < 1e-6);
    }
}

TEST_CASE("geodetic conversion", "[frames]")
{
    std::mt19937_64 rng(14);
    CHECK(norm(geodetic_to_ecef({0.0, 0.0, 0.0}) - Vec3{kWgs84A, 0.0, 0.0}) < 1e-12);
    CHECK(norm(geodetic_to_ecef(Geodetic::from_degrees(90.0, 0.0, 0.0)) - Vec3{0.0, 0.0, kWgs84B}) < 1e-9);
    for (int i = 0; i < 10000; ++i) {
        const auto g = random_site(rng);
        const Vec3 r = geodetic_to_ecef(g);
        const Vec3 back = geodetic_to_ecef(ecef_to_geodetic(r));
        CHECK(norm(back - r) < 1e-9);
    }
}

TEST_CASE("local frame construction", "[frames]")
{
    SECTION("equator, prime meridian")
    {
        const auto f = build_local_frame(Geodetic::from_degrees(0.0, 0.0, 0.0));
        CHECK(f.gamma == 0.0);
        CHECK_THAT(std::fabs(f.beta), WithinAbs(std::numbers::pi / 2.0, 1e-15));
        CHECK(norm(f.rotation() * Vec3{1.0, 0.0, 0.0} - Vec3{0.0, 0.0, 1.0}) < 1e-15);
    }
    SECTION("site on the +z axis is a pure translation")
    {
        const auto f = build_local_frame(Geodetic::from_degrees(90.0, 0.0, 0.0));
        CHECK(f.gamma == 0.0);
        CHECK(f.beta == 0.0);
        CHECK(max_abs_diff(f.rotation(), Mat3::identity()) == 0.0);
        CHECK(norm(f.translation + Vec3{0.0, 0.0, kWgs84B}) < 1e-9);
    }
    SECTION("gamma brings the anchor into the xOz plane, beta onto +z")
    {
        const auto site = Geodetic::from_degrees(40.75, -73.99, 10.0);
        const auto f = build_local_frame(site);
        const Vec3 a = f.origin_ecef;
        LocalFrame only_gamma = f;
        only_gamma.beta = 0.0;
        const Vec3 in_xoz = only_gamma.rotation() * a;
        CHECK(std::fabs(in_xoz.y) < 1e-9);
        CHECK(in_xoz.x > 0.0);
        const Vec3 on_z = f.rotation() * a;
        CHECK(std::hypot(on_z.x, on_z.y) < 1e-9);
        CHECK_THAT(on_z.z, WithinRel(norm(a), 1e-15));
    }
    SECTION("anchor far from the site is rejected")
    {
        const auto site = Geodetic::from_degrees(10.0, 20.0, 0.0);
        CHECK_THROWS_AS(build_local_frame(site, geodetic_to_ecef(site) + Vec3{2.0, 0.0, 0.0}), Error);
        CHECK_NOTHROW(build_local_frame(site, geodetic_to_ecef(site) + Vec3{0.5, 0.0, 0.0}));
    }
    SECTION("local zenith is close to the ellipsoid normal")
    {
        const auto site = Geodetic::from_degrees(45.0, 10.0, 0.0);
        const auto f = build_local_frame(site);
        const Vec3 normal{std::cos(site.lat_rad) * std::cos(site.lon_rad),
                          std::cos(site.lat_rad) * std::sin(site.lon_rad), std::sin(site.lat_rad)};
        // Geodetic and geocentric verticals differ by at most ~0.19 deg.
        CHECK(angle_between(f.zenith_ecef(), normal) * kRadToDeg < 0.2);
    }
}

TEST_CASE("local frame properties over random sites", "[frames][property]")
{
    std::mt19937_64 rng(15);
    for (int i = 0; i < 1000; ++i) {
        const auto f = build_local_frame(random_site(rng));
        CHECK(orthonormality_error(f.rotation()) < 1e-12);
        CHECK_THAT(f.rotation().determinant(), WithinAbs(1.0, 1e-12));
        const auto o = global_to_local({Frame::ECEF, Instant{}, f.origin_ecef, {}}, f);
        CHECK(norm(o.position) < 1e-9);
        const Vec3 zen = f.rotation() * f.zenith_ecef();
        CHECK_THAT(zen.z, WithinAbs(1.0, 1e-15));
    }
}

TEST_CASE("local round trips and the zenith satellite", "[frames][property]")
{
    std::mt19937_64 rng(16);
    for (int i = 0; i < 10000; ++i) {
        const auto f = build_local_frame(random_site(rng));
        const StateVector s{Frame::ECEF, Instant{}, f.origin_ecef + random_unit(rng) * 3000.0, random_unit(rng) * 7.5};
        const auto l = global_to_local(s, f);
        CHECK(l.frame == Frame::LOCAL);
        const auto back = local_to_global(l, f);
        CHECK(norm(back.position - s.position) < 1e-9);
        CHECK(norm(back.velocity - s.velocity) < 1e-12);
        CHECK_THAT(norm(l.position - global_to_local({Frame::ECEF, {}, f.origin_ecef, {}}, f).position),
                   WithinRel(norm(s.position - f.origin_ecef), 1e-9));
    }

    const auto f = build_local_frame(Geodetic::from_degrees(31.0, 121.0, 5.0));
    const double slant = 542.0;
    const StateVector overhead{Frame::ECEF, Instant{}, f.origin_ecef + f.zenith_ecef() * slant, {}};
    CHECK(norm(global_to_local(overhead, f).position - Vec3{0.0, 0.0, slant}) < 1e-6);

    CHECK_THROWS_AS(global_to_local(global_to_local(overhead, f), f), Error);
    CHECK_THROWS_AS(local_to_global(overhead, f), Error);
}
