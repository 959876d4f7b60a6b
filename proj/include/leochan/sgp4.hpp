#pragma once

// Near-Earth SGP4 propagation (orbital period < 225 min).
//
// Follows the "Revisiting Spacetrack Report #3" formulation: Brouwer mean
// motion recovery, secular J2/J4 and drag terms, J3 long-period terms and
// J2 short-period corrections. Output is position/velocity in TEME.
// Deep-space (SDP4) element sets are detected and rejected.

#include "leochan/core/error.hpp"
#include "leochan/core/state.hpp"
#include "leochan/tle.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace leochan {

struct GravityConstants {
    double mu;              ///< km³/s²
    double earth_radius_km; ///< equatorial radius
    double xke;             ///< sqrt(mu) in earth-radii^1.5 / min
    double j2;
    double j3;
    double j4;

    double tumin() const { return 1.0 / xke; }
    double j3oj2() const { return j3 / j2; }

    static GravityConstants from(double mu, double re, double j2, double j3, double j4)
    {
        return {mu, re, 60.0 / std::sqrt(re * re * re / mu), j2, j3, j4};
    }
    static GravityConstants wgs72() { return from(398600.8, 6378.135, 0.001082616, -0.00000253881, -0.00000165597); }
    static GravityConstants wgs84()
    {
        return from(398600.5, 6378.137, 0.00108262998905, -0.00000253215306, -0.00000161098761);
    }
};

inline constexpr double kDeepSpacePeriodMinutes = 225.0;

/// Initialized SGP4 propagator. Immutable after construction; `propagate` is const and thread-safe.
class Sgp4 {
public:
    Sgp4(const Tle& tle, GravityConstants consts = GravityConstants::wgs72()) : c_(consts), epoch_(tle.epoch())
    {
        constexpr double deg = std::numbers::pi / 180.0;
        constexpr double x2o3 = 2.0 / 3.0;
        const double xpdotp = kMinutesPerDay / (2.0 * std::numbers::pi);

        bstar_ = tle.bstar;
        ecco_ = tle.eccentricity;
        argpo_ = tle.arg_perigee_deg * deg;
        inclo_ = tle.inclination_deg * deg;
        mo_ = tle.mean_anomaly_deg * deg;
        nodeo_ = tle.raan_deg * deg;
        const double no_kozai = tle.mean_motion_revs_per_day / xpdotp; // rad/min

        const double re = c_.earth_radius_km;
        const double j2 = c_.j2;
        const double j4 = c_.j4;
        const double j3oj2 = c_.j3oj2();
        const double ss = 78.0 / re + 1.0;
        const double qzms2t = std::pow((120.0 - 78.0) / re, 4);

        // Brouwer mean motion and semi-major axis recovery.
        const double eccsq = ecco_ * ecco_;
        const double omeosq = 1.0 - eccsq;
        const double rteosq = std::sqrt(omeosq);
        cosio_ = std::cos(inclo_);
        const double cosio2 = cosio_ * cosio_;
        const double ak = std::pow(c_.xke / no_kozai, x2o3);
        const double d1 = 0.75 * j2 * (3.0 * cosio2 - 1.0) / (rteosq * omeosq);
        double del = d1 / (ak * ak);
        const double adel = ak * (1.0 - del * del - del * (1.0 / 3.0 + 134.0 * del * del / 81.0));
        del = d1 / (adel * adel);
        no_ = no_kozai / (1.0 + del);
        const double ao = std::pow(c_.xke / no_, x2o3);
        sinio_ = std::sin(inclo_);
        const double po = ao * omeosq;
        const double con42 = 1.0 - 5.0 * cosio2;
        con41_ = -con42 - cosio2 - cosio2;
        const double posq = po * po;
        const double rp = ao * (1.0 - ecco_);
        semi_major_axis_km_ = ao * re;

        if (2.0 * std::numbers::pi / no_ >= kDeepSpacePeriodMinutes)
            throw Error(ErrorCode::DeepSpaceUnsupported,
                        "orbital period " + std::to_string(2.0 * std::numbers::pi / no_) +
                            " min is in the deep-space regime (>= 225 min)");
        if (ao <= 1.0)
            throw Error(ErrorCode::DecayedOrbit,
                        "recovered semi-major axis " + std::to_string(semi_major_axis_km_) + " km is inside the Earth");

        isimp_ = rp < (220.0 / re + 1.0);
        double sfour = ss;
        double qzms24 = qzms2t;
        const double perige = (rp - 1.0) * re;
        if (perige < 156.0) {
            sfour = perige - 78.0;
            if (perige < 98.0) sfour = 20.0;
            qzms24 = std::pow((120.0 - sfour) / re, 4);
            sfour = sfour / re + 1.0;
        }
        const double pinvsq = 1.0 / posq;
        const double tsi = 1.0 / (ao - sfour);
        eta_ = ao * ecco_ * tsi;
        const double etasq = eta_ * eta_;
        const double eeta = ecco_ * eta_;
        const double psisq = std::fabs(1.0 - etasq);
        const double coef = qzms24 * std::pow(tsi, 4);
        const double coef1 = coef / std::pow(psisq, 3.5);
        const double cc2 = coef1 * no_ *
                           (ao * (1.0 + 1.5 * etasq + eeta * (4.0 + etasq)) +
                            0.375 * j2 * tsi / psisq * con41_ * (8.0 + 3.0 * etasq * (8.0 + etasq)));
        cc1_ = bstar_ * cc2;
        double cc3 = 0.0;
        if (ecco_ > 1.0e-4) cc3 = -2.0 * coef * tsi * j3oj2 * no_ * sinio_ / ecco_;
        x1mth2_ = 1.0 - cosio2;
        cc4_ = 2.0 * no_ * coef1 * ao * omeosq *
               (eta_ * (2.0 + 0.5 * etasq) + ecco_ * (0.5 + 2.0 * etasq) -
                j2 * tsi / (ao * psisq) *
                    (-3.0 * con41_ * (1.0 - 2.0 * eeta + etasq * (1.5 - 0.5 * eeta)) +
                     0.75 * x1mth2_ * (2.0 * etasq - eeta * (1.0 + etasq)) * std::cos(2.0 * argpo_)));
        cc5_ = 2.0 * coef1 * ao * omeosq * (1.0 + 2.75 * (etasq + eeta) + eeta * etasq);
        const double cosio4 = cosio2 * cosio2;
        const double temp1 = 1.5 * j2 * pinvsq * no_;
        const double temp2 = 0.5 * temp1 * j2 * pinvsq;
        const double temp3 = -0.46875 * j4 * pinvsq * pinvsq * no_;
        mdot_ = no_ + 0.5 * temp1 * rteosq * con41_ + 0.0625 * temp2 * rteosq * (13.0 - 78.0 * cosio2 + 137.0 * cosio4);
        argpdot_ = -0.5 * temp1 * con42 + 0.0625 * temp2 * (7.0 - 114.0 * cosio2 + 395.0 * cosio4) +
                   temp3 * (3.0 - 36.0 * cosio2 + 49.0 * cosio4);
        const double xhdot1 = -temp1 * cosio_;
        nodedot_ = xhdot1 + (0.5 * temp2 * (4.0 - 19.0 * cosio2) + 2.0 * temp3 * (3.0 - 7.0 * cosio2)) * cosio_;
        omgcof_ = bstar_ * cc3 * std::cos(argpo_);
        xmcof_ = 0.0;
        if (ecco_ > 1.0e-4) xmcof_ = -x2o3 * coef * bstar_ / eeta;
        nodecf_ = 3.5 * omeosq * xhdot1 * cc1_;
        t2cof_ = 1.5 * cc1_;
        // Guard against division by zero for inclination near 180 deg.
        const double denom = std::fabs(cosio_ + 1.0) > 1.5e-12 ? (1.0 + cosio_) : 1.5e-12;
        xlcof_ = -0.25 * j3oj2 * sinio_ * (3.0 + 5.0 * cosio_) / denom;
        aycof_ = -0.5 * j3oj2 * sinio_;
        delmo_ = std::pow(1.0 + eta_ * std::cos(mo_), 3);
        sinmao_ = std::sin(mo_);
        x7thm1_ = 7.0 * cosio2 - 1.0;

        if (!isimp_) {
            const double cc1sq = cc1_ * cc1_;
            d2_ = 4.0 * ao * tsi * cc1sq;
            const double temp = d2_ * tsi * cc1_ / 3.0;
            d3_ = (17.0 * ao + sfour) * temp;
            d4_ = 0.5 * temp * ao * tsi * (221.0 * ao + 31.0 * sfour) * cc1_;
            t3cof_ = d2_ + 2.0 * cc1sq;
            t4cof_ = 0.25 * (3.0 * d3_ + cc1_ * (12.0 * d2_ + 10.0 * cc1sq));
            t5cof_ = 0.2 * (3.0 * d4_ + 12.0 * cc1_ * d3_ + 6.0 * d2_ * d2_ + 15.0 * cc1sq * (2.0 * d2_ + cc1sq));
        }

        // Mirrors the reference initialization, which propagates once to validate the elements.
        (void)propagate(0.0);
    }

    const GravityConstants& constants() const { return c_; }
    Instant epoch() const { return epoch_; }
    /// Semi-major axis recovered from the Kozai mean motion, km.
    double semi_major_axis_km() const { return semi_major_axis_km_; }
    /// Brouwer ("un-Kozai'd") mean motion, rad/min.
    double brouwer_mean_motion() const { return no_; }
    double inclination_rad() const { return inclo_; }
    double eccentricity() const { return ecco_; }

    /// TEME state at `tsince_min` minutes from the element epoch.
    StateVector propagate(double tsince_min) const
    {
        constexpr double twopi = 2.0 * std::numbers::pi;
        constexpr double x2o3 = 2.0 / 3.0;
        const double re = c_.earth_radius_km;
        const double xke = c_.xke;
        const double j2 = c_.j2;
        const double vkmpersec = re * xke / 60.0;
        const double t = tsince_min;

        // Secular gravity and atmospheric drag.
        const double xmdf = mo_ + mdot_ * t;
        const double argpdf = argpo_ + argpdot_ * t;
        const double nodedf = nodeo_ + nodedot_ * t;
        double argpm = argpdf;
        double mm = xmdf;
        const double t2 = t * t;
        double nodem = nodedf + nodecf_ * t2;
        double tempa = 1.0 - cc1_ * t;
        double tempe = bstar_ * cc4_ * t;
        double templ = t2cof_ * t2;

        if (!isimp_) {
            const double delomg = omgcof_ * t;
            const double delmtemp = 1.0 + eta_ * std::cos(xmdf);
            const double delm = xmcof_ * (delmtemp * delmtemp * delmtemp - delmo_);
            const double temp = delomg + delm;
            mm = xmdf + temp;
            argpm = argpdf - temp;
            const double t3 = t2 * t;
            const double t4 = t3 * t;
            tempa = tempa - d2_ * t2 - d3_ * t3 - d4_ * t4;
            tempe = tempe + bstar_ * cc5_ * (std::sin(mm) - sinmao_);
            templ = templ + t3cof_ * t3 + t4 * (t4cof_ + t * t5cof_);
        }

        double nm = no_;
        double em = ecco_;
        const double inclm = inclo_;
        if (nm <= 0.0) decayed(t, "mean motion is non-positive");

        const double am = std::pow(xke / nm, x2o3) * tempa * tempa;
        nm = xke / std::pow(am, 1.5);
        em = em - tempe;
        if (em >= 1.0 || em < -0.001) decayed(t, "mean eccentricity left [0, 1)");
        if (em < 1.0e-6) em = 1.0e-6;
        mm = mm + no_ * templ;
        double xlm = mm + argpm + nodem;
        nodem = std::fmod(nodem, twopi);
        argpm = std::fmod(argpm, twopi);
        xlm = std::fmod(xlm, twopi);
        mm = std::fmod(xlm - argpm - nodem, twopi);

        const double sinip = std::sin(inclm);
        const double cosip = std::cos(inclm);

        // Long-period periodics.
        const double axnl = em * std::cos(argpm);
        double temp = 1.0 / (am * (1.0 - em * em));
        const double aynl = em * std::sin(argpm) + temp * aycof_;
        const double xl = mm + argpm + nodem + temp * xlcof_ * axnl;

        // Kepler's equation in (u, axnl, aynl), damped Newton with a 0.95 rad step clamp.
        const double u = std::fmod(xl - nodem, twopi);
        double eo1 = u;
        double sineo1 = 0.0;
        double coseo1 = 0.0;
        bool converged = false;
        for (int ktr = 0; ktr < kKeplerIterationCap; ++ktr) {
            sineo1 = std::sin(eo1);
            coseo1 = std::cos(eo1);
            double tem5 = 1.0 - coseo1 * axnl - sineo1 * aynl;
            tem5 = (u - aynl * coseo1 + axnl * sineo1 - eo1) / tem5;
            if (std::fabs(tem5) >= 0.95) tem5 = tem5 > 0.0 ? 0.95 : -0.95;
            eo1 += tem5;
            if (std::fabs(tem5) < 1.0e-12) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw Error(ErrorCode::KeplerNonConvergence,
                        "Kepler iteration did not converge within 15 steps at tsince " + std::to_string(t) + " min");
        sineo1 = std::sin(eo1);
        coseo1 = std::cos(eo1);

        // Short-period periodics.
        const double ecose = axnl * coseo1 + aynl * sineo1;
        const double esine = axnl * sineo1 - aynl * coseo1;
        const double el2 = axnl * axnl + aynl * aynl;
        const double pl = am * (1.0 - el2);
        if (pl < 0.0) decayed(t, "semi-latus rectum is negative");

        const double rl = am * (1.0 - ecose);
        const double rdotl = std::sqrt(am) * esine / rl;
        const double rvdotl = std::sqrt(pl) / rl;
        const double betal = std::sqrt(1.0 - el2);
        temp = esine / (1.0 + betal);
        const double sinu = am / rl * (sineo1 - aynl - axnl * temp);
        const double cosu = am / rl * (coseo1 - axnl + aynl * temp);
        double su = std::atan2(sinu, cosu);
        const double sin2u = (cosu + cosu) * sinu;
        const double cos2u = 1.0 - 2.0 * sinu * sinu;
        temp = 1.0 / pl;
        const double temp1 = 0.5 * j2 * temp;
        const double temp2 = temp1 * temp;

        const double mrt = rl * (1.0 - 1.5 * temp2 * betal * con41_) + 0.5 * temp1 * x1mth2_ * cos2u;
        su = su - 0.25 * temp2 * x7thm1_ * sin2u;
        const double xnode = nodem + 1.5 * temp2 * cosip * sin2u;
        const double xinc = inclm + 1.5 * temp2 * cosip * sinip * cos2u;
        const double mvt = rdotl - nm * temp1 * x1mth2_ * sin2u / xke;
        const double rvdot = rvdotl + nm * temp1 * (x1mth2_ * cos2u + 1.5 * con41_) / xke;

        const double sinsu = std::sin(su), cossu = std::cos(su);
        const double snod = std::sin(xnode), cnod = std::cos(xnode);
        const double sini = std::sin(xinc), cosi = std::cos(xinc);
        const double xmx = -snod * cosi;
        const double xmy = cnod * cosi;
        const Vec3 uv{xmx * sinsu + cnod * cossu, xmy * sinsu + snod * cossu, sini * sinsu};
        const Vec3 vv{xmx * cossu - cnod * sinsu, xmy * cossu - snod * sinsu, sini * cossu};

        if (mrt < 1.0) decayed(t, "radius below the Earth's surface");

        StateVector s;
        s.frame = Frame::TEME;
        s.t = epoch_.plus_minutes(t);
        s.position = uv * (mrt * re);
        s.velocity = (uv * mvt + vv * rvdot) * vkmpersec;
        return s;
    }

    StateVector propagate(const Instant& t) const { return propagate(t.minutes_since(epoch_)); }

private:
    static constexpr int kKeplerIterationCap = 15;

    [[noreturn]] static void decayed(double t, const char* why)
    {
        throw Error(ErrorCode::SatelliteDecayed, std::string(why) + " at tsince " + std::to_string(t) + " min");
    }

    GravityConstants c_;
    Instant epoch_;
    bool isimp_{false};
    double bstar_{}, ecco_{}, argpo_{}, inclo_{}, mo_{}, nodeo_{}, no_{};
    double semi_major_axis_km_{};
    double cosio_{}, sinio_{}, con41_{}, x1mth2_{}, x7thm1_{};
    double eta_{}, cc1_{}, cc4_{}, cc5_{}, d2_{}, d3_{}, d4_{};
    double delmo_{}, sinmao_{}, mdot_{}, argpdot_{}, nodedot_{}, omgcof_{}, xmcof_{}, nodecf_{};
    double t2cof_{}, t3cof_{}, t4cof_{}, t5cof_{}, xlcof_{}, aycof_{};
};

} // namespace leochan
