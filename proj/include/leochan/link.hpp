#pragma once

// Link budget per path: free-space loss, rain attenuation over an effective
// path, Fresnel reflection losses. Snapshot aggregation into total power and
// RMS delay spread.

#include "leochan/core/error.hpp"
#include "leochan/sbr.hpp"
#include "leochan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace leochan {

inline constexpr double kSpeedOfLightKmPerS = 299792.458;

enum class Polarization { H, V };

/// How the effective rain path length is evaluated.
enum class RainPathModel {
    AsPrinted,         ///< L = 1 / (0.00741 R^0.776 + 0.23182 sin(el))
    LatitudeDependent, ///< L = 1 / (0.00741 R^0.776 + (0.232 - 0.00018 |lat_deg|) sin(el))
};

struct LinkParams {
    double fc_mhz{2000.0};
    double pt_dbm{30.0};
    double rain_rate_mm_h{0.0};
    double rain_k{0.0000847};
    double rain_alpha{1.0664};
    Polarization polarization{Polarization::V};
    RainPathModel rain_path{RainPathModel::AsPrinted};
    double site_latitude_deg{0.0}; ///< only used by RainPathModel::LatitudeDependent

    void validate() const
    {
        if (!(fc_mhz > 0.0)) throw Error(ErrorCode::NonPositiveInput, "carrier frequency must be positive");
        if (!(rain_rate_mm_h >= 0.0)) throw Error(ErrorCode::NonPositiveInput, "rain rate must be >= 0");
        if (!(rain_k > 0.0) || !(rain_alpha > 0.0))
            throw Error(ErrorCode::NonPositiveInput, "rain coefficients must be positive");
        if (!std::isfinite(pt_dbm)) throw Error(ErrorCode::DomainError, "transmit power must be finite");
    }
};

/// 32.4 + 20 log10(D km) + 20 log10(f MHz).
inline double fspl_db(double d_km, double fc_mhz)
{
    if (!(d_km > 0.0) || !(fc_mhz > 0.0))
        throw Error(ErrorCode::NonPositiveInput, "free-space loss needs positive distance and frequency");
    return 32.4 + 20.0 * std::log10(d_km) + 20.0 * std::log10(fc_mhz);
}

inline double rain_effective_path_km(double rate_mm_h, double elevation_rad,
                                     RainPathModel model = RainPathModel::AsPrinted, double latitude_deg = 0.0)
{
    if (!(elevation_rad > 0.0) || elevation_rad > std::numbers::pi / 2.0)
        throw Error(ErrorCode::InvalidElevation, "rain path needs 0 < elevation <= 90 deg");
    if (!(rate_mm_h >= 0.0)) throw Error(ErrorCode::NonPositiveInput, "rain rate must be >= 0");
    const double slope = model == RainPathModel::AsPrinted ? 0.232 - 0.00018 : 0.232 - 0.00018 * std::fabs(latitude_deg);
    return 1.0 / (0.00741 * std::pow(rate_mm_h, 0.776) + slope * std::sin(elevation_rad));
}

/// k R^alpha L, in dB.
inline double rain_attenuation_db(double rate_mm_h, double k, double alpha, double elevation_rad,
                                  RainPathModel model = RainPathModel::AsPrinted, double latitude_deg = 0.0)
{
    const double path = rain_effective_path_km(rate_mm_h, elevation_rad, model, latitude_deg);
    if (rate_mm_h == 0.0) return 0.0;
    return k * std::pow(rate_mm_h, alpha) * path;
}

inline double rain_attenuation_db(const LinkParams& lp, double elevation_rad)
{
    return rain_attenuation_db(lp.rain_rate_mm_h, lp.rain_k, lp.rain_alpha, elevation_rad, lp.rain_path,
                               lp.site_latitude_deg);
}

/// Complex Fresnel amplitude coefficient; V maps to the parallel (TM) component, H to perpendicular (TE).
inline std::complex<double> fresnel_coefficient(double incidence_rad, const Material& m, double fc_mhz,
                                                Polarization pol)
{
    const double lambda_m = kSpeedOfLightKmPerS * 1e3 / (fc_mhz * 1e6);
    const std::complex<double> eps(m.relative_permittivity, -60.0 * lambda_m * m.conductivity);
    const double c = std::cos(incidence_rad), s = std::sin(incidence_rad);
    const std::complex<double> root = std::sqrt(eps - s * s);
    if (pol == Polarization::H) return (c - root) / (c + root);
    return (eps * c - root) / (eps * c + root);
}

/// -10 log10 |Gamma|^2 >= 0; angle measured from the surface normal.
inline double reflection_loss_db(double incidence_rad, const Material& m, double fc_mhz, Polarization pol)
{
    if (!(incidence_rad >= 0.0) || !(incidence_rad < std::numbers::pi / 2.0))
        throw Error(ErrorCode::DomainError, "incidence angle must lie in [0, 90) deg");
    if (std::isinf(m.conductivity)) return 0.0;
    const double g2 = std::norm(fresnel_coefficient(incidence_rad, m, fc_mhz, pol));
    return std::max(0.0, -10.0 * std::log10(g2));
}

inline double path_delay_us(const PathRecord& p) { return p.total_length() / kSpeedOfLightKmPerS * 1e6; }

/// Transmit power minus free-space, rain and per-bounce reflection losses.
inline double path_power_dbm(const PathRecord& path, const LinkParams& lp, double elevation_rad,
                             std::span<const Material> materials)
{
    double loss = fspl_db(path.total_length(), lp.fc_mhz) + rain_attenuation_db(lp, elevation_rad);
    for (const auto& it : path.interactions) {
        if (it.material_id < 0 || static_cast<std::size_t>(it.material_id) >= materials.size())
            throw Error(ErrorCode::DomainError, "interaction references an unknown material");
        loss += reflection_loss_db(it.incidence_angle, materials[static_cast<std::size_t>(it.material_id)],
                                   lp.fc_mhz, lp.polarization);
    }
    return lp.pt_dbm - loss;
}

struct DelayPower {
    double delay_us{0.0};
    double power_dbm{0.0};
};

struct SnapshotStats {
    double total_power_dbm{-std::numeric_limits<double>::infinity()};
    double mean_delay_us{0.0};
    double rms_delay_spread_ns{0.0};
    std::vector<DelayPower> pdp; ///< ascending delay
};

/// Power sum and power-weighted delay moments. Delays are shifted by the
/// earliest arrival before the (two-pass) moments to avoid cancellation.
inline SnapshotStats snapshot_stats(std::span<const DelayPower> paths)
{
    if (paths.empty()) throw Error(ErrorCode::EmptyPathSet, "snapshot statistics need at least one path");
    SnapshotStats s;
    s.pdp.assign(paths.begin(), paths.end());
    std::stable_sort(s.pdp.begin(), s.pdp.end(),
                     [](const DelayPower& a, const DelayPower& b) { return a.delay_us < b.delay_us; });

    double pmax = -std::numeric_limits<double>::infinity();
    for (const auto& p : s.pdp) pmax = std::max(pmax, p.power_dbm);
    const double t_ref = s.pdp.front().delay_us;

    double wsum = 0.0, m1 = 0.0;
    for (const auto& p : s.pdp) {
        const double w = std::pow(10.0, (p.power_dbm - pmax) / 10.0);
        wsum += w;
        m1 += w * (p.delay_us - t_ref);
    }
    m1 /= wsum;
    double m2 = 0.0;
    for (const auto& p : s.pdp) {
        const double w = std::pow(10.0, (p.power_dbm - pmax) / 10.0);
        const double dev = (p.delay_us - t_ref) - m1;
        m2 += w * dev * dev;
    }
    s.total_power_dbm = pmax + 10.0 * std::log10(wsum);
    s.mean_delay_us = t_ref + m1;
    s.rms_delay_spread_ns = std::sqrt(m2 / wsum) * 1e3;
    return s;
}

inline double total_power_dbm(std::span<const double> powers_dbm)
{
    if (powers_dbm.empty()) return -std::numeric_limits<double>::infinity();
    const double pmax = *std::max_element(powers_dbm.begin(), powers_dbm.end());
    double sum = 0.0;
    for (double p : powers_dbm) sum += std::pow(10.0, (p - pmax) / 10.0);
    return pmax + 10.0 * std::log10(sum);
}

struct ScoredPath {
    PathRecord path;
    double power_dbm{0.0};
    double delay_us{0.0};
    double doppler_hz{0.0};
};

/// All paths at one instant. An empty snapshot has -inf total power and zero spread.
struct ChannelSnapshot {
    Instant t;
    double elevation_deg{0.0};
    std::vector<ScoredPath> paths; ///< ascending delay
    double total_power_dbm{-std::numeric_limits<double>::infinity()};
    double rms_delay_spread_ns{0.0};
};

/// Sorts the paths by delay and fills the aggregate statistics.
inline void summarize(ChannelSnapshot& s)
{
    std::stable_sort(s.paths.begin(), s.paths.end(),
                     [](const ScoredPath& a, const ScoredPath& b) { return a.delay_us < b.delay_us; });
    if (s.paths.empty()) {
        s.total_power_dbm = -std::numeric_limits<double>::infinity();
        s.rms_delay_spread_ns = 0.0;
        return;
    }
    std::vector<DelayPower> dp;
    dp.reserve(s.paths.size());
    for (const auto& p : s.paths) dp.push_back({p.delay_us, p.power_dbm});
    const SnapshotStats st = snapshot_stats(dp);
    s.total_power_dbm = st.total_power_dbm;
    s.rms_delay_spread_ns = st.rms_delay_spread_ns;
}

} // namespace leochan
