#pragma once

// Pass simulation driver: config file, one channel snapshot per time step of
// the visibility window, and the CSV tables written from them.
//
// Config files are flat `key = value` lines; `#` starts a comment. Keys carry
// their units. Relative paths resolve against the config file's directory.

#include "leochan/core/error.hpp"
#include "leochan/doppler.hpp"
#include "leochan/frames.hpp"
#include "leochan/link.hpp"
#include "leochan/sbr.hpp"
#include "leochan/scene.hpp"
#include "leochan/sgp4.hpp"
#include "leochan/tle.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace leochan {

enum class SceneKind { City, Ground, File };

struct SimConfig {
    std::string tle_path;
    std::string tle_name; ///< empty selects the first set in the file
    double site_lat_deg{0.0};
    double site_lon_deg{0.0};
    double site_alt_m{0.0};
    double receiver_height_m{1.5};

    SceneKind scene{SceneKind::City};
    std::string scene_file;
    double ground_half_extent_m{500.0};
    int city_grid_nx{4};
    int city_grid_ny{4};
    double city_block_w_m{80.0};
    double city_street_w_m{20.0};
    double city_height_min_m{20.0};
    double city_height_max_m{120.0};
    double city_ground_margin_m{50.0};

    LinkParams link;
    double theta_min_deg{0.0};
    double time_step_s{30.0};
    double spacing_m{1.0};
    double rx_radius_m{0.0}; ///< 0 picks 1.5 x spacing
    int max_bounces{2};
    std::uint64_t seed{1};
    unsigned threads{0};
    double search_step_s{1.0};
    double search_horizon_h{48.0};
    TrackRate track_rate{TrackRate::Constant};
    std::string output_dir{"out"};

    void validate() const
    {
        const auto fail = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
        if (tle_path.empty()) fail("tle_path is required");
        if (!std::filesystem::exists(tle_path)) fail("tle_path '" + tle_path + "' does not exist");
        if (scene == SceneKind::File) {
            if (scene_file.empty()) fail("scene = file needs scene_file");
            if (!std::filesystem::exists(scene_file)) fail("scene_file '" + scene_file + "' does not exist");
        }
        if (!(std::fabs(site_lat_deg) <= 90.0)) fail("site_lat_deg must lie in [-90, 90]");
        if (!(std::fabs(site_lon_deg) <= 360.0)) fail("site_lon_deg must lie in [-360, 360]");
        if (!std::isfinite(site_alt_m)) fail("site_alt_m must be finite");
        if (!(receiver_height_m >= 0.0)) fail("receiver_height_m must be >= 0");
        if (!(ground_half_extent_m > 0.0)) fail("ground_half_extent_m must be positive");
        if (city_grid_nx < 1 || city_grid_ny < 1) fail("city grid must be at least 1 x 1");
        if (!(city_block_w_m > 0.0) || !(city_street_w_m > 0.0)) fail("city block and street widths must be positive");
        if (!(city_height_min_m > 0.0) || !(city_height_max_m >= city_height_min_m))
            fail("city heights need 0 < min <= max");
        if (!(city_ground_margin_m >= 0.0)) fail("city_ground_margin_m must be >= 0");
        if (!(theta_min_deg >= 0.0 && theta_min_deg < 90.0)) fail("theta_min_deg must lie in [0, 90)");
        if (!(time_step_s > 0.0)) fail("time_step_s must be positive");
        if (!(spacing_m > 0.0)) fail("spacing_m must be positive");
        if (!(rx_radius_m >= 0.0)) fail("rx_radius_m must be >= 0");
        if (max_bounces < 0) fail("max_bounces must be >= 0");
        if (!(search_step_s > 0.0) || !(search_horizon_h > 0.0)) fail("search_step_s and search_horizon_h must be positive");
        try {
            link.validate();
        } catch (const Error& e) {
            fail(e.message());
        }
    }
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_config_number(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw Error(ErrorCode::ConfigError, "key '" + key + "': '" + v + "' is not a number");
    return out;
}

template <class Int>
Int parse_config_integer(const std::string& key, const std::string& v)
{
    Int out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw Error(ErrorCode::ConfigError, "key '" + key + "': '" + v + "' is not an integer");
    return out;
}

inline std::string resolve_path(const std::filesystem::path& base, const std::string& v)
{
    const std::filesystem::path p(v);
    return p.is_absolute() || base.empty() ? p.string() : (base / p).lexically_normal().string();
}

} // namespace detail

/// Parses config text; relative paths are resolved against `base_dir`.
inline SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {})
{
    SimConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const auto num = [](double& dst) -> Setter {
        return [&dst](const std::string& k, const std::string& v) { dst = detail::parse_config_number(k, v); };
    };
    const auto integer = [](int& dst) -> Setter {
        return [&dst](const std::string& k, const std::string& v) { dst = detail::parse_config_integer<int>(k, v); };
    };
    const auto path = [&base_dir](std::string& dst) -> Setter {
        return [&dst, &base_dir](const std::string&, const std::string& v) { dst = detail::resolve_path(base_dir, v); };
    };
    const auto choice = [](const std::string& k, const std::string& v, std::initializer_list<const char*> allowed) {
        for (const char* a : allowed)
            if (v == a) return;
        std::string list;
        for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
        throw Error(ErrorCode::ConfigError, "key '" + k + "': expected one of " + list + ", got '" + v + "'");
    };

    const std::map<std::string, Setter> keys{
        {"tle_path", path(c.tle_path)},
        {"tle_name", [&c](const std::string&, const std::string& v) { c.tle_name = v; }},
        {"site_lat_deg", num(c.site_lat_deg)},
        {"site_lon_deg", num(c.site_lon_deg)},
        {"site_alt_m", num(c.site_alt_m)},
        {"receiver_height_m", num(c.receiver_height_m)},
        {"scene",
         [&](const std::string& k, const std::string& v) {
             choice(k, v, {"city", "ground", "file"});
             c.scene = v == "city" ? SceneKind::City : (v == "ground" ? SceneKind::Ground : SceneKind::File);
         }},
        {"scene_file", path(c.scene_file)},
        {"ground_half_extent_m", num(c.ground_half_extent_m)},
        {"city_grid_nx", integer(c.city_grid_nx)},
        {"city_grid_ny", integer(c.city_grid_ny)},
        {"city_block_w_m", num(c.city_block_w_m)},
        {"city_street_w_m", num(c.city_street_w_m)},
        {"city_height_min_m", num(c.city_height_min_m)},
        {"city_height_max_m", num(c.city_height_max_m)},
        {"city_ground_margin_m", num(c.city_ground_margin_m)},
        {"fc_mhz", num(c.link.fc_mhz)},
        {"pt_dbm", num(c.link.pt_dbm)},
        {"rain_rate_mm_h", num(c.link.rain_rate_mm_h)},
        {"rain_k", num(c.link.rain_k)},
        {"rain_alpha", num(c.link.rain_alpha)},
        {"polarization",
         [&](const std::string& k, const std::string& v) {
             choice(k, v, {"H", "V"});
             c.link.polarization = v == "H" ? Polarization::H : Polarization::V;
         }},
        {"rain_path",
         [&](const std::string& k, const std::string& v) {
             choice(k, v, {"as_printed", "latitude"});
             c.link.rain_path = v == "latitude" ? RainPathModel::LatitudeDependent : RainPathModel::AsPrinted;
         }},
        {"theta_min_deg", num(c.theta_min_deg)},
        {"time_step_s", num(c.time_step_s)},
        {"spacing_m", num(c.spacing_m)},
        {"rx_radius_m", num(c.rx_radius_m)},
        {"max_bounces", integer(c.max_bounces)},
        {"seed", [&c](const std::string& k, const std::string& v) { c.seed = detail::parse_config_integer<std::uint64_t>(k, v); }},
        {"threads", [&c](const std::string& k, const std::string& v) { c.threads = detail::parse_config_integer<unsigned>(k, v); }},
        {"search_step_s", num(c.search_step_s)},
        {"search_horizon_h", num(c.search_horizon_h)},
        {"track_rate",
         [&](const std::string& k, const std::string& v) {
             choice(k, v, {"constant", "instantaneous"});
             c.track_rate = v == "constant" ? TrackRate::Constant : TrackRate::Instantaneous;
         }},
        {"output_dir", path(c.output_dir)},
    };

    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = detail::trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        if (value.empty())
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        it->second(key, value);
    }
    c.link.site_latitude_deg = c.site_lat_deg;
    return c;
}

inline SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    return parse_config(in, std::filesystem::path(path).parent_path());
}

inline Tle select_tle(const std::string& path, const std::string& name)
{
    const auto sets = read_tle_file(path);
    if (sets.empty()) throw Error(ErrorCode::ConfigError, "no element sets in '" + path + "'");
    if (name.empty()) return sets.front();
    for (const auto& t : sets)
        if (t.name == name) return t;
    throw Error(ErrorCode::ConfigError, "no element set named '" + name + "' in '" + path + "'");
}

inline Scene build_scene(const SimConfig& c)
{
    switch (c.scene) {
    case SceneKind::Ground: return make_ground_scene(c.ground_half_extent_m * 1e-3);
    case SceneKind::File: return read_scene_file(c.scene_file);
    case SceneKind::City: break;
    }
    CityParams p;
    p.grid_nx = c.city_grid_nx;
    p.grid_ny = c.city_grid_ny;
    p.block_w_m = c.city_block_w_m;
    p.street_w_m = c.city_street_w_m;
    p.heights = HeightLaw::uniform(c.city_height_min_m, c.city_height_max_m, c.seed);
    p.ground_margin_m = c.city_ground_margin_m;
    return generate_city(p);
}

/// Geometry of one time step, without tracing.
struct StepGeometry {
    Instant t;
    double t_min{0.0};                 ///< minutes since the window start
    double elevation_deg{0.0};         ///< seen from the receiver
    double doppler_closed_form_hz{0.0};
    double doppler_los_hz{0.0};        ///< velocity projected on the satellite -> receiver line
};

struct PassReport {
    std::string satellite;
    PassWindow window;
    std::vector<StepGeometry> steps;
    std::vector<ChannelSnapshot> snapshots; ///< empty when only the steps were computed
};

class PassSimulation {
public:
    explicit PassSimulation(SimConfig cfg)
        : cfg_(std::move(cfg)), tle_((cfg_.validate(), select_tle(cfg_.tle_path, cfg_.tle_name))), sgp_(tle_),
          site_(Geodetic::from_degrees(cfg_.site_lat_deg, cfg_.site_lon_deg, cfg_.site_alt_m)),
          frame_(build_local_frame(site_)), scene_(build_scene(cfg_)),
          receiver_{0.0, 0.0, cfg_.receiver_height_m * 1e-3}
    {
    }

    const SimConfig& config() const { return cfg_; }
    const Tle& tle() const { return tle_; }
    const Sgp4& propagator() const { return sgp_; }
    const Scene& scene() const { return scene_; }
    const LocalFrame& frame() const { return frame_; }
    const Vec3& receiver() const { return receiver_; }

    PassWindow find_window() const
    {
        PassSearch ps;
        ps.theta_min_rad = cfg_.theta_min_deg * kDegToRad;
        ps.step_s = cfg_.search_step_s;
        ps.horizon_h = cfg_.search_horizon_h;
        ps.fc_hz = cfg_.link.fc_mhz * 1e6;
        return find_pass(sgp_, site_, tle_.epoch(), ps);
    }

    /// t_start + k step for k = 0 .. floor(t_du / step).
    std::vector<Instant> step_instants(const PassWindow& w) const
    {
        const double span_s = w.t_end.seconds_since(w.t_start);
        const long n = static_cast<long>(std::floor((span_s + 1e-6) / cfg_.time_step_s));
        std::vector<Instant> out;
        for (long k = 0; k <= n; ++k) out.push_back(w.t_start.plus_seconds(static_cast<double>(k) * cfg_.time_step_s));
        return out;
    }

    StateVector satellite_local(const Instant& t) const { return global_to_local(ecef_state(sgp_, t), frame_); }

    StepGeometry step_geometry(const PassWindow& w, const Instant& t) const
    {
        const StateVector sat = satellite_local(t);
        const Vec3 slant = sat.position - receiver_;
        StepGeometry g;
        g.t = t;
        g.t_min = t.minutes_since(w.t_start);
        // Snap to the nominal step offset so tables do not show quantization of the instant.
        g.t_min = std::round(g.t_min * 60.0 * 1e6) / 60.0 / 1e6;
        g.elevation_deg = std::asin(std::clamp(slant.z / norm(slant), -1.0, 1.0)) * kRadToDeg;
        g.doppler_closed_form_hz = doppler_at(sgp_, w, t, cfg_.track_rate);
        PathRecord los;
        los.aod = normalize(-slant);
        g.doppler_los_hz = per_path_doppler(los, sat.velocity, cfg_.link.fc_mhz * 1e6);
        return g;
    }

    /// Traced and scored paths at `t`; below the receiver's horizon the snapshot is empty.
    ChannelSnapshot snapshot_at(const Instant& t, unsigned trace_threads = 1) const
    {
        const StateVector sat = satellite_local(t);
        const Vec3 slant = sat.position - receiver_;
        ChannelSnapshot s;
        s.t = t;
        const double el = std::asin(std::clamp(slant.z / norm(slant), -1.0, 1.0));
        s.elevation_deg = el * kRadToDeg;
        if (el > 0.0) {
            const LaunchPlane plane = build_launch_plane(sat, scene_, receiver_, cfg_.spacing_m);
            const auto paths = trace(plane, scene_, receiver_, TraceOptions{cfg_.rx_radius_m, cfg_.max_bounces, trace_threads});
            const double fc_hz = cfg_.link.fc_mhz * 1e6;
            for (const auto& p : paths) {
                ScoredPath sp;
                sp.path = p;
                sp.power_dbm = path_power_dbm(p, cfg_.link, el, scene_.materials());
                sp.delay_us = path_delay_us(p);
                sp.doppler_hz = per_path_doppler(p, sat.velocity, fc_hz);
                s.paths.push_back(std::move(sp));
            }
        }
        summarize(s);
        return s;
    }

    /// Runs every step of the window; snapshots are computed in parallel and stored in time order.
    PassReport run(bool trace_paths = true) const
    {
        PassReport r;
        r.satellite = tle_.name.empty() ? std::to_string(tle_.catalog_number) : tle_.name;
        r.window = find_window();
        const auto instants = step_instants(r.window);
        for (const auto& t : instants) r.steps.push_back(step_geometry(r.window, t));
        if (!trace_paths) return r;

        r.snapshots.resize(instants.size());
        std::vector<std::exception_ptr> errors(instants.size());
        std::atomic<std::size_t> next{0};
        const auto work = [&] {
            for (std::size_t i = next++; i < instants.size(); i = next++) {
                try {
                    r.snapshots[i] = snapshot_at(instants[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        unsigned workers = cfg_.threads ? cfg_.threads : std::max(1u, std::thread::hardware_concurrency());
        workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, instants.size())));
        if (workers == 1) {
            work();
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        }
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (!errors[i]) continue;
            try {
                std::rethrow_exception(errors[i]);
            } catch (const Error& e) {
                throw Error(e.code(), "at " + instants[i].iso8601() + ": " + e.message());
            }
        }
        return r;
    }

private:
    SimConfig cfg_;
    Tle tle_;
    Sgp4 sgp_;
    Geodetic site_;
    LocalFrame frame_;
    Scene scene_;
    Vec3 receiver_;
};

// ---------------------------------------------------------------------------
// Output tables. Numbers use 9 significant digits; records end with '\n'.

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace detail {

inline std::string join(std::initializer_list<std::string> cells)
{
    std::string s;
    for (const auto& c : cells) {
        if (!s.empty()) s += ',';
        s += c;
    }
    return s + '\n';
}

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + p.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + p.string() + "'");
}

inline void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");
}

} // namespace detail

inline std::string pass_summary_csv(const PassReport& r)
{
    const PassWindow& w = r.window;
    std::string s = "satellite,t_start_utc,t0_utc,t_end_utc,theta_min_deg,theta_max_deg,gamma_t0_deg,"
                    "t_du_scanned_min,t_du_analytic_min,n_steps\n";
    s += detail::join({r.satellite, w.t_start.iso8601(), w.t0.iso8601(), w.t_end.iso8601(),
                       format_number(w.theta_min * kRadToDeg), format_number(w.theta_max * kRadToDeg),
                       format_number(w.gamma_t0 * kRadToDeg), format_number(w.t_du_min),
                       format_number(w.t_du_analytic_min), std::to_string(r.steps.size())});
    return s;
}

inline std::string steps_csv(const PassReport& r)
{
    std::string s = "t_min,utc,elevation_deg\n";
    for (const auto& g : r.steps) s += detail::join({format_number(g.t_min), g.t.iso8601(), format_number(g.elevation_deg)});
    return s;
}

inline std::string doppler_csv(const PassReport& r)
{
    std::string s = "t_min,doppler_closed_form_hz,doppler_los_hz\n";
    for (const auto& g : r.steps)
        s += detail::join({format_number(g.t_min), format_number(g.doppler_closed_form_hz), format_number(g.doppler_los_hz)});
    return s;
}

inline std::string timeseries_csv(const PassReport& r)
{
    std::string s = "t_min,elevation_deg,n_paths,total_power_dbm,rms_ds_ns,min_doppler_hz,max_doppler_hz\n";
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
        const auto& snap = r.snapshots[k];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        double lo = nan, hi = nan;
        for (const auto& p : snap.paths) {
            lo = std::isnan(lo) ? p.doppler_hz : std::min(lo, p.doppler_hz);
            hi = std::isnan(hi) ? p.doppler_hz : std::max(hi, p.doppler_hz);
        }
        s += detail::join({format_number(r.steps[k].t_min), format_number(snap.elevation_deg),
                           std::to_string(snap.paths.size()), format_number(snap.total_power_dbm),
                           format_number(snap.paths.empty() ? nan : snap.rms_delay_spread_ns), format_number(lo),
                           format_number(hi)});
    }
    return s;
}

inline std::string paths_csv(const PassReport& r)
{
    std::string s = "t_min,path_id,bounce_count,delay_us,power_dbm,doppler_hz\n";
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
        const auto& snap = r.snapshots[k];
        const std::string t = format_number(r.steps[k].t_min);
        for (std::size_t i = 0; i < snap.paths.size(); ++i) {
            const auto& p = snap.paths[i];
            s += detail::join({t, std::to_string(i), std::to_string(p.path.bounce_count), format_number(p.delay_us),
                               format_number(p.power_dbm), format_number(p.doppler_hz)});
        }
    }
    return s;
}

/// Empirical CDF of the RMS delay spread over snapshots that have at least one path.
inline std::string delay_spread_cdf_csv(const PassReport& r)
{
    std::vector<double> ds;
    for (const auto& snap : r.snapshots)
        if (!snap.paths.empty()) ds.push_back(snap.rms_delay_spread_ns);
    std::sort(ds.begin(), ds.end());
    std::string s = "rms_ds_ns,cdf\n";
    for (std::size_t i = 0; i < ds.size(); ++i)
        s += detail::join({format_number(ds[i]), format_number(static_cast<double>(i + 1) / static_cast<double>(ds.size()))});
    return s;
}

/// One line per captured path: t_min, launch index, bounce count, d_near_ground (km), interaction points (km).
inline std::string path_dump_txt(const PassReport& r)
{
    std::string s = "# t_min launch_index bounce_count d_near_ground_km [x y z]...\n";
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
        for (const auto& p : r.snapshots[k].paths) {
            s += format_number(r.steps[k].t_min) + ' ' + std::to_string(p.path.launch_index) + ' ' +
                 std::to_string(p.path.bounce_count) + ' ' + format_number(p.path.d_near_ground);
            for (const auto& it : p.path.interactions)
                s += ' ' + format_number(it.point.x) + ' ' + format_number(it.point.y) + ' ' + format_number(it.point.z);
            s += '\n';
        }
    }
    return s;
}

struct EmitOptions {
    bool steps_only{false};
    bool dump_paths{false};
};

/// Writes the report tables into `dir`; returns the file names written.
inline std::vector<std::string> emit_outputs(const PassReport& r, const std::filesystem::path& dir, const EmitOptions& opt = {})
{
    detail::ensure_directory(dir);
    std::vector<std::pair<std::string, std::string>> files{{"pass_summary.csv", pass_summary_csv(r)}};
    if (opt.steps_only) {
        files.emplace_back("steps.csv", steps_csv(r));
    } else {
        files.emplace_back("timeseries.csv", timeseries_csv(r));
        files.emplace_back("paths.csv", paths_csv(r));
        files.emplace_back("delay_spread_cdf.csv", delay_spread_cdf_csv(r));
        files.emplace_back("doppler.csv", doppler_csv(r));
        if (opt.dump_paths) files.emplace_back("path_dump.txt", path_dump_txt(r));
    }
    std::vector<std::string> names;
    for (const auto& [name, text] : files) {
        detail::write_text(dir / name, text);
        names.push_back(name);
    }
    return names;
}

/// Process exit code for a library error.
inline int exit_code_for(ErrorCode c)
{
    switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::ChecksumMismatch:
    case ErrorCode::MalformedField:
    case ErrorCode::LineLengthError:
    case ErrorCode::DeepSpaceUnsupported:
    case ErrorCode::DecayedOrbit: return 2;
    case ErrorCode::NoPassFound: return 3;
    default: return 4;
    }
}

} // namespace leochan
