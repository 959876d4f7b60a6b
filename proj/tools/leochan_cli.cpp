// Command-line driver: simulate a pass, predict a pass, or trace one instant.

#include "leochan/leochan.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace leochan;

namespace {

int run_simulate(const std::string& config_path, const std::string& out_dir, bool steps_only, bool dump_paths,
                 int threads)
{
    SimConfig cfg = load_config(config_path);
    if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
    const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
    const PassSimulation sim(cfg);
    const PassReport report = sim.run(!steps_only);
    const auto files = emit_outputs(report, dir, EmitOptions{steps_only, dump_paths});
    std::printf("pass %s -> %s, %zu steps, t_du %.3f min (analytic %.3f)\n", report.window.t_start.iso8601().c_str(),
                report.window.t_end.iso8601().c_str(), report.steps.size(), report.window.t_du_min,
                report.window.t_du_analytic_min);
    for (const auto& f : files) std::printf("wrote %s/%s\n", dir.c_str(), f.c_str());
    return 0;
}

Geodetic parse_site(const std::string& text)
{
    std::stringstream ss(text);
    double v[3]{};
    char comma = 0;
    if (!(ss >> v[0] >> comma) || comma != ',' || !(ss >> v[1] >> comma) || comma != ',' || !(ss >> v[2]) ||
        !(ss >> std::ws).eof())
        throw Error(ErrorCode::ConfigError, "--site expects lat_deg,lon_deg,alt_m");
    if (std::fabs(v[0]) > 90.0) throw Error(ErrorCode::ConfigError, "site latitude outside [-90, 90]");
    return Geodetic::from_degrees(v[0], v[1], v[2]);
}

int run_pass(const std::string& tle_path, const std::string& name, const std::string& site_text, double min_elev_deg,
             double step_s, double horizon_h)
{
    const Tle tle = select_tle(tle_path, name);
    const Geodetic site = parse_site(site_text);
    PassSearch ps;
    ps.theta_min_rad = min_elev_deg * kDegToRad;
    ps.step_s = step_s;
    ps.horizon_h = horizon_h;
    const PassWindow w = find_pass(tle, site, ps);
    std::printf("satellite          %s\n", tle.name.empty() ? std::to_string(tle.catalog_number).c_str() : tle.name.c_str());
    std::printf("rise               %s\n", w.t_start.iso8601().c_str());
    std::printf("culmination        %s\n", w.t0.iso8601().c_str());
    std::printf("set                %s\n", w.t_end.iso8601().c_str());
    std::printf("max elevation      %.4f deg\n", w.theta_max * kRadToDeg);
    std::printf("central angle t0   %.4f deg\n", w.gamma_t0 * kRadToDeg);
    std::printf("duration scanned   %.4f min\n", w.t_du_min);
    std::printf("duration analytic  %.4f min\n", w.t_du_analytic_min);
    std::printf("orbit radius t0    %.3f km\n", w.geometry.orbit_radius_km);
    return 0;
}

int run_trace_once(const std::string& config_path, double minute)
{
    const PassSimulation sim(load_config(config_path));
    const PassWindow w = sim.find_window();
    const Instant t = w.t_start.plus_minutes(minute);
    const ChannelSnapshot s = sim.snapshot_at(t, 0);
    std::printf("# %s  elevation %.4f deg  paths %zu  total %s dBm  rms delay spread %s ns\n", t.iso8601().c_str(),
                s.elevation_deg, s.paths.size(), format_number(s.total_power_dbm).c_str(),
                format_number(s.rms_delay_spread_ns).c_str());
    std::printf("path_id,bounce_count,faces,delay_us,power_dbm,doppler_hz,d_near_ground_km\n");
    for (std::size_t i = 0; i < s.paths.size(); ++i) {
        const auto& p = s.paths[i];
        std::string faces;
        for (int f : p.path.face_sequence()) faces += (faces.empty() ? "" : "-") + std::to_string(f);
        std::printf("%zu,%d,%s,%s,%s,%s,%s\n", i, p.path.bounce_count, faces.empty() ? "los" : faces.c_str(),
                    format_number(p.delay_us).c_str(), format_number(p.power_dbm).c_str(),
                    format_number(p.doppler_hz).c_str(), format_number(p.path.d_near_ground).c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"LEO satellite-to-ground channel simulator"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "simulate every time step of the first pass");
    std::string config, out_dir;
    bool steps_only = false, dump_paths = false;
    int threads = -1;
    simulate->add_option("--config", config, "config file")->required();
    simulate->add_option("--out", out_dir, "output directory (overrides output_dir)");
    simulate->add_flag("--steps-only", steps_only, "write the pass summary and step table without tracing");
    simulate->add_flag("--dump-paths", dump_paths, "also write path_dump.txt");
    simulate->add_option("--threads", threads, "worker threads (overrides threads)");

    auto* pass = app.add_subcommand("pass", "print the first pass over a site");
    std::string tle_path, name, site;
    double min_elev = 0.0, step = 1.0, horizon = 48.0;
    pass->add_option("--tle", tle_path, "TLE file")->required();
    pass->add_option("--name", name, "satellite name inside the TLE file");
    pass->add_option("--site", site, "lat_deg,lon_deg,alt_m")->required();
    pass->add_option("--min-elev", min_elev, "visibility threshold, deg");
    pass->add_option("--step", step, "scan step, s");
    pass->add_option("--horizon", horizon, "search horizon, h");

    auto* once = app.add_subcommand("trace-once", "trace a single instant of the pass");
    std::string once_config;
    double minute = 0.0;
    once->add_option("--config", once_config, "config file")->required();
    once->add_option("--at-minute", minute, "minutes after the window start")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(config, out_dir, steps_only, dump_paths, threads);
        if (pass->parsed()) return run_pass(tle_path, name, site, min_elev, step, horizon);
        return run_trace_once(once_config, minute);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
