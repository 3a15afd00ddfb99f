// run.hpp: dicke-lab command implementations and exit-code mapping

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "dicke/classical.hpp"
#include "dicke/cli/config.hpp"
#include "dicke/entanglement.hpp"
#include "dicke/io/format.hpp"
#include "dicke/io/svg.hpp"
#include "dicke/spectra.hpp"
#include "dicke/wigner.hpp"

namespace dicke::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2 };

class output_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunResult {
    std::vector<std::string> files; // written, relative to the output directory
};

namespace detail {

using nlohmann::json;

class Writer {
public:
    Writer(const RunConfig& cfg, RunResult& result) : cfg_(cfg), result_(result), dir_(cfg.out) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_))
            throw output_error("cannot create output directory '" + cfg.out + "'");
    }

    void put(const std::string& name, const std::string& content) {
        try {
            io::write_file((dir_ / name).string(), content);
        } catch (const std::runtime_error& e) {
            throw output_error(e.what());
        }
        result_.files.push_back(name);
    }

    void put_json(const std::string& name, const json& doc) { put(name, doc.dump(2) + "\n"); }

    bool wants(const char* format) const { return cfg_.wants(format); }

private:
    const RunConfig& cfg_;
    RunResult& result_;
    std::filesystem::path dir_;
};

// Coupling on the grid axis at which G+ reaches sqrt(eps omega).
inline double critical_coupling(const RunConfig& cfg) {
    const auto& p = cfg.params;
    const double crit = std::sqrt(p.epsilon * p.omega);
    switch (cfg.mode) {
    case ScanMode::integrable:
    case ScanMode::symmetric: return crit / p.epsilon;
    case ScanMode::custom: return (crit - p.g_prime) / p.epsilon;
    }
    return crit / p.epsilon;
}

inline const char* axis_name(ScanMode mode) { return mode == ScanMode::symmetric ? "lambda_plus" : "lambda"; }

inline json point_json(const PhasePoint& x) { return {{"q1", x.q1}, {"p1", x.p1}, {"q2", x.q2}, {"p2", x.p2}}; }

inline json params_json(const ModelParams& p) {
    return {{"j", p.j},         {"omega", p.omega}, {"epsilon", p.epsilon}, {"g", p.g},
            {"g_prime", p.g_prime}, {"hbar", p.hbar}};
}

inline std::vector<double> scan_grid(const RunConfig& cfg) { return cfg.lambda->grid(); }

inline void scan_entropy(const RunConfig& cfg, Writer& out) {
    const auto grid = scan_grid(cfg);
    ScanOptions opts;
    opts.n_max = cfg.n_max;
    opts.truncation_tol = cfg.truncation_tol;
    const auto scan = entropy_scan(cfg.params, grid, cfg.mode, opts);

    if (out.wants("csv")) {
        io::CsvWriter csv({"lambda", "lambda_plus", "energy", "entropy", "participation", "degenerate",
                           "entropy_right", "block_label"});
        for (const auto& r : scan.rows) {
            csv.cell(r.lambda).cell(r.lambda_plus).cell(r.energy).cell(r.entropy).cell(r.participation);
            csv.cell(r.degenerate).cell(r.entropy_right).cell(r.block_label).end_row();
        }
        out.put("entropy.csv", csv.str());
    }
    if (out.wants("json")) {
        json rows = json::array();
        for (const auto& r : scan.rows)
            rows.push_back({{"lambda", r.lambda},
                            {"lambda_plus", r.lambda_plus},
                            {"energy", r.energy},
                            {"entropy", r.entropy},
                            {"entropy_right", r.entropy_right},
                            {"participation", r.participation},
                            {"degenerate", r.degenerate},
                            {"block_label", r.block_label}});
        out.put_json("entropy.json", {{"mode", std::string(to_string(scan.mode))},
                                      {"n_max", scan.n_max},
                                      {"participation_threshold", scan.participation_threshold},
                                      {"params", params_json(cfg.params)},
                                      {"rows", rows}});
    }
    if (out.wants("svg")) {
        io::Series s;
        s.label = "S = 1 - Tr rho_A^2";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            s.x.push_back(grid[i]);
            s.y.push_back(scan.rows[i].entropy);
        }
        io::LinePlot plot;
        plot.title = "Atomic linear entropy, J = " + io::fixed(cfg.params.j, 1) + " (" +
                     std::string(to_string(cfg.mode)) + ")";
        plot.x_label = cfg.mode == ScanMode::symmetric ? "lambda_plus = (G + G') / eps" : "lambda = G / eps";
        plot.y_label = "S";
        plot.series.push_back(std::move(s));
        plot.markers.push_back({critical_coupling(cfg), "critical coupling"});
        out.put("entropy.svg", io::render_line_plot(plot));
    }
}

inline json fixed_point_json(const FixedPoint& fp, const ModelParams& p) {
    json j{{"kind", std::string(to_string(fp.kind))},
           {"representative", point_json(fp.representative)},
           {"stability", std::string(to_string(fp.stability))},
           {"energy", fp.energy},
           {"residual", norm(eom_rhs(fp.representative, p))}};
    if (fp.kind == FixedPointKind::hopf_circle) {
        j["r1"] = fp.r1;
        j["r2"] = fp.r2;
        j["phase_lock"] = fp.phase_lock;
        j["scaled_radius"] = fp.r1 / std::sqrt(4.0 * p.j);
    }
    const auto report = classify_stability(fp.representative, p);
    j["numeric_stability"] = std::string(to_string(report.label));
    json eig = json::array();
    for (int i = 0; i < 4; ++i) eig.push_back({report.eigenvalues[i].real(), report.eigenvalues[i].imag()});
    j["jacobian_eigenvalues"] = eig;
    return j;
}

inline void fixed_points(const RunConfig& cfg, Writer& out) {
    const auto set = analytic_fixed_points(cfg.params);
    if (out.wants("json")) {
        json list = json::array();
        for (const auto& fp : set) list.push_back(fixed_point_json(fp, cfg.params));
        out.put_json("fixed_points.json", {{"params", params_json(cfg.params)}, {"fixed_points", list}});
    }
    if (out.wants("csv")) {
        io::CsvWriter csv({"kind", "q1", "p1", "q2", "p2", "r1", "r2", "energy", "stability", "numeric_stability"});
        for (const auto& fp : set) {
            const auto& x = fp.representative;
            csv.cell(to_string(fp.kind)).cell(x.q1).cell(x.p1).cell(x.q2).cell(x.p2).cell(fp.r1).cell(fp.r2);
            csv.cell(fp.energy).cell(to_string(fp.stability));
            csv.cell(to_string(classify_stability(x, cfg.params).label)).end_row();
        }
        out.put("fixed_points.csv", csv.str());
    }
}

inline double atomic_radius(const FixedPoint& fp) {
    if (fp.kind == FixedPointKind::hopf_circle) return fp.r1;
    return std::hypot(fp.representative.q1, fp.representative.p1);
}

inline void bifurcation(const RunConfig& cfg, Writer& out) {
    const auto grid = scan_grid(cfg);
    const auto rows = bifurcation_scan(cfg.params, grid, cfg.mode);
    if (out.wants("csv")) {
        io::CsvWriter csv({"coupling", "lambda", "lambda_plus", "kind", "q1", "p1", "q2", "p2", "r1", "r2", "energy",
                           "stability", "numeric_stability"});
        for (const auto& r : rows) {
            const auto& x = r.point.representative;
            csv.cell(r.coupling).cell(r.lambda).cell(r.lambda_plus).cell(to_string(r.point.kind));
            csv.cell(x.q1).cell(x.p1).cell(x.q2).cell(x.p2).cell(r.point.r1).cell(r.point.r2).cell(r.point.energy);
            csv.cell(to_string(r.point.stability)).cell(to_string(r.numeric_stability)).end_row();
        }
        out.put("bifurcation.csv", csv.str());
    }
    if (out.wants("json")) {
        json list = json::array();
        for (const auto& r : rows)
            list.push_back({{"coupling", r.coupling},
                            {"lambda", r.lambda},
                            {"lambda_plus", r.lambda_plus},
                            {"kind", std::string(to_string(r.point.kind))},
                            {"representative", point_json(r.point.representative)},
                            {"r1", r.point.r1},
                            {"r2", r.point.r2},
                            {"energy", r.point.energy},
                            {"stability", std::string(to_string(r.point.stability))},
                            {"numeric_stability", std::string(to_string(r.numeric_stability))}});
        out.put_json("bifurcation.json", {{"mode", std::string(to_string(cfg.mode))},
                                          {"params", params_json(cfg.params)},
                                          {"rows", list}});
    }
    if (out.wants("svg")) {
        const std::pair<FixedPointKind, const char*> kinds[] = {{FixedPointKind::trivial, "#444444"},
                                                                {FixedPointKind::hopf_circle, "#d62728"},
                                                                {FixedPointKind::pitchfork_I, "#1f77b4"},
                                                                {FixedPointKind::pitchfork_II, "#2ca02c"}};
        io::LinePlot plot;
        plot.title = "Classical equilibria, J = " + io::fixed(cfg.params.j, 1) + " (" +
                     std::string(to_string(cfg.mode)) + ")";
        plot.x_label = cfg.mode == ScanMode::symmetric ? "lambda_plus" : "lambda";
        plot.y_label = "atomic radius sqrt(q1^2 + p1^2)";
        plot.legend_left = true;
        for (const auto& [kind, color] : kinds) {
            io::Series s;
            s.label = std::string(to_string(kind));
            s.color = color;
            s.markers = true;
            for (const auto& r : rows)
                if (r.point.kind == kind) {
                    s.x.push_back(r.coupling);
                    s.y.push_back(atomic_radius(r.point));
                }
            if (!s.x.empty()) plot.series.push_back(std::move(s));
        }
        plot.markers.push_back({critical_coupling(cfg), "critical coupling"});
        out.put("bifurcation.svg", io::render_line_plot(plot));
    }
}

struct WignerRun {
    EigenResult ground;
    WignerGrid grid;
    FixedPointSet fixed_points;
};

inline WignerRun compute_wigner(const RunConfig& cfg) {
    const auto& p = cfg.params;
    const int n_max = cfg.n_max ? *cfg.n_max
                                : converge_truncation(p, ScanMode::custom, p.lambda(), cfg.truncation_tol);
    WignerRun run;
    run.ground = solve_ground_state(p, n_max);
    run.grid = evaluate_wigner_plane(wigner_decomposition(run.ground), {cfg.grid_size, 0.999});
    run.fixed_points = analytic_fixed_points(p);
    return run;
}

inline std::vector<io::Overlay> classical_overlays(const FixedPointSet& set, double j) {
    std::vector<io::Overlay> out;
    const double scale = 1.0 / std::sqrt(4.0 * j);
    bool labelled = false;
    for (const auto& fp : set) {
        if (fp.kind == FixedPointKind::hopf_circle) {
            io::Overlay o;
            o.radius = fp.r1 * scale;
            o.color = "#2ca02c";
            o.dashed = true;
            o.label = "classical minimum-energy circle, r = " + io::fixed(o.radius, 4);
            out.push_back(o);
        } else if (fp.kind != FixedPointKind::trivial) {
            io::Overlay o;
            o.shape = io::Overlay::Shape::point;
            o.x = fp.representative.q1 * scale;
            o.y = fp.representative.p1 * scale;
            o.color = "#2ca02c";
            if (!labelled) o.label = "classical fixed points";
            labelled = true;
            out.push_back(o);
        }
    }
    return out;
}

inline void wigner(const RunConfig& cfg, Writer& out, const WignerRun& run) {
    const auto& grid = run.grid;
    const auto rho = reduced_atomic_dm(run.ground);
    const auto& decomp = grid.decomposition;
    const auto area = half_height_area(grid, cfg.atom_count(), cfg.params.hbar);
    const auto neg = negativity_volume(grid);
    const auto peaks = local_maxima(grid);
    std::optional<double> ridge;
    try {
        ridge = ridge_radius(grid);
    } catch (const invalid_input&) {
        // asymmetric state: the peak list describes it instead
    }
    std::optional<double> classical_radius;
    for (const auto& fp : run.fixed_points)
        if (fp.kind == FixedPointKind::hopf_circle) classical_radius = fp.r1 / std::sqrt(4.0 * cfg.params.j);

    if (out.wants("csv")) {
        io::CsvWriter csv({"x", "y", "w"});
        for (int iy = 0; iy < grid.n(); ++iy)
            for (int ix = 0; ix < grid.n(); ++ix)
                if (grid.inside(ix, iy)) csv.cell(grid.x(ix)).cell(grid.y(iy)).cell(grid.at(ix, iy)).end_row();
        out.put("wigner.csv", csv.str());
    }
    if (out.wants("json")) {
        json list = json::array();
        for (const auto& m : peaks) list.push_back({{"x", m.x}, {"y", m.y}, {"value", m.value}, {"cells", m.cells}});
        out.put_json("wigner.json",
                     {{"params", params_json(cfg.params)},
                      {"n_max", run.ground.basis->n_max()},
                      {"grid_size", grid.n()},
                      {"grid_radius", grid.spec.radius},
                      {"purity", linear_entropy(rho).purity},
                      {"unit_integral", unit_integral(decomp)},
                      {"squared_integral", squared_integral(decomp)},
                      {"grid_integral", grid_integral(grid)},
                      {"max_value", grid.max_value()},
                      {"half_height_level", area.threshold},
                      {"half_height_area", area.area},
                      {"atoms", cfg.atom_count()},
                      {"half_height_area_per_atom", area.per_atom},
                      {"negative_volume", neg.volume},
                      {"negative_area", neg.negative_area},
                      {"min_value", neg.min_value},
                      {"local_maxima", list},
                      {"ridge_radius", ridge ? json(*ridge) : json(nullptr)},
                      {"classical_radius", classical_radius ? json(*classical_radius) : json(nullptr)}});
    }
    if (out.wants("svg")) {
        io::HeatmapPlot plot;
        plot.title = "Atomic Wigner function, J = " + io::fixed(cfg.params.j, 1) + ", G = " +
                     io::fixed(cfg.params.g, 3) + ", G' = " + io::fixed(cfg.params.g_prime, 3);
        plot.overlays = classical_overlays(run.fixed_points, cfg.params.j);
        if (ridge && *ridge > 0.0) {
            io::Overlay o;
            o.radius = *ridge;
            o.color = "#9467bd";
            o.label = "Wigner ridge, r = " + io::fixed(*ridge, 4);
            plot.overlays.push_back(o);
        }
        out.put("wigner.svg", io::render_wigner_heatmap(grid, plot));
    }
}

struct TrajectoryRun {
    std::vector<std::string> kinds;
    std::vector<Trajectory> trajectories;
    double energy{0.0};
};

inline TrajectoryRun compute_trajectories(const RunConfig& cfg) {
    const auto& p = cfg.params;
    const auto set = analytic_fixed_points(p);
    std::vector<FixedPoint> seeds;
    for (const auto& fp : set)
        if (fp.kind != FixedPointKind::trivial) seeds.push_back(fp);
    if (seeds.empty()) seeds.push_back(set.front());
    double lowest = seeds.front().energy;
    for (const auto& fp : seeds) lowest = std::min(lowest, fp.energy);

    TrajectoryRun run;
    run.energy = cfg.energy ? *cfg.energy : lowest + 0.5;
    TrajectoryOptions opts;
    opts.sample_dt = cfg.sample_dt;
    opts.max_energy_drift = std::max(1e-8, 100.0 * cfg.tol);
    for (const auto& fp : seeds) {
        const auto start = seed_on_energy_shell(fp, p, run.energy);
        run.kinds.emplace_back(to_string(fp.kind));
        run.trajectories.push_back(integrate_trajectory(start, p, cfg.t_final, cfg.tol, opts));
    }
    return run;
}

inline std::vector<io::Overlay> trajectory_overlays(const TrajectoryRun& run, double j) {
    const char* colors[] = {"#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
    const double scale = 1.0 / std::sqrt(4.0 * j);
    std::vector<io::Overlay> out;
    for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
        io::Overlay o;
        o.shape = io::Overlay::Shape::path;
        o.color = colors[i % 4];
        o.label = "trajectory " + std::to_string(i) + " (" + run.kinds[i] + " seed, E = " + io::fixed(run.energy, 3) + ")";
        for (const auto& x : run.trajectories[i].samples) o.path.emplace_back(x.q1 * scale, x.p1 * scale);
        out.push_back(std::move(o));
    }
    return out;
}

inline void trajectory(const RunConfig& cfg, Writer& out, const TrajectoryRun& run) {
    if (out.wants("csv")) {
        io::CsvWriter csv({"trajectory", "seed_kind", "t", "q1", "p1", "q2", "p2", "energy"});
        for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
            const auto& tr = run.trajectories[i];
            for (std::size_t k = 0; k < tr.samples.size(); ++k) {
                const auto& x = tr.samples[k];
                csv.cell(i).cell(run.kinds[i]).cell(tr.times[k]).cell(x.q1).cell(x.p1).cell(x.q2).cell(x.p2);
                csv.cell(classical_energy(x, cfg.params)).end_row();
            }
        }
        out.put("trajectory.csv", csv.str());
    }
    if (out.wants("json")) {
        json list = json::array();
        for (std::size_t i = 0; i < run.trajectories.size(); ++i) {
            const auto& tr = run.trajectories[i];
            list.push_back({{"seed_kind", run.kinds[i]},
                            {"start", point_json(tr.samples.front())},
                            {"end", point_json(tr.samples.back())},
                            {"samples", tr.samples.size()},
                            {"energy_drift", tr.energy_drift},
                            {"steps", tr.steps},
                            {"rejected_steps", tr.rejected}});
        }
        out.put_json("trajectory.json", {{"params", params_json(cfg.params)},
                                         {"energy", run.energy},
                                         {"t_final", cfg.t_final},
                                         {"tol", cfg.tol},
                                         {"trajectories", list}});
    }
    if (out.wants("svg")) {
        io::LinePlot plot;
        plot.title = "Classical trajectories projected on the atomic plane, E = " + io::fixed(run.energy, 3);
        plot.x_label = "q1 / sqrt(4J)";
        plot.y_label = "p1 / sqrt(4J)";
        plot.width = plot.height = 600;
        for (const auto& o : trajectory_overlays(run, cfg.params.j)) {
            io::Series s;
            s.label = o.label;
            s.color = o.color;
            for (const auto& [x, y] : o.path) {
                s.x.push_back(x);
                s.y.push_back(y);
            }
            plot.series.push_back(std::move(s));
        }
        out.put("trajectory.svg", io::render_line_plot(plot));
    }
}

inline void report(const RunConfig& cfg, Writer& out) {
    if (cfg.lambda) {
        scan_entropy(cfg, out);
        bifurcation(cfg, out);
    }
    fixed_points(cfg, out);
    const auto w = compute_wigner(cfg);
    wigner(cfg, out, w);
    const auto t = compute_trajectories(cfg);
    trajectory(cfg, out, t);
    if (out.wants("svg")) {
        io::HeatmapPlot plot;
        plot.title = "Wigner function with classical trajectories, J = " + io::fixed(cfg.params.j, 1);
        plot.overlays = classical_overlays(w.fixed_points, cfg.params.j);
        for (auto& o : trajectory_overlays(t, cfg.params.j)) plot.overlays.push_back(std::move(o));
        out.put("wigner_trajectories.svg", io::render_wigner_heatmap(w.grid, plot));
    }
}

} // namespace detail

// Executes one resolved configuration; the resolved config is written first as config.json.
inline RunResult run(const RunConfig& cfg) {
    cfg.validate();
    RunResult result;
    detail::Writer out(cfg, result);
    out.put_json("config.json", cfg.to_json());
    const auto& c = cfg.command;
    if (c == "scan-entropy") detail::scan_entropy(cfg, out);
    else if (c == "fixed-points") detail::fixed_points(cfg, out);
    else if (c == "bifurcation") detail::bifurcation(cfg, out);
    else if (c == "wigner") detail::wigner(cfg, out, detail::compute_wigner(cfg));
    else if (c == "trajectory") detail::trajectory(cfg, out, detail::compute_trajectories(cfg));
    else if (c == "report") detail::report(cfg, out);
    return result;
}

// Full command-line entry point: 0 success, 1 configuration error, 2 numerical failure.
inline int main_entry(int argc, const char* const* argv, std::ostream& err = std::cerr) {
    CLI::App app{"dicke-lab: Dicke-model ground states, classical limit and atomic Wigner functions"};
    FlagValues flags;
    register_flags(app, flags);
    RunConfig cfg;
    try {
        app.parse(argc, argv);
        cfg = resolve(app, flags);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "dicke-lab: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        err << "dicke-lab: config error: " << e.what() << "\n";
        return exit_config;
    }

    try {
        run(cfg);
    } catch (const output_error& e) {
        err << "dicke-lab " << cfg.command << ": " << e.what() << "\n";
        return exit_config;
    } catch (const invalid_input& e) {
        err << "dicke-lab " << cfg.command << ": invalid input: " << e.what() << "\n";
        return exit_config;
    } catch (const convergence_error& e) {
        err << "dicke-lab " << cfg.command << ": did not converge: " << e.what() << "\n";
        return exit_numerical;
    } catch (const integration_error& e) {
        err << "dicke-lab " << cfg.command << ": integration failed: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "dicke-lab " << cfg.command << ": numerical error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}

} // namespace dicke::cli
