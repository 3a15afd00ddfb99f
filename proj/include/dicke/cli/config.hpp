// config.hpp: run configuration for dicke-lab: JSON file + command-line flags

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dicke/params.hpp"

namespace dicke::cli {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"scan-entropy", "fixed-points", "bifurcation",
                                                "wigner",       "trajectory",   "report"};
    return names;
}

inline const std::vector<std::string>& known_formats() {
    static const std::vector<std::string> names{"csv", "json", "svg"};
    return names;
}

struct LambdaRange {
    double start{0.0}, end{0.0}, step{0.0};

    std::vector<double> grid() const { return make_grid(start, end, step); }
    std::string str() const;
};

inline std::string format_number(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(17);
    s << v;
    return s.str();
}

inline std::string LambdaRange::str() const {
    return format_number(start) + ":" + format_number(end) + ":" + format_number(step);
}

inline LambdaRange parse_lambda_range(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw config_error("lambda: expected START:END:STEP, got '" + text + "'");
    double v[3];
    for (int i = 0; i < 3; ++i) {
        std::istringstream in(parts[static_cast<std::size_t>(i)]);
        in.imbue(std::locale::classic());
        if (!(in >> v[i]) || !(in >> std::ws).eof())
            throw config_error("lambda: '" + parts[static_cast<std::size_t>(i)] + "' is not a number");
    }
    LambdaRange r{v[0], v[1], v[2]};
    if (!(r.step > 0.0)) throw config_error("lambda: step must be > 0");
    if (!(r.end >= r.start)) throw config_error("lambda: END must be >= START");
    if (!(r.start >= 0.0)) throw config_error("lambda: START must be >= 0");
    return r;
}

inline std::vector<std::string> split_formats(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    return out;
}

struct RunConfig {
    std::string command;
    ModelParams params;
    ScanMode mode{ScanMode::integrable};
    std::optional<LambdaRange> lambda;
    std::optional<int> n_max;
    std::string out{"dicke-out"};
    std::vector<std::string> formats{"csv", "json", "svg"};
    int grid_size{512};
    std::optional<int> atoms;        // divisor of the half-height area; 2J when unset
    std::optional<double> energy;    // trajectory energy; fixed-point energy + 0.5 when unset
    double t_final{100.0};
    double tol{1e-10};
    double sample_dt{0.05};
    double truncation_tol{1e-10};

    bool wants(const std::string& format) const {
        return std::find(formats.begin(), formats.end(), format) != formats.end();
    }

    int atom_count() const { return atoms ? *atoms : static_cast<int>(std::lround(2.0 * params.j)); }

    void validate() const {
        if (command.empty()) throw config_error("missing command (one of scan-entropy, fixed-points, bifurcation, "
                                                "wigner, trajectory, report)");
        if (std::find(commands().begin(), commands().end(), command) == commands().end())
            throw config_error("unknown command '" + command + "'");
        params.validate();
        if ((command == "scan-entropy" || command == "bifurcation") && !lambda)
            throw config_error(command + ": missing required field 'lambda' (START:END:STEP)");
        if (lambda) lambda->grid();
        if (n_max && *n_max < 0) throw config_error("n_max must be >= 0");
        if (out.empty()) throw config_error("out must be a directory path");
        if (formats.empty()) throw config_error("formats must not be empty");
        for (const auto& f : formats)
            if (std::find(known_formats().begin(), known_formats().end(), f) == known_formats().end())
                throw config_error("unknown format '" + f + "' (expected csv, json, svg)");
        if (grid_size < 3 || grid_size > 4096) throw config_error("grid_size must lie in [3, 4096]");
        if (atoms && *atoms < 1) throw config_error("atoms must be >= 1");
        if (!(t_final > 0.0)) throw config_error("t_final must be > 0");
        if (!(tol > 0.0)) throw config_error("tol must be > 0");
        if (!(sample_dt > 0.0)) throw config_error("sample_dt must be > 0");
        if (!(truncation_tol > 0.0)) throw config_error("truncation_tol must be > 0");
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["j"] = params.j;
        j["omega"] = params.omega;
        j["epsilon"] = params.epsilon;
        j["g"] = params.g;
        j["g_prime"] = params.g_prime;
        j["hbar"] = params.hbar;
        j["mode"] = std::string(to_string(mode));
        j["lambda"] = lambda ? nlohmann::json(lambda->str()) : nlohmann::json(nullptr);
        j["n_max"] = n_max ? nlohmann::json(*n_max) : nlohmann::json(nullptr);
        j["out"] = out;
        j["formats"] = formats;
        j["grid_size"] = grid_size;
        j["atoms"] = atom_count();
        j["energy"] = energy ? nlohmann::json(*energy) : nlohmann::json(nullptr);
        j["t_final"] = t_final;
        j["tol"] = tol;
        j["sample_dt"] = sample_dt;
        j["truncation_tol"] = truncation_tol;
        return j;
    }
};

namespace detail {

inline double number(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw config_error("config key '" + key + "' must be a number");
    return v.get<double>();
}

inline int integer(const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) throw config_error("config key '" + key + "' must be an integer");
    return v.get<int>();
}

inline std::string text(const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) throw config_error("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace detail

// Applies a JSON object onto `cfg`. Unknown keys are rejected by name; null leaves a field unset.
inline void apply_json(RunConfig& cfg, const nlohmann::json& doc) {
    using detail::integer;
    using detail::number;
    using detail::text;
    if (!doc.is_object()) throw config_error("config file must contain a JSON object");
    for (const auto& [key, v] : doc.items()) {
        if (key == "command") cfg.command = text(v, key);
        else if (key == "j") cfg.params.j = number(v, key);
        else if (key == "omega") cfg.params.omega = number(v, key);
        else if (key == "epsilon") cfg.params.epsilon = number(v, key);
        else if (key == "g") cfg.params.g = number(v, key);
        else if (key == "g_prime") cfg.params.g_prime = number(v, key);
        else if (key == "hbar") cfg.params.hbar = number(v, key);
        else if (key == "mode") cfg.mode = parse_scan_mode(text(v, key));
        else if (key == "lambda") {
            if (v.is_null()) cfg.lambda.reset();
            else if (v.is_string()) cfg.lambda = parse_lambda_range(v.get<std::string>());
            else if (v.is_object()) {
                for (const auto& [k2, _] : v.items())
                    if (k2 != "start" && k2 != "end" && k2 != "step")
                        throw config_error("unknown key 'lambda." + k2 + "' in config");
                if (!v.contains("start") || !v.contains("end") || !v.contains("step"))
                    throw config_error("config key 'lambda' needs start, end and step");
                cfg.lambda = parse_lambda_range(format_number(number(v["start"], "lambda.start")) + ":" +
                                                format_number(number(v["end"], "lambda.end")) + ":" +
                                                format_number(number(v["step"], "lambda.step")));
            } else {
                throw config_error("config key 'lambda' must be \"START:END:STEP\" or an object");
            }
        } else if (key == "n_max") {
            if (v.is_null()) cfg.n_max.reset();
            else cfg.n_max = integer(v, key);
        } else if (key == "out") cfg.out = text(v, key);
        else if (key == "formats") {
            if (v.is_string()) cfg.formats = split_formats(v.get<std::string>());
            else if (v.is_array()) {
                cfg.formats.clear();
                for (const auto& f : v) cfg.formats.push_back(text(f, "formats[]"));
            } else {
                throw config_error("config key 'formats' must be a list or a comma-separated string");
            }
        } else if (key == "grid_size") cfg.grid_size = integer(v, key);
        else if (key == "atoms") {
            if (v.is_null()) cfg.atoms.reset();
            else cfg.atoms = integer(v, key);
        } else if (key == "energy") {
            if (v.is_null()) cfg.energy.reset();
            else cfg.energy = number(v, key);
        } else if (key == "t_final") cfg.t_final = number(v, key);
        else if (key == "tol") cfg.tol = number(v, key);
        else if (key == "sample_dt") cfg.sample_dt = number(v, key);
        else if (key == "truncation_tol") cfg.truncation_tol = number(v, key);
        else throw config_error("unknown key '" + key + "' in config");
    }
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read config file '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config file '" + path + "' is not valid JSON: " + e.what());
    }
}

// Command-line flags, each remembered only when given so it can override the file.
struct FlagValues {
    std::string command, config, mode, lambda, out, format;
    double j{}, omega{}, epsilon{}, g{}, g_prime{}, hbar{}, energy{}, t_final{}, tol{}, sample_dt{},
        truncation_tol{};
    int n_max{}, grid_size{}, atoms{};
};

inline void register_flags(CLI::App& app, FlagValues& f) {
    app.add_option("command", f.command, "scan-entropy | fixed-points | bifurcation | wigner | trajectory | report");
    app.add_option("--config", f.config, "JSON configuration file");
    app.add_option("--j", f.j, "collective spin J = N/2");
    app.add_option("--omega", f.omega, "field frequency");
    app.add_option("--epsilon", f.epsilon, "atomic level splitting");
    app.add_option("--g", f.g, "rotating coupling G");
    app.add_option("--g-prime", f.g_prime, "counter-rotating coupling G'");
    app.add_option("--hbar", f.hbar, "reduced Planck constant");
    app.add_option("--mode", f.mode, "integrable | symmetric | custom");
    app.add_option("--lambda", f.lambda, "coupling grid START:END:STEP");
    app.add_option("--n-max", f.n_max, "photon-number truncation (skips convergence)");
    app.add_option("--out", f.out, "output directory");
    app.add_option("--format", f.format, "comma-separated subset of csv,json,svg");
    app.add_option("--grid-size", f.grid_size, "Wigner grid cells per side");
    app.add_option("--atoms", f.atoms, "atom count dividing the half-height area (default 2J)");
    app.add_option("--energy", f.energy, "trajectory energy");
    app.add_option("--t-final", f.t_final, "trajectory length");
    app.add_option("--tol", f.tol, "integrator tolerance");
    app.add_option("--sample-dt", f.sample_dt, "trajectory output stride");
    app.add_option("--truncation-tol", f.truncation_tol, "truncation convergence tolerance");
}

inline RunConfig resolve(const CLI::App& app, const FlagValues& f) {
    RunConfig cfg;
    if (app.count("--config")) apply_json(cfg, read_json_file(f.config));
    if (app.count("command")) cfg.command = f.command;
    if (app.count("--j")) cfg.params.j = f.j;
    if (app.count("--omega")) cfg.params.omega = f.omega;
    if (app.count("--epsilon")) cfg.params.epsilon = f.epsilon;
    if (app.count("--g")) cfg.params.g = f.g;
    if (app.count("--g-prime")) cfg.params.g_prime = f.g_prime;
    if (app.count("--hbar")) cfg.params.hbar = f.hbar;
    if (app.count("--mode")) cfg.mode = parse_scan_mode(f.mode);
    if (app.count("--lambda")) cfg.lambda = parse_lambda_range(f.lambda);
    if (app.count("--n-max")) cfg.n_max = f.n_max;
    if (app.count("--out")) cfg.out = f.out;
    if (app.count("--format")) cfg.formats = split_formats(f.format);
    if (app.count("--grid-size")) cfg.grid_size = f.grid_size;
    if (app.count("--atoms")) cfg.atoms = f.atoms;
    if (app.count("--energy")) cfg.energy = f.energy;
    if (app.count("--t-final")) cfg.t_final = f.t_final;
    if (app.count("--tol")) cfg.tol = f.tol;
    if (app.count("--sample-dt")) cfg.sample_dt = f.sample_dt;
    if (app.count("--truncation-tol")) cfg.truncation_tol = f.truncation_tol;
    cfg.validate();
    return cfg;
}

// Parses `args` (without the program name). CLI11 parse errors propagate as CLI::ParseError.
inline RunConfig load_config(std::vector<std::string> args) {
    CLI::App app{"dicke-lab"};
    FlagValues f;
    register_flags(app, f);
    std::reverse(args.begin(), args.end()); // CLI11 consumes the vector from the back
    app.parse(args);
    return resolve(app, f);
}

} // namespace dicke::cli
