// commands.cpp

#include "ancilla/commands.hpp"

#include "ancilla/csv.hpp"
#include "ancilla/oracles.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

namespace ancilla::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Flag values kept as text and routed through apply_setting, so flags and
// config files share one parser and one set of diagnostics.
struct Overrides {
    std::string config_path;
    std::vector<std::tuple<std::string, std::string, std::string>> table;   // flag, section, key
    std::map<std::string, std::string> values;                              // flag -> raw text

    void add(CLI::App* app, const std::string& flag, const std::string& section, const std::string& key,
             const std::string& help) {
        table.emplace_back(flag, section, key);
        app->add_option("--" + flag, values[flag], help);
    }

    RunConfig resolve(const CLI::App* app) const {
        RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
        apply_environment(c);
        for (const auto& [flag, section, key] : table) {
            if (app->count("--" + flag) == 0) continue;
            try {
                apply_setting(c, section, key, values.at(flag));
            } catch (const ConfigError& e) {
                throw ConfigError("--" + flag + ": " + e.what());
            }
        }
        c.validate();
        return c;
    }
};

void add_model_flags(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "config file ([model]/[grid]/[sweep]/[output]/[numerics])");
    o.add(app, "L", "model", "L", "number of spins");
    o.add(app, "q", "model", "q", "boson truncation dimension");
    o.add(app, "J", "model", "J", "Ising exchange (signed)");
    o.add(app, "h", "model", "h", "transverse field");
    o.add(app, "omega-c", "model", "omega_c", "ancilla level splitting");
    o.add(app, "lambda2-over-omega", "model", "lambda2_over_omega", "coupling as lambda^2/omega_c");
    o.add(app, "boundary", "model", "boundary", "periodic | open");
    o.add(app, "t-start", "grid", "t_start", "first sample time");
    o.add(app, "t-end", "grid", "t_end", "last sample time");
    o.add(app, "dt", "grid", "dt", "sample spacing");
    o.add(app, "avg-from", "grid", "avg_from", "start of the averaging/fit window");
    o.add(app, "avg-to", "grid", "avg_to", "end of the averaging/fit window");
    o.add(app, "initial", "sweep", "initial_state", "polarized | x_polarized | spin_ground_state");
    o.add(app, "mi-convention", "output", "mi_convention", "eq2 | half");
    o.add(app, "metrics", "output", "metrics", "comma-separated columns, or 'all'");
    o.add(app, "out", "output", "dir", "output directory");
    o.add(app, "workers", "numerics", "workers", "worker threads (0 = hardware)");
    o.add(app, "dense-threshold", "numerics", "dense_threshold", "largest dimension propagated densely");
    o.add(app, "krylov-dim", "numerics", "krylov_max_dim", "maximal Krylov dimension");
}

std::string provenance_line(const RunConfig& c, const QuenchRecord& r) {
    return std::string("ancilla-sim ") + kCodeVersion + " config_hash=" + digest_hex(serialize(c)) +
           " record_hash=" + r.config_hash;
}

json params_json(const ModelParams& p) {
    return json{{"L", p.L},
                {"q", p.q},
                {"J", p.J},
                {"h", p.h},
                {"omega_c", p.omega_c},
                {"lambda", p.lambda},
                {"lambda2_over_omega", p.lambda2_over_omega()},
                {"boundary", p.periodic ? "periodic" : "open"}};
}

json sidecar(const RunConfig& c, const QuenchRecord& r, double wall_seconds, const std::vector<std::string>& cols) {
    json j;
    j["config_hash"] = digest_hex(serialize(c));
    j["record_hash"] = r.config_hash;
    j["code_version"] = r.code_version;
    j["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION);
    j["wall_time_seconds"] = wall_seconds;
    j["params"] = params_json(r.params);
    j["grid"] = json{{"t_start", r.grid.t_start}, {"t_end", r.grid.t_end}, {"dt", r.grid.sample_dt}};
    j["initial_state"] = std::string(initial_state_name(r.initial));
    if (r.initial == InitialState::spin_ground_state) {
        j["pre_quench"] = json{{"J", c.pre_J.value_or(r.params.J)}, {"h", c.pre_h.value_or(r.params.h)}};
        j["ground_state_tie_break"] = "projection of |up...up>_z onto the degenerate ground space";
    }
    j["mi_convention"] = std::string(mi_convention_name(c.mi));
    j["columns"] = cols;
    j["samples"] = r.samples.size();
    j["max_norm_error"] = r.max_norm_error();
    json warnings = json::array();
    if (below_boson_regime(r.params))
        warnings.push_back("q <= L: results may not be converged in the boson dimension");
    j["warnings"] = warnings;
    j["config"] = serialize(c);
    return j;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");
}

void write_point(const RunConfig& c, const QuenchRecord& r, const std::string& prefix, double wall_seconds,
                 std::ostream& out) {
    const auto cols = csv::select_columns(c.metrics);
    const std::string base = (fs::path(c.out_dir) / (prefix + point_stem(r.params))).string();
    csv::write_file(base + ".csv", csv::metric_table(r.samples, cols, {provenance_line(c, r)}));
    csv::write_file(base + ".json", sidecar(c, r, wall_seconds, cols).dump(2) + "\n");
    out << base << ".csv\n";
}

int cmd_single(const RunConfig& c, InitialState init, const std::string& prefix, std::ostream& out,
               std::ostream& err) {
    ensure_dir(c.out_dir);
    const ModelParams p = c.params();
    if (below_boson_regime(p) && p.lambda != 0.0)
        err << "warning: q = " << p.q << " <= L = " << p.L << "; boson truncation may not be converged\n";
    const auto t0 = std::chrono::steady_clock::now();
    const QuenchRecord r = run_quench(p, c.grid, init, c.quench_options());
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_point(c, r, prefix, wall, out);
    return kOk;
}

std::string fit_cell(const MELFit& f, bool alpha) {
    if (!f.defined) return "nan";
    return csv::format_number(alpha ? f.alpha : f.r_squared);
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
    ensure_dir(c.out_dir);
    const SweepSpec spec = c.sweep_spec();
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = run_sweep(spec, [&](std::size_t done, std::size_t total, const QuenchRecord& r) {
        err << "[" << done << "/" << total << "] " << point_stem(r.params) << "\n";
    });
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string table = "# ancilla-sim " + std::string(kCodeVersion) + " config_hash=" + digest_hex(serialize(c)) + "\n";
    table += "L,h,lambda2_over_omega";
    for (const auto& f : kMetricFields)
        if (std::string_view(f.name) != "t") table += std::string(",") + f.name;
    table += ",alpha_x,r2_x,alpha_z,r2_z\n";
    json points = json::array();
    for (const auto& r : records) {
        write_point(c, r, "sweep_", wall / static_cast<double>(records.size()), out);
        const AggregateRow row = aggregate(r, c.average);
        table += std::to_string(r.params.L) + "," + csv::format_number(r.params.h) + "," +
                 csv::format_number(r.params.lambda2_over_omega());
        for (const auto& f : kMetricFields)
            if (std::string_view(f.name) != "t") table += "," + csv::format_number(row.average.*f.member);
        table += "," + fit_cell(row.fit_x, true) + "," + fit_cell(row.fit_x, false) + "," + fit_cell(row.fit_z, true) +
                 "," + fit_cell(row.fit_z, false) + "\n";
        points.push_back(json{{"stem", point_stem(r.params)}, {"record_hash", r.config_hash}});
    }
    const std::string base = (fs::path(c.out_dir) / "aggregate").string();
    csv::write_file(base + ".csv", table);
    json meta;
    meta["config_hash"] = digest_hex(serialize(c));
    meta["code_version"] = kCodeVersion;
    meta["wall_time_seconds"] = wall;
    meta["average_window"] = json{{"t0", c.average.t0}, {"t1", c.average.t1}};
    meta["points"] = points;
    meta["config"] = serialize(c);
    csv::write_file(base + ".json", meta.dump(2) + "\n");
    out << base << ".csv\n";
    return kOk;
}

void print_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? " " : "") << std::left << std::setw(18) << cells[i];
    out << "\n";
}

struct OracleArgs {
    std::string kind;
    double h = 1.0, J = 1.0, k = 0.0, lambda = 0.0, omega = 0.5, m = 0.0, t = 0.0;
    int L = 8;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out) {
    using csv::format_number;
    if (a.kind == "dispersion") {
        const auto d = oracles::dispersion_point(a.k, a.h, a.J);
        print_row(out, {"k", "h", "J", "epsilon", "velocity"});
        print_row(out, {format_number(a.k), format_number(a.h), format_number(a.J), format_number(d.epsilon),
                        format_number(d.velocity)});
    } else if (a.kind == "vmax") {
        print_row(out, {"h", "J", "v_max"});
        print_row(out, {format_number(a.h), format_number(a.J), format_number(oracles::max_group_velocity(a.h, a.J))});
    } else if (a.kind == "gs-energy") {
        const double e = oracles::tfic_ground_energy(a.L, a.h, a.J);
        print_row(out, {"L", "h", "J", "E0", "E0_per_site"});
        print_row(out, {std::to_string(a.L), format_number(a.h), format_number(a.J), format_number(e),
                        format_number(e / a.L)});
    } else if (a.kind == "displaced-n") {
        ModelParams p;
        p.L = a.L;
        p.lambda = a.lambda;
        p.omega_c = a.omega;
        print_row(out, {"L", "lambda", "omega_c", "m", "t", "n_boson"});
        print_row(out, {std::to_string(a.L), format_number(a.lambda), format_number(a.omega), format_number(a.m),
                        format_number(a.t), format_number(oracles::displaced_occupation(a.t, a.m, p))});
    } else {
        throw ConfigError("unknown oracle kind '" + a.kind + "' (dispersion, vmax, gs-energy, displaced-n)");
    }
    return kOk;
}

int cmd_fit(const std::vector<std::string>& files, Window w, std::ostream& out) {
    print_row(out, {"file", "alpha_x", "r2_x", "alpha_z", "r2_z", "points"});
    for (const auto& f : files) {
        const auto samples = csv::parse_metric_table(csv::read_file(f));
        const MELFit fx = fit_mel_entropy(samples, Axis::x, w);
        const MELFit fz = fit_mel_entropy(samples, Axis::z, w);
        print_row(out, {f, fit_cell(fx, true), fit_cell(fx, false), fit_cell(fz, true), fit_cell(fz, false),
                        std::to_string(fx.points)});
    }
    return kOk;
}

int cmd_qcheck(const RunConfig& c, std::ostream& out) {
    ensure_dir(c.out_dir);
    const ModelParams p = c.params();
    const ConvergenceReport rep = q_convergence(p, c.grid, c.initial, c.quench_options());
    print_row(out, {"metric", "max_deviation"});
    json dev;
    for (const auto& [name, d] : rep.max_deviation) {
        print_row(out, {name, csv::format_number(d)});
        dev[name] = d;
    }
    out << "q=" << rep.q << " vs q=" << rep.q_doubled << " threshold=" << csv::format_number(rep.threshold)
        << " converged=" << (rep.converged ? "true" : "false") << "\n";
    json j;
    j["config_hash"] = digest_hex(serialize(c));
    j["code_version"] = kCodeVersion;
    j["params"] = params_json(p);
    j["q"] = rep.q;
    j["q_doubled"] = rep.q_doubled;
    j["threshold"] = rep.threshold;
    j["converged"] = rep.converged;
    j["max_deviation"] = dev;
    j["config"] = serialize(c);
    csv::write_file((fs::path(c.out_dir) / ("qcheck_" + point_stem(p) + ".json")).string(), j.dump(2) + "\n");
    return kOk;
}

} // namespace

std::string point_stem(const ModelParams& p) {
    return "L" + std::to_string(p.L) + "_q" + std::to_string(p.q) + "_h" + csv::format_number(p.h) + "_r" +
           csv::format_number(p.lambda2_over_omega());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quench dynamics of an Ising chain coupled to a central bosonic ancilla", "ancilla-sim"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    Overrides quench_o, sweep_o, gs_o, qcheck_o;
    auto* quench = app.add_subcommand("quench", "run one quench and write its metric CSV");
    add_model_flags(quench, quench_o);

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid and an aggregate long-time table");
    add_model_flags(sweep, sweep_o);
    sweep_o.add(sweep, "h-values", "sweep", "h_values", "comma-separated fields");
    sweep_o.add(sweep, "lambda2-values", "sweep", "lambda2_over_omega_values", "comma-separated couplings");
    sweep_o.add(sweep, "L-values", "sweep", "L_values", "comma-separated sizes");

    auto* gs = app.add_subcommand("gs-quench", "quench from the Ising ground state of the pre-quench couplings");
    add_model_flags(gs, gs_o);
    gs_o.add(gs, "pre-J", "sweep", "pre_J", "pre-quench exchange (default: J)");
    gs_o.add(gs, "pre-h", "sweep", "pre_h", "pre-quench field (default: h)");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "closed-form references");
    oracle->add_option("kind", oa.kind, "dispersion | vmax | gs-energy | displaced-n")->required();
    oracle->add_option("--h", oa.h, "transverse field");
    oracle->add_option("--J", oa.J, "exchange");
    oracle->add_option("--k", oa.k, "momentum");
    oracle->add_option("--L", oa.L, "number of spins");
    oracle->add_option("--lambda", oa.lambda, "spin-ancilla coupling");
    oracle->add_option("--omega", oa.omega, "ancilla splitting");
    oracle->add_option("--m", oa.m, "S_x eigenvalue");
    oracle->add_option("--t", oa.t, "time");

    std::vector<std::string> fit_files;
    Window fit_window{0.0, 50.0};
    auto* fit = app.add_subcommand("fit", "re-fit MEL against e^S - 1 from existing CSVs");
    fit->add_option("files", fit_files, "metric CSV files")->required();
    fit->add_option("--avg-from", fit_window.t0, "window start");
    fit->add_option("--avg-to", fit_window.t1, "window end");

    auto* qcheck = app.add_subcommand("q-check", "compare all metrics at q and 2q");
    add_model_flags(qcheck, qcheck_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*quench) {
            const RunConfig c = quench_o.resolve(quench);
            return cmd_single(c, c.initial, "quench_", out, err);
        }
        if (*gs) return cmd_single(gs_o.resolve(gs), InitialState::spin_ground_state, "gs_quench_", out, err);
        if (*sweep) return cmd_sweep(sweep_o.resolve(sweep), out, err);
        if (*oracle) return cmd_oracle(oa, out);
        if (*fit) return cmd_fit(fit_files, fit_window, out);
        if (*qcheck) return cmd_qcheck(qcheck_o.resolve(qcheck), out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kInvariantFailure;
    }
    return kOk;
}

} // namespace ancilla::cli
