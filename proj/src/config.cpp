// config.cpp

#include "ancilla/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ancilla {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
    return out;
}

long long to_integer(std::string_view key, std::string_view v) {
    v = trim(v);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ConfigError("'" + std::string(key) + "' expects an integer, got '" + std::string(v) + "'");
    return out;
}

std::vector<std::string_view> split_list(std::string_view v) {
    std::vector<std::string_view> out;
    v = trim(v);
    if (v.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = v.find(',', pos);
        out.push_back(trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> to_doubles(std::string_view key, std::string_view v) {
    std::vector<double> out;
    for (auto item : split_list(v)) out.push_back(to_double(key, item));
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F fmt) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += fmt(xs[i]);
    }
    return s;
}

} // namespace

std::string_view mi_convention_name(MiConvention m) { return m == MiConvention::eq2 ? "eq2" : "half"; }

MiConvention parse_mi_convention(std::string_view s) {
    if (s == "eq2") return MiConvention::eq2;
    if (s == "half") return MiConvention::half;
    throw ConfigError("mi_convention must be 'eq2' or 'half', got '" + std::string(s) + "'");
}

ModelParams RunConfig::params() const {
    ModelParams p = model;
    p.lambda = ModelParams::lambda_from_ratio(lambda2_over_omega, model.omega_c);
    return p;
}

QuenchOptions RunConfig::quench_options() const {
    QuenchOptions o;
    o.propagator.dense_threshold = dense_threshold;
    o.propagator.krylov_max_dim = krylov_max_dim;
    o.propagator.tolerance = krylov_tolerance;
    o.mi = mi;
    o.pre_J = pre_J;
    o.pre_h = pre_h;
    return o;
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec s;
    s.base = model;
    s.h_values = h_values.empty() ? std::vector<double>{model.h} : h_values;
    s.lambda2_over_omega_values =
        lambda2_over_omega_values.empty() ? std::vector<double>{lambda2_over_omega} : lambda2_over_omega_values;
    s.L_values = L_values.empty() ? std::vector<int>{model.L} : L_values;
    s.q = model.q;
    s.grid = grid;
    s.average_window = average;
    s.initial = initial;
    s.options = quench_options();
    s.workers = workers;
    return s;
}

void RunConfig::validate() const {
    ancilla::validate(params());
    sweep_spec().validate();
    if (dense_threshold < 0) throw ConfigError("dense_threshold must be >= 0");
    if (krylov_max_dim < 2) throw ConfigError("krylov_max_dim must be >= 2");
    if (!(krylov_tolerance > 0.0)) throw ConfigError("krylov_tolerance must be > 0");
    if (workers < 0) throw ConfigError("workers must be >= 0");
    for (const auto& m : metrics) {
        bool known = false;
        for (const auto& f : kMetricFields) known = known || m == f.name;
        if (!known) throw ConfigError("unknown metric column '" + m + "'");
    }
}

void apply_setting(RunConfig& c, std::string_view section, std::string_view key, std::string_view raw) {
    const std::string_view v = trim(raw);
    auto unknown = [&] {
        return ConfigError("unknown key '" + std::string(key) + "' in section [" + std::string(section) + "]");
    };
    if (section == "model") {
        if (key == "L") c.model.L = static_cast<int>(to_integer(key, v));
        else if (key == "q") c.model.q = static_cast<int>(to_integer(key, v));
        else if (key == "J") c.model.J = to_double(key, v);
        else if (key == "h") c.model.h = to_double(key, v);
        else if (key == "omega_c") c.model.omega_c = to_double(key, v);
        else if (key == "lambda2_over_omega") c.lambda2_over_omega = to_double(key, v);
        else if (key == "boundary") {
            if (v == "periodic") c.model.periodic = true;
            else if (v == "open") c.model.periodic = false;
            else throw ConfigError("boundary must be 'periodic' or 'open'");
        } else if (key == "dim_ceiling") c.model.dim_ceiling = static_cast<std::uint64_t>(to_integer(key, v));
        else throw unknown();
    } else if (section == "grid") {
        if (key == "t_start") c.grid.t_start = to_double(key, v);
        else if (key == "t_end") c.grid.t_end = to_double(key, v);
        else if (key == "dt") c.grid.sample_dt = to_double(key, v);
        else if (key == "avg_from") c.average.t0 = to_double(key, v);
        else if (key == "avg_to") c.average.t1 = to_double(key, v);
        else throw unknown();
    } else if (section == "sweep") {
        if (key == "h_values") c.h_values = to_doubles(key, v);
        else if (key == "lambda2_over_omega_values") c.lambda2_over_omega_values = to_doubles(key, v);
        else if (key == "L_values") {
            c.L_values.clear();
            for (auto item : split_list(v)) c.L_values.push_back(static_cast<int>(to_integer(key, item)));
        } else if (key == "initial_state") c.initial = parse_initial_state(v);
        else if (key == "pre_J") c.pre_J = v.empty() ? std::nullopt : std::optional<double>(to_double(key, v));
        else if (key == "pre_h") c.pre_h = v.empty() ? std::nullopt : std::optional<double>(to_double(key, v));
        else throw unknown();
    } else if (section == "output") {
        if (key == "dir") c.out_dir = std::string(v);
        else if (key == "metrics") {
            c.metrics.clear();
            if (v != "all")
                for (auto item : split_list(v)) c.metrics.emplace_back(item);
        } else if (key == "mi_convention") c.mi = parse_mi_convention(v);
        else throw unknown();
    } else if (section == "numerics") {
        if (key == "dense_threshold") c.dense_threshold = static_cast<Index>(to_integer(key, v));
        else if (key == "krylov_max_dim") c.krylov_max_dim = static_cast<int>(to_integer(key, v));
        else if (key == "krylov_tolerance") c.krylov_tolerance = to_double(key, v);
        else if (key == "workers") c.workers = static_cast<int>(to_integer(key, v));
        else throw unknown();
    } else {
        throw ConfigError("unknown section [" + std::string(section) + "]");
    }
}

std::string serialize(const RunConfig& c) {
    std::ostringstream o;
    o << "[model]\n"
      << "L = " << c.model.L << "\n"
      << "q = " << c.model.q << "\n"
      << "J = " << num(c.model.J) << "\n"
      << "h = " << num(c.model.h) << "\n"
      << "omega_c = " << num(c.model.omega_c) << "\n"
      << "lambda2_over_omega = " << num(c.lambda2_over_omega) << "\n"
      << "boundary = " << (c.model.periodic ? "periodic" : "open") << "\n"
      << "dim_ceiling = " << c.model.dim_ceiling << "\n"
      << "\n[grid]\n"
      << "t_start = " << num(c.grid.t_start) << "\n"
      << "t_end = " << num(c.grid.t_end) << "\n"
      << "dt = " << num(c.grid.sample_dt) << "\n"
      << "avg_from = " << num(c.average.t0) << "\n"
      << "avg_to = " << num(c.average.t1) << "\n"
      << "\n[sweep]\n"
      << "h_values = " << join(c.h_values, num) << "\n"
      << "lambda2_over_omega_values = " << join(c.lambda2_over_omega_values, num) << "\n"
      << "L_values = " << join(c.L_values, [](int L) { return std::to_string(L); }) << "\n"
      << "initial_state = " << initial_state_name(c.initial) << "\n"
      << "pre_J = " << (c.pre_J ? num(*c.pre_J) : "") << "\n"
      << "pre_h = " << (c.pre_h ? num(*c.pre_h) : "") << "\n"
      << "\n[output]\n"
      << "dir = " << c.out_dir << "\n"
      << "metrics = " << (c.metrics.empty() ? std::string("all") : join(c.metrics, [](const std::string& s) {
                              return s;
                          })) << "\n"
      << "mi_convention = " << mi_convention_name(c.mi) << "\n"
      << "\n[numerics]\n"
      << "dense_threshold = " << c.dense_threshold << "\n"
      << "krylov_max_dim = " << c.krylov_max_dim << "\n"
      << "krylov_tolerance = " << num(c.krylov_tolerance) << "\n"
      << "workers = " << c.workers << "\n";
    return o.str();
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
    RunConfig c;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "model" && section != "grid" && section != "sweep" && section != "output" &&
                section != "numerics")
                throw ConfigError(where + "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        if (section.empty()) throw ConfigError(where + "setting outside of any section");
        try {
            apply_setting(c, section, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

void apply_environment(RunConfig& c) {
    if (const char* w = std::getenv("ANCILLA_WORKERS"); w && *w) apply_setting(c, "numerics", "workers", w);
    if (const char* d = std::getenv("ANCILLA_DENSE_THRESHOLD"); d && *d)
        apply_setting(c, "numerics", "dense_threshold", d);
}

} // namespace ancilla
