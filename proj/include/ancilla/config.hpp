// config.hpp — run configuration: sectioned key = value text, flag overrides

#pragma once

#include "ancilla/experiments.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ancilla {

// Everything a CLI run depends on. Serialized into every output sidecar.
//
//   [model]    L q J h omega_c lambda2_over_omega boundary dim_ceiling
//   [grid]     t_start t_end dt avg_from avg_to
//   [sweep]    h_values lambda2_over_omega_values L_values initial_state pre_J pre_h
//   [output]   dir metrics mi_convention
//   [numerics] dense_threshold krylov_max_dim krylov_tolerance workers
//
// Lists are comma separated; '#' starts a comment. Unknown sections or keys
// are errors.
struct RunConfig {
    ModelParams model;                     // model.lambda follows lambda2_over_omega
    double lambda2_over_omega = 0.0;
    TimeGrid grid;
    Window average{0.0, 50.0};

    std::vector<double> h_values;          // empty: the single model.h
    std::vector<double> lambda2_over_omega_values;
    std::vector<int> L_values;
    InitialState initial = InitialState::polarized;
    std::optional<double> pre_J;
    std::optional<double> pre_h;

    std::string out_dir = "out";
    std::vector<std::string> metrics;      // empty: all columns
    MiConvention mi = MiConvention::eq2;

    Index dense_threshold = 4096;
    int krylov_max_dim = 40;
    double krylov_tolerance = 1e-10;
    int workers = 0;

    ModelParams params() const;            // model with lambda filled in
    QuenchOptions quench_options() const;
    SweepSpec sweep_spec() const;
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

std::string serialize(const RunConfig& c);

// Throws ConfigError("<origin>:<line>: ...") on malformed input.
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::string& path);

// Applies one key = value assignment inside a section; used by the parser,
// by flag overrides and by environment overrides.
void apply_setting(RunConfig& c, std::string_view section, std::string_view key, std::string_view value);

// ANCILLA_WORKERS and ANCILLA_DENSE_THRESHOLD.
void apply_environment(RunConfig& c);

std::string_view mi_convention_name(MiConvention m);
MiConvention parse_mi_convention(std::string_view s);

} // namespace ancilla
