// experiments.hpp — quench runs, long-time averages, MEL/entropy fits,
// finite-size scans, boson-truncation convergence and parameter sweeps

#pragma once

#include "ancilla/dynamics.hpp"
#include "ancilla/entanglement.hpp"
#include "ancilla/hilbert.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ancilla {

inline constexpr const char* kCodeVersion = "0.1.0";

enum class InitialState {
    polarized,           // |up...up>_z (x) |0>
    x_polarized,         // |+x...+x> (x) |0>
    spin_ground_state,   // Ising ground state of the pre-quench (J, h) (x) |0>
};

std::string_view initial_state_name(InitialState s);
InitialState parse_initial_state(std::string_view s);

struct QuenchOptions {
    PropagatorOptions propagator;
    Propagation method = Propagation::automatic;
    EigensolverOptions eigensolver;
    MiConvention mi = MiConvention::eq2;
    // Pre-quench couplings for spin_ground_state; defaults to the quench
    // Hamiltonian's own (J, h), i.e. only the ancilla coupling is switched on.
    std::optional<double> pre_J;
    std::optional<double> pre_h;
};

struct QuenchRecord {
    ModelParams params;
    TimeGrid grid;
    InitialState initial = InitialState::polarized;
    std::vector<MetricSample> samples;
    std::string config_hash;
    std::string code_version = kCodeVersion;

    double max_norm_error() const;
};

// 64-bit FNV-1a of the text, as 16 lowercase hex digits.
std::string digest_hex(std::string_view text);

// Canonical text of everything that determines a quench record.
std::string canonical_quench_key(const ModelParams& p, const TimeGrid& grid, InitialState init,
                                 const QuenchOptions& opts);

// Throws NumericalError if any sample's norm error exceeds 1e-9.
QuenchRecord run_quench(const ModelParams& p, const TimeGrid& grid, InitialState init, const QuenchOptions& opts = {});

struct Window {
    double t0 = 0.0;
    double t1 = 50.0;
    bool operator==(const Window&) const = default;
};

// Arithmetic mean of every metric over the samples with t in [t0, t1].
MetricSample time_average(std::span<const MetricSample> samples, Window w);
MetricSample time_average(const QuenchRecord& record, Window w);

struct MELFit {
    double alpha = 0.0;
    double r_squared = 0.0;
    Axis axis = Axis::x;
    Window window;
    std::size_t points = 0;
    bool defined = false;   // false when the regressor e^S - 1 vanishes
};

// Least squares through the origin of MEL_mu(t) against e^{S_vN_A(t)} - 1.
// r^2 = 1 - SS_res / SS_tot with SS_tot taken about the mean of MEL_mu.
MELFit fit_mel_entropy(std::span<const MetricSample> samples, Axis axis, Window w);
MELFit fit_mel_entropy(const QuenchRecord& record, Axis axis, Window w);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = slope x + intercept.
LinearFit linear_regression(std::span<const double> x, std::span<const double> y);
double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct SweepSpec {
    ModelParams base;                  // J, omega_c, boundary, dim_ceiling
    std::vector<double> h_values{1.0};
    std::vector<double> lambda2_over_omega_values{0.0};
    std::vector<int> L_values{8};
    int q = 40;
    TimeGrid grid;
    Window average_window;
    InitialState initial = InitialState::polarized;
    QuenchOptions options;
    int workers = 0;                   // 0: hardware concurrency

    void validate() const;

    // Parameter points sorted by (L, h, lambda^2/omega_c).
    std::vector<ModelParams> points() const;
};

using ProgressCallback = std::function<void(std::size_t done, std::size_t total, const QuenchRecord&)>;

// Runs every point on a worker pool; results come back in points() order.
std::vector<QuenchRecord> run_sweep(const SweepSpec& spec, const ProgressCallback& progress = {});

struct AggregateRow {
    ModelParams params;
    MetricSample average;
    MELFit fit_x, fit_z;
};

AggregateRow aggregate(const QuenchRecord& record, Window w);

struct FiniteSizeRow {
    int L = 0;
    double S_vN_A = 0.0;
    double MI_half = 0.0;
    MELFit fit_x, fit_z;
};

struct FiniteSizeTable {
    std::vector<FiniteSizeRow> rows;
    LinearFit entropy_vs_log_L;   // time-averaged S_vN_A against ln L
    LinearFit mi_vs_L;            // time-averaged MI_half against L
};

// Needs a single h and coupling and at least three sizes.
FiniteSizeTable finite_size_scan(const SweepSpec& spec);
FiniteSizeTable finite_size_table(const std::vector<QuenchRecord>& records, Window w);

struct ConvergenceReport {
    int q = 0;
    int q_doubled = 0;
    std::map<std::string, double> max_deviation;   // per metric column
    double threshold = 1e-3;
    bool converged = false;
};

// Reruns at q and 2q and compares every metric sample by sample.
ConvergenceReport q_convergence(const ModelParams& p, const TimeGrid& grid, InitialState init = InitialState::polarized,
                                const QuenchOptions& opts = {});

} // namespace ancilla
