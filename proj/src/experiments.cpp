// experiments.cpp

#include "ancilla/experiments.hpp"

#include "ancilla/hamiltonian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

namespace ancilla {

std::string_view initial_state_name(InitialState s) {
    switch (s) {
    case InitialState::polarized: return "polarized";
    case InitialState::x_polarized: return "x_polarized";
    case InitialState::spin_ground_state: return "spin_ground_state";
    }
    return "?";
}

InitialState parse_initial_state(std::string_view s) {
    if (s == "polarized") return InitialState::polarized;
    if (s == "x_polarized") return InitialState::x_polarized;
    if (s == "spin_ground_state") return InitialState::spin_ground_state;
    throw ConfigError("unknown initial state '" + std::string(s) + "'");
}

double QuenchRecord::max_norm_error() const {
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, s.norm_err);
    return worst;
}

std::string digest_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string canonical_quench_key(const ModelParams& p, const TimeGrid& g, InitialState init, const QuenchOptions& o) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "L=%d;q=%d;J=%.17g;h=%.17g;omega_c=%.17g;lambda=%.17g;periodic=%d;t_start=%.17g;t_end=%.17g;"
                  "dt=%.17g;initial=%s;mi=%s;pre_J=%.17g;pre_h=%.17g",
                  p.L, p.q, p.J, p.h, p.omega_c, p.lambda, p.periodic ? 1 : 0, g.t_start, g.t_end, g.sample_dt,
                  std::string(initial_state_name(init)).c_str(), o.mi == MiConvention::eq2 ? "eq2" : "half",
                  o.pre_J.value_or(p.J), o.pre_h.value_or(p.h));
    return buf;
}

namespace {

PureState initial_state(const ModelParams& p, InitialState init, const QuenchOptions& opts) {
    switch (init) {
    case InitialState::polarized: return prepare_polarized(p);
    case InitialState::x_polarized: return prepare_x_polarized(p, +1);
    case InitialState::spin_ground_state: {
        ModelParams pre = p;
        pre.J = opts.pre_J.value_or(p.J);
        pre.h = opts.pre_h.value_or(p.h);
        return prepare_spin_ground_state(pre, opts.eigensolver).state;
    }
    }
    throw ConfigError("unknown initial state");
}

} // namespace

QuenchRecord run_quench(const ModelParams& p, const TimeGrid& grid, InitialState init, const QuenchOptions& opts) {
    validate(p);
    grid.validate();
    QuenchRecord rec;
    rec.params = p;
    rec.grid = grid;
    rec.initial = init;
    rec.config_hash = digest_hex(canonical_quench_key(p, grid, init, opts));

    auto H = std::make_shared<const HermitianOperator>(build_full(p));
    const MetricEvaluator metrics(p, H, opts.mi);
    rec.samples.reserve(grid.size());
    evolve(initial_state(p, init, opts), *H, grid,
           [&](const PureState& psi) { rec.samples.push_back(metrics.evaluate(psi)); }, opts.propagator, opts.method);

    const double worst = rec.max_norm_error();
    if (worst > 1e-9) throw NumericalError("norm drifted by " + std::to_string(worst) + " during propagation");
    return rec;
}

MetricSample time_average(std::span<const MetricSample> samples, Window w) {
    MetricSample acc{};
    std::size_t n = 0;
    for (const auto& s : samples) {
        if (s.t < w.t0 - 1e-9 || s.t > w.t1 + 1e-9) continue;
        for (const auto& f : kMetricFields) acc.*f.member += s.*f.member;
        ++n;
    }
    if (n == 0) throw ConfigError("averaging window contains no samples");
    for (const auto& f : kMetricFields) acc.*f.member /= static_cast<double>(n);
    return acc;
}

MetricSample time_average(const QuenchRecord& record, Window w) {
    if (record.samples.empty() || w.t0 < record.samples.front().t - 1e-9 || w.t1 > record.samples.back().t + 1e-9)
        throw ConfigError("averaging window lies outside the record");
    return time_average(std::span<const MetricSample>(record.samples), w);
}

MELFit fit_mel_entropy(std::span<const MetricSample> samples, Axis axis, Window w) {
    if (axis == Axis::y) throw ConfigError("MEL is recorded for the x and z axes only");
    MELFit fit;
    fit.axis = axis;
    fit.window = w;
    std::vector<double> x, y;
    for (const auto& s : samples) {
        if (s.t < w.t0 - 1e-9 || s.t > w.t1 + 1e-9) continue;
        x.push_back(std::expm1(s.S_vN_A));
        y.push_back(axis == Axis::x ? s.MEL_Sx : s.MEL_Sz);
    }
    fit.points = x.size();
    if (x.empty()) throw ConfigError("fit window contains no samples");
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    if (sxx <= 1e-12 * static_cast<double>(x.size())) {
        fit.alpha = fit.r_squared = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    fit.alpha = sxy / sxx;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += (y[i] - fit.alpha * x[i]) * (y[i] - fit.alpha * x[i]);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    fit.defined = true;
    return fit;
}

MELFit fit_mel_entropy(const QuenchRecord& record, Axis axis, Window w) {
    return fit_mel_entropy(std::span<const MetricSample>(record.samples), axis, w);
}

LinearFit linear_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("regression needs two or more paired points");
    const double n = static_cast<double>(x.size());
    const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
        syy += (y[i] - ybar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw ConfigError("regression abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("correlation needs two or more paired points");
    const double n = static_cast<double>(x.size());
    const double xbar = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
        syy += (y[i] - ybar) * (y[i] - ybar);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

void SweepSpec::validate() const {
    if (h_values.empty() || lambda2_over_omega_values.empty() || L_values.empty())
        throw ConfigError("sweep lists must be non-empty");
    grid.validate();
    if (average_window.t0 > average_window.t1) throw ConfigError("averaging window is reversed");
    if (average_window.t0 < grid.t_start - 1e-9 || average_window.t1 > grid.t_end + 1e-9)
        throw ConfigError("averaging window [" + std::to_string(average_window.t0) + ", " +
                          std::to_string(average_window.t1) + "] must lie inside the time grid [" +
                          std::to_string(grid.t_start) + ", " + std::to_string(grid.t_end) +
                          "] (set avg_from / avg_to)");
    for (const auto& p : points()) ancilla::validate(p);
}

std::vector<ModelParams> SweepSpec::points() const {
    std::vector<int> Ls = L_values;
    std::vector<double> hs = h_values, ls = lambda2_over_omega_values;
    std::sort(Ls.begin(), Ls.end());
    std::sort(hs.begin(), hs.end());
    std::sort(ls.begin(), ls.end());
    std::vector<ModelParams> out;
    for (int L : Ls)
        for (double h : hs)
            for (double r : ls) {
                ModelParams p = base;
                p.L = L;
                p.q = q;
                p.h = h;
                p.lambda = ModelParams::lambda_from_ratio(r, base.omega_c);
                out.push_back(p);
            }
    return out;
}

std::vector<QuenchRecord> run_sweep(const SweepSpec& spec, const ProgressCallback& progress) {
    spec.validate();
    const std::vector<ModelParams> pts = spec.points();
    std::vector<QuenchRecord> out(pts.size());
    std::vector<std::exception_ptr> errors(pts.size());

    unsigned workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers) : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1U, static_cast<unsigned>(std::max<std::size_t>(pts.size(), 1)));

    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex report_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) {
            try {
                out[i] = run_quench(pts[i], spec.grid, spec.initial, spec.options);
            } catch (...) {
                errors[i] = std::current_exception();
                continue;
            }
            if (progress) {
                std::lock_guard lock(report_mu);
                progress(++done, pts.size(), out[i]);
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

AggregateRow aggregate(const QuenchRecord& record, Window w) {
    return {record.params, time_average(record, w), fit_mel_entropy(record, Axis::x, w),
            fit_mel_entropy(record, Axis::z, w)};
}

FiniteSizeTable finite_size_table(const std::vector<QuenchRecord>& records, Window w) {
    if (records.size() < 3) throw ConfigError("finite-size scan needs at least three sizes");
    FiniteSizeTable table;
    std::vector<double> logL, L, S, MI;
    for (const auto& r : records) {
        const MetricSample avg = time_average(r, w);
        table.rows.push_back({r.params.L, avg.S_vN_A, avg.MI_half, fit_mel_entropy(r, Axis::x, w),
                              fit_mel_entropy(r, Axis::z, w)});
        logL.push_back(std::log(static_cast<double>(r.params.L)));
        L.push_back(static_cast<double>(r.params.L));
        S.push_back(avg.S_vN_A);
        MI.push_back(avg.MI_half);
    }
    table.entropy_vs_log_L = linear_regression(logL, S);
    table.mi_vs_L = linear_regression(L, MI);
    return table;
}

FiniteSizeTable finite_size_scan(const SweepSpec& spec) {
    if (spec.h_values.size() != 1 || spec.lambda2_over_omega_values.size() != 1)
        throw ConfigError("finite-size scan takes exactly one field and one coupling");
    if (spec.L_values.size() < 3) throw ConfigError("finite-size scan needs at least three sizes");
    return finite_size_table(run_sweep(spec), spec.average_window);
}

ConvergenceReport q_convergence(const ModelParams& p, const TimeGrid& grid, InitialState init,
                                const QuenchOptions& opts) {
    if (p.q < 4) throw ConfigError("q-convergence check needs q >= 4");
    ModelParams doubled = p;
    doubled.q = 2 * p.q;
    const QuenchRecord a = run_quench(p, grid, init, opts);
    const QuenchRecord b = run_quench(doubled, grid, init, opts);

    ConvergenceReport rep;
    rep.q = p.q;
    rep.q_doubled = doubled.q;
    for (const auto& f : kMetricFields) {
        if (std::string_view(f.name) == "t" || std::string_view(f.name) == "norm_err") continue;
        double worst = 0.0;
        for (std::size_t k = 0; k < a.samples.size(); ++k) {
            const double d = std::abs(a.samples[k].*f.member - b.samples[k].*f.member);
            if (!std::isnan(d)) worst = std::max(worst, d);
        }
        rep.max_deviation[f.name] = worst;
    }
    rep.converged = std::all_of(rep.max_deviation.begin(), rep.max_deviation.end(),
                                [&](const auto& kv) { return kv.second < rep.threshold; });
    return rep;
}

} // namespace ancilla
