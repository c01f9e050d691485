// run.hpp — Batch front door: validate a run configuration, dispatch to the
// experiment kinds and emit deterministic CSV/JSON artifacts.

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "weakdwell/bath.hpp"
#include "weakdwell/config.hpp"
#include "weakdwell/dwell.hpp"
#include "weakdwell/errors.hpp"
#include "weakdwell/pointer.hpp"
#include "weakdwell/record.hpp"
#include "weakdwell/weakvalue.hpp"

namespace weakdwell {

inline constexpr const char* kToolVersion = "0.1.0";

// Stable exit-code contract for scripting: 0 success, 2 config, 3 domain,
// 4 I/O.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const IoError*>(&e)) return 4;
    return 3;
}

namespace detail {

inline double parse_token_angle(const std::string& key, const std::string& token,
                                std::size_t prefix_len) {
    const char* begin = token.c_str() + prefix_len;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("config key " + key + ": bad angle in state token: " + token);
    return value;
}

inline SpinState parse_spin_state(const std::string& key, const std::string& token) {
    if (token == "z+") return SpinState::z_plus();
    if (token == "z-") return SpinState::z_minus();
    if (token == "x+") return SpinState::x_plus();
    if (token == "x-") return SpinState::x_minus();
    if (token == "y+") return SpinState::y_plus();
    if (token == "y-") return SpinState::y_minus();
    if (token.rfind("theta:", 0) == 0) {
        const double theta = parse_token_angle(key, token, 6);
        return {std::cos(theta), std::sin(theta)};
    }
    if (token.rfind("phi:", 0) == 0) {
        const double phi = parse_token_angle(key, token, 4);
        return {1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phi)};
    }
    throw ConfigError("config key " + key + ": unknown state token: " + token +
                      " (use x+/x-/y+/y-/z+/z-/theta:<v>/phi:<v>)");
}

inline Operator2 parse_operator(const std::string& key, const std::string& token) {
    if (token == "identity") return Operator2::identity();
    if (token == "sigma_x") return Operator2::sigma_x();
    if (token == "sigma_y") return Operator2::sigma_y();
    if (token == "sigma_z") return Operator2::sigma_z();
    throw ConfigError("config key " + key + ": unknown operator token: " + token);
}

inline void require_positive(const ParamSet& params, const std::string& key) {
    if (!(params.get_double(key) > 0.0))
        throw ConfigError("config key " + key + ": must be positive");
}

// Runs fn(0..count-1); with workers > 1 the indices are claimed from an
// atomic counter, results land in index order so output never depends on
// scheduling.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

inline std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> grid(static_cast<std::size_t>(spec.steps));
    const double n1 = static_cast<double>(spec.steps - 1);
    for (long i = 0; i < spec.steps; ++i) {
        const double frac = static_cast<double>(i) / n1;
        grid[static_cast<std::size_t>(i)] =
            spec.log_scale ? std::exp(std::log(spec.start) + frac * (std::log(spec.stop) - std::log(spec.start)))
                           : spec.start + frac * (spec.stop - spec.start);
    }
    return grid;
}

inline SweepSpec parse_sweep_spec(const ParamSet& params) {
    SweepSpec spec;
    spec.variable = params.get_string("variable");
    if (spec.variable != "T" && spec.variable != "omega" && spec.variable != "omega_prime")
        throw ConfigError("config key variable: must be one of T, omega, omega_prime");
    spec.start = params.get_double("start");
    spec.stop = params.get_double("stop");
    spec.steps = params.get_int("steps");
    const std::string scale = params.get_string("scale");
    if (scale == "log")
        spec.log_scale = true;
    else if (scale == "linear")
        spec.log_scale = false;
    else
        throw ConfigError("config key scale: must be linear or log");
    if (spec.steps < 2) throw ConfigError("config key steps: must be >= 2");
    if (!(spec.start < spec.stop)) throw ConfigError("config key start: must be < stop");
    if (spec.log_scale && !(spec.start > 0.0))
        throw ConfigError("config key start: log scale requires start > 0");
    return spec;
}

inline DwellRequest sweep_request(const SweepSpec& spec, const ParamSet& params, double value) {
    DwellRequest req;
    req.omega = spec.variable == "omega" ? value : params.get_double("omega");
    req.omega_prime = spec.variable == "omega_prime" ? value : params.get_double("omega_prime");
    req.window = spec.variable == "T" ? value : params.get_double("T");
    return req;
}

}  // namespace detail

// Fail-fast validation: every required key present and in-domain before any
// computation starts. Throws ConfigError naming the offending key.
inline void validate_run_config(const RunConfig& config) {
    const ParamSet& p = config.params;
    std::set<std::string> allowed = common_keys();
    switch (config.experiment) {
        case Experiment::dwell: {
            allowed.insert({"omega", "omega_prime", "T"});
            p.require_known_keys(allowed);
            detail::require_positive(p, "omega");
            detail::require_positive(p, "T");
            if (p.get_double("omega_prime") > 2.0 * p.get_double("omega"))
                throw ConfigError("config key omega_prime: must be <= 2 * omega");
            break;
        }
        case Experiment::sweep: {
            allowed.insert({"variable", "start", "stop", "steps", "scale", "omega",
                            "omega_prime", "T"});
            p.require_known_keys(allowed);
            const SweepSpec spec = detail::parse_sweep_spec(p);
            if (p.has(spec.variable))
                throw ConfigError("config key " + spec.variable +
                                  ": is the sweep variable and cannot also be fixed");
            for (const std::string& key : {std::string("omega"), std::string("omega_prime"),
                                           std::string("T")})
                if (key != spec.variable && !p.has(key))
                    throw ConfigError("missing config key: " + key);
            for (double value : detail::sweep_grid(spec)) {
                const DwellRequest req = detail::sweep_request(spec, p, value);
                if (!(req.omega > 0.0))
                    throw ConfigError("config key omega: sweep hits a non-positive value");
                if (!(req.window > 0.0))
                    throw ConfigError("config key T: sweep hits a non-positive value");
                if (!(req.omega_prime < 2.0 * req.omega))
                    throw ConfigError(
                        "config key omega_prime: sweep requires omega_prime < 2 * omega at every "
                        "point");
            }
            break;
        }
        case Experiment::survival: {
            allowed.insert({"kind", "k", "delta_e", "gamma", "t_i", "t_f", "samples"});
            p.require_known_keys(allowed);
            const std::string kind = p.get_string("kind");
            if (kind != "asymptotic" && kind != "finite_time")
                throw ConfigError("config key kind: must be asymptotic or finite_time");
            detail::require_positive(p, "gamma");
            if (!(p.get_double("t_f") > p.get_double("t_i")))
                throw ConfigError("config key t_f: must exceed t_i");
            if (p.get_int("samples") < 2) throw ConfigError("config key samples: must be >= 2");
            if (kind == "finite_time" && p.get_int("k") != 0)
                throw ConfigError("config key k: finite_time post-selection requires k = 0");
            if (p.get_int("k") != 0 && !p.has("delta_e"))
                throw ConfigError("missing config key: delta_e (required when k != 0)");
            break;
        }
        case Experiment::bath_sim: {
            allowed.insert({"n_levels", "delta_e", "coupling", "t_max", "dt", "store_stride",
                            "force"});
            p.require_known_keys(allowed);
            if (p.get_int("n_levels") < 1) throw ConfigError("config key n_levels: must be >= 1");
            detail::require_positive(p, "delta_e");
            if (p.get_double("coupling") < 0.0)
                throw ConfigError("config key coupling: must be >= 0");
            detail::require_positive(p, "t_max");
            detail::require_positive(p, "dt");
            if (p.get_int_or("store_stride", 1) < 1)
                throw ConfigError("config key store_stride: must be >= 1");
            p.get_bool_or("force", false);
            break;
        }
        case Experiment::pointer_sim: {
            allowed.insert({"pre", "post", "op", "g", "delta", "q_min", "q_max", "n_points"});
            p.require_known_keys(allowed);
            detail::parse_spin_state("pre", p.get_string("pre"));
            detail::parse_spin_state("post", p.get_string("post"));
            detail::parse_operator("op", p.get_string("op"));
            p.get_double("g");
            detail::require_positive(p, "delta");
            if (p.get_int("n_points") < 64) throw ConfigError("config key n_points: must be >= 64");
            if (!(p.get_double("q_max") > p.get_double("q_min")))
                throw ConfigError("config key q_max: must exceed q_min");
            if (p.get_double("q_min") > -8.0 * p.get_double("delta") ||
                p.get_double("q_max") < 8.0 * p.get_double("delta"))
                throw ConfigError("config key delta: grid must span [-8 delta, +8 delta]");
            break;
        }
    }
    if (config.output_path.empty())
        throw ConfigError("missing output path (config key output_path or --out)");
}

namespace detail {

inline Row dwell_report_row(const DwellTimeReport& r, const DwellRequest& req) {
    return {req.omega,
            req.omega_prime,
            req.window,
            std::string("dissipative"),
            r.gamma,
            r.delta,
            r.tau_quadrature,
            r.tau_tanh,
            r.tau_coth_paper,
            r.relative_discrepancy,
            r.asymptotic_limit,
            r.coth_exceeds_window ? 1.0 : 0.0};
}

inline Table run_dwell(const ParamSet& p) {
    const DwellRequest req{p.get_double("omega"), p.get_double("omega_prime"),
                           p.get_double("T")};
    const DwellOutcome outcome = dwell_time(req);
    Table table;
    if (std::holds_alternative<DwellTimeReport>(outcome)) {
        table.columns = {"omega",    "omega_prime",        "T",
                         "outcome",  "gamma",              "delta",
                         "tau_quadrature", "tau_tanh",     "tau_coth_paper",
                         "relative_discrepancy", "asymptotic_limit", "coth_exceeds_window"};
        table.rows.push_back(dwell_report_row(std::get<DwellTimeReport>(outcome), req));
    } else {
        const auto& c = std::get<DissipationlessCase>(outcome);
        table.columns = {"omega", "omega_prime", "T", "outcome", "gamma", "delta", "tau_limit"};
        table.rows.push_back({req.omega, req.omega_prime, req.window,
                              std::string("dissipationless"), 0.0, 0.0, c.limit_value});
    }
    return table;
}

inline Table run_sweep(const ParamSet& p, int workers) {
    const SweepSpec spec = parse_sweep_spec(p);
    const std::vector<double> grid = sweep_grid(spec);
    Table table;
    table.columns = {spec.variable, "gamma", "tau_quadrature", "tau_tanh", "tau_coth_paper"};
    table.rows.resize(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        const DwellRequest req = sweep_request(spec, p, grid[i]);
        const auto report = std::get<DwellTimeReport>(dwell_time(req));
        table.rows[i] = {grid[i], report.gamma, report.tau_quadrature, report.tau_tanh,
                         report.tau_coth_paper};
    });
    return table;
}

inline Table run_survival(const ParamSet& p) {
    PostSelectionSpec spec;
    spec.kind = p.get_string("kind") == "asymptotic" ? PostSelectionKind::asymptotic
                                                     : PostSelectionKind::finite_time;
    spec.k = static_cast<int>(p.get_int("k"));
    spec.delta_e = p.get_double_or("delta_e", 0.0);
    spec.gamma = p.get_double("gamma");
    spec.t_i = p.get_double("t_i");
    spec.t_f = p.get_double("t_f");
    const long samples = p.get_int("samples");
    Table table;
    table.columns = {"t", "re_pw", "im_pw", "abs_pw"};
    for (long i = 0; i < samples; ++i) {
        const double t =
            spec.t_i + (spec.t_f - spec.t_i) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const WeakSurvival s = spec.kind == PostSelectionKind::asymptotic
                                   ? survival_weak_value(spec, t)
                                   : survival_weak_value_finite(spec, t);
        table.rows.push_back({t, s.value.real(), s.value.imag(), std::abs(s.value)});
    }
    return table;
}

inline Table run_bath_sim(const ParamSet& p) {
    BathModel model{static_cast<int>(p.get_int("n_levels")), p.get_double("delta_e"),
                    p.get_double("coupling")};
    BathRunOptions options{static_cast<int>(p.get_int_or("store_stride", 1)),
                           p.get_bool_or("force", false)};
    const AmplitudeTrajectory traj =
        integrate_bath(model, p.get_double("t_max"), p.get_double("dt"), options);
    Table table;
    table.columns = {"t", "re_a0", "im_a0", "norm_total", "abs_a0"};
    for (std::size_t i = 0; i < traj.size(); ++i)
        table.rows.push_back({traj.times[i], traj.a0[i].real(), traj.a0[i].imag(),
                              traj.total_norm[i], std::abs(traj.a0[i])});
    return table;
}

inline Table run_pointer_sim(const ParamSet& p, Metadata& extra) {
    const SpinState pre = parse_spin_state("pre", p.get_string("pre"));
    const SpinState post = parse_spin_state("post", p.get_string("post"));
    const Operator2 op = parse_operator("op", p.get_string("op"));
    const PointerGrid grid{p.get_double("q_min"), p.get_double("q_max"),
                           static_cast<int>(p.get_int("n_points"))};
    const PointerWavefunction initial = gaussian_pointer(grid, p.get_double("delta"));
    const MeasurementOutcome outcome = weak_measure(pre, post, op, p.get_double("g"), initial);
    extra.emplace_back("result.mean_q", format_double(outcome.mean_q));
    extra.emplace_back("result.mean_p", format_double(outcome.mean_p));
    extra.emplace_back("result.post_selection_probability",
                       format_double(outcome.post_selection_probability));
    const PointerWavefunction final_wf = outcome.final_pointer.renormalized();
    Table table;
    table.columns = {"q", "re", "im", "prob"};
    for (int i = 0; i < grid.n_points; ++i)
        table.rows.push_back({grid.q(i), final_wf.amplitudes[i].real(),
                              final_wf.amplitudes[i].imag(), std::norm(final_wf.amplitudes[i])});
    return table;
}

}  // namespace detail

struct RunOptions {
    int workers{1};
    bool include_metadata{true};
};

struct RunOutput {
    Table table;
    Metadata metadata;
};

inline RunOutput run_experiment(const RunConfig& config, const RunOptions& options = {}) {
    validate_run_config(config);
    const auto start = std::chrono::steady_clock::now();
    RunOutput out;
    Metadata extra;
    switch (config.experiment) {
        case Experiment::dwell: out.table = detail::run_dwell(config.params); break;
        case Experiment::sweep:
            out.table = detail::run_sweep(config.params, options.workers);
            break;
        case Experiment::survival: out.table = detail::run_survival(config.params); break;
        case Experiment::bath_sim: out.table = detail::run_bath_sim(config.params); break;
        case Experiment::pointer_sim:
            out.table = detail::run_pointer_sim(config.params, extra);
            break;
    }
    if (options.include_metadata) {
        out.metadata.emplace_back("tool", std::string("weakdwell ") + kToolVersion);
        out.metadata.emplace_back("experiment", experiment_name(config.experiment));
        for (const auto& [key, value] : config.params.entries())
            out.metadata.emplace_back("config." + key, value);
        for (auto& kv : extra) out.metadata.push_back(std::move(kv));
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", elapsed.count());
        out.metadata.emplace_back("wall_time_s", buf);
    }
    return out;
}

// Computes everything in memory first; the output file appears only on
// success (fail-fast configs never leave partial artifacts).
inline void run(const RunConfig& config, const RunOptions& options = {}) {
    const RunOutput out = run_experiment(config, options);
    const std::string rendered = config.format == OutputFormat::csv
                                     ? render_csv(out.table, out.metadata)
                                     : render_json(out.table, out.metadata);
    write_file(config.output_path, rendered);
}

}  // namespace weakdwell
