#include "rydgate/sweeps.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <thread>

namespace rydgate {

Experiment experiment_from_string(const std::string& name) {
    if (name == "susceptibility") return Experiment::Susceptibility;
    if (name == "blocking") return Experiment::BlockingVsRatio;
    if (name == "transfer") return Experiment::TransferVsV;
    if (name == "ghz") return Experiment::GhzVsVjk;
    throw std::invalid_argument("unknown experiment '" + name +
                                "' (expected susceptibility|blocking|transfer|ghz)");
}

const char* to_string(Experiment experiment) {
    switch (experiment) {
        case Experiment::Susceptibility: return "susceptibility";
        case Experiment::BlockingVsRatio: return "blocking";
        case Experiment::TransferVsV: return "transfer";
        case Experiment::GhzVsVjk: return "ghz";
    }
    throw std::invalid_argument("invalid experiment");
}

void SweepAxis::validate() const {
    if (points < 2) throw std::invalid_argument("sweep axis needs at least 2 points");
    if (log_spaced && (start <= 0.0 || stop <= 0.0))
        throw std::invalid_argument("log-spaced axis requires positive bounds");
}

std::vector<double> SweepAxis::values() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        out[static_cast<std::size_t>(i)] =
            log_spaced ? start * std::pow(stop / start, f) : start + (stop - start) * f;
    }
    return out;
}

SweepSpec SweepSpec::defaults(Experiment experiment) {
    SweepSpec spec;
    spec.experiment = experiment;
    spec.base = rb87_preset(1);
    // Figure sweeps run the effective model with decay off; tolerances are
    // relaxed from the gate default since strongly shifted Rydberg components
    // force very small steps at full precision.
    spec.integrator.rel_tol = 1e-8;
    spec.integrator.abs_tol = 1e-7;
    switch (experiment) {
        case Experiment::BlockingVsRatio:
            spec.axis = {1.0, 6.0, 25, false};
            spec.n_atoms = 1;
            break;
        case Experiment::TransferVsV:
            spec.axis = {1.0, 1e3, 30, true};
            spec.n_atoms = 1;
            break;
        case Experiment::GhzVsVjk:
            spec.axis = {1e-1, 1e4, 30, true};
            spec.x_max_values = {0.1, 0.2, 0.3, 0.4};
            spec.n_atoms = 3;
            break;
        case Experiment::Susceptibility:
            spec.axis = {spec.base.delta - 5.0 * spec.base.omega_c,
                         spec.base.delta + 5.0 * spec.base.omega_c, 401, false};
            spec.n_atoms = 1;
            break;
    }
    return spec;
}

int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RYDGATE_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// spec.base resized to n atoms with all interactions cleared
PhysParams sized_base(const SweepSpec& spec, int n) {
    PhysParams p = spec.base;
    p.n_atoms = n;
    p.v_control.assign(static_cast<std::size_t>(n), 0.0);
    p.v_ensemble.assign(static_cast<std::size_t>(n),
                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
    return p;
}

// Strongly shifted Rydberg levels carry negligible amplitude but their phase
// noise throttles the adaptive controller; such points run fixed-step at the
// stability limit instead.
IntegratorConfig integrator_for(const SweepSpec& spec, const HamiltonianOperator& op,
                                double span) {
    IntegratorConfig cfg = spec.integrator;
    if (cfg.method == StepperKind::RkAdaptive && is_stiff(op)) {
        cfg.method = StepperKind::Rk4Fixed;
        cfg.dt = stable_fixed_step(op, span);
    }
    return cfg;
}

SweepRow blocking_point(const SweepSpec& spec, double ratio) {
    PhysParams params = sized_base(spec, spec.n_atoms);
    params.omega_c = ratio * params.omega_p_max;
    SweepRow row;
    row.axis = {ratio};
    const HamiltonianSpec h = HamiltonianSpec::raman_window(ModelKind::Effective, params, false);
    const LevelScheme scheme = h.scheme();
    const CompositeState initial = CompositeState::basis_state(
        scheme, ControlLevel::Zero, std::string(static_cast<std::size_t>(spec.n_atoms), 'A'));
    const HamiltonianOperator op(h);
    const EvolutionReport report =
        evolve(initial, op, 0.0, params.t_raman, integrator_for(spec, op, params.t_raman));
    row.results = {std::norm(overlap(initial, report.final_state))};
    row.norm_loss = report.norm_loss;
    return row;
}

SweepRow transfer_point(const SweepSpec& spec, double v_over_eps) {
    PhysParams params = sized_base(spec, spec.n_atoms);
    const double eps = epsilon(params);
    params.v_control.assign(static_cast<std::size_t>(spec.n_atoms), v_over_eps * eps);
    GateOptions options;
    const HamiltonianOperator op(
        HamiltonianSpec::raman_window(ModelKind::Effective, params, false));
    options.integrator = integrator_for(spec, op, params.t_raman);
    const GateOutcome outcome = run_gate(
        ControlInput::one(), std::string(static_cast<std::size_t>(spec.n_atoms), 'A'), params,
        options);
    SweepRow row;
    row.axis = {v_over_eps};
    row.results = {outcome.fidelity};
    row.norm_loss = outcome.norm_loss;
    return row;
}

SweepRow ghz_point(const SweepSpec& spec, double v_jk_over_eps, double x_max) {
    PhysParams params = sized_base(spec, spec.n_atoms);
    params.omega_c = std::numbers::sqrt2 * params.omega_p_max / x_max;
    const double eps = epsilon(params);
    params.v_control.assign(static_cast<std::size_t>(spec.n_atoms), 40.0 * eps);
    for (int j = 0; j < spec.n_atoms; ++j)
        for (int k = 0; k < spec.n_atoms; ++k)
            if (j != k)
                params.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    v_jk_over_eps * eps;
    GateOptions options;
    const HamiltonianOperator op(
        HamiltonianSpec::raman_window(ModelKind::Effective, params, false));
    options.integrator = integrator_for(spec, op, params.t_raman);
    const GateOutcome outcome = run_gate(
        ControlInput::plus(), std::string(static_cast<std::size_t>(spec.n_atoms), 'A'), params,
        options);
    SweepRow row;
    row.axis = {v_jk_over_eps, x_max};
    row.results = {outcome.fidelity};
    row.norm_loss = outcome.norm_loss;
    return row;
}

SweepRow susceptibility_point(const SweepSpec& spec, double delta_probe) {
    PhysParams params = sized_base(spec, std::max(spec.n_atoms, 1));
    const double v = 40.0 * epsilon(params);
    params.v_control.assign(params.v_control.size(), v);
    const Complex blocked = susceptibility(delta_probe, params, 0.0);
    const Complex unblocked = susceptibility(delta_probe, params, v);
    SweepRow row;
    row.axis = {delta_probe};
    row.results = {blocked.real(), blocked.imag(), unblocked.real(), unblocked.imag()};
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    const std::vector<double> axis = spec.axis.values();

    struct Task {
        double axis_value;
        double x_max;  // GHZ only
    };
    std::vector<Task> tasks;
    if (spec.experiment == Experiment::GhzVsVjk) {
        if (spec.x_max_values.empty())
            throw std::invalid_argument("GHZ sweep needs at least one x_max value");
        for (double x : spec.x_max_values)
            for (double v : axis) tasks.push_back({v, x});
    } else {
        for (double v : axis) tasks.push_back({v, 0.0});
    }

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto t_start = std::chrono::steady_clock::now();
            SweepRow row;
            try {
                switch (spec.experiment) {
                    case Experiment::BlockingVsRatio:
                        row = blocking_point(spec, tasks[i].axis_value);
                        break;
                    case Experiment::TransferVsV:
                        row = transfer_point(spec, tasks[i].axis_value);
                        break;
                    case Experiment::GhzVsVjk:
                        row = ghz_point(spec, tasks[i].axis_value, tasks[i].x_max);
                        break;
                    case Experiment::Susceptibility:
                        row = susceptibility_point(spec, tasks[i].axis_value);
                        break;
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
                row.axis = {tasks[i].axis_value};
                if (spec.experiment == Experiment::GhzVsVjk) row.axis.push_back(tasks[i].x_max);
            }
            row.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            rows[i] = std::move(row);
        }
    };

    const int workers =
        std::min<int>(resolve_worker_count(spec.worker_count), static_cast<int>(tasks.size()));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string csv_header(Experiment experiment) {
    switch (experiment) {
        case Experiment::BlockingVsRatio: return "ratio,fidelity,norm_loss";
        case Experiment::TransferVsV: return "v_over_eps,fidelity,norm_loss";
        case Experiment::GhzVsVjk: return "v_jk_over_eps,x_max,fidelity,norm_loss";
        case Experiment::Susceptibility:
            return "delta,re_chi_blocked,im_chi_blocked,re_chi_unblocked,im_chi_unblocked";
    }
    throw std::invalid_argument("invalid experiment");
}

void write_csv(std::ostream& out, Experiment experiment, std::span<const SweepRow> rows) {
    out << csv_header(experiment) << "\n";
    const bool with_norm_loss = experiment != Experiment::Susceptibility;
    const std::size_t n_results = experiment == Experiment::Susceptibility ? 4 : 1;
    char buf[64];
    for (const SweepRow& row : rows) {
        std::string line;
        auto append = [&](double v) {
            if (!line.empty()) line += ',';
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            line += buf;
        };
        for (double v : row.axis) append(v);
        if (row.failed) {
            // axis columns stay meaningful, everything else reads nan
            const std::size_t missing = n_results + (with_norm_loss ? 1 : 0);
            for (std::size_t i = 0; i < missing; ++i) line += ",nan";
        } else {
            for (double v : row.results) append(v);
            if (with_norm_loss) append(row.norm_loss);
        }
        out << line << "\n";
    }
}

}  // namespace rydgate
