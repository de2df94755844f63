#include "rydgate/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "rydgate/config.hpp"
#include "rydgate/interferometer.hpp"
#include "rydgate/sweeps.hpp"

namespace rydgate {

namespace {

struct GateCliOptions {
    std::string config_path;
    std::string control = "0";
    std::string ensemble;
    int n_atoms = 0;
    std::string model = "effective";
    bool decay = false;
    std::string v_control;
    std::string v_ensemble;
    double x_max = 0.0;
    double resolved_control_mhz = 0.0;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::string trajectory_path;
    double sample_every_us = 0.0;
    std::string state_path;
    std::string out_path;
};

struct SweepCliOptions {
    std::string experiment;
    std::string config_path;
    int points = 0;
    double start = 0.0, stop = 0.0;
    bool start_set = false, stop_set = false;
    bool log_flag = false, linear_flag = false;
    std::string x_max_list;
    int workers = 0;
    std::string out_path = "-";
};

struct InterfereCliOptions {
    std::string mode = "ideal";
    int n_atoms = 1;
    int d_aux = 2;
    std::string ua = "identity";
    std::string ub = "identity";
    std::string phi = "basis:0";
    std::string config_path;
    std::string out_path;
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

void rescale_interactions(PhysParams& p, double eps_old, double eps_new) {
    const double f = eps_new / eps_old;
    for (double& v : p.v_control) v *= f;
    for (auto& row : p.v_ensemble)
        for (double& v : row) v *= f;
}

PhysParams build_gate_params(const GateCliOptions& opt, int n_atoms) {
    PhysParams params;
    if (!opt.config_path.empty()) {
        params = load_config_file(opt.config_path).params;
        if (params.n_atoms != n_atoms)
            throw ConfigError("config n=" + std::to_string(params.n_atoms) +
                              " conflicts with requested n=" + std::to_string(n_atoms));
    } else {
        params = rb87_preset(n_atoms);
    }
    if (opt.x_max > 0.0) {
        const double eps_old = epsilon(params);
        params.omega_c = std::numbers::sqrt2 * params.omega_p_max / opt.x_max;
        rescale_interactions(params, eps_old, epsilon(params));
    }
    const double eps = epsilon(params);
    if (!opt.v_control.empty()) {
        std::vector<double> list = parse_double_list(opt.v_control);
        if (list.size() == 1) list.assign(static_cast<std::size_t>(n_atoms), list[0]);
        if (static_cast<int>(list.size()) != n_atoms)
            throw ConfigError("--v-control needs 1 or n values");
        params.v_control.resize(static_cast<std::size_t>(n_atoms));
        for (int k = 0; k < n_atoms; ++k)
            params.v_control[static_cast<std::size_t>(k)] = list[static_cast<std::size_t>(k)] * eps;
    }
    if (!opt.v_ensemble.empty()) {
        std::vector<std::vector<double>> rows;
        std::stringstream ss(opt.v_ensemble);
        std::string row;
        while (std::getline(ss, row, ';')) rows.push_back(parse_double_list(row));
        params.v_ensemble.assign(static_cast<std::size_t>(n_atoms),
                                 std::vector<double>(static_cast<std::size_t>(n_atoms), 0.0));
        if (rows.size() == 1 && rows[0].size() == 1) {
            for (int j = 0; j < n_atoms; ++j)
                for (int k = 0; k < n_atoms; ++k)
                    if (j != k)
                        params.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                            rows[0][0] * eps;
        } else {
            if (static_cast<int>(rows.size()) != n_atoms)
                throw ConfigError("--v-ensemble needs a scalar or n rows");
            for (int j = 0; j < n_atoms; ++j) {
                if (static_cast<int>(rows[static_cast<std::size_t>(j)].size()) != n_atoms)
                    throw ConfigError("--v-ensemble rows need n entries");
                for (int k = 0; k < n_atoms; ++k)
                    params.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                        rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * eps;
            }
        }
    }
    params.validate();
    return params;
}

int run_gate_command(const GateCliOptions& opt, std::ostream& out, std::ostream& err) {
    std::string ensemble = opt.ensemble;
    int n_atoms = opt.n_atoms;
    if (ensemble.empty()) {
        if (n_atoms <= 0) n_atoms = 1;
        ensemble.assign(static_cast<std::size_t>(n_atoms), 'A');
    } else if (n_atoms > 0 && n_atoms != static_cast<int>(ensemble.size())) {
        throw ConfigError("--n conflicts with --ensemble length");
    } else {
        n_atoms = static_cast<int>(ensemble.size());
    }

    const PhysParams params = build_gate_params(opt, n_atoms);
    for (const std::string& w : params.warnings()) err << "warning: " << w << "\n";

    ControlInput control;
    if (opt.control == "0") control = ControlInput::zero();
    else if (opt.control == "1") control = ControlInput::one();
    else if (opt.control == "+") control = ControlInput::plus();
    else if (opt.control == "i") control = ControlInput::plus_i();
    else throw ConfigError("--control must be one of 0|1|+|i");

    GateOptions options;
    options.model = opt.model == "full" ? ModelKind::Full : ModelKind::Effective;
    if (opt.model != "full" && opt.model != "effective")
        throw ConfigError("--model must be full or effective");
    options.include_decay = opt.decay;
    options.integrator.rel_tol = opt.rel_tol;
    options.integrator.abs_tol = opt.abs_tol;
    if (opt.resolved_control_mhz > 0.0) {
        options.control_pulse = ControlPulseMode::Resolved;
        options.control_rabi = 2.0 * std::numbers::pi * 1e6 * opt.resolved_control_mhz;
        options.control_pulse_duration = std::numbers::pi / options.control_rabi;
    }
    if (!opt.trajectory_path.empty()) {
        options.integrator.sample_interval =
            opt.sample_every_us > 0.0 ? opt.sample_every_us * 1e-6 : params.t_raman / 200.0;
    }

    GateOutcome outcome = run_gate(control, ensemble, params, options);

    if (!opt.trajectory_path.empty()) {
        std::ofstream traj(opt.trajectory_path, std::ios::binary);
        if (!traj) throw ConfigError("cannot open trajectory file " + opt.trajectory_path);
        traj << "t,norm,pop_A,pop_B,pop_P,pop_R,pop_doubleR\n";
        char buf[256];
        for (const TrajectorySample& s : outcome.trajectory) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                          s.norm, s.level_pop[0], s.level_pop[1], s.level_pop[2], s.level_pop[3],
                          s.pop_double_r);
            traj << buf;
        }
    }

    const std::string report = gate_report(outcome, options);
    if (opt.out_path.empty() || opt.out_path == "-") {
        out << report;
    } else {
        std::ofstream f(opt.out_path);
        if (!f) throw ConfigError("cannot open output file " + opt.out_path);
        f << report;
    }
    if (!opt.state_path.empty()) {
        std::ofstream f(opt.state_path);
        if (!f) throw ConfigError("cannot open state file " + opt.state_path);
        write_state_snapshot(f, outcome.final_state);
    }
    return 0;
}

int run_sweep_command(const SweepCliOptions& opt, std::ostream& out, std::ostream& err) {
    SweepSpec spec = SweepSpec::defaults(experiment_from_string(opt.experiment));
    if (!opt.config_path.empty()) {
        const RunConfig config = load_config_file(opt.config_path);
        spec.base = config.params;
        if (config.params.n_atoms > 0 && spec.experiment != Experiment::GhzVsVjk)
            spec.n_atoms = config.params.n_atoms;
        const SweepSettings& s = config.sweep;
        if (s.experiment && experiment_from_string(*s.experiment) != spec.experiment)
            throw ConfigError("config sweep experiment conflicts with command line");
        if (s.points) spec.axis.points = *s.points;
        if (s.start) spec.axis.start = *s.start;
        if (s.stop) spec.axis.stop = *s.stop;
        if (s.log_spaced) spec.axis.log_spaced = *s.log_spaced;
        if (!s.x_max_list.empty()) spec.x_max_values = s.x_max_list;
        if (s.workers) spec.worker_count = *s.workers;
    }
    if (spec.experiment == Experiment::Susceptibility && !opt.start_set && !opt.stop_set) {
        spec.axis.start = spec.base.delta - 5.0 * spec.base.omega_c;
        spec.axis.stop = spec.base.delta + 5.0 * spec.base.omega_c;
    }
    if (opt.points > 0) spec.axis.points = opt.points;
    if (opt.start_set) spec.axis.start = opt.start;
    if (opt.stop_set) spec.axis.stop = opt.stop;
    if (opt.log_flag) spec.axis.log_spaced = true;
    if (opt.linear_flag) spec.axis.log_spaced = false;
    if (!opt.x_max_list.empty()) spec.x_max_values = parse_double_list(opt.x_max_list);
    if (opt.workers > 0) spec.worker_count = opt.workers;

    const std::vector<SweepRow> rows = run_sweep(spec);
    long failed = 0;
    for (const SweepRow& row : rows)
        if (row.failed) ++failed;
    if (failed > 0) err << failed << " sweep point(s) failed\n";

    if (opt.out_path == "-" || opt.out_path.empty()) {
        write_csv(out, spec.experiment, rows);
    } else {
        std::ofstream f(opt.out_path, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file " + opt.out_path);
        write_csv(f, spec.experiment, rows);
    }
    return failed > 0 ? 2 : 0;
}

BranchUnitary parse_branch_unitary(const std::string& text, int d_aux) {
    if (text == "identity") return BranchUnitary::identity(d_aux);
    const auto colon = text.find(':');
    const std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "phase") return BranchUnitary::global_phase(d_aux, std::stod(args));
    if (kind == "rotate") {
        const auto list = parse_double_list(args);
        if (list.size() != 2) throw ConfigError("rotate:LEVEL,THETA needs two arguments");
        return BranchUnitary::phase_rotation(d_aux, static_cast<int>(list[0]), list[1]);
    }
    if (kind == "mix") {
        const auto list = parse_double_list(args);
        if (list.size() != 3) throw ConfigError("mix:A,B,THETA needs three arguments");
        return BranchUnitary::two_level_mixing(d_aux, static_cast<int>(list[0]),
                                               static_cast<int>(list[1]), list[2]);
    }
    if (kind == "file") {
        std::ifstream f(args);
        if (!f) throw ConfigError("cannot open unitary file " + args);
        int d = 0;
        f >> d;
        if (d != d_aux) throw ConfigError("unitary dimension does not match --d-aux");
        Eigen::MatrixXcd m(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                double re, im;
                if (!(f >> re >> im)) throw ConfigError("malformed unitary file " + args);
                m(r, c) = Complex(re, im);
            }
        return BranchUnitary::from_matrix("file:" + args, std::move(m));
    }
    throw ConfigError("unknown unitary spec '" + text + "'");
}

Eigen::VectorXcd parse_phi(const std::string& text, int d_aux) {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d_aux);
    if (text == "uniform") {
        phi.setConstant(Complex(1.0 / std::sqrt(static_cast<double>(d_aux)), 0.0));
        return phi;
    }
    const auto colon = text.find(':');
    const std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "basis") {
        const int k = args.empty() ? 0 : std::stoi(args);
        if (k < 0 || k >= d_aux) throw ConfigError("--phi basis index out of range");
        phi(k) = Complex(1.0, 0.0);
        return phi;
    }
    if (kind == "file") {
        std::ifstream f(args);
        if (!f) throw ConfigError("cannot open state file " + args);
        for (int i = 0; i < d_aux; ++i) {
            double re, im;
            if (!(f >> re >> im)) throw ConfigError("malformed state file " + args);
            phi(i) = Complex(re, im);
        }
        const double n = phi.norm();
        if (n == 0.0) throw ConfigError("--phi file holds a zero state");
        phi /= n;
        return phi;
    }
    throw ConfigError("unknown --phi spec '" + text + "'");
}

int run_interfere_command(const InterfereCliOptions& opt, std::ostream& out) {
    InterferometerOptions options;
    options.n_atoms = opt.n_atoms;
    if (opt.mode == "ideal") {
        options.mode = GateMode::Ideal;
    } else if (opt.mode == "simulated") {
        options.mode = GateMode::Simulated;
        options.params = opt.config_path.empty() ? rb87_preset(opt.n_atoms)
                                                 : load_config_file(opt.config_path).params;
        if (options.params.n_atoms != opt.n_atoms)
            throw ConfigError("config n does not match --n-atoms");
    } else {
        throw ConfigError("--mode must be ideal or simulated");
    }

    const BranchUnitary u_a = parse_branch_unitary(opt.ua, opt.d_aux);
    const BranchUnitary u_b = parse_branch_unitary(opt.ub, opt.d_aux);
    const Eigen::VectorXcd phi = parse_phi(opt.phi, opt.d_aux);

    const InterferometerResult result = run_interferometer(phi, u_a, u_b, options);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n%.17g %.17g\n", result.p_plus, result.p_minus,
                  result.overlap_estimate.real(), result.overlap_estimate.imag());
    if (opt.out_path.empty() || opt.out_path == "-") {
        out << buf;
    } else {
        std::ofstream f(opt.out_path);
        if (!f) throw ConfigError("cannot open output file " + opt.out_path);
        f << buf;
    }
    return 0;
}

int run_validate_command(std::ostream& out) {
    struct Check {
        const char* name;
        bool ok;
    };
    std::vector<Check> checks;
    auto record = [&](const char* name, bool ok) { checks.push_back({name, ok}); };

    // basis indexing is a bijection
    {
        bool ok = true;
        for (EnsembleBasis basis : {EnsembleBasis::Full, EnsembleBasis::Effective}) {
            const LevelScheme scheme(basis, 2);
            ControlLevel c;
            std::vector<EnsembleLevel> labels;
            for (std::size_t i = 0; i < scheme.dim(); ++i) {
                decode_index(scheme, i, c, labels);
                ok = ok && basis_index(scheme, c, labels) == i;
            }
        }
        record("basis_index_bijection", ok);
    }

    const PhysParams preset = rb87_preset(1);

    // Raman pulse area equals pi
    {
        const RamanPulse pulse{preset.omega_p_max, preset.t_raman};
        const int n = 4000;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = preset.t_raman * i / n;
            const double o = raman_rabi(pulse, t);
            acc += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * o * o;
        }
        const double area = acc * preset.t_raman / n / 3.0 / (2.0 * preset.delta);
        record("raman_pulse_area_pi", std::abs(area / std::numbers::pi - 1.0) < 1e-6);
    }

    // dark states annihilated by the effective Hamiltonian
    {
        bool ok = true;
        const double eps = epsilon(preset);
        for (double x = 0.0; x <= 0.5 + 1e-12; x += 0.05) {
            const DarkStateSet set = dark_states(x);
            const double a = 0.5 * x * x, b = x / std::numbers::sqrt2;
            for (const auto& d : {set.d1, set.d2}) {
                const Complex ha = a * (d[0] + d[1]) + b * d[2];
                const Complex hr = b * (d[0] + d[1]) + d[2];
                const double norm =
                    std::sqrt(2.0 * std::norm(ha) + std::norm(hr)) * eps;
                ok = ok && norm <= 1e-12 * eps;
            }
        }
        record("dark_state_annihilation", ok);
    }

    // EIT zero sits at two-photon resonance; bracket inside the window so the
    // dressed-state pole near delta + epsilon stays outside.
    {
        double lo = preset.delta - 0.5 * epsilon(preset);
        double hi = preset.delta + 0.5 * epsilon(preset);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double f = susceptibility(mid, preset, 0.0, 0.0).real();
            const double flo = susceptibility(lo, preset, 0.0, 0.0).real();
            if ((f < 0) == (flo < 0)) lo = mid;
            else hi = mid;
        }
        record("eit_zero_at_two_photon_resonance",
               std::abs(0.5 * (lo + hi) - preset.delta) <= 1e-9 * preset.delta);
    }

    // Hermiticity of both models without decay
    {
        bool ok = true;
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss;
        for (ModelKind model : {ModelKind::Effective, ModelKind::Full}) {
            PhysParams p = rb87_preset(2);
            const HamiltonianOperator op(HamiltonianSpec::raman_window(model, p, false));
            const std::size_t dim = op.dim();
            std::vector<Complex> a(dim), b(dim), ha(dim), hb(dim);
            for (int trial = 0; trial < 5; ++trial) {
                for (auto& v : a) v = Complex(gauss(rng), gauss(rng));
                for (auto& v : b) v = Complex(gauss(rng), gauss(rng));
                const double t = p.t_raman * (0.1 + 0.8 * trial / 4.0);
                op.apply(t, a, ha);
                op.apply(t, b, hb);
                Complex left(0, 0), right(0, 0);
                double scale = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    left += std::conj(a[i]) * hb[i];
                    right += std::conj(b[i]) * ha[i];
                    scale += std::abs(hb[i]);
                }
                ok = ok && std::abs(left - std::conj(right)) <= 1e-12 * std::max(1.0, scale);
            }
        }
        record("hamiltonian_hermiticity", ok);
    }

    // constant-coupling Rabi flop against the analytic formula
    {
        class RabiOp final : public TimeDependentOperator {
          public:
            explicit RabiOp(double omega) : omega_(omega) {}
            void apply(double, std::span<const Complex> in, std::span<Complex> out) const override {
                for (auto& c : out) c = Complex(0, 0);
                out[0] = 0.5 * omega_ * in[1];
                out[1] = 0.5 * omega_ * in[0];
            }
            std::size_t dim() const override { return 3; }

          private:
            double omega_;
        };
        const LevelScheme scheme(EnsembleBasis::Effective, 0);
        const CompositeState start = CompositeState::basis_state(scheme, ControlLevel::Zero, "");
        const double omega = 1.0e6;
        const RabiOp op(omega);
        const EvolutionReport r = evolve(start, op, 0.0, std::numbers::pi / omega);
        const double p1 = std::norm(r.final_state.amplitudes[1]);
        record("rabi_pi_pulse_transfer", std::abs(p1 - 1.0) < 1e-8);
    }

    bool all_ok = true;
    for (const Check& c : checks) {
        out << (c.ok ? "ok " : "FAIL ") << c.name << "\n";
        all_ok = all_ok && c.ok;
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"EIT-based mesoscopic Rydberg gate simulator"};
    app.require_subcommand(1);

    GateCliOptions gate_opt;
    CLI::App* gate_cmd = app.add_subcommand("gate", "run the CNOT^N gate once");
    gate_cmd->add_option("--config", gate_opt.config_path, "config file");
    gate_cmd->add_option("--control", gate_opt.control, "control input: 0|1|+|i");
    gate_cmd->add_option("--ensemble", gate_opt.ensemble, "ensemble labels, e.g. AAB");
    gate_cmd->add_option("--n", gate_opt.n_atoms, "number of ensemble atoms");
    gate_cmd->add_option("--model", gate_opt.model, "effective|full");
    gate_cmd->add_flag("--decay", gate_opt.decay, "include radiative decay");
    gate_cmd->add_option("--v-control", gate_opt.v_control, "V_k in units of epsilon");
    gate_cmd->add_option("--v-ensemble", gate_opt.v_ensemble,
                         "V_jk in units of epsilon (scalar or rows a,b;c,d)");
    gate_cmd->add_option("--x-max", gate_opt.x_max, "set omega_c from x_max");
    gate_cmd->add_option("--resolved-control", gate_opt.resolved_control_mhz,
                         "resolve control pi pulses with this Rabi frequency (MHz)");
    gate_cmd->add_option("--rel-tol", gate_opt.rel_tol, "integrator relative tolerance");
    gate_cmd->add_option("--abs-tol", gate_opt.abs_tol, "integrator absolute tolerance");
    gate_cmd->add_option("--trajectory", gate_opt.trajectory_path, "write trajectory CSV");
    gate_cmd->add_option("--sample-every-us", gate_opt.sample_every_us,
                         "trajectory sample interval (us)");
    gate_cmd->add_option("--save-state", gate_opt.state_path, "write final state snapshot");
    gate_cmd->add_option("--out", gate_opt.out_path, "report file (default stdout)");

    SweepCliOptions sweep_opt;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a figure-style parameter sweep");
    sweep_cmd->add_option("experiment", sweep_opt.experiment,
                          "susceptibility|blocking|transfer|ghz")
        ->required();
    sweep_cmd->add_option("--config", sweep_opt.config_path, "config file");
    sweep_cmd->add_option("--points", sweep_opt.points, "number of axis points");
    auto* start_opt = sweep_cmd->add_option("--start", sweep_opt.start, "axis start");
    auto* stop_opt = sweep_cmd->add_option("--stop", sweep_opt.stop, "axis stop");
    sweep_cmd->add_flag("--log", sweep_opt.log_flag, "log-spaced axis");
    sweep_cmd->add_flag("--linear", sweep_opt.linear_flag, "linearly spaced axis");
    sweep_cmd->add_option("--x-max-list", sweep_opt.x_max_list, "GHZ curves, e.g. 0.1,0.2");
    sweep_cmd->add_option("--workers", sweep_opt.workers, "worker thread count");
    sweep_cmd->add_option("--out", sweep_opt.out_path, "CSV path, - for stdout");

    InterfereCliOptions int_opt;
    CLI::App* int_cmd = app.add_subcommand("interfere", "run the many-body interferometer");
    int_cmd->add_option("--mode", int_opt.mode, "ideal|simulated");
    int_cmd->add_option("--n-atoms", int_opt.n_atoms, "ensemble size");
    int_cmd->add_option("--d-aux", int_opt.d_aux, "auxiliary register dimension");
    int_cmd->add_option("--ua", int_opt.ua, "identity|phase:t|rotate:l,t|mix:a,b,t|file:PATH");
    int_cmd->add_option("--ub", int_opt.ub, "branch unitary for B");
    int_cmd->add_option("--phi", int_opt.phi, "basis:k|uniform|file:PATH");
    int_cmd->add_option("--config", int_opt.config_path, "config file (simulated mode)");
    int_cmd->add_option("--out", int_opt.out_path, "output file (default stdout)");

    CLI::App* validate_cmd = app.add_subcommand("validate", "run the quick invariant suite");

    int preset_n = 1;
    CLI::App* preset_cmd = app.add_subcommand("preset", "preset utilities");
    preset_cmd->require_subcommand(1);
    CLI::App* preset_dump_cmd = preset_cmd->add_subcommand("dump", "print the rb87 preset");
    preset_dump_cmd->add_option("--n", preset_n, "number of ensemble atoms");

    std::vector<const char*> argv;
    argv.push_back("rydgate");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gate_cmd->parsed()) return run_gate_command(gate_opt, out, err);
        if (sweep_cmd->parsed()) {
            sweep_opt.start_set = start_opt->count() > 0;
            sweep_opt.stop_set = stop_opt->count() > 0;
            return run_sweep_command(sweep_opt, out, err);
        }
        if (int_cmd->parsed()) return run_interfere_command(int_opt, out);
        if (validate_cmd->parsed()) return run_validate_command(out);
        if (preset_cmd->parsed()) {
            out << preset_dump_text(preset_n);
            return 0;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace rydgate
