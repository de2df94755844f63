#include "rydgate/gate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rydgate {

namespace {
constexpr Complex kI(0.0, 1.0);
}

void GateOptions::validate() const {
    if (control_pulse == ControlPulseMode::Resolved) {
        if (control_rabi <= 0.0 || control_pulse_duration <= 0.0)
            throw std::invalid_argument("resolved control pulse needs omega_r and duration");
        const double area = control_rabi * control_pulse_duration;
        if (std::abs(area - std::numbers::pi) > 1e-6)
            throw std::invalid_argument("resolved control pulse area must equal pi");
    }
    integrator.validate();
}

ControlInput ControlInput::plus() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {{s, 0.0}, {s, 0.0}};
}

ControlInput ControlInput::plus_i() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {{s, 0.0}, {0.0, s}};
}

void ControlInput::validate() const {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
        throw std::invalid_argument("control amplitudes must be normalized");
}

SiteOperator control_pi_pulse() {
    const std::array<Complex, 9> entries = {
        Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0),
        Complex(0.0, 0.0), Complex(0.0, 0.0), -kI,
        Complex(0.0, 0.0), -kI,               Complex(0.0, 0.0),
    };
    return SiteOperator::control_op(entries);
}

namespace {

std::string swapped_labels(const std::string& labels) {
    std::string out = labels;
    for (char& c : out) {
        if (c == 'A') c = 'B';
        else if (c == 'B') c = 'A';
        else throw std::invalid_argument("gate input labels must be A or B");
    }
    return out;
}

}  // namespace

CompositeState desired_gate_output(const LevelScheme& scheme, ControlInput control,
                                   const std::string& ensemble_labels) {
    // Two control pi pulses contribute (-i)^2 and each atom's Raman pi pulse
    // maps |A> -> -|B>, so the swap branch carries -(-1)^N.
    const double transfer_phase = scheme.n_atoms % 2 == 0 ? -1.0 : 1.0;
    CompositeState desired(scheme);
    if (control.alpha != Complex(0.0, 0.0)) {
        desired.add_scaled(
            CompositeState::basis_state(scheme, ControlLevel::Zero, ensemble_labels),
            control.alpha);
    }
    if (control.beta != Complex(0.0, 0.0)) {
        desired.add_scaled(CompositeState::basis_state(scheme, ControlLevel::One,
                                                       swapped_labels(ensemble_labels)),
                           control.beta * transfer_phase);
    }
    return desired;
}

EvolutionReport run_gate_sequence(const CompositeState& initial, const PhysParams& params,
                                  const GateOptions& options) {
    const HamiltonianSpec raman =
        HamiltonianSpec::raman_window(options.model, params, options.include_decay);
    const double t_raman = params.t_raman;

    if (options.control_pulse == ControlPulseMode::Instant) {
        const SiteOperator pulse = control_pi_pulse();
        CompositeState psi = apply_site_operator(initial, pulse);
        const HamiltonianOperator op(raman);
        EvolutionReport report = evolve(psi, op, 0.0, t_raman, options.integrator);
        report.final_state = apply_site_operator(report.final_state, pulse);
        report.norm_loss = 1.0 - report.final_state.squared_norm();
        return report;
    }
    const HamiltonianSpec ctrl = HamiltonianSpec::control_pulse(
        options.model, params, options.control_rabi, options.include_decay);
    const HamiltonianOperator ctrl_op(ctrl);
    const HamiltonianOperator raman_op(raman);
    const double tau = options.control_pulse_duration;
    const std::array<EvolutionSegment, 3> segments = {{
        {&ctrl_op, -tau, 0.0},
        {&raman_op, 0.0, t_raman},
        {&ctrl_op, t_raman, t_raman + tau},
    }};
    return evolve_piecewise(initial, segments, options.integrator);
}

GateOutcome run_gate(ControlInput control_in, const std::string& ensemble_in,
                     const PhysParams& params, const GateOptions& options) {
    options.validate();
    control_in.validate();
    params.validate();
    if (static_cast<int>(ensemble_in.size()) != params.n_atoms)
        throw std::invalid_argument("ensemble label string length must equal n_atoms");

    const LevelScheme scheme =
        HamiltonianSpec::raman_window(options.model, params, options.include_decay).scheme();

    CompositeState psi(scheme);
    if (control_in.alpha != Complex(0.0, 0.0)) {
        psi.add_scaled(CompositeState::basis_state(scheme, ControlLevel::Zero, ensemble_in),
                       control_in.alpha);
    }
    if (control_in.beta != Complex(0.0, 0.0)) {
        psi.add_scaled(CompositeState::basis_state(scheme, ControlLevel::One, ensemble_in),
                       control_in.beta);
    }

    EvolutionReport report = run_gate_sequence(psi, params, options);
    const CompositeState desired = desired_gate_output(scheme, control_in, ensemble_in);
    const Complex ov = overlap(desired, report.final_state);

    GateOutcome outcome;
    outcome.fidelity = std::norm(ov);
    outcome.conditional_phase = std::arg(ov);
    outcome.norm_loss = 1.0 - report.final_state.squared_norm();
    outcome.max_rydberg_double_occupancy = report.max_rydberg_double_occupancy;
    outcome.max_control_rydberg_joint = report.max_control_rydberg_joint;
    outcome.steps_taken = report.steps_taken;
    outcome.trajectory = std::move(report.trajectory);
    outcome.final_state = std::move(report.final_state);
    return outcome;
}

DarkStateSet dark_states(double x) {
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
    DarkStateSet set;
    set.x = x;
    const double s = 1.0 / std::numbers::sqrt2;
    set.d1 = {Complex(s, 0.0), Complex(-s, 0.0), Complex(0.0, 0.0)};
    const double norm = 1.0 / std::sqrt(1.0 + x * x);
    set.d2 = {Complex(s * norm, 0.0), Complex(s * norm, 0.0), Complex(-x * norm, 0.0)};
    return set;
}

namespace {

// Single-atom effective Hamiltonian in {A,B,R}, units of eps.
Eigen::Matrix3d effective_atom_matrix(double x) {
    Eigen::Matrix3d k;
    const double a = 0.5 * x * x;
    const double b = x / std::numbers::sqrt2;
    k << a, a, b,
         a, a, b,
         b, b, 1.0;
    return k;
}

// Two atoms in {A,B,R} x {A,B,R} with v12 on |RR>, units of eps.
Eigen::MatrixXd two_atom_matrix(double x, double v12_over_eps) {
    const Eigen::Matrix3d k = effective_atom_matrix(x);
    const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(9, 9);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    h(3 * a + b, 3 * c + d) = k(a, c) * id(b, d) + id(a, c) * k(b, d);
    h(8, 8) += v12_over_eps;
    return h;
}

Eigen::VectorXd dark_product_seed(double x) {
    const DarkStateSet set = dark_states(x);
    Eigen::Vector3d d2;
    d2 << set.d2[0].real(), set.d2[1].real(), set.d2[2].real();
    Eigen::VectorXd seed(9);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) seed(3 * a + b) = d2(a) * d2(b);
    return seed;
}

}  // namespace

GreyStateInfo grey_state_limit(double x, double eps) {
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
    GreyStateInfo info;
    info.x = x;
    info.v12 = std::numeric_limits<double>::infinity();
    info.energy = 2.0 * eps * x * x * x * x;
    info.state.assign(9, Complex(0.0, 0.0));
    const double norm = 1.0 / std::sqrt(1.0 + x * x * x * x);
    const double c_pp = (1.0 - x * x) * norm;
    const double c_pr = -x * norm;
    // |++> over {A,B} pairs
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) info.state[static_cast<std::size_t>(3 * a + b)] = 0.5 * c_pp;
    // (|+R> + |R+>)
    for (int a = 0; a < 2; ++a) {
        info.state[static_cast<std::size_t>(3 * a + 2)] = c_pr / std::numbers::sqrt2;
        info.state[static_cast<std::size_t>(3 * 2 + a)] = c_pr / std::numbers::sqrt2;
    }
    return info;
}

double grey_energy_tracked(double x, double v12_over_eps, double eps) {
    if (x <= 0.0 || x > 0.5) throw std::invalid_argument("x must lie in (0, 0.5]");
    if (v12_over_eps < 0.0) throw std::invalid_argument("v12 must be >= 0");

    constexpr int kGridPoints = 400;
    Eigen::VectorXd tracked = dark_product_seed(x / kGridPoints);
    double energy = 0.0;
    for (int i = 1; i <= kGridPoints; ++i) {
        const double xi = x * static_cast<double>(i) / kGridPoints;
        const Eigen::MatrixXd h = two_atom_matrix(xi, v12_over_eps);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const Eigen::VectorXd& values = es.eigenvalues();
        const Eigen::MatrixXd& vectors = es.eigenvectors();

        int best = 0;
        double best_overlap = 0.0;
        for (int j = 0; j < 9; ++j) {
            const double o = std::abs(tracked.dot(vectors.col(j)));
            if (o > best_overlap) {
                best_overlap = o;
                best = j;
            }
        }

        // Eigenvectors inside a numerically degenerate cluster are an
        // arbitrary basis of the cluster; project the previous vector onto
        // the whole cluster instead of trusting one member.
        const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
        const double degeneracy_tol = 1e-12 * scale;
        Eigen::VectorXd next = Eigen::VectorXd::Zero(9);
        for (int j = 0; j < 9; ++j) {
            if (std::abs(values(j) - values(best)) <= degeneracy_tol)
                next += tracked.dot(vectors.col(j)) * vectors.col(j);
        }
        const double captured = next.norm();
        if (captured * captured < 0.5)
            throw NumericalError("grey-state eigenvalue tracking ambiguous (crossing at x=" +
                                 std::to_string(xi) + ")");
        tracked = next / captured;
        energy = values(best);
    }
    return energy * eps;
}

const char* to_string(PhiConvention convention) {
    return convention == PhiConvention::HalfEgIntegral ? "half_eg_integral" : "full_eg_integral";
}

GreyPhase grey_phase(const PhysParams& params, PhiConvention convention) {
    const double eps = epsilon(params);
    const double t_raman = params.t_raman;
    // Simpson quadrature of 2 eps x^4(t); the integrand is smooth and
    // vanishes at both endpoints.
    const int n = 2000;
    const double h = t_raman / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * h;
        const double x = x_of_t(params, t);
        const double f = 2.0 * eps * x * x * x * x;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * f;
    }
    const double full_integral = acc * h / 3.0;
    GreyPhase out;
    out.convention = convention;
    out.phi = convention == PhiConvention::HalfEgIntegral ? 0.5 * full_integral : full_integral;
    return out;
}

double analytic_blocking_fidelity(int n_atoms, double phi) {
    if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
    Complex sum(0.0, 0.0);
    double coeff = std::pow(2.0, -n_atoms);  // binom(N,0)/2^N
    for (int m = 0; m <= n_atoms; ++m) {
        sum += coeff * std::exp(-kI * (static_cast<double>(m) * (m - 1.0) * phi));
        coeff *= static_cast<double>(n_atoms - m) / (m + 1.0);
    }
    return std::norm(sum);
}

double blocking_fidelity_numeric(int n_atoms, const PhysParams& params,
                                 const IntegratorConfig& cfg) {
    if (params.n_atoms != n_atoms)
        throw std::invalid_argument("params.n_atoms must match n_atoms");
    const HamiltonianSpec spec =
        HamiltonianSpec::raman_window(ModelKind::Effective, params, false);
    const LevelScheme scheme = spec.scheme();
    const CompositeState initial = CompositeState::basis_state(
        scheme, ControlLevel::Zero, std::string(static_cast<std::size_t>(n_atoms), 'A'));
    const HamiltonianOperator op(spec);
    IntegratorConfig run_cfg = cfg;
    if (run_cfg.method == StepperKind::RkAdaptive && is_stiff(op)) {
        run_cfg.method = StepperKind::Rk4Fixed;
        run_cfg.dt = stable_fixed_step(op, params.t_raman);
    }
    const EvolutionReport report = evolve(initial, op, 0.0, params.t_raman, run_cfg);
    return std::norm(overlap(initial, report.final_state));
}

PhiConvention resolve_phi_convention(double x_max, double v_jk_over_eps) {
    return resolve_phi_convention(x_max, v_jk_over_eps, IntegratorConfig{});
}

PhiConvention resolve_phi_convention(double x_max, double v_jk_over_eps,
                                     const IntegratorConfig& cfg) {
    const PhysParams params = rb87_preset_x_max(x_max, 2, 40.0, v_jk_over_eps);
    const double f_sim = blocking_fidelity_numeric(2, params, cfg);
    const double f_half =
        analytic_blocking_fidelity(2, grey_phase(params, PhiConvention::HalfEgIntegral).phi);
    const double f_full =
        analytic_blocking_fidelity(2, grey_phase(params, PhiConvention::FullEgIntegral).phi);
    return std::abs(f_sim - f_half) <= std::abs(f_sim - f_full) ? PhiConvention::HalfEgIntegral
                                                                : PhiConvention::FullEgIntegral;
}

std::string gate_report(const GateOutcome& outcome, const GateOptions& options) {
    std::ostringstream out;
    char buf[64];
    auto emit = [&](const char* key, double value) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        out << key << "=" << buf << "\n";
    };
    emit("fidelity", outcome.fidelity);
    emit("conditional_phase", outcome.conditional_phase);
    emit("norm_loss", outcome.norm_loss);
    emit("max_double_occupancy", outcome.max_rydberg_double_occupancy);
    emit("max_control_rydberg", outcome.max_control_rydberg_joint);
    out << "steps=" << outcome.steps_taken << "\n";
    out << "model=" << (options.model == ModelKind::Full ? "full" : "effective") << "\n";
    out << "decay=" << (options.include_decay ? "on" : "off") << "\n";
    out << "control_pulse="
        << (options.control_pulse == ControlPulseMode::Instant ? "instant" : "resolved") << "\n";
    out << "transfer_phase_convention=-(-1)^N\n";
    out << "phi_convention=" << to_string(PhiConvention::HalfEgIntegral) << "\n";
    return out.str();
}

}  // namespace rydgate
