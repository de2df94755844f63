#pragma once

// The CNOT^N protocol: pi pulse on the control atom, smooth Raman pi pulse on
// the ensemble, second control pi pulse. Also the analytic structure behind
// it: single-atom dark states, the two-atom grey state and its energy, the
// accumulated grey-state phase and the closed-form blocking fidelity.

#include <string>

#include "rydgate/dynamics.hpp"
#include "rydgate/physics.hpp"

namespace rydgate {

enum class ControlPulseMode { Instant, Resolved };

struct GateOptions {
    ModelKind model = ModelKind::Effective;
    bool include_decay = false;
    ControlPulseMode control_pulse = ControlPulseMode::Instant;
    double control_rabi = 0.0;            // rad/s, Resolved mode
    double control_pulse_duration = 0.0;  // s; control_rabi * duration must equal pi
    IntegratorConfig integrator;

    void validate() const;
};

struct ControlInput {
    Complex alpha{1.0, 0.0};  // |0> amplitude
    Complex beta{0.0, 0.0};   // |1> amplitude

    static ControlInput zero() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static ControlInput one() { return {{0.0, 0.0}, {1.0, 0.0}}; }
    static ControlInput plus();    // (|0> + |1>)/sqrt(2)
    static ControlInput plus_i();  // (|0> + i|1>)/sqrt(2)
    void validate() const;
};

struct GateOutcome {
    CompositeState final_state;
    double fidelity = 0.0;
    double conditional_phase = 0.0;  // arg<desired|obtained>
    double norm_loss = 0.0;
    double max_rydberg_double_occupancy = 0.0;
    double max_control_rydberg_joint = 0.0;
    long steps_taken = 0;
    std::vector<TrajectorySample> trajectory;  // when sampling was enabled
};

// exp(-i pi sigma_x / 2) on the control {|1>,|r>} transition.
SiteOperator control_pi_pulse();

// Target state of the gate: the |0> branch keeps its labels, the |1> branch
// swaps A <-> B and carries the -(-1)^N phase the pulse sequence produces.
CompositeState desired_gate_output(const LevelScheme& scheme, ControlInput control,
                                   const std::string& ensemble_labels);

GateOutcome run_gate(ControlInput control_in, const std::string& ensemble_in,
                     const PhysParams& params, const GateOptions& options);

// The three-pulse sequence applied to an arbitrary composite state.
EvolutionReport run_gate_sequence(const CompositeState& initial, const PhysParams& params,
                                  const GateOptions& options);

struct DarkStateSet {
    double x = 0.0;
    std::array<Complex, 3> d1{};  // components in {A,B,R}
    std::array<Complex, 3> d2{};
};
DarkStateSet dark_states(double x);

struct GreyStateInfo {
    double x = 0.0;
    double v12 = 0.0;            // rad/s; +inf marks the strong-interaction limit
    std::vector<Complex> state;  // two-atom amplitudes, {A,B,R} x {A,B,R}
    double energy = 0.0;         // rad/s
};

// Strong-interaction grey state (1+x^4)^{-1/2} [(1-x^2)|++> - x(|+R>+|R+>)]
// with its leading-order energy 2 eps x^4.
GreyStateInfo grey_state_limit(double x, double eps = 1.0);

// Exact eigenvalue of the two-atom effective Hamiltonian (plus v12 on |RR>)
// for the eigenstate adiabatically connected to |++> at x -> 0, found by
// eigen-decomposition with maximal-overlap continuation over a 400-point
// grid. Throws NumericalError when the continuation becomes ambiguous.
double grey_energy_tracked(double x, double v12_over_eps, double eps = 1.0);

enum class PhiConvention { HalfEgIntegral, FullEgIntegral };
const char* to_string(PhiConvention convention);

struct GreyPhase {
    double phi = 0.0;  // rad
    PhiConvention convention = PhiConvention::HalfEgIntegral;
};

// Quadrature of the grey-state energy 2 eps x^4(t) over the pulse window.
// HalfEgIntegral (the default; selected against direct N=2 integration)
// halves the integral, FullEgIntegral returns it whole.
GreyPhase grey_phase(const PhysParams& params,
                     PhiConvention convention = PhiConvention::HalfEgIntegral);

// F_b = |sum_m binom(N,m)/2^N exp(-i m (m-1) phi)|^2
double analytic_blocking_fidelity(int n_atoms, double phi);

// |<A^N|psi(T)>|^2 from full integration, control parked in |0>, effective
// model, decay off.
double blocking_fidelity_numeric(int n_atoms, const PhysParams& params,
                                 const IntegratorConfig& cfg = {});

// Settles the factor-2 question empirically: compares the closed-form F_b
// under both conventions against a direct N=2 integration at strong
// ensemble-ensemble interaction and returns the closer one.
PhiConvention resolve_phi_convention(double x_max, double v_jk_over_eps = 1e4);
PhiConvention resolve_phi_convention(double x_max, double v_jk_over_eps,
                                     const IntegratorConfig& cfg);

// Machine-readable gate run report, key=value lines.
std::string gate_report(const GateOutcome& outcome, const GateOptions& options);

}  // namespace rydgate
