#pragma once

// Physical parameters, pulse shapes, derived scales and time-dependent
// Hamiltonian assembly for the four-level model and for the effective
// three-level model left after adiabatic elimination of the intermediate
// state. All frequencies and energies are angular (rad/s) with hbar = 1;
// gamma_p and 1/tau_r are plain rates.

#include <string>
#include <vector>

#include "rydgate/hilbert.hpp"

namespace rydgate {

struct PhysParams {
    double delta = 0.0;        // Raman detuning from |P>, rad/s
    double omega_c = 0.0;      // control-field Rabi frequency P<->R, rad/s
    double omega_p_max = 0.0;  // peak Raman Rabi frequency (both legs), rad/s
    double t_raman = 0.0;      // Raman pulse duration, s
    double gamma_p = 0.0;      // decay rate of |P>, 1/s
    double tau_r = 0.0;        // lifetime of the control Rydberg state, s
    std::vector<double> v_control;             // V_k, rad/s
    std::vector<std::vector<double>> v_ensemble;  // V_jk, rad/s, symmetric, zero diagonal
    int n_atoms = 0;

    void validate() const;                  // throws on structural violations
    std::vector<std::string> warnings() const;  // regime checks, non-fatal
};

// Default parameter set for 87Rb: delta = 2pi*1.2 GHz, max omega_p =
// 2pi*70 MHz, omega_c = 6*max(omega_p), gamma_p = 36e6 1/s, tau_r = 66 us.
// The pulse duration is derived from the pi-pulse area condition; all
// interaction strengths are given in units of epsilon.
PhysParams rb87_preset(int n_atoms, double v_control_over_eps = 40.0,
                       double v_ensemble_over_eps = 0.0);

// Same preset with omega_c chosen to realize the given x_max at the preset's
// peak Raman Rabi frequency. Interaction strengths track the resulting
// epsilon.
PhysParams rb87_preset_x_max(double x_max, int n_atoms, double v_control_over_eps = 40.0,
                             double v_ensemble_over_eps = 0.0);

// epsilon = omega_c^2 / (4 delta)
double epsilon(const PhysParams& params);

// Peak Rabi frequency sqrt(16 pi delta / (3 T)) that makes the smooth Raman
// pulse a pi pulse, and its inverse giving T from the peak.
double pi_pulse_omega_max(double delta, double t_raman);
double pi_pulse_duration(double delta, double omega_p_max);

struct RamanPulse {
    double omega_max = 0.0;  // rad/s
    double duration = 0.0;   // s
};

// omega_max * sin^2(pi t / T); throws if t is outside [0, T].
double raman_rabi(const RamanPulse& pulse, double t);

struct DerivedScales {
    double epsilon = 0.0;  // rad/s
    double x_max = 0.0;    // sqrt(2) * max(omega_p) / omega_c
};
DerivedScales derived_scales(const PhysParams& params);
double x_of_t(const PhysParams& params, double t);

enum class ModelKind { Full, Effective };

struct HamiltonianSpec {
    ModelKind model = ModelKind::Effective;
    PhysParams params;
    RamanPulse pulse;
    bool include_decay = false;
    bool raman_on = true;
    double control_rabi = 0.0;  // resolved control pulses; 0 = drive off

    static HamiltonianSpec raman_window(ModelKind model, const PhysParams& params,
                                        bool include_decay = false);
    static HamiltonianSpec control_pulse(ModelKind model, const PhysParams& params,
                                         double omega_r, bool include_decay = false);
    LevelScheme scheme() const;
};

// Matrix-free application of H(t); the full matrix is never materialized.
// Interaction shifts and static decay terms live in a precomputed diagonal,
// the laser couplings are per-atom blocks walked over the amplitude vector.
class HamiltonianOperator final : public TimeDependentOperator {
  public:
    explicit HamiltonianOperator(HamiltonianSpec spec);

    void apply(double t, std::span<const Complex> in, std::span<Complex> out) const override;
    std::size_t dim() const override { return scheme_.dim(); }
    double max_step_hint() const override;
    double max_frequency() const override;

    const LevelScheme& scheme() const { return scheme_; }
    const HamiltonianSpec& spec() const { return spec_; }

  private:
    void apply_effective(double t, std::span<const Complex> in, std::span<Complex> out) const;
    void apply_full(double t, std::span<const Complex> in, std::span<Complex> out) const;
    void build_diag_view();

    HamiltonianSpec spec_;
    LevelScheme scheme_;
    std::vector<double> diag_re_;
    std::vector<double> diag_im_;
    std::vector<double> diag2_;  // diagonal duplicated per quadrature
    bool diag_has_imag_ = false;
    std::vector<std::size_t> atom_stride_;
};

// Steady-state linear susceptibility of a weak probe on the A->P leg with
// control field omega_c and the Rydberg level shifted by rydberg_shift.
// delta_probe is measured from the |P> level, so two-photon resonance sits
// at delta_probe = delta when the shift vanishes. gamma_r < 0 selects the
// default regulator 1e-4 * gamma_p on the Rydberg coherence.
Complex susceptibility(double delta_probe, const PhysParams& params, double rydberg_shift,
                       double gamma_r = -1.0);

}  // namespace rydgate
