#include "rydgate/physics.hpp"

#include <cmath>
#include <numbers>

namespace rydgate {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void PhysParams::validate() const {
    if (n_atoms < 0) throw std::invalid_argument("n_atoms must be >= 0");
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    if (omega_c < 0.0 || omega_p_max < 0.0) throw std::invalid_argument("negative Rabi frequency");
    if (t_raman <= 0.0) throw std::invalid_argument("t_raman must be positive");
    if (gamma_p < 0.0) throw std::invalid_argument("gamma_p must be >= 0");
    if (tau_r < 0.0) throw std::invalid_argument("tau_r must be >= 0");
    if (static_cast<int>(v_control.size()) != n_atoms)
        throw std::invalid_argument("v_control size must equal n_atoms");
    if (static_cast<int>(v_ensemble.size()) != n_atoms)
        throw std::invalid_argument("v_ensemble must be n_atoms x n_atoms");
    for (int j = 0; j < n_atoms; ++j) {
        if (static_cast<int>(v_ensemble[j].size()) != n_atoms)
            throw std::invalid_argument("v_ensemble must be n_atoms x n_atoms");
        if (v_ensemble[j][j] != 0.0)
            throw std::invalid_argument("v_ensemble diagonal must be zero");
        for (int k = 0; k < n_atoms; ++k) {
            if (v_ensemble[j][k] < 0.0)
                throw std::invalid_argument("v_ensemble entries must be >= 0");
            if (v_ensemble[j][k] != v_ensemble[k][j])
                throw std::invalid_argument("v_ensemble must be symmetric");
        }
    }
}

std::vector<std::string> PhysParams::warnings() const {
    std::vector<std::string> out;
    if (delta < 2.0 * omega_c)
        out.push_back("delta < 2*omega_c: adiabatic elimination of |P> is marginal");
    if (omega_c <= omega_p_max && omega_c > 0.0)
        out.push_back("omega_c <= max(omega_p): outside the EIT regime omega_c > omega_p");
    return out;
}

PhysParams rb87_preset(int n_atoms, double v_control_over_eps, double v_ensemble_over_eps) {
    PhysParams p;
    p.n_atoms = n_atoms;
    p.delta = kTwoPi * 1.2e9;
    p.omega_p_max = kTwoPi * 70.0e6;
    p.omega_c = 6.0 * p.omega_p_max;
    p.t_raman = pi_pulse_duration(p.delta, p.omega_p_max);
    p.gamma_p = 36.0e6;
    p.tau_r = 66.0e-6;
    const double eps = epsilon(p);
    p.v_control.assign(static_cast<std::size_t>(n_atoms), v_control_over_eps * eps);
    p.v_ensemble.assign(static_cast<std::size_t>(n_atoms),
                        std::vector<double>(static_cast<std::size_t>(n_atoms), 0.0));
    for (int j = 0; j < n_atoms; ++j)
        for (int k = 0; k < n_atoms; ++k)
            if (j != k) p.v_ensemble[j][k] = v_ensemble_over_eps * eps;
    return p;
}

PhysParams rb87_preset_x_max(double x_max, int n_atoms, double v_control_over_eps,
                             double v_ensemble_over_eps) {
    if (x_max <= 0.0) throw std::invalid_argument("x_max must be positive");
    PhysParams p = rb87_preset(n_atoms, 0.0, 0.0);
    p.omega_c = std::numbers::sqrt2 * p.omega_p_max / x_max;
    const double eps = epsilon(p);
    for (double& v : p.v_control) v = v_control_over_eps * eps;
    for (int j = 0; j < n_atoms; ++j)
        for (int k = 0; k < n_atoms; ++k)
            if (j != k) p.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                v_ensemble_over_eps * eps;
    return p;
}

double epsilon(const PhysParams& params) {
    if (params.delta == 0.0) throw std::invalid_argument("delta must be nonzero");
    return params.omega_c * params.omega_c / (4.0 * params.delta);
}

double pi_pulse_omega_max(double delta, double t_raman) {
    if (delta <= 0.0 || t_raman <= 0.0)
        throw std::invalid_argument("delta and t_raman must be positive");
    return std::sqrt(16.0 * std::numbers::pi * delta / (3.0 * t_raman));
}

double pi_pulse_duration(double delta, double omega_p_max) {
    if (delta <= 0.0 || omega_p_max <= 0.0)
        throw std::invalid_argument("delta and omega_p_max must be positive");
    return 16.0 * std::numbers::pi * delta / (3.0 * omega_p_max * omega_p_max);
}

double raman_rabi(const RamanPulse& pulse, double t) {
    const double slack = 1e-9 * pulse.duration;
    if (t < -slack || t > pulse.duration + slack)
        throw std::invalid_argument("time outside the Raman pulse window");
    const double tc = std::min(std::max(t, 0.0), pulse.duration);
    const double s = std::sin(std::numbers::pi * tc / pulse.duration);
    return pulse.omega_max * s * s;
}

DerivedScales derived_scales(const PhysParams& params) {
    DerivedScales d;
    d.epsilon = epsilon(params);
    d.x_max = params.omega_c > 0.0 ? std::numbers::sqrt2 * params.omega_p_max / params.omega_c
                                   : 0.0;
    return d;
}

double x_of_t(const PhysParams& params, double t) {
    if (params.omega_c <= 0.0) throw std::invalid_argument("x(t) requires omega_c > 0");
    RamanPulse pulse{params.omega_p_max, params.t_raman};
    return std::numbers::sqrt2 * raman_rabi(pulse, t) / params.omega_c;
}

HamiltonianSpec HamiltonianSpec::raman_window(ModelKind model, const PhysParams& params,
                                              bool include_decay) {
    HamiltonianSpec spec;
    spec.model = model;
    spec.params = params;
    spec.pulse = RamanPulse{params.omega_p_max, params.t_raman};
    spec.include_decay = include_decay;
    spec.raman_on = true;
    return spec;
}

HamiltonianSpec HamiltonianSpec::control_pulse(ModelKind model, const PhysParams& params,
                                               double omega_r, bool include_decay) {
    if (omega_r <= 0.0) throw std::invalid_argument("omega_r must be positive");
    HamiltonianSpec spec;
    spec.model = model;
    spec.params = params;
    spec.pulse = RamanPulse{0.0, params.t_raman};
    spec.include_decay = include_decay;
    spec.raman_on = false;
    spec.control_rabi = omega_r;
    return spec;
}

LevelScheme HamiltonianSpec::scheme() const {
    return LevelScheme(model == ModelKind::Full ? EnsembleBasis::Full : EnsembleBasis::Effective,
                       params.n_atoms);
}

HamiltonianOperator::HamiltonianOperator(HamiltonianSpec spec)
    : spec_(std::move(spec)), scheme_(spec_.scheme()) {
    spec_.params.validate();
    const std::size_t dim = scheme_.dim();
    const std::size_t d_e = static_cast<std::size_t>(scheme_.ensemble_dim());
    const int r_index = scheme_.level_index(EnsembleLevel::R);
    const int n = scheme_.n_atoms;

    atom_stride_.assign(static_cast<std::size_t>(std::max(n, 1)), 0);
    if (n > 0) {
        atom_stride_[static_cast<std::size_t>(n - 1)] = 1;
        for (int k = n - 2; k >= 0; --k)
            atom_stride_[static_cast<std::size_t>(k)] = atom_stride_[static_cast<std::size_t>(k + 1)] * d_e;
    }

    diag_re_.assign(dim, 0.0);
    diag_im_.assign(dim, 0.0);
    const double control_decay =
        spec_.include_decay && spec_.params.tau_r > 0.0 ? -0.5 / spec_.params.tau_r : 0.0;
    std::vector<int> levels(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t rest = i;
        for (int k = n - 1; k >= 0; --k) {
            levels[static_cast<std::size_t>(k)] = static_cast<int>(rest % d_e);
            rest /= d_e;
        }
        const auto control = static_cast<ControlLevel>(rest);
        double e = 0.0;
        if (control == ControlLevel::Rydberg) {
            for (int k = 0; k < n; ++k)
                if (levels[static_cast<std::size_t>(k)] == r_index)
                    e += spec_.params.v_control[static_cast<std::size_t>(k)];
        }
        for (int j = 0; j < n; ++j) {
            if (levels[static_cast<std::size_t>(j)] != r_index) continue;
            for (int k = j + 1; k < n; ++k)
                if (levels[static_cast<std::size_t>(k)] == r_index)
                    e += spec_.params.v_ensemble[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        }
        diag_re_[i] = e;
        if (control == ControlLevel::Rydberg && control_decay != 0.0) {
            diag_im_[i] = control_decay;
            diag_has_imag_ = true;
        }
    }
    build_diag_view();
}

double HamiltonianOperator::max_step_hint() const {
    double scale;
    if (spec_.model == ModelKind::Full) {
        scale = std::max({spec_.params.delta, spec_.params.omega_c, spec_.params.omega_p_max});
    } else {
        const DerivedScales d = derived_scales(spec_.params);
        scale = d.epsilon * (1.0 + d.x_max * d.x_max);
        scale = std::max(scale, spec_.params.omega_p_max * spec_.params.omega_p_max /
                                    (2.0 * spec_.params.delta));
    }
    scale = std::max(scale, spec_.control_rabi);
    if (scale <= 0.0) return 0.0;
    return kTwoPi / (20.0 * scale);
}

double HamiltonianOperator::max_frequency() const {
    double max_diag = 0.0;
    for (const double d : diag_re_) max_diag = std::max(max_diag, std::abs(d));
    double drive = spec_.model == ModelKind::Full ? spec_.params.delta : 0.0;
    const double hint = max_step_hint();
    if (hint > 0.0) drive = std::max(drive, kTwoPi / (20.0 * hint));
    return max_diag + drive;
}

void HamiltonianOperator::apply(double t, std::span<const Complex> in,
                                std::span<Complex> out) const {
    const std::size_t dim = scheme_.dim();
    if (in.size() != dim || out.size() != dim)
        throw std::invalid_argument("state dimension does not match Hamiltonian scheme");

    if (diag_has_imag_) {
        for (std::size_t i = 0; i < dim; ++i)
            out[i] = Complex(diag_re_[i], diag_im_[i]) * in[i];
    } else {
        const double* rin = reinterpret_cast<const double*>(in.data());
        double* rout = reinterpret_cast<double*>(out.data());
        for (std::size_t i = 0; i < 2 * dim; ++i) rout[i] = diag2_[i] * rin[i];
    }

    if (spec_.model == ModelKind::Effective) {
        apply_effective(t, in, out);
    } else {
        apply_full(t, in, out);
    }

    if (spec_.control_rabi != 0.0) {
        const double g = 0.5 * spec_.control_rabi;
        const std::size_t stride = dim / kControlDim;
        const Complex* in1 = in.data() + stride;
        const Complex* inr = in.data() + 2 * stride;
        Complex* out1 = out.data() + stride;
        Complex* outr = out.data() + 2 * stride;
        for (std::size_t i = 0; i < stride; ++i) {
            out1[i] += g * inr[i];
            outr[i] += g * in1[i];
        }
    }
}

void HamiltonianOperator::apply_effective(double t, std::span<const Complex> in,
                                          std::span<Complex> out) const {
    const double omega_p = spec_.raman_on ? raman_rabi(spec_.pulse, t) : 0.0;
    const double inv4d = 1.0 / (4.0 * spec_.params.delta);
    // Entries of eps * [x^2 |+><+| + |R><R| + x(|+><R| + h.c.)] in {A,B,R}.
    const double a = omega_p * omega_p * inv4d;            // A/B block
    const double b = omega_p * spec_.params.omega_c * inv4d;  // A/B <-> R
    const double r = spec_.params.omega_c * spec_.params.omega_c * inv4d;

    const std::size_t dim = scheme_.dim();
    const int n = scheme_.n_atoms;
    if (!spec_.include_decay || spec_.params.gamma_p == 0.0) {
        // real coefficients act identically on both quadratures, so the loop
        // runs on the double view of the amplitudes
        const double* rin = reinterpret_cast<const double*>(in.data());
        double* rout = reinterpret_cast<double*>(out.data());
        for (int k = 0; k < n; ++k) {
            const std::size_t s2 = 2 * atom_stride_[static_cast<std::size_t>(k)];
            const std::size_t block = 3 * s2;
            for (std::size_t base = 0; base < 2 * dim; base += block) {
                const double* va = rin + base;
                const double* vb = va + s2;
                const double* vr = vb + s2;
                double* oa = rout + base;
                double* ob = oa + s2;
                double* orr = ob + s2;
                for (std::size_t i = 0; i < s2; ++i) {
                    const double sum = va[i] + vb[i];
                    const double uab = a * sum + b * vr[i];
                    oa[i] += uab;
                    ob[i] += uab;
                    orr[i] += b * sum + r * vr[i];
                }
            }
        }
        return;
    }

    // Decay of |P> survives adiabatic elimination as an anti-Hermitian copy of
    // the same coupling structure, scaled by gamma_p / (2 delta). Dark states
    // are annihilated by it, so EIT protection carries over.
    const Complex zeta(1.0, -0.5 * spec_.params.gamma_p / spec_.params.delta);
    const Complex az = a * zeta, bz = b * zeta, rz = r * zeta;
    for (int k = 0; k < n; ++k) {
        const std::size_t s = atom_stride_[static_cast<std::size_t>(k)];
        const std::size_t block = 3 * s;
        for (std::size_t base = 0; base < dim; base += block) {
            const Complex* va = in.data() + base;
            const Complex* vb = va + s;
            const Complex* vr = vb + s;
            Complex* oa = out.data() + base;
            Complex* ob = oa + s;
            Complex* orr = ob + s;
            for (std::size_t i = 0; i < s; ++i) {
                const Complex sum = va[i] + vb[i];
                const Complex uab = az * sum + bz * vr[i];
                oa[i] += uab;
                ob[i] += uab;
                orr[i] += bz * sum + rz * vr[i];
            }
        }
    }
}

void HamiltonianOperator::apply_full(double t, std::span<const Complex> in,
                                     std::span<Complex> out) const {
    const double omega_p = spec_.raman_on ? raman_rabi(spec_.pulse, t) : 0.0;
    const double gp = 0.5 * omega_p;
    const double gc = 0.5 * spec_.params.omega_c;
    // |P> sits at -delta in this frame; eliminating it then gives the
    // effective model +eps*K with its positive grey-state energy, and the
    // same decay image, so the two models share one sign convention.
    const Complex p_diag(-spec_.params.delta,
                         spec_.include_decay ? -0.5 * spec_.params.gamma_p : 0.0);

    const std::size_t dim = scheme_.dim();
    const int n = scheme_.n_atoms;
    for (int k = 0; k < n; ++k) {
        const std::size_t s = atom_stride_[static_cast<std::size_t>(k)];
        const std::size_t block = 4 * s;
        for (std::size_t base = 0; base < dim; base += block) {
            const Complex* va = in.data() + base;
            const Complex* vb = va + s;
            const Complex* vp = vb + s;
            const Complex* vr = vp + s;
            Complex* oa = out.data() + base;
            Complex* ob = oa + s;
            Complex* op = ob + s;
            Complex* orr = op + s;
            for (std::size_t i = 0; i < s; ++i) {
                oa[i] += gp * vp[i];
                ob[i] += gp * vp[i];
                op[i] += gp * (va[i] + vb[i]) + gc * vr[i] + p_diag * vp[i];
                orr[i] += gc * vp[i];
            }
        }
    }
}

void HamiltonianOperator::build_diag_view() {
    diag2_.resize(2 * diag_re_.size());
    for (std::size_t i = 0; i < diag_re_.size(); ++i) {
        diag2_[2 * i] = diag_re_[i];
        diag2_[2 * i + 1] = diag_re_[i];
    }
}

Complex susceptibility(double delta_probe, const PhysParams& params, double rydberg_shift,
                       double gamma_r) {
    if (params.gamma_p <= 0.0) throw std::invalid_argument("susceptibility requires gamma_p > 0");
    if (gamma_r < 0.0) gamma_r = 1e-4 * params.gamma_p;
    const Complex two_photon(delta_probe - params.delta - rydberg_shift, gamma_r);
    const Complex probe(delta_probe, 0.5 * params.gamma_p);
    const double coupling = 0.25 * params.omega_c * params.omega_c;
    return two_photon / (probe * two_photon - coupling);
}

}  // namespace rydgate
