#include "rydgate/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rydgate {

void IntegratorConfig::validate() const {
    if (method == StepperKind::Rk4Fixed) {
        if (dt <= 0.0) throw std::invalid_argument("fixed-step integration requires dt > 0");
    } else {
        if (rel_tol <= 0.0 || rel_tol > 1e-3 || abs_tol <= 0.0 || abs_tol > 1e-3)
            throw std::invalid_argument("tolerances must lie in (0, 1e-3]");
    }
    if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
    if (max_step < 0.0) throw std::invalid_argument("max_step must be >= 0");
    if (sample_interval < 0.0) throw std::invalid_argument("sample_interval must be >= 0");
}

namespace {

using Vec = std::vector<Complex>;

// dy/dt = -i H(t) y
inline void rhs(const TimeDependentOperator& op, double t, std::span<const Complex> y,
                std::span<Complex> k) {
    op.apply(t, y, k);
    for (Complex& c : k) c = Complex(c.imag(), -c.real());
}

struct Tracker {
    const RydbergOccupancy* occupancy = nullptr;
    double max_pair = 0.0;
    double max_joint = 0.0;
    double sample_interval = 0.0;
    double t0 = 0.0;
    double direction = 1.0;
    long next_sample = 0;
    std::vector<TrajectorySample>* trajectory = nullptr;
    const LevelScheme* scheme = nullptr;

    void observe(double t, std::span<const Complex> y, bool force_sample) {
        if (occupancy) {
            max_pair = std::max(max_pair, occupancy->pair_population(y));
            max_joint = std::max(max_joint, occupancy->joint_population(y));
        }
        if (!trajectory) return;
        const double progressed = (t - t0) * direction;
        if (!force_sample && progressed < sample_interval * static_cast<double>(next_sample))
            return;
        CompositeState snapshot(*scheme);
        snapshot.amplitudes.assign(y.begin(), y.end());
        TrajectorySample sample;
        sample.t = t;
        sample.norm = snapshot.norm();
        sample.level_pop = level_populations(snapshot);
        sample.pop_double_r = occupancy ? occupancy->pair_population(y) : 0.0;
        trajectory->push_back(sample);
        while (sample_interval * static_cast<double>(next_sample) <= progressed) ++next_sample;
    }
};

// Dormand-Prince 5(4) coefficients.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

EvolutionReport run_adaptive(const CompositeState& state, const TimeDependentOperator& op,
                             double t0, double t1, const IntegratorConfig& cfg, Tracker& tracker) {
    const std::size_t n = state.amplitudes.size();
    const std::size_t n2 = 2 * n;  // stage combinations are real-linear
    const double span = t1 - t0;
    const double dir = span > 0.0 ? 1.0 : -1.0;

    double max_step = std::abs(span);
    if (cfg.max_step > 0.0) max_step = std::min(max_step, cfg.max_step);
    const double hint = op.max_step_hint();
    if (hint > 0.0) max_step = std::min(max_step, hint);
    // Never step across more than ~0.4 periods of the fastest mode. Error
    // control alone is blind to strongly shifted levels while they are
    // unpopulated; stepping over their period aliases junk amplitude into
    // them once the drive ramps up.
    const double max_freq = op.max_frequency();
    if (max_freq > 0.0) max_step = std::min(max_step, 2.5 / max_freq);

    Vec buf_y = state.amplitudes;
    Vec buf_k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), buf_k7(n), ytmp(n), buf_ynew(n);
    Complex* py = buf_y.data();
    Complex* pk1 = buf_k1.data();
    Complex* pk7 = buf_k7.data();
    Complex* pynew = buf_ynew.data();

    double t = t0;
    double h = dir * std::min(max_step, std::abs(span) / 100.0);
    rhs(op, t, {py, n}, {pk1, n});
    tracker.observe(t, {py, n}, true);

    long steps = 0;
    long attempts = 0;
    long rejected = 0;
    bool rejected_last = false;
    double jitter_phase = 0.0;
    const double inv_order = 1.0 / 5.0;

    while ((t1 - t) * dir > 0.0) {
        if (attempts++ > cfg.max_steps) throw NumericalError("integration exceeded max_steps");
        if (std::abs(h) < 4.0 * std::numeric_limits<double>::epsilon() *
                              std::max(std::abs(t), std::abs(t1)))
            throw NumericalError("adaptive step size underflow");
        // Low-discrepancy dither of the step size. A constant step is phase
        // coherent with fast rotating components, and their per-step
        // truncation error then pumps amplitude resonantly.
        jitter_phase += 0.61803398874989485;
        jitter_phase -= std::floor(jitter_phase);
        double h_try = h * (0.78 + 0.22 * jitter_phase);
        if ((t + h_try - t1) * dir > 0.0) h_try = t1 - t;

        // Stage combinations are real-linear, so they run on the double view
        // of the complex buffers.
        const double* ry = reinterpret_cast<const double*>(py);
        const double* rk1 = reinterpret_cast<const double*>(pk1);
        const double* rk2 = reinterpret_cast<const double*>(k2.data());
        const double* rk3 = reinterpret_cast<const double*>(k3.data());
        const double* rk4 = reinterpret_cast<const double*>(k4.data());
        const double* rk5 = reinterpret_cast<const double*>(k5.data());
        const double* rk6 = reinterpret_cast<const double*>(k6.data());
        const double* rk7 = reinterpret_cast<const double*>(pk7);
        double* rtmp = reinterpret_cast<double*>(ytmp.data());
        double* rnew = reinterpret_cast<double*>(pynew);

        for (std::size_t i = 0; i < n2; ++i) rtmp[i] = ry[i] + h_try * (kA21 * rk1[i]);
        rhs(op, t + kC2 * h_try, ytmp, k2);
        for (std::size_t i = 0; i < n2; ++i)
            rtmp[i] = ry[i] + h_try * (kA31 * rk1[i] + kA32 * rk2[i]);
        rhs(op, t + kC3 * h_try, ytmp, k3);
        for (std::size_t i = 0; i < n2; ++i)
            rtmp[i] = ry[i] + h_try * (kA41 * rk1[i] + kA42 * rk2[i] + kA43 * rk3[i]);
        rhs(op, t + kC4 * h_try, ytmp, k4);
        for (std::size_t i = 0; i < n2; ++i)
            rtmp[i] = ry[i] + h_try * (kA51 * rk1[i] + kA52 * rk2[i] + kA53 * rk3[i] + kA54 * rk4[i]);
        rhs(op, t + kC5 * h_try, ytmp, k5);
        for (std::size_t i = 0; i < n2; ++i)
            rtmp[i] = ry[i] + h_try * (kA61 * rk1[i] + kA62 * rk2[i] + kA63 * rk3[i] + kA64 * rk4[i] +
                                   kA65 * rk5[i]);
        rhs(op, t + h_try, ytmp, k6);
        for (std::size_t i = 0; i < n2; ++i)
            rnew[i] = ry[i] + h_try * (kB1 * rk1[i] + kB3 * rk3[i] + kB4 * rk4[i] + kB5 * rk5[i] +
                                   kB6 * rk6[i]);
        rhs(op, t + h_try, {pynew, n}, {pk7, n});

        double err_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e_re = h_try * (kE1 * rk1[2 * i] + kE3 * rk3[2 * i] + kE4 * rk4[2 * i] +
                                     kE5 * rk5[2 * i] + kE6 * rk6[2 * i] + kE7 * rk7[2 * i]);
            const double e_im =
                h_try * (kE1 * rk1[2 * i + 1] + kE3 * rk3[2 * i + 1] + kE4 * rk4[2 * i + 1] +
                     kE5 * rk5[2 * i + 1] + kE6 * rk6[2 * i + 1] + kE7 * rk7[2 * i + 1]);
            const double y_sq = ry[2 * i] * ry[2 * i] + ry[2 * i + 1] * ry[2 * i + 1];
            const double yn_sq = rnew[2 * i] * rnew[2 * i] + rnew[2 * i + 1] * rnew[2 * i + 1];
            const double sc = cfg.abs_tol + cfg.rel_tol * std::sqrt(std::max(y_sq, yn_sq));
            err_sq += (e_re * e_re + e_im * e_im) / (sc * sc);
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        if (!std::isfinite(err)) {
            h = h_try * 0.25;
            rejected_last = true;
            ++rejected;
            continue;
        }
        if (err <= 1.0) {
            t += h_try;
            std::swap(py, pynew);
            std::swap(pk1, pk7);  // first-same-as-last
            ++steps;
            tracker.observe(t, {py, n}, false);
            // Growth stays modest: against a steep stiffness cliff a large
            // factor locks the controller into a grow/reject limit cycle.
            double fac = err == 0.0 ? 2.0 : 0.9 * std::pow(err, -inv_order);
            fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 2.0);
            h = h_try * fac;
            if (std::abs(h) > max_step) h = dir * max_step;
            rejected_last = false;
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -inv_order), 0.2, 1.0);
            h = h_try * fac;
            rejected_last = true;
            ++rejected;
        }
    }

    EvolutionReport report;
    report.final_state = CompositeState(state.scheme);
    report.final_state.amplitudes.assign(py, py + n);
    report.steps_taken = steps;
    report.steps_rejected = rejected;
    return report;
}

EvolutionReport run_rk4(const CompositeState& state, const TimeDependentOperator& op, double t0,
                        double t1, const IntegratorConfig& cfg, Tracker& tracker) {
    const std::size_t n = state.amplitudes.size();
    const double span = t1 - t0;
    const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(std::abs(span) / cfg.dt)));
    if (n_steps > cfg.max_steps) throw NumericalError("fixed-step count exceeds max_steps");
    const double h = span / static_cast<double>(n_steps);

    Vec y = state.amplitudes;
    Vec k1(n), k2(n), k3(n), k4(n), ytmp(n);
    tracker.observe(t0, y, true);

    for (long step = 0; step < n_steps; ++step) {
        const double t = t0 + h * static_cast<double>(step);
        rhs(op, t, y, k1);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(op, t + 0.5 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(op, t + 0.5 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * k3[i];
        rhs(op, t + h, ytmp, k4);
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            norm_sq += std::norm(y[i]);
        }
        if (!std::isfinite(norm_sq)) throw NumericalError("non-finite amplitudes");
        tracker.observe(t + h, y, false);
    }

    EvolutionReport report;
    report.final_state = CompositeState(state.scheme);
    report.final_state.amplitudes = std::move(y);
    report.steps_taken = n_steps;
    return report;
}

}  // namespace

double stable_fixed_step(const TimeDependentOperator& op, double span) {
    double dt = std::abs(span) / 50.0;
    const double hint = op.max_step_hint();
    if (hint > 0.0) dt = std::min(dt, 0.1 * hint);
    const double max_freq = op.max_frequency();
    if (max_freq > 0.0) dt = std::min(dt, 1.5 / max_freq);
    return dt;
}

bool is_stiff(const TimeDependentOperator& op) {
    const double hint = op.max_step_hint();
    const double max_freq = op.max_frequency();
    if (hint <= 0.0 || max_freq <= 0.0) return false;
    // hint corresponds to ~20 steps per drive period
    const double drive_scale = 2.0 * std::numbers::pi / (20.0 * hint);
    return max_freq > 50.0 * drive_scale;
}

EvolutionReport evolve(const CompositeState& state, const TimeDependentOperator& op, double t0,
                       double t1, const IntegratorConfig& cfg) {
    cfg.validate();
    if (t0 == t1) throw std::invalid_argument("evolution window is empty");
    if (op.dim() != state.amplitudes.size())
        throw std::invalid_argument("operator dimension does not match state");

    RydbergOccupancy occupancy(state.scheme);
    Tracker tracker;
    tracker.occupancy = &occupancy;
    tracker.t0 = t0;
    tracker.direction = t1 > t0 ? 1.0 : -1.0;
    tracker.sample_interval = cfg.sample_interval;
    std::vector<TrajectorySample> trajectory;
    if (cfg.sample_interval > 0.0) {
        tracker.trajectory = &trajectory;
        tracker.scheme = &state.scheme;
    }

    EvolutionReport report = cfg.method == StepperKind::RkAdaptive
                                 ? run_adaptive(state, op, t0, t1, cfg, tracker)
                                 : run_rk4(state, op, t0, t1, cfg, tracker);

    const double norm_sq = report.final_state.squared_norm();
    if (!std::isfinite(norm_sq)) throw NumericalError("non-finite amplitudes");
    if (tracker.trajectory) tracker.observe(t1, report.final_state.amplitudes, true);
    report.norm_loss = 1.0 - norm_sq;
    report.max_rydberg_double_occupancy = tracker.max_pair;
    report.max_control_rydberg_joint = tracker.max_joint;
    report.trajectory = std::move(trajectory);
    return report;
}

EvolutionReport evolve_piecewise(const CompositeState& state,
                                 std::span<const EvolutionSegment> segments,
                                 const IntegratorConfig& cfg) {
    if (segments.empty()) throw std::invalid_argument("no evolution segments");
    double total_span = 0.0;
    for (const auto& seg : segments) total_span += std::abs(seg.t1 - seg.t0);
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (std::abs(segments[i + 1].t0 - segments[i].t1) > 1e-9 * total_span)
            throw std::invalid_argument("segments must be contiguous in time");
    }

    EvolutionReport total;
    total.final_state = state;
    for (const auto& seg : segments) {
        EvolutionReport r = evolve(total.final_state, *seg.op, seg.t0, seg.t1, cfg);
        total.steps_taken += r.steps_taken;
        total.max_rydberg_double_occupancy =
            std::max(total.max_rydberg_double_occupancy, r.max_rydberg_double_occupancy);
        total.max_control_rydberg_joint =
            std::max(total.max_control_rydberg_joint, r.max_control_rydberg_joint);
        for (auto& sample : r.trajectory) total.trajectory.push_back(sample);
        total.final_state = std::move(r.final_state);
    }
    total.norm_loss = 1.0 - total.final_state.squared_norm();
    return total;
}

}  // namespace rydgate
