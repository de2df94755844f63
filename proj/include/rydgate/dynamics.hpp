#pragma once

// Deterministic time integration of i d|psi>/dt = H(t)|psi> for possibly
// non-Hermitian H. Norm is never renormalized mid-run; norm loss is data.

#include <stdexcept>
#include <vector>

#include "rydgate/hilbert.hpp"

namespace rydgate {

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class StepperKind { Rk4Fixed, RkAdaptive };

struct IntegratorConfig {
    StepperKind method = StepperKind::RkAdaptive;
    double dt = 0.0;       // fixed-step size (Rk4Fixed)
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    long max_steps = 50'000'000;
    double max_step = 0.0;          // 0: operator hint / span
    double sample_interval = 0.0;   // trajectory sampling; 0 = off

    void validate() const;
};

struct TrajectorySample {
    double t = 0.0;
    double norm = 0.0;
    std::array<double, 4> level_pop{};  // A, B, P, R summed over atoms
    double pop_double_r = 0.0;
};

struct EvolutionReport {
    CompositeState final_state;
    double norm_loss = 0.0;  // 1 - |psi|^2
    long steps_taken = 0;
    long steps_rejected = 0;
    double max_rydberg_double_occupancy = 0.0;  // peak sum over ensemble R-R pairs
    double max_control_rydberg_joint = 0.0;     // peak joint control-r / ensemble-R occupancy
    std::vector<TrajectorySample> trajectory;
};

// Integrates from t0 to t1 (backward when t1 < t0). Deterministic for fixed
// inputs; throws NumericalError on step underflow, step budget exhaustion or
// non-finite amplitudes.
EvolutionReport evolve(const CompositeState& state, const TimeDependentOperator& op, double t0,
                       double t1, const IntegratorConfig& cfg = {});

// Fixed step that keeps the fastest spectral frequency inside the RK4
// stability region (phase advance <= 1.5 per step) while resolving the drive
// scale well. Suited to runs whose far-shifted levels carry negligible
// amplitude, where adaptive control wastes steps chasing their phase noise.
double stable_fixed_step(const TimeDependentOperator& op, double span);

// True when the fastest mode is far above the drive scale; such runs are
// cheaper under Rk4Fixed with stable_fixed_step.
bool is_stiff(const TimeDependentOperator& op);

struct EvolutionSegment {
    const TimeDependentOperator* op = nullptr;
    double t0 = 0.0;
    double t1 = 0.0;
};

// Sequential evolution over contiguous segments; throws on gaps or overlaps.
EvolutionReport evolve_piecewise(const CompositeState& state,
                                 std::span<const EvolutionSegment> segments,
                                 const IntegratorConfig& cfg = {});

// -H(t0 + t1 - t): forward evolution under this operator undoes an evolution
// of the wrapped operator over [t0, t1].
class ReversedOperator final : public TimeDependentOperator {
  public:
    ReversedOperator(const TimeDependentOperator& inner, double t0, double t1)
        : inner_(inner), t_sum_(t0 + t1) {}
    void apply(double t, std::span<const Complex> in, std::span<Complex> out) const override {
        inner_.apply(t_sum_ - t, in, out);
        for (Complex& c : out) c = -c;
    }
    std::size_t dim() const override { return inner_.dim(); }
    double max_step_hint() const override { return inner_.max_step_hint(); }

  private:
    const TimeDependentOperator& inner_;
    double t_sum_;
};

}  // namespace rydgate
