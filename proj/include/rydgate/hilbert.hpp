#pragma once

// Composite Hilbert space for one control atom and N ensemble atoms.
// Basis ordering: the control level is the most significant mixed-radix
// digit, ensemble atom 0 the next most significant.

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydgate {

using Complex = std::complex<double>;

inline constexpr int kControlDim = 3;
inline constexpr std::size_t kDefaultAmplitudeCap = 2'000'000;

// Ensemble atoms carry either the full four-level structure {A,B,P,R} or the
// three-level one {A,B,R} left after eliminating the intermediate state.
enum class EnsembleBasis { Full, Effective };

enum class ControlLevel : int { Zero = 0, One = 1, Rydberg = 2 };
enum class EnsembleLevel : int { A = 0, B = 1, P = 2, R = 3 };

char to_char(ControlLevel l);
char to_char(EnsembleLevel l);
ControlLevel control_level_from_char(char c);
EnsembleLevel ensemble_level_from_char(char c);

struct LevelScheme {
    EnsembleBasis basis = EnsembleBasis::Effective;
    int n_atoms = 0;

    LevelScheme() = default;
    LevelScheme(EnsembleBasis basis, int n_atoms,
                std::size_t amplitude_cap = kDefaultAmplitudeCap);

    int control_dim() const { return kControlDim; }
    int ensemble_dim() const { return basis == EnsembleBasis::Full ? 4 : 3; }
    std::size_t dim() const;

    // Index of an ensemble level within this basis; rejects P in Effective.
    int level_index(EnsembleLevel l) const;
    EnsembleLevel level_at(int index) const;

    bool operator==(const LevelScheme&) const = default;
};

std::size_t basis_index(const LevelScheme& scheme, ControlLevel control,
                        std::span<const EnsembleLevel> ensemble);
void decode_index(const LevelScheme& scheme, std::size_t index,
                  ControlLevel& control, std::vector<EnsembleLevel>& ensemble);

std::vector<EnsembleLevel> ensemble_labels_from_string(const std::string& labels);

struct CompositeState {
    LevelScheme scheme;
    std::vector<Complex> amplitudes;

    CompositeState() = default;
    explicit CompositeState(const LevelScheme& s)
        : scheme(s), amplitudes(s.dim(), Complex(0.0, 0.0)) {}

    static CompositeState basis_state(const LevelScheme& scheme, ControlLevel control,
                                      std::span<const EnsembleLevel> ensemble);
    static CompositeState basis_state(const LevelScheme& scheme, ControlLevel control,
                                      const std::string& ensemble_labels);

    double squared_norm() const;
    double norm() const;
    CompositeState& operator*=(Complex factor);
    CompositeState& add_scaled(const CompositeState& other, Complex factor);
};

// A site is either the control atom or one of the ensemble atoms.
struct SiteRef {
    bool is_control = false;
    int atom = 0;

    static SiteRef control() { return {true, 0}; }
    static SiteRef ensemble(int k) { return {false, k}; }
    bool operator==(const SiteRef&) const = default;
};

// Dense matrix on a single site, row-major in the site's level ordering.
struct SiteOperator {
    SiteRef site;
    int dim = 0;
    std::array<Complex, 16> m{};

    Complex& at(int row, int col) { return m[static_cast<std::size_t>(row * dim + col)]; }
    const Complex& at(int row, int col) const {
        return m[static_cast<std::size_t>(row * dim + col)];
    }
    bool is_hermitian(double tol = 1e-12) const;

    static SiteOperator control_op(std::span<const Complex> entries);
    static SiteOperator ensemble_op(int atom, int dim, std::span<const Complex> entries);
};

// (op on one site) x (identity elsewhere) applied to the state.
CompositeState apply_site_operator(const CompositeState& state, const SiteOperator& op);

// Projector onto (level_a at site_a) and (level_b at site_b), scaled by
// coefficient; all other amplitudes are zero in the result. Levels are given
// as indices in each site's ordering.
CompositeState apply_two_site_projector(const CompositeState& state, SiteRef site_a,
                                        SiteRef site_b, int level_a, int level_b,
                                        Complex coefficient);

// <a|b> with conjugation on a.
Complex overlap(const CompositeState& a, const CompositeState& b);

// Population diagnostics, summed over atoms. pops[] is indexed by
// EnsembleLevel; the P slot stays zero in the Effective basis.
std::array<double, 4> level_populations(const CompositeState& state);
double double_rydberg_population(const CompositeState& state);
double control_joint_rydberg_population(const CompositeState& state);

// Per-basis-index occupancy weights, precomputed once so evolution can track
// Rydberg occupancy maxima cheaply.
struct RydbergOccupancy {
    explicit RydbergOccupancy(const LevelScheme& scheme);
    double pair_population(std::span<const Complex> amplitudes) const;
    double joint_population(std::span<const Complex> amplitudes) const;

    std::vector<double> pair_weight;   // number of ensemble R-R pairs per index
    std::vector<double> joint_weight;  // [control=r] * (number of atoms in R)
};

// Abstract time-dependent operator on composite states: out = H(t) * in.
class TimeDependentOperator {
  public:
    virtual ~TimeDependentOperator() = default;
    virtual void apply(double t, std::span<const Complex> in, std::span<Complex> out) const = 0;
    virtual std::size_t dim() const = 0;
    // Largest integration step that still resolves the operator's fastest
    // explicit frequency; 0 means no constraint.
    virtual double max_step_hint() const { return 0.0; }
    // Fastest phase frequency anywhere in the spectrum (rad/s). Adaptive
    // stepping starts below its period: near a zero of the drive the state
    // can be an exact eigenstate, which leaves the error estimate blind to
    // far-shifted levels until amplitude reaches them.
    virtual double max_frequency() const { return 0.0; }
};

// State snapshot file: header `scheme=<FULL|EFFECTIVE> d_c=3 d_e=<3|4> N=<n>`
// followed by `index re im` lines for each nonzero amplitude.
void write_state_snapshot(std::ostream& out, const CompositeState& state);
CompositeState read_state_snapshot(std::istream& in);

}  // namespace rydgate
