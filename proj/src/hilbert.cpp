#include "rydgate/hilbert.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace rydgate {

char to_char(ControlLevel l) {
    switch (l) {
        case ControlLevel::Zero: return '0';
        case ControlLevel::One: return '1';
        case ControlLevel::Rydberg: return 'r';
    }
    throw std::invalid_argument("invalid control level");
}

char to_char(EnsembleLevel l) {
    switch (l) {
        case EnsembleLevel::A: return 'A';
        case EnsembleLevel::B: return 'B';
        case EnsembleLevel::P: return 'P';
        case EnsembleLevel::R: return 'R';
    }
    throw std::invalid_argument("invalid ensemble level");
}

ControlLevel control_level_from_char(char c) {
    switch (c) {
        case '0': return ControlLevel::Zero;
        case '1': return ControlLevel::One;
        case 'r': return ControlLevel::Rydberg;
        default: throw std::invalid_argument(std::string("unknown control label '") + c + "'");
    }
}

EnsembleLevel ensemble_level_from_char(char c) {
    switch (c) {
        case 'A': return EnsembleLevel::A;
        case 'B': return EnsembleLevel::B;
        case 'P': return EnsembleLevel::P;
        case 'R': return EnsembleLevel::R;
        default: throw std::invalid_argument(std::string("unknown ensemble label '") + c + "'");
    }
}

LevelScheme::LevelScheme(EnsembleBasis basis_, int n_atoms_, std::size_t amplitude_cap)
    : basis(basis_), n_atoms(n_atoms_) {
    if (n_atoms < 0) throw std::invalid_argument("n_atoms must be >= 0");
    const double d_e = static_cast<double>(ensemble_dim());
    const double total = kControlDim * std::pow(d_e, n_atoms);
    if (total > static_cast<double>(amplitude_cap)) {
        throw std::invalid_argument("total dimension " + std::to_string(total) +
                                    " exceeds amplitude cap " + std::to_string(amplitude_cap));
    }
}

std::size_t LevelScheme::dim() const {
    std::size_t d = kControlDim;
    for (int k = 0; k < n_atoms; ++k) d *= static_cast<std::size_t>(ensemble_dim());
    return d;
}

int LevelScheme::level_index(EnsembleLevel l) const {
    if (basis == EnsembleBasis::Full) return static_cast<int>(l);
    switch (l) {
        case EnsembleLevel::A: return 0;
        case EnsembleLevel::B: return 1;
        case EnsembleLevel::R: return 2;
        case EnsembleLevel::P:
            throw std::invalid_argument("level P is not part of the effective basis");
    }
    throw std::invalid_argument("invalid ensemble level");
}

EnsembleLevel LevelScheme::level_at(int index) const {
    if (index < 0 || index >= ensemble_dim())
        throw std::invalid_argument("ensemble level index out of range");
    if (basis == EnsembleBasis::Full) return static_cast<EnsembleLevel>(index);
    return index == 2 ? EnsembleLevel::R : static_cast<EnsembleLevel>(index);
}

std::size_t basis_index(const LevelScheme& scheme, ControlLevel control,
                        std::span<const EnsembleLevel> ensemble) {
    if (static_cast<int>(ensemble.size()) != scheme.n_atoms)
        throw std::invalid_argument("label list length does not match atom count");
    std::size_t index = static_cast<std::size_t>(control);
    const std::size_t d_e = static_cast<std::size_t>(scheme.ensemble_dim());
    for (int k = 0; k < scheme.n_atoms; ++k) {
        index = index * d_e + static_cast<std::size_t>(scheme.level_index(ensemble[k]));
    }
    return index;
}

void decode_index(const LevelScheme& scheme, std::size_t index, ControlLevel& control,
                  std::vector<EnsembleLevel>& ensemble) {
    if (index >= scheme.dim()) throw std::invalid_argument("basis index out of range");
    ensemble.resize(static_cast<std::size_t>(scheme.n_atoms));
    const std::size_t d_e = static_cast<std::size_t>(scheme.ensemble_dim());
    for (int k = scheme.n_atoms - 1; k >= 0; --k) {
        ensemble[static_cast<std::size_t>(k)] = scheme.level_at(static_cast<int>(index % d_e));
        index /= d_e;
    }
    control = static_cast<ControlLevel>(index);
}

std::vector<EnsembleLevel> ensemble_labels_from_string(const std::string& labels) {
    std::vector<EnsembleLevel> out;
    out.reserve(labels.size());
    for (char c : labels) out.push_back(ensemble_level_from_char(c));
    return out;
}

CompositeState CompositeState::basis_state(const LevelScheme& scheme, ControlLevel control,
                                           std::span<const EnsembleLevel> ensemble) {
    CompositeState state(scheme);
    state.amplitudes[basis_index(scheme, control, ensemble)] = Complex(1.0, 0.0);
    return state;
}

CompositeState CompositeState::basis_state(const LevelScheme& scheme, ControlLevel control,
                                           const std::string& ensemble_labels) {
    const auto labels = ensemble_labels_from_string(ensemble_labels);
    return basis_state(scheme, control, labels);
}

double CompositeState::squared_norm() const {
    double s = 0.0;
    for (const Complex& a : amplitudes) s += std::norm(a);
    return s;
}

double CompositeState::norm() const { return std::sqrt(squared_norm()); }

CompositeState& CompositeState::operator*=(Complex factor) {
    for (Complex& a : amplitudes) a *= factor;
    return *this;
}

CompositeState& CompositeState::add_scaled(const CompositeState& other, Complex factor) {
    if (!(scheme == other.scheme)) throw std::invalid_argument("scheme mismatch");
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        amplitudes[i] += factor * other.amplitudes[i];
    return *this;
}

bool SiteOperator::is_hermitian(double tol) const {
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
    return true;
}

SiteOperator SiteOperator::control_op(std::span<const Complex> entries) {
    if (entries.size() != 9) throw std::invalid_argument("control operator needs 3x3 entries");
    SiteOperator op;
    op.site = SiteRef::control();
    op.dim = kControlDim;
    for (std::size_t i = 0; i < entries.size(); ++i) op.m[i] = entries[i];
    return op;
}

SiteOperator SiteOperator::ensemble_op(int atom, int dim, std::span<const Complex> entries) {
    if (dim != 3 && dim != 4) throw std::invalid_argument("ensemble operator must be 3x3 or 4x4");
    if (entries.size() != static_cast<std::size_t>(dim * dim))
        throw std::invalid_argument("entry count does not match operator dimension");
    SiteOperator op;
    op.site = SiteRef::ensemble(atom);
    op.dim = dim;
    for (std::size_t i = 0; i < entries.size(); ++i) op.m[i] = entries[i];
    return op;
}

namespace {

// stride of the given site in the mixed-radix index, and its level count
void site_geometry(const LevelScheme& scheme, SiteRef site, std::size_t& stride, int& dim) {
    const std::size_t d_e = static_cast<std::size_t>(scheme.ensemble_dim());
    if (site.is_control) {
        stride = scheme.dim() / kControlDim;
        dim = kControlDim;
        return;
    }
    if (site.atom < 0 || site.atom >= scheme.n_atoms)
        throw std::invalid_argument("ensemble site index out of range");
    stride = 1;
    for (int k = scheme.n_atoms - 1; k > site.atom; --k) stride *= d_e;
    dim = scheme.ensemble_dim();
}

}  // namespace

CompositeState apply_site_operator(const CompositeState& state, const SiteOperator& op) {
    std::size_t stride = 0;
    int site_dim = 0;
    site_geometry(state.scheme, op.site, stride, site_dim);
    if (site_dim != op.dim)
        throw std::invalid_argument("operator dimension does not match site level count");

    CompositeState out(state.scheme);
    const std::size_t dim = state.amplitudes.size();
    const std::size_t block = stride * static_cast<std::size_t>(site_dim);
    std::array<Complex, 4> v{};
    for (std::size_t base = 0; base < dim; base += block) {
        for (std::size_t i = 0; i < stride; ++i) {
            const std::size_t start = base + i;
            for (int l = 0; l < site_dim; ++l)
                v[static_cast<std::size_t>(l)] =
                    state.amplitudes[start + static_cast<std::size_t>(l) * stride];
            for (int r = 0; r < site_dim; ++r) {
                Complex acc(0.0, 0.0);
                for (int c = 0; c < site_dim; ++c)
                    acc += op.at(r, c) * v[static_cast<std::size_t>(c)];
                out.amplitudes[start + static_cast<std::size_t>(r) * stride] = acc;
            }
        }
    }
    return out;
}

CompositeState apply_two_site_projector(const CompositeState& state, SiteRef site_a,
                                        SiteRef site_b, int level_a, int level_b,
                                        Complex coefficient) {
    if (site_a == site_b) throw std::invalid_argument("projector sites must differ");
    std::size_t stride_a = 0, stride_b = 0;
    int dim_a = 0, dim_b = 0;
    site_geometry(state.scheme, site_a, stride_a, dim_a);
    site_geometry(state.scheme, site_b, stride_b, dim_b);
    if (level_a < 0 || level_a >= dim_a) throw std::invalid_argument("level_a out of range");
    if (level_b < 0 || level_b >= dim_b) throw std::invalid_argument("level_b out of range");

    CompositeState out(state.scheme);
    const std::size_t dim = state.amplitudes.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const int la = static_cast<int>((i / stride_a) % static_cast<std::size_t>(dim_a));
        const int lb = static_cast<int>((i / stride_b) % static_cast<std::size_t>(dim_b));
        if (la == level_a && lb == level_b) out.amplitudes[i] = coefficient * state.amplitudes[i];
    }
    return out;
}

Complex overlap(const CompositeState& a, const CompositeState& b) {
    if (!(a.scheme == b.scheme)) throw std::invalid_argument("scheme mismatch in overlap");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
        acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return acc;
}

std::array<double, 4> level_populations(const CompositeState& state) {
    std::array<double, 4> pops{};
    const LevelScheme& scheme = state.scheme;
    const std::size_t d_e = static_cast<std::size_t>(scheme.ensemble_dim());
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double w = std::norm(state.amplitudes[i]);
        if (w == 0.0) continue;
        std::size_t rest = i;
        for (int k = 0; k < scheme.n_atoms; ++k) {
            const int level = static_cast<int>(rest % d_e);
            pops[static_cast<std::size_t>(static_cast<int>(scheme.level_at(level)))] += w;
            rest /= d_e;
        }
    }
    return pops;
}

RydbergOccupancy::RydbergOccupancy(const LevelScheme& scheme) {
    const std::size_t dim = scheme.dim();
    pair_weight.assign(dim, 0.0);
    joint_weight.assign(dim, 0.0);
    const std::size_t d_e = static_cast<std::size_t>(scheme.ensemble_dim());
    const int r_index = scheme.level_index(EnsembleLevel::R);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t rest = i;
        int n_r = 0;
        for (int k = 0; k < scheme.n_atoms; ++k) {
            if (static_cast<int>(rest % d_e) == r_index) ++n_r;
            rest /= d_e;
        }
        const auto control = static_cast<ControlLevel>(rest);
        pair_weight[i] = 0.5 * n_r * (n_r - 1);
        joint_weight[i] = control == ControlLevel::Rydberg ? static_cast<double>(n_r) : 0.0;
    }
}

double RydbergOccupancy::pair_population(std::span<const Complex> amplitudes) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        s += pair_weight[i] * std::norm(amplitudes[i]);
    return s;
}

double RydbergOccupancy::joint_population(std::span<const Complex> amplitudes) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        s += joint_weight[i] * std::norm(amplitudes[i]);
    return s;
}

double double_rydberg_population(const CompositeState& state) {
    return RydbergOccupancy(state.scheme).pair_population(state.amplitudes);
}

double control_joint_rydberg_population(const CompositeState& state) {
    return RydbergOccupancy(state.scheme).joint_population(state.amplitudes);
}

void write_state_snapshot(std::ostream& out, const CompositeState& state) {
    const LevelScheme& scheme = state.scheme;
    out << "scheme=" << (scheme.basis == EnsembleBasis::Full ? "FULL" : "EFFECTIVE")
        << " d_c=3 d_e=" << scheme.ensemble_dim() << " N=" << scheme.n_atoms << "\n";
    char buf[128];
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const Complex& a = state.amplitudes[i];
        if (a == Complex(0.0, 0.0)) continue;
        std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g\n", i, a.real(), a.imag());
        out << buf;
    }
}

CompositeState read_state_snapshot(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty state snapshot");
    std::istringstream hs(header);
    std::string scheme_field, dc_field, de_field, n_field;
    if (!(hs >> scheme_field >> dc_field >> de_field >> n_field))
        throw std::runtime_error("malformed snapshot header: " + header);
    auto field_value = [](const std::string& field, const std::string& key) {
        if (field.rfind(key + "=", 0) != 0)
            throw std::runtime_error("malformed snapshot field: " + field);
        return field.substr(key.size() + 1);
    };
    const std::string scheme_name = field_value(scheme_field, "scheme");
    EnsembleBasis basis;
    if (scheme_name == "FULL") basis = EnsembleBasis::Full;
    else if (scheme_name == "EFFECTIVE") basis = EnsembleBasis::Effective;
    else throw std::runtime_error("unknown scheme name: " + scheme_name);
    if (field_value(dc_field, "d_c") != "3") throw std::runtime_error("unsupported d_c");
    const int d_e = std::stoi(field_value(de_field, "d_e"));
    const int n = std::stoi(field_value(n_field, "N"));
    LevelScheme scheme(basis, n);
    if (scheme.ensemble_dim() != d_e)
        throw std::runtime_error("d_e does not match scheme");

    CompositeState state(scheme);
    std::size_t index;
    double re, im;
    while (in >> index >> re >> im) {
        if (index >= state.amplitudes.size())
            throw std::runtime_error("snapshot index out of range");
        state.amplitudes[index] = Complex(re, im);
    }
    return state;
}

}  // namespace rydgate
