#include "rydgate/interferometer.hpp"

#include <cmath>
#include <numbers>

namespace rydgate {

BranchUnitary BranchUnitary::identity(int dim) {
    return {"identity", Eigen::MatrixXcd::Identity(dim, dim)};
}

BranchUnitary BranchUnitary::global_phase(int dim, double theta) {
    return {"global_phase(" + std::to_string(theta) + ")",
            std::exp(Complex(0.0, theta)) * Eigen::MatrixXcd::Identity(dim, dim)};
}

BranchUnitary BranchUnitary::phase_rotation(int dim, int level, double theta) {
    if (level < 0 || level >= dim) throw std::invalid_argument("phase rotation level out of range");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    m(level, level) = std::exp(Complex(0.0, theta));
    return {"phase_rotation(" + std::to_string(level) + "," + std::to_string(theta) + ")",
            std::move(m)};
}

BranchUnitary BranchUnitary::two_level_mixing(int dim, int a, int b, double theta) {
    if (a < 0 || b < 0 || a >= dim || b >= dim || a == b)
        throw std::invalid_argument("invalid mixing levels");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    m(a, a) = std::cos(theta);
    m(b, b) = std::cos(theta);
    m(a, b) = -std::sin(theta);
    m(b, a) = std::sin(theta);
    return {"two_level_mixing(" + std::to_string(a) + "," + std::to_string(b) + "," +
                std::to_string(theta) + ")",
            std::move(m)};
}

BranchUnitary BranchUnitary::from_matrix(std::string description, Eigen::MatrixXcd m) {
    BranchUnitary u{std::move(description), std::move(m)};
    u.validate();
    return u;
}

void BranchUnitary::validate() const {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
        throw std::invalid_argument("branch unitary must be square");
    const Eigen::MatrixXcd gram = matrix.adjoint() * matrix;
    const double defect =
        (gram - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-10)
        throw std::invalid_argument("branch operator is not unitary (defect " +
                                    std::to_string(defect) + ")");
}

namespace {

Eigen::MatrixXcd gate_permutation(int n_atoms, Complex transfer_phase) {
    const int ens_dim = 1 << n_atoms;
    const int dim = 2 * ens_dim;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
    const int mask = ens_dim - 1;
    for (int e = 0; e < ens_dim; ++e) {
        u(e, e) = 1.0;                                        // |0,e> -> |0,e>
        u(ens_dim + (~e & mask), ens_dim + e) = transfer_phase;  // |1,e> -> |1,~e>
    }
    return u;
}

}  // namespace

Eigen::MatrixXcd ideal_gate_unitary(int n_atoms) {
    if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
    const double transfer_phase = n_atoms % 2 == 0 ? -1.0 : 1.0;
    return gate_permutation(n_atoms, Complex(transfer_phase, 0.0));
}

namespace {

struct HadamardProbabilities {
    double p_plus = 0.0;
    double p_minus = 0.0;
};

// One ideal pass: control prepared as (|0> + c1 |1>)/sqrt(2), gate, branch
// unitaries, gate, +- readout. Phases of the gate are compensated, so the
// plain label swap is applied.
HadamardProbabilities ideal_pass(const Eigen::VectorXcd& phi, const BranchUnitary& u_a,
                                 const BranchUnitary& u_b, int n_atoms, Complex c1) {
    const int ens_dim = 1 << n_atoms;
    const int gate_dim = 2 * ens_dim;
    const int d_aux = static_cast<int>(phi.size());
    const Eigen::MatrixXcd gate = gate_permutation(n_atoms, Complex(1.0, 0.0));

    Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(gate_dim, d_aux);
    const double s = 1.0 / std::numbers::sqrt2;
    joint.row(0) = s * phi.transpose();            // |0, A^N>
    joint.row(ens_dim) = s * c1 * phi.transpose();  // |1, A^N>

    joint = gate * joint;
    joint.row(0) = (u_a.matrix * joint.row(0).transpose()).transpose();
    joint.row(ens_dim - 1) = (u_b.matrix * joint.row(ens_dim - 1).transpose()).transpose();
    joint.row(ens_dim) = (u_a.matrix * joint.row(ens_dim).transpose()).transpose();
    joint.row(gate_dim - 1) = (u_b.matrix * joint.row(gate_dim - 1).transpose()).transpose();
    joint = gate * joint;

    HadamardProbabilities probs;
    for (int e = 0; e < ens_dim; ++e) {
        for (int a = 0; a < d_aux; ++a) {
            const Complex c0 = joint(e, a);
            const Complex cb = joint(ens_dim + e, a);
            probs.p_plus += 0.5 * std::norm(c0 + cb);
            probs.p_minus += 0.5 * std::norm(c0 - cb);
        }
    }
    return probs;
}

HadamardProbabilities simulated_pass(const Eigen::VectorXcd& phi, const BranchUnitary& u_a,
                                     const BranchUnitary& u_b,
                                     const InterferometerOptions& options, Complex c1,
                                     Complex transfer_correction) {
    const PhysParams& params = options.params;
    const HamiltonianSpec raman =
        HamiltonianSpec::raman_window(options.gate.model, params, options.gate.include_decay);
    const LevelScheme scheme = raman.scheme();
    const int d_aux = static_cast<int>(phi.size());
    const std::string all_a(static_cast<std::size_t>(params.n_atoms), 'A');
    const std::string all_b(static_cast<std::size_t>(params.n_atoms), 'B');
    const double s = 1.0 / std::numbers::sqrt2;

    // One composite column per auxiliary basis state; gates act identically
    // on every column, the branch step mixes columns row-wise.
    std::vector<CompositeState> columns;
    columns.reserve(static_cast<std::size_t>(d_aux));
    CompositeState seed(scheme);
    seed.add_scaled(CompositeState::basis_state(scheme, ControlLevel::Zero, all_a), s);
    seed.add_scaled(CompositeState::basis_state(scheme, ControlLevel::One, all_a), s * c1);
    for (int a = 0; a < d_aux; ++a) {
        CompositeState column = seed;
        column *= phi(a);
        columns.push_back(std::move(column));
    }

    // Laser phase control absorbs the deterministic phase the transfer
    // branch picks up during a gate; only the uncalibrated residue degrades
    // the interferometer. The |1> sector is rotated back after each gate.
    const std::size_t stride_c = scheme.dim() / kControlDim;
    auto run_columns = [&]() {
        for (auto& column : columns) {
            if (column.squared_norm() == 0.0) continue;
            column = run_gate_sequence(column, params, options.gate).final_state;
            for (std::size_t e = 0; e < stride_c; ++e)
                column.amplitudes[stride_c + e] *= transfer_correction;
        }
    };

    run_columns();

    // Branch-dependent evolution on the auxiliary register, keyed by the
    // ensemble label string; leaked components evolve trivially.
    auto apply_branch = [&](const std::string& labels, const Eigen::MatrixXcd& u) {
        for (ControlLevel c :
             {ControlLevel::Zero, ControlLevel::One, ControlLevel::Rydberg}) {
            const std::size_t idx =
                basis_index(scheme, c, ensemble_labels_from_string(labels));
            Eigen::VectorXcd row(d_aux);
            for (int a = 0; a < d_aux; ++a) row(a) = columns[static_cast<std::size_t>(a)].amplitudes[idx];
            row = u * row;
            for (int a = 0; a < d_aux; ++a) columns[static_cast<std::size_t>(a)].amplitudes[idx] = row(a);
        }
    };
    apply_branch(all_a, u_a.matrix);
    apply_branch(all_b, u_b.matrix);

    run_columns();

    HadamardProbabilities probs;
    const std::size_t stride = scheme.dim() / kControlDim;
    for (int a = 0; a < d_aux; ++a) {
        const auto& amps = columns[static_cast<std::size_t>(a)].amplitudes;
        for (std::size_t e = 0; e < stride; ++e) {
            probs.p_plus += 0.5 * std::norm(amps[e] + amps[stride + e]);
            probs.p_minus += 0.5 * std::norm(amps[e] - amps[stride + e]);
        }
    }
    return probs;
}

}  // namespace

InterferometerResult run_interferometer(const Eigen::VectorXcd& phi_initial,
                                        const BranchUnitary& u_a, const BranchUnitary& u_b,
                                        const InterferometerOptions& options) {
    if (options.n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
    if (u_a.dim() != u_b.dim() || u_a.dim() != phi_initial.size())
        throw std::invalid_argument("auxiliary register dimensions do not match");
    if (std::abs(phi_initial.squaredNorm() - 1.0) > 1e-9)
        throw std::invalid_argument("phi_initial must be normalized");
    u_a.validate();
    u_b.validate();

    HadamardProbabilities real_pass, imag_pass;
    if (options.mode == GateMode::Ideal) {
        real_pass = ideal_pass(phi_initial, u_a, u_b, options.n_atoms, Complex(1.0, 0.0));
        imag_pass = ideal_pass(phi_initial, u_a, u_b, options.n_atoms, Complex(0.0, 1.0));
    } else {
        if (options.params.n_atoms != options.n_atoms)
            throw std::invalid_argument("params.n_atoms must match interferometer n_atoms");
        // calibrate the deterministic transfer-branch phase once per setting
        const GateOutcome calibration = run_gate(
            ControlInput::one(), std::string(static_cast<std::size_t>(options.n_atoms), 'A'),
            options.params, options.gate);
        const Complex correction = std::exp(Complex(0.0, -calibration.conditional_phase));
        real_pass = simulated_pass(phi_initial, u_a, u_b, options, Complex(1.0, 0.0), correction);
        imag_pass = simulated_pass(phi_initial, u_a, u_b, options, Complex(0.0, 1.0), correction);
    }

    InterferometerResult result;
    result.p_plus = real_pass.p_plus;
    result.p_minus = real_pass.p_minus;
    result.overlap_estimate = Complex(real_pass.p_plus - real_pass.p_minus,
                                      imag_pass.p_minus - imag_pass.p_plus);
    return result;
}

}  // namespace rydgate
