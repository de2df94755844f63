#pragma once

// Many-body interferometer: control superposition, gate, branch-dependent
// unitaries U_A / U_B on an auxiliary register tagged by the ensemble labels,
// inverse gate, control measurement in |c+-> = (|0> +- |1>)/sqrt(2). The +-
// asymmetry yields Re<Phi|U_A^dag U_B|Phi>; a second run with the control
// prepared as (|0> + i|1>)/sqrt(2) recovers the imaginary part.

#include <Eigen/Dense>
#include <string>

#include "rydgate/gate.hpp"

namespace rydgate {

struct BranchUnitary {
    std::string description;
    Eigen::MatrixXcd matrix;

    static BranchUnitary identity(int dim);
    static BranchUnitary global_phase(int dim, double theta);
    // phase rotation exp(i theta) on a single basis level
    static BranchUnitary phase_rotation(int dim, int level, double theta);
    // rotation by theta in the (a,b) plane
    static BranchUnitary two_level_mixing(int dim, int a, int b, double theta);
    static BranchUnitary from_matrix(std::string description, Eigen::MatrixXcd m);

    int dim() const { return static_cast<int>(matrix.rows()); }
    void validate() const;  // unitarity to 1e-10
};

enum class GateMode { Ideal, Simulated };

struct InterferometerOptions {
    GateMode mode = GateMode::Ideal;
    int n_atoms = 1;
    PhysParams params;    // Simulated mode only
    GateOptions gate;     // Simulated mode only
};

struct InterferometerResult {
    double p_plus = 0.0;
    double p_minus = 0.0;
    Complex overlap_estimate{0.0, 0.0};
};

// Permutation-with-phase unitary of the gate on control {0,1} x {A,B}^N;
// the |1> branch swaps A^N <-> B^N and carries -(-1)^N.
Eigen::MatrixXcd ideal_gate_unitary(int n_atoms);

InterferometerResult run_interferometer(const Eigen::VectorXcd& phi_initial,
                                        const BranchUnitary& u_a, const BranchUnitary& u_b,
                                        const InterferometerOptions& options);

}  // namespace rydgate
