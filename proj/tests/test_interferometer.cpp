#include <doctest.h>

#include <numbers>
#include <random>

#include "rydgate/interferometer.hpp"

using namespace rydgate;

namespace {

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= d / std::abs(d);
    }
    return q;
}

Eigen::VectorXcd random_aux_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd phi(dim);
    for (int i = 0; i < dim; ++i) phi(i) = Complex(gauss(rng), gauss(rng));
    phi /= phi.norm();
    return phi;
}

}  // namespace

TEST_SUITE_BEGIN("interferometer");

TEST_CASE("ideal gate unitary implements the truth table") {
    for (int n : {1, 2, 3}) {
        const Eigen::MatrixXcd u = ideal_gate_unitary(n);
        const int ens_dim = 1 << n;
        REQUIRE(u.rows() == 2 * ens_dim);
        // unitary to machine precision
        CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
        // |0,e> fixed
        for (int e = 0; e < ens_dim; ++e) CHECK(u(e, e) == Complex(1.0, 0.0));
        // |1,A^N> -> -(-1)^N |1,B^N>
        const double phase = n % 2 == 0 ? -1.0 : 1.0;
        CHECK(u(ens_dim + ens_dim - 1, ens_dim) == Complex(phase, 0.0));
        // applying the gate twice restores the state up to global phase
        const Eigen::MatrixXcd twice = u * u;
        CHECK((twice - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <
              1e-14);
    }
    CHECK_THROWS_AS(ideal_gate_unitary(0), std::invalid_argument);
}

TEST_CASE("branch unitary constructors") {
    CHECK_NOTHROW(BranchUnitary::identity(4).validate());
    CHECK_NOTHROW(BranchUnitary::global_phase(3, 0.7).validate());
    CHECK_NOTHROW(BranchUnitary::phase_rotation(4, 2, 1.2).validate());
    CHECK_NOTHROW(BranchUnitary::two_level_mixing(5, 0, 3, 0.4).validate());
    CHECK_THROWS_AS(BranchUnitary::phase_rotation(3, 5, 1.0), std::invalid_argument);

    Eigen::MatrixXcd not_unitary = Eigen::MatrixXcd::Identity(3, 3);
    not_unitary(0, 0) = 1.5;
    CHECK_THROWS_AS(BranchUnitary::from_matrix("bad", not_unitary), std::invalid_argument);
}

TEST_CASE("identical branches interfere perfectly") {
    InterferometerOptions options;
    options.n_atoms = 2;
    std::mt19937_64 rng(5);
    const Eigen::VectorXcd phi = random_aux_state(4, rng);
    const BranchUnitary u = BranchUnitary::two_level_mixing(4, 0, 2, 0.3);
    const InterferometerResult r = run_interferometer(phi, u, u, options);
    CHECK(r.p_plus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.p_minus == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(r.overlap_estimate - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("global phase shows up as the complex overlap") {
    InterferometerOptions options;
    options.n_atoms = 1;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(2);
    phi(0) = 1.0;
    const double theta = std::numbers::pi / 3.0;
    const InterferometerResult r = run_interferometer(
        phi, BranchUnitary::identity(2), BranchUnitary::global_phase(2, theta), options);
    CHECK(r.p_plus == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::abs(r.overlap_estimate - std::exp(Complex(0.0, theta))) < 1e-12);
}

TEST_CASE("orthogonal branch output erases the interference") {
    InterferometerOptions options;
    options.n_atoms = 1;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(2);
    phi(0) = 1.0;
    const InterferometerResult r = run_interferometer(
        phi, BranchUnitary::identity(2),
        BranchUnitary::two_level_mixing(2, 0, 1, 0.5 * std::numbers::pi), options);
    CHECK(r.p_plus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.p_minus == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r.overlap_estimate) < 1e-12);
}

TEST_CASE("ideal mode reproduces <Phi|Ua^dag Ub|Phi> on random instances") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dim_dist(2, 8);
    std::uniform_int_distribution<int> atoms_dist(1, 3);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = dim_dist(rng);
        InterferometerOptions options;
        options.n_atoms = atoms_dist(rng);
        const Eigen::VectorXcd phi = random_aux_state(d, rng);
        const BranchUnitary ua = BranchUnitary::from_matrix("ua", haar_unitary(d, rng));
        const BranchUnitary ub = BranchUnitary::from_matrix("ub", haar_unitary(d, rng));
        const InterferometerResult r = run_interferometer(phi, ua, ub, options);
        const Complex expected = (phi.adjoint() * ua.matrix.adjoint() * ub.matrix * phi)(0);
        CHECK(std::abs(r.overlap_estimate - expected) <= 1e-10);
        CHECK(r.p_plus >= -1e-12);
        CHECK(r.p_plus <= 1.0 + 1e-12);
        CHECK(r.p_plus + r.p_minus == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(r.overlap_estimate) <= 1.0 + 1e-9);
    }
}

TEST_CASE("input validation") {
    InterferometerOptions options;
    options.n_atoms = 1;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(2);
    phi(0) = 2.0;  // not normalized
    CHECK_THROWS_AS(run_interferometer(phi, BranchUnitary::identity(2),
                                       BranchUnitary::identity(2), options),
                    std::invalid_argument);
    phi(0) = 1.0;
    CHECK_THROWS_AS(run_interferometer(phi, BranchUnitary::identity(3),
                                       BranchUnitary::identity(3), options),
                    std::invalid_argument);
}

TEST_CASE("simulated gates converge to the ideal interferometer") {
    InterferometerOptions options;
    options.n_atoms = 2;
    options.mode = GateMode::Simulated;
    options.params = rb87_preset(2);
    std::mt19937_64 rng(77);
    const Eigen::VectorXcd phi = random_aux_state(2, rng);
    const BranchUnitary ua = BranchUnitary::phase_rotation(2, 0, 0.4);
    const BranchUnitary ub = BranchUnitary::two_level_mixing(2, 0, 1, 0.6);

    const InterferometerResult simulated = run_interferometer(phi, ua, ub, options);
    options.mode = GateMode::Ideal;
    const InterferometerResult ideal = run_interferometer(phi, ua, ub, options);

    CHECK(std::abs(simulated.overlap_estimate - ideal.overlap_estimate) <= 0.05);
    CHECK(simulated.p_plus + simulated.p_minus <= 1.0 + 1e-9);
}

TEST_SUITE_END();
