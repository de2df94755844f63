#include <doctest.h>

#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "rydgate/hilbert.hpp"

using namespace rydgate;
using rydgate::testing::dense_site_matrix;
using rydgate::testing::random_state;

TEST_SUITE_BEGIN("hilbert");

TEST_CASE("scheme dimensions and level indexing") {
    const LevelScheme full(EnsembleBasis::Full, 2);
    CHECK(full.dim() == 48);
    CHECK(full.ensemble_dim() == 4);
    const LevelScheme eff(EnsembleBasis::Effective, 3);
    CHECK(eff.dim() == 81);
    CHECK(eff.level_index(EnsembleLevel::R) == 2);
    CHECK_THROWS_AS((void)eff.level_index(EnsembleLevel::P), std::invalid_argument);
    CHECK_THROWS_AS(LevelScheme(EnsembleBasis::Full, -1), std::invalid_argument);
    CHECK_THROWS_AS(LevelScheme(EnsembleBasis::Full, 30), std::invalid_argument);  // cap
}

TEST_CASE("basis_index basics") {
    const LevelScheme empty(EnsembleBasis::Effective, 0);
    CHECK(basis_index(empty, ControlLevel::Zero, {}) == 0);

    const LevelScheme full1(EnsembleBasis::Full, 1);
    const std::vector<EnsembleLevel> a = {EnsembleLevel::A};
    CHECK(basis_index(full1, ControlLevel::Zero, a) == 0);
    CHECK(basis_index(full1, ControlLevel::One, a) == 4);

    const std::vector<EnsembleLevel> wrong_len = {EnsembleLevel::A, EnsembleLevel::B};
    CHECK_THROWS_AS(basis_index(full1, ControlLevel::Zero, wrong_len), std::invalid_argument);
}

TEST_CASE("basis_index locates |r;RR> by enumeration") {
    // independent oracle: walk the 48-element basis in index order
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    ControlLevel c;
    std::vector<EnsembleLevel> labels;
    std::size_t found = scheme.dim();
    for (std::size_t i = 0; i < scheme.dim(); ++i) {
        decode_index(scheme, i, c, labels);
        if (c == ControlLevel::Rydberg && labels[0] == EnsembleLevel::R &&
            labels[1] == EnsembleLevel::R)
            found = i;
    }
    CHECK(found == 47);
    const std::vector<EnsembleLevel> rr = {EnsembleLevel::R, EnsembleLevel::R};
    CHECK(basis_index(scheme, ControlLevel::Rydberg, rr) == 47);
}

TEST_CASE("basis_index is a bijection for N <= 3") {
    for (EnsembleBasis basis : {EnsembleBasis::Full, EnsembleBasis::Effective}) {
        for (int n = 0; n <= 3; ++n) {
            const LevelScheme scheme(basis, n);
            ControlLevel c;
            std::vector<EnsembleLevel> labels;
            for (std::size_t i = 0; i < scheme.dim(); ++i) {
                decode_index(scheme, i, c, labels);
                REQUIRE(basis_index(scheme, c, labels) == i);
            }
        }
    }
}

TEST_CASE("apply_site_operator identity leaves the state unchanged") {
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    const CompositeState state = random_state(scheme, 11);
    SiteOperator id;
    id.site = SiteRef::ensemble(1);
    id.dim = 4;
    for (int i = 0; i < 4; ++i) id.at(i, i) = Complex(1.0, 0.0);
    const CompositeState out = apply_site_operator(state, id);
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
        CHECK(out.amplitudes[i] == state.amplitudes[i]);
}

TEST_CASE("apply_site_operator moves |0,AA> to |0,BA>") {
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    const CompositeState in = CompositeState::basis_state(scheme, ControlLevel::Zero, "AA");
    SiteOperator b_from_a;
    b_from_a.site = SiteRef::ensemble(0);
    b_from_a.dim = 4;
    b_from_a.at(1, 0) = Complex(1.0, 0.0);  // |B><A|
    const CompositeState out = apply_site_operator(in, b_from_a);
    const std::size_t target =
        basis_index(scheme, ControlLevel::Zero, ensemble_labels_from_string("BA"));
    CHECK(out.amplitudes[target] == Complex(1.0, 0.0));
    CHECK(std::abs(out.squared_norm() - 1.0) < 1e-15);
}

TEST_CASE("projector |R><R| against the dense oracle on the 48-dim space") {
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    SiteOperator proj;
    proj.site = SiteRef::ensemble(1);
    proj.dim = 4;
    proj.at(3, 3) = Complex(1.0, 0.0);

    // (|0,AR> + |0,RA>)/sqrt(2) -> |0,AR>/sqrt(2)
    CompositeState in(scheme);
    const double s = 1.0 / std::numbers::sqrt2;
    in.amplitudes[basis_index(scheme, ControlLevel::Zero, ensemble_labels_from_string("AR"))] = s;
    in.amplitudes[basis_index(scheme, ControlLevel::Zero, ensemble_labels_from_string("RA"))] = s;
    const CompositeState out = apply_site_operator(in, proj);
    CHECK(std::abs(out.amplitudes[basis_index(scheme, ControlLevel::Zero,
                                              ensemble_labels_from_string("AR"))] -
                   Complex(s, 0.0)) < 1e-15);
    CHECK(std::abs(out.squared_norm() - 0.5) < 1e-15);

    const Eigen::MatrixXcd dense = dense_site_matrix(scheme, proj);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const CompositeState psi = random_state(scheme, seed);
        const CompositeState fast = apply_site_operator(psi, proj);
        const Eigen::VectorXcd reference = dense * rydgate::testing::to_eigen(psi);
        for (std::size_t i = 0; i < psi.amplitudes.size(); ++i)
            CHECK(std::abs(fast.amplitudes[i] - reference(static_cast<Eigen::Index>(i))) < 1e-14);
    }
}

TEST_CASE("unitary site operators preserve the norm") {
    const LevelScheme scheme(EnsembleBasis::Effective, 3);
    const CompositeState psi = random_state(scheme, 42);
    const double th = 0.7;
    SiteOperator u;
    u.site = SiteRef::ensemble(2);
    u.dim = 3;
    u.at(0, 0) = std::cos(th);
    u.at(0, 2) = -std::sin(th);
    u.at(2, 0) = std::sin(th);
    u.at(2, 2) = std::cos(th);
    u.at(1, 1) = Complex(1.0, 0.0);
    const CompositeState out = apply_site_operator(psi, u);
    CHECK(std::abs(out.norm() / psi.norm() - 1.0) < 1e-12);
}

TEST_CASE("site operators on different atoms commute") {
    const LevelScheme scheme(EnsembleBasis::Effective, 3);
    SiteOperator op_a;
    op_a.site = SiteRef::ensemble(0);
    op_a.dim = 3;
    op_a.at(0, 1) = Complex(0.3, 0.1);
    op_a.at(2, 0) = Complex(-0.2, 0.7);
    op_a.at(1, 1) = Complex(0.5, 0.0);
    SiteOperator op_b = op_a;
    op_b.site = SiteRef::ensemble(2);

    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const CompositeState psi = random_state(scheme, seed);
        const CompositeState ab = apply_site_operator(apply_site_operator(psi, op_a), op_b);
        const CompositeState ba = apply_site_operator(apply_site_operator(psi, op_b), op_a);
        for (std::size_t i = 0; i < psi.amplitudes.size(); ++i)
            CHECK(std::abs(ab.amplitudes[i] - ba.amplitudes[i]) < 1e-12);
    }
}

TEST_CASE("apply_site_operator rejects bad sites") {
    const LevelScheme scheme(EnsembleBasis::Effective, 1);
    const CompositeState psi = random_state(scheme, 9);
    SiteOperator op;
    op.site = SiteRef::ensemble(0);
    op.dim = 4;  // full-basis matrix on an effective-basis site
    CHECK_THROWS_AS(apply_site_operator(psi, op), std::invalid_argument);
    op.dim = 3;
    op.site = SiteRef::ensemble(5);
    CHECK_THROWS_AS(apply_site_operator(psi, op), std::invalid_argument);
}

TEST_CASE("two-site projector basics") {
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    const CompositeState psi = random_state(scheme, 20);

    const CompositeState zero =
        apply_two_site_projector(psi, SiteRef::ensemble(0), SiteRef::ensemble(1), 3, 3, 0.0);
    CHECK(zero.squared_norm() == 0.0);

    const double v = 2.5;
    const CompositeState out =
        apply_two_site_projector(psi, SiteRef::ensemble(0), SiteRef::ensemble(1), 3, 3, v);
    ControlLevel c;
    std::vector<EnsembleLevel> labels;
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
        decode_index(scheme, i, c, labels);
        const bool rr = labels[0] == EnsembleLevel::R && labels[1] == EnsembleLevel::R;
        const Complex expected = rr ? v * psi.amplitudes[i] : Complex(0.0, 0.0);
        CHECK(std::abs(out.amplitudes[i] - expected) < 1e-15);
    }

    CHECK_THROWS_AS(
        apply_two_site_projector(psi, SiteRef::ensemble(1), SiteRef::ensemble(1), 3, 3, 1.0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        apply_two_site_projector(psi, SiteRef::ensemble(0), SiteRef::ensemble(1), 4, 3, 1.0),
        std::invalid_argument);
}

TEST_CASE("two-site projector on the uniform superposition") {
    // uniform over all 48 basis states -> exactly one nonzero per control level
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    CompositeState uniform(scheme);
    const double amp = 1.0 / std::sqrt(48.0);
    for (Complex& a : uniform.amplitudes) a = amp;
    const CompositeState out =
        apply_two_site_projector(uniform, SiteRef::ensemble(0), SiteRef::ensemble(1), 3, 3, 1.0);
    int nonzero = 0;
    for (const Complex& a : out.amplitudes)
        if (a != Complex(0.0, 0.0)) ++nonzero;
    CHECK(nonzero == 3);
}

TEST_CASE("control site operators against the dense oracle") {
    const LevelScheme scheme(EnsembleBasis::Effective, 2);
    SiteOperator op;
    op.site = SiteRef::control();
    op.dim = 3;
    op.at(1, 2) = Complex(0.0, -1.0);
    op.at(2, 1) = Complex(0.0, -1.0);
    op.at(0, 0) = Complex(1.0, 0.0);
    const Eigen::MatrixXcd dense = dense_site_matrix(scheme, op);
    const CompositeState psi = random_state(scheme, 55);
    const CompositeState fast = apply_site_operator(psi, op);
    const Eigen::VectorXcd reference = dense * rydgate::testing::to_eigen(psi);
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i)
        CHECK(std::abs(fast.amplitudes[i] - reference(static_cast<Eigen::Index>(i))) < 1e-14);
}

TEST_CASE("overlap conventions") {
    const LevelScheme scheme(EnsembleBasis::Effective, 2);
    const CompositeState psi = random_state(scheme, 31);
    const Complex self = overlap(psi, psi);
    CHECK(std::abs(self.imag()) < 1e-15);
    CHECK(std::abs(self.real() - psi.squared_norm()) < 1e-14);

    const CompositeState ea = CompositeState::basis_state(scheme, ControlLevel::Zero, "AA");
    const CompositeState eb = CompositeState::basis_state(scheme, ControlLevel::Zero, "AB");
    CHECK(overlap(ea, eb) == Complex(0.0, 0.0));

    // <(|A>+i|B>)/sqrt2 | (|A>-i|B>)/sqrt2> = 0 with conjugation on the bra
    const LevelScheme one(EnsembleBasis::Effective, 1);
    CompositeState left(one), right(one);
    const double s = 1.0 / std::numbers::sqrt2;
    left.amplitudes[0] = s;
    left.amplitudes[1] = Complex(0.0, s);
    right.amplitudes[0] = s;
    right.amplitudes[1] = Complex(0.0, -s);
    CHECK(std::abs(overlap(left, right)) < 1e-15);

    const CompositeState other = random_state(scheme, 32);
    const Complex ab = overlap(psi, other);
    const Complex ba = overlap(other, psi);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-14);

    const CompositeState mismatched = random_state(LevelScheme(EnsembleBasis::Full, 2), 33);
    CHECK_THROWS_AS(overlap(psi, mismatched), std::invalid_argument);
}

TEST_CASE("population diagnostics") {
    const LevelScheme scheme(EnsembleBasis::Effective, 2);
    CompositeState psi(scheme);
    const double s = 1.0 / std::numbers::sqrt2;
    psi.amplitudes[basis_index(scheme, ControlLevel::Rydberg,
                               ensemble_labels_from_string("RR"))] = s;
    psi.amplitudes[basis_index(scheme, ControlLevel::Zero, ensemble_labels_from_string("AB"))] = s;
    const auto pops = level_populations(psi);
    CHECK(pops[0] == doctest::Approx(0.5));  // A
    CHECK(pops[1] == doctest::Approx(0.5));  // B
    CHECK(pops[3] == doctest::Approx(1.0));  // R twice with weight 1/2
    CHECK(double_rydberg_population(psi) == doctest::Approx(0.5));
    CHECK(control_joint_rydberg_population(psi) == doctest::Approx(1.0));
}

TEST_CASE("state snapshot round trip") {
    const LevelScheme scheme(EnsembleBasis::Full, 2);
    CompositeState psi = random_state(scheme, 77);
    psi.amplitudes[5] = Complex(0.0, 0.0);  // keep a hole so sparsity is exercised
    std::stringstream buffer;
    write_state_snapshot(buffer, psi);
    const CompositeState back = read_state_snapshot(buffer);
    REQUIRE(back.scheme == psi.scheme);
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i)
        CHECK(back.amplitudes[i] == psi.amplitudes[i]);  // 17 digits round-trip exactly
}

TEST_CASE("snapshot header errors") {
    std::stringstream bad("scheme=WEIRD d_c=3 d_e=4 N=1\n");
    CHECK_THROWS(read_state_snapshot(bad));
    std::stringstream index_out_of_range("scheme=EFFECTIVE d_c=3 d_e=3 N=0\n7 1 0\n");
    CHECK_THROWS(read_state_snapshot(index_out_of_range));
}

TEST_SUITE_END();
