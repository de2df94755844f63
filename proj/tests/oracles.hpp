#pragma once

// Test-only reference implementations, kept independent of the matrix-free
// paths they check.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <random>

#include "rydgate/hilbert.hpp"

namespace rydgate::testing {

// Dense matrix of an operator at time t, column by column.
inline Eigen::MatrixXcd dense_matrix(const TimeDependentOperator& op, double t) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    Eigen::MatrixXcd m(n, n);
    std::vector<Complex> unit(op.dim()), column(op.dim());
    for (Eigen::Index j = 0; j < n; ++j) {
        std::fill(unit.begin(), unit.end(), Complex(0.0, 0.0));
        unit[static_cast<std::size_t>(j)] = Complex(1.0, 0.0);
        op.apply(t, unit, column);
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = column[static_cast<std::size_t>(i)];
    }
    return m;
}

// Dense matrix of (site operator) x (identity elsewhere), built from label
// decoding rather than stride walking.
inline Eigen::MatrixXcd dense_site_matrix(const LevelScheme& scheme, const SiteOperator& op) {
    const auto n = static_cast<Eigen::Index>(scheme.dim());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    ControlLevel ci, cj;
    std::vector<EnsembleLevel> li, lj;
    for (Eigen::Index i = 0; i < n; ++i) {
        decode_index(scheme, static_cast<std::size_t>(i), ci, li);
        for (Eigen::Index j = 0; j < n; ++j) {
            decode_index(scheme, static_cast<std::size_t>(j), cj, lj);
            bool rest_equal = true;
            int row = 0, col = 0;
            if (op.site.is_control) {
                row = static_cast<int>(ci);
                col = static_cast<int>(cj);
                rest_equal = li == lj;
            } else {
                row = scheme.level_index(li[static_cast<std::size_t>(op.site.atom)]);
                col = scheme.level_index(lj[static_cast<std::size_t>(op.site.atom)]);
                rest_equal = ci == cj;
                for (int k = 0; rest_equal && k < scheme.n_atoms; ++k)
                    if (k != op.site.atom) rest_equal = li[static_cast<std::size_t>(k)] == lj[static_cast<std::size_t>(k)];
            }
            if (rest_equal) m(i, j) = op.at(row, col);
        }
    }
    return m;
}

inline CompositeState random_state(const LevelScheme& scheme, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    CompositeState state(scheme);
    for (Complex& a : state.amplitudes) a = Complex(gauss(rng), gauss(rng));
    const double norm = state.norm();
    state *= Complex(1.0 / norm, 0.0);
    return state;
}

// Composite Simpson rule on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2 != 0) ++intervals;
    const double h = (b - a) / intervals;
    double acc = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline Eigen::VectorXcd to_eigen(const CompositeState& state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.amplitudes.size()));
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = state.amplitudes[i];
    return v;
}

}  // namespace rydgate::testing
