#pragma once

/**
 * @file scattering.hpp
 * @brief Two-body exchange operators Y and the Yang-Baxter residual.
 *
 * A two-body operator relates the Bethe coefficients on the two sides of a
 * coincidence plane, u21 = Y(k12) u12, where k12 = (k1 - k2) / 2 is the
 * spectral parameter.
 */

#include <functional>
#include <limits>
#include <sstream>

#include "ptspin/boundary.hpp"

namespace ptspin {

struct Kinematics {
    double k1 = 0;
    double k2 = 0;

    double total() const { return k1 + k2; }
    double relative() const { return (k1 - k2) / 2.0; }
};

/// Spectral parameter (ki - kj) / 2.
inline double spectral_parameter(double ki, double kj) { return (ki - kj) / 2.0; }

/// Maps a spectral parameter k to an n^2 x n^2 two-body operator.
using YFactory = std::function<ComplexMatrix(double)>;

/// (ik12 - F)^-1 (ik12 + F); the Dirichlet variant gives -I for every k.
inline ComplexMatrix y_separated(const SeparatedBC& bc, double k12) {
    const std::size_t d = bc.n * bc.n;
    const ComplexMatrix id = identity(d);
    if (bc.dirichlet) return -id;
    const Complex ik = I_unit * k12;
    ComplexMatrix resolvent;
    try {
        resolvent = inverse(ik * id - bc.F, "ik12 - F");
    } catch (const SingularityError&) {
        Complex nearest = std::numeric_limits<double>::quiet_NaN();
        for (const auto& z : eigenvalues(bc.F))
            if (std::isnan(nearest.real()) || std::abs(z - ik) < std::abs(nearest - ik)) nearest = z;
        std::ostringstream os;
        os.precision(17);
        os << "ik12 = " << ik.imag() << "i collides with eigenvalue (" << nearest.real() << ", " << nearest.imag()
           << ") of F";
        throw SingularityError("ik12 - F", os.str());
    }
    return resolvent * (ik * id + bc.F);
}

/**
 * Exchange operator of a general connection (A, B, C, D):
 *
 *   Y = [ (A - ikB)^-1 - ik (C - ikD)^-1 ]^-1
 *       [ (A - ikB)^-1 (A + ikB) P - (C - ikD)^-1 (C + ikD) P
 *         - (A - ikB)^-1 - ik (C - ikD)^-1 ]
 *
 * with P the statistics-signed swap.
 */
inline ComplexMatrix y_nonseparated(const NonseparatedBC& bc, double k12, Statistics s) {
    const auto& [n, A, B, C, D] = bc;
    const Complex ik = I_unit * k12;
    const ComplexMatrix P = statistics_swap(n, s);
    const ComplexMatrix left_inv = inverse(A - ik * B, "A - ik12 B");
    const ComplexMatrix right_inv = inverse(C - ik * D, "C - ik12 D");
    const ComplexMatrix outer = inverse(left_inv - ik * right_inv, "(A - ik12 B)^-1 - ik12 (C - ik12 D)^-1");
    const ComplexMatrix inner =
        left_inv * (A + ik * B) * P - right_inv * (C + ik * D) * P - left_inv - ik * right_inv;
    return outer * inner;
}

/// | Y(k) Y(-k) - I |.
inline double y_inverse_residual(const SeparatedBC& bc, double k12) {
    const ComplexMatrix prod = y_separated(bc, k12) * y_separated(bc, -k12);
    return max_abs(ComplexMatrix(prod - identity(bc.n * bc.n)));
}

inline YFactory separated_factory(SeparatedBC bc) {
    return [bc = std::move(bc)](double k) { return y_separated(bc, k); };
}

inline YFactory nonseparated_factory(NonseparatedBC bc, Statistics s) {
    return [bc = std::move(bc), s](double k) { return y_nonseparated(bc, k, s); };
}

/// Factory returning the same operator for every spectral parameter.
inline YFactory constant_factory(ComplexMatrix m) {
    return [m = std::move(m)](double) { return m; };
}

/**
 * Yang-Baxter residual for three particles with momenta k1, k2, k3:
 *
 *   | Y1(k12) Y2(k13) Y1(k23) - Y2(k23) Y1(k13) Y2(k12) |
 *
 * where Ym(k) is the factory operator embedded on tensor factors m, m+1 and
 * kij = (ki - kj) / 2. With lower labels (i, j, k) = (2, 1, 3) this is the
 * relation Y^{12}_{ij} Y^{23}_{kj} Y^{12}_{ki} = Y^{23}_{ki} Y^{12}_{kj} Y^{23}_{ij},
 * a lower pair (a, b) carrying the spectral parameter k_{ba}.
 */
inline double ybe_residual(const YFactory& factory, double k1, double k2, double k3, const SpinDims& dims) {
    if (dims.N != 3) throw DomainError("ybe_residual: requires N = 3");
    const double k12 = spectral_parameter(k1, k2);
    const double k13 = spectral_parameter(k1, k3);
    const double k23 = spectral_parameter(k2, k3);
    auto y = [&](std::size_t m, double k) { return embed_pair(factory(k), m, dims); };
    const ComplexMatrix lhs = y(1, k12) * y(2, k13) * y(1, k23);
    const ComplexMatrix rhs = y(2, k23) * y(1, k13) * y(2, k12);
    return max_abs(ComplexMatrix(lhs - rhs));
}

} // namespace ptspin
