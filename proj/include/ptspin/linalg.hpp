#pragma once

/**
 * @file linalg.hpp
 * @brief Dense complex matrices, tensor structure and pair embeddings.
 *
 * Tensor products use lexicographic basis ordering with the first factor
 * most significant: e_a (x) e_b maps to index a*n + b. Every swap and
 * embedding matrix in the library, and every JSON fixture, follows it.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "ptspin/errors.hpp"

namespace ptspin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex I_unit{0.0, 1.0};

/// Smallest-to-largest singular value ratio below which a matrix is singular.
inline constexpr double default_singular_ratio = 1e-12;

/// Number of spin components per particle and number of particles.
struct SpinDims {
    std::size_t n = 1;
    std::size_t N = 2;

    std::size_t pair_dim() const { return n * n; }

    std::size_t total_dim() const {
        std::size_t d = 1;
        for (std::size_t i = 0; i < N; ++i) d *= n;
        return d;
    }
};

inline std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

/// Entrywise max-abs norm; every residual in the library uses it.
inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const ComplexVector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

inline bool is_finite(const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Complex z = m.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

inline void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

inline ComplexMatrix identity(std::size_t dim) {
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

/// Spin dimension n of a pair operator of size n^2 x n^2.
inline std::size_t spin_dim_of_pair_operator(const ComplexMatrix& m) {
    require_square(m, "pair operator");
    const auto d = static_cast<std::size_t>(m.rows());
    auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
    if (n * n != d) throw DimensionError("pair operator dimension " + std::to_string(d) + " is not a perfect square");
    return n;
}

/// Kronecker product; (a (x) b)(e_i (x) e_j) = (a e_i) (x) (b e_j).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "kron left factor");
    require_square(b, "kron right factor");
    const Eigen::Index ra = a.rows(), rb = b.rows();
    ComplexMatrix out(ra * rb, ra * rb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ra; ++j)
            out.block(i * rb, j * rb, rb, rb) = a(i, j) * b;
    return out;
}

/// The n^2 x n^2 permutation p with p(e_a (x) e_b) = e_b (x) e_a.
inline ComplexMatrix swap_pair(std::size_t n) {
    if (n == 0) throw DomainError("swap_pair: spin dimension must be >= 1");
    const auto d = static_cast<Eigen::Index>(n * n);
    ComplexMatrix p = ComplexMatrix::Zero(d, d);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            p(static_cast<Eigen::Index>(b * n + a), static_cast<Eigen::Index>(a * n + b)) = 1.0;
    return p;
}

/**
 * Operator on (C^n)^{(x)N} acting as `m` on tensor factors j, j+1
 * (1-based) and as the identity elsewhere.
 */
inline ComplexMatrix embed_pair(const ComplexMatrix& m, std::size_t j, const SpinDims& dims) {
    if (dims.n == 0 || dims.N < 2) throw DomainError("embed_pair: need n >= 1 and N >= 2");
    if (j < 1 || j + 1 > dims.N) {
        throw IndexError("embed_pair: pair index " + std::to_string(j) + " outside 1.." +
                         std::to_string(dims.N - 1));
    }
    if (static_cast<std::size_t>(m.rows()) != dims.pair_dim() || m.rows() != m.cols())
        throw DimensionError("embed_pair: operator must be n^2 x n^2");
    const std::size_t left = ipow(dims.n, j - 1);
    const std::size_t right = ipow(dims.n, dims.N - j - 1);
    ComplexMatrix out = m;
    if (left > 1) out = kron(identity(left), out);
    if (right > 1) out = kron(out, identity(right));
    return out;
}

/// Condition-checked inverse. `role` names the matrix in the error.
inline ComplexMatrix inverse(const ComplexMatrix& m, const std::string& role = "matrix",
                             double singular_ratio = default_singular_ratio) {
    require_square(m, role.c_str());
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smax > 0.0) || smin < singular_ratio * smax) {
        std::ostringstream os;
        os.precision(17);
        os << "smallest/largest singular value = " << smin << "/" << smax;
        throw SingularityError(role, os.str());
    }
    return m.fullPivLu().inverse();
}

struct EigenPair {
    Complex value;
    ComplexVector vector;
};

/// All eigenpairs of `m` with multiplicity, unsorted.
inline std::vector<EigenPair> eig(const ComplexMatrix& m) {
    require_square(m, "eig input");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) throw NumericalError("eig: eigensolver did not converge");
    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out.push_back({solver.eigenvalues()(i), solver.eigenvectors().col(i)});
    return out;
}

inline std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
    require_square(m, "eigenvalues input");
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalues: eigensolver did not converge");
    std::vector<Complex> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

/// Orders by real part, then imaginary part.
inline bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline double spectral_radius(const ComplexMatrix& m) {
    double r = 0.0;
    for (const auto& z : eigenvalues(m)) r = std::max(r, std::abs(z));
    return r;
}

/**
 * Orthonormal basis (columns) of the numerical null space of `m`:
 * right singular vectors whose singular value is <= tol * max(1, sigma_max).
 */
inline ComplexMatrix null_space(const ComplexMatrix& m, double tol) {
    const Eigen::Index cols = m.cols();
    if (m.rows() == 0) return identity(static_cast<std::size_t>(cols));
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * scale) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

/**
 * Basis-independent orthonormal basis of span(basis): projects e_1, e_2, ...
 * onto the span in order and keeps the Gram-Schmidt survivors. Entries below
 * 1e-14 in magnitude are flushed to zero.
 */
inline ComplexMatrix canonical_basis(const ComplexMatrix& basis) {
    const Eigen::Index dim = basis.rows(), rank = basis.cols();
    ComplexMatrix out(dim, rank);
    Eigen::Index found = 0;
    for (Eigen::Index i = 0; i < dim && found < rank; ++i) {
        ComplexVector v = basis * basis.row(i).adjoint();
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index c = 0; c < found; ++c) v -= out.col(c).dot(v) * out.col(c);
        const double norm = v.norm();
        if (norm <= 1e-8) continue;
        v /= norm;
        for (Eigen::Index r = 0; r < dim; ++r) {
            if (std::abs(v(r).real()) < 1e-14) v(r).real(0.0);
            if (std::abs(v(r).imag()) < 1e-14) v(r).imag(0.0);
        }
        out.col(found++) = v;
    }
    return out.leftCols(found);
}

/// Rotates `v` so that its largest-magnitude entry (first on ties) is real positive.
inline ComplexVector normalize_phase(ComplexVector v) {
    const double norm = v.norm();
    if (norm == 0.0) return v;
    v /= norm;
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
    v *= std::conj(v(best)) / std::abs(v(best));
    v(best) = Complex(std::abs(v(best)), 0.0);
    return v;
}

} // namespace ptspin
