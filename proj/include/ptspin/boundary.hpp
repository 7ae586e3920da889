#pragma once

/**
 * @file boundary.hpp
 * @brief Point-interaction boundary conditions: scalar families, the general
 * spin-coupling connection (A, B, C, D), separated couplings F, and their
 * validators.
 *
 * Conventions: `conj` is entrywise complex conjugation, `'` in residual labels
 * is the conjugate transpose. Residuals are entrywise max-abs values.
 */

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <variant>

#include "ptspin/linalg.hpp"
#include "ptspin/statistics.hpp"

namespace ptspin {

inline constexpr double default_tolerance = 1e-10;

// ---------------------------------------------------------------------------
// Scalar families
// ---------------------------------------------------------------------------

/// Self-adjoint connection e^{i theta} [[a, b], [c, d]] with ad - bc = 1.
struct ScalarSaNonseparated {
    double theta = 0, a = 1, b = 0, c = 0, d = 1;
};

/// phi'(0+) = h_plus phi(0+), phi'(0-) = h_minus phi(0-); infinity means Dirichlet.
struct ScalarSaSeparated {
    double h_plus = 0, h_minus = 0;
};

/// e^{i theta} [[sqrt(1+bc) e^{i phi}, b], [c, sqrt(1+bc) e^{-i phi}]].
struct ScalarPtType1 {
    double theta = 0, phi = 0, b = 0, c = 0;
};

/// h0 phi'(0+) = h1 e^{i theta} phi(0+), h0 phi'(0-) = -h1 e^{-i theta} phi(0-).
struct ScalarPtType2 {
    double theta = 0, h0 = 1, h1 = 0;
};

using ScalarBC = std::variant<ScalarSaNonseparated, ScalarSaSeparated, ScalarPtType1, ScalarPtType2>;

/// A scalar family member together with its 2x2 connection matrix.
struct ScalarConnection {
    ScalarBC family;
    ComplexMatrix matrix;
};

// ---------------------------------------------------------------------------
// Spin-coupling conditions
// ---------------------------------------------------------------------------

/// (psi, psi')(0+) = [[A, B], [C, D]] (psi, psi')(0-), blocks n^2 x n^2.
struct NonseparatedBC {
    std::size_t n = 1;
    ComplexMatrix A, B, C, D;
};

/**
 * psi'(0+) = F psi(0+), psi'(0-) = G psi(0-) with G = -conj(F) implied.
 * The Dirichlet variant stands for the projective point F = infinity.
 */
struct SeparatedBC {
    std::size_t n = 1;
    ComplexMatrix F;
    bool dirichlet = false;

    ComplexMatrix G() const { return -F.conjugate(); }
};

struct ValidationReport {
    bool valid = true;
    std::map<std::string, double> residuals;
    double tolerance = default_tolerance;
};

namespace detail {

inline ValidationReport make_report(std::map<std::string, double> residuals, double tol) {
    ValidationReport r;
    r.tolerance = tol;
    r.residuals = std::move(residuals);
    for (const auto& [label, value] : r.residuals)
        if (!(value <= tol)) r.valid = false;
    return r;
}

inline void require_finite_param(double v, const char* name) {
    if (!std::isfinite(v)) throw ParameterError(std::string("parameter ") + name + " must be finite");
}

inline void require_pair_block(const ComplexMatrix& m, std::size_t n, const char* name) {
    const auto d = static_cast<Eigen::Index>(n * n);
    if (m.rows() != d || m.cols() != d) {
        throw DimensionError(std::string(name) + " must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    if (!is_finite(m)) throw ParameterError(std::string(name) + " has non-finite entries");
}

inline void require_real(const ComplexMatrix& m, const char* name) {
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (m.data()[i].imag() != 0.0) throw ParameterError(std::string(name) + " must have real entries");
}

} // namespace detail

inline NonseparatedBC make_nonseparated(std::size_t n, ComplexMatrix A, ComplexMatrix B, ComplexMatrix C,
                                        ComplexMatrix D) {
    if (n == 0) throw DomainError("spin dimension must be >= 1");
    detail::require_pair_block(A, n, "A");
    detail::require_pair_block(B, n, "B");
    detail::require_pair_block(C, n, "C");
    detail::require_pair_block(D, n, "D");
    return {n, std::move(A), std::move(B), std::move(C), std::move(D)};
}

inline SeparatedBC make_separated(std::size_t n, ComplexMatrix F) {
    if (n == 0) throw DomainError("spin dimension must be >= 1");
    detail::require_pair_block(F, n, "F");
    return {n, std::move(F), false};
}

inline SeparatedBC dirichlet_condition(std::size_t n) {
    if (n == 0) throw DomainError("spin dimension must be >= 1");
    const auto d = static_cast<Eigen::Index>(n * n);
    return {n, ComplexMatrix::Zero(d, d), true};
}

inline NonseparatedBC free_condition(std::size_t n) {
    const std::size_t d = n * n;
    const auto z = static_cast<Eigen::Index>(d);
    return make_nonseparated(n, identity(d), ComplexMatrix::Zero(z, z), ComplexMatrix::Zero(z, z), identity(d));
}

// ---------------------------------------------------------------------------
// Scalar constructors
// ---------------------------------------------------------------------------

inline ScalarConnection scalar_sa_nonseparated(double theta, double a, double b, double c, double d,
                                               double tol = 1e-12) {
    for (double v : {theta, a, b, c, d}) detail::require_finite_param(v, "theta/a/b/c/d");
    if (std::abs(a * d - b * c - 1.0) > tol) throw ParameterError("ad - bc must equal 1");
    const Complex phase = std::polar(1.0, theta);
    ComplexMatrix m(2, 2);
    m << phase * a, phase * b, phase * c, phase * d;
    return {ScalarSaNonseparated{theta, a, b, c, d}, m};
}

inline ScalarSaSeparated scalar_sa_separated(double h_plus, double h_minus) {
    for (double h : {h_plus, h_minus})
        if (std::isnan(h)) throw ParameterError("h must be real or infinite");
    return {h_plus, h_minus};
}

inline ScalarConnection scalar_pt_type1(double theta, double phi, double b, double c) {
    for (double v : {theta, phi, b, c}) detail::require_finite_param(v, "theta/phi/b/c");
    if (b < 0.0) throw ParameterError("scalar_pt_type1: b must be >= 0");
    const double disc = 1.0 + b * c;
    if (disc < 0.0) throw ParameterError("scalar_pt_type1: 1 + bc must be >= 0");
    const double root = std::sqrt(disc);
    const Complex phase = std::polar(1.0, theta);
    ComplexMatrix m(2, 2);
    m << phase * root * std::polar(1.0, phi), phase * b, phase * c, phase * root * std::polar(1.0, -phi);
    return {ScalarPtType1{theta, phi, b, c}, m};
}

/// n = 1 separated coupling F = (h1/h0) e^{i theta}; h0 = 0 gives the Dirichlet variant.
inline SeparatedBC scalar_pt_type2(double theta, double h0, double h1) {
    for (double v : {theta, h0, h1}) detail::require_finite_param(v, "theta/h0/h1");
    if (h0 == 0.0 && h1 == 0.0) throw ParameterError("scalar_pt_type2: (h0, h1) must not both vanish");
    if (h0 == 0.0) return dirichlet_condition(1);
    ComplexMatrix F(1, 1);
    F(0, 0) = (h1 / h0) * std::polar(1.0, theta);
    return make_separated(1, F);
}

// ---------------------------------------------------------------------------
// Spin-coupling constructors
// ---------------------------------------------------------------------------

/// A = D = I, B = 0 with real C.
inline NonseparatedBC delta_type(const ComplexMatrix& C, std::size_t n) {
    detail::require_pair_block(C, n, "C");
    detail::require_real(C, "delta_type: C");
    const std::size_t d = n * n;
    const auto z = static_cast<Eigen::Index>(d);
    return make_nonseparated(n, identity(d), ComplexMatrix::Zero(z, z), C, identity(d));
}

/// A = D = I, C = 0 with real B.
inline NonseparatedBC delta_prime_type(const ComplexMatrix& B, std::size_t n) {
    detail::require_pair_block(B, n, "B");
    detail::require_real(B, "delta_prime_type: B");
    const std::size_t d = n * n;
    const auto z = static_cast<Eigen::Index>(d);
    return make_nonseparated(n, identity(d), B, ComplexMatrix::Zero(z, z), identity(d));
}

struct HspinParams {
    double a = 0, b = 0, c = 0, d = 0, f = 0, g = 0, e1 = 0, e2 = 0, e3 = 0, e4 = 0;
};

/// Real spin-1/2 coupling commuting with the pair swap.
inline SeparatedBC hspin(const HspinParams& p) {
    for (double v : {p.a, p.b, p.c, p.d, p.f, p.g, p.e1, p.e2, p.e3, p.e4})
        detail::require_finite_param(v, "hspin");
    ComplexMatrix F(4, 4);
    // clang-format off
    F << p.a,  p.e1, p.e1, p.c,
         p.e3, p.f,  p.g,  p.e2,
         p.e3, p.g,  p.f,  p.e2,
         p.d,  p.e4, p.e4, p.b;
    // clang-format on
    return make_separated(2, F);
}

/// Spin-independent lift of a 2x2 connection: each entry times the n^2 x n^2 identity.
inline NonseparatedBC lift_scalar(const ComplexMatrix& s, std::size_t n) {
    if (s.rows() != 2 || s.cols() != 2) throw DimensionError("lift_scalar: connection must be 2x2");
    if (n == 0) throw DomainError("spin dimension must be >= 1");
    const ComplexMatrix id = identity(n * n);
    return make_nonseparated(n, s(0, 0) * id, s(0, 1) * id, s(1, 0) * id, s(1, 1) * id);
}

// ---------------------------------------------------------------------------
// Validators
// ---------------------------------------------------------------------------

/// AA* - BC* = I, DD* - CB* = I, BD* = AB*, CA* = DC*.
inline ValidationReport validate_nonseparated_pt(const NonseparatedBC& bc, double tol = default_tolerance) {
    const auto& [n, A, B, C, D] = bc;
    const ComplexMatrix id = identity(n * n);
    const ComplexMatrix Ac = A.conjugate(), Bc = B.conjugate(), Cc = C.conjugate(), Dc = D.conjugate();
    return detail::make_report({{"AA*-BC*-I", max_abs(ComplexMatrix(A * Ac - B * Cc - id))},
                                {"DD*-CB*-I", max_abs(ComplexMatrix(D * Dc - C * Bc - id))},
                                {"BD*-AB*", max_abs(ComplexMatrix(B * Dc - A * Bc))},
                                {"CA*-DC*", max_abs(ComplexMatrix(C * Ac - D * Cc))}},
                               tol);
}

/// A'D - C'B = I, B'D = D'B, A'C = C'A.
inline ValidationReport validate_selfadjoint(const NonseparatedBC& bc, double tol = default_tolerance) {
    const auto& [n, A, B, C, D] = bc;
    const ComplexMatrix id = identity(n * n);
    return detail::make_report(
        {{"A'D-C'B-I", max_abs(ComplexMatrix(A.adjoint() * D - C.adjoint() * B - id))},
         {"B'D-D'B", max_abs(ComplexMatrix(B.adjoint() * D - D.adjoint() * B))},
         {"A'C-C'A", max_abs(ComplexMatrix(A.adjoint() * C - C.adjoint() * A))}},
        tol);
}

inline ValidationReport validate_separated_selfadjoint(const ComplexMatrix& g_plus, const ComplexMatrix& g_minus,
                                                       double tol = default_tolerance) {
    if (g_plus.rows() != g_minus.rows() || g_plus.cols() != g_minus.cols())
        throw DimensionError("G+ and G- must have equal shapes");
    return detail::make_report({{"G+-G+'", max_abs(ComplexMatrix(g_plus - g_plus.adjoint()))},
                                {"G--G-'", max_abs(ComplexMatrix(g_minus - g_minus.adjoint()))}},
                               tol);
}

inline ValidationReport validate_separated_pt(const ComplexMatrix& F, const ComplexMatrix& G,
                                              double tol = default_tolerance) {
    if (F.rows() != G.rows() || F.cols() != G.cols()) throw DimensionError("F and G must have equal shapes");
    return detail::make_report({{"G+conj(F)", max_abs(ComplexMatrix(G + F.conjugate()))}}, tol);
}

/// |ad - bc - 1| for the self-adjoint scalar family.
inline ValidationReport validate_scalar_sa(const ScalarSaNonseparated& s, double tol = 1e-12) {
    return detail::make_report({{"ad-bc-1", std::abs(s.a * s.d - s.b * s.c - 1.0)}}, tol);
}

/**
 * Distance between the two Cayley-type exchange operators produced by the
 * 0+ and 0- halves of a separated condition:
 *   | (ik - F)^-1 (ik + F) - P (ik - conj F)^-1 (ik + conj F) P |.
 * Zero means the separated two-body system is consistent at this k12.
 */
inline double compatibility_residual(const ComplexMatrix& F, double k12, Statistics s) {
    const std::size_t n = spin_dim_of_pair_operator(F);
    const ComplexMatrix id = identity(n * n);
    const ComplexMatrix P = statistics_swap(n, s);
    const Complex ik = I_unit * k12;
    const ComplexMatrix Fc = F.conjugate();
    const ComplexMatrix left = inverse(ik * id - F, "ik12 - F") * (ik * id + F);
    const ComplexMatrix right = P * inverse(ik * id - Fc, "ik12 - conj(F)") * (ik * id + Fc) * P;
    return max_abs(ComplexMatrix(left - right));
}

} // namespace ptspin
