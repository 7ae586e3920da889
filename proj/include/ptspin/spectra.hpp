#pragma once

/**
 * @file spectra.hpp
 * @brief Spectra of separated couplings and exponentially localized bound states.
 *
 * Energies use the Hamiltonian -sum_i d^2/dx_i^2. A bound state
 *
 *   psi = v prod_{k>l} (theta(x_k - x_l) + eps_kl theta(x_l - x_k)) exp(lambda sum_{i>j} |x_i - x_j|)
 *
 * with lambda < 0 has energy -lambda^2 N (N^2 - 1) / 3.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ptspin/bethe.hpp"

namespace ptspin {

struct SpectrumReport {
    std::vector<Complex> eigenvalues;
    std::vector<double> real_subset;
    std::vector<std::pair<Complex, Complex>> complex_pairs;
    /// Non-real eigenvalues without a conjugate partner.
    std::vector<Complex> unpaired;
    double tol = 0.0;
};

inline double default_realness_tolerance(const ComplexMatrix& F) { return 1e-10 * (1.0 + spectral_radius(F)); }

inline SpectrumReport classify_spectrum(const ComplexMatrix& F, double tol) {
    SpectrumReport r;
    r.tol = tol;
    r.eigenvalues = eigenvalues(F);
    std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), complex_less);
    std::vector<Complex> complex_part;
    for (const auto& z : r.eigenvalues) {
        if (std::abs(z.imag()) <= tol)
            r.real_subset.push_back(z.real());
        else
            complex_part.push_back(z);
    }
    std::vector<bool> used(complex_part.size(), false);
    for (std::size_t i = 0; i < complex_part.size(); ++i) {
        if (used[i] || complex_part[i].imag() < 0.0) continue;
        std::size_t best = complex_part.size();
        for (std::size_t j = 0; j < complex_part.size(); ++j) {
            if (used[j] || j == i || complex_part[j].imag() > 0.0) continue;
            const double gap = std::abs(complex_part[j] - std::conj(complex_part[i]));
            if (gap <= tol && (best == complex_part.size() || gap < std::abs(complex_part[best] - std::conj(complex_part[i]))))
                best = j;
        }
        if (best != complex_part.size()) {
            used[i] = used[best] = true;
            r.complex_pairs.emplace_back(complex_part[i], complex_part[best]);
        }
    }
    for (std::size_t i = 0; i < complex_part.size(); ++i)
        if (!used[i]) r.unpaired.push_back(complex_part[i]);
    return r;
}

inline SpectrumReport classify_spectrum(const ComplexMatrix& F) {
    return classify_spectrum(F, default_realness_tolerance(F));
}

/// -lambda^2 N (N^2 - 1) / 3; N (N^2 - 1) is always divisible by 3.
inline double bound_energy(double lambda, std::size_t N) {
    if (N < 2) throw DomainError("bound_energy: N must be >= 2");
    const double coefficient = static_cast<double>(N * (N * N - 1) / 3);
    return -(lambda * lambda) * coefficient;
}

struct BoundState {
    std::size_t N = 2;
    double lambda = 0.0;
    ComplexVector v;
    SignPattern eps;
    double energy = 0.0;
    Statistics statistics = Statistics::boson;
};

/// Operator on (C^n)^{(x)N} exchanging tensor factors i and j (1-based).
inline ComplexMatrix swap_factors(std::size_t i, std::size_t j, const SpinDims& dims) {
    if (i < 1 || j < 1 || i > dims.N || j > dims.N) throw IndexError("swap_factors: factor index out of range");
    const std::size_t dim = dims.total_dim();
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::vector<std::size_t> digits(dims.N);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::size_t rest = idx;
        for (std::size_t m = dims.N; m-- > 0;) {
            digits[m] = rest % dims.n;
            rest /= dims.n;
        }
        std::swap(digits[i - 1], digits[j - 1]);
        std::size_t target = 0;
        for (std::size_t d : digits) target = target * dims.n + d;
        p(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(idx)) = 1.0;
    }
    return p;
}

struct AdmissibleSpace {
    /// Orthonormal columns spanning the admissible spin vectors.
    ComplexMatrix basis;
    /// Empty on success, otherwise "parity" or "eigenvalue".
    std::string failed;
};

/**
 * Spin vectors v with p^{ij} v = sign(s) eps_ij v for all pairs and, for all
 * adjacent pairs j, F_j v = lambda v and conj(F)_j v = lambda v.
 */
inline AdmissibleSpace admissible_spin_space(const SeparatedBC& bc, std::size_t N, double lambda,
                                             const SignPattern& eps, Statistics s, double tol) {
    if (bc.dirichlet) throw ParameterError("bound states need a finite coupling F");
    if (N < 2) throw DomainError("need N >= 2");
    if (eps.N != N) throw DimensionError("sign pattern is for a different particle count");
    const SpinDims dims{bc.n, N};
    const auto dim = static_cast<Eigen::Index>(dims.total_dim());
    const ComplexMatrix id = identity(dims.total_dim());

    std::vector<ComplexMatrix> blocks;
    for (std::size_t k = 2; k <= N; ++k)
        for (std::size_t l = 1; l < k; ++l)
            blocks.push_back(swap_factors(k, l, dims) - static_cast<double>(sign(s) * eps.at(k, l)) * id);

    auto stack = [&] {
        ComplexMatrix m(static_cast<Eigen::Index>(blocks.size()) * dim, dim);
        for (std::size_t b = 0; b < blocks.size(); ++b) m.middleRows(static_cast<Eigen::Index>(b) * dim, dim) = blocks[b];
        return m;
    };

    AdmissibleSpace out;
    out.basis = null_space(stack(), tol);
    if (out.basis.cols() == 0) {
        out.failed = "parity";
        return out;
    }
    const ComplexMatrix Fc = bc.F.conjugate();
    for (std::size_t j = 1; j < N; ++j) {
        blocks.push_back(embed_pair(bc.F, j, dims) - lambda * id);
        blocks.push_back(embed_pair(Fc, j, dims) - lambda * id);
    }
    out.basis = canonical_basis(null_space(stack(), tol));
    if (out.basis.cols() == 0) out.failed = "eigenvalue";
    return out;
}

namespace detail {

/// Distinct real negative eigenvalues of F, ascending.
inline std::vector<double> negative_real_eigenvalues(const ComplexMatrix& F, double tol) {
    const SpectrumReport spectrum = classify_spectrum(F, tol);
    const double cluster = std::max(tol, 1e-8 * (1.0 + spectral_radius(F)));
    std::vector<double> out;
    std::vector<double> group;
    auto flush = [&] {
        if (group.empty()) return;
        double sum = 0.0;
        for (double g : group) sum += g;
        out.push_back(sum / static_cast<double>(group.size()));
        group.clear();
    };
    for (double x : spectrum.real_subset) {
        if (!(x < -tol)) continue;
        if (!group.empty() && x - group.front() > cluster) flush();
        group.push_back(x);
    }
    flush();
    return out;
}

} // namespace detail

/// Every admissible (lambda, eps, v) for N particles, ordered by lambda then eps.
inline std::vector<BoundState> bound_states(const SeparatedBC& bc, std::size_t N, Statistics s, double tol) {
    if (N < 2) throw DomainError("bound states need N >= 2");
    if (bc.dirichlet) return {};
    std::vector<BoundState> out;
    for (double lambda : detail::negative_real_eigenvalues(bc.F, tol)) {
        for (const SignPattern& eps : SignPattern::all(N)) {
            const AdmissibleSpace space = admissible_spin_space(bc, N, lambda, eps, s, tol);
            for (Eigen::Index c = 0; c < space.basis.cols(); ++c)
                out.push_back({N, lambda, normalize_phase(space.basis.col(c)), eps, bound_energy(lambda, N), s});
        }
    }
    return out;
}

inline std::vector<BoundState> two_particle_bound_states(const SeparatedBC& bc, Statistics s, double tol) {
    return bound_states(bc, 2, s, tol);
}

inline BoundState n_particle_bound_state(const SeparatedBC& bc, std::size_t N, double lambda, const SignPattern& eps,
                                         Statistics s, double tol) {
    if (!(lambda < 0.0)) throw DomainError("bound state needs lambda < 0");
    if (N < 2) throw DomainError("bound state needs N >= 2");
    const AdmissibleSpace space = admissible_spin_space(bc, N, lambda, eps, s, tol);
    if (!space.failed.empty()) {
        const std::string why = space.failed == "parity"
                                    ? "no spin vector has the requested exchange parities"
                                    : "no spin vector with the requested parities is a lambda-eigenvector of every pair coupling";
        throw ExistenceError(space.failed, why);
    }
    return {N, lambda, normalize_phase(space.basis.col(0)), eps, bound_energy(lambda, N), s};
}

struct BoundStateCheck {
    double energy_residual = 0.0;
    double parity_residual = 0.0;
    bool lambda_negative = false;
};

/// Re-derives the stored invariants of a bound state.
inline BoundStateCheck check_bound_state(const BoundState& st) {
    BoundStateCheck c;
    c.lambda_negative = st.lambda < 0.0;
    const double coefficient = static_cast<double>(st.N) * (static_cast<double>(st.N * st.N) - 1.0) / 3.0;
    c.energy_residual = std::abs(st.energy + st.lambda * st.lambda * coefficient);
    const std::size_t n = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(st.v.size()), 1.0 / static_cast<double>(st.N))));
    const SpinDims dims{n, st.N};
    for (std::size_t k = 2; k <= st.N; ++k)
        for (std::size_t l = 1; l < k; ++l) {
            const ComplexVector diff =
                swap_factors(k, l, dims) * st.v - static_cast<double>(sign(st.statistics) * st.eps.at(k, l)) * st.v;
            c.parity_residual = std::max(c.parity_residual, max_abs(diff));
        }
    return c;
}

// ---------------------------------------------------------------------------
// Finite-difference oracle
// ---------------------------------------------------------------------------

struct FdGrid {
    double half_width = 10.0;
    double spacing = 1e-3;
    /// Stencil centers per axis, taken on a stride of the spacing lattice.
    std::size_t centers_per_axis = 160;
};

namespace detail {

/// Spatial factor of the bound state, evaluated in extended precision.
inline long double bound_spatial_factor(const BoundState& st, std::span<const long double> x) {
    long double sum = 0.0L;
    long double step = 1.0L;
    for (std::size_t k = 1; k < x.size(); ++k)
        for (std::size_t l = 0; l < k; ++l) {
            sum += std::fabs(x[k] - x[l]);
            if (x[k] < x[l]) step *= static_cast<long double>(st.eps.at(k + 1, l + 1));
            else if (x[k] == x[l]) step *= 0.5L * (1.0L + static_cast<long double>(st.eps.at(k + 1, l + 1)));
        }
    return step * std::exp(static_cast<long double>(st.lambda) * sum);
}

} // namespace detail

/**
 * Samples the bound state on the h-lattice inside [-L, L]^N restricted to
 * x1 < ... < xN, applies the central-difference Laplacian at stencil centers
 * at least 2h from every coincidence plane and returns
 * max |(-Lap psi - E psi) / psi|. Expected to scale as h^2.
 */
inline double verify_bound_state_fd(const BoundState& st, const FdGrid& grid) {
    if (st.N != 2 && st.N != 3) throw ParameterError("finite-difference check supports N = 2 or 3");
    const double h = grid.spacing, L = grid.half_width;
    if (!(h > 0.0) || h > 1e-2) throw ParameterError("grid spacing must be in (0, 1e-2]");
    if (st.lambda != 0.0 && L < 8.0 / std::abs(st.lambda) * (1.0 - 1e-12))
        throw ParameterError("grid half-width must be >= 8/|lambda|");
    if (grid.centers_per_axis < 2) throw ParameterError("need at least two stencil centers per axis");

    const auto K = static_cast<long long>(std::floor(L / h));
    const long long lo = -K + 1, hi = K - 1;
    if (hi - lo < 2 * static_cast<long long>(st.N)) throw ParameterError("grid too small for the stencil");
    const long long stride =
        std::max<long long>(1, (hi - lo) / static_cast<long long>(grid.centers_per_axis - 1));
    std::vector<long long> axis;
    for (long long i = lo; i <= hi; i += stride) axis.push_back(i);

    const long double hl = h;
    const long double E = st.energy;
    double worst = 0.0;
    std::size_t visited = 0;
    std::vector<long long> idx(st.N, 0);
    std::vector<long double> x(st.N), xp(st.N);

    // Enumerate increasing tuples of centers with gaps >= 2 lattice steps.
    std::vector<std::size_t> pos(st.N, 0);
    auto evaluate = [&] {
        for (std::size_t m = 0; m < st.N; ++m) idx[m] = axis[pos[m]];
        for (std::size_t m = 1; m < st.N; ++m)
            if (idx[m] - idx[m - 1] < 2) return;
        for (std::size_t m = 0; m < st.N; ++m) x[m] = static_cast<long double>(idx[m]) * hl;
        const long double centre = detail::bound_spatial_factor(st, x);
        long double lap = 0.0L;
        for (std::size_t m = 0; m < st.N; ++m) {
            xp = x;
            xp[m] = static_cast<long double>(idx[m] + 1) * hl;
            const long double up = detail::bound_spatial_factor(st, xp);
            xp[m] = static_cast<long double>(idx[m] - 1) * hl;
            const long double down = detail::bound_spatial_factor(st, xp);
            lap += (up - 2.0L * centre + down) / (hl * hl);
        }
        const long double res = std::fabs((-lap - E * centre) / centre);
        worst = std::max(worst, static_cast<double>(res));
        ++visited;
    };
    std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t m, std::size_t start) {
        if (m == st.N) {
            evaluate();
            return;
        }
        for (std::size_t p = start; p < axis.size(); ++p) {
            pos[m] = p;
            recurse(m + 1, p + 1);
        }
    };
    recurse(0, 0);
    if (visited == 0) throw ParameterError("no stencil centers inside the ordering region");
    return worst;
}

} // namespace ptspin
