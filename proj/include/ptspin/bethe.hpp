#pragma once

/**
 * @file bethe.hpp
 * @brief N-particle Bethe coefficients for separated couplings.
 *
 * In the region x1 < ... < xN the wavefunction is
 *
 *   Psi(x) = sum_sigma u_sigma exp(i sum_j k_{sigma(j)} x_j),
 *
 * one coefficient vector in (C^n)^{(x)N} per ordering sigma of the momenta.
 * Swapping the momenta (a, b) sitting at positions (j, j+1) maps
 * u_{..a b..} to u_{..b a..} = Y_j((k_a - k_b)/2) u_{..a b..}, with Y_j the
 * two-body operator embedded on factors j, j+1. Other regions follow from
 * exchange symmetry (bosons) or antisymmetry (fermions).
 */

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "ptspin/scattering.hpp"

namespace ptspin {

/// Momentum labels (0-based) by position: ordering[j] is the momentum on x_{j+1}.
using Ordering = std::vector<std::size_t>;

/// Sequence of 1-based adjacent positions j, each swapping positions j and j+1.
using ReducedWord = std::vector<std::size_t>;

inline Ordering identity_ordering(std::size_t N) {
    Ordering o(N);
    std::iota(o.begin(), o.end(), std::size_t{0});
    return o;
}

inline std::size_t inversion_count(const Ordering& o) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < o.size(); ++i)
        for (std::size_t j = i + 1; j < o.size(); ++j)
            if (o[i] > o[j]) ++count;
    return count;
}

/**
 * Reduced word taking the identity ordering to `target`. Obtained by bubble
 * sorting `target` back to the identity (left-to-right passes, larger labels
 * moving right) and reversing the recorded swaps.
 */
inline ReducedWord canonical_word(const Ordering& target) {
    Ordering work = target;
    ReducedWord swaps;
    for (std::size_t pass = 0; pass + 1 < work.size(); ++pass) {
        bool swapped = false;
        for (std::size_t j = 0; j + 1 < work.size() - pass; ++j) {
            if (work[j] > work[j + 1]) {
                std::swap(work[j], work[j + 1]);
                swaps.push_back(j + 1);
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    std::reverse(swaps.begin(), swaps.end());
    return swaps;
}

/// Signs epsilon_{kl} (k > l, 1-based) labelling bound-state degeneracy.
struct SignPattern {
    std::size_t N = 2;
    std::map<std::pair<std::size_t, std::size_t>, int> eps;

    int at(std::size_t k, std::size_t l) const {
        if (k < l) std::swap(k, l);
        return eps.at({k, l});
    }

    /// Signs in the order (2,1), (3,1), (3,2), (4,1), ...
    std::vector<int> ordered() const {
        std::vector<int> out;
        for (std::size_t k = 2; k <= N; ++k)
            for (std::size_t l = 1; l < k; ++l) out.push_back(eps.at({k, l}));
        return out;
    }

    static SignPattern uniform(std::size_t N, int s) {
        SignPattern p{N, {}};
        for (std::size_t k = 2; k <= N; ++k)
            for (std::size_t l = 1; l < k; ++l) p.eps[{k, l}] = s;
        return p;
    }

    static SignPattern from_ordered(std::size_t N, std::span<const int> signs) {
        if (signs.size() != N * (N - 1) / 2)
            throw DimensionError("sign pattern needs N(N-1)/2 entries");
        SignPattern p{N, {}};
        std::size_t i = 0;
        for (std::size_t k = 2; k <= N; ++k)
            for (std::size_t l = 1; l < k; ++l) {
                if (signs[i] != 1 && signs[i] != -1) throw ParameterError("sign pattern entries must be +1 or -1");
                p.eps[{k, l}] = signs[i++];
            }
        return p;
    }

    /// All 2^{N(N-1)/2} patterns, +1 before -1 lexicographically.
    static std::vector<SignPattern> all(std::size_t N) {
        const std::size_t m = N * (N - 1) / 2;
        std::vector<SignPattern> out;
        for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
            std::vector<int> s(m);
            for (std::size_t i = 0; i < m; ++i) s[i] = (bits >> (m - 1 - i)) & 1U ? -1 : 1;
            out.push_back(from_ordered(N, s));
        }
        return out;
    }
};

struct BetheState {
    SpinDims dims;
    std::vector<double> momenta;
    Statistics statistics = Statistics::boson;
    std::map<Ordering, ComplexVector> coefficients;
    std::map<Ordering, ReducedWord> words;
};

namespace detail {

/// Embedded two-body operators Y_j(k_ab), memoized per (j, a, b).
class PairOperatorCache {
  public:
    PairOperatorCache(const SeparatedBC& bc, std::span<const double> momenta, SpinDims dims)
        : bc_(bc), momenta_(momenta.begin(), momenta.end()), dims_(dims) {}

    const ComplexMatrix& get(std::size_t j, std::size_t a, std::size_t b) {
        const auto key = std::make_tuple(j, a, b);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        ComplexMatrix y;
        try {
            y = y_separated(bc_, spectral_parameter(momenta_[a], momenta_[b]));
        } catch (const SingularityError& e) {
            throw SingularityError("Y for momentum pair (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")",
                                   e.what());
        }
        return cache_.emplace(key, embed_pair(y, j, dims_)).first->second;
    }

    const SpinDims& dims() const { return dims_; }

  private:
    const SeparatedBC& bc_;
    std::vector<double> momenta_;
    SpinDims dims_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, ComplexMatrix> cache_;
};

/// Applies the word to `value` (vector or operator) starting from the identity ordering.
template <typename Value>
Value propagate(const ReducedWord& word, PairOperatorCache& cache, Value value) {
    Ordering current = identity_ordering(cache.dims().N);
    for (std::size_t j : word) {
        value = cache.get(j, current[j - 1], current[j]) * value;
        std::swap(current[j - 1], current[j]);
    }
    return value;
}

inline void check_momenta(const SeparatedBC& bc, std::span<const double> momenta) {
    if (momenta.size() < 2) throw DomainError("need at least two particles");
    for (double k : momenta)
        if (!std::isfinite(k)) throw ParameterError("momenta must be finite");
    (void)bc;
}

} // namespace detail

/**
 * Propagates u_init (the coefficient of the identity ordering) to every
 * ordering of the momenta along its canonical reduced word.
 */
inline BetheState bethe_coefficients(const SeparatedBC& bc, std::span<const double> momenta,
                                     const ComplexVector& u_init, Statistics s) {
    detail::check_momenta(bc, momenta);
    const SpinDims dims{bc.n, momenta.size()};
    if (static_cast<std::size_t>(u_init.size()) != dims.total_dim())
        throw DimensionError("u_init must have length n^N = " + std::to_string(dims.total_dim()));
    if (!(u_init.norm() > 0.0)) throw ParameterError("u_init must be nonzero");

    BetheState state{dims, {momenta.begin(), momenta.end()}, s, {}, {}};
    detail::PairOperatorCache cache(bc, momenta, dims);
    Ordering sigma = identity_ordering(dims.N);
    do {
        ReducedWord word = canonical_word(sigma);
        state.coefficients.emplace(sigma, detail::propagate<ComplexVector>(word, cache, u_init));
        state.words.emplace(sigma, std::move(word));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return state;
}

struct PathConsistencyReport {
    /// max | T_w - T_w' | over transfer operators of braid-related word pairs
    double operator_residual = 0.0;
    /// max | (T_w - T_w') u_init |
    double vector_residual = 0.0;
    std::size_t braid_pairs = 0;
};

/**
 * For every ordering, and every braid move s_j s_{j+1} s_j <-> s_{j+1} s_j s_{j+1}
 * available in its canonical word, compares the transfer operators of the
 * two words. The operator residual is zero iff the Yang-Baxter relation holds
 * at every visited set of spectral parameters.
 */
inline PathConsistencyReport path_consistency_report(const SeparatedBC& bc, std::span<const double> momenta,
                                                     const ComplexVector& u_init, Statistics s) {
    (void)s;
    detail::check_momenta(bc, momenta);
    const SpinDims dims{bc.n, momenta.size()};
    if (dims.N < 3) throw DomainError("path_consistency: requires N >= 3");
    if (static_cast<std::size_t>(u_init.size()) != dims.total_dim())
        throw DimensionError("u_init must have length n^N");
    if (!(u_init.norm() > 0.0)) throw ParameterError("u_init must be nonzero");

    PathConsistencyReport report;
    detail::PairOperatorCache cache(bc, momenta, dims);
    const ComplexMatrix start = identity(dims.total_dim());
    Ordering sigma = identity_ordering(dims.N);
    do {
        const ReducedWord word = canonical_word(sigma);
        for (std::size_t i = 0; i + 2 < word.size(); ++i) {
            const std::size_t a = word[i], b = word[i + 1];
            if (word[i + 2] != a || (a + 1 != b && b + 1 != a)) continue;
            ReducedWord other = word;
            other[i] = b;
            other[i + 1] = a;
            other[i + 2] = b;
            const ComplexMatrix diff =
                detail::propagate<ComplexMatrix>(word, cache, start) - detail::propagate<ComplexMatrix>(other, cache, start);
            report.operator_residual = std::max(report.operator_residual, max_abs(diff));
            report.vector_residual = std::max(report.vector_residual, max_abs(ComplexVector(diff * u_init)));
            ++report.braid_pairs;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return report;
}

inline double path_consistency(const SeparatedBC& bc, std::span<const double> momenta, const ComplexVector& u_init,
                               Statistics s) {
    return path_consistency_report(bc, momenta, u_init, s).operator_residual;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline constexpr double coincidence_tolerance = 1e-13;

/// Psi in the fundamental region, continued to its closure.
inline ComplexVector fundamental_value(const BetheState& state, std::span<const double> y) {
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(state.dims.total_dim()));
    for (const auto& [sigma, u] : state.coefficients) {
        double phase = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) phase += state.momenta[sigma[j]] * y[j];
        psi += std::polar(1.0, phase) * u;
    }
    return psi;
}

/// d Psi / d y_m in the fundamental region, continued to its closure.
inline ComplexVector fundamental_derivative(const BetheState& state, std::span<const double> y, std::size_t m) {
    ComplexVector d = ComplexVector::Zero(static_cast<Eigen::Index>(state.dims.total_dim()));
    for (const auto& [sigma, u] : state.coefficients) {
        double phase = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) phase += state.momenta[sigma[j]] * y[j];
        d += (I_unit * state.momenta[sigma[m]]) * std::polar(1.0, phase) * u;
    }
    return d;
}

/**
 * Psi(x) for coordinates in the interior of any ordering region. With
 * y = x sorted ascending (y_m = x_{pi(m)}), components satisfy
 * Psi(x)_{a_1..a_N} = sign(pi)^{fermion} Psi_fund(y)_{a_{pi(1)}..a_{pi(N)}}.
 */
inline ComplexVector evaluate_wavefunction(const BetheState& state, std::span<const double> x, Statistics s) {
    const std::size_t N = state.dims.N;
    if (x.size() != N) throw DimensionError("evaluate_wavefunction: need N coordinates");
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            const double scale = std::max({1.0, std::abs(x[i]), std::abs(x[j])});
            if (std::abs(x[i] - x[j]) <= coincidence_tolerance * scale)
                throw BoundaryPointError("coordinates " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                         " coincide; only one-sided limits are defined");
        }

    Ordering pi = identity_ordering(N);
    std::sort(pi.begin(), pi.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> y(N);
    for (std::size_t m = 0; m < N; ++m) y[m] = x[pi[m]];

    const ComplexVector fund = fundamental_value(state, y);
    const double sgn = (s == Statistics::fermion && inversion_count(pi) % 2 == 1) ? -1.0 : 1.0;
    const std::size_t n = state.dims.n;
    ComplexVector out(fund.size());
    std::vector<std::size_t> digits(N);
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(fund.size()); ++idx) {
        std::size_t rest = idx;
        for (std::size_t m = N; m-- > 0;) {
            digits[m] = rest % n;
            rest /= n;
        }
        std::size_t src = 0;
        for (std::size_t m = 0; m < N; ++m) src = src * n + digits[pi[m]];
        out(static_cast<Eigen::Index>(idx)) = sgn * fund(static_cast<Eigen::Index>(src));
    }
    return out;
}

struct JumpResidual {
    /// | psi'(0+) - F psi(0+) |
    double plus = 0.0;
    /// | psi'(0-) + conj(F) psi(0-) |
    double minus = 0.0;

    double max() const { return std::max(plus, minus); }
};

/**
 * Two-particle check of the separated boundary condition on the plane
 * x1 = x2 at `probe` = (X, X), in the relative coordinate x = x2 - x1.
 * Uses the statistics stored in `state` to build the x < 0 side.
 */
inline JumpResidual boundary_jump(const BetheState& state, const SeparatedBC& bc, std::size_t j,
                                  std::span<const double> probe) {
    if (state.dims.N != 2) throw DomainError("boundary_jump_residual: only N = 2 is supported");
    if (j != 1) throw IndexError("boundary_jump_residual: pair index must be 1 for N = 2");
    if (probe.size() != 2) throw DimensionError("probe needs 2 coordinates");
    const double scale = std::max({1.0, std::abs(probe[0]), std::abs(probe[1])});
    if (std::abs(probe[0] - probe[1]) > coincidence_tolerance * scale)
        throw DomainError("probe must lie on the plane x1 = x2");
    if (bc.n != state.dims.n) throw DimensionError("boundary condition and state have different n");

    const ComplexVector value = fundamental_value(state, probe);
    const ComplexVector d_rel = 0.5 * (fundamental_derivative(state, probe, 1) - fundamental_derivative(state, probe, 0));
    const ComplexMatrix P = statistics_swap(bc.n, state.statistics);

    // x > 0 is the fundamental region; x < 0 is Psi(x1, x2) = P Psi_fund(x2, x1).
    const ComplexVector psi_plus = value;
    const ComplexVector dpsi_plus = d_rel;
    const ComplexVector psi_minus = P * value;
    const ComplexVector dpsi_minus = -(P * d_rel);

    JumpResidual r;
    if (bc.dirichlet) {
        r.plus = max_abs(psi_plus);
        r.minus = max_abs(psi_minus);
        return r;
    }
    r.plus = max_abs(ComplexVector(dpsi_plus - bc.F * psi_plus));
    r.minus = max_abs(ComplexVector(dpsi_minus + bc.F.conjugate() * psi_minus));
    return r;
}

inline double boundary_jump_residual(const BetheState& state, const SeparatedBC& bc, std::size_t j,
                                     std::span<const double> probe) {
    return boundary_jump(state, bc, j, probe).max();
}

} // namespace ptspin
