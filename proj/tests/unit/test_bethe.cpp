#include <catch_amalgamated.hpp>

#include "ptspin/bethe.hpp"
#include "support.hpp"

using namespace ptspin;

namespace {

ComplexVector e1_product(std::size_t n, std::size_t N) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(ipow(n, N)));
    v(0) = 1.0;
    return v;
}

ComplexVector random_vector(std::mt19937_64& g, std::size_t dim) {
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = Complex(ptspin::testing::uniform(g, -1, 1), ptspin::testing::uniform(g, -1, 1));
    return v;
}

/// Permutation matrix exchanging tensor factors i and j (0-based) of (C^n)^{(x)N}.
ComplexMatrix factor_swap(std::size_t n, std::size_t N, std::size_t i, std::size_t j) {
    const std::size_t dim = ipow(n, N);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t idx = 0; idx < dim; ++idx) {
        std::vector<std::size_t> digits(N);
        std::size_t rest = idx;
        for (std::size_t f = N; f-- > 0;) {
            digits[f] = rest % n;
            rest /= n;
        }
        std::swap(digits[i], digits[j]);
        std::size_t target = 0;
        for (std::size_t d : digits) target = target * n + d;
        m(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(idx)) = 1.0;
    }
    return m;
}

/// Distinct momenta whose pair differences keep i*k12 clear of the spectrum of F.
std::vector<double> safe_momenta(std::mt19937_64& g, const ComplexMatrix& F, std::size_t N) {
    const double rho = spectral_radius(F);
    for (;;) {
        std::vector<double> k(N);
        for (auto& v : k) v = ptspin::testing::uniform(g, -4 * (rho + 1), 4 * (rho + 1));
        bool ok = true;
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = a + 1; b < N; ++b) ok = ok && std::abs(spectral_parameter(k[a], k[b])) > rho + 0.3;
        if (ok) return k;
    }
}

} // namespace

TEST_CASE("canonical words", "[bethe]") {
    CHECK(canonical_word({0, 1, 2}).empty());
    CHECK(canonical_word({1, 0}) == ReducedWord{1});
    CHECK(canonical_word({2, 1, 0}) == ReducedWord{1, 2, 1});
    CHECK(canonical_word({1, 2, 0}) == ReducedWord{1, 2});

    // Applying the word to the identity reproduces the target, with length = inversion count.
    Ordering sigma = identity_ordering(5);
    do {
        const auto word = canonical_word(sigma);
        CHECK(word.size() == inversion_count(sigma));
        Ordering current = identity_ordering(5);
        for (std::size_t j : word) std::swap(current[j - 1], current[j]);
        CHECK(current == sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
}

TEST_CASE("sign patterns", "[bethe]") {
    const auto all = SignPattern::all(3);
    REQUIRE(all.size() == 8);
    CHECK(all.front().ordered() == std::vector<int>{1, 1, 1});
    CHECK(all[1].ordered() == std::vector<int>{1, 1, -1});
    CHECK(all.back().ordered() == std::vector<int>{-1, -1, -1});
    const std::vector<int> signs{1, -1, 1};
    const auto p = SignPattern::from_ordered(3, signs);
    CHECK(p.at(3, 1) == -1);
    CHECK(p.at(1, 3) == -1);
    const std::vector<int> bad{1, 0, 1};
    CHECK_THROWS_AS(SignPattern::from_ordered(3, bad), ParameterError);
    CHECK_THROWS_AS(SignPattern::from_ordered(3, std::vector<int>{1}), DimensionError);
}

TEST_CASE("two-particle coefficients", "[bethe]") {
    const std::vector<double> k{1.0, -1.0};
    const ComplexVector u = e1_product(2, 2);

    const auto zero = bethe_coefficients(make_separated(2, ComplexMatrix::Zero(4, 4)), k, u, Statistics::boson);
    CHECK(zero.coefficients.size() == 2);
    CHECK(zero.coefficients.at({1, 0}) == u);

    const auto lam = bethe_coefficients(make_separated(2, -identity(4)), k, u, Statistics::boson);
    CHECK(lam.coefficients.at({0, 1}) == u);
    CHECK(max_abs(ComplexVector(lam.coefficients.at({1, 0}) - Complex(0, 1) * u)) <= 1e-15);
    CHECK(lam.words.at({1, 0}) == ReducedWord{1});
}

TEST_CASE("two-particle coefficients follow the exchange operator exactly", "[bethe][property]") {
    auto g = ptspin::testing::rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const auto bc = hspin(ptspin::testing::random_hspin_params(g));
        const auto k = safe_momenta(g, bc.F, 2);
        const ComplexVector u = random_vector(g, 4);
        const auto state = bethe_coefficients(bc, k, u, Statistics::boson);
        CHECK(state.coefficients.at({1, 0}) == ComplexVector(y_separated(bc, spectral_parameter(k[0], k[1])) * u));
    }
}

TEST_CASE("scalar coupling gives word-independent scalar coefficients", "[bethe]") {
    const double lambda = -0.8;
    const std::vector<double> k{1.2, -0.4, 0.5};
    auto factor = [&](std::size_t a, std::size_t b) {
        const Complex ik = Complex(0, spectral_parameter(k[a], k[b]));
        return (ik + lambda) / (ik - lambda);
    };
    const ComplexVector u = e1_product(2, 3);
    const auto state = bethe_coefficients(make_separated(2, lambda * identity(4)), k, u, Statistics::boson);
    REQUIRE(state.coefficients.size() == 6);
    for (const auto& [sigma, coeff] : state.coefficients) {
        // One factor per inverted pair {a < b}, taken when a was still left of b: Y(k_ab).
        Complex expected = 1.0;
        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t q = p + 1; q < 3; ++q)
                if (sigma[p] > sigma[q]) expected *= factor(sigma[q], sigma[p]);
        CHECK(max_abs(ComplexVector(coeff - expected * u)) <= 1e-14);
    }
}

TEST_CASE("bethe_coefficients preconditions", "[bethe]") {
    const auto bc = make_separated(2, -identity(4));
    const std::vector<double> one{1.0}, two{1.0, -1.0};
    CHECK_THROWS_AS(bethe_coefficients(bc, one, e1_product(2, 1), Statistics::boson), DomainError);
    CHECK_THROWS_AS(bethe_coefficients(bc, two, e1_product(2, 3), Statistics::boson), DimensionError);
    CHECK_THROWS_AS(bethe_coefficients(bc, two, ComplexVector::Zero(4), Statistics::boson), ParameterError);

    ComplexMatrix f(1, 1);
    f(0, 0) = Complex(0, 1);
    const std::vector<double> colliding{1.0, -1.0, 3.0};
    try {
        (void)bethe_coefficients(make_separated(1, f), colliding, e1_product(1, 3), Statistics::boson);
        FAIL("expected a singularity error");
    } catch (const SingularityError& e) {
        CHECK(e.role() == "Y for momentum pair (1,2)");
    }
}

TEST_CASE("path consistency of scalar and zero couplings", "[bethe][property]") {
    auto g = ptspin::testing::rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        const double lambda = ptspin::testing::uniform(g, -3, 3);
        const auto bc = make_separated(2, lambda * identity(4));
        const auto k = safe_momenta(g, bc.F, 3);
        CHECK(path_consistency(bc, k, e1_product(2, 3), Statistics::boson) <= 1e-12);
    }
    const std::vector<double> k{1.0, 0.3, -0.7};
    CHECK(path_consistency(make_separated(2, ComplexMatrix::Zero(4, 4)), k, e1_product(2, 3), Statistics::boson) ==
          0.0);
    const auto report = path_consistency_report(make_separated(2, ComplexMatrix::Zero(4, 4)), k, e1_product(2, 3),
                                                Statistics::boson);
    CHECK(report.braid_pairs == 1);
    CHECK_THROWS_AS(path_consistency(make_separated(2, ComplexMatrix::Zero(4, 4)), std::vector<double>{1, 2},
                                     e1_product(2, 2), Statistics::boson),
                    DomainError);
}

TEST_CASE("path consistency agrees with the YBE residual", "[bethe][property]") {
    auto g = ptspin::testing::rng(79);
    const std::vector<double> fixed{1.0, 0.3, -0.7};
    for (int trial = 0; trial < 30; ++trial) {
        const auto bc = hspin(ptspin::testing::random_hspin_params(g, 0.3));
        const auto k = trial == 0 ? fixed : safe_momenta(g, bc.F, 3);
        const double path = path_consistency(bc, k, e1_product(2, 3), Statistics::boson);
        const double ybe = ybe_residual(separated_factory(bc), k[0], k[1], k[2], {2, 3});
        CHECK(std::abs(path - ybe) <= 1e-10);
    }
}

TEST_CASE("four particles visit several braid moves", "[bethe]") {
    const std::vector<double> k{1.5, 0.2, -0.9, 3.1};
    const auto report =
        path_consistency_report(make_separated(2, 0.4 * identity(4)), k, e1_product(2, 4), Statistics::fermion);
    CHECK(report.braid_pairs > 1);
    CHECK(report.operator_residual <= 1e-12);
}

TEST_CASE("wavefunction exchange property", "[bethe][property]") {
    auto g = ptspin::testing::rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t N = trial % 2 == 0 ? 2 : 3;
        const auto s = trial % 4 < 2 ? Statistics::boson : Statistics::fermion;
        const auto bc = hspin(ptspin::testing::random_hspin_params(g, 1.0));
        const auto k = safe_momenta(g, bc.F, N);
        const auto state = bethe_coefficients(bc, k, random_vector(g, ipow(2, N)), s);

        std::vector<double> x(N);
        for (auto& v : x) v = ptspin::testing::uniform(g, -3, 3);
        std::uniform_int_distribution<std::size_t> pick(0, N - 1);
        const std::size_t i = pick(g);
        std::size_t j = pick(g);
        while (j == i) j = pick(g);
        std::vector<double> swapped = x;
        std::swap(swapped[i], swapped[j]);

        const ComplexVector lhs = evaluate_wavefunction(state, x, s);
        const ComplexVector rhs =
            static_cast<double>(sign(s)) * factor_swap(2, N, i, j) * evaluate_wavefunction(state, swapped, s);
        CHECK(max_abs(ComplexVector(lhs - rhs)) <= 1e-12 * std::max(1.0, max_abs(lhs)));
    }
}

TEST_CASE("wavefunction evaluation examples", "[bethe]") {
    const std::vector<double> k{0.9, -0.4};
    const auto free = bethe_coefficients(make_separated(2, ComplexMatrix::Zero(4, 4)), k, e1_product(2, 2),
                                         Statistics::boson);
    const std::vector<double> below{0.3, 0.3 + 1e-9}, above{0.3 + 1e-9, 0.3};
    CHECK(max_abs(ComplexVector(evaluate_wavefunction(free, below, Statistics::boson) -
                                evaluate_wavefunction(free, above, Statistics::boson))) <= 1e-8);

    // Fundamental region value equals the plane-wave sum.
    const std::vector<double> x{-1.0, 0.5};
    const ComplexVector psi = evaluate_wavefunction(free, x, Statistics::boson);
    const Complex expected = std::polar(1.0, 0.9 * -1.0 + -0.4 * 0.5) + std::polar(1.0, -0.4 * -1.0 + 0.9 * 0.5);
    CHECK(std::abs(psi(0) - expected) <= 1e-15);

    // Symmetric spin part with fermions: Psi(x1, x2) = -p Psi(x2, x1).
    ComplexVector sym = ComplexVector::Zero(4);
    sym(1) = 1;
    sym(2) = 1;
    const auto fermions = bethe_coefficients(hspin({.a = -1, .b = -2, .f = -3}), std::vector<double>{2.0, -3.0}, sym,
                                             Statistics::fermion);
    const std::vector<double> xs{0.2, -0.7}, xr{-0.7, 0.2};
    CHECK(max_abs(ComplexVector(evaluate_wavefunction(fermions, xs, Statistics::fermion) +
                                swap_pair(2) * evaluate_wavefunction(fermions, xr, Statistics::fermion))) <= 1e-14);

    const std::vector<double> coincident{0.4, 0.4};
    CHECK_THROWS_AS(evaluate_wavefunction(free, coincident, Statistics::boson), BoundaryPointError);
    CHECK_THROWS_AS(evaluate_wavefunction(free, std::vector<double>{0.1}, Statistics::boson), DimensionError);
}

TEST_CASE("boundary jump examples", "[bethe]") {
    const std::vector<double> k{1.0, -1.0}, probe{0.37, 0.37};
    const ComplexVector u = e1_product(2, 2);

    const auto zero = make_separated(2, ComplexMatrix::Zero(4, 4));
    CHECK(boundary_jump_residual(bethe_coefficients(zero, k, u, Statistics::boson), zero, 1, probe) <= 1e-15);

    const auto lam = make_separated(2, -0.6 * identity(4));
    CHECK(boundary_jump_residual(bethe_coefficients(lam, k, u, Statistics::boson), lam, 1, probe) <= 1e-12);

    const auto wall = dirichlet_condition(2);
    CHECK(boundary_jump_residual(bethe_coefficients(wall, k, u, Statistics::fermion), wall, 1, probe) <= 1e-15);

    // Scalar F = i violates compatibility; only the 0- side fails.
    ComplexMatrix f(1, 1);
    f(0, 0) = Complex(0, 1);
    const auto complex_bc = make_separated(1, f);
    const std::vector<double> k4{2.0, -2.0};
    const auto jump = boundary_jump(bethe_coefficients(complex_bc, k4, e1_product(1, 2), Statistics::boson),
                                    complex_bc, 1, probe);
    CHECK(jump.plus <= 1e-12);
    CHECK(jump.minus > 1.0);

    const auto state = bethe_coefficients(lam, k, u, Statistics::boson);
    CHECK_THROWS_AS(boundary_jump_residual(state, lam, 2, probe), IndexError);
    CHECK_THROWS_AS(boundary_jump_residual(state, lam, 1, std::vector<double>{0.1, 0.2}), DomainError);
}

TEST_CASE("compatible couplings satisfy both boundary conditions", "[bethe][property]") {
    auto g = ptspin::testing::rng(89);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto bc = hspin(ptspin::testing::random_hspin_params(g));
        const auto k = safe_momenta(g, bc.F, 2);
        const auto s = trial % 2 == 0 ? Statistics::boson : Statistics::fermion;
        if (compatibility_residual(bc.F, spectral_parameter(k[0], k[1]), s) > 1e-12) continue;
        ++checked;
        const auto state = bethe_coefficients(bc, k, random_vector(g, 4), s);
        const double X = ptspin::testing::uniform(g, -2, 2);
        const std::vector<double> probe{X, X};
        CHECK(boundary_jump_residual(state, bc, 1, probe) <= 1e-10 * std::max(1.0, spectral_radius(bc.F)));
    }
    CHECK(checked == 100);
}
