#pragma once

#include <random>

#include "ptspin/boundary.hpp"

namespace ptspin::testing {

/// Fixed-seed generator so every property run is reproducible.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline HspinParams random_hspin_params(std::mt19937_64& g, double scale = 2.0) {
    HspinParams p;
    for (double* v : {&p.a, &p.b, &p.c, &p.d, &p.f, &p.g, &p.e1, &p.e2, &p.e3, &p.e4}) *v = uniform(g, -scale, scale);
    return p;
}

inline ComplexMatrix random_complex(std::mt19937_64& g, Eigen::Index dim, double scale = 1.0) {
    ComplexMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(uniform(g, -scale, scale), uniform(g, -scale, scale));
    return m;
}

inline ComplexMatrix random_real(std::mt19937_64& g, Eigen::Index dim, double scale = 1.0) {
    ComplexMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(uniform(g, -scale, scale), 0.0);
    return m;
}

/// A spectral parameter k with |k| > rho(F) + margin, so ik avoids the spectrum of real F.
inline double safe_k(std::mt19937_64& g, const ComplexMatrix& F, double margin = 0.5) {
    const double rho = spectral_radius(F);
    const double mag = rho + margin + uniform(g, 0.0, 3.0);
    return uniform(g, 0.0, 1.0) < 0.5 ? -mag : mag;
}

inline ComplexMatrix diag(std::initializer_list<Complex> entries) {
    ComplexVector v(static_cast<Eigen::Index>(entries.size()));
    Eigen::Index i = 0;
    for (const auto& z : entries) v(i++) = z;
    return v.asDiagonal();
}

} // namespace ptspin::testing
