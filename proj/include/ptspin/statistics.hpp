#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "ptspin/linalg.hpp"

namespace ptspin {

enum class Statistics { boson, fermion };

/// +1 for bosons, -1 for fermions.
inline constexpr int sign(Statistics s) { return s == Statistics::boson ? 1 : -1; }

inline std::string_view to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

inline std::optional<Statistics> parse_statistics(std::string_view text) {
    if (text == "boson") return Statistics::boson;
    if (text == "fermion") return Statistics::fermion;
    return std::nullopt;
}

/// Statistics-signed exchange P = sign(s) * p.
inline ComplexMatrix statistics_swap(std::size_t n, Statistics s) {
    return static_cast<double>(sign(s)) * swap_pair(n);
}

} // namespace ptspin
