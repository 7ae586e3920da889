#pragma once

/**
 * @file io.hpp
 * @brief JSON encoding of complex scalars, matrices and boundary-condition documents.
 *
 * A complex scalar is [re, im]; a matrix is an array of rows of scalars.
 * Doubles are written in shortest round-trip form.
 */

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ptspin/boundary.hpp"

namespace ptspin::io {

/// Insertion-ordered.
using json = nlohmann::ordered_json;

inline json to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
    return out;
}

inline double number_from(const json& j, const std::string& what) {
    if (!j.is_number()) throw ParseError(what + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(what + ": non-finite number");
    return v;
}

inline Complex complex_from(const json& j, const std::string& what = "complex scalar") {
    if (!j.is_array() || j.size() != 2) throw ParseError(what + ": expected [re, im]");
    return {number_from(j[0], what), number_from(j[1], what)};
}

inline ComplexMatrix matrix_from(const json& j, const std::string& what = "matrix") {
    if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw ParseError(what + ": rows must be non-empty arrays");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw ParseError(what + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from(j[r][c], what);
    }
    return m;
}

inline ComplexVector vector_from(const json& j, const std::string& what = "vector") {
    if (!j.is_array() || j.empty()) throw ParseError(what + ": expected a non-empty array of [re, im]");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i], what);
    return v;
}

/// A parsed boundary-condition document.
struct BoundaryDocument {
    std::string kind;
    std::variant<NonseparatedBC, SeparatedBC> condition;

    bool separated() const { return std::holds_alternative<SeparatedBC>(condition); }
    std::size_t n() const {
        return std::visit([](const auto& bc) { return bc.n; }, condition);
    }
};

namespace detail {

inline const json& field(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return doc.at(key);
}

inline std::size_t spin_dim_from(const json& doc) {
    const json& n = field(doc, "n");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ParseError("\"n\" must be a positive integer");
    return n.get<std::size_t>();
}

inline double param(const json& doc, const char* key) { return number_from(field(doc, key), key); }

} // namespace detail

/// Names of the scalar parameters a document of this kind carries.
inline std::vector<std::string> scalar_parameters(const std::string& kind) {
    if (kind == "scalar_pt_type1") return {"theta", "phi", "b", "c"};
    if (kind == "scalar_pt_type2") return {"theta", "h0", "h1"};
    if (kind == "hspin") return {"a", "b", "c", "d", "f", "g", "e1", "e2", "e3", "e4"};
    return {};
}

/**
 * Builds the boundary condition described by `doc`. Constructor precondition
 * failures propagate as ParameterError; structural problems as ParseError.
 */
inline BoundaryDocument parse_boundary(const json& doc) {
    if (!doc.is_object()) throw ParseError("boundary document must be a JSON object");
    const json& kind_field = detail::field(doc, "kind");
    if (!kind_field.is_string()) throw ParseError("\"kind\" must be a string");
    const std::string kind = kind_field.get<std::string>();

    if (kind == "nonseparated") {
        const std::size_t n = detail::spin_dim_from(doc);
        return {kind, make_nonseparated(n, matrix_from(detail::field(doc, "A"), "A"),
                                        matrix_from(detail::field(doc, "B"), "B"),
                                        matrix_from(detail::field(doc, "C"), "C"),
                                        matrix_from(detail::field(doc, "D"), "D"))};
    }
    if (kind == "separated") {
        const std::size_t n = detail::spin_dim_from(doc);
        return {kind, make_separated(n, matrix_from(detail::field(doc, "F"), "F"))};
    }
    if (kind == "scalar_pt_type1") {
        const auto s = scalar_pt_type1(detail::param(doc, "theta"), detail::param(doc, "phi"), detail::param(doc, "b"),
                                       detail::param(doc, "c"));
        return {kind, lift_scalar(s.matrix, 1)};
    }
    if (kind == "scalar_pt_type2") {
        return {kind, scalar_pt_type2(detail::param(doc, "theta"), detail::param(doc, "h0"), detail::param(doc, "h1"))};
    }
    if (kind == "delta") {
        const std::size_t n = detail::spin_dim_from(doc);
        return {kind, delta_type(matrix_from(detail::field(doc, "C"), "C"), n)};
    }
    if (kind == "delta_prime") {
        const std::size_t n = detail::spin_dim_from(doc);
        return {kind, delta_prime_type(matrix_from(detail::field(doc, "B"), "B"), n)};
    }
    if (kind == "hspin") {
        const json& p = detail::field(doc, "params");
        if (!p.is_object()) throw ParseError("\"params\" must be an object");
        for (const auto& [key, value] : p.items()) {
            const auto names = scalar_parameters("hspin");
            if (std::find(names.begin(), names.end(), key) == names.end())
                throw ParseError("unknown hspin parameter \"" + key + "\"");
        }
        auto get = [&](const char* key) { return p.contains(key) ? number_from(p.at(key), key) : 0.0; };
        return {kind, hspin({get("a"), get("b"), get("c"), get("d"), get("f"), get("g"), get("e1"), get("e2"),
                             get("e3"), get("e4")})};
    }
    throw ParseError("unknown boundary-condition kind \"" + kind + "\"");
}

inline json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
}

/// Reads a JSON document from a path, or from standard input when path is "-".
inline json read_json(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return parse_json_text(text, path);
}

} // namespace ptspin::io
