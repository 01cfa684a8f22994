#pragma once

/**
 * @file io.hpp
 * @brief JSON file formats.
 *
 *  box/subset: {"k":[k1,...], "cells":[[x1,...,xd], ...]}, 1-based cells
 *  tiling:     {"k":[k1,...], "points":[[["p","q"], ...], ...]}
 *
 * Rationals travel as decimal-string pairs so that no precision is lost.
 */

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cubeline/box.hpp"
#include "cubeline/error.hpp"
#include "cubeline/mvectors.hpp"
#include "cubeline/torus.hpp"

namespace cubeline::io {

using nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) detail::fail_input("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        detail::fail_input("invalid JSON in " + path.string() + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

inline BoxDims box_from_json(const json& j) {
    if (!j.is_object() || !j.contains("k")) detail::fail_input("missing \"k\"");
    const auto& k = j.at("k");
    if (!k.is_array() || k.empty()) detail::fail_input("\"k\" must be a non-empty array");
    std::vector<int> sides;
    for (const auto& v : k) {
        if (!v.is_number_integer()) detail::fail_input("box sides must be integers");
        auto s = v.get<std::int64_t>();
        if (s < 2 || s > 1'000'000) detail::fail_input("box sides must lie in 2..1000000");
        sides.push_back(static_cast<int>(s));
    }
    return BoxDims(std::move(sides));
}

inline json box_json(const BoxDims& b) { return json(std::vector<int>(b.sides().begin(), b.sides().end())); }

inline Cell cell_from_json(const BoxDims& box, const json& c) {
    if (!c.is_array() || c.size() != box.dim()) detail::fail_input("cell has the wrong dimension");
    Cell x;
    for (const auto& v : c) {
        if (!v.is_number_integer()) detail::fail_input("cell coordinates must be integers");
        x.push_back(static_cast<int>(v.get<std::int64_t>()));
    }
    if (!box.contains(x)) detail::fail_input("cell lies outside the box");
    return x;
}

inline json cell_json(const Cell& c) { return json(c); }

struct BoxSubset {
    BoxDims box;
    CellSet cells;
};

/// Duplicate cells are rejected.
inline BoxSubset subset_from_json(const json& j) {
    BoxSubset s{box_from_json(j), {}};
    s.cells = CellSet(s.box);
    if (!j.contains("cells")) detail::fail_input("missing \"cells\"");
    if (!j.at("cells").is_array()) detail::fail_input("\"cells\" must be an array");
    for (const auto& c : j.at("cells")) {
        auto x = cell_from_json(s.box, c);
        if (s.cells.contains(x)) detail::fail_input("duplicate cell in \"cells\"");
        s.cells.insert(x);
    }
    return s;
}

inline json subset_json(const CellSet& s) {
    json cells = json::array();
    for (const auto& c : s.cells()) cells.push_back(cell_json(c));
    return {{"k", box_json(s.box())}, {"cells", cells}};
}

/// {"direction": s (1-based), "base": [x1..xd] with x_s reported as 1}.
inline json line_json(const Line& l) {
    return {{"direction", l.axis + 1}, {"base", l.base}};
}

inline json decomposition_json(const LineDecomposition& dec) {
    json a = json::array();
    for (const auto& l : dec.lines) a.push_back(line_json(l));
    return a;
}

inline Line line_from_json(const BoxDims& box, const json& j) {
    if (!j.is_object() || !j.contains("direction") || !j.contains("base")) detail::fail_input("line needs direction and base");
    const auto s = j.at("direction").get<std::int64_t>();
    if (s < 1 || s > static_cast<std::int64_t>(box.dim())) detail::fail_input("line direction out of range");
    Cell base;
    for (const auto& v : j.at("base")) base.push_back(static_cast<int>(v.get<std::int64_t>()));
    auto l = make_line(static_cast<std::size_t>(s - 1), std::move(base));
    validate_line(box, l);
    return l;
}

inline LineDecomposition decomposition_from_json(const BoxDims& box, const json& j) {
    if (!j.is_array()) detail::fail_input("decomposition must be an array of lines");
    LineDecomposition dec;
    for (const auto& l : j) dec.lines.push_back(line_from_json(box, l));
    return dec;
}

inline json mvector_json(const MVector& m) { return json(m.counts); }

// Rationals ---------------------------------------------------------------

inline json rational_json(const Rational& r) {
    return json::array({boost::multiprecision::numerator(r).str(), boost::multiprecision::denominator(r).str()});
}

inline Integer parse_integer(const std::string& s) {
    if (s.empty() || s.size() > 4096) detail::fail_input("invalid integer string");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) detail::fail_input("invalid integer string \"" + s + "\"");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') detail::fail_input("invalid integer string \"" + s + "\"");
    return Integer(s);
}

inline Rational rational_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        detail::fail_input("rationals must be [\"p\",\"q\"] string pairs");
    const auto p = parse_integer(j[0].get<std::string>());
    const auto q = parse_integer(j[1].get<std::string>());
    if (q == 0) detail::fail_input("zero denominator");
    return Rational(p, q);
}

inline json point_json(const RationalPoint& p) {
    json a = json::array();
    for (const auto& x : p.coords) a.push_back(rational_json(x));
    return a;
}

inline json tiling_json(const TorusTiling& t) {
    json pts = json::array();
    for (const auto& p : t.points) pts.push_back(point_json(p));
    return {{"k", box_json(t.dims)}, {"points", pts}};
}

/// Coordinates are range-checked; tiling validity is a separate question.
inline TorusTiling tiling_from_json(const json& j) {
    TorusTiling t{box_from_json(j), {}};
    if (!j.contains("points") || !j.at("points").is_array()) detail::fail_input("missing \"points\" array");
    for (const auto& pj : j.at("points")) {
        if (!pj.is_array() || pj.size() != t.dims.dim()) detail::fail_input("point has the wrong dimension");
        RationalPoint p;
        for (const auto& x : pj) p.coords.push_back(rational_from_json(x));
        require_point(t.dims, p);
        t.points.push_back(std::move(p));
    }
    return t;
}

}  // namespace cubeline::io
