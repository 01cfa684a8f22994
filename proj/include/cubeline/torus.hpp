#pragma once

/**
 * @file torus.hpp
 * @brief Cube tilings of the flat torus [0,k_1) x ... x [0,k_d) with exact
 *        rational cube origins.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubeline/box.hpp"
#include "cubeline/error.hpp"
#include "cubeline/semigroup.hpp"

namespace cubeline {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer floor_div(const Rational& x) {
    const Integer& n = boost::multiprecision::numerator(x);
    const Integer& d = boost::multiprecision::denominator(x);
    Integer q = n / d;
    if (n < 0 && q * d != n) q -= 1;
    return q;
}

inline Rational frac(const Rational& x) { return x - Rational(floor_div(x)); }

/// x reduced into [0, k).
inline Rational mod_torus(const Rational& x, int k) {
    const Rational kk(k);
    return x - kk * Rational(floor_div(x / kk));
}

struct RationalPoint {
    std::vector<Rational> coords;

    RationalPoint() = default;
    explicit RationalPoint(std::vector<Rational> c) : coords(std::move(c)) {}

    [[nodiscard]] std::size_t dim() const noexcept { return coords.size(); }
    friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
    friend bool operator<(const RationalPoint& a, const RationalPoint& b) {
        return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(), b.coords.end());
    }
};

inline bool in_fundamental_domain(const BoxDims& k, const RationalPoint& p) {
    if (p.dim() != k.dim()) return false;
    for (std::size_t i = 0; i < p.dim(); ++i)
        if (p.coords[i] < 0 || p.coords[i] >= k.side(i)) return false;
    return true;
}

inline void require_point(const BoxDims& k, const RationalPoint& p) {
    if (p.dim() != k.dim()) detail::fail_input("point has the wrong dimension");
    if (!in_fundamental_domain(k, p)) detail::fail_input("point lies outside the torus fundamental domain");
}

struct TorusTiling {
    BoxDims dims;
    std::vector<RationalPoint> points;
};

/// Unit cubes at s and t are disjoint iff in some coordinate the circular
/// offset (s_i - t_i) mod k_i lies in [1, k_i - 1].
inline bool cubes_disjoint(const BoxDims& k, const RationalPoint& s, const RationalPoint& t) {
    for (std::size_t i = 0; i < k.dim(); ++i) {
        const auto delta = mod_torus(s.coords[i] - t.coords[i], k.side(i));
        if (delta >= 1 && delta <= k.side(i) - 1) return true;
    }
    return false;
}

struct TilingCheck {
    bool ok = true;
    std::string message;
    std::optional<std::pair<std::size_t, std::size_t>> overlapping;
    std::optional<std::size_t> bad_point;
    std::int64_t expected_count = 0;
    std::int64_t actual_count = 0;
};

/// Ranges, count and all-pairs disjointness; passing means a genuine tiling.
inline TilingCheck validate_tiling(const TorusTiling& t) {
    TilingCheck c;
    c.expected_count = t.dims.volume();
    c.actual_count = static_cast<std::int64_t>(t.points.size());
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        if (!in_fundamental_domain(t.dims, t.points[i])) {
            c.ok = false;
            c.bad_point = i;
            c.message = "point " + std::to_string(i) + " lies outside the fundamental domain";
            return c;
        }
    }
    for (std::size_t i = 0; i < t.points.size() && !c.overlapping; ++i)
        for (std::size_t j = i + 1; j < t.points.size(); ++j)
            if (!cubes_disjoint(t.dims, t.points[i], t.points[j])) {
                c.ok = false;
                c.overlapping = std::make_pair(i, j);
                c.message = "cubes " + std::to_string(i) + " and " + std::to_string(j) + " overlap";
                break;
            }
    if (c.actual_count != c.expected_count) {
        c.ok = false;
        if (!c.message.empty()) c.message += "; ";
        c.message += "expected " + std::to_string(c.expected_count) + " cubes, found " + std::to_string(c.actual_count);
    }
    if (c.ok) c.message = "ok";
    return c;
}

/// Cell (floor(t_1) + 1, ..., floor(t_d) + 1).
inline Cell integer_code(const BoxDims& k, const RationalPoint& t) {
    require_point(k, t);
    Cell c(t.dim());
    for (std::size_t i = 0; i < t.dim(); ++i) c[i] = static_cast<int>(floor_div(t.coords[i])) + 1;
    return c;
}

/// Whether the codes of all cubes hit every cell of [k] exactly once.
inline bool keller_check(const TorusTiling& t) {
    if (static_cast<std::int64_t>(t.points.size()) != t.dims.volume()) return false;
    Bitset hit(static_cast<std::size_t>(t.dims.volume()));
    for (const auto& p : t.points) {
        if (!in_fundamental_domain(t.dims, p)) return false;
        const auto idx = t.dims.index(integer_code(t.dims, p));
        if (hit.test(idx)) return false;
        hit.set(idx);
    }
    return true;
}

struct SimpleComponent {
    /// Common fractional-part vector of the members.
    RationalPoint representative;
    std::vector<std::size_t> members;
    CellSet code_set;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
};

/// Classes of "differ by an integer vector", i.e. equal fractional parts.
/// Ordered by first member.
inline std::vector<SimpleComponent> simple_components(const TorusTiling& t) {
    std::vector<SimpleComponent> out;
    std::map<RationalPoint, std::size_t> index;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        const auto& p = t.points[i];
        RationalPoint f;
        for (const auto& x : p.coords) f.coords.push_back(frac(x));
        auto [it, inserted] = index.try_emplace(f, out.size());
        if (inserted) out.push_back({f, {}, CellSet(t.dims)});
        auto& comp = out[it->second];
        comp.members.push_back(i);
        comp.code_set.insert(integer_code(t.dims, p));
    }
    return out;
}

/// The class of integer points, which may be empty.
inline SimpleComponent origin_component(const TorusTiling& t) {
    RationalPoint zero(std::vector<Rational>(t.dims.dim(), Rational(0)));
    for (auto& c : simple_components(t))
        if (c.representative == zero) return c;
    return {zero, {}, CellSet(t.dims)};
}

inline TorusTiling integer_grid(const BoxDims& k) {
    TorusTiling t{k, {}};
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(k.volume()); ++idx) {
        RationalPoint p;
        for (std::size_t i = 0; i < k.dim(); ++i) p.coords.emplace_back(k.coord0(idx, i));
        t.points.push_back(std::move(p));
    }
    return t;
}

/// Integer grid with the j-th line (1-based, L lines) shifted by j/(L+1)
/// along its own axis. Points are listed in cell order.
inline TorusTiling build_tiling_from_decomposition(const BoxDims& box, const CellSet& d, const LineDecomposition& dec) {
    if (!(d.box() == box)) detail::fail_input("cell set belongs to a different box");
    for (const auto& l : dec.lines) validate_line(box, l);
    if (!is_partition_of(box, dec, d.complement()))
        detail::fail_input("decomposition is not a partition of the complement into disjoint lines");
    auto t = integer_grid(box);
    const auto lines = static_cast<std::int64_t>(dec.lines.size());
    for (std::int64_t j = 0; j < lines; ++j) {
        const auto& l = dec.lines[static_cast<std::size_t>(j)];
        const Rational alpha(j + 1, lines + 1);
        const auto anchor = line_anchor(box, l);
        const auto stride = static_cast<std::size_t>(box.stride(l.axis));
        for (int s = 0; s < box.side(l.axis); ++s)
            t.points[anchor + static_cast<std::size_t>(s) * stride].coords[l.axis] += alpha;
    }
    return t;
}

/// Every simple component's code set is complementable by lines.
inline bool check_theorem_forward(const TorusTiling& t) {
    for (const auto& c : simple_components(t))
        if (!is_complementable_by_lines(t.dims, c.code_set)) return false;
    return true;
}

struct RoundTripResult {
    bool complementable = false;
    bool ok = false;
    std::string detail;
};

inline RoundTripResult round_trip(const BoxDims& box, const CellSet& d) {
    RoundTripResult r;
    auto dec = complement_witness(box, d);
    if (!dec) {
        r.ok = true;
        r.detail = "not complementable";
        return r;
    }
    r.complementable = true;
    auto t = build_tiling_from_decomposition(box, d, *dec);
    if (auto v = validate_tiling(t); !v.ok) {
        r.detail = "constructed tiling invalid: " + v.message;
        return r;
    }
    if (!keller_check(t)) {
        r.detail = "integer codes are not a bijection onto the box";
        return r;
    }
    if (!(origin_component(t).code_set == d)) {
        r.detail = "origin component codes differ from D";
        return r;
    }
    if (!check_theorem_forward(t)) {
        r.detail = "a component's code set is not complementable by lines";
        return r;
    }
    r.ok = true;
    r.detail = "ok";
    return r;
}

inline bool round_trip_check(const BoxDims& box, const CellSet& d) { return round_trip(box, d).ok; }

struct ComponentSize {
    std::size_t component = 0;
    std::int64_t size = 0;
    bool representable = false;
};

struct ComponentSizeReport {
    std::vector<ComponentSize> components;
    std::vector<ComponentSize> failures;

    [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

inline ComponentSizeReport component_size_representable(const TorusTiling& t, const ResidueTable& table) {
    ComponentSizeReport rep;
    const auto comps = simple_components(t);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        ComponentSize c{i, static_cast<std::int64_t>(comps[i].size()), false};
        c.representable = table.contains(c.size);
        rep.components.push_back(c);
        if (!c.representable) rep.failures.push_back(c);
    }
    return rep;
}

// Enumeration on the refined grid ---------------------------------------

inline constexpr std::int64_t kMaxFineCells = 4096;

/// Calls visit for every tiling whose coordinates lie in (1/q)Z, in a fixed
/// order; visit returns false to stop. Returns the number visited. Points of
/// each tiling are sorted. No translation reduction.
inline std::uint64_t enumerate_grid_tilings(const BoxDims& k, int q, const std::function<bool(const TorusTiling&)>& visit,
                                            std::int64_t max_fine_cells = kMaxFineCells) {
    if (q < 1) detail::fail_input("refinement must be at least 1");
    const auto d = k.dim();
    std::vector<int> fine_sides;
    std::int64_t fine = 1;
    std::int64_t cube_cells = 1;
    for (std::size_t i = 0; i < d; ++i) {
        fine_sides.push_back(k.side(i) * q);
        fine *= k.side(i) * q;
        cube_cells *= q;
        if (fine > max_fine_cells) throw resource_bound("refined torus exceeds the fine-cell limit");
    }
    const BoxDims grid(fine_sides, 1);
    const auto n = static_cast<std::size_t>(fine);

    // Fine cells covered by a cube with origin at each fine cell.
    std::vector<std::vector<std::size_t>> cover(n);
    std::vector<int> off(d, 0);
    for (std::size_t o = 0; o < n; ++o) {
        std::fill(off.begin(), off.end(), 0);
        for (std::int64_t c = 0; c < cube_cells; ++c) {
            std::int64_t idx = 0;
            for (std::size_t i = 0; i < d; ++i) {
                const int x = (grid.coord0(o, i) + off[i]) % fine_sides[i];
                idx += x * grid.stride(i);
            }
            cover[o].push_back(static_cast<std::size_t>(idx));
            for (std::size_t i = 0; i < d; ++i) {
                if (++off[i] < q) break;
                off[i] = 0;
            }
        }
    }
    // Origins whose cube contains each fine cell, in ascending order.
    std::vector<std::vector<std::size_t>> holders(n);
    for (std::size_t o = 0; o < n; ++o)
        for (auto c : cover[o]) holders[c].push_back(o);
    for (auto& h : holders) std::sort(h.begin(), h.end());

    std::vector<char> used(n, 0);
    std::vector<std::size_t> chosen;
    std::uint64_t count = 0;
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (stop) return;
        std::size_t c = from;
        while (c < n && used[c]) ++c;
        if (c == n) {
            TorusTiling t{k, {}};
            for (auto o : chosen) {
                RationalPoint p;
                for (std::size_t i = 0; i < d; ++i) p.coords.emplace_back(grid.coord0(o, i), q);
                t.points.push_back(std::move(p));
            }
            std::sort(t.points.begin(), t.points.end());
            ++count;
            if (!visit(t)) stop = true;
            return;
        }
        for (auto o : holders[c]) {
            bool free = true;
            for (auto x : cover[o])
                if (used[x]) {
                    free = false;
                    break;
                }
            if (!free) continue;
            for (auto x : cover[o]) used[x] = 1;
            chosen.push_back(o);
            rec(c + 1);
            chosen.pop_back();
            for (auto x : cover[o]) used[x] = 0;
            if (stop) return;
        }
    };
    rec(0);
    return count;
}

inline std::vector<TorusTiling> enumerate_grid_tilings(const BoxDims& k, int q, std::int64_t max_fine_cells = kMaxFineCells) {
    std::vector<TorusTiling> out;
    enumerate_grid_tilings(k, q, [&](const TorusTiling& t) {
        out.push_back(t);
        return true;
    }, max_fine_cells);
    return out;
}

/// Representative of the tiling's class under torus translations: the least
/// sorted point list among the translates that move one of its points to 0.
inline std::vector<RationalPoint> translation_canonical_form(const TorusTiling& t) {
    std::vector<RationalPoint> best;
    for (const auto& base : t.points) {
        std::vector<RationalPoint> moved;
        moved.reserve(t.points.size());
        for (const auto& p : t.points) {
            RationalPoint m;
            for (std::size_t i = 0; i < p.dim(); ++i) m.coords.push_back(mod_torus(p.coords[i] - base.coords[i], t.dims.side(i)));
            moved.push_back(std::move(m));
        }
        std::sort(moved.begin(), moved.end());
        if (best.empty() || std::lexicographical_compare(moved.begin(), moved.end(), best.begin(), best.end()))
            best = std::move(moved);
    }
    return best;
}

/// Optional post-pass: keep the first tiling of each translation class.
inline std::vector<TorusTiling> dedupe_translations(const std::vector<TorusTiling>& tilings) {
    std::vector<TorusTiling> out;
    std::vector<std::vector<RationalPoint>> seen;
    for (const auto& t : tilings) {
        auto key = translation_canonical_form(t);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(std::move(key));
        out.push_back(t);
    }
    return out;
}

}  // namespace cubeline
