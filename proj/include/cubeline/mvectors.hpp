#pragma once

/**
 * @file mvectors.hpp
 * @brief Achievable line-count vectors of disjoint line families.
 *
 * For a family of pairwise disjoint lines in [k], its m-vector counts the
 * lines per direction. Since every direction-s line has k_s cells, the set D
 * left uncovered by the family has |D| = prod k_i - sum_s m_s k_s, so the
 * representability question for complementable sets depends on m only.
 *
 * The set of achievable m-vectors is downward closed (drop lines). It is
 * computed exactly, never by enumerating families one by one:
 *
 *  - Plane winners. Two lines of directions s != t meet iff they lie in the
 *    same (s,t)-plane. So a family is disjoint iff no (s,t)-plane holds lines
 *    of both directions. Choosing a "winner" direction for every plane and
 *    taking all lines allowed by their planes yields a disjoint family, and
 *    every disjoint family is contained in one of these. For d = 3 the planes
 *    are indexed by a single coordinate, which gives closed forms.
 *
 *  - Slab recursion (d = 2 and d >= 4). Split along the longest axis t. The
 *    direction-t lines form a set Q of columns; every slab orthogonal to t is
 *    an independent (d-1)-box with the cells of Q blocked, so the achievable
 *    set is the union over Q of (Minkowski sum over slabs) x {|Q|}. Adding to
 *    Q a column whose cell already lies on no usable slab line changes no slab
 *    and raises |Q|, so only closed Q (equal to that closure) are visited.
 */

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "cubeline/box.hpp"
#include "cubeline/error.hpp"
#include "cubeline/semigroup.hpp"

namespace cubeline {

/// Per-direction line counts, indexed by zero-based axis.
struct MVector {
    std::vector<std::int64_t> counts;

    MVector() = default;
    explicit MVector(std::vector<std::int64_t> c) : counts(std::move(c)) {}
    MVector(std::initializer_list<std::int64_t> c) : counts(c) {}

    [[nodiscard]] std::size_t size() const noexcept { return counts.size(); }
    std::int64_t& operator[](std::size_t i) { return counts[i]; }
    std::int64_t operator[](std::size_t i) const { return counts[i]; }

    friend bool operator==(const MVector&, const MVector&) = default;
    friend auto operator<=>(const MVector&, const MVector&) = default;
};

struct EnumerationLimits {
    std::int64_t volume_limit = 4096;
    /// Largest number of free columns whose subsets the slab recursion visits.
    int max_subset_bits = 28;
    std::int64_t max_grid_cells = std::int64_t{1} << 28;
};

/// A downward-closed set of non-negative integer vectors inside [0, bounds].
/// Stored densely; call close() after marking points.
class DownSet {
public:
    DownSet() = default;

    explicit DownSet(std::vector<std::int64_t> bounds, std::int64_t max_cells = std::int64_t{1} << 28)
        : bounds_(std::move(bounds)) {
        strides_.resize(bounds_.size());
        std::int64_t n = 1;
        for (std::size_t i = 0; i < bounds_.size(); ++i) {
            detail::require(bounds_[i] >= 0, "down-set bounds must be non-negative");
            strides_[i] = n;
            n *= bounds_[i] + 1;
            if (n > max_cells) throw resource_bound("achievable-set grid exceeds the configured cell limit");
        }
        bits_ = Bitset(static_cast<std::size_t>(n));
    }

    /// {0} in the given dimension.
    static DownSet origin(std::size_t dim) {
        DownSet s(std::vector<std::int64_t>(dim, 0));
        s.bits_.set(0);
        return s;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return bounds_.size(); }
    [[nodiscard]] std::span<const std::int64_t> bounds() const noexcept { return bounds_; }
    [[nodiscard]] std::size_t cells() const noexcept { return bits_.size(); }

    [[nodiscard]] bool in_bounds(std::span<const std::int64_t> p) const {
        if (p.size() != bounds_.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < 0 || p[i] > bounds_[i]) return false;
        return true;
    }

    void mark(std::span<const std::int64_t> p) {
        if (!in_bounds(p)) detail::fail_input("point outside the down-set bounds");
        bits_.set(offset(p));
    }

    [[nodiscard]] bool contains(std::span<const std::int64_t> p) const {
        if (p.size() != bounds_.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < 0) return false;
            if (p[i] > bounds_[i]) return false;
        }
        return bits_.test(offset(p));
    }
    [[nodiscard]] bool contains(const MVector& m) const { return contains(std::span<const std::int64_t>(m.counts)); }

    /// Downward closure of the marked points.
    void close() {
        const auto n = bits_.size();
        if (n == 0) return;
        const auto d = bounds_.size();
        std::vector<std::int64_t> x(bounds_.begin(), bounds_.end());
        for (std::size_t idx = n; idx-- > 0;) {
            if (bits_.test(idx)) {
                for (std::size_t s = 0; s < d; ++s)
                    if (x[s] > 0) bits_.set(idx - static_cast<std::size_t>(strides_[s]));
            }
            for (std::size_t s = 0; s < d; ++s) {
                if (x[s] > 0) {
                    --x[s];
                    break;
                }
                x[s] = bounds_[s];
            }
        }
    }

    template <class F>
    void for_each(F&& f) const {
        bits_.for_each([&](std::size_t idx) { f(point(idx)); });
    }

    [[nodiscard]] std::size_t count() const { return bits_.count(); }

    [[nodiscard]] std::vector<MVector> maximal() const {
        std::vector<MVector> out;
        const auto d = bounds_.size();
        bits_.for_each([&](std::size_t idx) {
            auto p = point(idx);
            for (std::size_t s = 0; s < d; ++s)
                if (p[s] < bounds_[s] && bits_.test(idx + static_cast<std::size_t>(strides_[s]))) return;
            out.push_back(std::move(p));
        });
        return out;
    }

    [[nodiscard]] std::vector<MVector> all() const {
        std::vector<MVector> out;
        for_each([&](MVector p) { out.push_back(std::move(p)); });
        return out;
    }

    /// Minkowski sum of two closed sets (result closed).
    friend DownSet minkowski(const DownSet& a, const DownSet& b, std::int64_t max_cells = std::int64_t{1} << 28) {
        detail::require(a.dim() == b.dim(), "minkowski: dimension mismatch");
        std::vector<std::int64_t> bounds(a.dim());
        for (std::size_t i = 0; i < bounds.size(); ++i) bounds[i] = a.bounds_[i] + b.bounds_[i];
        DownSet r(std::move(bounds), max_cells);
        const auto ma = a.maximal();
        const auto mb = b.maximal();
        std::vector<std::int64_t> p(a.dim());
        for (const auto& u : ma)
            for (const auto& v : mb) {
                for (std::size_t i = 0; i < p.size(); ++i) p[i] = u[i] + v[i];
                r.bits_.set(r.offset(p));
            }
        r.close();
        return r;
    }

    /// n-fold Minkowski sum (n = 0 gives the origin).
    [[nodiscard]] DownSet power(std::int64_t n, std::int64_t max_cells = std::int64_t{1} << 28) const {
        DownSet result = origin(dim());
        DownSet base = *this;
        while (n > 0) {
            if (n & 1) result = minkowski(result, base, max_cells);
            n >>= 1;
            if (n > 0) base = minkowski(base, base, max_cells);
        }
        return result;
    }

    friend bool operator==(const DownSet& a, const DownSet& b) { return a.bounds_ == b.bounds_ && a.bits_ == b.bits_; }

    [[nodiscard]] std::size_t hash() const {
        std::size_t h = boost::hash_range(bounds_.begin(), bounds_.end());
        auto w = bits_.words();
        boost::hash_combine(h, boost::hash_range(w.begin(), w.end()));
        return h;
    }

private:
    [[nodiscard]] std::size_t offset(std::span<const std::int64_t> p) const {
        std::int64_t o = 0;
        for (std::size_t i = 0; i < p.size(); ++i) o += p[i] * strides_[i];
        return static_cast<std::size_t>(o);
    }

    [[nodiscard]] MVector point(std::size_t idx) const {
        MVector p(std::vector<std::int64_t>(bounds_.size()));
        auto rest = static_cast<std::int64_t>(idx);
        for (std::size_t i = 0; i < bounds_.size(); ++i) {
            p[i] = rest % (bounds_[i] + 1);
            rest /= bounds_[i] + 1;
        }
        return p;
    }

    std::vector<std::int64_t> bounds_;
    std::vector<std::int64_t> strides_;
    Bitset bits_;
};

struct DownSetHash {
    std::size_t operator()(const DownSet& s) const { return s.hash(); }
};

namespace detail {

using Mask = std::uint64_t;

/// Small box with a blocked-cell mask (volume <= 64), cells in mixed radix.
struct MaskedBox {
    std::vector<int> sides;
    std::int64_t volume = 1;

    explicit MaskedBox(std::vector<int> s) : sides(std::move(s)) {
        for (auto k : sides) volume *= k;
    }

    [[nodiscard]] std::int64_t stride(std::size_t axis) const {
        std::int64_t st = 1;
        for (std::size_t i = 0; i < axis; ++i) st *= sides[i];
        return st;
    }

    /// Bit masks of every line in the given direction, in anchor order.
    [[nodiscard]] std::vector<Mask> lines(std::size_t axis) const {
        std::vector<Mask> out;
        const auto st = stride(axis);
        for (std::int64_t idx = 0; idx < volume; ++idx) {
            if ((idx / st) % sides[axis] != 0) continue;
            Mask m = 0;
            for (int t = 0; t < sides[axis]; ++t) m |= Mask{1} << (idx + t * st);
            out.push_back(m);
        }
        return out;
    }
};

inline std::vector<std::int64_t> line_count_bounds(std::span<const int> sides) {
    std::int64_t vol = 1;
    for (auto k : sides) vol *= k;
    std::vector<std::int64_t> b;
    for (auto k : sides) b.push_back(vol / k);
    return b;
}

/// Plane-winner closed form for an unblocked 3-box. With A the x3-planes won
/// by direction 1 (over 2), B the x2-planes won by 1 (over 3) and C the
/// x1-planes won by 2 (over 3), the allowed lines number
/// (|B||A|, |C|(k3-|A|), (k1-|C|)(k2-|B|)).
inline DownSet solve_box3(std::span<const int> k, const EnumerationLimits& lim) {
    DownSet s(line_count_bounds(k), lim.max_grid_cells);
    std::vector<std::int64_t> p(3);
    for (std::int64_t a = 0; a <= k[2]; ++a)
        for (std::int64_t b = 0; b <= k[1]; ++b)
            for (std::int64_t c = 0; c <= k[0]; ++c) {
                p[0] = b * a;
                p[1] = c * (k[2] - a);
                p[2] = (k[0] - c) * (k[1] - b);
                s.mark(p);
            }
    s.close();
    return s;
}

/// Same plane-winner enumeration for a 3-box with blocked cells; only lines
/// avoiding the blocked cells count.
inline DownSet solve_masked3(const MaskedBox& box, Mask blocked, const EnumerationLimits& lim) {
    const int a0 = box.sides[0], a1 = box.sides[1], a2 = box.sides[2];
    // free0[x2]: bits x1 of free direction-0 lines; free1[x2]: bits x0 of free
    // direction-1 lines; free2[x1]: bits x0 of free direction-2 lines.
    std::vector<Mask> free0(static_cast<std::size_t>(a2), 0), free1(static_cast<std::size_t>(a2), 0),
        free2(static_cast<std::size_t>(a1), 0);
    auto cell = [&](int x0, int x1, int x2) { return x0 + a0 * (x1 + a1 * x2); };
    for (int x2 = 0; x2 < a2; ++x2)
        for (int x1 = 0; x1 < a1; ++x1) {
            bool ok = true;
            for (int x0 = 0; x0 < a0 && ok; ++x0) ok = !((blocked >> cell(x0, x1, x2)) & 1u);
            if (ok) free0[static_cast<std::size_t>(x2)] |= Mask{1} << x1;
        }
    for (int x2 = 0; x2 < a2; ++x2)
        for (int x0 = 0; x0 < a0; ++x0) {
            bool ok = true;
            for (int x1 = 0; x1 < a1 && ok; ++x1) ok = !((blocked >> cell(x0, x1, x2)) & 1u);
            if (ok) free1[static_cast<std::size_t>(x2)] |= Mask{1} << x0;
        }
    for (int x1 = 0; x1 < a1; ++x1)
        for (int x0 = 0; x0 < a0; ++x0) {
            bool ok = true;
            for (int x2 = 0; x2 < a2 && ok; ++x2) ok = !((blocked >> cell(x0, x1, x2)) & 1u);
            if (ok) free2[static_cast<std::size_t>(x1)] |= Mask{1} << x0;
        }

    DownSet s(line_count_bounds(box.sides), lim.max_grid_cells);
    const Mask all0 = (Mask{1} << a0) - 1;
    std::vector<std::int64_t> best, next;
    std::vector<std::int64_t> p(3);
    for (Mask c = 0; c <= all0; ++c)
        for (Mask b = 0; b < (Mask{1} << a1); ++b) {
            std::int64_t m2 = 0;
            for (int x1 = 0; x1 < a1; ++x1)
                if (!((b >> x1) & 1u)) m2 += std::popcount(free2[static_cast<std::size_t>(x1)] & ~c & all0);
            // Each x2-plane independently goes to direction 0 or 1: keep, for
            // every reachable m0, the largest m1.
            best.assign(1, 0);
            for (int x2 = 0; x2 < a2; ++x2) {
                const auto pz = std::popcount(free0[static_cast<std::size_t>(x2)] & b);
                const auto qz = std::popcount(free1[static_cast<std::size_t>(x2)] & c);
                next.assign(best.size() + static_cast<std::size_t>(pz), -1);
                for (std::size_t m0 = 0; m0 < best.size(); ++m0) {
                    if (best[m0] < 0) continue;
                    next[m0] = std::max(next[m0], best[m0] + qz);
                    next[m0 + static_cast<std::size_t>(pz)] = std::max(next[m0 + static_cast<std::size_t>(pz)], best[m0]);
                }
                best.swap(next);
            }
            for (std::size_t m0 = 0; m0 < best.size(); ++m0) {
                if (best[m0] < 0) continue;
                p[0] = static_cast<std::int64_t>(m0);
                p[1] = best[m0];
                p[2] = m2;
                s.mark(p);
            }
        }
    s.close();
    return s;
}

inline DownSet solve_masked(const MaskedBox& box, Mask blocked, const EnumerationLimits& lim);

/// Slab recursion along the longest axis for a small masked box.
inline DownSet solve_masked_slabs(const MaskedBox& box, Mask blocked, const EnumerationLimits& lim) {
    const auto d = box.sides.size();
    std::size_t t = 0;
    for (std::size_t i = 1; i < d; ++i)
        if (box.sides[i] >= box.sides[t]) t = i;
    const int kt = box.sides[t];
    std::vector<int> sub_sides;
    for (std::size_t i = 0; i < d; ++i)
        if (i != t) sub_sides.push_back(box.sides[i]);
    MaskedBox sub(sub_sides);
    const auto st = box.stride(t);
    const auto sub_vol = sub.volume;

    // Blocked cells of every slab, as masks over the slab.
    std::vector<Mask> slab_blocked(static_cast<std::size_t>(kt), 0);
    for (std::int64_t j = 0; j < sub_vol; ++j)
        for (int c = 0; c < kt; ++c) {
            const auto idx = (j % st) + c * st + (j / st) * st * kt;
            if ((blocked >> idx) & 1u) slab_blocked[static_cast<std::size_t>(c)] |= Mask{1} << j;
        }
    Mask free_cols = sub_vol == 64 ? ~Mask{0} : (Mask{1} << sub_vol) - 1;
    for (auto b : slab_blocked) free_cols &= ~b;
    if (std::popcount(free_cols) > lim.max_subset_bits)
        throw resource_bound("achievable m-vectors: too many free columns to enumerate (" +
                             std::to_string(std::popcount(free_cols)) + ")");

    std::vector<Mask> sub_lines;
    for (std::size_t s = 0; s + 1 < d; ++s) {
        auto ls = sub.lines(s);
        sub_lines.insert(sub_lines.end(), ls.begin(), ls.end());
    }
    const bool uniform =
        std::all_of(slab_blocked.begin(), slab_blocked.end(), [&](Mask b) { return b == slab_blocked[0]; });

    std::unordered_map<Mask, DownSet> memo;
    auto slab_set = [&](Mask m) -> const DownSet& {
        auto it = memo.find(m);
        if (it == memo.end()) it = memo.emplace(m, solve_masked(sub, m, lim)).first;
        return it->second;
    };

    // Distinct per-slab outcomes (uniform: one slab's set; otherwise the
    // slab sum) with the largest column count reaching them.
    std::unordered_map<DownSet, std::int64_t, DownSetHash> outcomes;
    Mask q = 0;
    while (true) {
        Mask covered = 0;
        if (uniform) {
            const Mask blk = slab_blocked[0] | q;
            for (auto l : sub_lines)
                if (!(l & blk)) covered |= l;
        } else {
            for (int c = 0; c < kt; ++c) {
                const Mask blk = slab_blocked[static_cast<std::size_t>(c)] | q;
                for (auto l : sub_lines)
                    if (!(l & blk)) covered |= l;
            }
        }
        if ((free_cols & ~covered) == q) {
            const auto cols = static_cast<std::int64_t>(std::popcount(q));
            DownSet sum;
            if (uniform) {
                sum = solve_masked(sub, slab_blocked[0] | q, lim);
            } else {
                sum = slab_set(slab_blocked[0] | q);
                for (int c = 1; c < kt; ++c)
                    sum = minkowski(sum, slab_set(slab_blocked[static_cast<std::size_t>(c)] | q), lim.max_grid_cells);
            }
            auto [it, inserted] = outcomes.try_emplace(std::move(sum), cols);
            if (!inserted) it->second = std::max(it->second, cols);
        }
        if (q == free_cols) break;
        q = (q - free_cols) & free_cols;
    }

    DownSet result(line_count_bounds(box.sides), lim.max_grid_cells);
    std::vector<std::int64_t> p(d);
    for (const auto& [set, cols] : outcomes) {
        const DownSet total = uniform ? set.power(kt, lim.max_grid_cells) : set;
        for (const auto& v : total.maximal()) {
            for (std::size_t i = 0, j = 0; i < d; ++i) p[i] = (i == t) ? cols : v[j++];
            result.mark(p);
        }
    }
    result.close();
    return result;
}

inline DownSet solve_masked(const MaskedBox& box, Mask blocked, const EnumerationLimits& lim) {
    const auto d = box.sides.size();
    if (d == 1) {
        DownSet s(std::vector<std::int64_t>{1});
        s.mark(std::vector<std::int64_t>{blocked ? 0 : 1});
        s.close();
        return s;
    }
    if (d == 3) return solve_masked3(box, blocked, lim);
    return solve_masked_slabs(box, blocked, lim);
}

/// Single-plane closed form for an unblocked 2-box: rows and columns always
/// meet, so a family uses one direction only.
inline DownSet solve_box2(std::span<const int> k, const EnumerationLimits& lim) {
    DownSet s(line_count_bounds(k), lim.max_grid_cells);
    s.mark(std::vector<std::int64_t>{k[1], 0});
    s.mark(std::vector<std::int64_t>{0, k[0]});
    s.close();
    return s;
}

/// Unblocked box of dimension >= 4: split the longest axis once. All slabs
/// are identical, so the slab sum is a Minkowski power.
inline DownSet solve_top_split(std::span<const int> k, const EnumerationLimits& lim) {
    const auto d = k.size();
    std::size_t t = 0;
    for (std::size_t i = 1; i < d; ++i)
        if (k[i] >= k[t]) t = i;
    std::vector<int> sub;
    for (std::size_t i = 0; i < d; ++i)
        if (i != t) sub.push_back(k[i]);
    MaskedBox sbox(sub);
    if (sbox.volume > lim.max_subset_bits || sbox.volume > 64)
        throw resource_bound("achievable m-vectors: too many free columns to enumerate (" +
                             std::to_string(sbox.volume) + ")");
    std::vector<Mask> lines;
    for (std::size_t s = 0; s < sub.size(); ++s) {
        auto ls = sbox.lines(s);
        lines.insert(lines.end(), ls.begin(), ls.end());
    }
    const Mask all = (Mask{1} << sbox.volume) - 1;
    std::unordered_map<DownSet, std::int64_t, DownSetHash> outcomes;
    Mask q = 0;
    while (true) {
        Mask covered = 0;
        for (auto l : lines)
            if (!(l & q)) covered |= l;
        if ((all & ~covered) == q) {
            const auto cols = static_cast<std::int64_t>(std::popcount(q));
            auto set = solve_masked(sbox, q, lim);
            auto [it, inserted] = outcomes.try_emplace(std::move(set), cols);
            if (!inserted) it->second = std::max(it->second, cols);
        }
        if (q == all) break;
        q = (q - all) & all;
    }
    DownSet result(line_count_bounds(k), lim.max_grid_cells);
    std::vector<std::int64_t> p(d);
    for (const auto& [set, cols] : outcomes) {
        const auto total = set.power(k[t], lim.max_grid_cells);
        for (const auto& v : total.maximal()) {
            for (std::size_t i = 0, j = 0; i < d; ++i) p[i] = (i == t) ? cols : v[j++];
            result.mark(p);
        }
    }
    result.close();
    return result;
}

}  // namespace detail

/// Exact set of m-vectors realised by families of pairwise disjoint lines.
struct AchievableSet {
    BoxDims box;
    DownSet vectors;

    [[nodiscard]] bool contains(const MVector& m) const { return vectors.contains(m); }
    [[nodiscard]] std::size_t size() const { return vectors.count(); }
    [[nodiscard]] std::vector<MVector> maximal() const { return vectors.maximal(); }
    [[nodiscard]] std::vector<MVector> all() const { return vectors.all(); }
};

inline AchievableSet achievable_m_vectors(const BoxDims& box, const EnumerationLimits& lim = {}) {
    if (box.volume() > lim.volume_limit)
        throw resource_bound("box volume " + std::to_string(box.volume()) + " exceeds the enumeration limit " +
                             std::to_string(lim.volume_limit));
    std::vector<int> k(box.sides().begin(), box.sides().end());
    const auto d = k.size();
    AchievableSet out{box, {}};
    if (d == 3) {
        out.vectors = detail::solve_box3(k, lim);
        return out;
    }
    if (d == 2) {
        // Small 2-boxes go through the general slab recursion; larger ones use
        // the closed form the recursion reduces to.
        if (std::min(k[0], k[1]) <= 20 && box.volume() <= 64) {
            out.vectors = detail::solve_masked(detail::MaskedBox(k), 0, lim);
        } else {
            out.vectors = detail::solve_box2(k, lim);
        }
        return out;
    }
    if (d >= 4) {
        out.vectors = detail::solve_top_split(k, lim);
        return out;
    }
    out.vectors = detail::solve_masked(detail::MaskedBox(k), 0, lim);
    return out;
}

/// |D| for any D whose complement is a disjoint family with counts m.
inline std::int64_t size_of_D(const BoxDims& box, const MVector& m) {
    if (m.size() != box.dim()) detail::fail_input("m-vector has the wrong dimension");
    std::int64_t used = 0;
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (m[s] < 0) detail::fail_input("m-vector entries must be non-negative");
        used += m[s] * box.side(s);
    }
    if (used > box.volume()) detail::fail_input("m-vector covers more cells than the box has");
    return box.volume() - used;
}

enum class ConjectureRoute { automatic, m_vectors, grouped };

struct ConjectureViolation {
    MVector m;
    std::int64_t size = 0;
};

struct ConjectureReport {
    BoxDims box;
    /// "m-vectors": every achievable m-vector; "grouped": every achievable
    /// (lines along the cube axes, lines along the odd axis) pair.
    std::string route;
    std::uint64_t vectors_checked = 0;
    /// Distinct achievable |D| values, ascending.
    std::vector<std::int64_t> sizes;
    std::vector<ConjectureViolation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Boxes of shape (m, ..., m, n) up to axis order: all sides but at most one
/// are equal. Returns the odd axis (the last axis when all sides agree).
inline std::optional<std::size_t> near_cube_axis(const BoxDims& box) {
    const auto d = box.dim();
    if (d <= 2) return d - 1;
    for (std::size_t t = d; t-- > 0;) {
        int common = -1;
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            if (i == t) continue;
            if (common < 0) common = box.side(i);
            ok = box.side(i) == common;
        }
        if (ok) return t;
    }
    return std::nullopt;
}

namespace detail {

inline void collect_sizes(const std::vector<char>& seen, std::vector<std::int64_t>& out) {
    for (std::size_t n = 0; n < seen.size(); ++n)
        if (seen[n]) out.push_back(static_cast<std::int64_t>(n));
}

inline ConjectureReport check_by_m_vectors(const BoxDims& box, const ResidueTable& table,
                                           const EnumerationLimits& lim) {
    ConjectureReport rep{box, "m-vectors", 0, {}, {}};
    auto set = achievable_m_vectors(box, lim);
    std::vector<char> seen(static_cast<std::size_t>(box.volume()) + 1, 0);
    set.vectors.for_each([&](const MVector& m) {
        ++rep.vectors_checked;
        const auto n = size_of_D(box, m);
        seen[static_cast<std::size_t>(n)] = 1;
        if (!table.contains(n)) rep.violations.push_back({m, n});
    });
    collect_sizes(seen, rep.sizes);
    return rep;
}

/// For [m]^c x [n] (axes in any order), slabs orthogonal to the odd axis are
/// m-cubes and every slab line has m cells. With p odd-axis lines, a slab
/// avoids p cells and so holds at most m^(c-1) - ceil(p/m) disjoint lines;
/// filling the p cells line by line along one cube axis attains that in every
/// slab at once. Hence (M, p) with M = lines along cube axes is achievable iff
/// p <= m^c and M <= n (m^(c-1) - ceil(p/m)). Calls f(M, p) for each.
template <class F>
void for_each_grouped_pair(const BoxDims& box, std::size_t odd, F&& f) {
    const auto d = box.dim();
    const std::int64_t n = box.side(odd);
    const std::int64_t m = d == 1 ? 1 : box.side(odd == 0 ? 1 : 0);
    const auto c = static_cast<std::int64_t>(d) - 1;
    std::int64_t cube_cells = 1;
    for (std::int64_t i = 0; i < c; ++i) cube_cells *= m;
    for (std::int64_t p = 0; p <= cube_cells; ++p) {
        const std::int64_t per_slab = c == 0 ? 0 : cube_cells / m - (p + m - 1) / m;
        for (std::int64_t lines = 0; lines <= n * per_slab; ++lines) f(lines, p);
    }
}

inline ConjectureReport check_grouped(const BoxDims& box, std::size_t odd, const ResidueTable& table) {
    ConjectureReport rep{box, "grouped", 0, {}, {}};
    const auto d = box.dim();
    const std::int64_t n = box.side(odd);
    const std::int64_t m = d == 1 ? 1 : box.side(odd == 0 ? 1 : 0);
    const std::size_t cube_axis = odd == 0 ? 1 : 0;
    std::vector<char> seen(static_cast<std::size_t>(box.volume()) + 1, 0);
    for_each_grouped_pair(box, odd, [&](std::int64_t lines, std::int64_t p) {
        ++rep.vectors_checked;
        const std::int64_t size = box.volume() - m * lines - n * p;
        seen[static_cast<std::size_t>(size)] = 1;
        if (!table.contains(size)) {
            MVector w(std::vector<std::int64_t>(d, 0));
            w[odd] = p;
            if (d > 1) w[cube_axis] = lines;
            rep.violations.push_back({w, size});
        }
    });
    collect_sizes(seen, rep.sizes);
    return rep;
}

}  // namespace detail

inline DenominationVector denominations_of(const BoxDims& box) {
    std::vector<std::int64_t> k(box.sides().begin(), box.sides().end());
    return DenominationVector(std::move(k));
}

/// Tests every achievable |D| for representability by the box sides.
inline ConjectureReport check_conjecture_box(const BoxDims& box, const ResidueTable& table,
                                             const EnumerationLimits& lim = {},
                                             ConjectureRoute route = ConjectureRoute::automatic) {
    if (box.volume() > lim.volume_limit)
        throw resource_bound("box volume " + std::to_string(box.volume()) + " exceeds the enumeration limit " +
                             std::to_string(lim.volume_limit));
    if (!(table.denominations() == denominations_of(box)))
        detail::fail_input("residue table was not built from the box sides");
    auto odd = near_cube_axis(box);
    switch (route) {
        case ConjectureRoute::m_vectors:
            return detail::check_by_m_vectors(box, table, lim);
        case ConjectureRoute::grouped:
            if (!odd) detail::fail_input("grouped route needs a box of shape (m,...,m,n)");
            return detail::check_grouped(box, *odd, table);
        case ConjectureRoute::automatic:
            try {
                return detail::check_by_m_vectors(box, table, lim);
            } catch (const resource_bound&) {
                if (!odd) throw;
                return detail::check_grouped(box, *odd, table);
            }
    }
    return {};
}

inline ConjectureReport check_conjecture_box(const BoxDims& box, const EnumerationLimits& lim = {},
                                             ConjectureRoute route = ConjectureRoute::automatic) {
    return check_conjecture_box(box, build_residue_table(denominations_of(box)), lim, route);
}

}  // namespace cubeline
