#pragma once

/**
 * @file box.hpp
 * @brief Discrete boxes [k] = [k_1] x ... x [k_d], their subsets and lines.
 *
 * Cells use 1-based coordinates x_i in 1..k_i. Cells are indexed in
 * mixed-radix order with coordinate 1 varying fastest, so cell x has index
 * sum_i (x_i - 1) * stride_i with stride_1 = 1 and stride_{i+1} = stride_i * k_i.
 *
 * A line in direction s is the set of k_s cells obtained by fixing every
 * coordinate except x_s. A subset D is complementable by lines when [k] \ D
 * is a disjoint union of lines.
 */

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubeline/error.hpp"

namespace cubeline {

using Cell = std::vector<int>;

/// Upper bound on box volume for dense cell sets.
inline constexpr std::int64_t kMaxDenseVolume = std::int64_t{1} << 26;

class BoxDims {
public:
    BoxDims() = default;

    explicit BoxDims(std::vector<int> sides, int min_side = 2) : sides_(std::move(sides)) {
        detail::require(!sides_.empty(), "box must have at least one dimension");
        strides_.resize(sides_.size());
        std::int64_t v = 1;
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            if (sides_[i] < min_side)
                detail::fail_input("box side " + std::to_string(i + 1) + " must be >= " + std::to_string(min_side));
            strides_[i] = v;
            v *= sides_[i];
            if (v > kMaxDenseVolume) throw resource_bound("box volume exceeds the dense cell-set limit");
        }
        volume_ = v;
    }

    BoxDims(std::initializer_list<int> sides) : BoxDims(std::vector<int>(sides)) {}

    [[nodiscard]] std::size_t dim() const noexcept { return sides_.size(); }
    [[nodiscard]] int side(std::size_t i) const { return sides_.at(i); }
    [[nodiscard]] std::span<const int> sides() const noexcept { return sides_; }
    [[nodiscard]] std::int64_t volume() const noexcept { return volume_; }
    [[nodiscard]] std::int64_t stride(std::size_t i) const { return strides_.at(i); }

    /// Number of distinct lines in direction i.
    [[nodiscard]] std::int64_t lines_in_direction(std::size_t i) const { return volume_ / sides_.at(i); }

    [[nodiscard]] bool contains(std::span<const int> x) const {
        if (x.size() != sides_.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < 1 || x[i] > sides_[i]) return false;
        return true;
    }

    [[nodiscard]] std::size_t index(std::span<const int> x) const {
        if (!contains(x)) detail::fail_input("cell outside the box");
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) idx += (x[i] - 1) * strides_[i];
        return static_cast<std::size_t>(idx);
    }

    [[nodiscard]] Cell cell(std::size_t idx) const {
        Cell x(sides_.size());
        auto rest = static_cast<std::int64_t>(idx);
        for (std::size_t i = 0; i < sides_.size(); ++i) {
            x[i] = static_cast<int>(rest % sides_[i]) + 1;
            rest /= sides_[i];
        }
        return x;
    }

    /// Zero-based coordinate i of the cell with the given index.
    [[nodiscard]] int coord0(std::size_t idx, std::size_t i) const {
        return static_cast<int>((static_cast<std::int64_t>(idx) / strides_[i]) % sides_[i]);
    }

    friend bool operator==(const BoxDims& a, const BoxDims& b) { return a.sides_ == b.sides_; }

private:
    std::vector<int> sides_;
    std::vector<std::int64_t> strides_;
    std::int64_t volume_ = 0;
};

/// Dense bit set over [0, size).
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    [[nodiscard]] std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    [[nodiscard]] bool none() const {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }

    void flip_all() {
        for (auto& w : words_) w = ~w;
        trim();
    }
    [[nodiscard]] bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    [[nodiscard]] bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }
    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& subtract(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits) {
                f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                bits &= bits - 1;
            }
        }
    }

    [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

    friend bool operator==(const Bitset&, const Bitset&) = default;

private:
    void trim() {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// A subset of the cells of a box.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(BoxDims box) : box_(std::move(box)), bits_(static_cast<std::size_t>(box_.volume())) {}

    static CellSet full(BoxDims box) {
        CellSet s(std::move(box));
        s.bits_.flip_all();
        return s;
    }

    static CellSet from_cells(BoxDims box, std::span<const Cell> cells) {
        CellSet s(std::move(box));
        for (const auto& c : cells) s.insert(c);
        return s;
    }

    [[nodiscard]] const BoxDims& box() const noexcept { return box_; }
    [[nodiscard]] const Bitset& bits() const noexcept { return bits_; }
    [[nodiscard]] std::size_t size() const { return bits_.count(); }
    [[nodiscard]] bool empty() const { return bits_.none(); }

    void insert(std::span<const int> x) { bits_.set(box_.index(x)); }
    void insert_index(std::size_t i) { bits_.set(i); }
    void erase_index(std::size_t i) { bits_.reset(i); }
    [[nodiscard]] bool contains(std::span<const int> x) const { return box_.contains(x) && bits_.test(box_.index(x)); }
    [[nodiscard]] bool contains_index(std::size_t i) const { return bits_.test(i); }

    [[nodiscard]] CellSet complement() const {
        CellSet c = *this;
        c.bits_.flip_all();
        return c;
    }

    CellSet& operator|=(const CellSet& o) {
        bits_ |= o.bits_;
        return *this;
    }

    [[nodiscard]] bool intersects(const CellSet& o) const { return bits_.intersects(o.bits_); }

    template <class F>
    void for_each_index(F&& f) const {
        bits_.for_each(std::forward<F>(f));
    }

    [[nodiscard]] std::vector<Cell> cells() const {
        std::vector<Cell> out;
        bits_.for_each([&](std::size_t i) { out.push_back(box_.cell(i)); });
        return out;
    }

    friend bool operator==(const CellSet& a, const CellSet& b) { return a.box_ == b.box_ && a.bits_ == b.bits_; }

private:
    BoxDims box_;
    Bitset bits_;
};

/// An axis line: all cells agreeing with `base` off coordinate `axis`.
/// `axis` is zero-based; base[axis] is ignored and normalised to 1.
struct Line {
    std::size_t axis = 0;
    Cell base;

    friend bool operator==(const Line&, const Line&) = default;
    friend auto operator<=>(const Line&, const Line&) = default;
};

inline Line make_line(std::size_t axis, Cell base) {
    if (axis < base.size()) base[axis] = 1;
    return Line{axis, std::move(base)};
}

inline void validate_line(const BoxDims& box, const Line& l) {
    if (l.axis >= box.dim()) detail::fail_input("line direction out of range");
    if (l.base.size() != box.dim()) detail::fail_input("line base has the wrong dimension");
    for (std::size_t i = 0; i < box.dim(); ++i) {
        if (i == l.axis) continue;
        if (l.base[i] < 1 || l.base[i] > box.side(i)) detail::fail_input("line base coordinate out of range");
    }
}

/// Index of the first cell (x_axis = 1) of a line.
inline std::size_t line_anchor(const BoxDims& box, const Line& l) {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < box.dim(); ++i)
        if (i != l.axis) idx += (l.base[i] - 1) * box.stride(i);
    return static_cast<std::size_t>(idx);
}

inline CellSet cells_of_line(const BoxDims& box, const Line& l) {
    validate_line(box, l);
    CellSet s(box);
    const auto anchor = line_anchor(box, l);
    const auto stride = static_cast<std::size_t>(box.stride(l.axis));
    for (int t = 0; t < box.side(l.axis); ++t) s.insert_index(anchor + static_cast<std::size_t>(t) * stride);
    return s;
}

/// Line through the cell with index idx in the given direction.
inline Line line_through(const BoxDims& box, std::size_t idx, std::size_t axis) {
    return make_line(axis, box.cell(idx));
}

struct LineDecomposition {
    std::vector<Line> lines;

    friend bool operator==(const LineDecomposition&, const LineDecomposition&) = default;
};

/// Union of the lines if they are pairwise disjoint, otherwise nullopt.
inline std::optional<CellSet> disjoint_union(const BoxDims& box, const LineDecomposition& dec) {
    CellSet acc(box);
    for (const auto& l : dec.lines) {
        auto c = cells_of_line(box, l);
        if (acc.intersects(c)) return std::nullopt;
        acc |= c;
    }
    return acc;
}

/// Whether dec partitions `target` into pairwise-disjoint lines.
inline bool is_partition_of(const BoxDims& box, const LineDecomposition& dec, const CellSet& target) {
    auto u = disjoint_union(box, dec);
    return u && *u == target;
}

namespace detail {

/// Exact cover of a cell set by lines. Cells are chosen by fewest remaining
/// candidate lines (ties: lowest index); candidates tried in axis order.
class LineCover {
public:
    LineCover(const BoxDims& box, const CellSet& target) : box_(box), target_(target) {
        const auto n = static_cast<std::size_t>(box.volume());
        const auto d = box.dim();
        count_.assign(n, 0);
        covered_.assign(n, 0);
        line_at_.assign(n * d, kNone);
        target.for_each_index([&](std::size_t idx) {
            for (std::size_t s = 0; s < d; ++s) {
                if (box.coord0(idx, s) != 0) continue;
                const auto stride = static_cast<std::size_t>(box.stride(s));
                bool inside = true;
                for (int t = 1; t < box.side(s) && inside; ++t)
                    inside = target.contains_index(idx + static_cast<std::size_t>(t) * stride);
                if (!inside) continue;
                const auto id = lines_.size();
                lines_.push_back({s, idx});
                alive_.push_back(1);
                for (int t = 0; t < box.side(s); ++t) {
                    const auto c = idx + static_cast<std::size_t>(t) * stride;
                    line_at_[c * d + s] = id;
                    ++count_[c];
                }
            }
        });
        remaining_ = target.size();
    }

    std::optional<LineDecomposition> solve() {
        std::vector<std::size_t> chosen;
        if (!search(chosen)) return std::nullopt;
        LineDecomposition dec;
        for (auto id : chosen) dec.lines.push_back(line_through(box_, lines_[id].anchor, lines_[id].axis));
        std::sort(dec.lines.begin(), dec.lines.end());
        return dec;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    struct Cand {
        std::size_t axis;
        std::size_t anchor;
    };

    template <class F>
    void for_cells(std::size_t id, F&& f) const {
        const auto& c = lines_[id];
        const auto stride = static_cast<std::size_t>(box_.stride(c.axis));
        for (int t = 0; t < box_.side(c.axis); ++t) f(c.anchor + static_cast<std::size_t>(t) * stride);
    }

    bool search(std::vector<std::size_t>& chosen) {
        if (remaining_ == 0) return true;
        std::size_t best = kNone;
        int best_count = 1 << 30;
        target_.for_each_index([&](std::size_t idx) {
            if (covered_[idx] || best_count == 0) return;
            if (count_[idx] < best_count) {
                best_count = count_[idx];
                best = idx;
            }
        });
        if (best_count == 0) return false;
        const auto d = box_.dim();
        for (std::size_t s = 0; s < d; ++s) {
            const auto id = line_at_[best * d + s];
            if (id == kNone || !alive_[id]) continue;
            std::vector<std::size_t> killed;
            select(id, killed);
            chosen.push_back(id);
            if (search(chosen)) return true;
            chosen.pop_back();
            unselect(id, killed);
        }
        return false;
    }

    void kill(std::size_t id) {
        alive_[id] = 0;
        for_cells(id, [&](std::size_t c) { --count_[c]; });
    }
    void revive(std::size_t id) {
        alive_[id] = 1;
        for_cells(id, [&](std::size_t c) { ++count_[c]; });
    }

    void select(std::size_t id, std::vector<std::size_t>& killed) {
        const auto d = box_.dim();
        for_cells(id, [&](std::size_t c) {
            for (std::size_t s = 0; s < d; ++s) {
                const auto other = line_at_[c * d + s];
                if (other != kNone && alive_[other]) {
                    kill(other);
                    killed.push_back(other);
                }
            }
        });
        for_cells(id, [&](std::size_t c) { covered_[c] = 1; });
        remaining_ -= static_cast<std::size_t>(box_.side(lines_[id].axis));
    }

    void unselect(std::size_t id, const std::vector<std::size_t>& killed) {
        for_cells(id, [&](std::size_t c) { covered_[c] = 0; });
        remaining_ += static_cast<std::size_t>(box_.side(lines_[id].axis));
        for (auto it = killed.rbegin(); it != killed.rend(); ++it) revive(*it);
    }

    const BoxDims& box_;
    const CellSet& target_;
    std::vector<Cand> lines_;
    std::vector<char> alive_;
    std::vector<int> count_;
    std::vector<char> covered_;
    std::vector<std::size_t> line_at_;
    std::size_t remaining_ = 0;
};

}  // namespace detail

/// Partition of C into disjoint lines, or nullopt when none exists.
inline std::optional<LineDecomposition> decompose_into_lines(const BoxDims& box, const CellSet& c) {
    if (!(c.box() == box)) detail::fail_input("cell set belongs to a different box");
    detail::LineCover cover(box, c);
    return cover.solve();
}

/// Witness decomposition of [k] \ D, or nullopt when D is not complementable.
inline std::optional<LineDecomposition> complement_witness(const BoxDims& box, const CellSet& d) {
    return decompose_into_lines(box, d.complement());
}

inline bool is_complementable_by_lines(const BoxDims& box, const CellSet& d) {
    return complement_witness(box, d).has_value();
}

}  // namespace cubeline
