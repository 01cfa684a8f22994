#pragma once

/**
 * @file semigroup.hpp
 * @brief Coin-problem representability over a denomination vector.
 *
 * A non-negative integer n is representable by k = (k_1, ..., k_d) when
 * n = n_1 k_1 + ... + n_d k_d for some non-negative integers n_i, i.e. when n
 * lies in the numerical semigroup generated by k.
 *
 * Queries go through a ResidueTable: for every residue r modulo the smallest
 * denomination k_min it stores the least representable integer congruent to r
 * (an Apery-style table), or "unreachable" when that class has no
 * representable member. Then n is representable iff n >= min_rep[n mod k_min].
 */

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "cubeline/error.hpp"

namespace cubeline {

/// Coin denominations, kept sorted ascending.
class DenominationVector {
public:
    DenominationVector() = default;

    explicit DenominationVector(std::vector<std::int64_t> denoms) : denoms_(std::move(denoms)) {
        detail::require(!denoms_.empty(), "denomination vector must be non-empty");
        for (auto k : denoms_) detail::require(k >= 1, "denominations must be positive");
        std::sort(denoms_.begin(), denoms_.end());
        gcd_ = 0;
        for (auto k : denoms_) gcd_ = std::gcd(gcd_, k);
    }

    DenominationVector(std::initializer_list<std::int64_t> denoms)
        : DenominationVector(std::vector<std::int64_t>(denoms)) {}

    [[nodiscard]] std::span<const std::int64_t> values() const noexcept { return denoms_; }
    [[nodiscard]] std::size_t size() const noexcept { return denoms_.size(); }
    [[nodiscard]] std::int64_t operator[](std::size_t i) const { return denoms_[i]; }
    [[nodiscard]] std::int64_t smallest() const { return denoms_.front(); }
    [[nodiscard]] std::int64_t gcd() const noexcept { return gcd_; }

    friend bool operator==(const DenominationVector&, const DenominationVector&) = default;

private:
    std::vector<std::int64_t> denoms_;
    std::int64_t gcd_ = 0;
};

class ResidueTable {
public:
    static constexpr std::int64_t kUnreachable = -1;

    ResidueTable() = default;

    [[nodiscard]] std::int64_t modulus() const noexcept { return modulus_; }
    [[nodiscard]] const DenominationVector& denominations() const noexcept { return denoms_; }

    /// Least representable value congruent to r, if any.
    [[nodiscard]] std::optional<std::int64_t> min_rep(std::int64_t r) const {
        auto v = min_rep_.at(static_cast<std::size_t>(r));
        if (v == kUnreachable) return std::nullopt;
        return v;
    }

    /// Raw table; unreachable residues hold kUnreachable.
    [[nodiscard]] std::span<const std::int64_t> raw() const noexcept { return min_rep_; }

    /// Index into denominations() of the last coin on a shortest path to r
    /// (meaningless for r == 0 or unreachable r).
    [[nodiscard]] std::size_t predecessor(std::int64_t r) const { return pred_.at(static_cast<std::size_t>(r)); }

    [[nodiscard]] bool contains(std::int64_t n) const {
        assert(n >= 0);
        auto m = min_rep_[static_cast<std::size_t>(n % modulus_)];
        return m != kUnreachable && n >= m;
    }

private:
    friend ResidueTable build_residue_table(const DenominationVector& k);

    DenominationVector denoms_;
    std::int64_t modulus_ = 1;
    std::vector<std::int64_t> min_rep_;
    std::vector<std::size_t> pred_;
};

/// Dijkstra over residues mod k_min; an edge "add k_j" costs k_j.
inline ResidueTable build_residue_table(const DenominationVector& k) {
    detail::require(k.size() > 0, "denomination vector must be non-empty");
    ResidueTable t;
    t.denoms_ = k;
    const std::int64_t mod = k.smallest();
    t.modulus_ = mod;
    const auto n = static_cast<std::size_t>(mod);
    t.min_rep_.assign(n, ResidueTable::kUnreachable);
    t.pred_.assign(n, 0);

    using Entry = std::pair<std::int64_t, std::int64_t>;  // (distance, residue)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    t.min_rep_[0] = 0;
    queue.emplace(0, 0);
    std::vector<bool> done(n, false);
    while (!queue.empty()) {
        auto [dist, r] = queue.top();
        queue.pop();
        auto ru = static_cast<std::size_t>(r);
        if (done[ru]) continue;
        done[ru] = true;
        for (std::size_t j = 1; j < k.size(); ++j) {
            const std::int64_t step = k[j];
            if (step % mod == 0) continue;
            assert(dist <= std::numeric_limits<std::int64_t>::max() - step);
            const std::int64_t nd = dist + step;
            const auto nr = static_cast<std::size_t>((r + step) % mod);
            auto& cur = t.min_rep_[nr];
            if (cur == ResidueTable::kUnreachable || nd < cur) {
                cur = nd;
                t.pred_[nr] = j;
                queue.emplace(nd, static_cast<std::int64_t>(nr));
            }
        }
    }
    return t;
}

inline bool is_representable(const ResidueTable& t, std::int64_t n) {
    detail::require(n >= 0, "n must be non-negative");
    return t.contains(n);
}

struct FrobeniusResult {
    /// Largest non-representable integer; -1 when everything is representable.
    /// Empty when infinitely many integers are non-representable (gcd > 1).
    std::optional<std::int64_t> value;
    std::int64_t gcd = 1;
    /// Largest non-representable multiple of gcd (equals value when gcd == 1).
    std::int64_t restricted = -1;
};

inline FrobeniusResult frobenius_number(const ResidueTable& t) {
    FrobeniusResult res;
    res.gcd = t.denominations().gcd();
    std::int64_t top = 0;
    bool all = true;
    for (auto v : t.raw()) {
        if (v == ResidueTable::kUnreachable) {
            all = false;
            continue;
        }
        top = std::max(top, v);
    }
    res.restricted = top - t.modulus();
    if (all) res.value = res.restricted;
    return res;
}

/// Non-negative coefficients (aligned with the sorted denominations) summing to n.
inline std::optional<std::vector<std::int64_t>> representation_witness(const ResidueTable& t, std::int64_t n) {
    detail::require(n >= 0, "n must be non-negative");
    if (!t.contains(n)) return std::nullopt;
    const auto& k = t.denominations();
    const std::int64_t mod = t.modulus();
    std::vector<std::int64_t> coeff(k.size(), 0);
    std::int64_t r = n % mod;
    std::int64_t rest = n - *t.min_rep(r);
    while (r != 0) {
        auto j = t.predecessor(r);
        ++coeff[j];
        r = ((r - k[j]) % mod + mod) % mod;
    }
    coeff[0] += rest / mod;
    return coeff;
}

inline std::optional<std::vector<std::int64_t>> representation_witness(const DenominationVector& k, std::int64_t n) {
    return representation_witness(build_residue_table(k), n);
}

inline constexpr std::int64_t kBruteRepLimit = 50'000'000;

/// Reachability DP over 0..n_max: entry v is 1 iff v is representable.
inline std::vector<char> brute_rep_table(const DenominationVector& k, std::int64_t n_max,
                                         std::int64_t limit = kBruteRepLimit) {
    detail::require(n_max >= 0, "n must be non-negative");
    if (n_max > limit) throw resource_bound("brute_rep: n exceeds the configured limit");
    std::vector<char> reach(static_cast<std::size_t>(n_max) + 1, 0);
    reach[0] = 1;
    for (std::int64_t v = 1; v <= n_max; ++v) {
        for (auto c : k.values()) {
            if (c <= v && reach[static_cast<std::size_t>(v - c)]) {
                reach[static_cast<std::size_t>(v)] = 1;
                break;
            }
        }
    }
    return reach;
}

/// Independent oracle for is_representable.
inline bool brute_rep(const DenominationVector& k, std::int64_t n, std::int64_t limit = kBruteRepLimit) {
    return brute_rep_table(k, n, limit).back() != 0;
}

}  // namespace cubeline
