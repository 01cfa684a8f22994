#pragma once

/**
 * @file sweep3.hpp
 * @brief Exhaustive d = 3 sweep: representability of
 *        l1 l2 l3 + (k1 - l1)(k2 - l2)(k3 - l3) by (k1, k2, k3).
 *
 * Triples 1 < k1 < k2 < k3 are visited k3-major (then k2, then k1); this is
 * the canonical order for checkpoints and for merging worker results. Within
 * a triple only one of l and k - l is tested, since both give the same value.
 */

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cubeline/error.hpp"
#include "cubeline/semigroup.hpp"

namespace cubeline {

struct Triple {
    std::int64_t k1 = 0, k2 = 0, k3 = 0;

    friend bool operator==(const Triple&, const Triple&) = default;
    /// Canonical order: k3, then k2, then k1.
    friend auto operator<=>(const Triple& a, const Triple& b) {
        if (auto c = a.k3 <=> b.k3; c != 0) return c;
        if (auto c = a.k2 <=> b.k2; c != 0) return c;
        return a.k1 <=> b.k1;
    }
};

struct CornerParams {
    std::int64_t l1 = 0, l2 = 0, l3 = 0;
    friend bool operator==(const CornerParams&, const CornerParams&) = default;
};

inline std::int64_t n_value(const Triple& k, const CornerParams& l) {
    auto in = [](std::int64_t li, std::int64_t ki) { return li >= 1 && li <= ki - 1; };
    if (!in(l.l1, k.k1) || !in(l.l2, k.k2) || !in(l.l3, k.k3)) detail::fail_input("corner parameters out of range");
    return l.l1 * l.l2 * l.l3 + (k.k1 - l.l1) * (k.k2 - l.l2) * (k.k3 - l.l3);
}

/// Tuples tested per triple after the l <-> k - l halving.
inline std::uint64_t tuples_per_triple(const Triple& k) {
    const auto total = static_cast<std::uint64_t>((k.k1 - 1) * (k.k2 - 1) * (k.k3 - 1));
    return (total + 1) / 2;
}

/// Largest k3 accepted without the extended flag.
inline constexpr std::int64_t kDeskMaxK3 = 200;

struct SweepRange {
    std::int64_t k3_max = 0;
    std::int64_t k3_min = 4;
    std::optional<std::int64_t> k1;
    std::optional<std::int64_t> k2;
    /// Skip rows and triples whose smallest value already exceeds every
    /// table threshold (such values are all representable).
    bool prune = false;
    /// Long-running mode for k3 beyond desk scale; forces pruning.
    bool extended = false;
    /// Affects wall time only.
    int workers = 1;

    /// Content-relevant fields only (workers excluded).
    [[nodiscard]] bool same_work(const SweepRange& o) const {
        return k3_max == o.k3_max && first_k3() == o.first_k3() && k1 == o.k1 && k2 == o.k2 && effective_prune() == o.effective_prune();
    }
    [[nodiscard]] bool effective_prune() const noexcept { return prune || extended; }

    void validate() const {
        if (k3_max < 0) detail::fail_input("k3 maximum must be non-negative");
        if (k3_min < 0) detail::fail_input("k3 minimum must be non-negative");
        if (workers < 1 || workers > 1024) detail::fail_input("worker count must be in 1..1024");
        if (k1 && *k1 < 2) detail::fail_input("k1 filter must be at least 2");
        if (k2 && *k2 < 3) detail::fail_input("k2 filter must be at least 3");
        if (k1 && k2 && *k1 >= *k2) detail::fail_input("k1 filter must be below the k2 filter");
        if (k3_max > kDeskMaxK3 && !extended)
            detail::fail_input("k3 above " + std::to_string(kDeskMaxK3) + " requires the extended (long-running) mode");
        if (k3_max > 2'000'000) detail::fail_input("k3 maximum too large for 64-bit values");
    }

    template <class F>
    void for_each_triple_in_block(std::int64_t k3, F&& f) const {
        for (std::int64_t k2v = 3; k2v < k3; ++k2v) {
            if (k2 && *k2 != k2v) continue;
            for (std::int64_t k1v = 2; k1v < k2v; ++k1v) {
                if (k1 && *k1 != k1v) continue;
                f(Triple{k1v, k2v, k3});
            }
        }
    }
    [[nodiscard]] std::int64_t first_k3() const { return std::max<std::int64_t>(k3_min, 4); }
};

struct Counterexample {
    Triple k;
    CornerParams l;
    std::int64_t n = 0;
    friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct SweepCounters {
    std::uint64_t triples_checked = 0;
    std::uint64_t tuples_checked = 0;
    /// Tuples settled by the threshold bound rather than a table query.
    std::uint64_t tuples_pruned = 0;
    friend bool operator==(const SweepCounters&, const SweepCounters&) = default;
};

struct SweepReport {
    SweepRange range;
    SweepCounters counters;
    std::vector<Counterexample> counterexamples;
    std::optional<Triple> last_triple;
    /// False when stopped early (cancel or stop_after).
    bool complete = true;
    double wall_time = 0.0;

    [[nodiscard]] bool verified() const noexcept { return complete && counterexamples.empty(); }
};

struct Checkpoint {
    static constexpr int kVersion = 1;
    int version = kVersion;
    SweepRange range;
    std::optional<Triple> last_triple;
    SweepCounters counters;
    std::vector<Counterexample> counterexamples;
};

struct TripleResult {
    std::uint64_t tuples = 0;
    std::uint64_t pruned = 0;
    std::vector<Counterexample> failures;
};

/// Tests every l for one triple (half of the l-box, see file comment)
/// against the given table, whose modulus must be k1.
inline TripleResult check_triple(const Triple& k, const ResidueTable& table, bool prune) {
    if (!(1 < k.k1 && k.k1 < k.k2 && k.k2 < k.k3)) detail::fail_input("triple must satisfy 1 < k1 < k2 < k3");
    if (table.modulus() != k.k1) detail::fail_input("residue table modulus must equal k1");
    TripleResult res;
    const std::int64_t mod = k.k1;
    constexpr auto inf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> thr(static_cast<std::size_t>(mod));
    std::int64_t top = 0;
    for (std::int64_t r = 0; r < mod; ++r) {
        const auto v = table.raw()[static_cast<std::size_t>(r)];
        thr[static_cast<std::size_t>(r)] = v == ResidueTable::kUnreachable ? inf : v;
        top = std::max(top, thr[static_cast<std::size_t>(r)]);
    }
    const auto per_triple = tuples_per_triple(k);
    if (prune) {
        // n is multilinear in l, so its minimum over the l-box sits at a corner.
        std::int64_t lo = inf;
        for (auto l1 : {std::int64_t{1}, k.k1 - 1})
            for (auto l2 : {std::int64_t{1}, k.k2 - 1})
                for (auto l3 : {std::int64_t{1}, k.k3 - 1})
                    lo = std::min(lo, n_value(k, {l1, l2, l3}));
        if (top != inf && lo >= top) {
            res.tuples = res.pruned = per_triple;
            return res;
        }
    }

    const std::int64_t* t = thr.data();
    auto scan_row = [&](std::int64_t l2, std::int64_t l3, std::int64_t l1_hi) {
        const std::int64_t a = (k.k2 - l2) * (k.k3 - l3);
        const std::int64_t step = l2 * l3 - a;
        const std::int64_t base = mod * a;
        res.tuples += static_cast<std::uint64_t>(l1_hi);
        if (prune && top != inf && std::min(base + step, base + l1_hi * step) >= top) {
            res.pruned += static_cast<std::uint64_t>(l1_hi);
            return;
        }
        const std::int64_t sm = ((step % mod) + mod) % mod;
        std::int64_t n = base + step;
        std::int64_t r = sm;
        bool bad = false;
        for (std::int64_t l1 = 1; l1 <= l1_hi; ++l1) {
            bad |= n < t[r];
            n += step;
            r += sm;
            if (r >= mod) r -= mod;
        }
        if (!bad) return;
        for (std::int64_t l1 = 1; l1 <= l1_hi; ++l1) {
            const CornerParams l{l1, l2, l3};
            const auto v = n_value(k, l);
            if (!table.contains(v)) res.failures.push_back({k, l, v});
        }
    };

    for (std::int64_t l3 = 1; 2 * l3 <= k.k3; ++l3) {
        if (2 * l3 < k.k3) {
            for (std::int64_t l2 = 1; l2 < k.k2; ++l2) scan_row(l2, l3, k.k1 - 1);
            continue;
        }
        for (std::int64_t l2 = 1; 2 * l2 <= k.k2; ++l2) scan_row(l2, l3, 2 * l2 < k.k2 ? k.k1 - 1 : k.k1 / 2);
    }
    if (res.tuples != per_triple) throw std::logic_error("sweep3: tuple accounting mismatch");
    return res;
}

inline TripleResult check_triple(const Triple& k, bool prune) {
    if (!(1 < k.k1 && k.k1 < k.k2 && k.k2 < k.k3)) detail::fail_input("triple must satisfy 1 < k1 < k2 < k3");
    return check_triple(k, build_residue_table(DenominationVector{k.k1, k.k2, k.k3}), prune);
}

// JSON --------------------------------------------------------------------

inline nlohmann::json triple_json(const Triple& t) { return nlohmann::json::array({t.k1, t.k2, t.k3}); }

inline Triple triple_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw checkpoint_error("triple must be a 3-element array");
    return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>(), j.at(2).get<std::int64_t>()};
}

inline nlohmann::json range_json(const SweepRange& r) {
    nlohmann::json j;
    j["k3_min"] = r.first_k3();
    j["k3_max"] = r.k3_max;
    j["k1"] = r.k1 ? nlohmann::json(*r.k1) : nlohmann::json(nullptr);
    j["k2"] = r.k2 ? nlohmann::json(*r.k2) : nlohmann::json(nullptr);
    j["prune"] = r.effective_prune();
    return j;
}

inline nlohmann::json counters_json(const SweepCounters& c) {
    return {{"triples_checked", c.triples_checked},
            {"tuples_checked", c.tuples_checked},
            {"tuples_pruned", c.tuples_pruned}};
}

inline nlohmann::json counterexamples_json(const std::vector<Counterexample>& v) {
    auto a = nlohmann::json::array();
    for (const auto& c : v)
        a.push_back({{"k", triple_json(c.k)}, {"l", {c.l.l1, c.l.l2, c.l.l3}}, {"n", c.n}});
    return a;
}

/// Deterministic report (no timing unless asked for).
inline nlohmann::json to_json(const SweepReport& r, bool with_time = false) {
    nlohmann::json j;
    j["range"] = range_json(r.range);
    j["counters"] = counters_json(r.counters);
    j["counterexamples"] = counterexamples_json(r.counterexamples);
    j["complete"] = r.complete;
    j["last_triple"] = r.last_triple ? triple_json(*r.last_triple) : nlohmann::json(nullptr);
    if (with_time) j["wall_time"] = r.wall_time;
    return j;
}

inline std::string to_text(const SweepReport& r) {
    std::ostringstream os;
    os << "sweep3 k3 in [" << r.range.first_k3() << ", " << r.range.k3_max << "]";
    if (r.range.k1) os << " k1=" << *r.range.k1;
    if (r.range.k2) os << " k2=" << *r.range.k2;
    os << ": " << r.counters.triples_checked << " triples, " << r.counterexamples.size() << " counterexamples ("
       << r.counters.tuples_checked << " tuples";
    if (r.counters.tuples_pruned) os << ", " << r.counters.tuples_pruned << " settled by the threshold bound";
    os << ')';
    if (!r.complete) os << " (incomplete)";
    os << '\n';
    for (const auto& c : r.counterexamples)
        os << "  counterexample k=(" << c.k.k1 << ',' << c.k.k2 << ',' << c.k.k3 << ") l=(" << c.l.l1 << ','
           << c.l.l2 << ',' << c.l.l3 << ") n=" << c.n << " is not representable\n";
    return os.str();
}

inline nlohmann::json to_json(const Checkpoint& c) {
    nlohmann::json j;
    j["version"] = c.version;
    j["range"] = range_json(c.range);
    j["last_triple"] = c.last_triple ? triple_json(*c.last_triple) : nlohmann::json(nullptr);
    j["counters"] = counters_json(c.counters);
    j["counterexamples"] = counterexamples_json(c.counterexamples);
    return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    try {
        Checkpoint c;
        c.version = j.at("version").get<int>();
        if (c.version != Checkpoint::kVersion)
            throw checkpoint_error("unsupported checkpoint version " + std::to_string(c.version));
        const auto& r = j.at("range");
        c.range.k3_min = r.at("k3_min").get<std::int64_t>();
        c.range.k3_max = r.at("k3_max").get<std::int64_t>();
        if (!r.at("k1").is_null()) c.range.k1 = r.at("k1").get<std::int64_t>();
        if (!r.at("k2").is_null()) c.range.k2 = r.at("k2").get<std::int64_t>();
        c.range.prune = r.at("prune").get<bool>();
        if (!j.at("last_triple").is_null()) c.last_triple = triple_from_json(j.at("last_triple"));
        const auto& k = j.at("counters");
        c.counters.triples_checked = k.at("triples_checked").get<std::uint64_t>();
        c.counters.tuples_checked = k.at("tuples_checked").get<std::uint64_t>();
        c.counters.tuples_pruned = k.at("tuples_pruned").get<std::uint64_t>();
        for (const auto& e : j.at("counterexamples")) {
            Counterexample ce;
            ce.k = triple_from_json(e.at("k"));
            const auto& l = e.at("l");
            if (!l.is_array() || l.size() != 3) throw checkpoint_error("corner parameters must have 3 entries");
            ce.l = {l.at(0).get<std::int64_t>(), l.at(1).get<std::int64_t>(), l.at(2).get<std::int64_t>()};
            ce.n = e.at("n").get<std::int64_t>();
            c.counterexamples.push_back(ce);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw checkpoint_error(std::string("malformed checkpoint: ") + e.what());
    }
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw checkpoint_error("cannot open checkpoint " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw checkpoint_error("corrupted checkpoint " + path.string() + ": " + e.what());
    }
    return checkpoint_from_json(j);
}

/// Write-then-rename so an interrupted write never leaves a torn file.
inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
        out << to_json(c).dump(2) << '\n';
        if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

// Driver ------------------------------------------------------------------

struct SweepOptions {
    std::optional<std::filesystem::path> checkpoint_path;
    /// Completed k3 blocks between checkpoint writes.
    int checkpoint_every = 1;
    /// Stop (with a checkpoint) right after this triple.
    std::optional<Triple> stop_after;
    /// Polled between k3 blocks.
    const std::atomic<bool>* cancel = nullptr;
};

namespace detail {

inline Checkpoint snapshot(const SweepReport& r) {
    Checkpoint c;
    c.range = r.range;
    c.last_triple = r.last_triple;
    c.counters = r.counters;
    c.counterexamples = r.counterexamples;
    return c;
}

inline SweepReport run_sweep(SweepReport rep, const SweepOptions& opt) {
    const auto& range = rep.range;
    range.validate();
    const bool prune = range.effective_prune();
    const auto start = std::chrono::steady_clock::now();
    int blocks_since_save = 0;
    auto save = [&] {
        if (opt.checkpoint_path) save_checkpoint(*opt.checkpoint_path, snapshot(rep));
        blocks_since_save = 0;
    };

    std::vector<Triple> work;
    std::vector<TripleResult> results;
    bool stopped = false;
    for (std::int64_t k3 = range.first_k3(); k3 <= range.k3_max && !stopped; ++k3) {
        if (opt.cancel && opt.cancel->load()) {
            rep.complete = false;
            break;
        }
        work.clear();
        range.for_each_triple_in_block(k3, [&](const Triple& t) {
            if (rep.last_triple && t <= *rep.last_triple) return;
            if (opt.stop_after && t > *opt.stop_after) {
                stopped = true;
                return;
            }
            work.push_back(t);
        });
        if (work.empty() && !stopped) continue;

        results.assign(work.size(), {});
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (auto i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1)) results[i] = check_triple(work[i], prune);
        };
        const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(range.workers), work.size());
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        }
        for (std::size_t i = 0; i < work.size(); ++i) {
            rep.counters.triples_checked += 1;
            rep.counters.tuples_checked += results[i].tuples;
            rep.counters.tuples_pruned += results[i].pruned;
            rep.counterexamples.insert(rep.counterexamples.end(), results[i].failures.begin(), results[i].failures.end());
            rep.last_triple = work[i];
        }
        if (stopped) {
            rep.complete = false;
            save();
            break;
        }
        if (++blocks_since_save >= std::max(1, opt.checkpoint_every)) save();
    }
    if (!rep.complete && !stopped) save();
    if (rep.complete && blocks_since_save > 0) save();
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace detail

inline SweepReport sweep(const SweepRange& range, const SweepOptions& opt = {}) {
    SweepReport rep;
    rep.range = range;
    return detail::run_sweep(std::move(rep), opt);
}

/// Continues after the checkpointed triple; the final report equals that of
/// an uninterrupted run over the same range.
inline SweepReport resume(const Checkpoint& c, const SweepRange& range, const SweepOptions& opt = {}) {
    if (c.version != Checkpoint::kVersion) throw checkpoint_error("checkpoint version mismatch");
    if (!c.range.same_work(range)) throw checkpoint_error("checkpoint was written for a different sweep range");
    if (c.last_triple) {
        const auto& t = *c.last_triple;
        bool member = 1 < t.k1 && t.k1 < t.k2 && t.k2 < t.k3 && t.k3 >= range.first_k3() && t.k3 <= range.k3_max &&
                      (!range.k1 || *range.k1 == t.k1) && (!range.k2 || *range.k2 == t.k2);
        if (!member) throw checkpoint_error("checkpoint triple lies outside the sweep range");
    }
    SweepReport rep;
    rep.range = range;
    rep.last_triple = c.last_triple;
    rep.counters = c.counters;
    rep.counterexamples = c.counterexamples;
    return detail::run_sweep(std::move(rep), opt);
}

}  // namespace cubeline
