#pragma once

/**
 * @file cli.hpp
 * @brief The cubeline command line, callable in-process for tests.
 *
 * Exit codes: 0 verified / no counterexample, 1 counterexample found,
 * 2 usage or input error, 3 resource bound exceeded.
 */

#include <algorithm>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubeline/cubeline.hpp"

namespace cubeline::cli {

enum ExitCode : int { kOk = 0, kCounterexample = 1, kUsage = 2, kResource = 3 };

using nlohmann::json;

namespace detail {

inline std::string tuple_text(std::span<const std::int64_t> v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

inline std::string cell_text(const Cell& c) {
    std::vector<std::int64_t> v(c.begin(), c.end());
    return tuple_text(v);
}

inline std::string rational_text(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline std::string point_text(const RationalPoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.dim(); ++i) s += (i ? "," : "") + rational_text(p.coords[i]);
    return s + ")";
}

inline std::string line_text(const Line& l) {
    std::ostringstream os;
    os << "direction " << l.axis + 1 << " through " << cell_text(l.base);
    return os.str();
}

/// Witness coefficients in the caller's denomination order.
inline std::vector<std::int64_t> witness_in_input_order(const std::vector<std::int64_t>& input,
                                                        const DenominationVector& k,
                                                        const std::vector<std::int64_t>& sorted_coeff) {
    std::vector<std::int64_t> out(input.size(), 0);
    std::vector<char> taken(input.size(), 0);
    for (std::size_t j = 0; j < k.size(); ++j) {
        for (std::size_t i = 0; i < input.size(); ++i) {
            if (!taken[i] && input[i] == k[j]) {
                taken[i] = 1;
                out[i] = sorted_coeff[j];
                break;
            }
        }
    }
    return out;
}

inline BoxDims box_from_sides(const std::vector<std::int64_t>& k) {
    std::vector<int> sides;
    for (auto s : k) {
        if (s < 2 || s > 1'000'000) cubeline::detail::fail_input("box sides must lie in 2..1000000");
        sides.push_back(static_cast<int>(s));
    }
    return BoxDims(std::move(sides));
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

inline json component_json(const SimpleComponent& c, const TorusTiling& t, const ResidueTable& table) {
    json members = json::array();
    for (auto i : c.members) members.push_back(io::point_json(t.points[i]));
    json codes = json::array();
    for (const auto& x : c.code_set.cells()) codes.push_back(x);
    return {{"fractional_part", io::point_json(c.representative)},
            {"size", c.size()},
            {"members", members},
            {"codes", codes},
            {"complementable", is_complementable_by_lines(t.dims, c.code_set)},
            {"size_representable", table.contains(static_cast<std::int64_t>(c.size()))}};
}

/// Forward theorem, Keller bijection and component sizes for a valid tiling.
struct TilingAudit {
    bool keller = true;
    bool forward = true;
    bool sizes = true;
    [[nodiscard]] bool ok() const { return keller && forward && sizes; }
};

inline TilingAudit audit(const TorusTiling& t, const ResidueTable& table) {
    TilingAudit a;
    a.keller = keller_check(t);
    a.forward = check_theorem_forward(t);
    a.sizes = component_size_representable(t, table).ok();
    return a;
}

inline std::atomic<bool>& interrupted() {
    static std::atomic<bool> flag{false};
    return flag;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    // Accept "tiling build ..." as an alias of "tiling-build ...".
    if (args.size() >= 2 && args[0] == "tiling") {
        static const std::vector<std::string> subs{"build", "verify", "components", "search"};
        if (std::find(subs.begin(), subs.end(), args[1]) != subs.end()) {
            args[1] = "tiling-" + args[1];
            args.erase(args.begin());
        }
    }

    CLI::App app{"cubeline: line-complementable sets, coin representability and torus cube tilings"};
    app.name("cubeline");
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit JSON instead of text");

    std::vector<std::int64_t> k;
    std::int64_t n = 0;
    auto add_k = [&](CLI::App* s) { s->add_option("--k", k, "comma-separated integers")->delimiter(',')->required(); };

    auto* rep = app.add_subcommand("rep", "decide whether n is representable by k");
    add_k(rep);
    rep->add_option("--n", n, "non-negative integer")->required()->check(CLI::NonNegativeNumber);

    auto* frob = app.add_subcommand("frobenius", "largest non-representable integer");
    add_k(frob);

    SweepRange range;
    std::int64_t k1f = 0, k2f = 0;
    std::string checkpoint;
    bool resume_flag = false;
    int checkpoint_every = 1;
    auto* sw = app.add_subcommand("sweep3", "verify the d=3 corner values over a range of triples");
    sw->add_option("--max-k3", range.k3_max, "largest k3")->required()->check(CLI::NonNegativeNumber);
    sw->add_option("--min-k3", range.k3_min, "smallest k3")->check(CLI::NonNegativeNumber);
    sw->add_option("--k1", k1f, "only this k1");
    sw->add_option("--k2", k2f, "only this k2");
    sw->add_option("--workers", range.workers, "worker threads")->check(CLI::Range(1, 1024));
    sw->add_option("--checkpoint", checkpoint, "checkpoint file");
    sw->add_flag("--resume", resume_flag, "continue from --checkpoint");
    sw->add_option("--checkpoint-every", checkpoint_every, "k3 blocks between checkpoints")->check(CLI::Range(1, 1 << 20));
    sw->add_flag("--prune", range.prune, "settle rows above the largest table threshold without queries");
    sw->add_flag("--extended", range.extended, "allow k3 beyond desk scale (long-running, implies --prune)");

    std::string file;
    auto* dec = app.add_subcommand("decompose", "decide whether D is complementable by lines");
    dec->add_option("--file", file, "box/subset JSON")->required();

    std::int64_t volume_limit = 4096;
    std::string route = "auto";
    bool list = false;
    auto* en = app.add_subcommand("enumerate", "check every achievable |D| of a box");
    add_k(en);
    en->add_option("--volume-limit", volume_limit, "largest box volume")->check(CLI::PositiveNumber);
    en->add_option("--route", route, "auto, m-vectors or grouped")
        ->check(CLI::IsMember({"auto", "m-vectors", "grouped"}));
    en->add_flag("--list", list, "list maximal achievable m-vectors");

    std::string out_path;
    auto* tb = app.add_subcommand("tiling-build", "torus tiling whose integer-point component codes D");
    tb->add_option("--file", file, "box/subset JSON (optional \"lines\" decomposition)")->required();
    tb->add_option("--out", out_path, "write the tiling JSON here");

    auto* tv = app.add_subcommand("tiling-verify", "validate a tiling and audit its components");
    tv->add_option("--file", file, "tiling JSON")->required();

    auto* tc = app.add_subcommand("tiling-components", "list simple components");
    tc->add_option("--file", file, "tiling JSON")->required();

    int refine = 1;
    std::int64_t limit = 0;
    bool dedupe = false;
    std::int64_t fine_limit = kMaxFineCells;
    auto* ts = app.add_subcommand("tiling-search", "enumerate tilings on the (1/q)-grid and audit each");
    add_k(ts);
    ts->add_option("--refine", refine, "grid refinement q")->check(CLI::Range(1, 64));
    ts->add_option("--limit", limit, "stop after this many tilings (0 = all)")->check(CLI::NonNegativeNumber);
    ts->add_option("--volume-limit", fine_limit, "largest number of fine cells")->check(CLI::PositiveNumber);
    ts->add_flag("--dedupe", dedupe, "keep one tiling per translation class");
    ts->add_flag("--list", list, "print every tiling");

    // The flag is accepted before or after the subcommand.
    for (auto* s : {rep, frob, sw, dec, en, tb, tv, tc, ts}) s->add_flag("--json", as_json, "emit JSON");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (rep->parsed()) {
            DenominationVector denoms(k);
            const auto table = build_residue_table(denoms);
            const bool yes = is_representable(table, n);
            std::vector<std::int64_t> w;
            if (yes) w = detail::witness_in_input_order(k, denoms, *representation_witness(table, n));
            if (as_json) {
                json j{{"k", k}, {"n", n}, {"representable", yes}};
                j["witness"] = yes ? json(w) : json(nullptr);
                detail::emit(out, j);
            } else {
                out << "n=" << n << " k=" << detail::tuple_text(k) << ": ";
                if (yes)
                    out << "representable, witness " << detail::tuple_text(w) << '\n';
                else
                    out << "not representable\n";
            }
            return kOk;
        }
        if (frob->parsed()) {
            const auto res = frobenius_number(build_residue_table(DenominationVector(k)));
            if (as_json) {
                json j{{"k", k}, {"gcd", res.gcd}, {"restricted", res.restricted}};
                j["frobenius"] = res.value ? json(*res.value) : json(nullptr);
                detail::emit(out, j);
            } else if (res.value) {
                out << "frobenius number of " << detail::tuple_text(k) << ": " << *res.value << '\n';
            } else {
                out << "frobenius number of " << detail::tuple_text(k) << ": none (gcd " << res.gcd
                    << "); largest non-representable multiple of " << res.gcd << ": " << res.restricted << '\n';
            }
            return kOk;
        }
        if (sw->parsed()) {
            if (sw->count("--k1")) range.k1 = k1f;
            if (sw->count("--k2")) range.k2 = k2f;
            range.validate();
            if (resume_flag && checkpoint.empty()) cubeline::detail::fail_input("--resume needs --checkpoint");
            SweepOptions opt;
            if (!checkpoint.empty()) opt.checkpoint_path = checkpoint;
            opt.checkpoint_every = checkpoint_every;
            opt.cancel = &detail::interrupted();
            SweepReport r;
            if (resume_flag) {
                r = resume(load_checkpoint(checkpoint), range, opt);
            } else {
                r = sweep(range, opt);
            }
            if (as_json)
                detail::emit(out, to_json(r));
            else
                out << to_text(r);
            err << "wall time: " << std::fixed << std::setprecision(3) << r.wall_time << " s\n";
            if (!r.counterexamples.empty()) return kCounterexample;
            return kOk;
        }
        if (dec->parsed()) {
            const auto input = io::read_json_file(file);
            const auto s = io::subset_from_json(input);
            const auto witness = complement_witness(s.box, s.cells);
            const auto size = static_cast<std::int64_t>(s.cells.size());
            const auto table = build_residue_table(denominations_of(s.box));
            const bool representable = table.contains(size);
            if (as_json) {
                json j{{"k", io::box_json(s.box)}, {"size", size}, {"complementable", witness.has_value()}};
                j["lines"] = witness ? io::decomposition_json(*witness) : json(nullptr);
                j["size_representable"] = representable;
                detail::emit(out, j);
            } else if (witness) {
                out << "complementable by lines: " << witness->lines.size() << " lines, |D| = " << size
                    << (representable ? " (representable)" : " (NOT representable: counterexample)") << '\n';
                for (const auto& l : witness->lines) out << "  " << detail::line_text(l) << '\n';
            } else {
                out << "not complementable by lines (|D| = " << size << ")\n";
            }
            return witness && !representable ? kCounterexample : kOk;
        }
        if (en->parsed()) {
            const auto box = detail::box_from_sides(k);
            EnumerationLimits lim;
            lim.volume_limit = volume_limit;
            const auto r = route == "grouped"     ? ConjectureRoute::grouped
                           : route == "m-vectors" ? ConjectureRoute::m_vectors
                                                  : ConjectureRoute::automatic;
            const auto report = check_conjecture_box(box, build_residue_table(denominations_of(box)), lim, r);
            std::vector<MVector> maximal;
            if (list && report.route == "m-vectors") maximal = achievable_m_vectors(box, lim).maximal();
            if (as_json) {
                json v = json::array();
                for (const auto& x : report.violations) v.push_back({{"m", io::mvector_json(x.m)}, {"size", x.size}});
                json j{{"k", io::box_json(box)},
                       {"route", report.route},
                       {"vectors_checked", report.vectors_checked},
                       {"sizes", report.sizes},
                       {"violations", v}};
                if (list) {
                    json m = json::array();
                    for (const auto& x : maximal) m.push_back(io::mvector_json(x));
                    j["maximal"] = m;
                }
                detail::emit(out, j);
            } else {
                out << "box " << detail::tuple_text(k) << " (" << report.route << "): " << report.vectors_checked
                    << " vectors, " << report.sizes.size() << " distinct sizes, " << report.violations.size()
                    << " violations\n";
                for (const auto& x : report.violations)
                    out << "  violation m=" << detail::tuple_text(x.m.counts) << " |D|=" << x.size << '\n';
                for (const auto& x : maximal) out << "  maximal " << detail::tuple_text(x.counts) << '\n';
            }
            return report.ok() ? kOk : kCounterexample;
        }
        if (tb->parsed()) {
            const auto input = io::read_json_file(file);
            const auto s = io::subset_from_json(input);
            std::optional<LineDecomposition> d;
            if (input.contains("lines")) {
                d = io::decomposition_from_json(s.box, input.at("lines"));
            } else {
                d = complement_witness(s.box, s.cells);
                if (!d) cubeline::detail::fail_input("D is not complementable by lines; no tiling to build");
            }
            const auto t = build_tiling_from_decomposition(s.box, s.cells, *d);
            const auto tj = io::tiling_json(t);
            if (!out_path.empty()) io::write_json_file(out_path, tj);
            const bool valid = validate_tiling(t).ok && keller_check(t);
            const bool codes = origin_component(t).code_set == s.cells;
            if (as_json) {
                json j{{"tiling", tj}, {"valid", valid}, {"origin_component_codes_match", codes}};
                detail::emit(out, j);
            } else {
                out << "built tiling with " << t.points.size() << " cubes from " << d->lines.size() << " lines; "
                    << (valid ? "valid" : "INVALID") << ", integer-point component codes "
                    << (codes ? "equal D" : "DIFFER from D") << '\n';
                if (out_path.empty())
                    for (const auto& p : t.points) out << "  " << detail::point_text(p) << '\n';
            }
            return valid && codes ? kOk : kCounterexample;
        }
        if (tv->parsed() || tc->parsed()) {
            const auto t = io::tiling_from_json(io::read_json_file(file));
            const auto check = validate_tiling(t);
            if (!check.ok) {
                if (as_json) {
                    json j{{"valid", false}, {"message", check.message}};
                    detail::emit(out, j);
                } else {
                    out << "not a tiling: " << check.message << '\n';
                }
                return kUsage;
            }
            const auto table = build_residue_table(denominations_of(t.dims));
            const auto a = detail::audit(t, table);
            const auto comps = simple_components(t);
            if (as_json) {
                json j{{"valid", true}, {"keller", a.keller}, {"forward", a.forward}, {"sizes_representable", a.sizes}};
                j["components"] = comps.size();
                if (tc->parsed()) {
                    json cs = json::array();
                    for (const auto& c : comps) cs.push_back(detail::component_json(c, t, table));
                    j["components"] = cs;
                }
                detail::emit(out, j);
            } else {
                out << "valid tiling of " << t.points.size() << " cubes, " << comps.size() << " simple components; keller "
                    << (a.keller ? "ok" : "FAILED") << ", forward direction " << (a.forward ? "ok" : "FAILED")
                    << ", component sizes " << (a.sizes ? "representable" : "NOT representable") << '\n';
                if (tc->parsed()) {
                    for (const auto& c : comps) {
                        out << "  component frac " << detail::point_text(c.representative) << ": size " << c.size()
                            << ", codes";
                        for (const auto& x : c.code_set.cells()) out << ' ' << detail::cell_text(x);
                        out << '\n';
                    }
                }
            }
            return a.ok() ? kOk : kCounterexample;
        }
        if (ts->parsed()) {
            const auto box = detail::box_from_sides(k);
            const auto table = build_residue_table(denominations_of(box));
            std::uint64_t seen = 0, failures = 0;
            std::vector<std::vector<RationalPoint>> classes;
            json listed = json::array();
            enumerate_grid_tilings(box, refine, [&](const TorusTiling& t) {
                if (dedupe) {
                    auto key = translation_canonical_form(t);
                    if (std::find(classes.begin(), classes.end(), key) != classes.end()) return true;
                    classes.push_back(std::move(key));
                }
                ++seen;
                const bool ok = validate_tiling(t).ok && detail::audit(t, table).ok();
                if (!ok) ++failures;
                if (list || !ok) {
                    if (as_json) {
                        auto j = io::tiling_json(t);
                        j["ok"] = ok;
                        listed.push_back(j);
                    } else {
                        out << (ok ? "  tiling" : "  FAILING tiling");
                        for (const auto& p : t.points) out << ' ' << detail::point_text(p);
                        out << '\n';
                    }
                }
                return limit == 0 || seen < static_cast<std::uint64_t>(limit);
            }, fine_limit);
            if (as_json) {
                json j{{"k", io::box_json(box)}, {"refine", refine}, {"tilings", seen}, {"failures", failures},
                       {"deduplicated", dedupe}};
                if (list || failures) j["listed"] = listed;
                detail::emit(out, j);
            } else {
                out << "k=" << detail::tuple_text(k) << " q=" << refine << ": " << seen << " tilings"
                    << (dedupe ? " up to translation" : "") << ", " << failures << " failures\n";
            }
            return failures ? kCounterexample : kOk;
        }
    } catch (const resource_bound& e) {
        err << "resource bound: " << e.what() << '\n';
        return kResource;
    } catch (const checkpoint_error& e) {
        err << "checkpoint error: " << e.what() << '\n';
        return kUsage;
    } catch (const invalid_input& e) {
        err << "input error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace cubeline::cli
