#include <gtest/gtest.h>

#include <algorithm>

#include "cubeline/torus.hpp"
#include "oracles.hpp"

using namespace cubeline;

namespace cubeline {
void PrintTo(const RationalPoint& p, std::ostream* os) {
    *os << '(';
    for (std::size_t i = 0; i < p.dim(); ++i) *os << (i ? "," : "") << p.coords[i];
    *os << ')';
}
}  // namespace cubeline

namespace {

std::vector<RationalPoint> sorted_points(TorusTiling t) {
    std::sort(t.points.begin(), t.points.end());
    return t.points;
}

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

RationalPoint P(std::vector<Rational> c) { return RationalPoint(std::move(c)); }

TorusTiling shifted_column() {
    return {BoxDims{2, 2}, {P({R(0), R(0)}), P({R(0), R(1)}), P({R(1), R(1, 2)}), P({R(1), R(3, 2)})}};
}

/// Counts q-grid tilings of a 2-dimensional torus by trying every subset of
/// origins, with an integer overlap test in fine units.
std::uint64_t count_tilings_by_subsets(int k1, int k2, int q) {
    const int w = k1 * q, h = k2 * q;
    const int n = w * h;
    const int need = k1 * k2;
    auto overlap_1d = [&](int a, int b, int len) {
        const int d = ((a - b) % len + len) % len;
        return d < q || d > len - q;
    };
    std::uint64_t count = 0;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(pick.size()) == need) {
            for (std::size_t i = 0; i < pick.size(); ++i)
                for (std::size_t j = i + 1; j < pick.size(); ++j)
                    if (overlap_1d(pick[i] % w, pick[j] % w, w) && overlap_1d(pick[i] / w, pick[j] / w, h)) return;
            ++count;
            return;
        }
        for (int o = from; o < n; ++o) {
            pick.push_back(o);
            rec(o + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return count;
}

}  // namespace

TEST(Torus, RationalHelpers) {
    EXPECT_EQ(floor_div(R(-1, 2)), -1);
    EXPECT_EQ(floor_div(R(7, 3)), 2);
    EXPECT_EQ(floor_div(R(-6, 3)), -2);
    EXPECT_EQ(frac(R(-1, 3)), R(2, 3));
    EXPECT_EQ(mod_torus(R(-1, 2), 2), R(3, 2));
    EXPECT_EQ(mod_torus(R(5), 3), R(2));
}

TEST(Torus, CubesDisjointExamples) {
    EXPECT_TRUE(cubes_disjoint(BoxDims{2, 2}, P({R(0), R(0)}), P({R(1), R(0)})));
    EXPECT_FALSE(cubes_disjoint(BoxDims{2, 2}, P({R(0), R(0)}), P({R(1, 2), R(1, 2)})));
    EXPECT_TRUE(cubes_disjoint(BoxDims({3}, 2), P({R(0)}), P({R(2)})));
    EXPECT_FALSE(cubes_disjoint(BoxDims{3, 3}, P({R(0), R(0)}), P({R(5, 2), R(1, 3)})));
}

TEST(Torus, ValidateExamples) {
    auto grid = integer_grid(BoxDims{2, 3});
    EXPECT_TRUE(validate_tiling(grid).ok);
    auto dup = grid;
    dup.points.push_back(dup.points[2]);
    const auto v = validate_tiling(dup);
    EXPECT_FALSE(v.ok);
    ASSERT_TRUE(v.overlapping);
    EXPECT_EQ(v.overlapping->first, 2u);
    EXPECT_EQ(v.actual_count, 7);
    EXPECT_EQ(v.expected_count, 6);
    EXPECT_TRUE(validate_tiling(shifted_column()).ok);

    auto outside = grid;
    outside.points[0] = P({R(2), R(0)});
    EXPECT_EQ(validate_tiling(outside).bad_point, std::optional<std::size_t>(0));
}

TEST(Torus, IntegerCodeExamples) {
    EXPECT_EQ(integer_code(BoxDims{2, 2}, P({R(0), R(0)})), (Cell{1, 1}));
    EXPECT_EQ(integer_code(BoxDims{2, 2}, P({R(1), R(3, 2)})), (Cell{2, 2}));
    EXPECT_THROW(integer_code(BoxDims{2, 2}, P({R(5, 2), R(0)})), invalid_input);
    EXPECT_THROW(integer_code(BoxDims{2, 2}, P({R(0)})), invalid_input);
}

TEST(Torus, KellerExamples) {
    EXPECT_TRUE(keller_check(integer_grid(BoxDims{3, 2, 2})));
    EXPECT_TRUE(keller_check(shifted_column()));
    auto bad = shifted_column();
    bad.points[1] = P({R(0), R(1, 2)});  // code (1,1) twice; not a tiling either
    EXPECT_FALSE(keller_check(bad));
}

TEST(Torus, ComponentExamples) {
    const auto g = simple_components(integer_grid(BoxDims{2, 3}));
    ASSERT_EQ(g.size(), 1u);
    EXPECT_EQ(g[0].size(), 6u);

    const auto c = simple_components(shifted_column());
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].members, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(c[1].members, (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(c[1].representative, P({R(0), R(1, 2)}));
    EXPECT_EQ(c[0].code_set.cells(), (std::vector<Cell>{{1, 1}, {1, 2}}));
    EXPECT_EQ(c[1].code_set.cells(), (std::vector<Cell>{{2, 1}, {2, 2}}));
    EXPECT_TRUE(check_theorem_forward(shifted_column()));
    EXPECT_TRUE(check_theorem_forward(integer_grid(BoxDims{2, 2, 3})));

    // A tiling with no integer point has an empty origin component.
    TorusTiling t{BoxDims{2, 2}, {P({R(1, 2), R(0)}), P({R(1, 2), R(1)}), P({R(3, 2), R(0)}), P({R(3, 2), R(1)})}};
    ASSERT_TRUE(validate_tiling(t).ok);
    EXPECT_EQ(origin_component(t).size(), 0u);
    EXPECT_EQ(origin_component(t).code_set.size(), 0u);
}

TEST(Torus, ComponentSizes) {
    const auto t23 = build_residue_table({2, 3});
    EXPECT_TRUE(component_size_representable(integer_grid(BoxDims{2, 3}), t23).ok());
    const auto rep = component_size_representable(shifted_column(), build_residue_table({2, 2}));
    ASSERT_EQ(rep.components.size(), 2u);
    EXPECT_EQ(rep.components[0].size, 2);
    EXPECT_EQ(rep.components[1].size, 2);
    EXPECT_TRUE(rep.ok());
    // Sizes not representable by a foreign table are reported.
    EXPECT_EQ(component_size_representable(shifted_column(), build_residue_table({3})).failures.size(), 2u);
}

TEST(Torus, BuildFromDecompositionExamples) {
    BoxDims b22{2, 2};
    const auto d = CellSet::from_cells(b22, std::vector<Cell>{{1, 1}, {1, 2}});
    LineDecomposition dec{{make_line(1, {2, 1})}};
    const auto t = build_tiling_from_decomposition(b22, d, dec);
    std::vector<RationalPoint> pts = t.points, want = shifted_column().points;
    std::sort(pts.begin(), pts.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(pts, want);
    EXPECT_EQ(origin_component(t).code_set, d);

    BoxDims b223{2, 2, 3};
    const auto g = build_tiling_from_decomposition(b223, CellSet::full(b223), {});
    EXPECT_EQ(g.points, integer_grid(b223).points);

    BoxDims b23{2, 3};
    const auto d23 = CellSet::from_cells(b23, std::vector<Cell>{{1, 1}, {1, 2}, {1, 3}});
    const auto t23 = build_tiling_from_decomposition(b23, d23, {{make_line(1, {2, 1})}});
    EXPECT_TRUE(validate_tiling(t23).ok);
    EXPECT_EQ(origin_component(t23).code_set, d23);
    EXPECT_EQ(origin_component(t23).size(), 3u);

    // The complement is not partitioned by the given lines.
    EXPECT_THROW(build_tiling_from_decomposition(b22, d, {}), invalid_input);
    EXPECT_THROW(build_tiling_from_decomposition(b22, d, {{make_line(0, {1, 1})}}), invalid_input);
}

TEST(Torus, RoundTripExamples) {
    BoxDims b23{2, 3};
    EXPECT_TRUE(round_trip_check(b23, CellSet(b23)));
    BoxDims b33{3, 3};
    EXPECT_TRUE(round_trip_check(b33, CellSet(b33)));
    const auto neg = round_trip(BoxDims{2, 2}, CellSet::from_cells(BoxDims{2, 2}, std::vector<Cell>{{1, 1}, {2, 2}}));
    EXPECT_TRUE(neg.ok);
    EXPECT_FALSE(neg.complementable);
}

TEST(Torus, RoundTripAllSubsetsOfSmallBoxes) {
    for (const auto& sides : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {3, 3}}) {
        BoxDims box(sides);
        const auto n = static_cast<std::size_t>(box.volume());
        std::size_t positives = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            CellSet d(box);
            for (std::size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1u) d.insert_index(i);
            const auto r = round_trip(box, d);
            ASSERT_TRUE(r.ok) << r.detail;
            positives += r.complementable;
        }
        EXPECT_GT(positives, 1u);
    }
}

TEST(Torus, RoundTripOverFamilies) {
    for (const auto& sides : std::vector<std::vector<int>>{{2, 2, 2}, {2, 2, 3}, {2, 2, 2, 2}}) {
        BoxDims box(sides);
        const auto lines = oracle::all_lines(box);
        oracle::for_each_family(box, [&](const std::vector<std::size_t>& chosen) {
            CellSet u(box);
            for (auto id : chosen)
                for (auto x : lines.cells[id]) u.insert_index(x);
            const auto r = round_trip(box, u.complement());
            ASSERT_TRUE(r.complementable);
            ASSERT_TRUE(r.ok) << r.detail;
        });
    }
}

TEST(Torus, EnumerationCounts) {
    const auto q1 = enumerate_grid_tilings(BoxDims{2, 2}, 1);
    ASSERT_EQ(q1.size(), 1u);
    EXPECT_EQ(q1[0].points, sorted_points(integer_grid(BoxDims{2, 2})));

    const auto q2 = enumerate_grid_tilings(BoxDims{2, 2}, 2);
    EXPECT_EQ(q2.size(), count_tilings_by_subsets(2, 2, 2));
    EXPECT_EQ(enumerate_grid_tilings(BoxDims{2, 3}, 1).size(), count_tilings_by_subsets(2, 3, 1));
    EXPECT_EQ(enumerate_grid_tilings(BoxDims{2, 3}, 2).size(), count_tilings_by_subsets(2, 3, 2));

    auto want = shifted_column().points;
    std::sort(want.begin(), want.end());
    EXPECT_TRUE(std::any_of(q2.begin(), q2.end(), [&](const TorusTiling& t) { return t.points == want; }));
}

TEST(Torus, EnumeratedTilingsSatisfyInvariants) {
    for (const auto& [sides, q] : std::vector<std::pair<std::vector<int>, int>>{{{2, 2}, 2}, {{2, 3}, 2}, {{2, 2, 2}, 2}, {{3, 3}, 2}}) {
        BoxDims box(sides);
        std::vector<std::int64_t> den(sides.begin(), sides.end());
        const auto table = build_residue_table(DenominationVector(den));
        std::uint64_t seen = 0;
        enumerate_grid_tilings(box, q, [&](const TorusTiling& t) {
            EXPECT_TRUE(validate_tiling(t).ok);
            EXPECT_TRUE(keller_check(t));
            EXPECT_TRUE(check_theorem_forward(t));
            EXPECT_TRUE(component_size_representable(t, table).ok());
            std::size_t total = 0;
            for (const auto& c : simple_components(t)) total += c.size();
            EXPECT_EQ(static_cast<std::int64_t>(total), box.volume());
            ++seen;
            return true;
        });
        EXPECT_GT(seen, 1u);
    }
}

TEST(Torus, EnumerationStopsAndBounds) {
    std::uint64_t calls = 0;
    const auto n = enumerate_grid_tilings(BoxDims{2, 2}, 2, [&](const TorusTiling&) { return ++calls < 3; });
    EXPECT_EQ(n, 3u);
    EXPECT_THROW(enumerate_grid_tilings(BoxDims{4, 4, 4}, 5), resource_bound);
    EXPECT_THROW(enumerate_grid_tilings(BoxDims{2, 2}, 0), invalid_input);
}

TEST(Torus, TranslationDedupe) {
    const auto all = enumerate_grid_tilings(BoxDims{2, 2}, 2);
    const auto classes = dedupe_translations(all);
    EXPECT_LT(classes.size(), all.size());
    EXPECT_GE(classes.size(), 2u);  // the grid and a shifted column are not translates
    // Every tiling is a translate of exactly one kept representative.
    for (const auto& t : all) {
        const auto key = translation_canonical_form(t);
        EXPECT_EQ(std::count_if(classes.begin(), classes.end(),
                                [&](const TorusTiling& c) { return translation_canonical_form(c) == key; }),
                  1);
    }
    // Translation invariance of the canonical form.
    auto moved = shifted_column();
    for (auto& p : moved.points) {
        p.coords[0] = mod_torus(p.coords[0] + R(1, 2), 2);
        p.coords[1] = mod_torus(p.coords[1] + R(3, 2), 2);
    }
    EXPECT_EQ(translation_canonical_form(moved), translation_canonical_form(shifted_column()));
}
