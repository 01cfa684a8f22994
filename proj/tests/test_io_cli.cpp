#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"

using namespace cubeline;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cubeline_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

}  // namespace

TEST(Io, SubsetRoundTrip) {
    const auto j = json::parse(R"({"k": [2, 3], "cells": [[2, 3], [1, 1]]})");
    const auto s = io::subset_from_json(j);
    EXPECT_EQ(s.cells.size(), 2u);
    const auto back = io::subset_json(s.cells);
    EXPECT_EQ(io::subset_json(io::subset_from_json(back).cells), back);

    EXPECT_THROW(io::subset_from_json(json::parse(R"({"k": [2, 3], "cells": [[1, 1], [1, 1]]})")), invalid_input);
    EXPECT_THROW(io::subset_from_json(json::parse(R"({"k": [2, 3], "cells": [[3, 1]]})")), invalid_input);
    EXPECT_THROW(io::subset_from_json(json::parse(R"({"k": [1, 3], "cells": []})")), invalid_input);
    EXPECT_THROW(io::subset_from_json(json::parse(R"({"cells": []})")), invalid_input);
}

TEST(Io, DecompositionRoundTrip) {
    BoxDims box{2, 3, 2};
    LineDecomposition dec{{make_line(1, {2, 1, 1}), make_line(0, {1, 3, 2})}};
    const auto j = io::decomposition_json(dec);
    EXPECT_EQ(j[0]["direction"], 2);
    EXPECT_EQ(io::decomposition_from_json(box, j), dec);
    EXPECT_THROW(io::line_from_json(box, json::parse(R"({"direction": 4, "base": [1, 1, 1]})")), invalid_input);
}

TEST(Io, TilingRoundTripIsExact) {
    TorusTiling t{BoxDims{2, 2},
                  {RationalPoint({Rational(0), Rational(0)}), RationalPoint({Rational(0), Rational(1)}),
                   RationalPoint({Rational(1), Rational(1, 2)}), RationalPoint({Rational(1), Rational(3, 2)})}};
    const auto j = io::tiling_json(t);
    const auto back = io::tiling_from_json(j);
    EXPECT_EQ(back.points, t.points);
    EXPECT_EQ(io::tiling_json(back).dump(), j.dump());

    // Huge exact values survive.
    const auto big = io::rational_from_json(json::array({"123456789012345678901234567890", "246913578024691357802469135780"}));
    EXPECT_EQ(big, Rational(1, 2));
    EXPECT_THROW(io::rational_from_json(json::array({"1", "0"})), invalid_input);
    EXPECT_THROW(io::rational_from_json(json::array({"1.5", "2"})), invalid_input);
    EXPECT_THROW(io::rational_from_json(json::array({1, 2})), invalid_input);
    EXPECT_THROW(io::tiling_from_json(json::parse(R"({"k": [2, 2], "points": [[["2","1"], ["0","1"]]]})")), invalid_input);
}

TEST(Cli, RepExample) {
    auto r = run_cli({"rep", "--k", "2,3", "--n", "7"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "n=7 k=(2,3): representable, witness (2,1)\n");
    r = run_cli({"rep", "--k", "3,2", "--n", "7", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["representable"].get<bool>());
    const auto w = j["witness"].get<std::vector<std::int64_t>>();
    EXPECT_EQ(3 * w[0] + 2 * w[1], 7);
    r = run_cli({"rep", "--k", "2,3", "--n", "1"});
    EXPECT_EQ(r.out, "n=1 k=(2,3): not representable\n");
}

TEST(Cli, Frobenius) {
    EXPECT_EQ(run_cli({"frobenius", "--k", "5,7"}).out, "frobenius number of (5,7): 23\n");
    const auto j = json::parse(run_cli({"--json", "frobenius", "--k", "4,6"}).out);
    EXPECT_TRUE(j["frobenius"].is_null());
    EXPECT_EQ(j["gcd"], 2);
}

TEST(Cli, SweepExample) {
    auto r = run_cli({"sweep3", "--max-k3", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("4 triples, 0 counterexamples"), std::string::npos);
    r = run_cli({"sweep3", "--max-k3", "300"});
    EXPECT_EQ(r.code, 2);
    r = run_cli({"sweep3", "--max-k3", "10", "--resume"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, SweepResumeMatchesFreshRun) {
    TempDir tmp;
    const auto cp = (tmp.path / "cp.json").string();
    const auto fresh = run_cli({"sweep3", "--max-k3", "30", "--json"});
    ASSERT_EQ(fresh.code, 0);
    ASSERT_EQ(run_cli({"sweep3", "--max-k3", "30", "--checkpoint", cp, "--workers", "3"}).code, 0);
    const auto resumed = run_cli({"sweep3", "--max-k3", "30", "--checkpoint", cp, "--resume", "--json"});
    EXPECT_EQ(resumed.code, 0);
    EXPECT_EQ(resumed.out, fresh.out);
    EXPECT_EQ(run_cli({"sweep3", "--max-k3", "31", "--checkpoint", cp, "--resume"}).code, 2);
    tmp.write("cp.json", "not json");
    EXPECT_EQ(run_cli({"sweep3", "--max-k3", "30", "--checkpoint", cp, "--resume"}).code, 2);
}

TEST(Cli, DecomposeOutcomes) {
    TempDir tmp;
    const auto neg = tmp.write("neg.json", R"({"k": [2, 2], "cells": [[1, 1], [2, 2]]})");
    auto r = run_cli({"decompose", "--file", neg.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("not complementable"), std::string::npos);

    const auto pos = tmp.write("pos.json", R"({"k": [2, 3], "cells": [[2, 1], [2, 2], [2, 3]]})");
    r = run_cli({"decompose", "--file", pos.string(), "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["complementable"].get<bool>());
    EXPECT_EQ(j["lines"].size(), 1u);
    EXPECT_EQ(j["lines"][0]["direction"], 2);

    EXPECT_EQ(run_cli({"decompose", "--file", (tmp.path / "missing.json").string()}).code, 2);
    const auto bad = tmp.write("bad.json", R"({"k": [2, 2], "cells": [[1, 1], [1, 1]]})");
    EXPECT_EQ(run_cli({"decompose", "--file", bad.string()}).code, 2);
}

TEST(Cli, Enumerate) {
    auto r = run_cli({"enumerate", "--k", "2,3", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["sizes"], json::parse("[0,2,3,4,6]"));
    EXPECT_EQ(j["violations"].size(), 0u);
    EXPECT_EQ(run_cli({"enumerate", "--k", "3,4", "--volume-limit", "10"}).code, 3);
    EXPECT_EQ(run_cli({"enumerate", "--k", "2,3,4", "--route", "grouped"}).code, 2);
    EXPECT_EQ(run_cli({"enumerate", "--k", "3,3,4", "--route", "grouped"}).code, 0);
    EXPECT_EQ(run_cli({"enumerate", "--k", "2,1"}).code, 2);
}

TEST(Cli, TilingPipeline) {
    TempDir tmp;
    const auto in = tmp.write("d.json", R"({"k": [2, 2], "cells": [[1, 1], [1, 2]]})");
    const auto tiling = (tmp.path / "t.json").string();
    auto r = run_cli({"tiling", "build", "--file", in.string(), "--out", tiling});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto t = io::tiling_from_json(io::read_json_file(tiling));
    EXPECT_TRUE(validate_tiling(t).ok);

    r = run_cli({"tiling-verify", "--file", tiling, "--json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(json::parse(r.out)["forward"].get<bool>());

    r = run_cli({"tiling", "components", "--file", tiling, "--json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["components"].size(), 2u);

    // A point list that is not a tiling.
    const auto bad = tmp.write("bad.json", R"({"k": [2, 2], "points": [[["0","1"],["0","1"]], [["1","2"],["0","1"]]]})");
    EXPECT_EQ(run_cli({"tiling-verify", "--file", bad.string()}).code, 2);

    const auto nc = tmp.write("nc.json", R"({"k": [2, 2], "cells": [[1, 1], [2, 2]]})");
    EXPECT_EQ(run_cli({"tiling-build", "--file", nc.string()}).code, 2);

    // Explicit decomposition.
    const auto withlines = tmp.write("wl.json", R"({"k": [2, 3], "cells": [[1, 1], [1, 2], [1, 3]],
        "lines": [{"direction": 2, "base": [2, 1]}]})");
    EXPECT_EQ(run_cli({"tiling-build", "--file", withlines.string()}).code, 0);
    const auto wrong = tmp.write("wrong.json", R"({"k": [2, 3], "cells": [[1, 1], [1, 2], [1, 3]],
        "lines": [{"direction": 2, "base": [1, 1]}]})");
    EXPECT_EQ(run_cli({"tiling-build", "--file", wrong.string()}).code, 2);
}

TEST(Cli, TilingSearch) {
    auto r = run_cli({"tiling", "search", "--k", "2,2", "--refine", "2", "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["tilings"].get<std::size_t>(), enumerate_grid_tilings(BoxDims{2, 2}, 2).size());
    EXPECT_EQ(j["failures"], 0);

    r = run_cli({"tiling-search", "--k", "2,2", "--refine", "2", "--dedupe", "--json"});
    EXPECT_EQ(json::parse(r.out)["tilings"].get<std::size_t>(),
              dedupe_translations(enumerate_grid_tilings(BoxDims{2, 2}, 2)).size());
    r = run_cli({"tiling-search", "--k", "2,2", "--refine", "2", "--limit", "2", "--json"});
    EXPECT_EQ(json::parse(r.out)["tilings"], 2);
    EXPECT_EQ(run_cli({"tiling-search", "--k", "4,4,4", "--refine", "5"}).code, 3);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"bogus"}).code, 2);
    EXPECT_EQ(run_cli({"rep", "--k", "2,3"}).code, 2);
    EXPECT_EQ(run_cli({"rep", "--k", "2,3", "--n", "-4"}).code, 2);
    EXPECT_EQ(run_cli({"rep", "--k", "0,3", "--n", "4"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}
