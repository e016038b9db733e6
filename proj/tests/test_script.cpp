#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "qpnkit/script.hpp"

using namespace qpnkit;

namespace {

std::string run_text(const std::string& src, int& code, RunOptions opt = {})
{
    Script sc = parse_script(src);
    std::ostringstream os;
    code = run_script(sc, os, opt);
    return os.str();
}

std::vector<Json> run_json(const std::string& src, int& code, RunOptions opt = {})
{
    std::istringstream is(run_text(src, code, opt));
    std::vector<Json> out;
    std::string line;
    while (std::getline(is, line))
        out.push_back(Json::parse(line));
    return out;
}

const std::string kDeclPrefix =
    "field F = Q\n"
    "ring S = F[x0..x1]\n";

}  // namespace

TEST_CASE("declarations parse and elaborate")
{
    int code = 0;

    SECTION("smallest script")
    {
        Script sc = parse_script("field F = GF(7)\nring S = F[x0..x1]\n");
        auto* sess = std::get_if<Session<PrimeField>>(&sc.session);
        REQUIRE(sess != nullptr);
        CHECK(sess->rings.at("S") == 2);
    }

    SECTION("free modules, matrices, cokernels, maps")
    {
        auto rep = run_json(kDeclPrefix +
                                "free A = S(-1) + S(-1)\n"
                                "free B = S(0)\n"
                                "matrix M : A -> B = [[x0, x1]]\n"
                                "module X = coker M\n"
                                "map id : X -> X = [[1]]\n"
                                "hilbert X 0 3\n",
                            code);
        REQUIRE(rep.size() == 1);
        CHECK(rep[0]["command"] == "hilbert");
        // S/(x0, x1) is one point: dimension 1 in degree 0, then 0
        CHECK(rep[0]["value"] == Json::parse("[[0,1],[1,0],[2,0],[3,0]]"));
        CHECK(code == 0);
    }

    SECTION("comments and blank lines")
    {
        CHECK_NOTHROW(parse_script("# nothing here\n\n  # indented comment\n"));
        int c2 = 0;
        CHECK(run_text("", c2).empty());
        CHECK(c2 == 0);
    }
}

TEST_CASE("parse errors carry positions")
{
    auto expect_parse_error = [](const std::string& src, int line) {
        try {
            parse_script(src);
            FAIL("expected ParseError for: " << src);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
            CHECK(e.col >= 1);
        }
    };

    expect_parse_error("field F = R\n", 1);
    expect_parse_error("field F = Q\nring S = F[x1..x2]\n", 2);
    expect_parse_error(kDeclPrefix + "free A = S(1\n", 3);
    expect_parse_error(kDeclPrefix + "free A = S(0)\nmatrix M : A -> A = [[x0 + 1]]\n", 4);
    expect_parse_error(kDeclPrefix + "ring T = F[x0..x1]\nfield G = Q\n", 4);
    expect_parse_error("monomials 2\n", 1);  // missing argument
    expect_parse_error("field _F = Q\n", 1);

    SECTION("degree mismatch names the offending slot")
    {
        try {
            parse_script(kDeclPrefix +
                         "free A = S(0)\n"
                         "free B = S(0)\n"
                         "matrix M : A -> B = [[x0]]\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 5);
            CHECK(e.expected.find("row 0") != std::string::npos);
            CHECK(e.expected.find("col 0") != std::string::npos);
        }
    }
}

TEST_CASE("name errors identify the reference")
{
    auto expect_name_error = [](const std::string& src, const std::string& name) {
        try {
            parse_script(src);
            FAIL("expected NameError for: " << src);
        } catch (const NameError& e) {
            CHECK(e.name == name);
        }
    };

    expect_name_error(kDeclPrefix + "module X = coker M\n", "M");
    expect_name_error(kDeclPrefix + "free A = S(0)\nhilbert B 0 1\n", "B");
    expect_name_error(kDeclPrefix + "free A = S(0)\nmodule X = coker A\n", "A");
    expect_name_error(kDeclPrefix + "free A = S(0)\nfree A = S(1)\n", "A");
    expect_name_error("field F = Q\ntarget T = F\nsections s over T = (1)\ngood-epi T\n", "T");
    expect_name_error(kDeclPrefix + "exact _trunc_rel _trunc_inc 0 1\n", "_trunc_rel");
}

TEST_CASE("parse and render round-trip")
{
    const std::vector<std::string> corpus = {
        "field F = Q\n"
        "ring S = F[x0..x1]\n"
        "free A = S(-1) + S(-1)\n"
        "free B = S(0)\n"
        "matrix M : A -> B = [[x0, x1]]\n"
        "module X = coker M\n"
        "map id : X -> X = [[1]]\n"
        "target T = F[t]\n"
        "sections s over T = (1, t)\n"
        "good-epi s\n"
        "eval s X\n"
        "trunc-iso s 1 0\n"
        "monoidal s X X\n"
        "reconstruct s\n"
        "relation s x0*x1\n",

        "field F = GF(7)\n"
        "ring S = F[x0..x2]\n"
        "free A = S(0)\n"
        "sym A 2\n"
        "monomials 2 2\n"
        "trunc 2 0 1\n"
        "exact _trunc_rel _trunc_inc -1 6\n"
        "phi-extend 2 0 1 x0^2 + 2*x1*x2\n",

        "field F = Q\n"
        "target T = F[t]\n"
        "target U = F\n"
        "target V = algebra(2, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0)\n"
        "sections u over V = ((1, 1), (1, -1))\n"
        "base-change T U (0) 1 [[t^2]]\n"
        "descend T U (0) (t) 1 [[0]]\n"
        "base-change V U (1, -1) 1 [[(1, 1)]]\n",
    };

    for (const std::string& src : corpus) {
        Script sc = parse_script(src);
        CHECK(render_script(sc) == src);
    }

    SECTION("render normalizes spacing and reparses to the same text")
    {
        const std::string loose =
            "field   F=Q\n"
            "ring S = F[ x0 .. x1 ]   # trailing comment\n"
            "free A=S(0)+S( -2 )\n"
            "matrix M : A -> A = [[1,x0 *x1 - 3* x1^2],[0,1]]\n";
        Script sc = parse_script(loose);
        std::string canon = render_script(sc);
        Script sc2 = parse_script(canon);
        CHECK(render_script(sc2) == canon);
    }
}

TEST_CASE("verdict commands drive the exit code")
{
    int code = 0;

    SECTION("good sections pass")
    {
        auto rep = run_json(
            "field F = Q\ntarget T = F[t]\nsections s over T = (1, t)\ngood-epi s\n", code);
        REQUIRE(rep.size() == 1);
        CHECK(rep[0]["verdict"] == "good");
        CHECK(rep[0]["witness"]["bezout"] == Json::array({"1", "0"}));
        CHECK(code == 0);
    }

    SECTION("shared factor fails with the gcd witness")
    {
        auto rep = run_json(
            "field F = Q\ntarget T = F[t]\nsections s over T = (t, t^2)\ngood-epi s\n", code);
        REQUIRE(rep.size() == 1);
        CHECK(rep[0]["verdict"] == "not_epi");
        CHECK(rep[0]["witness"] == Json{{"gcd", "t"}});
        CHECK(code == 1);
    }

    SECTION("operation errors end the stream with exit 2")
    {
        auto rep = run_json(
            "field F = Q\ntarget T = F[t]\nsections s over T = (t, t^2)\ntrunc-iso s 1 0\n",
            code);
        REQUIRE(rep.size() == 1);
        CHECK(rep[0].contains("error"));
        CHECK(rep[0]["error"]["kind"] == "PreconditionNotGood");
        CHECK(code == 2);
    }
}

TEST_CASE("truncation chains check out through the session")
{
    int code = 0;
    auto rep = run_json(kDeclPrefix + "trunc 1 0 1\nexact _trunc_rel _trunc_inc -1 6\n", code);
    REQUIRE(rep.size() == 2);
    CHECK(rep[0]["value"]["gens"] == 2);
    CHECK(rep[0]["value"]["rels"] == 1);
    CHECK(rep[1]["verdict"] == "exact");
    CHECK(rep[1]["witness"]["table"].is_array());
    CHECK(rep[1]["witness"]["table"].size() == 8);
    CHECK_FALSE(rep[1]["witness"].contains("first_failure"));
    CHECK(code == 0);
}

TEST_CASE("functor commands report classifications")
{
    int code = 0;
    const std::string src = kDeclPrefix +
                            "free A = S(-1)\n"
                            "free B = S(0)\n"
                            "matrix M : A -> B = [[x1]]\n"
                            "module X = coker M\n"
                            "target T = F[t]\n"
                            "sections s over T = (1, t)\n"
                            "eval s X\n"
                            "monoidal s X X\n"
                            "reconstruct s\n"
                            "relation s x0*x1 - x0*x1\n";
    auto rep = run_json(src, code);
    REQUIRE(rep.size() == 4);
    CHECK(rep[0]["value"] == Json({{"free_rank", 0}, {"torsion", {"t"}}}));
    CHECK(rep[1]["verdict"] == "monoidal");
    CHECK(rep[2]["value"]["charts"].size() == 1);
    CHECK(rep[2]["value"]["charts"][0]["index"] == 0);
    CHECK(rep[2]["value"]["charts"][0]["coords"][1] == Json::array({"t", "1"}));
    CHECK(rep[2]["value"]["certificate"] == Json::array({"1", "0"}));
    CHECK(rep[3]["verdict"] == "holds");
    CHECK(code == 0);
}

TEST_CASE("base change and descent through the session")
{
    int code = 0;
    const std::string src =
        "field F = Q\n"
        "target T = F[t]\n"
        "target U = F\n"
        "base-change T U (0) 1 [[t^2]]\n"
        "base-change T T (t) 2 [[], []]\n"
        "descend T U (0) (t) 1 [[0]]\n"
        "descend T T (t) (0) 1 [[t^2]]\n";
    auto rep = run_json(src, code);
    REQUIRE(rep.size() == 4);
    // Q[t]/(t^2) collapsed along t -> 0 keeps one dimension
    CHECK(rep[0]["value"] == Json({{"dimension", 1}}));
    // identity base change of a free rank-2 module
    CHECK(rep[1]["value"] == Json({{"free_rank", 2}, {"torsion", Json::array()}}));
    // the quotient algebra descends T/(t) to the residue field
    CHECK(rep[2]["value"] == Json({{"dimension", 1}}));
    // unit algebra: descent is plain base change
    CHECK(rep[3]["value"] == Json({{"free_rank", 0}, {"torsion", {"t^2"}}}));
    CHECK(code == 0);

    SECTION("a quotient that survives the map is rejected")
    {
        auto bad = run_json("field F = Q\ntarget T = F[t]\ndescend T T (t) (t) 1 [[0]]\n", code);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0]["error"]["kind"] == "InvalidAlgebraMap");
        CHECK(code == 2);
    }
}

TEST_CASE("window override and determinism")
{
    int code = 0;
    const std::string src = kDeclPrefix +
                            "free A = S(0)\n"
                            "hilbert A 0 2\n"
                            "trunc 1 0 1\n"
                            "exact _trunc_rel _trunc_inc -1 6\n";

    RunOptions narrow;
    narrow.window = DegreeWindow{0, 1};
    auto rep = run_json(src, code, narrow);
    CHECK(rep[0]["inputs"]["window"] == Json::array({0, 1}));
    CHECK(rep[0]["value"] == Json::parse("[[0,1],[1,2]]"));
    CHECK(rep[2]["inputs"]["window"] == Json::array({0, 1}));
    CHECK(code == 0);

    int c1 = 0, c2 = 0;
    RunOptions seeded;
    seeded.seed = 0;
    CHECK(run_text(src, c1, seeded) == run_text(src, c2, seeded));
    CHECK(c1 == c2);
}

TEST_CASE("monomials and sym report structural data")
{
    int code = 0;
    auto rep = run_json(kDeclPrefix +
                            "free A = S(0) + S(0)\n"
                            "monomials 1 2\n"
                            "sym A 2\n",
                        code);
    REQUIRE(rep.size() == 2);
    CHECK(rep[0]["value"].size() == 3);
    CHECK(rep[1]["value"]["gens"] == 3);
    CHECK(rep[1]["value"]["rels"] == 0);
    CHECK(code == 0);
}
