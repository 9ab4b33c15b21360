#include "nzs/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nzs;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("n ranges")
{
    CHECK(parse_n_range("3") == std::vector<int>{3});
    CHECK(parse_n_range("2..4") == std::vector<int>{2, 3, 4});
    CHECK_THROWS(parse_n_range("1"));
    CHECK_THROWS(parse_n_range("4..2"));
    CHECK_THROWS(parse_n_range("x"));
    CHECK_THROWS(parse_n_range("3x"));
}

TEST_CASE("info")
{
    Run r = run({"info", "fig8"});
    CHECK(r.code == kExitPass);
    json j = json::parse(r.out);
    CHECK(j["tetrahedra"] == 2);
    CHECK(j["edge_classes"] == 2);
    CHECK(j["link_kinds"]["torus"] == 1);
    CHECK(j["sigma_empty"] == true);

    json s = json::parse(run({"info", "--fixture", "single"}).out);
    CHECK(s["link_kinds"]["disc"] == 4);
}

TEST_CASE("bad input")
{
    Run missing = run({"info", "no-such-file.json"});
    CHECK(missing.code == kExitUsage);
    CHECK(json::parse(missing.err)["error"] == "parse");

    auto path = std::filesystem::temp_directory_path() / "nzs_bad.json";
    std::ofstream(path) << "{\"format\":\"nz-tri-1\",\"tetrahedra\":1,\"gluings\":[{\"tet\":0}]}";
    Run bad = run({"info", path.string()});
    CHECK(bad.code == kExitUsage);
    std::filesystem::remove(path);

    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate", "fig8"}).code == kExitUsage);
    CHECK(run({"verify", "fig8", "--n", "1"}).code == kExitUsage);
    CHECK(run({"verify", "fig8", "--seed", "abc"}).code == kExitUsage);
}

TEST_CASE("file input")
{
    auto path = std::filesystem::temp_directory_path() / "nzs_two.json";
    std::ofstream(path) << R"({"format":"nz-tri-1","tetrahedra":2,"gluings":[{"tet":0,"face":3,"to_tet":1,"to_face":3,"vertex_map":[1,0,2,3]}]})";
    Run r = run({"info", path.string()});
    CHECK(r.code == kExitPass);
    CHECK(json::parse(r.out)["sigma_triangles"] == 6);
    std::filesystem::remove(path);
}

TEST_CASE("equations")
{
    auto path = std::filesystem::temp_directory_path() / "nzs_eqs.json";
    Run r = run({"equations", "fig8", "--n", "2", "-o", path.string()});
    CHECK(r.code == kExitPass);
    CHECK(r.out.empty());
    std::ifstream in(path);
    json j = json::parse(in);
    CHECK(j["rows"].size() == 2);
    CHECK(j["variables"].size() == 12);
    std::filesystem::remove(path);

    auto csv = std::filesystem::temp_directory_path() / "nzs_eqs.csv";
    CHECK(run({"equations", "fig8", "--n", "3", "-o", csv.string()}).code == kExitPass);
    std::ifstream cin(csv);
    std::string line;
    int lines = 0;
    while (std::getline(cin, line)) ++lines;
    CHECK(lines == 1 + 8);
    std::filesystem::remove(csv);
}

TEST_CASE("verify")
{
    Run r = run({"verify", "fig8", "--n", "3"});
    CHECK(r.code == kExitPass);
    json j = json::parse(r.out);
    CHECK(j["status"] == "pass");
    CHECK(j["convention"]["selected"] == "symmetric");

    json range = json::parse(run({"verify", "fig8", "--n", "2..4"}).out);
    CHECK(range["reports"].size() == 3);

    Run single = run({"verify", "single", "--n", "3"});
    CHECK(single.code == kExitPass);
    bool found = false;
    const json sj = json::parse(single.out);
    for (const auto& c : sj["reports"][0]["checks"])
        if (c["check"] == "times4") {
            found = true;
            CHECK(c["status"] == "skipped");
            CHECK(c["details"]["reason"] == "Σ nonempty / no torus links");
        }
    CHECK(found);
}

TEST_CASE("verify fails on an annulus complex")
{
    auto path = std::filesystem::temp_directory_path() / "nzs_annulus.json";
    std::ofstream(path) << R"({"format":"nz-tri-1","tetrahedra":2,"gluings":[)"
                           R"({"tet":0,"face":0,"to_tet":1,"to_face":0,"vertex_map":[0,2,1,3]},)"
                           R"({"tet":0,"face":1,"to_tet":1,"to_face":1,"vertex_map":[2,1,0,3]}]})";
    CHECK(run({"verify", path.string(), "--n", "2"}).code == kExitFailure);
    std::filesystem::remove(path);
}

TEST_CASE("nz-data")
{
    Run r = run({"nz-data", "fig8", "--n", "2"});
    CHECK(r.code == kExitPass);
    json j = json::parse(r.out);
    CHECK(j["gram"].size() == 2);
    CHECK(j["gram"][0].size() == 2);
    CHECK(std::abs(j["gram"][0][1].get<int>()) == 1);
}

TEST_CASE("solve2 and rigidity")
{
    Run r = run({"solve2", "fig8", "--seed", "5"});
    CHECK(r.code == kExitPass);
    json j = json::parse(r.out);
    for (const auto& s : j["geometric"]["shapes"]) {
        CHECK(s[0].get<double>() == doctest::Approx(0.5));
        CHECK(s[1].get<double>() == doctest::Approx(std::sqrt(3.0) / 2));
    }
    CHECK(j["geometric"]["z"].size() == 12);
    CHECK(j["seed"] == 5);

    Run rig = run({"rigidity", "fig8", "--n", "2..3"});
    CHECK(rig.code == kExitPass);
    json rj = json::parse(rig.out);
    CHECK(rj["reports"][0]["details"]["peripheral_rank"] == 1);
    CHECK(rj["reports"][1]["details"]["peripheral_rank"] == 2);

    CHECK(run({"solve2", "single"}).code == kExitUsage);
}

TEST_CASE("tolerance overrides reach the report")
{
    json j = json::parse(run({"solve2", "fig8", "--tol-completeness", "1e-6"}).out);
    CHECK(j["tolerances"]["completeness"] == 1e-6);
}

TEST_CASE("reports are reproducible")
{
    CHECK(run({"solve2", "fig8", "--seed", "9"}).out == run({"solve2", "fig8", "--seed", "9"}).out);
    CHECK(run({"verify", "fig8", "--n", "2"}).out == run({"verify", "fig8", "--n", "2"}).out);
}

TEST_CASE("pretty output")
{
    std::string pretty = run({"info", "fig8", "--pretty"}).out;
    CHECK(pretty.find("\n  ") != std::string::npos);
    CHECK(json::parse(pretty) == json::parse(run({"info", "fig8"}).out));
}
