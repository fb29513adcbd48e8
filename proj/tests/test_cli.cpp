#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include <json.hpp>

#include "annuli/cli.hpp"
#include "annuli/format.hpp"

using annuli::cli::run;

namespace {

struct Run
{
    int code;
    std::string out, err;
};

Run call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path scratch(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("annuli_cli_" + name);
}

}  // namespace

TEST_CASE("volume output")
{
    auto r = call({"volume", "--dim", "2", "--r", "2", "--e", "1"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    CHECK(ls[0] == "# annuli-format 1");
    CHECK(ls[1].rfind("# config: ", 0) == 0);
    CHECK(ls[2] == "volume");
    CHECK(ls[3].rfind("9.42477796", 0) == 0);
    CHECK(annuli::parse_double(ls[3]) == doctest::Approx(3 * 3.141592653589793).epsilon(1e-15));

    auto twelve = call({"volume", "--dim", "2", "--r", "2", "--e", "1", "--digits", "12"});
    CHECK(lines(twelve.out)[3] == "9.42477796077");
}

TEST_CASE("fourier output")
{
    auto r = call({"fourier", "--dim", "3", "--r", "1", "--e", "1", "--s", "1"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    CHECK(ls[2] == "r,e,s,value");
    auto cells = annuli::split(ls[3], ',');
    CHECK(std::abs(annuli::parse_double(cells[3]) + 0.075991) <= 1e-6);

    auto one = call({"fourier", "--dim", "1", "--r", "2", "--e", "1", "--s", "0.3"});
    CHECK(lines(one.out)[2] == "r,e,s,value,modulus,phase");
}

TEST_CASE("json mirrors csv")
{
    auto r = call({"maximal", "--dim", "2", "--x", "1.5,0", "--thickness", "const:0.01",
                   "--rmin", "0.1", "--rmax", "3", "--nr", "8", "--spacing", "log",
                   "--scheme", "prod:16,32", "--format", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["meta"]["format"] == "annuli-format 1");
    CHECK(doc["meta"]["config"]["subcommand"] == "maximal");
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["value"].get<double>() > 0);
    CHECK(doc["rows"][0].contains("radius"));
}

TEST_CASE("replay reproduces output files")
{
    auto first = scratch("first.csv"), second = scratch("second.csv");
    auto r = call({"average", "--dim", "2", "--x", "2,0", "--r", "2", "--thickness", "prop:0.5",
                   "--scheme", "mc:20000,7", "--field", "ball-ind:0.5", "--out", first.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    auto again = call({"--replay", first.string(), "--out", second.string()});
    REQUIRE(again.code == 0);
    CHECK(slurp(first) == slurp(second));

    auto jfirst = scratch("first.json");
    REQUIRE(call({"ergodic", "--mode", "flow", "--radii", "5", "--thickness", "ball", "--scheme",
                  "mc:5000,3", "--format", "json", "--out", jfirst.string()})
                .code
            == 0);
    auto replayed = call({"--replay", jfirst.string()});
    REQUIRE(replayed.code == 0);
    CHECK(replayed.out == slurp(jfirst));

    CHECK(call({"--replay", scratch("missing.csv").string()}).code == 2);
    CHECK(call({"--replay", first.string(), "volume", "--dim", "2", "--r", "1", "--e", "1"}).code == 2);
    for (const auto& p : {first, second, jfirst})
        std::filesystem::remove(p);
}

TEST_CASE("validation errors exit with 2")
{
    auto unknown = call({"volume", "--dim", "2", "--r", "2", "--e", "1", "--bogus"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(call({}).code == 2);
    CHECK(call({"nonsense"}).code == 2);
    CHECK(call({"volume", "--dim", "2", "--r", "1", "--e", "2"}).code == 2);
    CHECK(call({"volume", "--dim", "0", "--r", "1", "--e", "1"}).code == 2);
    CHECK(call({"average", "--dim", "2", "--x", "1,2,3", "--r", "1", "--e", "1"}).code == 2);
    CHECK(call({"fourier", "--dim", "2", "--r", "1", "--e", "1"}).code == 2);
    CHECK(call({"dichotomy", "--deltas", "0.3"}).code == 2);
    CHECK(call({"dichotomy", "--sampling", "polar:4"}).code == 2);
    CHECK(call({"ergodic", "--thickness", "ball", "--r", "1", "--wave", "1"}).code == 2);
    CHECK(call({"lemma-check", "--check", "lemma"}).code == 2);
    CHECK(call({"volume", "--dim", "2", "--r", "1", "--e", "1", "--format", "xml"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("check modes")
{
    CHECK(call({"lemma-check", "--check", "norm"}).code == 0);
    auto cap = call({"lemma-check", "--check", "cap", "--trials", "5", "--samples", "20000"});
    CHECK(cap.code == 0);
    CHECK(lines(cap.out).size() == 3 + 5);
    auto bad = call({"lemma-check", "--check", "cap", "--xnorm", "2", "--eps", "0.1", "--rho",
                     "0.5", "--sigmas", "0"});
    CHECK(bad.code == 3);
    CHECK(bad.out.find("false") != std::string::npos);
}

TEST_CASE("small dichotomy run")
{
    auto r = call({"dichotomy", "--dim", "2", "--a", "2", "--deltas", "1e-2,1e-4,1e-8,1e-16",
                   "--sampling", "polar:4,8"});
    REQUIRE(r.code == 0);
    auto ls = lines(r.out);
    REQUIRE(ls.size() == 3 + 4);
    CHECK(ls[2] == "delta,h,lambda,measure,norm_p,ratio,paper_bound");
    double prev = -1;
    for (int i = 3; i < 7; ++i)
    {
        double ratio = annuli::parse_double(annuli::split(ls[i], ',')[5]);
        CHECK(ratio >= prev);
        prev = ratio;
    }
}

TEST_CASE("ergodic modes")
{
    auto l2 = call({"ergodic", "--mode", "l2", "--thickness", "pow:1,0.5", "--radii",
                    "10,100,1000,10000"});
    REQUIRE(l2.code == 0);
    auto ls = lines(l2.out);
    REQUIRE(ls.size() == 7);
    CHECK(ls[2] == "r,e,l2_error");
    CHECK(annuli::parse_double(annuli::split(ls[6], ',')[2]) <= 0.05);

    auto spec = call({"ergodic", "--dim", "1", "--wave", "1", "--thickness", "const:1",
                      "--omega", "0.25", "--radii", "3"});
    CHECK(spec.code == 0);
    CHECK(lines(spec.out)[2] == "r,e,re,im,error");
}
