#include "rscert/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rscert;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("rscert_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("coeffs prints signs")
    {
        const Run text = run({"--format", "text", "coeffs", "0", "4"});
        CHECK(text.code == 0);
        CHECK(text.out == "+ + + -\n");
        const Run j = run({"coeffs", "0", "4"});
        const json doc = json::parse(j.out);
        CHECK(doc["result"]["signs"] == "+ + + -");
        CHECK(doc["ok"] == true);
        CHECK(doc["schema_version"] == kSchemaVersion);
        CHECK(doc["config"]["grid_log2"] == 20);
    }

    TEST_CASE("f, f2 and g enclosures")
    {
        json doc = json::parse(run({"--grid-log2", "14", "f", "1.1"}).out);
        CHECK(doc["result"]["f"]["lo"].get<double>() == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(doc["result"]["mid"].get<double>() == doctest::Approx(5.0).epsilon(1e-5));
        doc = json::parse(run({"--grid-log2", "14", "g", "1.", "10."}).out);
        CHECK(doc["result"]["g"]["lo"].get<double>() <= 10.0);
        CHECK(doc["result"]["g"]["hi"].get<double>() >= 10.0);
        CHECK(doc["result"]["mid"].get<double>() == doctest::Approx(10.0));
        doc = json::parse(run({"--grid-log2", "14", "f2", "0.", "100."}).out);
        CHECK(doc["result"]["mid"].get<double>() == doctest::Approx(8.0));
    }

    TEST_CASE("invalid input gives a JSON error and exit code 2")
    {
        Run r = run({"f", "1.2"});
        CHECK(r.code == 2);
        json doc = json::parse(r.out);
        CHECK(doc["ok"] == false);
        CHECK(doc["error"]["type"] == "precondition");
        r = run({"--grid-log2", "30", "f", "1."});
        CHECK(r.code == 2);
        CHECK(json::parse(r.out)["error"]["type"] == "invalid_arguments");
        r = run({"nosuch"});
        CHECK(r.code == 2);
        r = run({"eval", "0", "4", "--z", "2,0"});
        CHECK(r.code == 2);
        CHECK(json::parse(r.out)["error"]["type"] == "domain");
    }

    TEST_CASE("eval at a point and on the grid")
    {
        const fs::path dir = scratch_dir("eval");
        const Run r = run({"--grid-log2", "6", "--out-dir", dir.string(), "eval", "0", "8", "--z", "1,0", "--grid"});
        CHECK(r.code == 0);
        const json doc = json::parse(r.out);
        CHECK(doc["result"]["point"]["value"][0].get<double>() == doctest::Approx(4.0));
        const std::string csv = read_file(dir / "eval_grid.csv");
        CHECK(csv.rfind("# config: ", 0) == 0);
        CHECK(csv.find("j,re,im,abs") != std::string::npos);
    }

    TEST_CASE("certify-f with a built-in table and with a file")
    {
        const fs::path dir = scratch_dir("certf");
        Run r = run({"--grid-log2", "18", "--out-dir", dir.string(), "certify-f", "--table", "table2"});
        CHECK(r.code == 0);
        json doc = json::parse(r.out);
        CHECK(doc["result"]["covered"] == true);
        CHECK(doc["result"]["records"].size() == 6);
        CHECK(fs::exists(dir / "certify_f.json"));

        const fs::path table = dir / "centers.txt";
        std::ofstream(table) << "1.101\n1.11\n";
        r = run({"--grid-log2", "18", "--out-dir", dir.string(), "certify-f", "--table", table.string(), "--target",
                 "9", "--interval", "1.1001", "10."});
        CHECK(r.code == 1);
        doc = json::parse(r.out);
        CHECK(doc["ok"] == false);
        CHECK(doc["error"]["type"] == "check_failed");
        CHECK(doc["result"].contains("first_gap"));

        r = run({"--out-dir", dir.string(), "certify-f", "--table", table.string()});
        CHECK(r.code == 2);
    }

    TEST_CASE("identical configuration gives identical output apart from the timestamp")
    {
        const fs::path dir = scratch_dir("repeat");
        const std::vector<std::string> args{"--grid-log2", "12", "--max-scale", "3", "--out-dir", dir.string(), "certify-f2"};
        json a = json::parse(run(args).out);
        const std::string csv_a = read_file(dir / "certify_f2_squares.csv");
        const std::string log_a = read_file(dir / "certify_f2.json");
        json b = json::parse(run(args).out);
        CHECK(read_file(dir / "certify_f2_squares.csv") == csv_a);
        CHECK(read_file(dir / "certify_f2.json") == log_a);
        a.erase("timestamp");
        b.erase("timestamp");
        CHECK(a.dump() == b.dump());
        CHECK(json::parse(log_a)["config"]["max_scale"] == 3);
    }

    TEST_CASE("environment overrides the output directory")
    {
        const fs::path dir = scratch_dir("env");
        setenv("RSCERT_OUT_DIR", dir.string().c_str(), 1);
        const Run r = run({"--grid-log2", "10", "dense", "--m", "0", "--n", "1", "--kmax", "3"});
        unsetenv("RSCERT_OUT_DIR");
        CHECK(r.code == 0);
        CHECK(fs::exists(dir / "dense.csv"));
        CHECK(json::parse(r.out)["config"]["out_dir"] == dir.string());
    }

    TEST_CASE("experiment commands")
    {
        Run r = run({"extremal", "--k", "5"});
        CHECK(r.code == 0);
        json doc = json::parse(r.out);
        CHECK(doc["result"]["rows"][0]["at_one"] == 94);
        CHECK(doc["result"]["rows"][0]["at_minus_one"] == -30);
        r = run({"--grid-log2", "16", "montgomery", "--k", "8"});
        CHECK(r.code == 0);
        CHECK(json::parse(r.out)["result"]["point_ratio"].get<double>() > 9.0);
        r = run({"montgomery", "--k", "0"});
        CHECK(r.code == 1);
        r = run({"--seed", "3", "sphere", "--k", "6", "--count", "64"});
        CHECK(r.code == 0);
        r = run({"--grid-log2", "10", "reflection", "--k", "2"});
        CHECK(r.code == 0);
        r = run({"brute-twodim", "--n-max", "40"});
        CHECK(r.code == 0);
        r = run({"--grid-log2", "12", "brute-onedim", "--n-max", "100"});
        CHECK(r.code == 0);
        r = run({"--grid-log2", "12", "smallk", "--kind", "upper"});
        CHECK(r.code == 0);
    }

    TEST_CASE("figures writes the CSVs")
    {
        const fs::path dir = scratch_dir("figures");
        const Run r = run({"--grid-log2", "12", "--out-dir", dir.string(), "figures", "--fig1-scale", "4"});
        CHECK(r.code == 0);
        const std::string fig1 = read_file(dir / "figure1.csv");
        CHECK(fig1.find("x,f_lo,f_hi") != std::string::npos);
        std::size_t lines = 0;
        for (char c : fig1)
            lines += c == '\n';
        CHECK(lines == 2 + 17);
        CHECK(read_file(dir / "figure2_g.csv").find("k,r,s,status") != std::string::npos);
        CHECK(fs::exists(dir / "figure2_f2.csv"));
    }
}
