#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "pnpk/error.hpp"
#include "pnpk/table.hpp"

using namespace pnpk;
namespace fs = std::filesystem;

namespace {
struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "pnpk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

double number(const Cell& c) { return std::get<double>(c); }

double column_sum_trapezoid(const Table& t, std::size_t col) {
    const std::size_t n = t.rows.size();
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += number(t.rows[i][col]) * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
    return s / double(n - 1);
}

double sup_diff(const Table& a, const Table& b, std::size_t col) {
    REQUIRE(a.rows.size() == b.rows.size());
    double m = 0;
    for (std::size_t i = 0; i < a.rows.size(); ++i) m = std::max(m, std::abs(number(a.rows[i][col]) - number(b.rows[i][col])));
    return m;
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("pnpk_cli_test_" + std::to_string(::getpid()));
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};
}  // namespace

TEST_CASE("format_number round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0, 1e300, 123456789.125}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(-3.0) == "-3");
}

TEST_CASE("table CSV and JSON") {
    Table t;
    t.header = {"name", "x", "y"};
    t.rows = {{std::string("a"), 0.1, 1.0 / 3.0}, {std::string("b"), -2.0, 1e-300}};
    t.meta = {{"k", 1.5}, {"s", "text"}};
    const std::string csv = t.to_csv();
    CHECK(csv.rfind("name,x,y\n", 0) == 0);
    CHECK(csv.find("\n# {") != std::string::npos);
    CHECK(csv.find('\r') == std::string::npos);
    const Table back = Table::from_csv(csv);
    CHECK(back.to_csv() == csv);
    CHECK(back.meta == t.meta);
    const Table via_json = Table::from_json(nlohmann::json::parse(t.to_json().dump()));
    CHECK(via_json.to_csv() == csv);

    CHECK_THROWS_AS(Table::from_csv(""), Error);
    CHECK_THROWS_AS(Table::from_csv("a,b\n1,2,3\n"), Error);
    CHECK_THROWS_AS(Table::from_csv("a,b\n1,2\n# {not json\n"), Error);
}

TEST_CASE("eig") {
    SUBCASE("zero root at kappa2 = 12") {
        const Run r = run({"eig", "--kappa2", "12", "--count", "1"});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("family,index,eigenvalue,residual,bracket_lo,bracket_hi\n", 0) == 0);
        const Table t = Table::from_csv(r.out);
        REQUIRE(t.rows.size() == 3);
        CHECK(std::get<std::string>(t.rows[2][0]) == "transcendental");
        CHECK(std::abs(number(t.rows[2][2])) < 1e-8);
        CHECK(t.meta["degenerate"] == true);
    }
    SUBCASE("row count") {
        const Table t = Table::from_csv(run({"eig", "--kappa2", "4", "--count", "3"}).out);
        CHECK(t.rows.size() == 7);
    }
    SUBCASE("deterministic, and JSON carries the same values") {
        const Run a = run({"eig", "--kappa2", "4", "--count", "5"});
        const Run b = run({"eig", "--kappa2", "4", "--count", "5"});
        CHECK(a.out == b.out);
        const Run j = run({"eig", "--kappa2", "4", "--count", "5", "--format", "json"});
        CHECK(Table::from_json(nlohmann::json::parse(j.out)).to_csv() == a.out);
    }
    SUBCASE("bad flags") {
        CHECK(run({"eig"}).code == 2);
        CHECK(run({"eig", "--kappa2", "abc"}).code == 2);
        CHECK(run({"eig", "--kappa2", "-1"}).code == 2);
        CHECK(run({"eig", "--kappa2", "1", "--count", "0"}).code == 2);
        CHECK(run({"eig", "--kappa2", "1", "--format", "xml"}).code == 2);
        CHECK(run({"eig", "--kappa2", "1", "--bogus"}).code == 2);
        CHECK(run({"nonsense"}).code == 2);
        const Run r = run({"eig", "--kappa2", "-1"});
        CHECK(r.err.rfind("error: ", 0) == 0);
    }
}

TEST_CASE("kernel") {
    SUBCASE("series output integrates to one and records its setup") {
        const Table t = Table::from_csv(run({"kernel", "--kappa2", "1", "--y", "0.3", "--t", "0.1"}).out);
        CHECK(t.header == std::vector<std::string>{"x", "K"});
        CHECK(t.rows.size() == 501);
        CHECK(std::abs(column_sum_trapezoid(t, 1) - 1.0) < 1e-6);
        // the trapezoid bias h^2/12 |K'(1) - K'(0)| grows with the boundary flux, about k2 h^2/3
        const Table f = Table::from_csv(run({"kernel", "--kappa2", "4", "--y", "0.3", "--t", "0.1", "--grid", "2001"}).out);
        CHECK(std::abs(column_sum_trapezoid(f, 1) - 1.0) < 1e-6);
        CHECK(t.meta["method"] == "series");
        CHECK(t.meta.contains("modes"));
        CHECK(t.meta.contains("calibration_hash"));
    }
    SUBCASE("series and fd agree at t = 0.1") {
        const Table s = Table::from_csv(run({"kernel", "--kappa2", "4", "--y", "0.3", "--t", "0.1", "--grid", "513"}).out);
        const Table f = Table::from_csv(
            run({"kernel", "--kappa2", "4", "--y", "0.3", "--t", "0.1", "--grid", "513", "--method", "fd"}).out);
        CHECK(sup_diff(s, f, 1) < 1e-3);
    }
    SUBCASE("bromwich reproduces series") {
        const Table s = Table::from_csv(run({"kernel", "--kappa2", "1", "--y", "0.6", "--t", "0.2", "--grid", "11"}).out);
        const Table b = Table::from_csv(
            run({"kernel", "--kappa2", "1", "--y", "0.6", "--t", "0.2", "--grid", "11", "--method", "bromwich"}).out);
        CHECK(sup_diff(s, b, 1) < 1e-4);
    }
    SUBCASE("below the series floor") {
        const Run r = run({"kernel", "--kappa2", "4", "--y", "0.3", "--t", "0.001", "--grid", "65"});
        CHECK(r.code == 3);
        const Run f = run({"kernel", "--kappa2", "4", "--y", "0.3", "--t", "0.001", "--grid", "65", "--fallback"});
        CHECK(f.code == 0);
        CHECK(Table::from_csv(f.out).meta["method"] == "fd");
    }
}

TEST_CASE("evolve") {
    TempDir tmp;
    SUBCASE("uniform init keeps its mass") {
        const Run r = run({"evolve", "--kappa2", "4", "--init", "uniform", "--t-end", "1", "--dt", "1e-3", "--nx", "129"});
        REQUIRE(r.code == 0);
        const Table t = Table::from_csv(r.out);
        CHECK(t.header == std::vector<std::string>{"x", "u"});
        CHECK(t.meta["mass_drift"].get<double>() < 1e-9);
        CHECK(t.meta["min_value"].get<double>() > 0.0);
    }
    SUBCASE("delta init is the fd kernel") {
        const Table e = Table::from_csv(
            run({"evolve", "--kappa2", "4", "--init", "delta:0.5", "--t-end", "0.1", "--nx", "257"}).out);
        const Table k = Table::from_csv(
            run({"kernel", "--kappa2", "4", "--y", "0.5", "--t", "0.1", "--grid", "257", "--method", "fd"}).out);
        CHECK(sup_diff(e, k, 1) == 0.0);
    }
    SUBCASE("file init") {
        const Run base = run({"evolve", "--kappa2", "1", "--init", "delta:0.3", "--t-end", "0.05", "--nx", "129"});
        const std::string path = tmp.file("init.csv");
        std::ofstream(path) << base.out;
        const Run r = run({"evolve", "--kappa2", "1", "--init", "file:" + path, "--t-end", "0.05"});
        REQUIRE(r.code == 0);
        CHECK(Table::from_csv(r.out).rows.size() == 129);
    }
    SUBCASE("malformed init file") {
        const std::string path = tmp.file("bad.csv");
        std::ofstream(path) << "x,u\n0,1\n0.5\n1,1\n";
        CHECK(run({"evolve", "--kappa2", "1", "--init", "file:" + path, "--t-end", "0.05"}).code == 2);
        std::ofstream(path) << "a,b\n0,1\n1,1\n";
        CHECK(run({"evolve", "--kappa2", "1", "--init", "file:" + path, "--t-end", "0.05"}).code == 2);
        CHECK(run({"evolve", "--kappa2", "1", "--init", "file:" + tmp.file("missing.csv"), "--t-end", "0.05"}).code == 2);
        CHECK(run({"evolve", "--kappa2", "1", "--init", "sideways", "--t-end", "0.05"}).code == 2);
    }
    SUBCASE("writes to --out") {
        const std::string path = tmp.file("final.csv");
        const Run r = run({"evolve", "--kappa2", "1", "--init", "uniform", "--t-end", "0.01", "--nx", "65", "--out", path});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        CHECK(fs::file_size(path) > 0);
    }
}

TEST_CASE("simulate") {
    const std::vector<std::string> args{"simulate", "--kappa2", "4", "--y0", "0.3", "--t", "0.1", "--particles", "20000"};
    const Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const Table t = Table::from_csv(a.out);
    CHECK(t.header == std::vector<std::string>{"bin_center", "density"});
    CHECK(t.rows.size() == 100);
    CHECK(t.meta.contains("mean_jumps"));
    CHECK(t.meta.contains("frac_to_left"));
    CHECK(t.meta["l1_series"].get<double>() < 0.1);
    CHECK(run({"simulate", "--kappa2", "4", "--y0", "1.3", "--t", "0.1"}).code == 2);
    CHECK(run({"simulate", "--kappa2", "4", "--y0", "0.3", "--t", "0.1", "--bins", "3"}).code == 2);
    CHECK(run({"simulate", "--kappa2", "4", "--y0", "0.3"}).code == 2);
}

TEST_CASE("validate writes a report") {
    TempDir tmp;
    const std::string path = tmp.file("report.json");
    const Run r = run({"validate", "--kappa2", "4", "--level", "quick", "--out", path});
    CHECK((r.code == 0 || r.code == 1));
    std::ifstream f(path);
    REQUIRE(f.good());
    const auto j = nlohmann::json::parse(f);
    for (const char* key : {"timestamp", "params", "checks", "calibration", "discrepancy_ledger"}) CHECK(j.contains(key));
    CHECK(!j["discrepancy_ledger"].empty());
    bool all = true;
    for (const auto& c : j["checks"]) {
        CHECK(c["tolerance"].get<double>() > 0);
        CHECK(c.contains("name"));
        all = all && c["passed"].get<bool>();
    }
    CHECK(r.code == (all ? 0 : 1));
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(run({"validate", "--kappa2", "4,x"}).code == 2);
    CHECK(run({"validate", "--level", "medium"}).code == 2);
}
