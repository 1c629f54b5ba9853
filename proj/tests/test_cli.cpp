#include <doctest.h>

#include "polycover/cli.hpp"
#include "polycover/io.hpp"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace polycover;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
    io::Json json() const { return io::Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("polycover_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

const char* kSquare = R"({"dim": 2, "vertices": [[0,0],[1,0],[1,1],[0,1]]})";
const char* kBigSquare = R"({"dim": 2, "vertices": [[0,0],[2,0],[2,2],[0,2]]})";

std::string without_timestamp(const std::string& report) {
    io::Json j = io::Json::parse(report);
    j.erase("timestamp");
    return j.dump();
}

}  // namespace

TEST_CASE("cli: fit reports the verdict and sigma") {
    TempDir dir;
    const Run r = run({"fit", dir.write("sq.json", kSquare), dir.write("big.json", kBigSquare)});
    REQUIRE(r.code == 0);
    const io::Json j = r.json();
    CHECK(j["command"] == "fit");
    CHECK(j["result"]["fits"] == true);
    CHECK(j["result"]["sigma"].get<double>() == doctest::Approx(2.0));
    CHECK(j["tolerances"]["geom"].get<double>() == 1e-6);
    CHECK(j.contains("timestamp"));

    const Run back = run({"fit", dir.file("big.json"), dir.file("sq.json")});
    REQUIRE(back.code == 0);
    CHECK(back.json()["result"]["fits"] == false);
}

TEST_CASE("cli: malformed JSON reports line and column") {
    TempDir dir;
    const std::string bad = dir.write("bad.json", "{\"dim\": 2,\n \"vertices\": [[0,0],[1,0]],,}");
    const Run r = run({"fit", bad, dir.write("big.json", kBigSquare)});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2, column 28") != std::string::npos);
}

TEST_CASE("cli: ragged and non-numeric bodies are input errors") {
    TempDir dir;
    const std::string big = dir.write("big.json", kBigSquare);
    CHECK(run({"fit", dir.write("r.json", R"({"dim": 2, "vertices": [[0,0],[1]]})"), big}).code == 2);
    CHECK(run({"fit", dir.write("s.json", R"({"dim": 2, "vertices": [[0,"a"]]})"), big}).code == 2);
    CHECK(run({"fit", dir.file("missing.json"), big}).code == 2);
}

TEST_CASE("cli: unknown flags and commands exit 2") {
    TempDir dir;
    CHECK(run({"fit", dir.write("sq.json", kSquare), dir.write("big.json", kBigSquare), "--bogus"}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: precondition failures exit 2") {
    TempDir dir;
    const std::string seg = dir.write("seg.json", R"({"dim": 3, "vertices": [[0,0,0],[1,0,0]]})");
    CHECK(run({"meanwidth", seg, "--exact"}).code == 2);
    CHECK(run({"shadow-sweep", dir.write("sq.json", kSquare), dir.write("big.json", kBigSquare), "--d", "2"}).code ==
          2);
}

TEST_CASE("cli: witness and shadow sweep") {
    TempDir dir;
    const std::string sq = dir.write("sq.json", kSquare);
    const std::string small = dir.write("small.json", R"({"dim": 2, "vertices": [[0,0],[0.9,0],[0.9,0.9],[0,0.9]]})");
    const Run w = run({"witness", sq, small, "--k", "3"});
    REQUIRE(w.code == 0);
    CHECK(w.json()["result"]["all_subsets_fit"] == false);

    const Run s = run({"shadow-sweep", sq, small, "--d", "1", "--samples", "64"});
    REQUIRE(s.code == 0);
    CHECK(s.json()["result"]["verdict"] == "fails");
}

TEST_CASE("cli: identical arguments give identical reports") {
    TempDir dir;
    const std::string sq = dir.write("sq.json", kSquare);
    const std::string big = dir.write("big.json", kBigSquare);
    const std::vector<std::string> args = {"oblique", sq, big, "--seed", "9", "--trials", "5"};
    const Run a = run(args);
    const Run b = run(args);
    REQUIRE(a.code == 0);
    CHECK(without_timestamp(a.out) == without_timestamp(b.out));

    const std::vector<std::string> suite = {"verify-suite", "--n", "2", "--trials", "6", "--seed", "3"};
    CHECK(without_timestamp(run(suite).out) == without_timestamp(run(suite).out));
}

TEST_CASE("cli: tetra-quad then counterexample on its quadrilateral") {
    TempDir dir;
    const std::string q = dir.file("q.json");
    const Run tq = run({"tetra-quad", "--q-out", q, "--directions", "500"});
    REQUIRE(tq.code == 0);
    const Run ce = run({"counterexample", q, "--d", "2", "--directions", "500", "--seed", "1"});
    REQUIRE(ce.code == 0);
    const io::Json j = ce.json()["result"];
    CHECK(j["epsilon"].get<double>() > 1.0);
    CHECK(j["contains_translate"] == false);
    CHECK(j["checks"]["farkas_certified"] == true);
}

TEST_CASE("cli: --output writes the report to a file") {
    TempDir dir;
    const std::string out = dir.file("report.json");
    const Run r = run({"fit", dir.write("sq.json", kSquare), dir.write("big.json", kBigSquare), "--output", out});
    REQUIRE(r.code == 0);
    std::ifstream in(out);
    const io::Json j = io::Json::parse(in);
    CHECK(j["result"]["sigma"].get<double>() == doctest::Approx(2.0));
}
