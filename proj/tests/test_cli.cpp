#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bt/report.hpp"

using bt::Json;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = [] {
    fs::path p = fs::temp_directory_path() / "btkit-cli-tests";
    fs::create_directories(p);
    return p;
}();

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

int run_cmd(const std::string& args) {
    std::string cmd = std::string("'") + BTKIT_BIN + "' " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

Json read_json(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    return Json::parse(f);
}

std::string read_text(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("help and usage errors", "[cli]") {
    CHECK(run_cmd("--help") == 0);
    CHECK(run_cmd("sphere --help") == 0);
    CHECK(run_cmd("") == 2);
    CHECK(run_cmd("frobnicate") == 2);
}

TEST_CASE("lemmas command emits a full report", "[cli]") {
    fs::path out = kTmp / "lemmas.json";
    REQUIRE(run_cmd("lemmas --n 2 --max-len 5 --max-k 3 --out " + quoted(out)) == 0);
    Json doc = read_json(out);
    CHECK(doc["command"] == "lemmas");
    CHECK(doc["pass"] == true);
    REQUIRE(doc["reports"].is_array());
    CHECK(doc["reports"].size() >= 2);
    for (const auto& rep : doc["reports"]) {
        CHECK(rep["violations"].is_array());
        CHECK(rep["violations"].empty());
    }
    CHECK(doc["counts"]["words_checked"].get<std::uint64_t>() > 0);
    CHECK(doc.contains("timing"));
}

TEST_CASE("orbit and freeness commands pass", "[cli]") {
    CHECK(run_cmd("orbit --n 2 --omega 't s' --max-len 5") == 0);
    CHECK(run_cmd("freeness --max-len 5") == 0);
}

TEST_CASE("bad arguments exit with code 2", "[cli]") {
    CHECK(run_cmd("lemmas --n 1") == 2);
    CHECK(run_cmd("lemmas --max-len 0") == 2);
    CHECK(run_cmd("orbit --n 2 --max-len 5") == 2);  // --omega is required
    CHECK(run_cmd("orbit --n 2 --omega '' --max-len 5") == 2);
    CHECK(run_cmd("orbit --n 2 --omega 'x y' --max-len 5") == 2);
    CHECK(run_cmd("orbit --n 2 --omega 's t S' --max-len 5") == 2);  // not cyclically reduced
    CHECK(run_cmd("ball --n 2 --depth 2 --radii '1/2'") == 2);       // no unit layer
    CHECK(run_cmd("ball --n 2 --depth 2 --radii '1,1'") == 2);
    CHECK(run_cmd("ball --n 2 --depth 2 --seed '1,1,1'") == 2);  // not a unit vector
    CHECK(run_cmd("ball --n 2 --depth 2 --seed '0,1'") == 2);
    CHECK(run_cmd("export --in " + quoted(kTmp / "no-such.csv") +
                  " --format ply --out-file " + quoted(kTmp / "x.ply")) == 2);
}

TEST_CASE("fixed seed points are rejected with exit 1", "[cli]") {
    CHECK(run_cmd("sphere --n 2 --depth 2 --seed '0,0,1'") == 1);
}

TEST_CASE("witness descriptors replay from disk", "[cli]") {
    fs::path out = kTmp / "witness.json";
    REQUIRE(run_cmd("witness --n 2 --max-len 4 --out " + quoted(out)) == 0);
    Json doc = read_json(out);
    REQUIRE(doc["pass"] == true);
    Json desc = doc["witness"];

    fs::path replay = kTmp / "replay.json";
    std::ofstream(replay) << desc.dump(2);
    CHECK(run_cmd("witness --replay " + quoted(replay) + " --max-len 4") == 0);

    Json bad = desc;
    bad["groups"][1]["movers"][1] = "s";  // wrong mover breaks the pairing
    fs::path badfile = kTmp / "replay-bad.json";
    std::ofstream(badfile) << bad.dump(2);
    CHECK(run_cmd("witness --replay " + quoted(badfile) + " --max-len 4") == 1);

    fs::path mangled = kTmp / "replay-mangled.json";
    std::ofstream(mangled) << "{not json";
    CHECK(run_cmd("witness --replay " + quoted(mangled) + " --max-len 4") == 2);
}

TEST_CASE("point exports convert between formats", "[cli]") {
    fs::path csv = kTmp / "points.csv";
    REQUIRE(run_cmd("sphere --n 2 --depth 2 --csv " + quoted(csv)) == 0);
    std::string csv_text = read_text(csv);
    CHECK(csv_text.rfind("x,y,z,layer_radius,piece_label,word\n", 0) == 0);

    fs::path ply = kTmp / "points.ply";
    REQUIRE(run_cmd("export --in " + quoted(csv) + " --format ply --out-file " +
                    quoted(ply)) == 0);
    CHECK(read_text(ply).rfind("ply\nformat ascii 1.0\n", 0) == 0);

    // csv → csv re-export reproduces the file byte for byte
    fs::path csv2 = kTmp / "points2.csv";
    REQUIRE(run_cmd("export --in " + quoted(csv) + " --format csv --out-file " +
                    quoted(csv2)) == 0);
    CHECK(read_text(csv2) == csv_text);
}

TEST_CASE("reports are identical for any worker count", "[cli]") {
    fs::path f1 = kTmp / "det1.json";
    fs::path f2 = kTmp / "det2.json";
    REQUIRE(run_cmd("lemmas --n 2 --max-len 6 --workers 1 --out " + quoted(f1)) == 0);
    REQUIRE(run_cmd("lemmas --n 2 --max-len 6 --workers 2 --out " + quoted(f2)) == 0);
    Json a = read_json(f1), b = read_json(f2);
    CHECK(a["parameters"]["workers"] == 1);
    CHECK(b["parameters"]["workers"] == 2);
    // everything except the timing block and the echoed worker count must agree
    for (Json* doc : {&a, &b}) {
        doc->erase("timing");
        (*doc)["parameters"].erase("workers");
    }
    CHECK(a.dump() == b.dump());
}

TEST_CASE("ball command exports layered points", "[cli]") {
    fs::path out = kTmp / "ball.json";
    fs::path csv = kTmp / "ball.csv";
    REQUIRE(run_cmd("ball --n 2 --depth 2 --radii '1,1/2' --csv " + quoted(csv) +
                    " --out " + quoted(out)) == 0);
    Json doc = read_json(out);
    CHECK(doc["pass"] == true);
    CHECK(doc["witness"]["groups"].size() == 2);
    std::string text = read_text(csv);
    CHECK(text.find(",0,A_0,") != std::string::npos);   // the origin row
    CHECK(text.find(",x_1,") != std::string::npos);     // the singleton piece
    CHECK(text.find(",0.5,") != std::string::npos);     // the inner layer radius
}
