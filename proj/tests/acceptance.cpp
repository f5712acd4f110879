// Acceptance sweep for the exact duplication library: each criterion prints
// one PASS/FAIL line; the binary exits nonzero if any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bt/exportio.hpp"
#include "bt/geometry.hpp"
#include "bt/orbit.hpp"
#include "bt/paradox.hpp"
#include "bt/partition.hpp"
#include "bt/report.hpp"
#include "bt/rng.hpp"
#include "bt/word.hpp"

using namespace bt;
namespace fs = std::filesystem;

namespace {

constexpr int kWorkers = 4;

struct Ctx {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        ok = false;
        detail += "        - " + msg + "\n";
    }
    void require(bool cond, const std::string& msg) {
        if (!cond) fail(msg);
    }
    void report(const VerifyReport& rep, const std::string& what) {
        if (rep.pass()) return;
        std::string msg =
            what + ": " + std::to_string(rep.violations.size()) + " violation(s)";
        if (!rep.violations.empty()) {
            const Violation& v = rep.violations.front();
            msg += "; first at '" + v.word.str() + "': " + v.detail;
        }
        fail(msg);
    }
};

const SpherePoint kSeed = SpherePoint::unit({0, 1, 0});

const std::vector<std::string> kOmegaSuite{"t s", "t s t", "t^2 S", "S", "s^-2", "s^-3"};

// ---- criterion bodies -----------------------------------------------------

void base_pairing(Ctx& c) {
    for (int n = 2; n <= 5; ++n) {
        VerifyReport rep = verify_base_pairing(n, 10, kWorkers);
        c.report(rep, "base pairing n=" + std::to_string(n));
        c.require(rep.words_checked == reduced_word_count(10),
                  "base pairing n=" + std::to_string(n) + " word count off");
        VerifyReport pw = power_membership_sweep(n, 6);
        c.report(pw, "power membership n=" + std::to_string(n));
        c.require(pw.words_checked ==
                      static_cast<std::uint64_t>(n) * 6 * (n - 1),
                  "power membership n=" + std::to_string(n) + " sweep size off");
    }
}

void general_pairing(Ctx& c) {
    for (int n = 2; n <= 5; ++n) {
        std::vector<Word> suite = general_omega_suite(n);
        c.require(suite.size() >= static_cast<std::size_t>(2 * n + 1),
                  "general omega suite too small for n=" + std::to_string(n));
        for (const Word& w : suite) {
            TheoremPartition p = TheoremPartition::general(n, w);
            VerifyReport rep = verify_theorem_pairing(p, 10, kWorkers);
            c.report(rep, "general pairing n=" + std::to_string(n) + " omega='" +
                              w.str() + "'");
        }
    }
}

void tau_pairing(Ctx& c) {
    for (int n = 2; n <= 5; ++n) {
        for (const Word& w : tau_omega_suite(n)) {
            TheoremPartition p = TheoremPartition::tau_initial(n, w);
            VerifyReport rep = verify_theorem_pairing(p, 10, kWorkers);
            c.report(rep, "tau-initial pairing n=" + std::to_string(n) + " omega='" +
                              w.str() + "'");
        }
    }
}

void canonical_uniqueness(Ctx& c) {
    for (const std::string& text : kOmegaSuite) {
        StabilizedOrbit orbit = StabilizedOrbit::from_normalized(Word::parse(text));
        VerifyReport rep = verify_canonical_uniqueness(orbit, 9, kWorkers);
        c.report(rep, "canonical uniqueness omega='" + text + "'");

        int bound = std::min<int>(6 * static_cast<int>(orbit.omega().length()), 12);
        VerifyReport stab = verify_basepoint_stabilizer(orbit, bound, kWorkers);
        c.report(stab, "basepoint stabilizer omega='" + text + "'");
    }
}

void orbit_pairing(Ctx& c) {
    for (const std::string& text : kOmegaSuite) {
        StabilizedOrbit orbit = StabilizedOrbit::from_normalized(Word::parse(text));
        for (int n : {2, 3, 4}) {
            OrbitPartition part = OrbitPartition::build(n, orbit);
            VerifyReport rep = verify_orbit_pairing(part, 9, kWorkers);
            c.report(rep, "orbit pairing n=" + std::to_string(n) + " omega='" + text +
                              "'");
            c.require(rep.words_checked > 0,
                      "orbit pairing checked nothing for omega='" + text + "'");
        }
    }
}

void witness_validation(Ctx& c) {
    for (int n = 2; n <= 5; ++n) {
        ParadoxWitness<Word> w = free_group_witness(n);
        c.require(static_cast<int>(w.total_pieces()) == 2 * n,
                  "witness n=" + std::to_string(n) + " is not 2n pieces");
        c.require(lower_bound_holds(w),
                  "witness n=" + std::to_string(n) + " misses the 2n lower bound");
        VerifyReport rep = validate_word_witness(w, 10, kWorkers);
        c.report(rep, "witness n=" + std::to_string(n));
    }

    // every mutant must be caught by at least one violation
    {
        ParadoxWitness<Word> bad = free_group_witness(3);
        bad.groups[1].pieces.pop_back();
        VerifyReport rep = validate_word_witness(bad, 8, kWorkers);
        c.require(!rep.pass() && !rep.violations.empty(),
                  "dropping a piece went undetected");
    }
    {
        ParadoxWitness<Word> bad = free_group_witness(3);
        Word g1 = gamma(3, 1);
        bad.groups[0].pieces[1].mover_inverse = [g1](const Word& y) {
            return concat(g1.inverse(), y);
        };
        VerifyReport rep = validate_word_witness(bad, 8, kWorkers);
        c.require(!rep.pass() && !rep.violations.empty(),
                  "swapping a mover went undetected");
    }
    {
        ParadoxWitness<Word> bad = free_group_witness(3);
        auto orig = bad.groups[0].pieces[0].member;
        bad.groups[0].pieces[0].member = [orig](const Word& y) {
            return orig(y) && !(y == Word::parse("s t"));
        };
        VerifyReport rep = validate_word_witness(bad, 8, kWorkers);
        c.require(!rep.pass() && !rep.violations.empty(),
                  "shrinking a piece went undetected");
    }
}

void freeness(Ctx& c) {
    VerifyReport rep = freeness_scan(12, kWorkers);
    c.report(rep, "freeness sweep");
    c.require(rep.words_checked == 1062880, "expected 1062880 nonempty words");
    std::uint64_t formula = 2 * (static_cast<std::uint64_t>(531441) - 1);  // 2(3^12 - 1)
    c.require(rep.words_checked == formula, "count formula mismatch");
}

void sphere_demos(Ctx& c) {
    for (int n : {2, 3}) {
        GeometryDemo demo = sphere_demo(n, {kSeed}, 6, kWorkers);
        c.require(demo.pass(), "sphere demo n=" + std::to_string(n) + " failed");
        for (const VerifyReport& rep : demo.reports)
            c.report(rep, "sphere n=" + std::to_string(n) + " " + rep.lemma);
        c.require(demo.points.size() == 1457,
                  "sphere n=" + std::to_string(n) + " expected 1457 distinct points, got " +
                      std::to_string(demo.points.size()));
        std::set<std::string> labels;
        for (const auto& pt : demo.points) labels.insert(pt.label);
        c.require(labels.size() == static_cast<std::size_t>(2 * n),
                  "sphere n=" + std::to_string(n) + " expected 2n piece labels");
    }

    // a seed with a bounded-length stabilizing word must be rejected outright
    bool rejected = false;
    try {
        sphere_demo(2, {SpherePoint::unit({Rational(3, 5), Rational(4, 5), 0})}, 6,
                    kWorkers);
    } catch (const SeedStabilizerError& e) {
        rejected = e.word() == Word::parse("s t S");
        if (!rejected) c.fail("unexpected stabilizing word '" + e.word().str() + "'");
    }
    c.require(rejected, "fixed seed (3/5,4/5,0) was not rejected");
}

void hemisphere(Ctx& c) {
    SplitMix64 rng(9001);
    for (int trial = 0; trial < 100; ++trial) {
        Vec3 center = random_nonzero_center(rng);
        std::vector<SpherePoint> pts;
        pts.reserve(1000);
        for (int i = 0; i < 1000; ++i)
            pts.push_back(into_hemisphere(random_unit_point(rng), center));
        VerifyReport rep = hemisphere_separation_check(center, pts);
        c.report(rep, "hemisphere center " + center.str());
        c.require(rep.words_checked == 1000, "hemisphere points skipped unexpectedly");
        if (!c.ok) return;
    }
}

void ball_demos(Ctx& c) {
    std::vector<Rational> radii{1, Rational(1, 2), Rational(1, 3)};
    for (int n : {2, 3}) {
        GeometryDemo demo = ball_demo(n, kSeed, radii, 4, kWorkers);
        c.require(demo.pass(), "ball demo n=" + std::to_string(n) + " failed");
        for (const VerifyReport& rep : demo.reports)
            c.report(rep, "ball n=" + std::to_string(n) + " " + rep.lemma);

        const Json& groups = demo.witness_descriptor["groups"];
        c.require(groups.size() == static_cast<std::size_t>(n),
                  "ball n=" + std::to_string(n) + " expected n target groups");
        std::size_t pieces = 0, singletons = 0, pairs = 0, triples = 0;
        for (const auto& g : groups) {
            const Json& refs = g["piece_refs"];
            std::size_t sz = refs.size();
            pieces += sz;
            if (sz == 2) ++pairs;
            if (sz == 3) ++triples;
            for (const auto& ref : refs)
                if (ref["piece"].get<std::string>().rfind("x_", 0) == 0) ++singletons;
        }
        c.require(pieces == static_cast<std::size_t>(3 * n - 1),
                  "ball n=" + std::to_string(n) + " expected 3n-1 pieces");
        c.require(singletons == static_cast<std::size_t>(n - 1),
                  "ball n=" + std::to_string(n) + " expected n-1 singletons");
        c.require(pairs == 1 && triples == static_cast<std::size_t>(n - 1),
                  "ball n=" + std::to_string(n) + " group sizes off");
        if (n == 2)
            c.require(pieces == 5 && singletons == 1,
                      "doubling the ball must take five pieces, one a singleton");
    }
}

// ---- byte-identical CLI reports -------------------------------------------

const fs::path kTmp = [] {
    fs::path p = fs::temp_directory_path() / "bt-acceptance";
    fs::create_directories(p);
    return p;
}();

int run_cmd(const std::string& args) {
    std::string cmd = std::string("'") + BTKIT_BIN + "' " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    if (rc == -1 || !WIFEXITED(rc)) return -1;
    return WEXITSTATUS(rc);
}

std::string normalized_json(const fs::path& p) {
    std::ifstream f(p);
    if (!f) return "<unreadable>";
    Json doc = Json::parse(f, nullptr, false);
    if (doc.is_discarded()) return "<invalid json>";
    doc.erase("timing");
    doc["parameters"].erase("workers");
    return doc.dump();
}

std::string file_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void determinism(Ctx& c) {
    const std::vector<std::string> commands{
        "lemmas --n 3 --max-len 6 --max-k 4",
        "orbit --n 3 --omega 't s' --max-len 7",
        "freeness --max-len 7",
        "witness --n 3 --max-len 7",
        "sphere --n 2 --depth 3",
        "ball --n 2 --depth 3 --radii '1,1/2'",
    };
    int id = 0;
    for (const std::string& base : commands) {
        std::vector<std::string> dumps;
        for (int workers : {1, 1, 4}) {
            fs::path out = kTmp / ("det" + std::to_string(id++) + ".json");
            int rc = run_cmd(base + " --workers " + std::to_string(workers) + " --out '" +
                             out.string() + "'");
            c.require(rc == 0, "'" + base + "' exited " + std::to_string(rc));
            dumps.push_back(normalized_json(out));
        }
        c.require(dumps[0] == dumps[1], "'" + base + "' differs between repeat runs");
        c.require(dumps[0] == dumps[2], "'" + base + "' differs between worker counts");
    }

    fs::path csv1 = kTmp / "det-a.csv", csv4 = kTmp / "det-b.csv";
    c.require(run_cmd("sphere --n 2 --depth 3 --workers 1 --csv '" + csv1.string() +
                      "'") == 0,
              "csv export run failed");
    c.require(run_cmd("sphere --n 2 --depth 3 --workers 4 --csv '" + csv4.string() +
                      "'") == 0,
              "csv export run failed");
    c.require(!file_bytes(csv1).empty() && file_bytes(csv1) == file_bytes(csv4),
              "csv exports differ between worker counts");
}

struct Criterion {
    const char* name;
    void (*run)(Ctx&);
    long budget_ms;  // 0 = no explicit budget
};

const Criterion kCriteria[] = {
    {"base pairing and power membership to length 10", base_pairing, 120000},
    {"general-recipe pairing across the omega suites", general_pairing, 300000},
    {"tau-initial pairing across the omega suite", tau_pairing, 300000},
    {"canonical uniqueness and basepoint stabilizers", canonical_uniqueness, 0},
    {"orbit-level pairing across the omega suites", orbit_pairing, 300000},
    {"duplication witness validation and mutant detection", witness_validation, 0},
    {"rotation freeness sweep to length 12", freeness, 300000},
    {"sphere duplication demos at fragment depth 6", sphere_demos, 0},
    {"exact hemisphere separation on random centers", hemisphere, 0},
    {"layered ball duplication with 3n-1 pieces", ball_demos, 0},
    {"byte-identical reports for any worker count", determinism, 0},
};

}  // namespace

int main() {
    constexpr int kTotal = static_cast<int>(std::size(kCriteria));
    int passed = 0;
    for (int i = 0; i < kTotal; ++i) {
        const Criterion& crit = kCriteria[i];
        Ctx c;
        auto start = std::chrono::steady_clock::now();
        try {
            crit.run(c);
        } catch (const std::exception& e) {
            c.fail(std::string("unhandled exception: ") + e.what());
        }
        long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (crit.budget_ms > 0 && ms > crit.budget_ms)
            c.fail("exceeded the " + std::to_string(crit.budget_ms) + " ms budget");

        std::string label = crit.name;
        if (label.size() < 56) label += ' ' + std::string(56 - label.size() - 1, '.');
        std::printf("[%2d/%d] %s %s (%ld ms)\n", i + 1, kTotal, label.c_str(),
                    c.ok ? "PASS" : "FAIL", ms);
        if (!c.ok) std::fputs(c.detail.c_str(), stdout);
        std::fflush(stdout);
        if (c.ok) ++passed;
    }
    std::printf("%d/%d acceptance criteria passed\n", passed, kTotal);
    return passed == kTotal ? 0 : 1;
}
