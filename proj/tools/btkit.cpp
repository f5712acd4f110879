// Command-line driver: every subcommand runs exact verifications and emits
// one JSON report. Exit codes: 0 all checks pass, 1 a verification or
// certificate failed, 2 the invocation or configuration was unusable.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bt/exportio.hpp"
#include "bt/geometry.hpp"
#include "bt/orbit.hpp"
#include "bt/paradox.hpp"
#include "bt/partition.hpp"
#include "bt/report.hpp"
#include "bt/word.hpp"

namespace {

using bt::Json;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit(const Json& j, const std::string& out_path) {
    std::string text = j.dump(2);
    text += '\n';
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file '" + out_path + "'");
        f << text;
    }
}

int finish(Json& j, const std::vector<bt::VerifyReport>& reports, const Timer& timer,
           const std::string& out_path) {
    Json rs = Json::array();
    bool pass = true;
    std::uint64_t checked = 0;
    for (const auto& r : reports) {
        rs.push_back(r.to_json());
        pass = pass && r.pass();
        checked += r.words_checked;
    }
    j["reports"] = rs;
    j["counts"] = Json{{"words_checked", checked}};
    j["pass"] = pass;
    j["timing"] = Json{{"elapsed_ms", timer.elapsed_ms()}};
    emit(j, out_path);
    return pass ? 0 : 1;
}

bt::Vec3 parse_vec3(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == ',') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    if (parts.size() != 3)
        throw std::invalid_argument("expected three comma-separated rationals: '" + text +
                                    "'");
    return {bt::parse_rational(parts[0]), bt::parse_rational(parts[1]),
            bt::parse_rational(parts[2])};
}

std::vector<bt::Rational> parse_radii(const std::string& text) {
    std::vector<bt::Rational> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == ',') {
            out.push_back(bt::parse_rational(text.substr(start, i - start)));
            start = i + 1;
        }
    return out;
}

int run_lemmas(int n, int max_len, long max_k, int workers, const std::string& out_path) {
    Timer timer;
    Json j;
    j["command"] = "lemmas";
    j["parameters"] = Json{{"n", n}, {"max_len", max_len}, {"max_k", max_k},
                           {"workers", workers}};
    std::vector<bt::VerifyReport> reports;
    reports.push_back(bt::verify_base_pairing(n, max_len, workers));
    reports.push_back(bt::power_membership_sweep(n, max_k));
    for (const bt::Word& om : bt::general_omega_suite(n))
        reports.push_back(bt::verify_theorem_pairing(bt::TheoremPartition::general(n, om),
                                                     max_len, workers));
    for (const bt::Word& om : bt::tau_omega_suite(n))
        reports.push_back(bt::verify_theorem_pairing(
            bt::TheoremPartition::tau_initial(n, om), max_len, workers));
    return finish(j, reports, timer, out_path);
}

int run_orbit(int n, const std::string& omega_text, int max_len, int workers,
              const std::string& out_path) {
    Timer timer;
    bt::Word omega = bt::Word::parse(omega_text);
    bt::Normalization norm = bt::normalize_omega(omega);
    Json j;
    j["command"] = "orbit";
    j["parameters"] = Json{{"n", n}, {"omega", omega.str()}, {"max_len", max_len},
                           {"workers", workers}};

    std::vector<bt::VerifyReport> reports;
    bt::VerifyReport nr;
    nr.lemma = "normalization";
    nr.omega = omega.str();
    nr.note("normalized_omega", norm.orbit.omega().str());
    nr.note("normalization_transcript", norm.transcript);
    nr.note("variant", norm.orbit.sigma_power_form() ? "sigma-power" : "tau-initial");
    reports.push_back(std::move(nr));

    reports.push_back(bt::verify_canonical_uniqueness(norm.orbit, max_len, workers));
    int stab_len = std::min<int>(6 * static_cast<int>(norm.orbit.omega().length()), 12);
    reports.push_back(bt::verify_basepoint_stabilizer(norm.orbit, stab_len, workers));
    bt::OrbitPartition op = bt::OrbitPartition::build(n, norm.orbit);
    reports.push_back(bt::verify_orbit_pairing(op, max_len, workers));
    return finish(j, reports, timer, out_path);
}

int run_freeness(int max_len, int workers, const std::string& out_path) {
    Timer timer;
    Json j;
    j["command"] = "freeness";
    j["parameters"] = Json{{"max_len", max_len}, {"workers", workers}};
    std::vector<bt::VerifyReport> reports{bt::freeness_scan(max_len, workers)};
    return finish(j, reports, timer, out_path);
}

int run_witness(int n, int max_len, const std::string& replay, int workers,
                const std::string& out_path) {
    Timer timer;
    bt::ParadoxWitness<bt::Word> w;
    if (replay.empty()) {
        w = bt::free_group_witness(n);
    } else {
        std::ifstream f(replay);
        if (!f) throw std::invalid_argument("cannot open replay file '" + replay + "'");
        Json desc;
        try {
            desc = Json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("replay file is not valid JSON: " +
                                        std::string(e.what()));
        }
        try {
            w = bt::witness_from_descriptor(desc);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("malformed witness descriptor: " +
                                        std::string(e.what()));
        }
        n = w.n;
    }
    Json j;
    j["command"] = "witness";
    j["parameters"] = Json{{"n", n}, {"max_len", max_len},
                           {"replay", replay.empty() ? Json(nullptr) : Json(replay)},
                           {"workers", workers}};
    j["witness"] = w.descriptor();
    std::vector<bt::VerifyReport> reports;
    reports.push_back(bt::validate_word_witness(w, max_len, workers));
    reports.back().note("lower_bound_2n", 2 * w.n);
    reports.back().note("lower_bound_holds", bt::lower_bound_holds(w));
    if (!bt::lower_bound_holds(w))
        reports.back().violations.push_back(
            {bt::Word(), -1, "witness falls below the 2n piece lower bound"});
    return finish(j, reports, timer, out_path);
}

int run_sphere(int n, const std::vector<std::string>& seed_texts, int depth, int workers,
               const std::string& csv_path, const std::string& ply_path,
               const std::string& out_path) {
    Timer timer;
    std::vector<bt::SpherePoint> seeds;
    for (const auto& t : seed_texts) seeds.push_back(bt::SpherePoint::unit(parse_vec3(t)));
    Json j;
    j["command"] = "sphere";
    j["parameters"] = Json{{"n", n}, {"seeds", seed_texts}, {"depth", depth},
                           {"workers", workers}};
    bt::GeometryDemo demo = bt::sphere_demo(n, seeds, depth, workers);
    j["witness"] = demo.witness_descriptor;
    if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open '" + csv_path + "'");
        bt::write_points_csv(f, demo.points);
    }
    if (!ply_path.empty()) {
        std::ofstream f(ply_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open '" + ply_path + "'");
        bt::write_points_ply(f, demo.points);
    }
    return finish(j, demo.reports, timer, out_path);
}

int run_ball(int n, const std::string& seed_text, const std::string& radii_text, int depth,
             int workers, const std::string& csv_path, const std::string& ply_path,
             const std::string& out_path) {
    Timer timer;
    bt::SpherePoint seed = bt::SpherePoint::unit(parse_vec3(seed_text));
    std::vector<bt::Rational> radii = parse_radii(radii_text);
    Json j;
    j["command"] = "ball";
    j["parameters"] = Json{{"n", n}, {"seed", seed_text}, {"radii", radii_text},
                           {"depth", depth}, {"workers", workers}};
    bt::GeometryDemo demo = bt::ball_demo(n, seed, radii, depth, workers);
    j["witness"] = demo.witness_descriptor;
    if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open '" + csv_path + "'");
        bt::write_points_csv(f, demo.points);
    }
    if (!ply_path.empty()) {
        std::ofstream f(ply_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open '" + ply_path + "'");
        bt::write_points_ply(f, demo.points);
    }
    return finish(j, demo.reports, timer, out_path);
}

int run_export(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input '" + in_path + "'");
    std::vector<bt::CsvPointRow> rows = bt::read_points_csv(in);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output '" + out_path + "'");
    if (format == "ply") {
        bt::write_ply(out, rows);
    } else {
        out << bt::kPointsCsvHeader << "\n";
        for (const auto& r : rows)
            out << bt::fmt_double(r.x) << ',' << bt::fmt_double(r.y) << ','
                << bt::fmt_double(r.z) << ',' << bt::fmt_double(r.radius) << ',' << r.label
                << ',' << r.word << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact paradoxical decompositions: free-group partitions, orbit "
                 "transfer, and sphere/ball duplication witnesses"};
    app.require_subcommand(1);
    app.fallthrough();

    int workers = 1;
    std::string out_path;
    app.add_option("--workers", workers, "worker threads (output is identical for any count)")
        ->check(CLI::Range(1, 64));
    app.add_option("--out", out_path, "write the JSON report here instead of stdout");

    int n = 3, max_len = 10;
    long max_k = 6;
    auto* lemmas = app.add_subcommand("lemmas", "verify the word-level partition lemmas");
    lemmas->add_option("--n", n, "number of piece pairs")->check(CLI::Range(2, 16));
    lemmas->add_option("--max-len", max_len, "sweep every reduced word up to this length")
        ->check(CLI::Range(1, 16));
    lemmas->add_option("--max-k", max_k, "power bound for the γ-power membership sweep")
        ->check(CLI::Range(1L, 64L));

    std::string omega_text;
    int orbit_n = 3, orbit_len = 9;
    auto* orbit = app.add_subcommand("orbit", "verify canonical forms and the orbit pairing");
    orbit->add_option("--n", orbit_n, "number of piece pairs")->check(CLI::Range(2, 16));
    orbit->add_option("--omega", omega_text, "stabilizing word, e.g. 't s'")->required();
    orbit->add_option("--max-len", orbit_len, "sweep bound")->check(CLI::Range(1, 14));

    int free_len = 12;
    auto* freeness = app.add_subcommand("freeness", "scan rotation images for identities");
    freeness->add_option("--max-len", free_len, "sweep bound")->check(CLI::Range(1, 14));

    int wit_n = 3, wit_len = 10;
    std::string replay;
    auto* witness = app.add_subcommand("witness",
                                       "build or replay a duplication witness and validate it");
    witness->add_option("--n", wit_n, "number of target copies")->check(CLI::Range(2, 16));
    witness->add_option("--max-len", wit_len, "validation sweep bound")->check(CLI::Range(1, 14));
    witness->add_option("--replay", replay, "validate a stored witness descriptor (JSON)");

    int sph_n = 2, sph_depth = 6;
    std::vector<std::string> seed_texts;
    std::string csv_path, ply_path;
    auto* sphere = app.add_subcommand("sphere", "duplicate sphere orbits and label the points");
    sphere->add_option("--n", sph_n, "number of target copies")->check(CLI::Range(2, 16));
    sphere->add_option("--seed", seed_texts,
                       "exact unit seed 'x,y,z' (repeatable; default 0,1,0)");
    sphere->add_option("--depth", sph_depth, "orbit fragment depth")->check(CLI::Range(1, 10));
    sphere->add_option("--csv", csv_path, "export labeled points as CSV");
    sphere->add_option("--ply", ply_path, "export labeled points as PLY");

    int ball_n = 3, ball_depth = 4;
    std::string ball_seed = "0,1,0", radii_text = "1,1/2";
    std::string ball_csv, ball_ply;
    auto* ball = app.add_subcommand("ball", "duplicate the ball from 3n-1 pieces");
    ball->add_option("--n", ball_n, "number of target copies")->check(CLI::Range(2, 16));
    ball->add_option("--seed", ball_seed, "exact unit seed 'x,y,z'");
    ball->add_option("--radii", radii_text, "comma-separated layer radii in (0,1], must include 1");
    ball->add_option("--depth", ball_depth, "orbit fragment depth")->check(CLI::Range(1, 10));
    ball->add_option("--csv", ball_csv, "export labeled points as CSV");
    ball->add_option("--ply", ball_ply, "export labeled points as PLY");

    std::string exp_in, exp_format = "ply", exp_out;
    auto* exp = app.add_subcommand("export", "convert exported point sets between formats");
    exp->add_option("--in", exp_in, "input CSV produced by sphere/ball")->required();
    exp->add_option("--format", exp_format, "output format")
        ->check(CLI::IsMember({"csv", "ply"}));
    exp->add_option("--out-file", exp_out, "output path")->required();

    try {
        app.parse(argc, argv);
        if (lemmas->parsed()) return run_lemmas(n, max_len, max_k, workers, out_path);
        if (orbit->parsed()) return run_orbit(orbit_n, omega_text, orbit_len, workers, out_path);
        if (freeness->parsed()) return run_freeness(free_len, workers, out_path);
        if (witness->parsed()) return run_witness(wit_n, wit_len, replay, workers, out_path);
        if (sphere->parsed()) {
            if (seed_texts.empty()) seed_texts.push_back("0,1,0");
            return run_sphere(sph_n, seed_texts, sph_depth, workers, csv_path, ply_path,
                              out_path);
        }
        if (ball->parsed())
            return run_ball(ball_n, ball_seed, radii_text, ball_depth, workers, ball_csv,
                            ball_ply, out_path);
        if (exp->parsed()) return run_export(exp_in, exp_format, exp_out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const bt::WordParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bt::SeedStabilizerError& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 1;
    } catch (const bt::TransferError& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 1;
    }
}
