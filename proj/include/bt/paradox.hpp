#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bt/orbit.hpp"
#include "bt/partition.hpp"
#include "bt/report.hpp"
#include "bt/scan.hpp"
#include "bt/word.hpp"

namespace bt {

/// One piece of a duplication witness: a membership predicate over the
/// universe, the inverse of its mover (so covering tests can pull a target
/// point back instead of materializing images), and a serializable
/// description. mover_word is set when the mover is a group element acting
/// by left multiplication on carried words.
template <class Elem>
struct WitnessPiece {
    std::string label;
    bool singleton = false;
    std::function<bool(const Elem&)> member;
    std::function<Elem(const Elem&)> mover_inverse;
    std::optional<Word> mover_word;
    Json mover_desc;  // serialized mover for non-word movers (e.g. translations)
    Json piece_ref;
};

template <class Elem>
struct WitnessGroup {
    std::string label;  // which target copy this group of pieces assembles
    std::vector<WitnessPiece<Elem>> pieces;
};

/// A (n, r)-duplication witness: r pieces split into n groups, each group
/// claiming to cover the whole universe once its movers are applied.
template <class Elem>
struct ParadoxWitness {
    int n = 0;
    std::string universe_ref;
    std::vector<WitnessGroup<Elem>> groups;

    int total_pieces() const {
        int r = 0;
        for (const auto& g : groups) r += static_cast<int>(g.pieces.size());
        return r;
    }

    Json descriptor() const {
        Json j;
        j["universe_ref"] = universe_ref;
        j["n"] = n;
        Json gs = Json::array();
        for (const auto& g : groups) {
            Json movers = Json::array();
            Json refs = Json::array();
            for (const auto& pc : g.pieces) {
                movers.push_back(pc.mover_word ? Json(pc.mover_word->str()) : pc.mover_desc);
                refs.push_back(pc.piece_ref);
            }
            gs.push_back(Json{{"source_piece", g.label}, {"movers", movers},
                              {"piece_refs", refs}});
        }
        j["groups"] = gs;
        return j;
    }
};

/// n groups need at least 2n pieces; a witness below that bound is wrong
/// before any sweep runs.
template <class Elem>
bool lower_bound_holds(const ParadoxWitness<Elem>& w) {
    return w.total_pieces() >= 2 * w.n;
}

/// Checks the witness over a sample of the universe. For each element y:
///  (a) exactly one group owns y (the groups partition the universe),
///  (b) the owning group covers y with exactly one piece,
///  (c) for every group, exactly one piece satisfies member(mover⁻¹(y)) —
///      each target copy is assembled exactly once, tested pullback-style.
template <class Elem, class Fmt>
VerifyReport validate_witness(const ParadoxWitness<Elem>& w, const std::vector<Elem>& sample,
                              Fmt&& fmt, int workers = 1) {
    VerifyReport rep;
    rep.lemma = "duplication-witness";
    rep.n = w.n;
    rep.note("pieces", w.total_pieces());
    rep.note("universe_ref", w.universe_ref);
    if (!lower_bound_holds(w))
        rep.violations.push_back(
            {Word(), -1, "witness has " + std::to_string(w.total_pieces()) +
                             " pieces, below the 2n lower bound"});

    std::size_t chunk = 1024;
    std::size_t n_chunks = (sample.size() + chunk - 1) / chunk;
    std::vector<std::vector<Violation>> slot_viol(n_chunks);
    run_tasks(n_chunks, workers, [&](std::size_t ci) {
        std::size_t lo = ci * chunk, hi = std::min(sample.size(), lo + chunk);
        for (std::size_t s = lo; s < hi; ++s) {
            const Elem& y = sample[s];
            int owning_groups = 0, pieces_in_owner = 0;
            for (std::size_t gi = 0; gi < w.groups.size(); ++gi) {
                int cnt = 0;
                for (const auto& pc : w.groups[gi].pieces)
                    if (pc.member(y)) ++cnt;
                if (cnt > 0) {
                    ++owning_groups;
                    pieces_in_owner = cnt;
                }
            }
            if (owning_groups != 1)
                slot_viol[ci].push_back({Word(), -1,
                                         std::to_string(owning_groups) +
                                             " groups own sample element " + fmt(y)});
            else if (pieces_in_owner != 1)
                slot_viol[ci].push_back({Word(), -1,
                                         "owning group covers " + fmt(y) + " with " +
                                             std::to_string(pieces_in_owner) + " pieces"});
            for (std::size_t gi = 0; gi < w.groups.size(); ++gi) {
                int covers = 0;
                for (const auto& pc : w.groups[gi].pieces)
                    if (pc.member(pc.mover_inverse(y))) ++covers;
                if (covers != 1)
                    slot_viol[ci].push_back(
                        {Word(), static_cast<int>(gi),
                         "group " + w.groups[gi].label + " assembles " + fmt(y) + " " +
                             std::to_string(covers) + " times"});
            }
        }
    });
    for (auto& vs : slot_viol)
        rep.violations.insert(rep.violations.end(), std::make_move_iterator(vs.begin()),
                              std::make_move_iterator(vs.end()));
    rep.words_checked = sample.size();
    return rep;
}

inline Json word_piece_ref(const TheoremPartition& p, PieceIndex pc) {
    Json j;
    j["variant"] = variant_name(p.variant());
    j["n"] = p.n();
    j["omega"] = p.omega_input().str();
    j["piece"] = pc.str();
    return j;
}

/// The 2n-piece self-duplication of the free group: group j consists of
/// A_j (kept in place) and B_j (moved by γ_j), each covering all of F₂ once.
inline ParadoxWitness<Word> free_group_witness(int n) {
    auto part = std::make_shared<const TheoremPartition>(
        TheoremPartition::general(n, sigma_power(-(n - 1))));
    ParadoxWitness<Word> w;
    w.n = n;
    w.universe_ref = "f2-words";
    for (int j = 0; j < n; ++j) {
        WitnessGroup<Word> g;
        g.label = "P_" + std::to_string(j);
        PieceIndex aj{PieceKind::A, j}, bj{PieceKind::B, j};
        WitnessPiece<Word> pa;
        pa.label = aj.str();
        pa.member = [part, aj](const Word& y) { return part->classify(y) == aj; };
        pa.mover_word = Word();
        pa.mover_inverse = [](const Word& y) { return y; };
        pa.piece_ref = word_piece_ref(*part, aj);
        WitnessPiece<Word> pb;
        pb.label = bj.str();
        pb.member = [part, bj](const Word& y) { return part->classify(y) == bj; };
        pb.mover_word = part->gamma(j);
        Word ginv = part->gamma_inv(j);
        pb.mover_inverse = [ginv](const Word& y) { return concat(ginv, y); };
        pb.piece_ref = word_piece_ref(*part, bj);
        g.pieces.push_back(std::move(pa));
        g.pieces.push_back(std::move(pb));
        w.groups.push_back(std::move(g));
    }
    return w;
}

/// Rebuilds a word-universe witness from its serialized descriptor, so a
/// stored witness can be revalidated (or shown broken) later.
inline ParadoxWitness<Word> witness_from_descriptor(const Json& j) {
    ParadoxWitness<Word> w;
    if (!j.contains("n") || !j.contains("groups") || !j.contains("universe_ref"))
        throw std::invalid_argument("witness descriptor missing required keys");
    w.n = j.at("n").get<int>();
    w.universe_ref = j.at("universe_ref").get<std::string>();
    if (w.universe_ref != "f2-words")
        throw std::invalid_argument("can only replay witnesses over the f2-words universe");
    std::vector<std::pair<std::string, std::shared_ptr<const TheoremPartition>>> cache;
    auto partition_for = [&](const Json& ref) {
        std::string key = ref.dump();
        for (auto& [k, p] : cache)
            if (k == key) return p;
        std::string variant = ref.at("variant").get<std::string>();
        int n = ref.at("n").get<int>();
        Word omega = Word::parse(ref.at("omega").get<std::string>());
        std::shared_ptr<const TheoremPartition> p;
        if (variant == "general")
            p = std::make_shared<const TheoremPartition>(TheoremPartition::general(n, omega));
        else if (variant == "tau-initial")
            p = std::make_shared<const TheoremPartition>(
                TheoremPartition::tau_initial(n, omega));
        else
            throw std::invalid_argument("unknown partition variant '" + variant + "'");
        cache.emplace_back(std::move(key), p);
        return cache.back().second;
    };
    auto parse_piece = [](const std::string& s) {
        if (s.size() < 3 || (s[0] != 'A' && s[0] != 'B') || s[1] != '_')
            throw std::invalid_argument("bad piece label '" + s + "'");
        return PieceIndex{s[0] == 'A' ? PieceKind::A : PieceKind::B,
                          std::stoi(s.substr(2))};
    };
    for (const Json& jg : j.at("groups")) {
        WitnessGroup<Word> g;
        g.label = jg.at("source_piece").get<std::string>();
        const Json& movers = jg.at("movers");
        const Json& refs = jg.at("piece_refs");
        if (movers.size() != refs.size())
            throw std::invalid_argument("movers and piece_refs disagree in length");
        for (std::size_t i = 0; i < refs.size(); ++i) {
            WitnessPiece<Word> pc;
            auto part = partition_for(refs[i]);
            PieceIndex pi = parse_piece(refs[i].at("piece").get<std::string>());
            pc.label = pi.str();
            pc.member = [part, pi](const Word& y) { return part->classify(y) == pi; };
            pc.mover_word = Word::parse(movers[i].is_null() ? std::string()
                                                            : movers[i].get<std::string>());
            Word minv = pc.mover_word->inverse();
            pc.mover_inverse = [minv](const Word& y) { return concat(minv, y); };
            pc.piece_ref = refs[i];
            g.pieces.push_back(std::move(pc));
        }
        w.groups.push_back(std::move(g));
    }
    return w;
}

inline VerifyReport validate_word_witness(const ParadoxWitness<Word>& w, int max_len,
                                          int workers = 1) {
    std::vector<Word> sample = enumerate_reduced(max_len);
    VerifyReport rep = validate_witness(
        w, sample, [](const Word& y) { return "'" + y.str() + "'"; }, workers);
    rep.max_len = max_len;
    return rep;
}

/// An element of a universe built from tagged free orbits: the point
/// word • (basepoint of seed). Pieces of a transferred witness act on the
/// word part; the tag keeps distinct orbits apart.
struct SeedElem {
    int seed = 0;
    Word word;

    friend bool operator==(const SeedElem&, const SeedElem&) = default;
};

inline std::string seed_elem_str(const SeedElem& e) {
    return "seed " + std::to_string(e.seed) + ": '" + e.word.str() + "'";
}

struct FreenessCertificate {
    int bound = 0;
    std::optional<std::pair<int, Word>> offender;  // seed index and fixing word
};

/// Scans every nontrivial word up to the bound against every seed;
/// fixes(seed, w) answers whether w fixes that seed's basepoint. The first
/// offending (seed, word) in shortlex order, if any, is returned.
template <class Fixes>
FreenessCertificate certify_free_seeds(int n_seeds, int bound, Fixes&& fixes) {
    FreenessCertificate cert;
    cert.bound = bound;
    for (const Word& w : enumerate_reduced(bound)) {
        if (w.empty()) continue;
        for (int s = 0; s < n_seeds; ++s)
            if (fixes(s, w)) {
                cert.offender = {s, w};
                return cert;
            }
    }
    return cert;
}

class TransferError : public std::runtime_error {
public:
    TransferError(int seed, const Word& w)
        : std::runtime_error("freeness certificate failed: '" + w.str() +
                             "' fixes seed " + std::to_string(seed)),
          seed_(seed), word_(w) {}
    int seed() const { return seed_; }
    const Word& word() const { return word_; }

private:
    int seed_;
    Word word_;
};

/// Carries a word-universe witness onto a union of freely-acted orbits:
/// membership reads the carried word, movers multiply it on the left. The
/// freeness certificate is what makes the carried word a faithful name,
/// so a failed certificate aborts the transfer.
inline ParadoxWitness<SeedElem> transfer_witness(const ParadoxWitness<Word>& base,
                                                 int n_seeds,
                                                 const FreenessCertificate& cert) {
    if (cert.offender) throw TransferError(cert.offender->first, cert.offender->second);
    if (n_seeds < 1) throw std::invalid_argument("transfer needs at least one seed");
    ParadoxWitness<SeedElem> out;
    out.n = base.n;
    out.universe_ref = base.universe_ref + "/transferred[" + std::to_string(n_seeds) +
                       " seeds, free up to " + std::to_string(cert.bound) + "]";
    for (const auto& g : base.groups) {
        WitnessGroup<SeedElem> og;
        og.label = g.label;
        for (const auto& pc : g.pieces) {
            if (!pc.mover_word)
                throw std::invalid_argument("piece '" + pc.label +
                                            "' has no word mover to transfer");
            WitnessPiece<SeedElem> op;
            op.label = pc.label;
            op.singleton = pc.singleton;
            auto base_member = pc.member;
            op.member = [base_member](const SeedElem& y) { return base_member(y.word); };
            Word minv = pc.mover_word->inverse();
            op.mover_inverse = [minv](const SeedElem& y) {
                return SeedElem{y.seed, concat(minv, y.word)};
            };
            op.mover_word = pc.mover_word;
            op.piece_ref = pc.piece_ref;
            og.pieces.push_back(std::move(op));
        }
        out.groups.push_back(std::move(og));
    }
    return out;
}

/// All seed-tagged words of length ≤ depth: the canonical sample for
/// validating a transferred witness.
inline std::vector<SeedElem> seed_fragment_sample(int n_seeds, int depth) {
    std::vector<SeedElem> out;
    std::vector<Word> words = enumerate_reduced(depth);
    out.reserve(words.size() * static_cast<std::size_t>(n_seeds));
    for (int s = 0; s < n_seeds; ++s)
        for (const Word& w : words) out.push_back({s, w});
    return out;
}

/// Shape facts for a ball-style witness: r = 3n−1 pieces total, n−1 of them
/// singletons, one group of two pieces and n−1 groups of three.
template <class Elem>
VerifyReport witness_shape_check(const ParadoxWitness<Elem>& w) {
    VerifyReport rep;
    rep.lemma = "witness-shape";
    rep.n = w.n;
    int singletons = 0, twos = 0, threes = 0;
    for (const auto& g : w.groups) {
        if (g.pieces.size() == 2) ++twos;
        if (g.pieces.size() == 3) ++threes;
        for (const auto& pc : g.pieces)
            if (pc.singleton) ++singletons;
    }
    int total = w.total_pieces();
    rep.note("pieces", total);
    rep.note("singletons", singletons);
    rep.note("groups_of_two", twos);
    rep.note("groups_of_three", threes);
    if (total != 3 * w.n - 1)
        rep.violations.push_back({Word(), -1, "expected 3n-1 pieces, found " +
                                                  std::to_string(total)});
    if (singletons != w.n - 1)
        rep.violations.push_back({Word(), -1, "expected n-1 singleton pieces, found " +
                                                  std::to_string(singletons)});
    if (twos != 1 || threes != w.n - 1 ||
        static_cast<int>(w.groups.size()) != w.n)
        rep.violations.push_back(
            {Word(), -1, "expected one 2-piece group and n-1 3-piece groups"});
    rep.words_checked = static_cast<std::uint64_t>(total);
    return rep;
}

}  // namespace bt
