#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bt/partition.hpp"
#include "bt/report.hpp"
#include "bt/scan.hpp"
#include "bt/word.hpp"

namespace bt {

/// An orbit whose basepoint is stabilized exactly by the powers of ω, with
/// ω in normalized position: either τ-initial and not ending in τ⁻¹, or a
/// negative power of σ. Orbit points are named by canonical coset
/// representatives (see canonical_form).
class StabilizedOrbit {
public:
    static StabilizedOrbit from_normalized(const Word& omega) {
        if (omega.empty())
            throw std::invalid_argument("stabilizing word must be nonempty");
        Letter alpha = omega.first();
        if (omega.ends_in(inverse(alpha)))
            throw std::invalid_argument("stabilizing word must be cyclically reduced");
        bool sigma_pow = sigma_exponent(omega).has_value();
        if (!sigma_pow && alpha != Letter::Tau)
            throw std::invalid_argument("normalized stabilizing word must start with τ");
        if (sigma_pow && alpha != Letter::SigmaInv)
            throw std::invalid_argument("normalized σ-power must be negative");
        return StabilizedOrbit(omega, alpha, sigma_pow);
    }

    const Word& omega() const { return omega_; }
    Letter alpha() const { return alpha_; }
    bool sigma_power_form() const { return sigma_power_; }

private:
    StabilizedOrbit(const Word& omega, Letter alpha, bool sig)
        : omega_(omega), alpha_(alpha), sigma_power_(sig) {}

    Word omega_;
    Letter alpha_;
    bool sigma_power_;
};

struct Normalization {
    StabilizedOrbit orbit;
    std::vector<std::string> transcript;  // conjugations/inversions applied, in order
};

/// Brings a cyclically reduced stabilizing word into normalized position by
/// inverting and/or cyclically conjugating (ω ↦ α⁻¹ωα where α is the first
/// letter): if ω involves τ it ends up τ-initial, otherwise it becomes a
/// negative σ-power. Conjugation moves the basepoint within the same orbit,
/// so nothing downstream is lost; the transcript records each step.
inline Normalization normalize_omega(const Word& omega) {
    if (omega.empty())
        throw std::invalid_argument("stabilizing word must be nonempty");
    if (omega.length() >= 2 && omega.ends_in(inverse(omega.first())))
        throw std::invalid_argument("stabilizing word must be cyclically reduced: '" +
                                    omega.str() + "'");
    Word w = omega;
    std::vector<std::string> steps;
    bool has_tau = false, has_tau_inv = false;
    for (Letter l : w.letters()) {
        has_tau |= l == Letter::Tau;
        has_tau_inv |= l == Letter::TauInv;
    }
    if (!has_tau && has_tau_inv) {
        w = w.inverse();
        steps.emplace_back("invert");
        has_tau = true;
    }
    if (has_tau) {
        std::size_t guard = w.length();
        while (w.first() != Letter::Tau) {
            if (guard-- == 0)
                throw std::logic_error("conjugation failed to reach a τ-initial word");
            Letter a = w.first();
            Word rotated = concat(concat(Word::letter(inverse(a)), w), Word::letter(a));
            if (rotated.length() != w.length())
                throw std::logic_error("cyclic conjugation changed the length");
            steps.emplace_back(std::string("conjugate by ") + letter_token(a));
            w = rotated;
        }
    } else if (w.first() == Letter::Sigma) {
        w = w.inverse();
        steps.emplace_back("invert");
    }
    return Normalization{StabilizedOrbit::from_normalized(w), std::move(steps)};
}

/// A word is in canonical position when it neither ends in α⁻¹ (α = first
/// letter of ω) nor ends in ω itself.
inline bool is_canonical(const Word& z, const StabilizedOrbit& orbit) {
    return !z.ends_in(inverse(orbit.alpha())) && !z.has_suffix(orbit.omega());
}

/// The canonical representative of the coset ρ·{ω^k}: strip literal ω
/// suffixes, then absorb trailing α⁻¹ letters by appending ω. Each append
/// either ends the loop (partial cancellation leaves the tail of ω, which
/// does not end in α⁻¹) or shortens the word by |ω|, so this terminates;
/// the exit conditions are re-checked rather than assumed.
inline Word canonical_form(const Word& rho, const StabilizedOrbit& orbit) {
    const Word& om = orbit.omega();
    Word z = rho;
    while (z.has_suffix(om)) z = z.drop_suffix(om.length());
    Letter bad = inverse(orbit.alpha());
    while (z.ends_in(bad)) z = concat(z, om);
    if (!is_canonical(z, orbit))
        throw std::logic_error("canonical_form postcondition failed for '" + rho.str() +
                               "'");
    return z;
}

/// The group element g moving the orbit point named ζ: rename to the
/// canonical representative of g·ζ.
inline Word act(const Word& g, const Word& zeta, const StabilizedOrbit& orbit) {
    return canonical_form(concat(g, zeta), orbit);
}

/// Sweep: canonical_form is idempotent, lands on canonical position, and is
/// constant on cosets ρ·ω^k (|k| ≤ 3 with the multiplied word kept inside
/// the sweep bound).
inline VerifyReport verify_canonical_uniqueness(const StabilizedOrbit& orbit, int max_len,
                                                int workers = 1) {
    VerifyReport rep;
    rep.lemma = "canonical-uniqueness";
    rep.omega = orbit.omega().str();
    rep.max_len = max_len;
    std::vector<Word> omega_powers;
    for (long k = -3; k <= 3; ++k)
        if (k != 0) omega_powers.push_back(power(orbit.omega(), k));

    ScanSink sink = parallel_word_scan<ScanSink>(max_len, workers, [&](const Word& w,
                                                                       ScanSink& s) {
        ++s.checked;
        Word c = canonical_form(w, orbit);
        if (!is_canonical(c, orbit))
            s.violations.push_back({w, -1, "representative is not in canonical position"});
        if (canonical_form(c, orbit) != c)
            s.violations.push_back({w, -1, "canonical_form is not idempotent here"});
        for (const Word& pk : omega_powers) {
            Word shifted = concat(w, pk);
            if (static_cast<int>(shifted.length()) > max_len) continue;
            if (canonical_form(shifted, orbit) != c)
                s.violations.push_back(
                    {w, -1, "coset mate '" + shifted.str() + "' got a different representative"});
        }
    });
    rep.words_checked = sink.checked;
    rep.violations = std::move(sink.violations);
    rep.sort_violations();
    return rep;
}

/// All nontrivial words of length ≤ max_len that fix the basepoint, i.e.
/// whose canonical form is ε. For a genuinely ω-stabilized orbit this is
/// exactly the set of nontrivial powers of ω within the bound.
inline std::vector<Word> basepoint_stabilizer_scan(const StabilizedOrbit& orbit, int max_len,
                                                   int workers = 1) {
    struct WordSink {
        std::vector<Word> words;
        void merge(WordSink&& o) {
            words.insert(words.end(), std::make_move_iterator(o.words.begin()),
                         std::make_move_iterator(o.words.end()));
        }
    };
    WordSink sink = parallel_word_scan<WordSink>(max_len, workers,
                                                 [&](const Word& w, WordSink& s) {
                                                     if (w.empty()) return;
                                                     if (canonical_form(w, orbit).empty())
                                                         s.words.push_back(w);
                                                 });
    std::sort(sink.words.begin(), sink.words.end(), shortlex_less);
    return sink.words;
}

/// Compares the scanned basepoint stabilizer against {ω^k : k ≠ 0} within
/// the bound; any extra or missing word is a violation. Also records the
/// bounded minimality fact (no shorter nontrivial word fixes the basepoint).
inline VerifyReport verify_basepoint_stabilizer(const StabilizedOrbit& orbit, int max_len,
                                                int workers = 1) {
    VerifyReport rep;
    rep.lemma = "basepoint-stabilizer";
    rep.omega = orbit.omega().str();
    rep.max_len = max_len;
    std::vector<Word> found = basepoint_stabilizer_scan(orbit, max_len, workers);
    rep.words_checked = reduced_word_count(max_len) - 1;

    std::vector<Word> expected;
    for (long k = 1;; ++k) {
        Word pk = power(orbit.omega(), k);
        if (static_cast<int>(pk.length()) > max_len) break;
        expected.push_back(pk);
        expected.push_back(pk.inverse());
    }
    std::sort(expected.begin(), expected.end(), shortlex_less);

    for (const Word& w : found)
        if (!std::binary_search(expected.begin(), expected.end(), w,
                                shortlex_less))
            rep.violations.push_back({w, -1, "unexpected basepoint stabilizer element"});
    for (const Word& w : expected)
        if (!std::binary_search(found.begin(), found.end(), w, shortlex_less))
            rep.violations.push_back({w, -1, "power of ω failed to fix the basepoint"});

    bool minimal = true;
    for (const Word& w : found)
        if (w.length() < orbit.omega().length()) minimal = false;
    rep.note("stabilizer_size", found.size());
    rep.note("minimality_checked_to", orbit.omega().length() - 1);
    rep.note("no_shorter_stabilizing_word", minimal);
    rep.sort_violations();
    return rep;
}

/// The 2n-piece orbit partition attached to a normalized stabilizing word:
/// τ-initial ω reuses the tau_initial recipe, a σ-power ω the general one
/// (where ε and all powers of σ sit in B_0). Orbit points are classified
/// through their canonical representatives.
class OrbitPartition {
public:
    static OrbitPartition build(int n, const StabilizedOrbit& orbit) {
        if (orbit.sigma_power_form()) {
            TheoremPartition p = TheoremPartition::general(n, orbit.omega());
            PieceIndex b0{PieceKind::B, 0};
            if (p.classify(Word()) != b0 || p.classify(orbit.omega()) != b0)
                throw std::logic_error("σ-power orbit partition must put ε and ω in B_0");
            return OrbitPartition(orbit, std::move(p));
        }
        return OrbitPartition(orbit, TheoremPartition::tau_initial(n, orbit.omega()));
    }

    const StabilizedOrbit& orbit() const { return orbit_; }
    const TheoremPartition& partition() const { return partition_; }
    int n() const { return partition_.n(); }

    PieceIndex classify(const Word& zeta) const { return partition_.classify(zeta); }

    Word act(const Word& g, const Word& zeta) const { return bt::act(g, zeta, orbit_); }

private:
    OrbitPartition(const StabilizedOrbit& orbit, TheoremPartition p)
        : orbit_(orbit), partition_(std::move(p)) {}

    StabilizedOrbit orbit_;
    TheoremPartition partition_;
};

/// Sweep over canonical representatives ζ of length ≤ max_len: the piece
/// expressions cover each orbit point exactly once, and moving by γ_i⁻¹
/// (with renaming to canonical position) realizes the pairing
///   y ∉ A_i  ⇔  γ_i⁻¹·y ∈ B_i
/// on the orbit itself, not merely on words.
inline VerifyReport verify_orbit_pairing(const OrbitPartition& op, int max_len,
                                         int workers = 1) {
    const TheoremPartition& p = op.partition();
    int n = p.n();
    VerifyReport rep;
    rep.lemma = "orbit-pairing";
    rep.n = n;
    rep.omega = op.orbit().omega().str();
    rep.max_len = max_len;
    rep.note("variant", variant_name(p.variant()));

    std::vector<PieceIndex> pieces = p.all_pieces();
    ScanSink sink = parallel_word_scan<ScanSink>(
        max_len, workers, [&](const Word& z, ScanSink& s) {
            if (!is_canonical(z, op.orbit())) return;
            ++s.checked;
            int members = 0;
            for (PieceIndex pc : pieces)
                if (p.member(pc, z)) ++members;
            if (members != 1)
                s.violations.push_back(
                    {z, -1, "piece expressions cover the orbit point " +
                                std::to_string(members) + " times"});
            PieceIndex here = p.classify(z);
            for (int i = 0; i < n; ++i) {
                bool not_in_a = !(here == PieceIndex{PieceKind::A, i});
                Word moved = op.act(p.gamma_inv(i), z);
                bool shifted_in_b = p.classify(moved) == PieceIndex{PieceKind::B, i};
                if (not_in_a != shifted_in_b)
                    s.violations.push_back(
                        {z, i, "orbit point fails y ∉ A_i ⇔ γ_i⁻¹·y ∈ B_i"});
            }
        });
    rep.words_checked = sink.checked;
    rep.violations = std::move(sink.violations);
    rep.sort_violations();
    return rep;
}

}  // namespace bt
