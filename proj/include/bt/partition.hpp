#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bt/report.hpp"
#include "bt/scan.hpp"
#include "bt/word.hpp"

namespace bt {

enum class PieceKind : std::uint8_t { A = 0, B = 1 };

struct PieceIndex {
    PieceKind kind = PieceKind::A;
    int index = 0;

    friend bool operator==(const PieceIndex&, const PieceIndex&) = default;

    std::string str() const {
        return (kind == PieceKind::A ? "A_" : "B_") + std::to_string(index);
    }
};

/// Where a word sits relative to the 2n base sets: one of the pieces, or a
/// leftover power σ^{-m} (0 ≤ m ≤ n−2) covered by none of them.
class BaseClass {
public:
    static BaseClass piece(PieceIndex p) { return BaseClass(p, -1); }
    static BaseClass leftover(int m) { return BaseClass(PieceIndex{}, m); }

    bool is_leftover() const { return m_ >= 0; }
    PieceIndex piece() const {
        if (is_leftover()) throw std::logic_error("leftover has no piece");
        return piece_;
    }
    int leftover_m() const {
        if (!is_leftover()) throw std::logic_error("not a leftover");
        return m_;
    }

    bool is_piece(PieceIndex p) const { return !is_leftover() && piece_ == p; }

    std::string str() const {
        return is_leftover() ? "leftover(" + std::to_string(m_) + ")" : piece_.str();
    }

    friend bool operator==(const BaseClass&, const BaseClass&) = default;

private:
    BaseClass(PieceIndex p, int m) : piece_(p), m_(m) {}
    PieceIndex piece_;
    int m_;
};

/// The 2n prefix-defined base sets for a given n ≥ 2:
///   A_0* = I(σ)            B_0* = I(σ^{-(n-1)})
///   A_1* = I(τ)            B_1* = I(σ^{-(n-2)} τ⁻¹)
///   A_i* = I(σ^{-(i-1)} τ)  B_i* = I(σ^{-(i-2)} τ⁻¹)   for 2 ≤ i < n
/// Everything except the leftovers σ^{-m} (0 ≤ m ≤ n−2) lies in exactly one
/// of them; classify() asserts that as it answers.
class BaseSets {
public:
    explicit BaseSets(int n) : n_(n) {
        if (n < 2) throw std::invalid_argument("base sets need n >= 2");
        a_prefix_.reserve(n);
        b_prefix_.reserve(n);
        for (int i = 0; i < n; ++i) {
            if (i == 0) {
                a_prefix_.push_back(sigma_power(1));
                b_prefix_.push_back(sigma_power(-(n - 1)));
            } else if (i == 1) {
                a_prefix_.push_back(tau_power(1));
                b_prefix_.push_back(concat(sigma_power(-(n - 2)), tau_power(-1)));
            } else {
                a_prefix_.push_back(concat(sigma_power(-(i - 1)), tau_power(1)));
                b_prefix_.push_back(concat(sigma_power(-(i - 2)), tau_power(-1)));
            }
        }
    }

    int n() const { return n_; }
    const Word& a_prefix(int i) const { return a_prefix_.at(i); }
    const Word& b_prefix(int i) const { return b_prefix_.at(i); }

    bool a_member(int i, const Word& w) const { return w.has_prefix(a_prefix_.at(i)); }
    bool b_member(int i, const Word& w) const { return w.has_prefix(b_prefix_.at(i)); }

    static std::optional<int> leftover_index(int n, const Word& w) {
        if (auto e = sigma_exponent(w); e && *e <= 0 && -*e <= n - 2)
            return static_cast<int>(-*e);
        return std::nullopt;
    }

    BaseClass classify(const Word& w) const {
        std::optional<PieceIndex> hit;
        int matches = 0;
        for (int i = 0; i < n_; ++i) {
            if (a_member(i, w)) {
                ++matches;
                hit = PieceIndex{PieceKind::A, i};
            }
            if (b_member(i, w)) {
                ++matches;
                hit = PieceIndex{PieceKind::B, i};
            }
        }
        auto m = leftover_index(n_, w);
        if (matches + (m ? 1 : 0) != 1)
            throw std::logic_error("base sets failed to cover '" + w.str() +
                                   "' exactly once (n=" + std::to_string(n_) + ")");
        if (m) return BaseClass::leftover(*m);
        return BaseClass::piece(*hit);
    }

private:
    int n_;
    std::vector<Word> a_prefix_, b_prefix_;
};

inline BaseClass classify_base(int n, const Word& w) { return BaseSets(n).classify(w); }

/// The translating word for piece pair i:
///   γ_0 = σ^{n-1},  γ_1 = τ σ^{n-2},  γ_i = σ^{-(i-1)} τ σ^{i-2}  (2 ≤ i < n).
inline Word gamma(int n, int i) {
    if (n < 2) throw std::invalid_argument("gamma needs n >= 2");
    if (i < 0 || i >= n) throw std::out_of_range("gamma index out of range");
    if (i == 0) return sigma_power(n - 1);
    if (i == 1) return concat(tau_power(1), sigma_power(n - 2));
    return concat(sigma_power(-(i - 1)), concat(tau_power(1), sigma_power(i - 2)));
}

class GammaFamily {
public:
    explicit GammaFamily(int n) : n_(n) {
        gammas_.reserve(n);
        inverses_.reserve(n);
        for (int i = 0; i < n; ++i) {
            gammas_.push_back(bt::gamma(n, i));
            inverses_.push_back(gammas_.back().inverse());
        }
    }

    int n() const { return n_; }
    const Word& gamma(int i) const { return gammas_.at(i); }
    const Word& gamma_inv(int i) const { return inverses_.at(i); }

private:
    int n_;
    std::vector<Word> gammas_, inverses_;
};

struct DeltaHit {
    long k;
    int m;
};

/// Decides w ∈ {δ^{-k} σ^{-m} : k ≥ 0, 0 ≤ m < n−1} and returns the unique
/// witness pair. Works by applying δ on the left until a short σ-power
/// appears; |δ^{-k} σ^{-m}| ≥ k − n bounds the search.
inline std::optional<DeltaHit> delta_power_member(const Word& w, const Word& delta, int n) {
    Word u = w;
    long bound = static_cast<long>(w.length()) + n;
    for (long k = 0; k <= bound; ++k) {
        if (auto e = sigma_exponent(u); e && *e <= 0 && -*e <= n - 2)
            return DeltaHit{k, static_cast<int>(-*e)};
        u = concat(delta, u);
    }
    return std::nullopt;
}

/// Least k ≥ 0 with w = γ^{-k} · tail, if any. |γ^{-k}| ≥ k gives the bound.
inline std::optional<long> neg_power_tail_member(const Word& w, const Word& gamma,
                                                 const Word& tail) {
    Word gi = gamma.inverse();
    Word v = tail;
    long bound = static_cast<long>(w.length() + tail.length());
    for (long k = 0; k <= bound; ++k) {
        if (v == w) return k;
        v = concat(gi, v);
    }
    return std::nullopt;
}

enum class PartitionVariant { General, TauInitial };

inline const char* variant_name(PartitionVariant v) {
    return v == PartitionVariant::General ? "general" : "tau-initial";
}

/// A genuine 2n-piece partition of the whole free group in which ε and the
/// chosen word ω share a piece, built by one of two recipes:
///
///  - general(n, ω): the base pair (C*, D*) containing ω absorbs the tail
///    family {δ^{-k} σ^{-m} : k ≥ 0, 0 ≤ m < n−1}, where δ translates D*
///    onto the complement of C*. A leftover ω is first replaced by
///    σ^{-(n-1)} (recorded; ε keeps co-residency with the replacement).
///
///  - tau_initial(n, ω) for ω starting with τ: each A_i absorbs the tail
///    family {γ_i^{-k} σ^{-(i-1)} : k ≥ 0} taken out of B_i, putting every
///    leftover σ^{-m} into A_{m+1} and both ε and ω into A_1.
///
/// classify() is the decision procedure; member() evaluates the defining
/// set expressions directly, so the two can be played against each other.
class TheoremPartition {
public:
    static TheoremPartition general(int n, const Word& omega) {
        TheoremPartition p(n, PartitionVariant::General, omega);
        p.omega_ = omega;
        if (auto m = BaseSets::leftover_index(n, omega)) {
            (void)m;
            p.omega_ = sigma_power(-(n - 1));
            p.substituted_ = true;
        }
        BaseClass c = p.base_.classify(p.omega_);
        PieceIndex cp = c.piece();
        p.dist_ = cp.index;
        p.c_kind_ = cp.kind;
        p.delta_ = cp.kind == PieceKind::A ? p.gammas_.gamma(cp.index)
                                           : p.gammas_.gamma_inv(cp.index);
        return p;
    }

    static TheoremPartition tau_initial(int n, const Word& omega) {
        if (omega.empty() || omega.first() != Letter::Tau)
            throw std::invalid_argument("tau_initial needs omega beginning with τ");
        TheoremPartition p(n, PartitionVariant::TauInitial, omega);
        p.omega_ = omega;
        for (int i = 1; i < n; ++i)
            p.tau_tails_.push_back(i == 1 ? Word() : sigma_power(-(i - 1)));
        return p;
    }

    int n() const { return n_; }
    PartitionVariant variant() const { return variant_; }
    const Word& omega() const { return omega_; }
    const Word& omega_input() const { return omega_input_; }
    bool omega_substituted() const { return substituted_; }
    const BaseSets& base() const { return base_; }
    const GammaFamily& gammas() const { return gammas_; }
    const Word& gamma(int i) const { return gammas_.gamma(i); }
    const Word& gamma_inv(int i) const { return gammas_.gamma_inv(i); }

    /// For the general recipe: the index of the absorbing pair and the
    /// pieces playing C (gains the tail family) and D (loses it).
    int distinguished_index() const { return dist_; }
    PieceIndex c_piece() const { return PieceIndex{c_kind_, dist_}; }
    PieceIndex d_piece() const {
        return PieceIndex{c_kind_ == PieceKind::A ? PieceKind::B : PieceKind::A, dist_};
    }
    const Word& delta() const { return delta_; }

    std::vector<PieceIndex> all_pieces() const {
        std::vector<PieceIndex> out;
        out.reserve(2 * n_);
        for (int j = 0; j < n_; ++j) {
            out.push_back(PieceIndex{PieceKind::A, j});
            out.push_back(PieceIndex{PieceKind::B, j});
        }
        return out;
    }

    PieceIndex classify(const Word& w) const {
        if (variant_ == PartitionVariant::General) {
            BaseClass b = base_.classify(w);
            if (b.is_leftover()) return c_piece();
            PieceIndex p = b.piece();
            if (p.index != dist_ || p.kind == c_kind_) return p;
            return delta_power_member(w, delta_, n_) ? c_piece() : p;
        }
        for (int i = 1; i < n_; ++i)
            if (neg_power_tail_member(w, gammas_.gamma(i), tau_tails_[i - 1]))
                return PieceIndex{PieceKind::A, i};
        BaseClass b = base_.classify(w);
        if (b.is_leftover())
            throw std::logic_error("leftover escaped the tail families: " + w.str());
        return b.piece();
    }

    /// Literal membership in the defining set expression for one piece;
    /// exactly one piece should answer true for any word.
    bool member(PieceIndex p, const Word& w) const {
        if (p.index < 0 || p.index >= n_) throw std::out_of_range("piece index out of range");
        if (variant_ == PartitionVariant::General) {
            bool base_in = p.kind == PieceKind::A ? base_.a_member(p.index, w)
                                                  : base_.b_member(p.index, w);
            if (p.index != dist_) return base_in;
            auto hit = delta_power_member(w, delta_, n_);
            if (p.kind == c_kind_) return base_in || hit.has_value();
            return base_in && !hit;
        }
        if (p.index == 0)
            return p.kind == PieceKind::A ? base_.a_member(0, w) : base_.b_member(0, w);
        auto k = neg_power_tail_member(w, gammas_.gamma(p.index), tau_tails_[p.index - 1]);
        if (p.kind == PieceKind::A) return base_.a_member(p.index, w) || k.has_value();
        return base_.b_member(p.index, w) && !(k && *k >= 1);
    }

private:
    TheoremPartition(int n, PartitionVariant v, const Word& omega_in)
        : n_(n), variant_(v), omega_input_(omega_in), base_(n), gammas_(n) {
        if (n < 2) throw std::invalid_argument("partition needs n >= 2");
    }

    int n_;
    PartitionVariant variant_;
    Word omega_input_;
    Word omega_;
    bool substituted_ = false;
    BaseSets base_;
    GammaFamily gammas_;
    // general recipe
    int dist_ = -1;
    PieceKind c_kind_ = PieceKind::A;
    Word delta_;
    // tau-initial recipe: tail of the absorbed family per i = 1..n-1
    std::vector<Word> tau_tails_;
};

/// Sweeps every reduced word of length ≤ max_len and checks both membership
/// forms of the base-set translation property for each i:
///   w ∉ A_i*  ⇔  γ_i⁻¹ w ∈ B_i*      (γ_i maps B_i* onto the complement of A_i*)
///   w ∉ B_i*  ⇔  γ_i w ∈ A_i*
inline VerifyReport verify_base_pairing(int n, int max_len, int workers = 1) {
    BaseSets base(n);
    GammaFamily gf(n);
    VerifyReport rep;
    rep.lemma = "base-pairing";
    rep.n = n;
    rep.max_len = max_len;
    ScanSink sink = parallel_word_scan<ScanSink>(max_len, workers, [&](const Word& w,
                                                                       ScanSink& s) {
        ++s.checked;
        BaseClass here = base.classify(w);
        for (int i = 0; i < n; ++i) {
            PieceIndex ai{PieceKind::A, i}, bi{PieceKind::B, i};
            bool not_in_a = !here.is_piece(ai);
            bool shifted_in_b = base.classify(concat(gf.gamma_inv(i), w)).is_piece(bi);
            if (not_in_a != shifted_in_b)
                s.violations.push_back(
                    {w, i, "w ∉ A_i* does not match γ_i⁻¹w ∈ B_i*"});
            bool not_in_b = !here.is_piece(bi);
            bool shifted_in_a = base.classify(concat(gf.gamma(i), w)).is_piece(ai);
            if (not_in_b != shifted_in_a)
                s.violations.push_back(
                    {w, i, "w ∉ B_i* does not match γ_i w ∈ A_i*"});
        }
    });
    rep.words_checked = sink.checked;
    rep.violations = std::move(sink.violations);
    rep.sort_violations();
    return rep;
}

/// γ_i^k σ^{-m} ∈ A_i* and γ_i^{-k} σ^{-m} ∈ B_i*, for k ≥ 1, 0 ≤ m < n−1.
inline bool power_membership_check(int n, int i, long k, int m) {
    if (k < 1) throw std::invalid_argument("power_membership_check needs k >= 1");
    if (m < 0 || m >= n - 1) throw std::invalid_argument("m out of range");
    BaseSets base(n);
    Word g = gamma(n, i);
    Word tail = sigma_power(-m);
    return base.a_member(i, concat(power(g, k), tail)) &&
           base.b_member(i, concat(power(g, -k), tail));
}

inline VerifyReport power_membership_sweep(int n, long max_k) {
    VerifyReport rep;
    rep.lemma = "power-membership";
    rep.n = n;
    rep.max_len = static_cast<int>(max_k);
    for (int i = 0; i < n; ++i)
        for (long k = 1; k <= max_k; ++k)
            for (int m = 0; m < n - 1; ++m) {
                ++rep.words_checked;
                if (!power_membership_check(n, i, k, m))
                    rep.violations.push_back(
                        {concat(power(gamma(n, i), k), sigma_power(-m)), i,
                         "power membership failed at k=" + std::to_string(k) +
                             " m=" + std::to_string(m)});
            }
    rep.note("max_k", max_k);
    rep.sort_violations();
    return rep;
}

/// Full sweep for a built partition: every word must land in exactly one
/// piece by the literal set expressions, that piece must agree with
/// classify(), and each pair must satisfy w ∉ A_i ⇔ γ_i⁻¹ w ∈ B_i. The
/// recipe-specific anchors (ε/ω co-residency, σ^{-(i-1)} ∈ A_i) ride along.
inline VerifyReport verify_theorem_pairing(const TheoremPartition& p, int max_len,
                                           int workers = 1) {
    int n = p.n();
    VerifyReport rep;
    rep.lemma = "theorem-pairing";
    rep.n = n;
    rep.omega = p.omega_input().str();
    rep.max_len = max_len;
    rep.note("variant", variant_name(p.variant()));
    if (p.variant() == PartitionVariant::General) {
        rep.note("omega_substituted", p.omega_substituted());
        rep.note("omega_effective", p.omega().str());
    }

    std::vector<PieceIndex> pieces = p.all_pieces();
    ScanSink sink = parallel_word_scan<ScanSink>(max_len, workers, [&](const Word& w,
                                                                       ScanSink& s) {
        ++s.checked;
        int members = 0;
        PieceIndex where{};
        for (PieceIndex pc : pieces)
            if (p.member(pc, w)) {
                ++members;
                where = pc;
            }
        if (members != 1) {
            s.violations.push_back(
                {w, -1, "piece expressions cover the word " + std::to_string(members) +
                            " times"});
        } else if (where != p.classify(w)) {
            s.violations.push_back(
                {w, -1, "classify() says " + p.classify(w).str() +
                            " but the set expressions say " + where.str()});
        }
        PieceIndex here = p.classify(w);
        for (int i = 0; i < n; ++i) {
            bool not_in_a = !(here == PieceIndex{PieceKind::A, i});
            bool shifted_in_b =
                p.classify(concat(p.gamma_inv(i), w)) == PieceIndex{PieceKind::B, i};
            if (not_in_a != shifted_in_b)
                s.violations.push_back({w, i, "w ∉ A_i does not match γ_i⁻¹w ∈ B_i"});
        }
    });
    rep.words_checked = sink.checked;
    rep.violations = std::move(sink.violations);

    if (p.variant() == PartitionVariant::General) {
        if (p.classify(Word()) != p.classify(p.omega()))
            rep.violations.push_back(
                {p.omega(), -1, "ε and ω do not share a piece"});
    } else {
        for (int i = 0; i < n; ++i)
            if (p.classify(sigma_power(1 - i)) != PieceIndex{PieceKind::A, i})
                rep.violations.push_back(
                    {sigma_power(1 - i), i, "σ^{-(i-1)} did not land in A_i"});
        if (p.classify(p.omega()) != PieceIndex{PieceKind::A, 1})
            rep.violations.push_back({p.omega(), 1, "ω did not land in A_1"});
    }
    rep.sort_violations();
    return rep;
}

/// Built-in ω values for exercising the general recipe: one representative
/// per base set, every leftover power, and one length-4 word.
inline std::vector<Word> general_omega_suite(int n) {
    BaseSets base(n);
    std::vector<Word> suite;
    for (int i = 0; i < n; ++i) {
        suite.push_back(base.a_prefix(i));
        suite.push_back(base.b_prefix(i));
    }
    for (int m = 0; m <= n - 2; ++m) suite.push_back(sigma_power(-m));
    suite.push_back(Word::parse("s t S T"));
    return suite;
}

/// τ-initial ω values for the tau_initial recipe, including length ≥ 4.
inline std::vector<Word> tau_omega_suite(int n) {
    (void)n;
    return {Word::parse("t"), Word::parse("t s"), Word::parse("t S t"),
            Word::parse("t^2 S"), Word::parse("t s t s")};
}

}  // namespace bt
