#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bt {

// Generators of the free group on two letters and their inverses.
// The numeric order (σ < σ⁻¹ < τ < τ⁻¹) is the enumeration order used
// throughout; inverses pair up by flipping the low bit.
enum class Letter : std::uint8_t { Sigma = 0, SigmaInv = 1, Tau = 2, TauInv = 3 };

inline constexpr Letter kLetters[4] = {Letter::Sigma, Letter::SigmaInv, Letter::Tau,
                                       Letter::TauInv};

constexpr Letter inverse(Letter l) {
    return static_cast<Letter>(static_cast<std::uint8_t>(l) ^ 1u);
}

constexpr bool sigma_kind(Letter l) { return static_cast<std::uint8_t>(l) < 2; }

constexpr int letter_sign(Letter l) {
    return (static_cast<std::uint8_t>(l) & 1u) ? -1 : 1;
}

// One-character token: s = σ, S = σ⁻¹, t = τ, T = τ⁻¹.
constexpr char letter_token(Letter l) { return "sStT"[static_cast<std::uint8_t>(l)]; }

class WordParseError : public std::runtime_error {
public:
    WordParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A reduced word over {σ, σ⁻¹, τ, τ⁻¹}. The default value is ε. Every
/// factory reduces its input, so adjacent inverse pairs never survive
/// construction; all operations preserve the invariant.
class Word {
public:
    Word() = default;

    static Word letter(Letter l) { return Word(std::vector<Letter>{l}, Raw{}); }

    /// Reduces an arbitrary letter sequence with a single stack pass.
    static Word reduce(std::span<const Letter> raw) {
        std::vector<Letter> out;
        out.reserve(raw.size());
        for (Letter l : raw) {
            if (!out.empty() && out.back() == bt::inverse(l))
                out.pop_back();
            else
                out.push_back(l);
        }
        return Word(std::move(out), Raw{});
    }

    static Word reduce(std::initializer_list<Letter> raw) {
        return reduce(std::span<const Letter>(raw.begin(), raw.size()));
    }

    /// Wraps a sequence that is already reduced; rejects anything else.
    static Word from_reduced(std::vector<Letter> ls) {
        for (std::size_t i = 1; i < ls.size(); ++i)
            if (ls[i] == bt::inverse(ls[i - 1]))
                throw std::logic_error("from_reduced: sequence is not reduced");
        return Word(std::move(ls), Raw{});
    }

    std::size_t length() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    std::span<const Letter> letters() const noexcept { return letters_; }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter first() const { return letters_.front(); }
    Letter last() const { return letters_.back(); }

    Word inverse() const {
        std::vector<Letter> out;
        out.reserve(letters_.size());
        for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
            out.push_back(bt::inverse(*it));
        return Word(std::move(out), Raw{});
    }

    bool has_prefix(const Word& p) const {
        if (p.length() > length()) return false;
        for (std::size_t i = 0; i < p.length(); ++i)
            if (letters_[i] != p.letters_[i]) return false;
        return true;
    }

    bool has_suffix(const Word& s) const {
        if (s.length() > length()) return false;
        std::size_t off = length() - s.length();
        for (std::size_t i = 0; i < s.length(); ++i)
            if (letters_[off + i] != s.letters_[i]) return false;
        return true;
    }

    bool ends_in(Letter l) const { return !empty() && letters_.back() == l; }

    /// First `len` letters (a prefix of a reduced word is reduced).
    Word prefix(std::size_t len) const {
        if (len > length()) throw std::out_of_range("prefix length exceeds word length");
        return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + len), Raw{});
    }

    Word drop_suffix(std::size_t k) const {
        if (k > length()) throw std::out_of_range("suffix length exceeds word length");
        return prefix(length() - k);
    }

    friend Word concat(const Word& u, const Word& v) {
        std::vector<Letter> out(u.letters_);
        out.reserve(u.length() + v.length());
        for (Letter l : v.letters_) {
            if (!out.empty() && out.back() == bt::inverse(l))
                out.pop_back();
            else
                out.push_back(l);
        }
        return Word(std::move(out), Raw{});
    }

    friend Word power(const Word& w, long k) {
        if (k == 0 || w.empty()) return Word();
        Word base = k > 0 ? w : w.inverse();
        long reps = k > 0 ? k : -k;
        Word acc;
        for (long i = 0; i < reps; ++i) acc = concat(acc, base);
        return acc;
    }

    friend bool operator==(const Word&, const Word&) = default;

    /// Text form: whitespace-separated tokens, runs folded into powers,
    /// e.g. σ⁻³τ ↦ "s^-3 t". ε formats as the empty string.
    std::string str() const {
        std::string out;
        std::size_t i = 0;
        while (i < letters_.size()) {
            std::size_t j = i;
            while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
            if (!out.empty()) out += ' ';
            Letter l = letters_[i];
            std::size_t run = j - i;
            if (run == 1) {
                out += letter_token(l);
            } else {
                out += sigma_kind(l) ? 's' : 't';
                out += '^';
                long e = static_cast<long>(run) * letter_sign(l);
                out += std::to_string(e);
            }
            i = j;
        }
        return out;
    }

    /// Inverse of str(); also accepts plain token streams like "s t S".
    /// Unknown tokens and malformed exponents report their character offset.
    static Word parse(std::string_view text) {
        std::vector<Letter> raw;
        std::size_t i = 0;
        while (i < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[i]))) {
                ++i;
                continue;
            }
            std::size_t tok_start = i;
            Letter base;
            switch (text[i]) {
                case 's': base = Letter::Sigma; break;
                case 'S': base = Letter::SigmaInv; break;
                case 't': base = Letter::Tau; break;
                case 'T': base = Letter::TauInv; break;
                default:
                    throw WordParseError(std::string("unknown token '") + text[i] + "'",
                                         tok_start);
            }
            ++i;
            long expo = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                bool neg = false;
                if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
                    neg = text[i] == '-';
                    ++i;
                }
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    throw WordParseError("malformed exponent", i);
                long mag = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    mag = mag * 10 + (text[i] - '0');
                    if (mag > 1'000'000)
                        throw WordParseError("exponent out of range", tok_start);
                    ++i;
                }
                expo = neg ? -mag : mag;
            }
            if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
                throw WordParseError("expected whitespace after token", i);
            Letter l = expo >= 0 ? base : bt::inverse(base);
            for (long r = 0; r < (expo >= 0 ? expo : -expo); ++r) raw.push_back(l);
        }
        return reduce(raw);
    }

private:
    struct Raw {};
    Word(std::vector<Letter> ls, Raw) : letters_(std::move(ls)) {}

    std::vector<Letter> letters_;
};

inline Word sigma_power(long e) {
    std::vector<Letter> ls(static_cast<std::size_t>(e >= 0 ? e : -e),
                           e >= 0 ? Letter::Sigma : Letter::SigmaInv);
    return Word::from_reduced(std::move(ls));
}

inline Word tau_power(long e) {
    std::vector<Letter> ls(static_cast<std::size_t>(e >= 0 ? e : -e),
                           e >= 0 ? Letter::Tau : Letter::TauInv);
    return Word::from_reduced(std::move(ls));
}

/// Exponent e with w = σ^e, if w is a power of σ (ε gives 0).
inline std::optional<long> sigma_exponent(const Word& w) {
    long e = 0;
    for (Letter l : w.letters()) {
        if (!sigma_kind(l)) return std::nullopt;
        e += letter_sign(l);
    }
    // a reduced power of σ is all-σ or all-σ⁻¹, so |e| = length
    return e;
}

inline bool shortlex_less(const Word& a, const Word& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    auto la = a.letters(), lb = b.letters();
    for (std::size_t i = 0; i < la.size(); ++i)
        if (la[i] != lb[i]) return la[i] < lb[i];
    return false;
}

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (Letter l : w.letters()) {
            h ^= static_cast<std::size_t>(l) + 1;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Number of reduced words of length ≤ max_len: 1 + 2(3^L − 1).
inline std::uint64_t reduced_word_count(int max_len) {
    std::uint64_t p = 1;
    for (int i = 0; i < max_len; ++i) p *= 3;
    return 1 + 2 * (p - 1);
}

/// Visits every reduced word of length ≤ max_len exactly once, in
/// breadth-first shortlex order (σ < σ⁻¹ < τ < τ⁻¹ within a length).
template <class F>
void for_each_reduced(int max_len, F&& f) {
    Word eps;
    f(eps);
    if (max_len <= 0) return;
    std::vector<Word> level;
    level.reserve(4);
    for (Letter l : kLetters) level.push_back(Word::letter(l));
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        if (len < max_len) next.reserve(level.size() * 3);
        for (const Word& w : level) {
            f(w);
            if (len < max_len)
                for (Letter l : kLetters)
                    if (l != inverse(w.last())) next.push_back(concat(w, Word::letter(l)));
        }
        level = std::move(next);
    }
}

inline std::vector<Word> enumerate_reduced(int max_len) {
    std::vector<Word> out;
    out.reserve(reduced_word_count(max_len));
    for_each_reduced(max_len, [&](const Word& w) { out.push_back(w); });
    return out;
}

inline std::vector<Word> words_of_length(int len) {
    std::vector<Word> out;
    for_each_reduced(len, [&](const Word& w) {
        if (static_cast<int>(w.length()) == len) out.push_back(w);
    });
    return out;
}

}  // namespace bt
