#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "bt/rng.hpp"
#include "bt/word.hpp"

using namespace bt;

namespace {

// Oracle: cancel one adjacent inverse pair per full rescan until none remain.
std::vector<Letter> naive_reduce(std::vector<Letter> ls) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < ls.size(); ++i)
            if (ls[i + 1] == inverse(ls[i])) {
                ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(i),
                         ls.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                changed = true;
                break;
            }
    }
    return ls;
}

std::vector<Letter> random_letters(SplitMix64& rng, std::size_t len) {
    std::vector<Letter> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back(kLetters[rng.below(4)]);
    return out;
}

Word random_reduced(SplitMix64& rng, std::size_t len) {
    std::vector<Letter> out;
    while (out.size() < len) {
        Letter l = kLetters[rng.below(4)];
        if (!out.empty() && l == inverse(out.back())) continue;
        out.push_back(l);
    }
    return Word::from_reduced(std::move(out));
}

}  // namespace

TEST_CASE("letters pair up by the low bit", "[word]") {
    CHECK(inverse(Letter::Sigma) == Letter::SigmaInv);
    CHECK(inverse(Letter::SigmaInv) == Letter::Sigma);
    CHECK(inverse(Letter::Tau) == Letter::TauInv);
    CHECK(inverse(Letter::TauInv) == Letter::Tau);
    CHECK(sigma_kind(Letter::Sigma));
    CHECK(sigma_kind(Letter::SigmaInv));
    CHECK_FALSE(sigma_kind(Letter::Tau));
    CHECK(letter_sign(Letter::Sigma) == 1);
    CHECK(letter_sign(Letter::TauInv) == -1);
    CHECK(letter_token(Letter::Sigma) == 's');
    CHECK(letter_token(Letter::SigmaInv) == 'S');
    CHECK(letter_token(Letter::Tau) == 't');
    CHECK(letter_token(Letter::TauInv) == 'T');
}

TEST_CASE("reduction cancels adjacent inverse pairs", "[word]") {
    CHECK(Word::reduce({Letter::Sigma, Letter::Tau, Letter::TauInv}) ==
          Word::letter(Letter::Sigma));
    CHECK(Word::reduce({Letter::Sigma, Letter::SigmaInv}).empty());
    CHECK(Word::reduce({Letter::Sigma, Letter::Tau, Letter::TauInv, Letter::SigmaInv,
                        Letter::Tau}) == Word::letter(Letter::Tau));
    CHECK(Word().empty());

    SplitMix64 rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Letter> raw = random_letters(rng, rng.below(41));
        Word w = Word::reduce(raw);
        std::vector<Letter> expect = naive_reduce(raw);
        REQUIRE(std::vector<Letter>(w.letters().begin(), w.letters().end()) == expect);
    }
}

TEST_CASE("from_reduced rejects unreduced sequences", "[word]") {
    CHECK(Word::from_reduced({Letter::Sigma, Letter::Tau}).length() == 2);
    CHECK(Word::from_reduced({}).empty());
    CHECK_THROWS_AS(Word::from_reduced({Letter::Sigma, Letter::SigmaInv}),
                    std::logic_error);
    CHECK_THROWS_AS(Word::from_reduced({Letter::Tau, Letter::TauInv, Letter::Sigma}),
                    std::logic_error);
}

TEST_CASE("concatenation cancels across the seam", "[word]") {
    CHECK(concat(Word::parse("s t"), Word::parse("T s")) == Word::parse("s^2"));
    CHECK(concat(Word::parse("s t"), Word::parse("T S")).empty());

    SplitMix64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        Word u = random_reduced(rng, rng.below(12));
        Word v = random_reduced(rng, rng.below(12));
        Word w = random_reduced(rng, rng.below(12));
        // oracle route: reduce the raw concatenation
        std::vector<Letter> raw(u.letters().begin(), u.letters().end());
        raw.insert(raw.end(), v.letters().begin(), v.letters().end());
        REQUIRE(concat(u, v) == Word::reduce(raw));
        // group axioms on samples
        REQUIRE(concat(concat(u, v), w) == concat(u, concat(v, w)));
        REQUIRE(concat(u, u.inverse()).empty());
        REQUIRE(concat(u.inverse(), u).empty());
        REQUIRE(concat(Word(), u) == u);
        REQUIRE(concat(u, Word()) == u);
        REQUIRE(concat(u, v).inverse() == concat(v.inverse(), u.inverse()));
        REQUIRE(concat(u, v).length() <= u.length() + v.length());
    }
}

TEST_CASE("inverse reverses and flips", "[word]") {
    CHECK(Word::parse("s t").inverse() == Word::parse("T S"));
    CHECK(Word().inverse().empty());
    CHECK(Word::parse("s^3").inverse() == Word::parse("s^-3"));
    SplitMix64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Word u = random_reduced(rng, rng.below(15));
        REQUIRE(u.inverse().inverse() == u);
        REQUIRE(u.inverse().length() == u.length());
    }
}

TEST_CASE("power repeats and inverts", "[word]") {
    CHECK(power(Word::letter(Letter::Sigma), -2) == Word::parse("s^-2"));
    CHECK(power(Word::parse("t s"), 2) == Word::parse("t s t s"));
    CHECK(power(Word::parse("t s"), 0).empty());
    CHECK(power(Word::parse("t s"), -1) == Word::parse("S T"));
    SplitMix64 rng(4);
    for (int trial = 0; trial < 60; ++trial) {
        Word w = random_reduced(rng, 1 + rng.below(5));
        long a = rng.range(-3, 3), b = rng.range(-3, 3);
        REQUIRE(power(w, a + b) == concat(power(w, a), power(w, b)));
    }
}

TEST_CASE("prefix and suffix helpers", "[word]") {
    Word w = Word::parse("S S t s");
    CHECK(w.has_prefix(Word::parse("S^2")));
    CHECK(w.has_prefix(Word()));
    CHECK_FALSE(w.has_prefix(Word::parse("S t")));
    CHECK_FALSE(Word::parse("S").has_prefix(w));
    CHECK(w.has_suffix(Word::parse("t s")));
    CHECK_FALSE(w.has_suffix(Word::parse("t t")));
    CHECK(w.ends_in(Letter::Sigma));
    CHECK_FALSE(w.ends_in(Letter::Tau));
    CHECK(w.prefix(2) == Word::parse("S^2"));
    CHECK(w.prefix(0).empty());
    CHECK(w.drop_suffix(2) == Word::parse("S^2"));
    CHECK(w.drop_suffix(0) == w);
    CHECK_THROWS_AS(w.prefix(5), std::out_of_range);
    CHECK_THROWS_AS(w.drop_suffix(5), std::out_of_range);
}

TEST_CASE("text form folds runs into powers", "[word]") {
    CHECK(Word().str() == "");
    CHECK(Word::parse("s").str() == "s");
    CHECK(Word::parse("S S S t").str() == "s^-3 t");
    CHECK(Word::parse("t t S").str() == "t^2 S");
    CHECK(Word::parse("s t S T").str() == "s t S T");
}

TEST_CASE("parse inverts str and accepts plain tokens", "[word]") {
    Word w = Word::parse("s t S");
    REQUIRE(w.length() == 3);
    CHECK(w[0] == Letter::Sigma);
    CHECK(w[1] == Letter::Tau);
    CHECK(w[2] == Letter::SigmaInv);
    CHECK(Word::parse("s^-3 t") == Word::reduce({Letter::SigmaInv, Letter::SigmaInv,
                                                 Letter::SigmaInv, Letter::Tau}));
    CHECK(Word::parse("").empty());
    CHECK(Word::parse("   ").empty());
    CHECK(Word::parse("  s   t ") == Word::parse("s t"));
    CHECK(Word::parse("t^0").empty());
    CHECK(Word::parse("s^+2") == Word::parse("s s"));
    CHECK(Word::parse("s S").empty());  // parse reduces

    for_each_reduced(5, [](const Word& u) { REQUIRE(Word::parse(u.str()) == u); });
    SplitMix64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Word u = random_reduced(rng, rng.below(30));
        REQUIRE(Word::parse(u.str()) == u);
    }
}

TEST_CASE("parse errors carry character positions", "[word]") {
    CHECK_THROWS_AS(Word::parse("x"), WordParseError);
    try {
        Word::parse("s t q");
        FAIL("expected a parse error");
    } catch (const WordParseError& e) {
        CHECK(e.position() == 4);
    }
    try {
        Word::parse("s^");
        FAIL("expected a parse error");
    } catch (const WordParseError& e) {
        CHECK(e.position() == 2);
    }
    CHECK_THROWS_AS(Word::parse("s^x"), WordParseError);
    CHECK_THROWS_AS(Word::parse("s^-"), WordParseError);
    CHECK_THROWS_AS(Word::parse("st"), WordParseError);  // tokens need whitespace
    CHECK_THROWS_AS(Word::parse("s^99999999"), WordParseError);
}

TEST_CASE("sigma powers and exponents", "[word]") {
    CHECK(sigma_power(3) == Word::parse("s^3"));
    CHECK(sigma_power(-2) == Word::parse("s^-2"));
    CHECK(sigma_power(0).empty());
    CHECK(tau_power(-1) == Word::parse("T"));
    CHECK(sigma_exponent(Word()) == 0);
    CHECK(sigma_exponent(Word::parse("s^3")) == 3);
    CHECK(sigma_exponent(Word::parse("s^-2")) == -2);
    CHECK_FALSE(sigma_exponent(Word::parse("t")).has_value());
    CHECK_FALSE(sigma_exponent(Word::parse("s t")).has_value());
}

TEST_CASE("enumeration counts match the closed formula", "[word]") {
    CHECK(reduced_word_count(0) == 1);
    CHECK(reduced_word_count(1) == 5);
    CHECK(reduced_word_count(2) == 17);
    CHECK(enumerate_reduced(0).size() == 1);
    CHECK(enumerate_reduced(1).size() == 5);
    CHECK(enumerate_reduced(2).size() == 17);

    std::vector<Word> all = enumerate_reduced(7);
    REQUIRE(all.size() == reduced_word_count(7));
    CHECK(all.front().empty());
    for (std::size_t i = 1; i < all.size(); ++i)
        REQUIRE(shortlex_less(all[i - 1], all[i]));  // strictly increasing ⇒ distinct

    CHECK(words_of_length(0).size() == 1);
    CHECK(words_of_length(1).size() == 4);
    CHECK(words_of_length(3).size() == 36);
    for (const Word& w : words_of_length(3)) REQUIRE(w.length() == 3);
}

TEST_CASE("shortlex orders by length then letter value", "[word]") {
    CHECK(shortlex_less(Word(), Word::parse("s")));
    CHECK(shortlex_less(Word::parse("s"), Word::parse("S")));
    CHECK(shortlex_less(Word::parse("S"), Word::parse("t")));
    CHECK(shortlex_less(Word::parse("T"), Word::parse("s s")));
    CHECK(shortlex_less(Word::parse("s t"), Word::parse("s T")));
    CHECK_FALSE(shortlex_less(Word::parse("s"), Word::parse("s")));
}

TEST_CASE("hashing is usable for word sets", "[word]") {
    std::unordered_set<Word, WordHash> seen;
    for_each_reduced(3, [&](const Word& w) { seen.insert(w); });
    CHECK(seen.size() == reduced_word_count(3));
    CHECK(seen.count(Word::parse("s t S")) == 1);
    CHECK(seen.count(Word::parse("s^4")) == 0);
}
