#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bt/word.hpp"

namespace bt {

using Json = nlohmann::ordered_json;

/// A single failed check: the word it happened at, the piece index it
/// concerns (-1 when not tied to a piece), and a human-readable reason.
struct Violation {
    Word word{};
    int index = -1;
    std::string detail;

    Json to_json() const {
        return Json{{"word", word.str()}, {"i", index}, {"detail", detail}};
    }
};

inline bool violation_order(const Violation& a, const Violation& b) {
    if (a.word != b.word) return shortlex_less(a.word, b.word);
    if (a.index != b.index) return a.index < b.index;
    return a.detail < b.detail;
}

/// Outcome of one verification sweep. `notes` carries check-specific
/// extras (variant, substitutions, transcripts, ...) in insertion order so
/// serialized reports are byte-stable.
struct VerifyReport {
    std::string lemma;
    int n = 0;
    std::optional<std::string> omega;
    int max_len = 0;
    std::uint64_t words_checked = 0;
    std::vector<Violation> violations;
    std::vector<std::pair<std::string, Json>> notes;

    bool pass() const { return violations.empty(); }

    void note(std::string key, Json value) { notes.emplace_back(std::move(key), std::move(value)); }

    void sort_violations() {
        std::sort(violations.begin(), violations.end(), violation_order);
    }

    Json to_json() const {
        Json j;
        j["lemma"] = lemma;
        j["n"] = n;
        j["omega"] = omega ? Json(*omega) : Json(nullptr);
        j["max_len"] = max_len;
        j["words_checked"] = words_checked;
        Json vs = Json::array();
        for (const auto& v : violations) vs.push_back(v.to_json());
        j["violations"] = vs;
        for (const auto& [k, v] : notes) j[k] = v;
        return j;
    }
};

/// Accumulator used by the parallel scans: violations plus a tally of the
/// units actually checked (words, points, ... at the verifier's discretion).
struct ScanSink {
    std::vector<Violation> violations;
    std::uint64_t checked = 0;

    void merge(ScanSink&& other) {
        checked += other.checked;
        violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                          std::make_move_iterator(other.violations.end()));
    }
};

}  // namespace bt
