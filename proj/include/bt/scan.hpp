#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include "bt/word.hpp"

namespace bt {

/// Runs `task(0..count-1)` on up to `workers` threads. Task order within a
/// thread is unspecified, so tasks must write only to their own slot; the
/// first exception (by slot index) is rethrown after all threads join.
inline void run_tasks(std::size_t count, int workers,
                      const std::function<void(std::size_t)>& task) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace detail {

// Depth-first sweep of all reduced words having `root` as suffix (including
// `root` itself), growing on the left: w ↦ l·w with l ≠ inverse(first(w)).
// Left growth lets per-word state be carried incrementally, e.g. the image
// of a fixed point under ρ(w). `ext(l, state)` extends, `visit(word, state)`
// observes. An empty root sweeps the full tree from ε.
template <class State, class Ext, class Visit>
void scan_left_subtree(const Word& root, int max_len, State root_state, const Ext& ext,
                       const Visit& visit) {
    visit(root, root_state);
    if (static_cast<int>(root.length()) >= max_len) return;

    std::vector<Letter> rbuf(root.letters().rbegin(), root.letters().rend());
    std::vector<State> states;
    states.reserve(static_cast<std::size_t>(max_len) + 1);
    states.push_back(std::move(root_state));

    auto word_here = [&rbuf] {
        return Word::from_reduced(std::vector<Letter>(rbuf.rbegin(), rbuf.rend()));
    };

    auto rec = [&](auto&& self) -> void {
        Letter lead = rbuf.back();
        for (Letter l : kLetters) {
            if (l == inverse(lead)) continue;
            rbuf.push_back(l);
            states.push_back(ext(l, states.back()));
            visit(word_here(), states.back());
            if (static_cast<int>(rbuf.size()) < max_len) self(self);
            states.pop_back();
            rbuf.pop_back();
        }
    };

    if (rbuf.empty()) {
        for (Letter l : kLetters) {
            rbuf.push_back(l);
            states.push_back(ext(l, states.back()));
            visit(word_here(), states.back());
            if (1 < max_len) rec(rec);
            states.pop_back();
            rbuf.pop_back();
        }
    } else {
        rec(rec);
    }
}

}  // namespace detail

/// Deterministic parallel sweep over all reduced words of length ≤ max_len,
/// carrying incremental per-word state (left extension: state(l·w) =
/// ext(l, state(w))). The word tree is split into fixed subtrees keyed by
/// length-2 suffixes; each subtree fills its own Sink and sinks merge in a
/// fixed order, so the result is identical for every worker count. Sink
/// needs a default constructor and merge(Sink&&).
template <class Sink, class State, class Ext, class Visit>
Sink parallel_state_scan(int max_len, int workers, State eps_state, const Ext& ext,
                         const Visit& visit) {
    constexpr int kSplitLen = 2;
    if (max_len < kSplitLen + 1) {
        Sink sink;
        detail::scan_left_subtree(
            Word(), max_len, std::move(eps_state), ext,
            [&](const Word& w, const State& s) { visit(w, s, sink); });
        return sink;
    }

    Sink head;
    detail::scan_left_subtree(Word(), kSplitLen - 1, eps_state, ext,
                              [&](const Word& w, const State& s) { visit(w, s, head); });

    std::vector<Word> roots = words_of_length(kSplitLen);
    std::vector<Sink> slots(roots.size());
    run_tasks(roots.size(), workers, [&](std::size_t i) {
        const Word& r = roots[i];
        State s = eps_state;
        for (auto it = r.letters().rbegin(); it != r.letters().rend(); ++it)
            s = ext(*it, s);
        detail::scan_left_subtree(
            r, max_len, std::move(s), ext,
            [&](const Word& w, const State& st) { visit(w, st, slots[i]); });
    });

    for (auto& s : slots) head.merge(std::move(s));
    return head;
}

struct NoState {};

/// State-free variant: visit(word, sink) over every reduced word ≤ max_len.
template <class Sink, class Visit>
Sink parallel_word_scan(int max_len, int workers, const Visit& visit) {
    return parallel_state_scan<Sink>(
        max_len, workers, NoState{}, [](Letter, const NoState&) { return NoState{}; },
        [&](const Word& w, const NoState&, Sink& sink) { visit(w, sink); });
}

}  // namespace bt
