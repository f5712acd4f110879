#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bt/linalg.hpp"
#include "bt/paradox.hpp"
#include "bt/partition.hpp"
#include "bt/rational.hpp"
#include "bt/report.hpp"
#include "bt/rng.hpp"
#include "bt/scan.hpp"
#include "bt/word.hpp"

namespace bt {

/// The concrete rotations realizing the generators:
/// σ ↦ rotation by arccos(3/5) about the z-axis,
/// τ ↦ the same angle about the x-axis. All entries are fifths, so every
/// image of a length-L word has denominators dividing 5^L — exact forever.
inline const Mat3& generator_image(Letter l) {
    static const Mat3 a{{Rational(3, 5), Rational(-4, 5), 0, Rational(4, 5), Rational(3, 5),
                         0, 0, 0, 1}};
    static const Mat3 ai = a.transpose();
    static const Mat3 b{{1, 0, 0, 0, Rational(3, 5), Rational(-4, 5), 0, Rational(4, 5),
                         Rational(3, 5)}};
    static const Mat3 bi = b.transpose();
    switch (l) {
        case Letter::Sigma: return a;
        case Letter::SigmaInv: return ai;
        case Letter::Tau: return b;
        default: return bi;
    }
}

inline Mat3 rho(const Word& w) {
    Mat3 m = Mat3::identity();
    for (Letter l : w.letters()) m = m * generator_image(l);
    return m;
}

inline bool commute_check(const Word& u, const Word& v) {
    Mat3 mu = rho(u), mv = rho(v);
    return mu * mv == mv * mu;
}

/// The rotation axis of ρ(w) as a primitive integer ray, oriented with the
/// first nonzero component positive. Kernel of ρ(w) − I via row cross
/// products (rank is 2 for any non-identity rotation).
inline Ray fixed_ray(const Word& w) {
    Mat3 m = rho(w);
    if (m == Mat3::identity())
        throw std::invalid_argument("'" + w.str() + "' maps to the identity; no unique axis");
    Mat3 k = m;
    for (int d = 0; d < 3; ++d) k.at(d, d) -= 1;
    Vec3 axis{0, 0, 0};
    const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
    for (auto [r1, r2] : pairs) {
        axis = cross(k.row(r1), k.row(r2));
        if (!axis.is_zero()) break;
    }
    if (axis.is_zero())
        throw std::logic_error("rotation axis computation degenerated for '" + w.str() + "'");
    if (apply(m, axis) != axis)
        throw std::logic_error("computed axis is not fixed by '" + w.str() + "'");
    return Ray::from_vec(axis).oriented();
}

/// Every ρ(w) for nontrivial |w| ≤ max_len is a determinant-1 orthogonal
/// matrix different from the identity: the rotation group generated by the
/// two images is free as far as the sweep can see.
inline VerifyReport freeness_scan(int max_len, int workers = 1) {
    VerifyReport rep;
    rep.lemma = "freeness";
    rep.max_len = max_len;
    ScanSink sink = parallel_state_scan<ScanSink>(
        max_len, workers, Mat3::identity(),
        [](Letter l, const Mat3& m) { return generator_image(l) * m; },
        [](const Word& w, const Mat3& m, ScanSink& s) {
            if (w.empty()) return;
            ++s.checked;
            if (m == Mat3::identity())
                s.violations.push_back({w, -1, "nontrivial word maps to the identity"});
            if (!is_rotation(m))
                s.violations.push_back(
                    {w, -1, "image is not an orthogonal matrix of determinant 1"});
        });
    rep.words_checked = sink.checked;
    rep.violations = std::move(sink.violations);
    rep.note("count_formula", "2*(3^L - 1)");
    rep.note("expected_words", reduced_word_count(max_len) - 1);
    rep.sort_violations();
    return rep;
}

struct WordListSink {
    std::vector<Word> words;
    void merge(WordListSink&& o) {
        words.insert(words.end(), std::make_move_iterator(o.words.begin()),
                     std::make_move_iterator(o.words.end()));
    }
};

/// Nontrivial words of length ≤ max_len whose rotation fixes the exact
/// point p, in shortlex order. The per-word image of p is carried
/// incrementally (left extension), so no matrices are materialized.
inline std::vector<Word> stabilizer_scan(const Vec3& p, int max_len, int workers = 1) {
    WordListSink sink = parallel_state_scan<WordListSink>(
        max_len, workers, p, [](Letter l, const Vec3& v) { return apply(generator_image(l), v); },
        [&p](const Word& w, const Vec3& v, WordListSink& s) {
            if (!w.empty() && v == p) s.words.push_back(w);
        });
    std::sort(sink.words.begin(), sink.words.end(), shortlex_less);
    return sink.words;
}

/// Nontrivial words fixing the ray (direction, not just axis): the carried
/// image must be a positive multiple of the ray vector.
inline std::vector<Word> ray_stabilizer_scan(const Ray& r, int max_len, int workers = 1) {
    Vec3 r0 = r.vec();
    WordListSink sink = parallel_state_scan<WordListSink>(
        max_len, workers, r0,
        [](Letter l, const Vec3& v) { return apply(generator_image(l), v); },
        [&r0](const Word& w, const Vec3& v, WordListSink& s) {
            if (w.empty()) return;
            if (cross(v, r0).is_zero() && dot(v, r0) > 0) s.words.push_back(w);
        });
    std::sort(sink.words.begin(), sink.words.end(), shortlex_less);
    return sink.words;
}

class SeedStabilizerError : public std::runtime_error {
public:
    SeedStabilizerError(int seed, const Word& w)
        : std::runtime_error("seed " + std::to_string(seed) +
                             " has a stabilizing word within the scan bound: '" + w.str() +
                             "'"),
          seed_(seed), word_(w) {}
    int seed() const { return seed_; }
    const Word& word() const { return word_; }

private:
    int seed_;
    Word word_;
};

struct Vec3Less {
    bool operator()(const Vec3& a, const Vec3& b) const {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
};

/// The depth-bounded piece of one orbit: every w·seed for |w| ≤ depth, in
/// shortlex word order, with an exact point → position index. Construction
/// fails if two words land on the same point, so the word column is a
/// faithful name for each point.
struct Fragment {
    std::vector<std::pair<Word, Vec3>> points;
    std::map<Vec3, std::size_t, Vec3Less> index;
};

inline Fragment orbit_fragment(const Vec3& seed, int depth) {
    Fragment frag;
    frag.points.reserve(reduced_word_count(depth));
    frag.points.emplace_back(Word(), seed);
    std::size_t level_begin = 0;
    for (int len = 1; len <= depth; ++len) {
        std::size_t level_end = frag.points.size();
        // prepend letters in order so each level stays shortlex-sorted
        for (Letter l : kLetters) {
            const Mat3& g = generator_image(l);
            for (std::size_t i = level_begin; i < level_end; ++i) {
                const auto& [w, p] = frag.points[i];
                if (!w.empty() && w.first() == inverse(l)) continue;
                frag.points.emplace_back(concat(Word::letter(l), w), apply(g, p));
            }
        }
        level_begin = level_end;
    }
    for (std::size_t i = 0; i < frag.points.size(); ++i) {
        auto [it, fresh] = frag.index.emplace(frag.points[i].second, i);
        if (!fresh)
            throw std::logic_error("orbit fragment collision: '" +
                                   frag.points[it->second].first.str() + "' and '" +
                                   frag.points[i].first.str() + "' hit the same point");
    }
    return frag;
}

/// Exact rational unit vector from a stereographic parameter pair.
inline SpherePoint stereographic_unit(const Rational& u, const Rational& v) {
    Rational d = 1 + u * u + v * v;
    return SpherePoint::unit({2 * u / d, 2 * v / d, (u * u + v * v - 1) / d});
}

inline SpherePoint random_unit_point(SplitMix64& rng) {
    Rational u(rng.range(-99, 99), rng.range(1, 99));
    Rational v(rng.range(-99, 99), rng.range(1, 99));
    return stereographic_unit(u, v);
}

inline Vec3 random_nonzero_center(SplitMix64& rng) {
    for (;;) {
        Vec3 c{Rational(rng.range(-9, 9), rng.range(1, 9)),
               Rational(rng.range(-9, 9), rng.range(1, 9)),
               Rational(rng.range(-9, 9), rng.range(1, 9))};
        if (!c.is_zero()) return c;
    }
}

/// Flips p to the closed hemisphere away from c (⟨p,c⟩ ≤ 0).
inline SpherePoint into_hemisphere(const SpherePoint& p, const Vec3& c) {
    if (dot(p.vec(), c) > 0)
        return SpherePoint::unit({-p.vec().x, -p.vec().y, -p.vec().z});
    return p;
}

/// Every unit point on the closed hemisphere away from a nonzero center c
/// keeps distance > 1 from c. Verified twice per point: once by expanding
/// |p−c|² = 1 + |c|² − 2⟨p,c⟩ (p is unit) and once by direct subtraction;
/// the two must agree exactly and exceed 1.
inline VerifyReport hemisphere_separation_check(const Vec3& center,
                                                const std::vector<SpherePoint>& points) {
    if (center.is_zero())
        throw std::invalid_argument("hemisphere check needs a nonzero center");
    VerifyReport rep;
    rep.lemma = "hemisphere-separation";
    Rational c2 = norm2(center);
    std::uint64_t skipped = 0;
    for (const SpherePoint& sp : points) {
        const Vec3& p = sp.vec();
        Rational pc = dot(p, center);
        if (pc > 0) {
            ++skipped;
            continue;
        }
        ++rep.words_checked;
        Rational direct = norm2(p - center);
        Rational expanded = 1 + c2 - 2 * pc;
        if (direct != expanded)
            rep.violations.push_back(
                {Word(), -1, "distance expansion mismatch at " + p.str()});
        if (!(direct > 1))
            rep.violations.push_back(
                {Word(), -1, "hemisphere point " + p.str() + " within unit distance of " +
                                 center.str()});
    }
    rep.note("center", center.str());
    rep.note("outside_hemisphere_skipped", skipped);
    return rep;
}

struct LabeledPoint {
    Vec3 pos;
    Rational radius;
    std::string label;
    Word word;
};

struct GeometryDemo {
    std::vector<VerifyReport> reports;
    std::vector<LabeledPoint> points;
    Json witness_descriptor;

    bool pass() const {
        for (const auto& r : reports)
            if (!r.pass()) return false;
        return true;
    }
};

/// Duplication of sphere points along the orbits of the given seeds: each
/// seed is certified stabilizer-free to twice the fragment depth, the
/// fragments are materialized exactly and checked disjoint, and the
/// 2n-piece free-group witness is transferred onto them and validated on
/// every fragment point. Points come back labeled by piece for export.
inline GeometryDemo sphere_demo(int n, const std::vector<SpherePoint>& seeds, int depth,
                                int workers = 1) {
    if (n < 2) throw std::invalid_argument("sphere_demo needs n >= 2");
    if (depth < 1) throw std::invalid_argument("sphere_demo needs depth >= 1");
    if (seeds.empty()) throw std::invalid_argument("sphere_demo needs at least one seed");
    GeometryDemo demo;

    int cert_bound = 2 * depth;
    VerifyReport cert;
    cert.lemma = "seed-certificate";
    cert.n = n;
    cert.max_len = cert_bound;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        std::vector<Word> stab = stabilizer_scan(seeds[s].vec(), cert_bound, workers);
        cert.words_checked += reduced_word_count(cert_bound) - 1;
        if (!stab.empty()) throw SeedStabilizerError(static_cast<int>(s), stab.front());
    }
    cert.note("seeds", seeds.size());
    demo.reports.push_back(std::move(cert));

    VerifyReport fragrep;
    fragrep.lemma = "orbit-fragments";
    fragrep.n = n;
    fragrep.max_len = depth;
    std::vector<Fragment> frags;
    std::map<Vec3, std::pair<std::size_t, Word>, Vec3Less> seen;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        frags.push_back(orbit_fragment(seeds[s].vec(), depth));
        fragrep.words_checked += frags.back().points.size();
        for (const auto& [w, p] : frags.back().points) {
            auto [it, fresh] = seen.emplace(p, std::make_pair(s, w));
            if (!fresh)
                fragrep.violations.push_back(
                    {w, static_cast<int>(s),
                     "orbit of seed " + std::to_string(s) + " meets orbit of seed " +
                         std::to_string(it->second.first) + " at " + p.str()});
        }
    }
    fragrep.note("points_per_seed", frags.front().points.size());
    demo.reports.push_back(std::move(fragrep));

    ParadoxWitness<Word> base = free_group_witness(n);
    FreenessCertificate fc;
    fc.bound = cert_bound;
    ParadoxWitness<SeedElem> moved =
        transfer_witness(base, static_cast<int>(seeds.size()), fc);
    demo.witness_descriptor = moved.descriptor();

    std::vector<SeedElem> sample;
    sample.reserve(seeds.size() * frags.front().points.size());
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (const auto& [w, p] : frags[s].points)
            sample.push_back({static_cast<int>(s), w});
    VerifyReport dup = validate_witness(moved, sample, seed_elem_str, workers);
    dup.max_len = depth;

    TheoremPartition part = TheoremPartition::general(n, sigma_power(-(n - 1)));
    std::map<std::string, std::uint64_t> label_counts;
    for (std::size_t s = 0; s < seeds.size(); ++s)
        for (const auto& [w, p] : frags[s].points) {
            std::string label = part.classify(w).str();
            ++label_counts[label];
            demo.points.push_back({p, 1, label, w});
        }
    Json lc;
    for (const auto& [k, v] : label_counts) lc[k] = v;
    dup.note("label_counts", lc);
    dup.note("labels_used", label_counts.size());
    demo.reports.push_back(std::move(dup));
    return demo;
}

struct BallElem {
    int layer = -1;  // index into the radii list; -1 with origin=false means off-universe
    bool origin = false;
    Word word;
    Vec3 point{0, 0, 0};
};

inline std::string ball_elem_str(const BallElem& e) {
    if (e.origin) return "origin";
    return "layer " + std::to_string(e.layer) + ", '" + e.word.str() + "'";
}

/// Duplication of the solid ball from 3n−1 pieces: every sphere layer
/// splits by word piece, the unit layer additionally carries the n−1
/// singleton points x_j = σ^{-(j-1)}·seed whose translations repair the
/// centers, and the origin rides with A_0. Piece labels:
///   A_j, B_j for the word pieces, x_j for the singletons.
inline GeometryDemo ball_demo(int n, const SpherePoint& unit_seed,
                              const std::vector<Rational>& radii, int depth,
                              int workers = 1) {
    if (n < 2) throw std::invalid_argument("ball_demo needs n >= 2");
    if (depth < 1) throw std::invalid_argument("ball_demo needs depth >= 1");
    if (radii.empty()) throw std::invalid_argument("ball_demo needs at least one radius");
    bool has_unit = false;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0 && radii[i] <= 1))
            throw std::invalid_argument("layer radii must lie in (0, 1]");
        if (radii[i] == 1) has_unit = true;
        for (std::size_t j = i + 1; j < radii.size(); ++j)
            if (radii[i] == radii[j])
                throw std::invalid_argument("layer radii must be distinct");
    }
    if (!has_unit)
        throw std::invalid_argument("the unit layer (radius 1) carries the singleton "
                                    "points and must be among the radii");

    GeometryDemo demo;
    int cert_bound = std::max(2 * depth, depth + n - 2);
    VerifyReport cert;
    cert.lemma = "seed-certificate";
    cert.n = n;
    cert.max_len = cert_bound;
    {
        std::vector<Word> stab = stabilizer_scan(unit_seed.vec(), cert_bound, workers);
        cert.words_checked = reduced_word_count(cert_bound) - 1;
        if (!stab.empty()) throw SeedStabilizerError(0, stab.front());
    }
    // one certified seed covers every layer: scaling commutes with rotation
    cert.note("layers", radii.size());
    demo.reports.push_back(std::move(cert));

    Fragment unit_frag = orbit_fragment(unit_seed.vec(), depth);

    auto base = std::make_shared<const BaseSets>(n);
    auto inner = std::make_shared<const TheoremPartition>(
        TheoremPartition::general(n, sigma_power(-(n - 1))));
    std::size_t unit_layer = radii.size();
    for (std::size_t i = 0; i < radii.size(); ++i)
        if (radii[i] == 1) unit_layer = i;

    // y's piece label from its carried word and layer
    auto label_of = [base, inner, unit_layer](const BallElem& y) -> std::string {
        if (y.origin) return "A_0";
        if (y.layer < 0) return "";
        if (static_cast<std::size_t>(y.layer) == unit_layer) {
            BaseClass c = base->classify(y.word);
            if (c.is_leftover()) return "x_" + std::to_string(c.leftover_m() + 1);
            return c.piece().str();
        }
        return inner->classify(y.word).str();
    };

    std::vector<Vec3> xpoints;  // x_j for j = 1..n-1
    for (int j = 1; j <= n - 1; ++j)
        xpoints.push_back(apply(rho(sigma_power(-(j - 1))), unit_seed.vec()));

    GammaFamily gf(n);
    ParadoxWitness<BallElem> witness;
    witness.n = n;
    witness.universe_ref = "rational-ball";
    for (int j = 0; j < n; ++j) {
        WitnessGroup<BallElem> g;
        g.label = "P_" + std::to_string(j);
        PieceIndex aj{PieceKind::A, j}, bj{PieceKind::B, j};

        WitnessPiece<BallElem> pa;
        pa.label = aj.str();
        pa.member = [label_of, lbl = aj.str()](const BallElem& y) { return label_of(y) == lbl; };
        pa.mover_word = Word();
        pa.mover_inverse = [](const BallElem& y) { return y; };
        pa.piece_ref = Json{{"universe", "rational-ball"}, {"piece", aj.str()},
                            {"with_origin", j == 0}};
        g.pieces.push_back(std::move(pa));

        WitnessPiece<BallElem> pb;
        pb.label = bj.str();
        pb.member = [label_of, lbl = bj.str()](const BallElem& y) { return label_of(y) == lbl; };
        pb.mover_word = gf.gamma(j);
        Mat3 ginv_m = rho(gf.gamma_inv(j));
        Word ginv_w = gf.gamma_inv(j);
        pb.mover_inverse = [ginv_m, ginv_w](const BallElem& y) {
            if (y.origin) return y;
            return BallElem{y.layer, false, concat(ginv_w, y.word), apply(ginv_m, y.point)};
        };
        pb.piece_ref = Json{{"universe", "rational-ball"}, {"piece", bj.str()}};
        g.pieces.push_back(std::move(pb));

        if (j >= 1) {
            WitnessPiece<BallElem> px;
            px.label = "x_" + std::to_string(j);
            px.singleton = true;
            Vec3 xj = xpoints[static_cast<std::size_t>(j - 1)];
            px.member = [xj](const BallElem& y) { return !y.origin && y.point == xj; };
            // mover is the translation carrying x_j to the origin
            px.mover_inverse = [xj](const BallElem& y) {
                return BallElem{-1, false, Word(), y.point + xj};
            };
            px.mover_desc = Json{{"translation", Json::array({rational_str(-xj.x),
                                                              rational_str(-xj.y),
                                                              rational_str(-xj.z)})}};
            px.piece_ref = Json{{"universe", "rational-ball"}, {"piece", px.label},
                                {"point", Json::array({rational_str(xj.x), rational_str(xj.y),
                                                       rational_str(xj.z)})}};
            g.pieces.push_back(std::move(px));
        }
        witness.groups.push_back(std::move(g));
    }
    demo.witness_descriptor = witness.descriptor();
    demo.reports.push_back(witness_shape_check(witness));

    std::vector<BallElem> sample;
    sample.reserve(radii.size() * unit_frag.points.size() + 1);
    BallElem origin;
    origin.origin = true;
    origin.layer = -1;
    sample.push_back(origin);
    for (std::size_t li = 0; li < radii.size(); ++li)
        for (const auto& [w, p] : unit_frag.points)
            sample.push_back({static_cast<int>(li), false, w, radii[li] * p});

    VerifyReport dup = validate_witness(witness, sample, ball_elem_str, workers);
    dup.max_len = depth;
    dup.n = n;
    dup.note("layers", radii.size());
    dup.note("sampled_points", sample.size());
    demo.reports.push_back(std::move(dup));

    demo.points.push_back({{0, 0, 0}, 0, "A_0", Word()});
    for (std::size_t li = 0; li < radii.size(); ++li)
        for (const auto& [w, p] : unit_frag.points) {
            BallElem e{static_cast<int>(li), false, w, radii[li] * p};
            demo.points.push_back({e.point, radii[li], label_of(e), w});
        }
    return demo;
}

}  // namespace bt
