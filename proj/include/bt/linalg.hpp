#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "bt/rational.hpp"

namespace bt {

struct Vec3 {
    Rational x, y, z;

    friend bool operator==(const Vec3&, const Vec3&) = default;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Vec3 operator*(const Rational& s, const Vec3& v) {
        return {s * v.x, s * v.y, s * v.z};
    }

    bool is_zero() const { return x == 0 && y == 0 && z == 0; }

    std::string str() const {
        return "(" + rational_str(x) + ", " + rational_str(y) + ", " + rational_str(z) + ")";
    }
};

inline Rational dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Rational norm2(const Vec3& v) { return dot(v, v); }

/// Row-major exact rational 3×3 matrix.
struct Mat3 {
    std::array<Rational, 9> m;

    static Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

    const Rational& at(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    Rational& at(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    friend bool operator==(const Mat3&, const Mat3&) = default;

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                out.at(r, c) = a.at(r, 0) * b.at(0, c) + a.at(r, 1) * b.at(1, c) +
                               a.at(r, 2) * b.at(2, c);
        return out;
    }

    Mat3 transpose() const {
        Mat3 out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out.at(r, c) = at(c, r);
        return out;
    }

    Rational det() const {
        return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
               at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
               at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    }

    Vec3 row(int r) const { return {at(r, 0), at(r, 1), at(r, 2)}; }
};

inline Vec3 apply(const Mat3& m, const Vec3& v) {
    return {m.at(0, 0) * v.x + m.at(0, 1) * v.y + m.at(0, 2) * v.z,
            m.at(1, 0) * v.x + m.at(1, 1) * v.y + m.at(1, 2) * v.z,
            m.at(2, 0) * v.x + m.at(2, 1) * v.y + m.at(2, 2) * v.z};
}

inline bool is_rotation(const Mat3& m) {
    return m.transpose() * m == Mat3::identity() && m.det() == 1;
}

/// A point on the exact unit sphere; construction proves |v|² = 1.
class SpherePoint {
public:
    static SpherePoint unit(Vec3 v) {
        if (norm2(v) != 1)
            throw std::invalid_argument("not a unit vector: " + v.str());
        return SpherePoint(std::move(v));
    }

    const Vec3& vec() const { return v_; }

private:
    explicit SpherePoint(Vec3 v) : v_(std::move(v)) {}
    Vec3 v_;
};

/// A primitive integer direction vector: components share no factor. Sign
/// is whatever the caller established — rotating a ray must not silently
/// flip it, since opposite rays are different points of the sphere.
struct Ray {
    Int x, y, z;

    friend bool operator==(const Ray&, const Ray&) = default;

    static Ray from_vec(const Vec3& v) {
        if (v.is_zero()) throw std::invalid_argument("zero vector spans no ray");
        Int lcm_den = 1;
        for (const Rational& c : {v.x, v.y, v.z})
            lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(c));
        Int ix = boost::multiprecision::numerator(v.x) *
                 (lcm_den / boost::multiprecision::denominator(v.x));
        Int iy = boost::multiprecision::numerator(v.y) *
                 (lcm_den / boost::multiprecision::denominator(v.y));
        Int iz = boost::multiprecision::numerator(v.z) *
                 (lcm_den / boost::multiprecision::denominator(v.z));
        Int g = boost::multiprecision::gcd(boost::multiprecision::gcd(abs(ix), abs(iy)), abs(iz));
        return Ray{ix / g, iy / g, iz / g};
    }

    /// Same ray with the first nonzero component positive.
    Ray oriented() const {
        Int lead = x != 0 ? x : (y != 0 ? y : z);
        if (lead < 0) return Ray{-x, -y, -z};
        return *this;
    }

    Vec3 vec() const { return {Rational(x), Rational(y), Rational(z)}; }

    Ray rotated(const Mat3& m) const { return from_vec(apply(m, vec())); }

    std::string str() const {
        return "(" + x.str() + ", " + y.str() + ", " + z.str() + ")";
    }
};

}  // namespace bt
