#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace bt {

using Int = boost::multiprecision::cpp_int;
// Kept in lowest terms with positive denominator by the backend itself.
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& r) {
    return r.str();  // "p/q", or "p" when q = 1
}

/// Parses "p" or "p/q" with optional leading '-'; q must be positive and
/// nonzero. Anything else is rejected.
inline Rational parse_rational(std::string_view text) {
    auto is_int = [](std::string_view s) {
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    std::size_t slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!is_int(num))
        throw std::invalid_argument("bad rational '" + std::string(text) + "'");
    Int p{std::string(num)};
    if (slash == std::string_view::npos) return Rational(p);
    std::string_view den = text.substr(slash + 1);
    if (!is_int(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("bad rational '" + std::string(text) + "'");
    Int q{std::string(den)};
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
}

inline double rational_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace bt
