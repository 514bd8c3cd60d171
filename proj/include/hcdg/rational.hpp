#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace hcdg {

/// Exact rational scalar. All arithmetic in the library is over this type;
/// equality is decidable and there are no tolerances anywhere.
using Rational = boost::multiprecision::mpq_rational;

inline std::string to_string(const Rational& r) { return r.str(); }

/// Parses "p", "-p" or "p/q". Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    bool seen_slash = false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (seen_slash || j + 1 == s.size() || j == i) return std::nullopt;
            seen_slash = true;
            continue;
        }
        if (s[j] < '0' || s[j] > '9') return std::nullopt;
    }
    try {
        Rational r(s);
        return r;
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace hcdg
