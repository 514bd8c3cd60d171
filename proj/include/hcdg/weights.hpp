#pragma once

#include "hcdg/rational.hpp"

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcdg {

/// A point of the character lattice Z^rank. The rank-0 lattice has exactly
/// one element, the empty vector.
struct Weight {
    std::vector<std::int64_t> v;

    Weight() = default;
    explicit Weight(std::vector<std::int64_t> coords) : v(std::move(coords)) {}
    static Weight zero(std::size_t rank) { return Weight(std::vector<std::int64_t>(rank, 0)); }

    std::size_t rank() const { return v.size(); }

    auto operator<=>(const Weight&) const = default;

    Weight operator+(const Weight& o) const {
        check_rank(o);
        Weight r = *this;
        for (std::size_t i = 0; i < v.size(); ++i) r.v[i] += o.v[i];
        return r;
    }
    Weight operator-(const Weight& o) const {
        check_rank(o);
        Weight r = *this;
        for (std::size_t i = 0; i < v.size(); ++i) r.v[i] -= o.v[i];
        return r;
    }
    Weight operator-() const {
        Weight r = *this;
        for (auto& x : r.v) x = -x;
        return r;
    }
    bool is_zero() const {
        for (auto x : v)
            if (x != 0) return false;
        return true;
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + ")";
    }

private:
    void check_rank(const Weight& o) const {
        if (v.size() != o.v.size()) throw std::invalid_argument("Weight: rank mismatch");
    }
};

/// X*(K) for a split torus K of the given rank.
struct WeightLattice {
    std::size_t rank = 0;

    bool operator==(const WeightLattice&) const = default;
    Weight zero() const { return Weight::zero(rank); }
    Weight basis_weight(std::size_t i) const {
        Weight w = zero();
        w.v.at(i) = 1;
        return w;
    }
};

/// Integer pairing between a character and a rational cocharacter vector.
inline Rational pair_weight(const Weight& lambda, const std::vector<Rational>& xi) {
    if (lambda.rank() != xi.size()) throw std::invalid_argument("pair_weight: rank mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) s += Rational(lambda.v[i]) * xi[i];
    return s;
}

} // namespace hcdg
