#include "hcdg/matrix.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hcdg;

namespace {

Mat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    Mat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 2));
    return m;
}

// Independent elimination used as an oracle for ranks: forward elimination
// without normalization, counting nonzero rows.
std::size_t oracle_rank(Mat m) {
    std::size_t rnk = 0;
    for (std::size_t col = 0; col < m.cols() && rnk < m.rows(); ++col) {
        std::size_t p = rnk;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(rnk, j), m(p, j));
        for (std::size_t i = rnk + 1; i < m.rows(); ++i) {
            if (m(i, col) == 0) continue;
            Rational f = m(i, col) / m(rnk, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(rnk, j);
        }
        ++rnk;
    }
    return rnk;
}

} // namespace

TEST_CASE("matrix product matches entrywise dot products") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 25; ++t) {
        Mat a = random_mat(rng, 2, 2), b = random_mat(rng, 2, 2);
        Mat p = a * b;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                Rational dot = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
                REQUIRE(p(i, j) == dot);
            }
    }
}

TEST_CASE("product with identity and zero") {
    std::mt19937_64 rng(8);
    Mat f = random_mat(rng, 3, 2);
    REQUIRE(Mat::identity(3) * f == f);
    REQUIRE(f * Mat::identity(2) == f);
    Mat z(2, 4);
    REQUIRE((f * z).is_zero());
}

TEST_CASE("matrix product is associative") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 20; ++t) {
        Mat a = random_mat(rng, 2, 3), b = random_mat(rng, 3, 2), c = random_mat(rng, 2, 4);
        REQUIRE((a * b) * c == a * (b * c));
    }
}

TEST_CASE("kernel dimension equals cols minus rank") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 40; ++t) {
        Mat m = random_mat(rng, 3, 2);
        Mat k = kernel_basis(m);
        REQUIRE(k.cols() == 2 - oracle_rank(m));
        if (k.cols() > 0) REQUIRE((m * k).is_zero());
    }
    Mat z(3, 3);
    REQUIRE(kernel_basis(z).cols() == 3);
    REQUIRE(kernel_basis(Mat::identity(3)).cols() == 0);
}

TEST_CASE("rank agrees with the oracle on random shapes") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        Mat m = random_mat(rng, r, c);
        REQUIRE(rank(m) == oracle_rank(m));
    }
}

TEST_CASE("solve finds exact solutions and detects inconsistency") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 30; ++t) {
        Mat m = random_mat(rng, 3, 3);
        std::vector<Rational> x0 = {Rational(1, 2), Rational(-2), Rational(3, 5)};
        auto sol = solve(m, m.apply(x0));
        REQUIRE(sol.has_value());
        REQUIRE(m.apply(*sol) == m.apply(x0));
    }
    Mat m(2, 1);
    m(0, 0) = 1; // second row zero
    REQUIRE_FALSE(solve(m, {Rational(0), Rational(1)}).has_value());
}

TEST_CASE("row space membership and reduction") {
    RowSpace rs(3);
    REQUIRE(rs.add({Rational(1), Rational(1), Rational(0)}));
    REQUIRE(rs.add({Rational(0), Rational(0), Rational(1)}));
    REQUIRE_FALSE(rs.add({Rational(2), Rational(2), Rational(5)}));
    REQUIRE(rs.dim() == 2);
    REQUIRE(rs.contains({Rational(-1), Rational(-1), Rational(7)}));
    REQUIRE_FALSE(rs.contains({Rational(1), Rational(0), Rational(0)}));
}
