#include "hcdg/bigraded.hpp"
#include "hcdg/generate.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hcdg;

namespace {

WeightLattice lat1{1};

BigradedSpace two_slot_space() {
    BigradedSpace sp(lat1);
    sp.set_slot(SlotKey{0, Weight{{0}}}, 3);
    sp.set_slot(SlotKey{1, Weight{{2}}}, 2);
    return sp;
}

} // namespace

TEST_CASE("zero-dimension slots are never stored") {
    BigradedSpace sp(lat1);
    sp.set_slot(SlotKey{0, Weight{{0}}}, 2);
    sp.set_slot(SlotKey{0, Weight{{0}}}, 0);
    REQUIRE(sp.is_zero());
    REQUIRE(sp.slots().empty());
}

TEST_CASE("composition of graded maps adds bidegrees and is associative") {
    Rng rng(21);
    InstanceProfile p;
    p.max_slots = 3;
    for (int t = 0; t < 15; ++t) {
        Complex M = random_complex(rng, p);
        GradedLinearMap f = M.d; // (1, 0)
        GradedLinearMap idm = GradedLinearMap::identity(M.space);
        REQUIRE(compose(idm, f) == f);
        REQUIRE(compose(f, idm) == f);
        GradedLinearMap z(M.space, M.space, 0, lat1.zero());
        REQUIRE(compose(f, z).is_zero());
        GradedLinearMap ff = compose(f, f);
        REQUIRE(ff.degree_shift() == 2);
        REQUIRE(compose(compose(f, f), f) == compose(f, compose(f, f)));
    }
}

TEST_CASE("composition with shape mismatch names the problem") {
    BigradedSpace a = two_slot_space();
    BigradedSpace b(lat1);
    b.set_slot(SlotKey{0, Weight{{1}}}, 1);
    GradedLinearMap f(a, a, 0, lat1.zero());
    GradedLinearMap g(b, b, 0, lat1.zero());
    REQUIRE_THROWS_AS(compose(g, f), StructureError);
}

TEST_CASE("kernel satisfies rank-nullity per slot") {
    Rng rng(22);
    InstanceProfile p;
    for (int t = 0; t < 15; ++t) {
        Complex M = random_complex(rng, p);
        Subspace ker = kernel(M.d);
        for (const auto& [s, dim] : M.space.slots()) {
            std::size_t r = rank(M.d.block(s));
            REQUIRE(ker.space.dim(s) == dim - r);
        }
        REQUIRE(compose(M.d, ker.inclusion).is_zero());
    }
}

TEST_CASE("kernel of zero and identity maps") {
    BigradedSpace sp = two_slot_space();
    GradedLinearMap z(sp, sp, 0, lat1.zero());
    REQUIRE(kernel(z).space == sp);
    REQUIRE(kernel(GradedLinearMap::identity(sp)).space.is_zero());
}

TEST_CASE("quotient: projection . inclusion = 0 and dimensions add up") {
    BigradedSpace sp(lat1);
    SlotKey s{0, Weight{{0}}};
    sp.set_slot(s, 3);
    BigradedSpace w(lat1);
    w.set_slot(s, 2);
    GradedLinearMap incl(w, sp, 0, lat1.zero());
    Mat b(3, 2);
    b(0, 0) = 1; b(1, 0) = 1; b(2, 1) = 1; // span{(1,1,0),(0,0,1)}
    incl.set_block(s, std::move(b));
    QuotientData q = quotient(sp, incl);
    REQUIRE(q.space.dim(s) == 1);
    REQUIRE(compose(q.projection, incl).is_zero());
    REQUIRE(compose(q.projection, q.section) == GradedLinearMap::identity(q.space));
    // kernel of the projection is exactly the subspace
    Subspace k = kernel(q.projection);
    REQUIRE(k.space.dim(s) == 2);
    Mat kb = k.inclusion.block(s);
    RowSpace rs(3);
    rs.add({Rational(1), Rational(1), Rational(0)});
    rs.add({Rational(0), Rational(0), Rational(1)});
    for (std::size_t c = 0; c < kb.cols(); ++c)
        REQUIRE(rs.contains({kb(0, c), kb(1, c), kb(2, c)}));
}

TEST_CASE("quotient edge cases: W = 0 and W = V") {
    BigradedSpace sp = two_slot_space();
    BigradedSpace zero(lat1);
    QuotientData q0 = quotient(sp, GradedLinearMap(zero, sp, 0, lat1.zero()));
    REQUIRE(q0.space == sp);
    REQUIRE(is_isomorphism(q0.projection));
    QuotientData q1 = quotient(sp, GradedLinearMap::identity(sp));
    REQUIRE(q1.space.is_zero());
}

TEST_CASE("quotient rejects non-injective inclusions") {
    BigradedSpace sp(lat1);
    SlotKey s{0, Weight{{0}}};
    sp.set_slot(s, 2);
    BigradedSpace w(lat1);
    w.set_slot(s, 2);
    GradedLinearMap incl(w, sp, 0, lat1.zero());
    Mat b(2, 2);
    b(0, 0) = 1; b(0, 1) = 2; // rank 1
    incl.set_block(s, std::move(b));
    REQUIRE_THROWS_AS(quotient(sp, incl), StructureError);
}

TEST_CASE("image and corestriction") {
    Rng rng(23);
    InstanceProfile p;
    for (int t = 0; t < 10; ++t) {
        Complex M = random_complex(rng, p);
        Subspace img = image(M.d);
        GradedLinearMap core = corestrict(M.d, img);
        REQUIRE(compose(img.inclusion, core) == M.d);
    }
}

TEST_CASE("regrade merges slots deterministically and transports maps") {
    BigradedSpace sp(lat1);
    sp.set_slot(SlotKey{0, Weight{{1}}}, 1);
    sp.set_slot(SlotKey{0, Weight{{2}}}, 2);
    sp.set_slot(SlotKey{1, Weight{{1}}}, 1);
    WeightLattice lat0{0};
    Regrading rg = regrade(sp, [&](const SlotKey&) { return lat0.zero(); }, lat0);
    REQUIRE(rg.out.dim(SlotKey{0, lat0.zero()}) == 3);
    REQUIRE(rg.out.dim(SlotKey{1, lat0.zero()}) == 1);
    // weight (1) slot comes first in slot order, so lands at offset 0
    REQUIRE(rg.placement.at(SlotKey{0, Weight{{1}}}).second == 0);
    REQUIRE(rg.placement.at(SlotKey{0, Weight{{2}}}).second == 1);

    GradedLinearMap d(sp, sp, 1, lat1.zero());
    d.set_entry(BasisRef{SlotKey{0, Weight{{1}}}, 0}, BasisRef{SlotKey{1, Weight{{1}}}, 0},
                Rational(5));
    GradedLinearMap dt = transport(d, rg, rg, lat0.zero());
    REQUIRE(dt.apply(Element::basis_vector(rg.out, BasisRef{SlotKey{0, lat0.zero()}, 0})) ==
            Element::basis_vector(rg.out, BasisRef{SlotKey{1, lat0.zero()}, 0}).scaled(5));
}

TEST_CASE("inverse of isomorphism round trips") {
    Rng rng(24);
    InstanceProfile p;
    for (int t = 0; t < 10; ++t) {
        Complex M = random_complex(rng, p);
        GradedLinearMap g = random_change_of_basis(rng, M.space);
        GradedLinearMap gi = inverse_of_iso(g);
        REQUIRE(compose(g, gi) == GradedLinearMap::identity(M.space));
        REQUIRE(compose(gi, g) == GradedLinearMap::identity(M.space));
        REQUIRE(is_isomorphism(g));
    }
}
