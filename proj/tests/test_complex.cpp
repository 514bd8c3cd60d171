#include "hcdg/complex.hpp"
#include "hcdg/generate.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hcdg;

namespace {

const WeightLattice lat{1};

// applies d twice to every basis vector and insists on exact cancellation
void check_d_squared_by_expansion(const Complex& C) {
    for (const auto& b : C.space.basis()) {
        Element dd = C.d.apply(C.d.apply_basis(b));
        REQUIRE(dd.is_zero());
    }
}

} // namespace

TEST_CASE("tensor with the unit complex is the canonical unitor isomorphism") {
    Rng rng(31);
    InstanceProfile p;
    for (int t = 0; t < 10; ++t) {
        Complex N = random_complex(rng, p);
        Complex k = unit_complex(lat);
        TensorComplex kN = tensor(k, N);
        GradedLinearMap u = left_unitor(kN.layout);
        REQUIRE(is_isomorphism(u));
        REQUIRE(is_chain_map(kN.cx, N, u));
        TensorComplex Nk = tensor(N, k);
        GradedLinearMap v = right_unitor(Nk.layout);
        REQUIRE(is_isomorphism(v));
        REQUIRE(is_chain_map(Nk.cx, N, v));
    }
}

TEST_CASE("tensor differential: d(m x n) = dm x n + (-1)^{|m|} m x dn") {
    // m in degree 1 with dm = 0; n -> n' and d(m x n) = -(m x n')
    BigradedSpace msp(lat);
    SlotKey sm{1, Weight{{0}}};
    msp.set_slot(sm, 1);
    Complex M{msp, GradedLinearMap(msp, msp, 1, lat.zero())};

    BigradedSpace nsp(lat);
    SlotKey sn{0, Weight{{0}}}, sn1{1, Weight{{0}}};
    nsp.set_slot(sn, 1);
    nsp.set_slot(sn1, 1);
    GradedLinearMap dn(nsp, nsp, 1, lat.zero());
    dn.set_entry(BasisRef{sn, 0}, BasisRef{sn1, 0}, Rational(1));
    Complex N = make_complex(nsp, std::move(dn));

    TensorComplex MN = tensor(M, N);
    Element mn = Element::basis_vector(MN.cx.space,
                                       MN.layout.pair_basis(BasisRef{sm, 0}, BasisRef{sn, 0}));
    Element expected = Element::basis_vector(
        MN.cx.space, MN.layout.pair_basis(BasisRef{sm, 0}, BasisRef{sn1, 0})).scaled(-1);
    REQUIRE(MN.cx.d.apply(mn) == expected);
}

TEST_CASE("d^2 = 0 on tensor products of random complexes") {
    Rng rng(32);
    InstanceProfile p;
    for (int t = 0; t < 10; ++t) {
        Complex M = random_complex(rng, p), N = random_complex(rng, p);
        TensorComplex MN = tensor(M, N);
        check_d_squared_by_expansion(MN.cx);
    }
}

TEST_CASE("tensor of maps is a bifunctor with the Koszul sign") {
    Rng rng(33);
    InstanceProfile p;
    p.max_slots = 2;
    for (int t = 0; t < 6; ++t) {
        Complex M = random_complex(rng, p), N = random_complex(rng, p);
        TensorComplex MN = tensor(M, N);
        // f, f': M -> M of degree 1 (use d and random (0,0) chain maps)
        GradedLinearMap f = M.d, fp = GradedLinearMap::identity(M.space);
        GradedLinearMap g = GradedLinearMap::identity(N.space), gp = N.d;
        // (f x g).(f' x g') = (-1)^{|g||f'|} (f.f') x (g.g'); here |g| = 0
        GradedLinearMap lhs = compose(tensor_map(MN.layout, MN.layout, f, g),
                                      tensor_map(MN.layout, MN.layout, fp, gp));
        GradedLinearMap rhs = tensor_map(MN.layout, MN.layout, compose(f, fp), compose(g, gp));
        REQUIRE(lhs == rhs);
        // now |g| = 1, |f'| = 1: sign flips
        GradedLinearMap lhs2 = compose(tensor_map(MN.layout, MN.layout, GradedLinearMap::identity(M.space), N.d),
                                       tensor_map(MN.layout, MN.layout, M.d, GradedLinearMap::identity(N.space)));
        GradedLinearMap rhs2 = tensor_map(MN.layout, MN.layout, M.d, N.d).scaled(-1);
        REQUIRE(lhs2 == rhs2);
    }
}

TEST_CASE("symmetry is a chain isomorphism squaring to the identity") {
    Rng rng(34);
    InstanceProfile p;
    for (int t = 0; t < 8; ++t) {
        Complex M = random_complex(rng, p), N = random_complex(rng, p);
        TensorComplex MN = tensor(M, N), NM = tensor(N, M);
        GradedLinearMap c = symmetry(MN.layout, NM.layout);
        GradedLinearMap cback = symmetry(NM.layout, MN.layout);
        REQUIRE(is_chain_map(MN.cx, NM.cx, c));
        REQUIRE(compose(cback, c) == GradedLinearMap::identity(MN.cx.space));
    }
}

TEST_CASE("symmetry sign on odd-odd pairs") {
    BigradedSpace msp(lat);
    SlotKey s1{1, Weight{{0}}};
    msp.set_slot(s1, 1);
    Complex M{msp, GradedLinearMap(msp, msp, 1, lat.zero())};
    TensorComplex MM = tensor(M, M);
    GradedLinearMap c = symmetry(MM.layout, MM.layout);
    Element mm = Element::basis_vector(MM.cx.space,
                                       MM.layout.pair_basis(BasisRef{s1, 0}, BasisRef{s1, 0}));
    REQUIRE(c.apply(mm) == mm.scaled(-1));
}

TEST_CASE("symmetry with the unit complex is the unitor composite") {
    Rng rng(35);
    InstanceProfile p;
    Complex N = random_complex(rng, p);
    Complex k = unit_complex(lat);
    TensorComplex kN = tensor(k, N), Nk = tensor(N, k);
    GradedLinearMap c = symmetry(kN.layout, Nk.layout);
    REQUIRE(compose(right_unitor(Nk.layout), c) == left_unitor(kN.layout));
}

TEST_CASE("shift relabels degrees and flips the differential sign") {
    Rng rng(36);
    InstanceProfile p;
    Complex M = random_complex(rng, p);
    ShiftResult s0 = shift(M, 0);
    REQUIRE(s0.cx.space == M.space);
    REQUIRE(s0.cx.d == M.d);
    ShiftResult s1 = shift(M, 1);
    ShiftResult back = shift(s1.cx, -1);
    REQUIRE(back.cx.space == M.space);
    REQUIRE(back.cx.d == M.d);
    // d_{M[1]} = -d on relabeled slots
    for (const auto& [s, dim] : s1.cx.space.slots())
        REQUIRE(s1.cx.d.block(s) == M.d.block(SlotKey{s.degree + 1, s.weight}).scaled(-1));
    // the canonical map M[1] -> M has bidegree (1, 0)
    REQUIRE(s1.to_original.degree_shift() == 1);
}

TEST_CASE("inner hom from the unit complex is the target") {
    Rng rng(37);
    InstanceProfile p;
    Complex N = random_complex(rng, p);
    Complex k = unit_complex(lat);
    HomComplex H = inner_hom(k, N);
    REQUIRE(H.cx.space == N.space); // slots match one for one
    REQUIRE(H.cx.d == N.d);
}

TEST_CASE("d^2 = 0 on inner hom of random complexes") {
    Rng rng(38);
    InstanceProfile p;
    p.max_slots = 2;
    for (int t = 0; t < 8; ++t) {
        Complex M = random_complex(rng, p), N = random_complex(rng, p);
        HomComplex H = inner_hom(M, N);
        check_d_squared_by_expansion(H.cx);
    }
}

TEST_CASE("closed degree-0 weight-0 hom elements are exactly chain maps") {
    // two-term complex x -> y: a chain map sends x to a x and y to b y with
    // d f(x) = a y and f(dx) = b y, so the space of chain maps is 1-dimensional
    BigradedSpace sp(lat);
    SlotKey s0{0, Weight{{0}}}, s1{1, Weight{{0}}};
    sp.set_slot(s0, 1);
    sp.set_slot(s1, 1);
    GradedLinearMap d(sp, sp, 1, lat.zero());
    d.set_entry(BasisRef{s0, 0}, BasisRef{s1, 0}, Rational(1));
    Complex C = make_complex(sp, std::move(d));
    // by hand: f = (a, b) with d f(x) = a y and f(d x) = b y, so a = b: dim 1
    std::vector<GradedLinearMap> maps = chain_map_space(C, C);
    REQUIRE(maps.size() == 1);
    HomComplex H = inner_hom(C, C);
    // closed (0,0) elements of Map(C, C): kernel of d on slot (0,0)
    SlotKey h0{0, Weight{{0}}};
    Mat blk = H.cx.d.block(h0);
    REQUIRE(blk.cols() - rank(blk) == 1);
}

TEST_CASE("tensor-hom adjunction: round trip and dimension equality") {
    Rng rng(39);
    InstanceProfile p;
    p.max_slots = 2;
    p.max_dim = 2;
    for (int t = 0; t < 6; ++t) {
        Complex M = random_complex(rng, p), N = random_complex(rng, p), L = random_complex(rng, p);
        TensorComplex MN = tensor(M, N);
        HomComplex NL = inner_hom(N, L);
        auto from = chain_map_space(MN.cx, L);
        auto to = chain_map_space(M, NL.cx);
        REQUIRE(from.size() == to.size());
        GradedLinearMap phi = random_combination(rng, from, MN.cx.space, L.space, 0, lat.zero());
        GradedLinearMap alpha = tensor_hom_adjoint(MN, L, NL.layout, phi);
        REQUIRE(is_chain_map(M, NL.cx, alpha));
        GradedLinearMap back = tensor_hom_adjoint_inverse(MN, L, NL.layout, alpha);
        REQUIRE(back == phi);
    }
}

TEST_CASE("adjoint of evaluation is the identity") {
    Rng rng(40);
    InstanceProfile p;
    p.max_slots = 2;
    Complex N = random_complex(rng, p), L = random_complex(rng, p);
    HomComplex NL = inner_hom(N, L);
    TensorComplex MN = tensor(NL.cx, N);
    // ev: Map(N,L) (x) N -> L
    GradedLinearMap ev = map_from_basis_images(
        MN.cx.space, L.space, 0, lat.zero(), [&](const BasisRef& b) {
            const auto& [f, n] = MN.layout.unpair(b);
            GradedLinearMap fm = NL.layout.as_map(f.slot, Element::basis_vector(NL.cx.space, f));
            return fm.apply_basis(n);
        });
    REQUIRE(is_chain_map(MN.cx, L, ev));
    GradedLinearMap alpha = tensor_hom_adjoint(MN, L, NL.layout, ev);
    REQUIRE(alpha == GradedLinearMap::identity(NL.cx.space));
}

TEST_CASE("tensor_hom_adjoint rejects non-closed maps") {
    BigradedSpace sp(lat);
    SlotKey s0{0, Weight{{0}}}, s1{1, Weight{{0}}};
    sp.set_slot(s0, 1);
    sp.set_slot(s1, 1);
    GradedLinearMap d(sp, sp, 1, lat.zero());
    d.set_entry(BasisRef{s0, 0}, BasisRef{s1, 0}, Rational(1));
    Complex C = make_complex(sp, std::move(d));
    Complex k = unit_complex(lat);
    TensorComplex Ck = tensor(C, k);
    HomComplex kC = inner_hom(k, C);
    GradedLinearMap bad(Ck.cx.space, C.space, 0, lat.zero());
    bad.set_entry(BasisRef{s0, 0}, BasisRef{s0, 0}, Rational(1)); // not a chain map
    REQUIRE_THROWS_AS(tensor_hom_adjoint(Ck, C, kC.layout, bad), StructureError);
}

TEST_CASE("cohomology of a split complex") {
    BigradedSpace sp(lat);
    SlotKey s0{0, Weight{{0}}}, s1{1, Weight{{0}}};
    sp.set_slot(s0, 2);
    sp.set_slot(s1, 1);
    GradedLinearMap d(sp, sp, 1, lat.zero());
    d.set_entry(BasisRef{s0, 0}, BasisRef{s1, 0}, Rational(1));
    Complex C = make_complex(sp, std::move(d));
    auto h = cohomology_dims(C);
    REQUIRE(h[s0] == 1);
    REQUIRE(h.find(s1) == h.end());
}
