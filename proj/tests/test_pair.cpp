#include "hcdg/pair.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hcdg;

namespace {
const TorusGroup K0{WeightLattice{0}};
const TorusGroup K1{WeightLattice{1}};
const TorusGroup K2{WeightLattice{2}};
} // namespace

TEST_CASE("trivial pair: rank 0 gives the scalar pair") {
    Pair P = trivial_pair(K0, 3);
    REQUIRE(P.algebra().space().total_dim() == 1);
    REQUIRE(validate_pair(P).ok());
    Pair S = scalar_pair(K0);
    REQUIRE(P.algebra().space() == S.algebra().space());
}

TEST_CASE("trivial pair rank 1 cap 2: basis 1, h, h^2 and the pair axiom holds") {
    Pair P = trivial_pair(K1, 2);
    REQUIRE(P.algebra().space().total_dim() == 3);
    ValidationReport rep = validate_pair(P);
    INFO(rep.summary());
    REQUIRE(rep.ok());
    // [psi(xi), a] = 0 = <0, xi> a on the all-weight-zero carrier
    BasisRef h{SlotKey{0, K1.lattice.zero()}, 1};
    Element eh = Element::basis_vector(P.algebra().space(), h);
    REQUIRE(P.psi.at(0) == eh);
}

TEST_CASE("trivial pair rank 2 cap 1 validates") {
    Pair P = trivial_pair(K2, 1);
    ValidationReport rep = validate_pair(P);
    INFO(rep.summary());
    REQUIRE(rep.ok());
}

TEST_CASE("commutative algebras cannot carry nonzero weights as pairs") {
    // A = truncated k[x] with x of weight 1 and psi = c . 1: the axiom demands
    // [psi, x] = x, impossible in a commutative algebra; the report names x
    DgAlgebraData A = truncated_polynomial_algebra(K1.lattice, {Weight{{1}}}, 2);
    Pair P{WeakPair{K1, A}, {A.unit().scaled(Rational(5, 7))}};
    ValidationReport rep = validate_pair(P);
    REQUIRE_FALSE(rep.ok());
    bool names_x = false;
    for (const auto& v : rep.violations)
        if (v.law == "pair-axiom" && v.witness.find(Weight{{1}}.str()) != std::string::npos)
            names_x = true;
    REQUIRE(names_x);
}

TEST_CASE("weyl pair realizes the pair axiom at nonzero weights") {
    Pair P = weyl_pair(4);
    ValidationReport rep = validate_pair(P);
    INFO(rep.summary());
    REQUIRE(rep.ok());
    REQUIRE(rep.skipped > 0); // truncated products near the cap
    // [qp, q] = q and [qp, p] = -p explicitly
    const DgAlgebraData& A = P.algebra();
    BasisRef q{SlotKey{0, Weight{{1}}}, 0}, p{SlotKey{0, Weight{{-1}}}, 0};
    Element eq = Element::basis_vector(A.space(), q);
    Element ep = Element::basis_vector(A.space(), p);
    REQUIRE(*A.commutator(P.psi.at(0), 0, eq, 0) == eq);
    REQUIRE(*A.commutator(P.psi.at(0), 0, ep, 0) == ep.scaled(-1));
}

TEST_CASE("opposite pair: psi flips sign, carrier unchanged, still a pair") {
    Pair P = weyl_pair(3);
    Pair Q = opposite_pair(P);
    REQUIRE(Q.psi.at(0) == P.psi.at(0).scaled(-1));
    REQUIRE(Q.algebra().space() == P.algebra().space());
    ValidationReport rep = validate_pair(Q);
    INFO(rep.summary());
    REQUIRE(rep.ok());
    // double opposite is the identity on data
    Pair R = opposite_pair(Q);
    REQUIRE(R.psi.at(0) == P.psi.at(0));
    for (const auto& [key, val] : P.algebra().product_entries()) {
        PartialElement other = R.algebra().mult_basis(key.first, key.second);
        if (!val)
            REQUIRE_FALSE(other.has_value());
        else
            REQUIRE(*other == *val);
    }
}

TEST_CASE("opposite of the trivial pair keeps the commutative product") {
    Pair P = trivial_pair(K1, 2);
    Pair Q = opposite_pair(P);
    for (const auto& a : P.algebra().space().basis())
        for (const auto& b : P.algebra().space().basis()) {
            PartialElement x = P.algebra().mult_basis(a, b);
            PartialElement y = Q.algebra().mult_basis(a, b);
            REQUIRE(x.has_value() == y.has_value());
            if (x) REQUIRE(*x == *y);
        }
}

TEST_CASE("opposite pair with an odd generator: e *op e = -e^2 = 0") {
    DgAlgebraData A = exterior_algebra(K1.lattice, {1}, {Weight{{0}}});
    Pair P{WeakPair{K1, A}, {Element{}}};
    REQUIRE(validate_pair(P).ok());
    Pair Q = opposite_pair(P);
    BasisRef e{SlotKey{1, Weight{{0}}}, 0};
    REQUIRE(Q.algebra().mult_basis(e, e)->is_zero());
}

TEST_CASE("tensor with the scalar pair is isomorphic to the original") {
    Pair P = weyl_pair(2);
    TensorPair T = tensor_pair(P, scalar_pair(K1));
    REQUIRE(validate_pair(T.pair).ok());
    GradedLinearMap u = right_unitor(T.layout);
    REQUIRE(is_isomorphism(u));
    // multiplication transported along the unitor agrees with P's
    for (const auto& a : T.pair.algebra().space().basis())
        for (const auto& b : T.pair.algebra().space().basis()) {
            PartialElement ab = T.pair.algebra().mult_basis(a, b);
            PartialElement pq = P.algebra().mult(u.apply_basis(a), u.apply_basis(b));
            REQUIRE(ab.has_value() == pq.has_value());
            if (ab) REQUIRE(u.apply(*ab) == *pq);
        }
    REQUIRE(u.apply(T.pair.psi.at(0)) == P.psi.at(0));
}

TEST_CASE("tensor of two trivial pairs: psi(xi) = xi (h x 1 + 1 x h)") {
    Pair P = trivial_pair(K1, 1);
    TensorPair T = tensor_pair(P, P);
    ValidationReport rep = validate_pair(T.pair);
    INFO(rep.summary());
    REQUIRE(rep.ok());
    BasisRef h{SlotKey{0, K1.lattice.zero()}, 1};
    Element h1 = T.layout.tensor_elem(Element::basis_vector(P.algebra().space(), h),
                                      P.algebra().unit());
    Element oneh = T.layout.tensor_elem(P.algebra().unit(),
                                        Element::basis_vector(P.algebra().space(), h));
    REQUIRE(T.pair.psi.at(0) == h1 + oneh);
}

TEST_CASE("tensor pair of weyl and koszul line validates with differential") {
    Pair P = weyl_pair(2);
    Pair Q = koszul_line_pair(K1, 2);
    TensorPair T = tensor_pair(P, Q);
    ValidationReport rep = validate_pair(T.pair);
    INFO(rep.summary());
    REQUIRE(rep.ok());
    REQUIRE_FALSE(T.pair.algebra().d().is_zero());
}

TEST_CASE("tensor pair associativity up to the canonical isomorphism") {
    Pair A = weyl_pair(2);
    Pair B = trivial_pair(K1, 1);
    Pair C = koszul_line_pair(K1, 1);
    TensorPair AB = tensor_pair(A, B);
    TensorPair AB_C = tensor_pair(AB.pair, C);
    TensorPair BC = tensor_pair(B, C);
    TensorPair A_BC = tensor_pair(A, BC.pair);
    // canonical associator on basis: (a x b) x c -> a x (b x c)
    GradedLinearMap assoc = map_from_basis_images(
        AB_C.pair.algebra().space(), A_BC.pair.algebra().space(), 0, K1.lattice.zero(),
        [&](const BasisRef& v) {
            const auto& [ab, c] = AB_C.layout.unpair(v);
            const auto& [a, b] = AB.layout.unpair(ab);
            return A_BC.layout.tensor_elem(
                Element::basis_vector(A.algebra().space(), a),
                BC.layout.tensor_elem(Element::basis_vector(B.algebra().space(), b),
                                      Element::basis_vector(C.algebra().space(), c)));
        });
    REQUIRE(is_isomorphism(assoc));
    REQUIRE(is_chain_map(AB_C.pair.algebra().carrier(), A_BC.pair.algebra().carrier(), assoc));
    REQUIRE(assoc.apply(AB_C.pair.psi.at(0)) == A_BC.pair.psi.at(0));
    // products agree through the associator where both sides are in carrier
    for (const auto& x : AB_C.pair.algebra().space().basis())
        for (const auto& y : AB_C.pair.algebra().space().basis()) {
            PartialElement lhs = AB_C.pair.algebra().mult_basis(x, y);
            PartialElement rhs = A_BC.pair.algebra().mult(assoc.apply_basis(x), assoc.apply_basis(y));
            if (lhs && rhs) REQUIRE(assoc.apply(*lhs) == *rhs);
        }
}

TEST_CASE("triple to tensor: trivial triple gives psi x 1 - 1 x psi") {
    Pair P = trivial_pair(K1, 1);
    Triple T{P, P};
    TensorPair tp = triple_to_tensor(T);
    ValidationReport rep = validate_pair(tp.pair);
    INFO(rep.summary());
    REQUIRE(rep.ok());
    BasisRef h{SlotKey{0, K1.lattice.zero()}, 1};
    Element h1 = tp.layout.tensor_elem(Element::basis_vector(P.algebra().space(), h),
                                       P.algebra().unit());
    Element oneh = tp.layout.tensor_elem(P.algebra().unit(),
                                         Element::basis_vector(P.algebra().space(), h));
    REQUIRE(tp.pair.psi.at(0) == h1 - oneh);
}

TEST_CASE("triple with scalar right factor reduces to the left pair") {
    Pair P = weyl_pair(2);
    Triple T{P, scalar_pair(K1)};
    TensorPair tp = triple_to_tensor(T);
    GradedLinearMap u = right_unitor(tp.layout);
    REQUIRE(is_isomorphism(u));
    REQUIRE(u.apply(tp.pair.psi.at(0)) == P.psi.at(0));
    REQUIRE(validate_pair(tp.pair).ok());
}

TEST_CASE("triple to tensor output validates for a mixed triple") {
    Triple T{weyl_pair(2), koszul_line_pair(K1, 1)};
    TensorPair tp = triple_to_tensor(T);
    ValidationReport rep = validate_pair(tp.pair);
    INFO(rep.summary());
    REQUIRE(rep.ok());
}

TEST_CASE("pair maps: identity, unit embedding, canonical from trivial pair") {
    Pair P = weyl_pair(3);
    PairMap idm = identity_pair_map(P.weak);
    REQUIRE(validate_pair_map(idm, P, P).ok());

    PairMap u = unit_pair_map(P.weak);
    REQUIRE(validate_weak_pair_map(u, scalar_pair(K1).weak, P.weak).ok());

    // U(k) -> A sending h to psi(xi); needs h^cap images inside the carrier
    Pair U = trivial_pair(K1, 1);
    PairMap can{GroupHom::identity(K1), {}};
    can.alg_images[BasisRef{SlotKey{0, K1.lattice.zero()}, 0}] = P.algebra().unit();
    can.alg_images[BasisRef{SlotKey{0, K1.lattice.zero()}, 1}] = P.psi.at(0);
    ValidationReport rep = validate_pair_map(can, U, P);
    INFO(rep.summary());
    REQUIRE(rep.ok());
}

TEST_CASE("pair map validation catches a broken psi condition") {
    Pair P = weyl_pair(3);
    PairMap idm = identity_pair_map(P.weak);
    Pair Q = P;
    Q.psi[0] = P.psi[0].scaled(2);
    ValidationReport rep = validate_pair_map(idm, P, Q);
    REQUIRE_FALSE(rep.ok());
}
