#pragma once

#include "hcdg/dg_algebra.hpp"
#include "hcdg/torus.hpp"

#include <numeric>

namespace hcdg {

/// Weak Harish-Chandra pair: a torus acting on a dg algebra. In the torus
/// model the action is the weight grading, so weight additivity of the
/// product is the whole equivariance condition.
struct WeakPair {
    TorusGroup group;
    DgAlgebraData algebra;

    const WeightLattice& lattice() const { return group.lattice; }
};

/// Pair: a weak pair plus psi: Lie(K) -> A^0 with the commutator condition.
/// psi is stored through images of the cocharacter basis vectors.
struct Pair {
    WeakPair weak;
    std::vector<Element> psi; // one element of slot (0,0) per lattice axis

    const TorusGroup& group() const { return weak.group; }
    const DgAlgebraData& algebra() const { return weak.algebra; }

    Element psi_of(const LieAlgebraElement& xi) const {
        Element e;
        for (std::size_t i = 0; i < psi.size(); ++i) e.accumulate(psi[i], xi.coords.at(i));
        return e;
    }
};

struct WeakTriple {
    WeakPair left;  // (A, K)
    WeakPair right; // (D, K), acting from the right on triple modules
};

struct Triple {
    Pair left;
    Pair right;

    WeakTriple weak() const { return WeakTriple{left.weak, right.weak}; }
};

inline ValidationReport validate_weak_pair(const WeakPair& P) {
    ValidationReport rep = validate_dg_algebra(P.algebra);
    rep.checks++;
    if (!(P.algebra.lattice() == P.group.lattice))
        rep.fail("pair-lattice", "algebra lattice does not match the group");
    return rep;
}

/// d psi = 0, psi lands in slot (0,0), and [psi(xi), a] = <mu, xi> a for
/// every lattice basis vector xi and algebra basis element a of weight mu.
inline ValidationReport validate_pair(const Pair& P) {
    ValidationReport rep = validate_weak_pair(P.weak);
    const DgAlgebraData& A = P.algebra();
    SlotKey zero_slot{0, P.group().lattice.zero()};
    if (P.psi.size() != P.group().rank())
        rep.fail("psi-rank", "psi has " + std::to_string(P.psi.size()) + " components");
    for (std::size_t i = 0; i < P.psi.size(); ++i) {
        rep.checks++;
        for (const auto& [k, v] : P.psi[i].comps)
            if (k != zero_slot)
                rep.fail("psi-slot", "psi_" + std::to_string(i) + " component at " + k.str());
        rep.checks++;
        if (!A.d().apply(P.psi[i]).is_zero())
            rep.fail("psi-closed", "d psi_" + std::to_string(i) + " != 0");
    }
    for (std::size_t i = 0; i < P.psi.size() && i < P.group().rank(); ++i) {
        for (const auto& a : A.space().basis()) {
            rep.checks++;
            Element ea = Element::basis_vector(A.space(), a);
            PartialElement br = A.commutator(P.psi[i], 0, ea, a.slot.degree);
            if (!br) {
                rep.skipped++;
                continue;
            }
            Rational scale = Rational(a.slot.weight.v.at(i));
            if (*br != ea.scaled(scale))
                rep.fail("pair-axiom", "(xi_" + std::to_string(i) + ", " + a.str() + ")");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Algebra catalog
// ---------------------------------------------------------------------------

/// Truncated polynomial algebra on commuting degree-0 generators with the
/// given weights; monomials above the cap are out of carrier. Monomial
/// basis is ordered by total degree, then lexicographically.
class MonomialBasis {
public:
    MonomialBasis(std::size_t vars, std::size_t cap) : vars_(vars), cap_(cap) {
        std::vector<std::size_t> cur(vars, 0);
        emit(cur, 0, 0);
        std::sort(monomials_.begin(), monomials_.end(),
                  [](const auto& a, const auto& b) {
                      std::size_t ta = std::accumulate(a.begin(), a.end(), std::size_t{0});
                      std::size_t tb = std::accumulate(b.begin(), b.end(), std::size_t{0});
                      return ta != tb ? ta < tb : a < b;
                  });
        for (std::size_t i = 0; i < monomials_.size(); ++i) index_[monomials_[i]] = i;
    }

    std::size_t size() const { return monomials_.size(); }
    std::size_t cap() const { return cap_; }
    const std::vector<std::size_t>& exponents(std::size_t i) const { return monomials_[i]; }
    std::optional<std::size_t> find(const std::vector<std::size_t>& e) const {
        auto it = index_.find(e);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    void emit(std::vector<std::size_t>& cur, std::size_t var, std::size_t total) {
        if (var == vars_) {
            monomials_.push_back(cur);
            return;
        }
        for (std::size_t e = 0; total + e <= cap_; ++e) {
            cur[var] = e;
            emit(cur, var + 1, total + e);
        }
        cur[var] = 0;
    }

    std::size_t vars_, cap_;
    std::vector<std::vector<std::size_t>> monomials_;
    std::map<std::vector<std::size_t>, std::size_t> index_;
};

inline DgAlgebraData truncated_polynomial_algebra(const WeightLattice& lat,
                                                  const std::vector<Weight>& gen_weights,
                                                  std::size_t cap) {
    MonomialBasis mb(gen_weights.size(), cap);
    BigradedSpace sp(lat);
    std::vector<SlotKey> slot_of(mb.size());
    std::vector<std::size_t> idx_of(mb.size());
    for (std::size_t i = 0; i < mb.size(); ++i) {
        Weight w = lat.zero();
        const auto& e = mb.exponents(i);
        for (std::size_t v = 0; v < e.size(); ++v)
            for (std::size_t r = 0; r < e[v]; ++r) w = w + gen_weights[v];
        SlotKey s{0, w};
        slot_of[i] = s;
        idx_of[i] = sp.dim(s);
        sp.add_to_slot(s, 1);
    }
    Complex carrier{sp, GradedLinearMap(sp, sp, 1, lat.zero())};
    std::size_t one = *mb.find(std::vector<std::size_t>(gen_weights.size(), 0));
    DgAlgebraData A(carrier, Element::basis_vector(sp, BasisRef{slot_of[one], idx_of[one]}));
    for (std::size_t i = 0; i < mb.size(); ++i)
        for (std::size_t j = 0; j < mb.size(); ++j) {
            std::vector<std::size_t> e = mb.exponents(i);
            const auto& f = mb.exponents(j);
            std::size_t total = 0;
            for (std::size_t v = 0; v < e.size(); ++v) total += (e[v] += f[v]);
            BasisRef a{slot_of[i], idx_of[i]}, b{slot_of[j], idx_of[j]};
            if (total > mb.cap()) {
                A.set_product(a, b, std::nullopt);
            } else {
                std::size_t k = *mb.find(e);
                A.set_product(a, b,
                              Element::basis_vector(sp, BasisRef{slot_of[k], idx_of[k]}));
            }
        }
    return A;
}

/// Exterior algebra on generators of odd degree (total, no truncation).
/// Basis: subsets of generators, ordered by popcount then bits.
inline DgAlgebraData exterior_algebra(const WeightLattice& lat,
                                      const std::vector<int>& gen_degrees,
                                      const std::vector<Weight>& gen_weights) {
    std::size_t g = gen_degrees.size();
    for (int d : gen_degrees)
        if (d % 2 == 0) throw StructureError("exterior_algebra: generators must have odd degree");
    std::vector<std::uint32_t> subsets;
    for (std::uint32_t m = 0; m < (1u << g); ++m) subsets.push_back(m);
    std::sort(subsets.begin(), subsets.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    BigradedSpace sp(lat);
    std::map<std::uint32_t, BasisRef> ref;
    for (auto m : subsets) {
        int deg = 0;
        Weight w = lat.zero();
        for (std::size_t i = 0; i < g; ++i)
            if (m & (1u << i)) {
                deg += gen_degrees[i];
                w = w + gen_weights[i];
            }
        SlotKey s{deg, w};
        ref[m] = BasisRef{s, sp.dim(s)};
        sp.add_to_slot(s, 1);
    }
    Complex carrier{sp, GradedLinearMap(sp, sp, 1, lat.zero())};
    DgAlgebraData A(carrier, Element::basis_vector(sp, ref[0]));
    for (auto ma : subsets)
        for (auto mb : subsets) {
            if (ma & mb) continue; // repeated generator: product is zero
            // sign: count inversions moving mb's generators past ma's
            int sign = 1;
            for (std::size_t i = 0; i < g; ++i) {
                if (!(mb & (1u << i))) continue;
                int cross = 0;
                for (std::size_t j = i + 1; j < g; ++j)
                    if (ma & (1u << j)) cross++;
                if (cross % 2 != 0) sign = -sign;
            }
            Element prod = Element::basis_vector(sp, ref[ma | mb]).scaled(sign);
            if (!prod.is_zero()) A.set_product(ref[ma], ref[mb], prod);
        }
    return A;
}

/// Rank-1 Weyl-type pair, truncated: generators q (weight +1) and p
/// (weight -1) in degree 0 with pq - qp = 1, normal-ordered basis q^i p^j
/// with i + j <= cap, psi(xi) = xi . qp. The noncommutativity is what
/// realizes the pair axiom at nonzero weights.
inline Pair weyl_pair(std::size_t cap) {
    if (cap < 2) throw StructureError("weyl_pair: cap must be >= 2 so that qp is in carrier");
    WeightLattice lat{1};
    struct QP {
        std::size_t qi, pj;
    };
    std::vector<QP> basis;
    for (std::size_t t = 0; t <= cap; ++t)
        for (std::size_t i = 0; i <= t; ++i) basis.push_back(QP{i, t - i});
    BigradedSpace sp(lat);
    std::map<std::pair<std::size_t, std::size_t>, BasisRef> ref;
    for (const auto& m : basis) {
        Weight w{{static_cast<std::int64_t>(m.qi) - static_cast<std::int64_t>(m.pj)}};
        SlotKey s{0, w};
        ref[{m.qi, m.pj}] = BasisRef{s, sp.dim(s)};
        sp.add_to_slot(s, 1);
    }
    Complex carrier{sp, GradedLinearMap(sp, sp, 1, lat.zero())};
    DgAlgebraData A(carrier, Element::basis_vector(sp, ref[{0, 0}]));
    auto binom = [](std::size_t n, std::size_t k) {

        Rational r = 1;
        for (std::size_t i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
        return r;
    };
    for (const auto& x : basis)
        for (const auto& y : basis) {
            // q^i p^j q^k p^l = sum_m m! C(j,m) C(k,m) q^{i+k-m} p^{j+l-m}
            if (x.qi + x.pj + y.qi + y.pj > cap) {
                A.set_product(ref[{x.qi, x.pj}], ref[{y.qi, y.pj}], std::nullopt);
                continue;
            }
            Element prod;
            Rational fact = 1;
            for (std::size_t m = 0; m <= std::min(x.pj, y.qi); ++m) {
                if (m > 0) fact *= Rational(m);
                Rational c = fact * binom(x.pj, m) * binom(y.qi, m);
                prod.accumulate(Element::basis_vector(
                                    sp, ref[{x.qi + y.qi - m, x.pj + y.pj - m}]),
                                c);
            }
            if (!prod.is_zero()) A.set_product(ref[{x.qi, x.pj}], ref[{y.qi, y.pj}], prod);
        }
    Element qp = Element::basis_vector(sp, ref[{1, 1}]);
    return Pair{WeakPair{TorusGroup{lat}, std::move(A)}, {qp}};
}

/// Truncated dg algebra k[e] (x) <h> with e in degree 0, h in degree 1,
/// d e = h, h^2 = 0, all weights zero. Basis e^i and e^i h for i <= cap;
/// products of total e-power above the cap are out of carrier. This is the
/// smallest catalog entry with a genuinely nonzero differential.
inline DgAlgebraData koszul_line_algebra(const WeightLattice& lat, std::size_t cap) {
    BigradedSpace sp(lat);
    SlotKey s0{0, lat.zero()}, s1{1, lat.zero()};
    sp.set_slot(s0, cap + 1); // e^0 .. e^cap
    sp.set_slot(s1, cap + 1); // e^0 h .. e^cap h
    GradedLinearMap d(sp, sp, 1, lat.zero());
    Mat blk(cap + 1, cap + 1); // d(e^i) = i e^{i-1} h
    for (std::size_t i = 1; i <= cap; ++i) blk(i - 1, i) = Rational(i);
    if (!blk.is_zero()) d.set_block(s0, std::move(blk));
    Complex carrier = make_complex(sp, std::move(d));
    DgAlgebraData A(carrier, Element::basis_vector(sp, BasisRef{s0, 0}));
    for (std::size_t i = 0; i <= cap; ++i)
        for (std::size_t j = 0; j <= cap; ++j) {
            // e^i . e^j and the three h-variants
            BasisRef ei{s0, i}, ej{s0, j}, eih{s1, i}, ejh{s1, j};
            if (i + j <= cap) {
                A.set_product(ei, ej, Element::basis_vector(sp, BasisRef{s0, i + j}));
                A.set_product(ei, ejh, Element::basis_vector(sp, BasisRef{s1, i + j}));
                A.set_product(eih, ej, Element::basis_vector(sp, BasisRef{s1, i + j}));
                // (e^i h)(e^j h) = 0 since h^2 = 0: leave the zero product absent
            } else {
                A.set_product(ei, ej, std::nullopt);
                A.set_product(ei, ejh, std::nullopt);
                A.set_product(eih, ej, std::nullopt);
                // (e^i h)(e^j h) is exactly zero at any truncation
            }
        }
    return A;
}

/// (koszul_line_algebra, K) with psi = 0; valid because every weight is 0.
inline Pair koszul_line_pair(const TorusGroup& K, std::size_t cap) {
    return Pair{WeakPair{K, koszul_line_algebra(K.lattice, cap)},
                std::vector<Element>(K.rank(), Element{})};
}

/// k[x]/(x^n) with x in degree 0 and the given weight. All products are in
/// carrier (x^{>= n} is exactly zero), so nothing is ever truncated.
inline DgAlgebraData nilpotent_poly_algebra(const WeightLattice& lat, const Weight& xw,
                                            std::size_t n) {
    if (n < 1) throw StructureError("nilpotent_poly_algebra: need n >= 1");
    BigradedSpace sp(lat);
    std::vector<BasisRef> power(n);
    for (std::size_t i = 0; i < n; ++i) {
        Weight w = lat.zero();
        for (std::size_t r = 0; r < i; ++r) w = w + xw;
        SlotKey s{0, w};
        power[i] = BasisRef{s, sp.dim(s)};
        sp.add_to_slot(s, 1);
    }
    Complex carrier{sp, GradedLinearMap(sp, sp, 1, lat.zero())};
    DgAlgebraData A(carrier, Element::basis_vector(sp, power[0]));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i + j < n)
                A.set_product(power[i], power[j], Element::basis_vector(sp, power[i + j]));
    return A;
}

/// Pair on k[x]/(x^n) with x central of weight zero; psi(xi_i) = c_i x.
inline Pair nilpotent_pair(const TorusGroup& K, std::size_t n,
                           const std::vector<Rational>& coeffs) {
    DgAlgebraData A = nilpotent_poly_algebra(K.lattice, K.lattice.zero(), n);
    BasisRef x{SlotKey{0, K.lattice.zero()}, 1};
    std::vector<Element> psi;
    for (std::size_t i = 0; i < K.rank(); ++i) {
        Rational c = i < coeffs.size() ? coeffs[i] : Rational(0);
        psi.push_back(n >= 2 ? Element::basis_vector(A.space(), x).scaled(c) : Element{});
    }
    return Pair{WeakPair{K, std::move(A)}, std::move(psi)};
}

/// Trivial pair (U(Lie K), K): truncated polynomial algebra on rank(K)
/// degree-0 weight-0 generators, psi(xi_i) = h_i.
inline Pair trivial_pair(const TorusGroup& K, std::size_t cap) {
    std::vector<Weight> wts(K.rank(), K.lattice.zero());
    DgAlgebraData A = truncated_polynomial_algebra(K.lattice, wts, cap);
    std::vector<Element> psi;
    for (std::size_t i = 0; i < K.rank(); ++i) {
        std::vector<std::size_t> e(K.rank(), 0);
        e[i] = 1;
        // generator h_i is the monomial with exponent vector e
        MonomialBasis mb(K.rank(), cap);
        std::size_t idx = *mb.find(e);
        // reconstruct its slot/idx the same way the algebra constructor did
        // (all weights zero, so slot is (0,0) and idx equals monomial rank)
        psi.push_back(Element::basis_vector(A.space(), BasisRef{SlotKey{0, K.lattice.zero()}, idx}));
    }
    return Pair{WeakPair{K, std::move(A)}, std::move(psi)};
}

/// The trivial weak pair (k, K) and its pair structure (psi = 0).
inline Pair scalar_pair(const TorusGroup& K) {
    return Pair{WeakPair{K, scalar_algebra(K.lattice)},
                std::vector<Element>(K.rank(), Element{})};
}

/// Opposite pair: same carrier, a *op b = (-1)^{|a||b|} ba, psi -> -psi.
inline Pair opposite_pair(const Pair& P) {
    Pair op{WeakPair{P.group(), opposite_algebra(P.algebra())}, {}};
    for (const auto& e : P.psi) op.psi.push_back(e.scaled(-1));
    return op;
}

inline WeakPair opposite_weak_pair(const WeakPair& P) {
    return WeakPair{P.group, opposite_algebra(P.algebra)};
}

struct TensorPair {
    TensorLayout layout;
    Pair pair;
};

/// (A (x) B, K) with psi = psi_A (x) 1 + 1 (x) psi_B.
inline TensorPair tensor_pair(const Pair& P, const Pair& Q) {
    if (!(P.group() == Q.group())) throw StructureError("tensor_pair: group mismatch");
    TensorAlgebra ta = tensor_algebra(P.algebra(), Q.algebra());
    std::vector<Element> psi;
    for (std::size_t i = 0; i < P.group().rank(); ++i) {
        Element e = ta.layout.tensor_elem(P.psi.at(i), Q.algebra().unit());
        e.accumulate(ta.layout.tensor_elem(P.algebra().unit(), Q.psi.at(i)));
        psi.push_back(std::move(e));
    }
    return TensorPair{ta.layout, Pair{WeakPair{P.group(), std::move(ta.algebra)}, std::move(psi)}};
}

struct TensorWeakPair {
    TensorLayout layout;
    WeakPair pair;
};

inline TensorWeakPair tensor_weak_pair(const WeakPair& P, const WeakPair& Q) {
    if (!(P.group == Q.group)) throw StructureError("tensor_weak_pair: group mismatch");
    TensorAlgebra ta = tensor_algebra(P.algebra, Q.algebra);
    return TensorWeakPair{ta.layout, WeakPair{P.group, std::move(ta.algebra)}};
}

/// Object half of the triple <-> tensor-pair equivalence:
/// (A, K, D) -> (A (x) D^op, K).
inline TensorPair triple_to_tensor(const Triple& T) {
    return tensor_pair(T.left, opposite_pair(T.right));
}

inline TensorWeakPair weak_triple_to_tensor(const WeakTriple& T) {
    return tensor_weak_pair(T.left, opposite_weak_pair(T.right));
}

// ---------------------------------------------------------------------------
// Maps of pairs
// ---------------------------------------------------------------------------

/// Weak map (A, K) -> (B, L): a group homomorphism plus an algebra
/// homomorphism recorded through basis images. Equivariance means a basis
/// vector of K-weight kappa maps into B-slots whose L-weight pulls back to
/// kappa.
struct PairMap {
    GroupHom group_map;                    // f_k : K -> L
    std::map<BasisRef, Element> alg_images; // f_a on the canonical basis of A

    Element apply(const Element& x) const {
        Element out;
        for (const auto& [k, v] : x.comps)
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] == 0) continue;
                auto it = alg_images.find(BasisRef{k, i});
                if (it == alg_images.end())
                    throw StructureError("PairMap: missing image for basis " + BasisRef{k, i}.str());
                out.accumulate(it->second, v[i]);
            }
        return out;
    }
};

inline PairMap identity_pair_map(const WeakPair& P) {
    PairMap f{GroupHom::identity(P.group), {}};
    for (const auto& b : P.algebra.space().basis())
        f.alg_images[b] = Element::basis_vector(P.algebra.space(), b);
    return f;
}

/// The unique weak map from the trivial weak pair (k, K) into (A, K).
inline PairMap unit_pair_map(const WeakPair& target) {
    PairMap f{GroupHom::identity(target.group), {}};
    f.alg_images[BasisRef{SlotKey{0, target.lattice().zero()}, 0}] = target.algebra.unit();
    return f;
}

/// g . f on pair maps.
inline PairMap compose_pair_maps(const PairMap& g, const PairMap& f) {
    PairMap r{compose_hom(g.group_map, f.group_map), {}};
    for (const auto& [b, img] : f.alg_images) r.alg_images[b] = g.apply(img);
    return r;
}

/// f_a as a graded linear map A -> restrict(f_k, B).
inline GradedLinearMap pair_map_linear(const PairMap& f, const DgAlgebraData& A,
                                       const RestrictedComplex& B_res) {
    return map_from_basis_images(
        A.space(), B_res.cx.space, 0, A.lattice().zero(),
        [&](const BasisRef& b) {
            auto it = f.alg_images.find(b);
            if (it == f.alg_images.end())
                throw StructureError("pair_map_linear: missing image for " + b.str());
            return B_res.regrade.push(it->second);
        });
}

/// (B, L) pulled back to K along f_k: the same algebra with its carrier
/// regraded by f*, together with the canonical weak map into (B, L).
struct RestrictedWeakPair {
    WeakPair pair;     // over K
    Regrading regrade; // placement of B's slots inside the new carrier
    PairMap to_target; // (pair, K) -> (B, L)
};

inline RestrictedWeakPair restrict_weak_pair(const GroupHom& fk, const WeakPair& B) {
    RestrictedComplex rc = restrict_complex(fk, B.algebra.carrier());
    DgAlgebraData A(rc.cx, rc.regrade.push(B.algebra.unit()));
    for (const auto& [key, val] : B.algebra.product_entries()) {
        BasisRef a = rc.regrade.push_basis(key.first);
        BasisRef b = rc.regrade.push_basis(key.second);
        if (!val)
            A.set_product(a, b, std::nullopt);
        else
            A.set_product(a, b, rc.regrade.push(*val));
    }
    PairMap f{fk, {}};
    for (const auto& b : B.algebra.space().basis())
        f.alg_images[rc.regrade.push_basis(b)] = Element::basis_vector(B.algebra.space(), b);
    return RestrictedWeakPair{WeakPair{fk.source, std::move(A)}, rc.regrade, std::move(f)};
}

/// Pair version: psi_K = psi_L . df makes the restricted weak pair a pair
/// and the canonical weak map a map of pairs.
struct RestrictedPair {
    Pair pair;
    Regrading regrade;
    PairMap to_target;
};

inline RestrictedPair restrict_pair(const GroupHom& fk, const Pair& B) {
    RestrictedWeakPair rw = restrict_weak_pair(fk, B.weak);
    std::vector<Element> psi;
    for (std::size_t i = 0; i < fk.source.rank(); ++i) {
        LieAlgebraElement xi = LieAlgebraElement::basis(fk.source, i);
        psi.push_back(rw.regrade.push(B.psi_of(fk.push_lie(xi))));
    }
    return RestrictedPair{Pair{std::move(rw.pair), std::move(psi)}, std::move(rw.regrade),
                          std::move(rw.to_target)};
}

/// Weak-map laws: closed degree-0 equivariant algebra homomorphism sending
/// unit to unit. Truncated products are skipped and counted.
inline ValidationReport validate_weak_pair_map(const PairMap& f, const WeakPair& A,
                                               const WeakPair& B) {
    ValidationReport rep;
    rep.checks++;
    if (!(f.group_map.source == A.group) || !(f.group_map.target == B.group))
        rep.fail("map-groups", "group endpoints mismatch");
    RestrictedComplex B_res = restrict_complex(f.group_map, B.algebra.carrier());
    GradedLinearMap lin = [&] {
        try {
            return pair_map_linear(f, A.algebra, B_res);
        } catch (const StructureError& e) {
            rep.fail("map-equivariance", e.what());
            return GradedLinearMap(A.algebra.space(), B_res.cx.space, 0,
                                   A.lattice().zero());
        }
    }();
    rep.checks++;
    if (!(compose(B_res.cx.d, lin) - compose(lin, A.algebra.d())).is_zero())
        rep.fail("map-closed", "f_a does not commute with differentials");
    rep.checks++;
    if (f.apply(A.algebra.unit()) != B.algebra.unit()) rep.fail("map-unit", "f(1) != 1");
    for (const auto& a : A.algebra.space().basis())
        for (const auto& b : A.algebra.space().basis()) {
            rep.checks++;
            PartialElement ab = A.algebra.mult_basis(a, b);
            if (!ab) {
                rep.skipped++;
                continue;
            }
            PartialElement rhs = B.algebra.mult(f.apply(Element::basis_vector(A.algebra.space(), a)),
                                                f.apply(Element::basis_vector(A.algebra.space(), b)));
            if (!rhs) {
                rep.skipped++;
                continue;
            }
            if (f.apply(*ab) != *rhs)
                rep.fail("map-multiplicative", "(" + a.str() + "," + b.str() + ")");
        }
    return rep;
}

/// Adds the pair condition f_a . psi_A = psi_B . df_k.
inline ValidationReport validate_pair_map(const PairMap& f, const Pair& A, const Pair& B) {
    ValidationReport rep = validate_weak_pair_map(f, A.weak, B.weak);
    for (std::size_t i = 0; i < A.group().rank(); ++i) {
        rep.checks++;
        LieAlgebraElement xi = LieAlgebraElement::basis(A.group(), i);
        if (f.apply(A.psi_of(xi)) != B.psi_of(f.group_map.push_lie(xi)))
            rep.fail("map-psi", "xi_" + std::to_string(i));
    }
    return rep;
}

} // namespace hcdg
