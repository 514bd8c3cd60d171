#pragma once

#include "hcdg/complex.hpp"

#include <algorithm>
#include <cstdint>

namespace hcdg {

/// Split torus, determined by its character lattice X*(K) = Z^rank.
/// Reductivity and the freeness of the Lie algebra come for free here.
struct TorusGroup {
    WeightLattice lattice;

    bool operator==(const TorusGroup&) const = default;
    std::size_t rank() const { return lattice.rank; }
};

/// Element of the (abelian) Lie algebra: a rational cocharacter vector.
struct LieAlgebraElement {
    std::vector<Rational> coords;

    static LieAlgebraElement zero(const TorusGroup& K) {
        return LieAlgebraElement{std::vector<Rational>(K.rank())};
    }
    static LieAlgebraElement basis(const TorusGroup& K, std::size_t i) {
        LieAlgebraElement xi = zero(K);
        xi.coords.at(i) = 1;
        return xi;
    }
};

/// Torus homomorphism f: K -> L, stored as the character pullback
/// f*: X*(L) -> X*(K). The differential df: Lie(K) -> Lie(L) is the
/// transpose matrix.
struct GroupHom {
    TorusGroup source; // K
    TorusGroup target; // L
    std::vector<std::vector<std::int64_t>> char_map; // rank(K) rows, rank(L) cols

    static GroupHom identity(const TorusGroup& K) {
        GroupHom f{K, K, {}};
        f.char_map.assign(K.rank(), std::vector<std::int64_t>(K.rank(), 0));
        for (std::size_t i = 0; i < K.rank(); ++i) f.char_map[i][i] = 1;
        return f;
    }

    /// The unique map from the trivial torus into L.
    static GroupHom from_trivial(const TorusGroup& L) {
        return GroupHom{TorusGroup{WeightLattice{0}}, L,
                        std::vector<std::vector<std::int64_t>>{}};
    }

    bool is_identity() const {
        if (!(source == target)) return false;
        for (std::size_t i = 0; i < char_map.size(); ++i)
            for (std::size_t j = 0; j < char_map[i].size(); ++j)
                if (char_map[i][j] != (i == j ? 1 : 0)) return false;
        return true;
    }

    /// f*(lambda) for lambda in X*(L).
    Weight pull_char(const Weight& lambda) const {
        if (lambda.rank() != target.rank()) throw StructureError("pull_char: rank mismatch");
        Weight out = source.lattice.zero();
        for (std::size_t i = 0; i < source.rank(); ++i)
            for (std::size_t j = 0; j < target.rank(); ++j)
                out.v[i] += char_map[i][j] * lambda.v[j];
        return out;
    }

    /// df(xi) in Lie(L); the transpose of the character pullback, so that
    /// <lambda, df xi> = <f* lambda, xi>.
    LieAlgebraElement push_lie(const LieAlgebraElement& xi) const {
        if (xi.coords.size() != source.rank()) throw StructureError("push_lie: rank mismatch");
        LieAlgebraElement out = LieAlgebraElement::zero(target);
        for (std::size_t j = 0; j < target.rank(); ++j)
            for (std::size_t i = 0; i < source.rank(); ++i)
                out.coords[j] += Rational(char_map[i][j]) * xi.coords[i];
        return out;
    }
};

/// g . f as group homomorphisms; characters pull back the other way.
inline GroupHom compose_hom(const GroupHom& g, const GroupHom& f) {
    if (!(f.target == g.source)) throw StructureError("compose_hom: endpoint mismatch");
    GroupHom r{f.source, g.target, {}};
    r.char_map.assign(f.source.rank(), std::vector<std::int64_t>(g.target.rank(), 0));
    for (std::size_t i = 0; i < f.source.rank(); ++i)
        for (std::size_t j = 0; j < g.target.rank(); ++j)
            for (std::size_t k = 0; k < f.target.rank(); ++k)
                r.char_map[i][j] += f.char_map[i][k] * g.char_map[k][j];
    return r;
}

/// Differentiated torus action on a complex: weight-lambda vectors scale by
/// <lambda, xi>. Bidegree (0, 0) and commutes with d by construction.
inline GradedLinearMap dnu(const LieAlgebraElement& xi, const Complex& V) {
    GradedLinearMap f(V.space, V.space, 0, V.lattice().zero());
    for (const auto& [s, dim] : V.space.slots()) {
        Rational c = pair_weight(s.weight, xi.coords);
        if (c != 0) f.set_block(s, Mat::identity(dim).scaled(c));
    }
    return f;
}

struct RestrictedComplex {
    Complex cx;         // graded over X*(K)
    Regrading regrade;  // placement of the original X*(L)-slots
};

/// Pullback of the torus action along f: K -> L; an L-weight-lambda slot
/// becomes a K-weight-f*(lambda) slot, merging slots with equal image.
inline RestrictedComplex restrict_complex(const GroupHom& f, const Complex& V) {
    if (V.lattice() != f.target.lattice) throw StructureError("restrict: lattice mismatch");
    Regrading rg = regrade(
        V.space, [&](const SlotKey& s) { return f.pull_char(s.weight); }, f.source.lattice);
    GradedLinearMap d = transport(V.d, rg, rg, f.source.lattice.zero());
    return RestrictedComplex{make_complex(rg.out, std::move(d)), std::move(rg)};
}

/// Finite observation region: a degree interval and a finite weight set.
struct Window {
    int deg_lo = 0;
    int deg_hi = 0;
    std::vector<Weight> weights; // sorted, unique

    static Window box(int dlo, int dhi, std::int64_t wlo, std::int64_t whi,
                      const WeightLattice& lat) {
        if (dlo > dhi || wlo > whi) throw StructureError("Window: empty interval");
        Window w{dlo, dhi, {}};
        std::vector<std::int64_t> cur(lat.rank, wlo);
        if (lat.rank == 0) {
            w.weights.push_back(lat.zero());
            return w;
        }
        while (true) {
            w.weights.push_back(Weight{cur});
            std::size_t i = 0;
            while (i < lat.rank) {
                if (++cur[i] <= whi) break;
                cur[i] = wlo;
                ++i;
            }
            if (i == lat.rank) break;
        }
        std::sort(w.weights.begin(), w.weights.end());
        return w;
    }

    bool contains(const SlotKey& s) const {
        if (s.degree < deg_lo || s.degree > deg_hi) return false;
        return std::binary_search(weights.begin(), weights.end(), s.weight);
    }

    Window widened(int extra_deg) const {
        Window w = *this;
        w.deg_lo -= extra_deg;
        w.deg_hi += extra_deg;
        return w;
    }
};

/// Right adjoint of restrict_complex on a window: the L-weight-lambda slot
/// of the output is the K-weight-f*(lambda) slot of N. Exact on the window
/// because the functor is weight-local.
inline Complex group_coinduce(const GroupHom& f, const Complex& N, const Window& window) {
    if (N.lattice() != f.source.lattice) throw StructureError("group_coinduce: lattice mismatch");
    BigradedSpace sp(f.target.lattice);
    for (int deg = window.deg_lo; deg <= window.deg_hi; ++deg)
        for (const auto& lam : window.weights)
            sp.set_slot(SlotKey{deg, lam}, N.space.dim(SlotKey{deg, f.pull_char(lam)}));
    GradedLinearMap d(sp, sp, 1, f.target.lattice.zero());
    for (const auto& [s, dim] : sp.slots()) {
        SlotKey t{s.degree + 1, s.weight};
        if (sp.dim(t) == 0) continue;
        Mat blk = N.d.block(SlotKey{s.degree, f.pull_char(s.weight)});
        if (blk.rows() != sp.dim(t)) continue; // target outside window cut
        if (!blk.is_zero()) d.set_block(s, std::move(blk));
    }
    // d^2 = 0 inherited; window cuts only whole slots, never parts of one
    return Complex{std::move(sp), std::move(d)};
}

/// Unit M -> group_coinduce(f, restrict(f, M)) of the (restrict, coinduce)
/// adjunction, defined on the window-supported part of M.
inline GradedLinearMap group_coinduce_unit(const GroupHom& f, const Complex& M,
                                           const RestrictedComplex& FM, const Complex& GFM,
                                           const Window& window) {
    GradedLinearMap eta(M.space, GFM.space, 0, f.target.lattice.zero());
    for (const auto& [s, dim] : M.space.slots()) {
        if (!window.contains(s))
            throw StructureError("group_coinduce_unit: window underflow at " + s.str());
        const auto& [t, off] = FM.regrade.placement.at(s);
        Mat blk(GFM.space.dim(s), dim);
        for (std::size_t i = 0; i < dim; ++i) blk(off + i, i) = 1;
        eta.set_block(s, std::move(blk));
    }
    return eta;
}

/// Counit restrict(f, group_coinduce(f, N)) -> N: every window copy of a
/// slot maps by the identity.
inline GradedLinearMap group_coinduce_counit(const GroupHom& f, const Complex& N,
                                             const Complex& GN, const RestrictedComplex& FGN) {
    GradedLinearMap eps(FGN.cx.space, N.space, 0, f.source.lattice.zero());
    std::map<SlotKey, Mat> acc;
    for (const auto& [s, dim] : GN.space.slots()) {
        const auto& [t, off] = FGN.regrade.placement.at(s);
        SlotKey ns{s.degree, f.pull_char(s.weight)};
        auto it = acc.find(t);
        if (it == acc.end()) it = acc.emplace(t, Mat(N.space.dim(ns), FGN.cx.space.dim(t))).first;
        for (std::size_t i = 0; i < dim; ++i) it->second(i, off + i) = 1;
    }
    for (auto& [t, m] : acc)
        if (!m.is_zero()) eps.set_block(t, std::move(m));
    return eps;
}

} // namespace hcdg
