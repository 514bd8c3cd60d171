#pragma once

#include "hcdg/bigraded.hpp"

#include <functional>
#include <tuple>
#include <utility>

namespace hcdg {

/// Cochain complex: bigraded space plus a square-zero differential of
/// bidegree (+1, 0). Weight shift 0 encodes that the torus action commutes
/// with the differential.
struct Complex {
    BigradedSpace space;
    GradedLinearMap d;

    Complex() = default;
    Complex(BigradedSpace sp, GradedLinearMap diff) : space(std::move(sp)), d(std::move(diff)) {}

    const WeightLattice& lattice() const { return space.lattice(); }
};

inline GradedLinearMap d_squared(const Complex& c) { return compose(c.d, c.d); }

/// Builds a complex, checking shape and d.d = 0 exactly.
inline Complex make_complex(BigradedSpace sp, GradedLinearMap d) {
    if (d.source() != sp || d.target() != sp)
        throw StructureError("make_complex: differential endpoints mismatch");
    if (d.degree_shift() != 1 || !d.weight_shift().is_zero())
        throw StructureError("make_complex: differential must have bidegree (+1, 0)");
    Complex c{std::move(sp), std::move(d)};
    if (!d_squared(c).is_zero()) throw StructureError("make_complex: d^2 != 0");
    return c;
}

inline Complex zero_complex(const WeightLattice& lat) {
    BigradedSpace sp(lat);
    return Complex{sp, GradedLinearMap(sp, sp, 1, lat.zero())};
}

/// The unit object: one-dimensional slot at (0, 0), zero differential.
inline Complex unit_complex(const WeightLattice& lat) {
    BigradedSpace sp(lat);
    sp.set_slot(SlotKey{0, lat.zero()}, 1);
    return Complex{sp, GradedLinearMap(sp, sp, 1, lat.zero())};
}

/// Builds a map entry by entry from images of basis vectors.
inline GradedLinearMap map_from_basis_images(
    const BigradedSpace& src, const BigradedSpace& dst, int deg, const Weight& wt,
    const std::function<Element(const BasisRef&)>& fn) {
    GradedLinearMap f(src, dst, deg, wt);
    for (const auto& b : src.basis()) {
        Element img = fn(b);
        for (const auto& [k, v] : img.comps) {
            if (k != b.slot.shifted(deg, wt))
                throw StructureError("map_from_basis_images: image not homogeneous at " + b.str());
            for (std::size_t i = 0; i < v.size(); ++i)
                if (v[i] != 0) f.set_entry(b, BasisRef{k, i}, v[i]);
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Tensor product
// ---------------------------------------------------------------------------

/// Basis bookkeeping for M (x) N: slot (n, l) = sum over i+j=n, a+b=l of
/// M(i,a) (x) N(j,b), summands ordered by (M slot, N slot), the N index
/// running fastest inside a summand.
struct TensorLayout {
    BigradedSpace Msp, Nsp, out;
    std::map<std::pair<SlotKey, SlotKey>, std::size_t> offsets;
    std::map<SlotKey, std::vector<std::pair<BasisRef, BasisRef>>> factors;

    BasisRef pair_basis(const BasisRef& m, const BasisRef& n) const {
        auto it = offsets.find({m.slot, n.slot});
        if (it == offsets.end()) throw StructureError("TensorLayout: no summand for slot pair");
        SlotKey t{m.slot.degree + n.slot.degree, m.slot.weight + n.slot.weight};
        return BasisRef{t, it->second + m.idx * Nsp.dim(n.slot) + n.idx};
    }

    const std::pair<BasisRef, BasisRef>& unpair(const BasisRef& b) const {
        return factors.at(b.slot).at(b.idx);
    }

    Element tensor_elem(const Element& a, const Element& b) const {
        Element r;
        for (const auto& [ka, va] : a.comps)
            for (const auto& [kb, vb] : b.comps)
                for (std::size_t i = 0; i < va.size(); ++i) {
                    if (va[i] == 0) continue;
                    for (std::size_t j = 0; j < vb.size(); ++j) {
                        if (vb[j] == 0) continue;
                        BasisRef t = pair_basis(BasisRef{ka, i}, BasisRef{kb, j});
                        r.accumulate(Element::basis_vector(out, t), va[i] * vb[j]);
                    }
                }
        return r;
    }
};

inline TensorLayout tensor_layout(const BigradedSpace& M, const BigradedSpace& N) {
    if (M.lattice() != N.lattice()) throw StructureError("tensor: lattice mismatch");
    TensorLayout L;
    L.Msp = M;
    L.Nsp = N;
    L.out = BigradedSpace(M.lattice());
    for (const auto& [sm, dm] : M.slots())
        for (const auto& [sn, dn] : N.slots()) {
            SlotKey t{sm.degree + sn.degree, sm.weight + sn.weight};
            L.offsets[{sm, sn}] = L.out.dim(t);
            auto& fac = L.factors[t];
            for (std::size_t i = 0; i < dm; ++i)
                for (std::size_t j = 0; j < dn; ++j)
                    fac.push_back({BasisRef{sm, i}, BasisRef{sn, j}});
            L.out.add_to_slot(t, dm * dn);
        }
    return L;
}

/// f (x) g on a tensor layout pair, with the Koszul sign
/// (f (x) g)(m (x) n) = (-1)^{|g| |m|} f(m) (x) g(n).
inline GradedLinearMap tensor_map(const TensorLayout& src, const TensorLayout& dst,
                                  const GradedLinearMap& f, const GradedLinearMap& g) {
    if (f.source() != src.Msp || g.source() != src.Nsp)
        throw StructureError("tensor_map: sources do not match layout");
    if (f.target() != dst.Msp || g.target() != dst.Nsp)
        throw StructureError("tensor_map: targets do not match layout");
    int deg = f.degree_shift() + g.degree_shift();
    Weight wt = f.weight_shift() + g.weight_shift();
    return map_from_basis_images(src.out, dst.out, deg, wt, [&](const BasisRef& b) {
        const auto& [m, n] = src.unpair(b);
        Element fm = f.apply_basis(m);
        Element gn = g.apply_basis(n);
        Element r = dst.tensor_elem(fm, gn);
        bool neg = (g.degree_shift() % 2 != 0) && (m.slot.degree % 2 != 0);
        return neg ? r.scaled(-1) : r;
    });
}

struct TensorComplex {
    TensorLayout layout;
    Complex cx;
};

/// M (x) N with d(m (x) n) = dm (x) n + (-1)^{|m|} m (x) dn.
inline TensorComplex tensor(const Complex& M, const Complex& N) {
    TensorLayout L = tensor_layout(M.space, N.space);
    GradedLinearMap d = tensor_map(L, L, M.d, GradedLinearMap::identity(N.space)) +
                        tensor_map(L, L, GradedLinearMap::identity(M.space), N.d);
    return TensorComplex{L, make_complex(L.out, std::move(d))};
}

/// The symmetry C: M (x) N -> N (x) M, m (x) n -> (-1)^{|m||n|} n (x) m.
inline GradedLinearMap symmetry(const TensorLayout& mn, const TensorLayout& nm) {
    return map_from_basis_images(
        mn.out, nm.out, 0, mn.out.lattice().zero(), [&](const BasisRef& b) {
            const auto& [m, n] = mn.unpair(b);
            Element r = Element::basis_vector(nm.out, nm.pair_basis(n, m));
            bool neg = (m.slot.degree % 2 != 0) && (n.slot.degree % 2 != 0);
            return neg ? r.scaled(-1) : r;
        });
}

/// k (x) N -> N.
inline GradedLinearMap left_unitor(const TensorLayout& kn) {
    if (kn.Msp.total_dim() != 1 || kn.Msp.dim(SlotKey{0, kn.Msp.lattice().zero()}) != 1)
        throw StructureError("left_unitor: left factor is not the unit complex");
    return map_from_basis_images(kn.out, kn.Nsp, 0, kn.out.lattice().zero(),
                                 [&](const BasisRef& b) {
                                     const auto& [u, n] = kn.unpair(b);
                                     return Element::basis_vector(kn.Nsp, n);
                                 });
}

/// M (x) k -> M.
inline GradedLinearMap right_unitor(const TensorLayout& mk) {
    if (mk.Nsp.total_dim() != 1 || mk.Nsp.dim(SlotKey{0, mk.Nsp.lattice().zero()}) != 1)
        throw StructureError("right_unitor: right factor is not the unit complex");
    return map_from_basis_images(mk.out, mk.Msp, 0, mk.out.lattice().zero(),
                                 [&](const BasisRef& b) {
                                     const auto& [m, u] = mk.unpair(b);
                                     return Element::basis_vector(mk.Msp, m);
                                 });
}

// ---------------------------------------------------------------------------
// Shift
// ---------------------------------------------------------------------------

struct ShiftResult {
    Complex cx;
    GradedLinearMap to_original; // M[n] -> M, identity on elements, bidegree (n, 0)
};

/// M[n]: degree i slot is M^{i+n}, differential (-1)^n d.
inline ShiftResult shift(const Complex& M, int n) {
    BigradedSpace sp(M.lattice());
    for (const auto& [s, d] : M.space.slots()) sp.set_slot(SlotKey{s.degree - n, s.weight}, d);
    GradedLinearMap iso(sp, M.space, n, M.lattice().zero());
    for (const auto& [s, d] : sp.slots()) iso.set_block(s, Mat::identity(d));
    GradedLinearMap d(sp, sp, 1, M.lattice().zero());
    for (const auto& [s, dim] : sp.slots()) {
        Mat blk = M.d.block(SlotKey{s.degree + n, s.weight});
        if (n % 2 != 0) blk = blk.scaled(-1);
        if (!blk.is_zero()) d.set_block(s, std::move(blk));
    }
    return ShiftResult{make_complex(sp, std::move(d)), std::move(iso)};
}

// ---------------------------------------------------------------------------
// Inner Hom
// ---------------------------------------------------------------------------

/// Basis bookkeeping for Map(M, N): slot (n, mu) is spanned by elementary
/// maps E_{x->y} with y.slot = x.slot + (n, mu), ordered by (x slot, x idx,
/// y idx).
struct HomLayout {
    BigradedSpace Msp, Nsp, out;
    std::map<SlotKey, std::vector<std::pair<BasisRef, BasisRef>>> factors;
    std::map<std::pair<SlotKey, SlotKey>, std::size_t> offsets; // (x slot, y slot) -> offset

    BasisRef elementary(const BasisRef& x, const BasisRef& y) const {
        auto it = offsets.find({x.slot, y.slot});
        if (it == offsets.end()) throw StructureError("HomLayout: no such elementary map");
        SlotKey t{y.slot.degree - x.slot.degree, y.slot.weight - x.slot.weight};
        return BasisRef{t, it->second + x.idx * Nsp.dim(y.slot) + y.idx};
    }

    const std::pair<BasisRef, BasisRef>& unpair(const BasisRef& b) const {
        return factors.at(b.slot).at(b.idx);
    }

    /// Reads a hom element as an actual graded map of the slot's bidegree.
    GradedLinearMap as_map(const SlotKey& bidegree, const Element& e) const {
        GradedLinearMap f(Msp, Nsp, bidegree.degree, bidegree.weight);
        for (const auto& [k, v] : e.comps) {
            if (k != bidegree) throw StructureError("HomLayout: element not concentrated in slot");
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (v[i] == 0) continue;
                const auto& [x, y] = factors.at(k).at(i);
                f.set_entry(x, y, f.block(x.slot)(y.idx, x.idx) + v[i]);
            }
        }
        return f;
    }

    Element as_element(const GradedLinearMap& f) const {
        Element e;
        for (const auto& [s, blk] : f.blocks()) {
            SlotKey t = f.image_slot(s);
            for (std::size_t i = 0; i < blk.rows(); ++i)
                for (std::size_t j = 0; j < blk.cols(); ++j)
                    if (blk(i, j) != 0)
                        e.accumulate(Element::basis_vector(
                                         out, elementary(BasisRef{s, j}, BasisRef{t, i})),
                                     blk(i, j));
        }
        return e;
    }
};

inline HomLayout hom_layout(const BigradedSpace& M, const BigradedSpace& N) {
    if (M.lattice() != N.lattice()) throw StructureError("inner_hom: lattice mismatch");
    HomLayout L;
    L.Msp = M;
    L.Nsp = N;
    L.out = BigradedSpace(M.lattice());
    for (const auto& [sx, dx] : M.slots())
        for (const auto& [sy, dy] : N.slots()) {
            SlotKey t{sy.degree - sx.degree, sy.weight - sx.weight};
            L.offsets[{sx, sy}] = L.out.dim(t);
            auto& fac = L.factors[t];
            for (std::size_t i = 0; i < dx; ++i)
                for (std::size_t j = 0; j < dy; ++j)
                    fac.push_back({BasisRef{sx, i}, BasisRef{sy, j}});
            L.out.add_to_slot(t, dx * dy);
        }
    return L;
}

struct HomComplex {
    HomLayout layout;
    Complex cx;
};

/// Map(M, N) with d f = d_N . f - (-1)^{|f|} f . d_M.
inline HomComplex inner_hom(const Complex& M, const Complex& N) {
    HomLayout L = hom_layout(M.space, N.space);
    GradedLinearMap d = map_from_basis_images(
        L.out, L.out, 1, L.out.lattice().zero(), [&](const BasisRef& b) {
            GradedLinearMap f = L.as_map(b.slot, Element::basis_vector(L.out, b));
            GradedLinearMap df = compose(N.d, f) - compose(f, M.d).scaled(
                                     b.slot.degree % 2 == 0 ? Rational(1) : Rational(-1));
            return L.as_element(df);
        });
    return HomComplex{L, make_complex(L.out, std::move(d))};
}

// ---------------------------------------------------------------------------
// Closed maps and the tensor-hom adjunction
// ---------------------------------------------------------------------------

/// Basis of the space of graded maps f: M -> N of bidegree (deg, wt) with
/// d_N . f = (-1)^deg f . d_M (closed elements of the inner Hom).
inline std::vector<GradedLinearMap> closed_hom_space(const Complex& M, const Complex& N, int deg,
                                                     const Weight& wt) {
    // unknowns: one per admissible elementary map
    std::vector<std::pair<BasisRef, BasisRef>> unknowns;
    for (const auto& [s, dm] : M.space.slots()) {
        SlotKey t = s.shifted(deg, wt);
        std::size_t dn = N.space.dim(t);
        for (std::size_t i = 0; i < dm; ++i)
            for (std::size_t j = 0; j < dn; ++j)
                unknowns.push_back({BasisRef{s, i}, BasisRef{t, j}});
    }
    std::map<std::pair<BasisRef, BasisRef>, std::size_t> index;
    for (std::size_t u = 0; u < unknowns.size(); ++u) index[unknowns[u]] = u;

    // constraints: for every m basis and every target basis of slot m+ (deg+1, wt)
    std::vector<std::vector<Rational>> rows;
    Rational sign = (deg % 2 == 0) ? 1 : -1;
    for (const auto& m : M.space.basis()) {
        SlotKey ct = m.slot.shifted(deg + 1, wt);
        std::size_t cdim = N.space.dim(ct);
        if (cdim == 0 && M.space.dim(m.slot.shifted(1, M.lattice().zero())) == 0) continue;
        std::vector<std::vector<Rational>> local(cdim, std::vector<Rational>(unknowns.size()));
        // d_N . f  contribution: f(m) = sum u e_{m -> y}; then d_N y
        SlotKey ft = m.slot.shifted(deg, wt);
        Mat dn = N.d.block(ft);
        for (std::size_t y = 0; y < N.space.dim(ft); ++y) {
            auto it = index.find({m, BasisRef{ft, y}});
            if (it == index.end()) continue;
            for (std::size_t r = 0; r < dn.rows(); ++r)
                if (dn(r, y) != 0) local[r][it->second] += dn(r, y);
        }
        // -(-1)^deg f . d_M contribution
        Mat dm = M.d.block(m.slot);
        SlotKey ms = m.slot.shifted(1, M.lattice().zero());
        for (std::size_t x = 0; x < dm.rows(); ++x) {
            if (dm(x, m.idx) == 0) continue;
            for (std::size_t y = 0; y < cdim; ++y) {
                auto it = index.find({BasisRef{ms, x}, BasisRef{ct, y}});
                if (it == index.end()) continue;
                local[y][it->second] -= sign * dm(x, m.idx);
            }
        }
        for (auto& r : local) rows.push_back(std::move(r));
    }
    Mat sys(rows.size(), unknowns.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < unknowns.size(); ++j) sys(i, j) = rows[i][j];
    Mat null = kernel_basis(std::move(sys));
    std::vector<GradedLinearMap> basis;
    for (std::size_t c = 0; c < null.cols(); ++c) {
        GradedLinearMap f(M.space, N.space, deg, wt);
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            if (null(u, c) != 0) f.set_entry(unknowns[u].first, unknowns[u].second, null(u, c));
        basis.push_back(std::move(f));
    }
    return basis;
}

/// Chain maps M -> N (closed, bidegree (0, 0)).
inline std::vector<GradedLinearMap> chain_map_space(const Complex& M, const Complex& N) {
    return closed_hom_space(M, N, 0, M.lattice().zero());
}

inline bool is_chain_map(const Complex& M, const Complex& N, const GradedLinearMap& f) {
    if (f.source() != M.space || f.target() != N.space) return false;
    Rational sign = (f.degree_shift() % 2 == 0) ? 1 : -1;
    return (compose(N.d, f) - compose(f, M.d).scaled(sign)).is_zero();
}

/// alpha(phi)(m)(n) = phi(m (x) n) for a closed (0,0) map phi: M (x) N -> L.
inline GradedLinearMap tensor_hom_adjoint(const TensorComplex& MN, const Complex& L,
                                          const HomLayout& NL, const GradedLinearMap& phi) {
    if (phi.source() != MN.cx.space || phi.target() != L.space)
        throw StructureError("tensor_hom_adjoint: phi endpoints mismatch");
    if (phi.degree_shift() != 0 || !phi.weight_shift().is_zero())
        throw StructureError("tensor_hom_adjoint: phi must have bidegree (0,0)");
    if (!(compose(L.d, phi) - compose(phi, MN.cx.d)).is_zero())
        throw StructureError("tensor_hom_adjoint: phi is not closed");
    return map_from_basis_images(
        MN.layout.Msp, NL.out, 0, MN.cx.lattice().zero(), [&](const BasisRef& m) {
            GradedLinearMap fm(NL.Msp, NL.Nsp, m.slot.degree, m.slot.weight);
            for (const auto& n : MN.layout.Nsp.basis()) {
                Element img = phi.apply(Element::basis_vector(
                    MN.cx.space, MN.layout.pair_basis(m, n)));
                for (const auto& [k, v] : img.comps)
                    for (std::size_t i = 0; i < v.size(); ++i)
                        if (v[i] != 0) fm.set_entry(n, BasisRef{k, i}, v[i]);
            }
            return NL.as_element(fm);
        });
}

/// Inverse of tensor_hom_adjoint: phi(m (x) n) = g(m)(n).
inline GradedLinearMap tensor_hom_adjoint_inverse(const TensorComplex& MN, const Complex& L,
                                                  const HomLayout& NL,
                                                  const GradedLinearMap& g) {
    if (g.source() != MN.layout.Msp || g.target() != NL.out)
        throw StructureError("tensor_hom_adjoint_inverse: g endpoints mismatch");
    return map_from_basis_images(
        MN.cx.space, L.space, 0, MN.cx.lattice().zero(), [&](const BasisRef& b) {
            const auto& [m, n] = MN.layout.unpair(b);
            Element gm = g.apply_basis(m);
            Element out;
            for (const auto& [k, v] : gm.comps) {
                GradedLinearMap fm = NL.as_map(k, [&] {
                    Element e;
                    e.comps[k] = v;
                    return e;
                }());
                out.accumulate(fm.apply_basis(n));
            }
            return out;
        });
}

/// Slotwise cohomology dimensions of a complex.
inline std::map<SlotKey, std::size_t> cohomology_dims(const Complex& C) {
    std::map<SlotKey, std::size_t> h;
    for (const auto& [s, dim] : C.space.slots()) {
        std::size_t ker = dim - rank(C.d.block(s));
        SlotKey prev{s.degree - 1, s.weight};
        std::size_t im = C.space.dim(prev) ? rank(C.d.block(prev)) : 0;
        if (ker > im) h[s] = ker - im;
    }
    return h;
}

} // namespace hcdg
