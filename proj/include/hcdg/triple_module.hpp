#pragma once

#include "hcdg/module.hpp"

namespace hcdg {

/// Weak (A, K, D)-module: left A-action, right D-action, commuting, both
/// equivariant. Over a Triple the non-weak condition compares the psi/rho
/// actions with the differentiated torus action.
struct TripleModuleData {
    WeakTriple triple;
    Complex carrier;
    detail::BilinearTable left;  // (A basis, m basis) -> element
    detail::BilinearTable right; // (m basis, D basis) -> element

    PartialElement act_left(const Element& a, const Element& m) const {
        return left.combine(a, m);
    }
    PartialElement act_right(const Element& m, const Element& d) const {
        return right.combine(m, d);
    }

    WeakModuleData left_module() const { return WeakModuleData{triple.left, carrier, left}; }
};

inline ValidationReport validate_triple_module(const TripleModuleData& M) {
    ValidationReport rep = validate_weak_module(M.left_module());
    const DgAlgebraData& D = M.triple.right.algebra;
    const BigradedSpace& dsp = D.space();
    const BigradedSpace& msp = M.carrier.space;

    // right bidegree additivity
    for (const auto& [key, val] : M.right.entries()) {
        if (!val) continue;
        rep.checks++;
        SlotKey expect{key.first.slot.degree + key.second.slot.degree,
                       key.first.slot.weight + key.second.slot.weight};
        for (const auto& [k, v] : val->comps)
            if (k != expect)
                rep.fail("right-action-bidegree",
                         key.first.str() + " . " + key.second.str() + " hits " + k.str());
    }

    for (const auto& m : msp.basis()) {
        rep.checks++;
        Element em = Element::basis_vector(msp, m);
        PartialElement mu = M.act_right(em, D.unit());
        if (!mu)
            rep.fail("right-unit-partial", m.str());
        else if (*mu != em)
            rep.fail("right-unit-action", m.str());
    }

    // (m d) d' = m (d d')
    for (const auto& m : msp.basis())
        for (const auto& d1 : dsp.basis())
            for (const auto& d2 : dsp.basis()) {
                rep.checks++;
                PartialElement md = M.right.get(m, d1);
                PartialElement dd = D.mult_basis(d1, d2);
                if (!md || !dd) {
                    rep.skipped++;
                    continue;
                }
                PartialElement lhs = M.act_right(*md, Element::basis_vector(dsp, d2));
                PartialElement rhs = M.act_right(Element::basis_vector(msp, m), *dd);
                if (!lhs || !rhs) {
                    rep.skipped++;
                    continue;
                }
                if (*lhs != *rhs)
                    rep.fail("right-associativity",
                             "(" + m.str() + "," + d1.str() + "," + d2.str() + ")");
            }

    // Leibniz: d(m d) = (dm) d + (-1)^{|m|} m (dd)
    for (const auto& m : msp.basis())
        for (const auto& d1 : dsp.basis()) {
            rep.checks++;
            PartialElement md = M.right.get(m, d1);
            if (!md) {
                rep.skipped++;
                continue;
            }
            PartialElement t1 =
                M.act_right(M.carrier.d.apply_basis(m), Element::basis_vector(dsp, d1));
            PartialElement t2 =
                M.act_right(Element::basis_vector(msp, m), D.d().apply_basis(d1));
            if (!t1 || !t2) {
                rep.skipped++;
                continue;
            }
            Element rhs = *t1 + (m.slot.degree % 2 == 0 ? *t2 : t2->scaled(-1));
            if (M.carrier.d.apply(*md) != rhs)
                rep.fail("right-leibniz", "(" + m.str() + "," + d1.str() + ")");
        }

    // bimodule law: (a m) d = a (m d)
    const BigradedSpace& asp = M.triple.left.algebra.space();
    for (const auto& a : asp.basis())
        for (const auto& m : msp.basis())
            for (const auto& d1 : dsp.basis()) {
                rep.checks++;
                PartialElement am = M.left.get(a, m);
                PartialElement md = M.right.get(m, d1);
                if (!am || !md) {
                    rep.skipped++;
                    continue;
                }
                PartialElement lhs = M.act_right(*am, Element::basis_vector(dsp, d1));
                PartialElement rhs = M.act_left(Element::basis_vector(asp, a), *md);
                if (!lhs || !rhs) {
                    rep.skipped++;
                    continue;
                }
                if (*lhs != *rhs)
                    rep.fail("bimodule", "(" + a.str() + "," + m.str() + "," + d1.str() + ")");
            }

    return rep;
}

/// Non-weak condition pi(psi(xi)) m - m omega(rho(xi)) = dnu(xi) m.
inline ModuleWitness is_triple_module(const Triple& T, const TripleModuleData& M) {
    ModuleWitness w;
    w.verified = true;
    const BigradedSpace& msp = M.carrier.space;
    for (std::size_t i = 0; i < T.left.group().rank(); ++i) {
        for (const auto& m : msp.basis()) {
            Element em = Element::basis_vector(msp, m);
            PartialElement lhs = M.act_left(T.left.psi.at(i), em);
            PartialElement rhs = M.act_right(em, T.right.psi.at(i));
            if (!lhs || !rhs) {
                w.skipped++;
                continue;
            }
            Rational scale = Rational(m.slot.weight.v.at(i));
            if (*lhs - *rhs != em.scaled(scale)) {
                w.verified = false;
                w.counterexample = "(xi_" + std::to_string(i) + ", " + m.str() + ")";
                return w;
            }
        }
    }
    return w;
}

/// Module half of the triple <-> tensor equivalence:
/// (a (x) d) m = (-1)^{|d||m|} a (m d) on the same carrier.
inline WeakModuleData triple_module_to_tensor(const TripleModuleData& M,
                                              const TensorWeakPair& TP) {
    WeakModuleData out{TP.pair, M.carrier, {}};
    for (const auto& t : TP.pair.algebra.space().basis()) {
        const auto& [a, d] = TP.layout.unpair(t);
        for (const auto& m : M.carrier.space.basis()) {
            PartialElement md = M.right.get(m, d);
            if (!md) {
                out.action.set(t, m, std::nullopt);
                continue;
            }
            PartialElement amd =
                M.act_left(Element::basis_vector(TP.layout.Msp, a), *md);
            if (!amd) {
                out.action.set(t, m, std::nullopt);
                continue;
            }
            bool neg = (d.slot.degree % 2 != 0) && (m.slot.degree % 2 != 0);
            if (!amd->is_zero()) out.action.set(t, m, neg ? amd->scaled(-1) : *amd);
        }
    }
    return out;
}

/// Inverse direction: pi(a) m = (a (x) 1) m, m omega(d) = (-1)^{|d||m|} (1 (x) d) m.
inline TripleModuleData tensor_module_to_triple(const WeakModuleData& M,
                                                const WeakTriple& T,
                                                const TensorWeakPair& TP) {
    TripleModuleData out{T, M.carrier, {}, {}};
    const DgAlgebraData& A = T.left.algebra;
    const DgAlgebraData& D = T.right.algebra;
    for (const auto& a : A.space().basis())
        for (const auto& m : M.carrier.space.basis()) {
            Element a1 = TP.layout.tensor_elem(Element::basis_vector(A.space(), a),
                                               D.unit());
            PartialElement img = M.act(a1, Element::basis_vector(M.carrier.space, m));
            if (!img)
                out.left.set(a, m, std::nullopt);
            else if (!img->is_zero())
                out.left.set(a, m, *img);
        }
    for (const auto& m : M.carrier.space.basis())
        for (const auto& d : D.space().basis()) {
            Element d1 = TP.layout.tensor_elem(A.unit(), Element::basis_vector(D.space(), d));
            PartialElement img = M.act(d1, Element::basis_vector(M.carrier.space, m));
            if (!img) {
                out.right.set(m, d, std::nullopt);
                continue;
            }
            bool neg = (d.slot.degree % 2 != 0) && (m.slot.degree % 2 != 0);
            if (!img->is_zero()) out.right.set(m, d, neg ? img->scaled(-1) : *img);
        }
    return out;
}

/// Basis of bimodule homomorphisms: closed (0,0) maps commuting with both
/// actions; constraints touching out-of-carrier products are skipped.
inline std::vector<GradedLinearMap> hom_triple_modules(const TripleModuleData& M,
                                                       const TripleModuleData& N) {
    const BigradedSpace& msp = M.carrier.space;
    const BigradedSpace& nsp = N.carrier.space;
    std::vector<std::pair<BasisRef, BasisRef>> unknowns;
    for (const auto& [s, dm] : msp.slots()) {
        std::size_t dn = nsp.dim(s);
        for (std::size_t i = 0; i < dm; ++i)
            for (std::size_t j = 0; j < dn; ++j)
                unknowns.push_back({BasisRef{s, i}, BasisRef{s, j}});
    }
    std::map<std::pair<BasisRef, BasisRef>, std::size_t> index;
    for (std::size_t u = 0; u < unknowns.size(); ++u) index[unknowns[u]] = u;
    std::vector<std::vector<Rational>> rows;

    auto chain_rows = [&]() {
        for (const auto& m : msp.basis()) {
            SlotKey ct = m.slot.shifted(1, msp.lattice().zero());
            std::size_t cdim = nsp.dim(ct);
            std::vector<std::vector<Rational>> local(cdim,
                                                     std::vector<Rational>(unknowns.size()));
            Mat dn = N.carrier.d.block(m.slot);
            for (std::size_t y = 0; y < nsp.dim(m.slot); ++y) {
                auto it = index.find({m, BasisRef{m.slot, y}});
                if (it == index.end()) continue;
                for (std::size_t r = 0; r < dn.rows(); ++r)
                    if (dn(r, y) != 0) local[r][it->second] += dn(r, y);
            }
            Mat dm = M.carrier.d.block(m.slot);
            for (std::size_t x = 0; x < dm.rows(); ++x) {
                if (dm(x, m.idx) == 0) continue;
                for (std::size_t y = 0; y < cdim; ++y) {
                    auto it = index.find({BasisRef{ct, x}, BasisRef{ct, y}});
                    if (it != index.end()) local[y][it->second] -= dm(x, m.idx);
                }
            }
            for (auto& r : local) rows.push_back(std::move(r));
        }
    };
    chain_rows();

    // generic equivariance row builder: for basis m, a target slot ct, the
    // element "x = action-on-m" (in M) and the per-basis action in N
    auto equivariance_rows = [&](const BasisRef& m, const SlotKey& ct, const Element& xm,
                                 const std::vector<Element>& act_on_candidates) {
        std::size_t cdim = nsp.dim(ct);
        std::vector<std::vector<Rational>> local(cdim, std::vector<Rational>(unknowns.size()));
        for (std::size_t y = 0; y < act_on_candidates.size(); ++y) {
            auto it = index.find({m, BasisRef{m.slot, y}});
            if (it == index.end()) continue;
            auto comp = act_on_candidates[y].comps.find(ct);
            if (comp == act_on_candidates[y].comps.end()) continue;
            for (std::size_t r = 0; r < cdim; ++r)
                if (comp->second[r] != 0) local[r][it->second] -= comp->second[r];
        }
        for (const auto& [k, v] : xm.comps)
            for (std::size_t x = 0; x < v.size(); ++x) {
                if (v[x] == 0) continue;
                for (std::size_t y = 0; y < cdim; ++y) {
                    auto it = index.find({BasisRef{k, x}, BasisRef{ct, y}});
                    if (it != index.end()) local[y][it->second] += v[x];
                }
            }
        for (auto& r : local) rows.push_back(std::move(r));
    };

    const BigradedSpace& asp = M.triple.left.algebra.space();
    for (const auto& a : asp.basis())
        for (const auto& m : msp.basis()) {
            PartialElement am = M.left.get(a, m);
            if (!am) continue;
            SlotKey ct = m.slot.shifted(a.slot.degree, a.slot.weight);
            bool ok = true;
            std::vector<Element> cand(nsp.dim(m.slot));
            for (std::size_t y = 0; y < cand.size(); ++y) {
                PartialElement v = N.left.get(a, BasisRef{m.slot, y});
                if (!v) {
                    ok = false;
                    break;
                }
                cand[y] = std::move(*v);
            }
            if (ok) equivariance_rows(m, ct, *am, cand);
        }

    const BigradedSpace& dsp = M.triple.right.algebra.space();
    for (const auto& d : dsp.basis())
        for (const auto& m : msp.basis()) {
            PartialElement md = M.right.get(m, d);
            if (!md) continue;
            SlotKey ct = m.slot.shifted(d.slot.degree, d.slot.weight);
            bool ok = true;
            std::vector<Element> cand(nsp.dim(m.slot));
            for (std::size_t y = 0; y < cand.size(); ++y) {
                PartialElement v = N.right.get(BasisRef{m.slot, y}, d);
                if (!v) {
                    ok = false;
                    break;
                }
                cand[y] = std::move(*v);
            }
            if (ok) equivariance_rows(m, ct, *md, cand);
        }

    Mat sys(rows.size(), unknowns.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < unknowns.size(); ++j) sys(i, j) = rows[i][j];
    Mat null = kernel_basis(std::move(sys));
    std::vector<GradedLinearMap> basis;
    for (std::size_t c = 0; c < null.cols(); ++c) {
        GradedLinearMap f(msp, nsp, 0, msp.lattice().zero());
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            if (null(u, c) != 0) f.set_entry(unknowns[u].first, unknowns[u].second, null(u, c));
        basis.push_back(std::move(f));
    }
    return basis;
}

/// (A, K, A)-bimodule structure of A on itself by both multiplications.
inline TripleModuleData regular_triple_module(const WeakTriple& T) {
    if (!(T.left.algebra.space() == T.right.algebra.space()))
        throw StructureError("regular_triple_module: the two algebras must share a carrier");
    TripleModuleData M{T, T.left.algebra.carrier(), {}, {}};
    for (const auto& [key, val] : T.left.algebra.product_entries()) {
        M.left.set(key.first, key.second, val);
        M.right.set(key.first, key.second, val);
    }
    return M;
}

} // namespace hcdg
