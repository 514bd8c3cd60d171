#pragma once

#include "hcdg/functors.hpp"
#include "hcdg/hecke.hpp"

namespace hcdg {

/// Dual Zuckerman functor on weak modules along (id_A, f_k): (A,K) -> (A,L):
/// the carrier is R(L) (x)_{R(K)} M computed idempotent by idempotent; the
/// L-weight-lambda slot is the K-weight-f*(lambda) slot of M, and a of
/// L-weight beta maps the lambda slot to the (lambda+beta) slot through the
/// action on M.
struct DualZuckermanResult {
    WeakModuleData module; // over (A, L)
    Window window;
    // slot (n, lambda) of the output indexes the basis of M at (n, f*lambda)
};

inline DualZuckermanResult dual_zuckerman_weak(const RestrictedWeakPair& AK,
                                               const WeakPair& AL, const WeakModuleData& M,
                                               const Window& window) {
    const GroupHom& fk = AK.to_target.group_map;
    BigradedSpace sp(AL.group.lattice);
    for (int deg = window.deg_lo; deg <= window.deg_hi; ++deg)
        for (const auto& lam : window.weights)
            sp.set_slot(SlotKey{deg, lam},
                        M.carrier.space.dim(SlotKey{deg, fk.pull_char(lam)}));
    GradedLinearMap d(sp, sp, 1, AL.group.lattice.zero());
    for (const auto& [s, dim] : sp.slots()) {
        SlotKey t{s.degree + 1, s.weight};
        if (sp.dim(t) == 0) continue;
        Mat blk = M.carrier.d.block(SlotKey{s.degree, fk.pull_char(s.weight)});
        if (!blk.is_zero()) d.set_block(s, std::move(blk));
    }
    WeakModuleData out{AL, Complex{sp, std::move(d)}, {}};
    for (const auto& a : AL.algebra.space().basis()) {
        BasisRef aK = AK.regrade.push_basis(a);
        for (const auto& [s, dim] : sp.slots()) {
            SlotKey t{s.degree + a.slot.degree, s.weight + a.slot.weight};
            SlotKey ms{s.degree, fk.pull_char(s.weight)};
            for (std::size_t i = 0; i < dim; ++i) {
                PartialElement am = M.act_basis(aK, BasisRef{ms, i});
                if (!am) {
                    out.action.set(a, BasisRef{s, i}, std::nullopt);
                    continue;
                }
                if (am->is_zero()) continue;
                if (sp.dim(t) == 0) {
                    // window cut
                    out.action.set(a, BasisRef{s, i}, std::nullopt);
                    continue;
                }
                Element val;
                SlotKey mt{t.degree, fk.pull_char(t.weight)};
                for (const auto& [k, v] : am->comps) {
                    if (k != mt)
                        throw StructureError("dual_zuckerman_weak: action not weight additive");
                    val.comps[t] = v;
                }
                val.trim();
                if (!val.is_zero()) out.action.set(a, BasisRef{s, i}, std::move(val));
            }
        }
    }
    return DualZuckermanResult{std::move(out), window};
}

/// P_w on morphisms: the block at (n, lambda) is h's block at (n, f*lambda).
inline GradedLinearMap dual_zuckerman_map(const RestrictedWeakPair& AK,
                                          const DualZuckermanResult& PX,
                                          const DualZuckermanResult& PY,
                                          const GradedLinearMap& h) {
    const GroupHom& fk = AK.to_target.group_map;
    GradedLinearMap out(PX.module.carrier.space, PY.module.carrier.space, 0,
                        PX.module.pair.lattice().zero());
    for (const auto& [s, dim] : PX.module.carrier.space.slots()) {
        Mat blk = h.block(SlotKey{s.degree, fk.pull_char(s.weight)});
        if (blk.rows() != PY.module.carrier.space.dim(s)) continue;
        if (!blk.is_zero()) out.set_block(s, std::move(blk));
    }
    return out;
}

/// The right adjoint F^vee on weak modules: Map_{R(L)}(R(L), M)_K realized
/// slotwise; the K-weight-kappa part collects the L-weight components in the
/// fiber of f* over kappa, and a acts by (a phi)(chi_lambda) =
/// a . phi(chi_{lambda - beta}).
struct FVeeResult {
    WeakModuleData module; // over (A, K)
    Regrading regrade;     // placement of M's L-slots in the K-graded carrier
};

inline FVeeResult f_vee_weak(const RestrictedWeakPair& AK, const WeakPair& AL,
                             const WeakModuleData& M) {
    const GroupHom& fk = AK.to_target.group_map;
    Regrading rg = regrade(
        M.carrier.space, [&](const SlotKey& s) { return fk.pull_char(s.weight); },
        fk.source.lattice);
    GradedLinearMap d = transport(M.carrier.d, rg, rg, fk.source.lattice.zero());
    WeakModuleData out{AK.pair, make_complex(rg.out, std::move(d)), {}};
    for (const auto& aK : AK.pair.algebra.space().basis()) {
        // the L-side basis vector behind aK
        BasisRef aL = [&] {
            for (const auto& a : AL.algebra.space().basis())
                if (AK.regrade.push_basis(a) == aK) return a;
            throw StructureError("f_vee_weak: basis mismatch");
        }();
        for (const auto& m : M.carrier.space.basis()) {
            // phi supported at lambda = wt(m); (a phi) at lambda + beta picks
            // a . phi(chi_lambda) = a . m
            PartialElement am = M.act_basis(aL, m);
            BasisRef nm = rg.push_basis(m);
            if (!am) {
                out.action.set(aK, nm, std::nullopt);
                continue;
            }
            if (!am->is_zero()) out.action.set(aK, nm, rg.push(*am));
        }
    }
    return FVeeResult{std::move(out), std::move(rg)};
}

/// F^vee on morphisms.
inline GradedLinearMap f_vee_map(const FVeeResult& src, const FVeeResult& dst,
                                 const GradedLinearMap& h) {
    return transport(h, src.regrade, dst.regrade, src.module.pair.lattice().zero());
}

/// Counit P_w(F^vee M) -> M: project to the diagonal lambda component.
inline GradedLinearMap dual_zuckerman_counit(const RestrictedWeakPair& AK,
                                             const FVeeResult& FvM,
                                             const DualZuckermanResult& PFvM,
                                             const WeakModuleData& M) {
    const GroupHom& fk = AK.to_target.group_map;
    return map_from_basis_images(
        PFvM.module.carrier.space, M.carrier.space, 0, M.pair.lattice().zero(),
        [&](const BasisRef& b) {
            // b indexes (F^vee M) basis at (deg, f*lambda); that in turn is a
            // pushed basis vector of M at some L-slot in the fiber
            SlotKey kslot{b.slot.degree, fk.pull_char(b.slot.weight)};
            for (const auto& [ms, pl] : FvM.regrade.placement) {
                if (pl.first != kslot) continue;
                if (b.idx < pl.second ||
                    b.idx >= pl.second + M.carrier.space.dim(ms))
                    continue;
                // diagonal: only the component whose original L-weight is
                // exactly b's L-weight survives
                if (ms.weight != b.slot.weight) return Element{};
                return Element::basis_vector(M.carrier.space,
                                             BasisRef{ms, b.idx - pl.second});
            }
            return Element{};
        });
}

/// Unit N -> F^vee(P_w N): the diagonal over the window fiber.
inline GradedLinearMap dual_zuckerman_unit(const RestrictedWeakPair& AK,
                                           const WeakModuleData& N,
                                           const DualZuckermanResult& PN,
                                           const FVeeResult& FvPN) {
    const GroupHom& fk = AK.to_target.group_map;
    return map_from_basis_images(
        N.carrier.space, FvPN.module.carrier.space, 0, N.pair.lattice().zero(),
        [&](const BasisRef& n) {
            Element out;
            for (const auto& lam : PN.window.weights) {
                if (fk.pull_char(lam) != n.slot.weight) continue;
                SlotKey pslot{n.slot.degree, lam};
                if (PN.module.carrier.space.dim(pslot) == 0) continue;
                out.accumulate(FvPN.regrade.push(
                    Element::basis_vector(PN.module.carrier.space, BasisRef{pslot, n.idx})));
            }
            return out;
        });
}

// ---------------------------------------------------------------------------
// Non-weak variants
// ---------------------------------------------------------------------------

struct NonweakFVee {
    FVeeResult weak;
    ModuleWitness witness; // restriction is already non-weak (re-verified)
};

inline NonweakFVee f_vee_nonweak(const RestrictedPair& AK, const Pair& AL,
                                 const WeakModuleData& M) {
    FVeeResult r = f_vee_weak(RestrictedWeakPair{AK.pair.weak, AK.regrade, AK.to_target},
                              AL.weak, M);
    ModuleWitness w = is_module(AK.pair, r.module);
    return NonweakFVee{std::move(r), std::move(w)};
}

struct NonweakDualZuckerman {
    DualZuckermanResult weak;
    QuotientModuleResult coinv; // (-)_k of the weak output
};

inline NonweakDualZuckerman dual_zuckerman_nonweak(const RestrictedPair& AK, const Pair& AL,
                                                   const WeakModuleData& M,
                                                   const Window& window) {
    DualZuckermanResult r = dual_zuckerman_weak(
        RestrictedWeakPair{AK.pair.weak, AK.regrade, AK.to_target}, AL.weak, M, window);
    QuotientModuleResult q = coinvariants(AL, r.module);
    return NonweakDualZuckerman{std::move(r), std::move(q)};
}

// ---------------------------------------------------------------------------
// General maps: decompose through (B, K)
// ---------------------------------------------------------------------------

/// P along an arbitrary weak map f: (A,K) -> (B,L): induce along the algebra
/// part into (B, K), then the dual Zuckerman functor along the group part.
struct GeneralP {
    RestrictedWeakPair BK; // (B, K) with its map to (B, L)
    InduceResult stage1;   // (A,K) -> (B,K)
    DualZuckermanResult stage2;
};

inline GeneralP general_p_weak(const PairMap& f, const WeakPair& A, const WeakPair& BL,
                               const WeakModuleData& M, const Window& window) {
    RestrictedWeakPair BK = restrict_weak_pair(f.group_map, BL);
    PairMap alg_part{GroupHom::identity(A.group), {}};
    for (const auto& [b, img] : f.alg_images) alg_part.alg_images[b] = BK.regrade.push(img);
    InduceResult s1 = induce_weak(alg_part, A, BK.pair, M);
    DualZuckermanResult s2 = dual_zuckerman_weak(BK, BL, s1.module, window);
    return GeneralP{std::move(BK), std::move(s1), std::move(s2)};
}

/// F^vee along an arbitrary weak map: the group-part F^vee into (B, K),
/// then forgetting along the algebra part.
struct GeneralFVee {
    RestrictedWeakPair BK;
    FVeeResult stage1; // (B,L)-mod -> (B,K)-mod
    ForgetResult stage2;
};

inline GeneralFVee general_f_vee_weak(const PairMap& f, const WeakPair& A, const WeakPair& BL,
                                      const WeakModuleData& M) {
    RestrictedWeakPair BK = restrict_weak_pair(f.group_map, BL);
    FVeeResult s1 = f_vee_weak(BK, BL, M);
    PairMap alg_part{GroupHom::identity(A.group), {}};
    for (const auto& [b, img] : f.alg_images) alg_part.alg_images[b] = BK.regrade.push(img);
    ForgetResult s2 = forget_module(alg_part, A, s1.module);
    return GeneralFVee{std::move(BK), std::move(s1), std::move(s2)};
}

// ---------------------------------------------------------------------------
// Induction-in-stages
// ---------------------------------------------------------------------------

struct InductionStagesReport {
    bool fvee_strictly_equal = false; // (1)/(3): composed regrades agree on data
    bool p_weak_iso = false;          // (2): comparison map is an isomorphism
    bool p_nonweak_iso = true;        // (4)
    std::string detail;
};

/// Chain (A,K) -f-> (B,L) -g-> (C,Mgrp) of weak maps. Builds F^vee . F^vee
/// against F^vee of the composite (data equality through the composed
/// placements) and P . P against P of the composite through the base-change
/// comparison c (x) (b (x) m) -> (c g(b)) (x) m.
inline InductionStagesReport check_induction_in_stages(
    const PairMap& f, const PairMap& g, const WeakPair& A, const WeakPair& BL,
    const WeakPair& CM, const WeakModuleData& M, const Window& window,
    const Pair* PA = nullptr, const Pair* PB = nullptr, const Pair* PC = nullptr) {
    InductionStagesReport rep;
    PairMap gf = compose_pair_maps(g, f);

    // --- F^vee stages on a probe module over (C, Mgrp)
    {
        FreeModule probe = free_module(CM, unit_complex(CM.group.lattice));
        GeneralFVee one = general_f_vee_weak(gf, A, CM, probe.module);
        GeneralFVee inner = general_f_vee_weak(g, BL, CM, probe.module);
        GeneralFVee outer = general_f_vee_weak(f, A, BL, inner.stage2.module);
        rep.fvee_strictly_equal =
            one.stage2.module.carrier.space == outer.stage2.module.carrier.space &&
            one.stage2.module.carrier.d == outer.stage2.module.carrier.d &&
            one.stage2.module.action.entries() == outer.stage2.module.action.entries();
    }

    // --- P stages on M
    Window midwin = intermediate_window(g, BL, CM, window);
    GeneralP Pf = general_p_weak(f, A, BL, M, midwin);
    GeneralP Pg_of = general_p_weak(g, BL, CM, Pf.stage2.module, window);
    GeneralP Pgf = general_p_weak(gf, A, CM, M, window);
    if (Pf.stage1.skipped_relations || Pg_of.stage1.skipped_relations ||
        Pgf.stage1.skipped_relations) {
        rep.detail = "truncated relations; instance not exact";
        return rep;
    }

    // comparison on carriers: both sides' slot (n, sigma) come with explicit
    // presentations; the canonical map sends the class of c (x) (b (x) m)
    // to the class of (c g(b)) (x) m.
    GradedLinearMap theta = [&]() {
        const WeakModuleData& lhs = Pg_of.stage2.module;
        const WeakModuleData& rhs = Pgf.stage2.module;
        return map_from_basis_images(
            lhs.carrier.space, rhs.carrier.space, 0, CM.group.lattice.zero(),
            [&](const BasisRef& x) {
                // unwind: x sits at sigma; its index points into stage1 of
                // Pg_of at K-weight (g f)*... : representative in C (x) PfM
                SlotKey inner_slot{x.slot.degree,
                                   Pg_of.BK.to_target.group_map.pull_char(x.slot.weight)};
                Element rep_elem = Pg_of.stage1.section.apply(
                    Element::basis_vector(Pg_of.stage1.module.carrier.space,
                                          BasisRef{inner_slot, x.idx}));
                // rep_elem lives in C_K (x) PfM; expand pairs
                Element out;
                for (const auto& [k, v] : rep_elem.comps)
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        if (v[i] == 0) continue;
                        const auto& [cK, pm] = Pg_of.stage1.layout.unpair(BasisRef{k, i});
                        // pm indexes PfM at L-slot; unwind to B (x) M
                        SlotKey pm_inner{pm.slot.degree,
                                         Pf.BK.to_target.group_map.pull_char(pm.slot.weight)};
                        Element bm = Pf.stage1.section.apply(Element::basis_vector(
                            Pf.stage1.module.carrier.space, BasisRef{pm_inner, pm.idx}));
                        for (const auto& [k2, v2] : bm.comps)
                            for (std::size_t j = 0; j < v2.size(); ++j) {
                                if (v2[j] == 0) continue;
                                const auto& [bK, m] = Pf.stage1.layout.unpair(BasisRef{k2, j});
                                // target representative: (c g(b)) (x) m in C_K' (x) M
                                // find the C- and B-side originals
                                Element cC = [&] {
                                    for (const auto& c : CM.algebra.space().basis())
                                        if (Pg_of.BK.regrade.push_basis(c) == cK)
                                            return Element::basis_vector(CM.algebra.space(), c);
                                    throw StructureError("stage comparison: C basis");
                                }();
                                Element bB = [&] {
                                    for (const auto& b : BL.algebra.space().basis())
                                        if (Pf.BK.regrade.push_basis(b) == bK)
                                            return Element::basis_vector(BL.algebra.space(), b);
                                    throw StructureError("stage comparison: B basis");
                                }();
                                Element gb = g.apply(bB);
                                PartialElement cgb = CM.algebra.mult(cC, gb);
                                if (!cgb)
                                    throw StructureError("stage comparison: truncated product");
                                // push c g(b) into C_K'' = restrict along (gf)_k
                                Element cgbK = Pgf.BK.regrade.push(*cgb);
                                Element pair_elem = Pgf.stage1.layout.tensor_elem(
                                    cgbK, Element::basis_vector(M.carrier.space, m));
                                out.accumulate(Pgf.stage1.projection.apply(pair_elem),
                                               v[i] * v2[j]);
                            }
                    }
                // out lives in Pgf.stage1 carrier at K-weight; relabel to sigma
                Element relabeled;
                for (const auto& [k, v] : out.comps) {
                    if (k !=
                        SlotKey{x.slot.degree,
                                Pgf.BK.to_target.group_map.pull_char(x.slot.weight)})
                        throw StructureError("stage comparison: weight drift");
                    relabeled.comps[x.slot] = v;
                }
                relabeled.trim();
                return relabeled;
            });
    }();
    rep.p_weak_iso = is_isomorphism(theta);
    if (!rep.p_weak_iso) rep.detail = "P comparison not an isomorphism";

    // --- non-weak level: coinvariants through the descended comparison
    if (PA && PB && PC) {
        QuotientModuleResult c_inner = coinvariants(*PB, Pf.stage2.module);
        GeneralP Pg_of_c = general_p_weak(g, BL, CM, c_inner.module, window);
        if (Pg_of_c.stage1.skipped_relations) {
            rep.detail = "truncated relations in the non-weak stage";
            rep.p_nonweak_iso = false;
            return rep;
        }
        QuotientModuleResult c_lhs = coinvariants(*PC, Pg_of_c.stage2.module);
        QuotientModuleResult c_rhs = coinvariants(*PC, Pgf.stage2.module);
        // P_g applied to the inner projection (stage 1 by base change of the
        // tensor presentation, stage 2 by weight relabel)
        GradedLinearMap ind_p = compose(
            Pg_of_c.stage1.projection,
            compose(tensor_map(Pg_of.stage1.layout, Pg_of_c.stage1.layout,
                               GradedLinearMap::identity(Pg_of.BK.pair.algebra.space()),
                               c_inner.projection),
                    Pg_of.stage1.section));
        GradedLinearMap proj_mid =
            dual_zuckerman_map(Pg_of.BK, Pg_of.stage2, Pg_of_c.stage2, ind_p);
        GradedLinearMap u = compose(c_lhs.projection, proj_mid); // onto the lhs
        GradedLinearMap v = compose(c_rhs.projection, theta);    // onto the rhs
        // the canonical map lhs -> rhs: factor v through u
        bool ok = true;
        GradedLinearMap w(c_lhs.module.carrier.space, c_rhs.module.carrier.space, 0,
                          CM.group.lattice.zero());
        for (const auto& [sl, dim] : c_lhs.module.carrier.space.slots()) {
            Mat usrc = u.block(sl);
            Mat vsrc = v.block(sl);
            Mat wblk(c_rhs.module.carrier.space.dim(sl), dim);
            for (std::size_t i = 0; i < dim; ++i) {
                std::vector<Rational> e(dim);
                e[i] = 1;
                // preimage of the i-th basis vector under the surjection u
                auto x = solve(usrc, e);
                if (!x) {
                    ok = false;
                    break;
                }
                std::vector<Rational> img = vsrc.apply(*x);
                for (std::size_t r = 0; r < img.size(); ++r) wblk(r, i) = img[r];
            }
            if (!ok) break;
            if (!wblk.is_zero()) w.set_block(sl, std::move(wblk));
        }
        // well-definedness: w . u must equal v exactly
        if (ok) ok = compose(w, u) == v;
        rep.p_nonweak_iso = ok && is_isomorphism(w);
        if (!rep.p_nonweak_iso && rep.detail.empty())
            rep.detail = "non-weak P comparison fails";
    }
    return rep;
}

} // namespace hcdg
