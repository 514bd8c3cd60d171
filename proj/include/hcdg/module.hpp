#pragma once

#include "hcdg/pair.hpp"

namespace hcdg {

/// Weak (A, K)-module: an equivariant dg A-module presented by structure
/// constants. The torus action is the weight grading of the carrier, so the
/// K-equivariance of the action is weight additivity.
struct WeakModuleData {
    WeakPair pair;
    Complex carrier;
    detail::BilinearTable action; // (algebra basis, module basis) -> element

    const BigradedSpace& space() const { return carrier.space; }
    const DgAlgebraData& algebra() const { return pair.algebra; }

    PartialElement act(const Element& a, const Element& m) const {
        return action.combine(a, m);
    }
    PartialElement act_basis(const BasisRef& a, const BasisRef& m) const {
        return action.get(a, m);
    }

    /// pi(a) as a graded map, for homogeneous a; nullopt when a touches an
    /// out-of-carrier structure constant on some basis vector.
    std::optional<GradedLinearMap> action_map(const Element& a, int adeg,
                                              const Weight& awt) const {
        GradedLinearMap f(carrier.space, carrier.space, adeg, awt);
        for (const auto& m : carrier.space.basis()) {
            PartialElement img = act(a, Element::basis_vector(carrier.space, m));
            if (!img) return std::nullopt;
            for (const auto& [k, v] : img->comps) {
                if (k != m.slot.shifted(adeg, awt))
                    throw StructureError("action_map: inhomogeneous action at " + m.str());
                for (std::size_t i = 0; i < v.size(); ++i)
                    if (v[i] != 0) f.set_entry(m, BasisRef{k, i}, v[i]);
            }
        }
        return f;
    }
};

/// Unit action, associativity, Leibniz and bidegree additivity; violations
/// reported with the witnessing tuple, truncated checks skipped and counted.
inline ValidationReport validate_weak_module(const WeakModuleData& M) {
    ValidationReport rep;
    const DgAlgebraData& A = M.algebra();
    const BigradedSpace& asp = A.space();
    const BigradedSpace& msp = M.carrier.space;

    rep.checks++;
    if (!(M.carrier.lattice() == M.pair.lattice()))
        rep.fail("module-lattice", "carrier lattice does not match the pair");
    rep.checks++;
    if (!compose(M.carrier.d, M.carrier.d).is_zero()) rep.fail("d-squared", "d.d != 0");

    // bidegree additivity, on stored entries
    for (const auto& [key, val] : M.action.entries()) {
        if (!val) continue;
        rep.checks++;
        SlotKey expect{key.first.slot.degree + key.second.slot.degree,
                       key.first.slot.weight + key.second.slot.weight};
        for (const auto& [k, v] : val->comps)
            if (k != expect)
                rep.fail("action-bidegree",
                         key.first.str() + " . " + key.second.str() + " hits " + k.str());
    }

    for (const auto& m : msp.basis()) {
        rep.checks++;
        Element em = Element::basis_vector(msp, m);
        PartialElement um = M.act(A.unit(), em);
        if (!um)
            rep.fail("unit-action-partial", m.str());
        else if (*um != em)
            rep.fail("unit-action", m.str());
    }

    // associativity pi(ab) m = pi(a) pi(b) m
    for (const auto& a : asp.basis())
        for (const auto& b : asp.basis()) {
            PartialElement ab = A.mult_basis(a, b);
            for (const auto& m : msp.basis()) {
                rep.checks++;
                PartialElement bm = M.act_basis(b, m);
                if (!ab || !bm) {
                    rep.skipped++;
                    continue;
                }
                PartialElement lhs = M.act(*ab, Element::basis_vector(msp, m));
                PartialElement rhs = M.act(Element::basis_vector(asp, a), *bm);
                if (!lhs || !rhs) {
                    rep.skipped++;
                    continue;
                }
                if (*lhs != *rhs)
                    rep.fail("action-associativity",
                             "(" + a.str() + "," + b.str() + "," + m.str() + ")");
            }
        }

    // Leibniz d(am) = (da) m + (-1)^{|a|} a (dm)
    for (const auto& a : asp.basis())
        for (const auto& m : msp.basis()) {
            rep.checks++;
            PartialElement am = M.act_basis(a, m);
            if (!am) {
                rep.skipped++;
                continue;
            }
            PartialElement t1 = M.act(A.d().apply_basis(a), Element::basis_vector(msp, m));
            PartialElement t2 =
                M.act(Element::basis_vector(asp, a), M.carrier.d.apply_basis(m));
            if (!t1 || !t2) {
                rep.skipped++;
                continue;
            }
            Element rhs = *t1 + (a.slot.degree % 2 == 0 ? *t2 : t2->scaled(-1));
            if (M.carrier.d.apply(*am) != rhs)
                rep.fail("action-leibniz", "(" + a.str() + "," + m.str() + ")");
        }

    return rep;
}

/// Result of the non-weak check pi(psi(xi)) = dnu(xi).
struct ModuleWitness {
    bool verified = false;
    std::string counterexample; // empty when verified
    std::size_t skipped = 0;
};

inline ModuleWitness is_module(const Pair& P, const WeakModuleData& M) {
    ModuleWitness w;
    w.verified = true;
    const BigradedSpace& msp = M.carrier.space;
    for (std::size_t i = 0; i < P.group().rank(); ++i) {
        for (const auto& m : msp.basis()) {
            Element em = Element::basis_vector(msp, m);
            PartialElement lhs = M.act(P.psi.at(i), em);
            if (!lhs) {
                w.skipped++;
                continue;
            }
            Rational scale = Rational(m.slot.weight.v.at(i));
            if (*lhs != em.scaled(scale)) {
                w.verified = false;
                w.counterexample = "(xi_" + std::to_string(i) + ", " + m.str() + ")";
                return w;
            }
        }
    }
    return w;
}

/// omega(xi) = dnu(xi) - pi(psi(xi)) on a single element.
inline PartialElement omega_apply(const Pair& P, const WeakModuleData& M,
                                  const LieAlgebraElement& xi, const Element& m) {
    PartialElement am = M.act(P.psi_of(xi), m);
    if (!am) return std::nullopt;
    return dnu(xi, M.carrier).apply(m) - *am;
}

/// omega(xi) as a map; nullopt when psi(xi) acts partially somewhere.
inline std::optional<GradedLinearMap> omega_map(const Pair& P, const WeakModuleData& M,
                                                const LieAlgebraElement& xi) {
    std::optional<GradedLinearMap> act =
        M.action_map(P.psi_of(xi), 0, M.pair.lattice().zero());
    if (!act) return std::nullopt;
    return dnu(xi, M.carrier) - *act;
}

// ---------------------------------------------------------------------------
// Subspaces stable under the structure
// ---------------------------------------------------------------------------

/// Per-slot row spans of a carrier; grows by elements, reads back a Subspace.
class CarrierSpan {
public:
    explicit CarrierSpan(const BigradedSpace& sp) : sp_(sp) {}

    bool add(const Element& e) {
        bool grew = false;
        for (const auto& [k, v] : e.comps) {
            auto it = spans_.find(k);
            if (it == spans_.end()) it = spans_.emplace(k, RowSpace(sp_.dim(k))).first;
            if (it->second.add(v)) grew = true;
        }
        return grew;
    }

    bool contains(const Element& e) const {
        for (const auto& [k, v] : e.comps) {
            auto it = spans_.find(k);
            if (it == spans_.end()) return false;
            if (!it->second.contains(v)) return false;
        }
        return true;
    }

    Subspace subspace() const {
        BigradedSpace sub(sp_.lattice());
        for (const auto& [k, rs] : spans_)
            if (rs.dim() > 0) sub.set_slot(k, rs.dim());
        GradedLinearMap incl(sub, sp_, 0, sp_.lattice().zero());
        for (const auto& [k, rs] : spans_) {
            if (rs.dim() == 0) continue;
            incl.set_block(k, rs.basis().transposed());
        }
        return Subspace{std::move(sub), std::move(incl)};
    }

private:
    BigradedSpace sp_;
    std::map<SlotKey, RowSpace> spans_;
};

/// Smallest d- and action-stable span containing the seeds; actions that
/// leave the carrier are skipped (truncation contract).
inline Subspace submodule_closure(const WeakModuleData& M, std::vector<Element> seeds) {
    CarrierSpan span(M.carrier.space);
    std::vector<Element> work;
    for (auto& e : seeds)
        if (span.add(e)) work.push_back(std::move(e));
    const std::vector<BasisRef> abasis = M.algebra().space().basis();
    while (!work.empty()) {
        Element e = std::move(work.back());
        work.pop_back();
        Element de = M.carrier.d.apply(e);
        if (span.add(de)) work.push_back(std::move(de));
        for (const auto& a : abasis) {
            PartialElement ae = M.act(Element::basis_vector(M.algebra().space(), a), e);
            if (!ae) continue;
            if (span.add(*ae)) work.push_back(std::move(*ae));
        }
    }
    return span.subspace();
}

struct SubmoduleResult {
    WeakModuleData module;
    GradedLinearMap inclusion;
};

struct QuotientModuleResult {
    WeakModuleData module;
    GradedLinearMap projection;
    GradedLinearMap section; // projection . section = id
};

/// Restricts the structure to a d-stable, action-stable subspace.
inline SubmoduleResult submodule_module(const WeakModuleData& M, const Subspace& sub) {
    GradedLinearMap d_sub = corestrict(compose(M.carrier.d, sub.inclusion), sub);
    WeakModuleData out{M.pair, make_complex(sub.space, std::move(d_sub)), {}};
    for (const auto& a : M.algebra().space().basis())
        for (const auto& s : sub.space.basis()) {
            PartialElement img =
                M.act(Element::basis_vector(M.algebra().space(), a), sub.inclusion.apply_basis(s));
            if (!img) {
                out.action.set(a, s, std::nullopt);
                continue;
            }
            if (img->is_zero()) continue;
            // solve back into sub coordinates
            Element coords = [&] {
                Element c;
                for (const auto& [k, v] : img->comps) {
                    Mat inc = sub.inclusion.block(k);
                    auto x = solve(inc, v);
                    if (!x)
                        throw StructureError("submodule_module: action leaves the subspace at " +
                                             k.str());
                    c.comps[k] = *x;
                }
                c.trim();
                return c;
            }();
            out.action.set(a, s, std::move(coords));
        }
    return SubmoduleResult{std::move(out), sub.inclusion};
}

/// Quotient by a d-stable, action-stable subspace, with the induced action.
inline QuotientModuleResult quotient_module(const WeakModuleData& M, const Subspace& sub) {
    QuotientData q = quotient(M.carrier.space, sub.inclusion);
    GradedLinearMap d_q = compose(q.projection, compose(M.carrier.d, q.section));
    WeakModuleData out{M.pair, make_complex(q.space, std::move(d_q)), {}};
    for (const auto& a : M.algebra().space().basis())
        for (const auto& s : q.space.basis()) {
            PartialElement img =
                M.act(Element::basis_vector(M.algebra().space(), a), q.section.apply_basis(s));
            if (!img) {
                out.action.set(a, s, std::nullopt);
                continue;
            }
            Element proj = q.projection.apply(*img);
            if (!proj.is_zero()) out.action.set(a, s, std::move(proj));
        }
    return QuotientModuleResult{std::move(out), q.projection, q.section};
}

// ---------------------------------------------------------------------------
// Invariants and coinvariants
// ---------------------------------------------------------------------------

/// (-)^k: the joint kernel of the omega(xi_i), restricted to the part of the
/// carrier where every omega is defined. Basis vectors whose psi-action
/// leaves the carrier cannot be invariant and are excluded.
inline SubmoduleResult invariants(const Pair& P, const WeakModuleData& M) {
    const BigradedSpace& msp = M.carrier.space;
    std::vector<std::map<BasisRef, Element>> images(P.group().rank());
    std::map<SlotKey, std::vector<std::size_t>> defined; // slot -> defined indices
    for (const auto& [s, dim] : msp.slots())
        for (std::size_t j = 0; j < dim; ++j) {
            BasisRef m{s, j};
            bool all_defined = true;
            for (std::size_t i = 0; i < P.group().rank(); ++i) {
                PartialElement im =
                    omega_apply(P, M, LieAlgebraElement::basis(P.group(), i),
                                Element::basis_vector(msp, m));
                if (!im) {
                    all_defined = false;
                    break;
                }
                images[i][m] = std::move(*im);
            }
            if (all_defined) defined[s].push_back(j);
        }
    CarrierSpan span(msp);
    for (const auto& [s, idxs] : defined) {
        std::size_t n = idxs.size();
        // stack the omega images as one linear system per slot
        std::vector<std::vector<Rational>> rows;
        for (std::size_t i = 0; i < P.group().rank(); ++i) {
            std::map<SlotKey, std::vector<std::vector<Rational>>> byslot;
            for (std::size_t c = 0; c < n; ++c) {
                const Element& im = images[i].at(BasisRef{s, idxs[c]});
                for (const auto& [k, v] : im.comps) {
                    auto& mat = byslot[k];
                    if (mat.empty()) mat.assign(v.size(), std::vector<Rational>(n));
                    for (std::size_t r = 0; r < v.size(); ++r) mat[r][c] = v[r];
                }
            }
            for (auto& [k, mat] : byslot)
                for (auto& r : mat) rows.push_back(std::move(r));
        }
        Mat sys(rows.size(), n);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j2 = 0; j2 < n; ++j2) sys(i, j2) = rows[i][j2];
        Mat null = kernel_basis(std::move(sys));
        for (std::size_t c = 0; c < null.cols(); ++c) {
            Element e;
            std::vector<Rational> v(msp.dim(s));
            for (std::size_t r = 0; r < n; ++r) v[idxs[r]] = null(r, c);
            e.comps[s] = std::move(v);
            e.trim();
            span.add(e);
        }
    }
    return submodule_module(M, span.subspace());
}

/// (-)_k: quotient by the span of all defined omega(xi_i) m.
inline QuotientModuleResult coinvariants(const Pair& P, const WeakModuleData& M) {
    const BigradedSpace& msp = M.carrier.space;
    std::vector<Element> seeds;
    for (std::size_t i = 0; i < P.group().rank(); ++i)
        for (const auto& m : msp.basis()) {
            PartialElement im = omega_apply(P, M, LieAlgebraElement::basis(P.group(), i),
                                            Element::basis_vector(msp, m));
            if (im && !im->is_zero()) seeds.push_back(std::move(*im));
        }
    Subspace N = submodule_closure(M, std::move(seeds));
    return quotient_module(M, N);
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// Basis of Hom_w(M, N): closed weight-0 degree-0 action-equivariant maps.
/// Constraints whose evaluation touches an out-of-carrier product on either
/// side are skipped.
inline std::vector<GradedLinearMap> hom_weak_modules(const WeakModuleData& M,
                                                     const WeakModuleData& N) {
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

    // chain-map condition: d_N f(m) - f(d_M m) = 0
    for (const auto& m : msp.basis()) {
        SlotKey ct = m.slot.shifted(1, msp.lattice().zero());
        std::size_t cdim = nsp.dim(ct);
        std::vector<std::vector<Rational>> local(cdim, std::vector<Rational>(unknowns.size()));
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

    // equivariance: f(a m) = a f(m) for algebra basis a, module basis m
    for (const auto& a : M.algebra().space().basis())
        for (const auto& m : msp.basis()) {
            PartialElement am = M.act_basis(a, m);
            if (!am) continue; // skipped by the truncation contract
            SlotKey ct = m.slot.shifted(a.slot.degree, a.slot.weight);
            std::size_t cdim = nsp.dim(ct);
            // right side: a . f(m): need N's action of a on every candidate
            bool rhs_defined = true;
            SlotKey fs = m.slot;
            std::vector<Element> a_on(nsp.dim(fs));
            for (std::size_t y = 0; y < nsp.dim(fs); ++y) {
                PartialElement v = N.act_basis(a, BasisRef{fs, y});
                if (!v) {
                    rhs_defined = false;
                    break;
                }
                a_on[y] = std::move(*v);
            }
            if (!rhs_defined) continue;
            std::vector<std::vector<Rational>> local(cdim, std::vector<Rational>(unknowns.size()));
            for (std::size_t y = 0; y < nsp.dim(fs); ++y) {
                auto it = index.find({m, BasisRef{fs, y}});
                if (it == index.end()) continue;
                auto comp = a_on[y].comps.find(ct);
                if (comp == a_on[y].comps.end()) continue;
                for (std::size_t r = 0; r < cdim; ++r)
                    if (comp->second[r] != 0) local[r][it->second] -= comp->second[r];
            }
            for (const auto& [k, v] : am->comps)
                for (std::size_t x = 0; x < v.size(); ++x) {
                    if (v[x] == 0) continue;
                    for (std::size_t y = 0; y < cdim; ++y) {
                        auto it = index.find({BasisRef{k, x}, BasisRef{ct, y}});
                        if (it != index.end()) local[y][it->second] += v[x];
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
        GradedLinearMap f(msp, nsp, 0, msp.lattice().zero());
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            if (null(u, c) != 0) f.set_entry(unknowns[u].first, unknowns[u].second, null(u, c));
        basis.push_back(std::move(f));
    }
    return basis;
}

/// Checks that f is a morphism of weak modules (partial checks skipped).
inline bool is_module_map(const WeakModuleData& M, const WeakModuleData& N,
                          const GradedLinearMap& f) {
    if (f.source() != M.carrier.space || f.target() != N.carrier.space) return false;
    if (f.degree_shift() != 0 || !f.weight_shift().is_zero()) return false;
    if (!(compose(N.carrier.d, f) - compose(f, M.carrier.d)).is_zero()) return false;
    for (const auto& a : M.algebra().space().basis())
        for (const auto& m : M.carrier.space.basis()) {
            PartialElement am = M.act_basis(a, m);
            if (!am) continue;
            PartialElement rhs =
                N.act(Element::basis_vector(M.algebra().space(), a), f.apply_basis(m));
            if (!rhs) continue;
            if (f.apply(*am) != *rhs) return false;
        }
    return true;
}

/// Kernel of a module map, with inherited structure.
inline SubmoduleResult kernel_module(const WeakModuleData& M, const WeakModuleData& N,
                                     const GradedLinearMap& f) {
    Subspace ker = kernel(f);
    return submodule_module(M, ker);
}

/// Cokernel of a module map, with inherited structure.
inline QuotientModuleResult cokernel_module(const WeakModuleData& M, const WeakModuleData& N,
                                            const GradedLinearMap& f) {
    Subspace img = image(f);
    return quotient_module(N, img);
}

// ---------------------------------------------------------------------------
// Basic module constructors
// ---------------------------------------------------------------------------

/// A acting on itself by left multiplication.
inline WeakModuleData regular_module(const WeakPair& P) {
    WeakModuleData M{P, P.algebra.carrier(), {}};
    for (const auto& [key, val] : P.algebra.product_entries()) M.action.set(key.first, key.second, val);
    return M;
}

struct FreeModule {
    WeakModuleData module;
    TensorLayout layout; // A (x) V
};

/// Free module A (x) V on a complex V: a (b (x) v) = ab (x) v.
inline FreeModule free_module(const WeakPair& P, const Complex& V) {
    TensorComplex AV = tensor(P.algebra.carrier(), V);
    WeakModuleData M{P, AV.cx, {}};
    for (const auto& a : P.algebra.space().basis())
        for (const auto& t : AV.cx.space.basis()) {
            const auto& [b, v] = AV.layout.unpair(t);
            PartialElement ab = P.algebra.mult_basis(a, b);
            if (!ab) {
                M.action.set(a, t, std::nullopt);
                continue;
            }
            if (ab->is_zero()) continue;
            M.action.set(a, t, AV.layout.tensor_elem(*ab, Element::basis_vector(V.space, v)));
        }
    return FreeModule{std::move(M), AV.layout};
}

/// A complex as a weak module over the trivial weak pair (Lemma 2.2.7-style
/// conversion: carriers are untouched).
inline WeakModuleData kmodule_as_weak(const TorusGroup& K, const Complex& V) {
    WeakPair P{K, scalar_algebra(K.lattice)};
    WeakModuleData M{P, V, {}};
    BasisRef one{SlotKey{0, K.lattice.zero()}, 0};
    for (const auto& m : V.space.basis())
        M.action.set(one, m, Element::basis_vector(V.space, m));
    return M;
}

/// The underlying complex of a weak (k, K)-module; checks the action of 1.
inline Complex weak_as_kmodule(const WeakModuleData& M) {
    if (M.algebra().space().total_dim() != 1)
        throw StructureError("weak_as_kmodule: algebra is not the scalar pair");
    return M.carrier;
}

/// Module over trivial_pair(K, cap) where the monomial h^e acts by the
/// product of the operators T_i^{e_i}. With T_i = dnu(xi_i) this is the
/// non-weak module structure on any weight-graded complex; other commuting
/// chain maps give weak modules with nonzero omega.
inline WeakModuleData diagonal_module_over_trivial(const Pair& P, std::size_t cap,
                                                   const Complex& V,
                                                   const std::vector<GradedLinearMap>& T) {
    std::size_t rank = P.group().rank();
    if (T.size() != rank) throw StructureError("diagonal_module: need one operator per axis");
    MonomialBasis mb(rank, cap);
    if (mb.size() != P.algebra().space().total_dim())
        throw StructureError("diagonal_module: cap does not match the pair's algebra");
    WeakModuleData M{P.weak, V, {}};
    SlotKey s0{0, P.group().lattice.zero()};
    for (std::size_t i = 0; i < mb.size(); ++i) {
        GradedLinearMap op = GradedLinearMap::identity(V.space);
        const auto& e = mb.exponents(i);
        for (std::size_t v = 0; v < rank; ++v)
            for (std::size_t r = 0; r < e[v]; ++r) op = compose(T[v], op);
        BasisRef a{s0, i};
        for (const auto& m : V.space.basis()) {
            Element img = op.apply_basis(m);
            if (!img.is_zero()) M.action.set(a, m, std::move(img));
        }
    }
    return M;
}

/// The canonical non-weak module structure on a weight-graded complex over
/// the trivial pair: h_i acts by the differentiated torus action.
inline WeakModuleData weight_module_over_trivial(const Pair& P, std::size_t cap,
                                                 const Complex& V) {
    std::vector<GradedLinearMap> T;
    for (std::size_t i = 0; i < P.group().rank(); ++i)
        T.push_back(dnu(LieAlgebraElement::basis(P.group(), i), V));
    return diagonal_module_over_trivial(P, cap, V, T);
}

} // namespace hcdg
