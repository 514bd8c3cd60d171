#pragma once

#include "hcdg/module.hpp"

namespace hcdg {

/// Element of R(K): a finite combination of the orthogonal idempotents
/// chi_lambda, one per character. For a torus every irreducible is a
/// one-dimensional character, so this is the whole Hecke algebra of K.
struct DistributionElement {
    std::map<Weight, Rational> coeffs;

    static DistributionElement chi(const Weight& w) {
        DistributionElement d;
        d.coeffs[w] = 1;
        return d;
    }

    void trim() {
        for (auto it = coeffs.begin(); it != coeffs.end();)
            it = (it->second == 0) ? coeffs.erase(it) : std::next(it);
    }
    bool operator==(const DistributionElement&) const = default;

    DistributionElement operator+(const DistributionElement& o) const {
        DistributionElement r = *this;
        for (const auto& [w, c] : o.coeffs) r.coeffs[w] += c;
        r.trim();
        return r;
    }

    /// Convolution: chi_l chi_m = delta_{lm} chi_l.
    DistributionElement operator*(const DistributionElement& o) const {
        DistributionElement r;
        for (const auto& [w, c] : coeffs) {
            auto it = o.coeffs.find(w);
            if (it != o.coeffs.end()) r.coeffs[w] = c * it->second;
        }
        r.trim();
        return r;
    }

    /// Right action of the coordinate ring: (S e_mu)(f) = S(e_mu f), so
    /// chi_nu e_mu = chi_{nu + (-mu)}... concretely chi_nu . e_{-l} = chi_{nu+l}.
    DistributionElement times_character(const Weight& mu) const {
        DistributionElement r;
        for (const auto& [w, c] : coeffs) r.coeffs[w - mu] += c;
        r.trim();
        return r;
    }
};

/// Sum chi_lambda (x) v_lambda in R(K) (x) V; V-components live in the
/// coordinates of whatever carrier they came from.
struct RKTensor {
    std::map<Weight, Element> terms;

    void trim() {
        for (auto it = terms.begin(); it != terms.end();)
            it = it->second.is_zero() ? terms.erase(it) : std::next(it);
    }
    bool operator==(const RKTensor&) const = default;
    bool is_zero() const { return terms.empty(); }

    RKTensor& accumulate(const Weight& w, const Element& v, const Rational& c = Rational(1)) {
        terms[w].accumulate(v, c);
        trim();
        return *this;
    }
    RKTensor operator+(const RKTensor& o) const {
        RKTensor r = *this;
        for (const auto& [w, v] : o.terms) r.accumulate(w, v);
        return r;
    }
    RKTensor operator-(const RKTensor& o) const {
        RKTensor r = *this;
        for (const auto& [w, v] : o.terms) r.accumulate(w, v, Rational(-1));
        return r;
    }
};

/// Sum v_lambda (x) chi_lambda in V (x) R(K).
struct TensorRK {
    std::map<Weight, Element> terms;

    void trim() {
        for (auto it = terms.begin(); it != terms.end();)
            it = it->second.is_zero() ? terms.erase(it) : std::next(it);
    }
    bool operator==(const TensorRK&) const = default;
    bool is_zero() const { return terms.empty(); }

    TensorRK& accumulate(const Weight& w, const Element& v, const Rational& c = Rational(1)) {
        terms[w].accumulate(v, c);
        trim();
        return *this;
    }
    TensorRK operator+(const TensorRK& o) const {
        TensorRK r = *this;
        for (const auto& [w, v] : o.terms) r.accumulate(w, v);
        return r;
    }
    TensorRK operator-(const TensorRK& o) const {
        TensorRK r = *this;
        for (const auto& [w, v] : o.terms) r.accumulate(w, v, Rational(-1));
        return r;
    }
};

/// The twist tau: R(K) (x) V -> V (x) R(K), chi_mu (x) v |->
/// v (x) chi_{mu - wt(v)}, evaluated weight component by weight component.
inline TensorRK tau(const RKTensor& x) {
    TensorRK out;
    for (const auto& [mu, v] : x.terms)
        for (const auto& [slot, coords] : v.comps) {
            Element part;
            part.comps[slot] = coords;
            out.accumulate(mu - slot.weight, part);
        }
    return out;
}

/// Inverse twist: v (x) chi_mu |-> chi_{mu + wt(v)} (x) v.
inline RKTensor tau_inv(const TensorRK& x) {
    RKTensor out;
    for (const auto& [mu, v] : x.terms)
        for (const auto& [slot, coords] : v.comps) {
            Element part;
            part.comps[slot] = coords;
            out.accumulate(mu + slot.weight, part);
        }
    return out;
}

/// Product in R(K)#A: (chi_mu (x) a)(chi_nu (x) b) =
/// delta_{mu, nu + wt(a)} chi_mu (x) ab. Out-of-carrier algebra products
/// poison the result (nullopt).
inline std::optional<RKTensor> hecke_mult_ra(const RKTensor& x, const RKTensor& y,
                                             const DgAlgebraData& A) {
    RKTensor out;
    for (const auto& [mu, a] : x.terms)
        for (const auto& [aslot, acoords] : a.comps) {
            Element ahom;
            ahom.comps[aslot] = acoords;
            for (const auto& [nu, b] : y.terms) {
                if (mu != nu + aslot.weight) continue;
                PartialElement ab = A.mult(ahom, b);
                if (!ab) return std::nullopt;
                out.accumulate(mu, *ab);
            }
        }
    return out;
}

/// Product in A#R(K): (a (x) chi_sigma)(b (x) chi_nu) =
/// delta_{sigma, nu + wt(b)} ab (x) chi_nu.
inline std::optional<TensorRK> hecke_mult_ar(const TensorRK& x, const TensorRK& y,
                                             const DgAlgebraData& A) {
    TensorRK out;
    for (const auto& [sigma, a] : x.terms)
        for (const auto& [nu, b] : y.terms)
            for (const auto& [bslot, bcoords] : b.comps) {
                if (sigma != nu + bslot.weight) continue;
                Element bhom;
                bhom.comps[bslot] = bcoords;
                PartialElement ab = A.mult(a, bhom);
                if (!ab) return std::nullopt;
                out.accumulate(nu, *ab);
            }
    return out;
}

/// d(chi (x) a) = chi (x) da: R(K) sits in degree 0.
inline RKTensor hecke_d_ra(const RKTensor& x, const DgAlgebraData& A) {
    RKTensor out;
    for (const auto& [mu, a] : x.terms) out.accumulate(mu, A.d().apply(a));
    return out;
}

inline TensorRK hecke_d_ar(const TensorRK& x, const DgAlgebraData& A) {
    TensorRK out;
    for (const auto& [mu, a] : x.terms) out.accumulate(mu, A.d().apply(a));
    return out;
}

/// Multiplier actions from Prop-2.4.11-style identities.
/// a' (a (x) S) = a'a (x) S.
inline std::optional<TensorRK> left_mult_ar(const Element& ap, const TensorRK& x,
                                            const DgAlgebraData& A) {
    TensorRK out;
    for (const auto& [mu, a] : x.terms) {
        PartialElement p = A.mult(ap, a);
        if (!p) return std::nullopt;
        out.accumulate(mu, *p);
    }
    return out;
}

/// (S (x) a) a' = S (x) aa'.
inline std::optional<RKTensor> right_mult_ra(const RKTensor& x, const Element& ap,
                                             const DgAlgebraData& A) {
    RKTensor out;
    for (const auto& [mu, a] : x.terms) {
        PartialElement p = A.mult(a, ap);
        if (!p) return std::nullopt;
        out.accumulate(mu, *p);
    }
    return out;
}

/// (a (x) S) S' = a (x) SS'.
inline TensorRK right_mult_distribution(const TensorRK& x, const DistributionElement& sp) {
    TensorRK out;
    for (const auto& [mu, a] : x.terms) {
        auto it = sp.coeffs.find(mu);
        if (it != sp.coeffs.end()) out.accumulate(mu, a.scaled(it->second));
    }
    return out;
}

/// a (S (x) b) = chi_{.+wt(a)} (x) ab: the multiplier action of A on R(K)#A.
inline std::optional<RKTensor> left_mult_ra(const Element& ap, const RKTensor& x,
                                            const DgAlgebraData& A) {
    RKTensor out;
    for (const auto& [apslot, apcoords] : ap.comps) {
        Element ahom;
        ahom.comps[apslot] = apcoords;
        for (const auto& [nu, b] : x.terms) {
            PartialElement p = A.mult(ahom, b);
            if (!p) return std::nullopt;
            out.accumulate(nu + apslot.weight, *p);
        }
    }
    return out;
}

/// The action of R(K)#A on a weak (A, K)-module: (chi_l (x) a) m is the
/// weight-l projection of a m.
inline std::optional<Element> hecke_act(const RKTensor& x, const Element& m,
                                        const WeakModuleData& M) {
    Element out;
    for (const auto& [mu, a] : x.terms) {
        PartialElement am = M.act(a, m);
        if (!am) return std::nullopt;
        for (const auto& [slot, coords] : am->comps)
            if (slot.weight == mu) {
                Element part;
                part.comps[slot] = coords;
                out.accumulate(part);
            }
    }
    return out;
}

/// Right action on a right weak module presented by a (m, a) table:
/// m (chi_l (x) a) projects m to the right-weight-l part first; with the
/// inversion convention the right weight of a stored weight-w vector is -w.
inline std::optional<Element> hecke_act_right(const Element& m, const RKTensor& x,
                                              const detail::BilinearTable& right_action) {
    Element out;
    for (const auto& [mu, a] : x.terms) {
        Element proj;
        for (const auto& [slot, coords] : m.comps)
            if (-slot.weight == mu) proj.comps[slot] = coords;
        proj.trim();
        if (proj.is_zero()) continue;
        PartialElement ma = right_action.combine(proj, a);
        if (!ma) return std::nullopt;
        out.accumulate(*ma);
    }
    return out;
}

/// chi_I = sum of chi_l over a finite index set.
inline RKTensor chi_set(const std::vector<Weight>& I, const Element& unit) {
    RKTensor out;
    for (const auto& w : I) out.accumulate(w, unit);
    return out;
}

/// S (x) a as an element of R(K)#A.
inline RKTensor rk_tensor(const DistributionElement& S, const Element& a) {
    RKTensor out;
    for (const auto& [w, c] : S.coeffs) out.accumulate(w, a.scaled(c));
    return out;
}

/// a (x) S as an element of A#R(K).
inline TensorRK ar_tensor(const Element& a, const DistributionElement& S) {
    TensorRK out;
    for (const auto& [w, c] : S.coeffs) out.accumulate(w, a.scaled(c));
    return out;
}

/// The A#R(K) action on a weak module: (a (x) chi_l) m = a (chi_l m).
inline std::optional<Element> hecke_act_ar(const TensorRK& x, const Element& m,
                                           const WeakModuleData& M) {
    Element out;
    for (const auto& [nu, a] : x.terms) {
        Element proj;
        for (const auto& [slot, coords] : m.comps)
            if (slot.weight == nu) proj.comps[slot] = coords;
        proj.trim();
        if (proj.is_zero()) continue;
        PartialElement am = M.act(a, proj);
        if (!am) return std::nullopt;
        out.accumulate(*am);
    }
    return out;
}

/// The seven multiplier identities relating R(K)#A and A#R(K), executed on
/// supplied homogeneous samples. Checks touching an out-of-carrier product
/// are skipped and counted.
inline ValidationReport identities_2411(const DgAlgebraData& A, const Element& a,
                                        const Element& ap, const DistributionElement& S,
                                        const DistributionElement& Sp) {
    ValidationReport rep;
    PartialElement apa = A.mult(ap, a);
    PartialElement aap = A.mult(a, ap);

    // (1) a'(a (x) S) = a'a (x) S
    rep.checks++;
    if (auto l = left_mult_ar(ap, ar_tensor(a, S), A); l && apa) {
        if (!(*l == ar_tensor(*apa, S))) rep.fail("2411-1", "a'(a x S) != a'a x S");
    } else
        rep.skipped++;

    // (2) a' tau^{-1}(a (x) S) = tau^{-1}(a'a (x) S)
    rep.checks++;
    if (auto l = left_mult_ra(ap, tau_inv(ar_tensor(a, S)), A); l && apa) {
        if (!(*l == tau_inv(ar_tensor(*apa, S)))) rep.fail("2411-2", "multiplier vs tau_inv");
    } else
        rep.skipped++;

    // (3) (S (x) a) a' = S (x) aa'
    rep.checks++;
    if (auto r = right_mult_ra(rk_tensor(S, a), ap, A); r && aap) {
        if (!(*r == rk_tensor(S, *aap))) rep.fail("2411-3", "(S x a)a' != S x aa'");
    } else
        rep.skipped++;

    // (4) tau(S (x) 1) = 1 (x) S
    rep.checks++;
    if (!(tau(rk_tensor(S, A.unit())) == ar_tensor(A.unit(), S)))
        rep.fail("2411-4", "tau(S x 1) != 1 x S");

    // (5) (a (x) S) S' = a (x) SS'
    rep.checks++;
    if (!(right_mult_distribution(ar_tensor(a, S), Sp) == ar_tensor(a, S * Sp)))
        rep.fail("2411-5", "(a x S)S' != a x SS'");

    // (6) a (S (x) 1) = sum S<phi(-)^{-1} a, a_i*> (x) a_i, which collapses
    // to moving S by the weight of each homogeneous component of a; checked
    // against the tau route a(S (x) 1) = tau^{-1}(a (x) S)
    rep.checks++;
    if (auto l = left_mult_ra(a, rk_tensor(S, A.unit()), A); l) {
        RKTensor direct;
        for (const auto& [slot, coords] : a.comps)
            for (const auto& [w, c] : S.coeffs)
                direct.accumulate(w + slot.weight, Element::single(slot, coords).scaled(c));
        if (!(*l == direct)) rep.fail("2411-6", "multiplier disagrees with the character move");
        if (!(*l == tau_inv(ar_tensor(a, S)))) rep.fail("2411-6", "multiplier disagrees with tau");
    } else
        rep.skipped++;

    // (7) write tau(S (x) a) = sum a_i (x) T_i; then sum a_i (T_i (x) 1) = S (x) a
    rep.checks++;
    {
        TensorRK t = tau(rk_tensor(S, a));
        RKTensor back;
        bool total = true;
        for (const auto& [mu, ai] : t.terms) {
            auto part = left_mult_ra(ai, rk_tensor(DistributionElement::chi(mu), A.unit()), A);
            if (!part) {
                total = false;
                break;
            }
            back = back + *part;
        }
        if (!total)
            rep.skipped++;
        else if (!(back == rk_tensor(S, a)))
            rep.fail("2411-7", "reconstruction identity");
    }

    return rep;
}

// ---------------------------------------------------------------------------
// K-finite part of a raw left Hecke module
// ---------------------------------------------------------------------------

/// A left dg R(K)#A-module that is not presented through a weight grading:
/// the carrier keeps all weights at 0 and the chi_lambda act as explicit
/// commuting idempotents. This models modules (like infinite products)
/// whose approximately unital part is strictly smaller.
struct HeckeRawModule {
    WeakPair pair;  // (A, K); the carrier weights are bookkeeping only
    Complex carrier;
    std::map<Weight, GradedLinearMap> chi; // idempotent actions on the window
    detail::BilinearTable a_action;        // (A basis, m basis) -> element

    ValidationReport validate() const {
        ValidationReport rep;
        for (const auto& [w, c] : chi) {
            rep.checks++;
            if (!(compose(c, c) == c)) rep.fail("chi-idempotent", w.str());
            rep.checks++;
            if (!(compose(carrier.d, c) == compose(c, carrier.d)))
                rep.fail("chi-d-commute", w.str());
            for (const auto& [w2, c2] : chi) {
                if (w2 == w) continue;
                rep.checks++;
                if (!compose(c, c2).is_zero())
                    rep.fail("chi-orthogonal", w.str() + "," + w2.str());
            }
        }
        return rep;
    }
};

/// Wraps a weak (A, K)-module as a raw Hecke module on a window: weights
/// are erased to 0 and the chi become the weight projections.
inline HeckeRawModule raw_from_weak(const WeakModuleData& M, const Window& window) {
    HeckeRawModule R;
    R.pair = M.pair;
    // erase weights (regrade to the same lattice, all weights 0)
    Regrading rg = regrade(
        M.carrier.space, [&](const SlotKey&) { return M.pair.lattice().zero(); },
        M.pair.lattice());
    GradedLinearMap d = transport(M.carrier.d, rg, rg, M.pair.lattice().zero());
    R.carrier = make_complex(rg.out, std::move(d));
    for (const auto& lam : window.weights) {
        GradedLinearMap proj(R.carrier.space, R.carrier.space, 0, M.pair.lattice().zero());
        for (const auto& [s, dim] : M.carrier.space.slots()) {
            if (s.weight != lam) continue;
            const auto& [t, off] = rg.placement.at(s);
            Mat blk = proj.block(t);
            for (std::size_t i = 0; i < dim; ++i) blk(off + i, off + i) = 1;
            proj.set_block(t, std::move(blk));
        }
        R.chi[lam] = std::move(proj);
    }
    for (const auto& [key, val] : M.action.entries()) {
        BasisRef m = rg.push_basis(key.second);
        if (!val)
            R.a_action.set(key.first, m, std::nullopt);
        else
            R.a_action.set(key.first, m, rg.push(*val));
    }
    return R;
}

struct KFinitePart {
    WeakModuleData module; // approximately unital, weight grading restored
    // per-slot inclusion into the weight-erased raw carrier (not weight
    // homogeneous, so kept as raw blocks keyed by the module's slots)
    std::map<SlotKey, Mat> inclusion;
    ValidationReport report;
};

/// Largest approximately unital submodule visible on the window: the direct
/// sum of the images of the chi_lambda, with the weight grading they induce.
/// The result is stable under d because d commutes with every chi.
inline KFinitePart k_finite_part(const HeckeRawModule& R, const Window& window) {
    KFinitePart out;
    out.report = R.validate();
    BigradedSpace sp(R.pair.lattice());
    std::map<Weight, Subspace> images;
    for (const auto& lam : window.weights) {
        auto it = R.chi.find(lam);
        if (it == R.chi.end()) continue;
        Subspace img = image(it->second);
        for (const auto& [s, dim] : img.space.slots())
            sp.add_to_slot(SlotKey{s.degree, lam}, dim);
        images.emplace(lam, std::move(img));
    }
    std::map<SlotKey, Mat> incl;
    // weight-graded inclusion: the lambda part embeds by its image basis
    for (auto& [lam, img] : images)
        for (const auto& [s, dim] : img.space.slots())
            incl[SlotKey{s.degree, lam}] = img.inclusion.block(s);

    // differential restricted to the K-finite part
    GradedLinearMap d(sp, sp, 1, R.pair.lattice().zero());
    for (const auto& [t, dim] : sp.slots()) {
        SlotKey t1{t.degree + 1, t.weight};
        Mat bin = incl.at(t);
        Mat draw = R.carrier.d.block(SlotKey{t.degree, R.pair.lattice().zero()});
        Mat din = draw * bin;
        if (din.is_zero()) continue;
        if (sp.dim(t1) == 0) {
            out.report.fail("d-stability", t.str());
            continue;
        }
        Mat bout = incl.at(t1);
        Mat sol(bout.cols(), din.cols());
        bool ok = true;
        for (std::size_t c = 0; c < din.cols(); ++c) {
            std::vector<Rational> col(din.rows());
            for (std::size_t r = 0; r < din.rows(); ++r) col[r] = din(r, c);
            auto x = solve(bout, col);
            if (!x) {
                out.report.fail("d-stability", t.str());
                ok = false;
                break;
            }
            for (std::size_t r = 0; r < bout.cols(); ++r) sol(r, c) = (*x)[r];
        }
        if (ok && !sol.is_zero()) d.set_block(t, std::move(sol));
    }

    WeakModuleData M{R.pair, Complex{sp, std::move(d)}, {}};
    // transported A-action: a x = chi_{l + wt a}(a x) on the lambda part
    for (const auto& a : R.pair.algebra.space().basis()) {
        for (const auto& [t, dim] : sp.slots()) {
            SlotKey tt{t.degree + a.slot.degree, t.weight + a.slot.weight};
            Mat bin = incl.at(t);
            bool total = true;
            // a acting on each column of the inclusion
            std::vector<Element> imgs;
            for (std::size_t c = 0; c < bin.cols() && total; ++c) {
                std::vector<Rational> col(bin.rows());
                for (std::size_t r = 0; r < bin.rows(); ++r) col[r] = bin(r, c);
                Element x = Element::single(SlotKey{t.degree, R.pair.lattice().zero()}, col);
                PartialElement ax = R.a_action.combine(
                    Element::basis_vector(R.pair.algebra.space(), a), x);
                if (!ax) {
                    total = false;
                    break;
                }
                imgs.push_back(std::move(*ax));
            }
            if (!total) {
                for (std::size_t c = 0; c < dim; ++c)
                    M.action.set(a, BasisRef{t, c}, std::nullopt);
                continue;
            }
            if (sp.dim(tt) == 0) {
                bool all_zero = true;
                for (const auto& e : imgs)
                    if (!e.is_zero()) all_zero = false;
                if (!all_zero)
                    for (std::size_t c = 0; c < dim; ++c)
                        M.action.set(a, BasisRef{t, c}, std::nullopt);
                continue;
            }
            Mat bout = incl.at(tt);
            for (std::size_t c = 0; c < imgs.size(); ++c) {
                // project to the target chi image first
                auto chi_it = R.chi.find(tt.weight);
                Element proj = chi_it == R.chi.end() ? Element{} : chi_it->second.apply(imgs[c]);
                std::vector<Rational> dense(bout.rows());
                for (const auto& [k, v] : proj.comps)
                    if (k == SlotKey{tt.degree, R.pair.lattice().zero()})
                        for (std::size_t r = 0; r < v.size(); ++r) dense[r] = v[r];
                auto x = solve(bout, dense);
                if (!x) {
                    out.report.fail("action-stability", t.str());
                    continue;
                }
                Element val;
                val.comps[tt] = *x;
                val.trim();
                if (!val.is_zero()) M.action.set(a, BasisRef{t, c}, std::move(val));
            }
        }
    }
    out.module = std::move(M);
    out.inclusion = std::move(incl);
    return out;
}

} // namespace hcdg
