#pragma once

#include "hcdg/complex.hpp"
#include "hcdg/report.hpp"

#include <optional>

namespace hcdg {

/// Product of two basis vectors. Truncated carriers mark products that
/// escape the retained basis as out-of-carrier; law checks touching such a
/// product are skipped and counted rather than failed.
using PartialElement = std::optional<Element>;

namespace detail {

/// Sparse bilinear table keyed by basis pairs. Absent key means zero;
/// a stored nullopt means out-of-carrier.
class BilinearTable {
public:
    void set(const BasisRef& a, const BasisRef& b, PartialElement value) {
        table_[{a, b}] = std::move(value);
    }

    PartialElement get(const BasisRef& a, const BasisRef& b) const {
        auto it = table_.find({a, b});
        if (it == table_.end()) return Element{};
        return it->second;
    }

    bool is_partial(const BasisRef& a, const BasisRef& b) const {
        auto it = table_.find({a, b});
        return it != table_.end() && !it->second.has_value();
    }

    const std::map<std::pair<BasisRef, BasisRef>, PartialElement>& entries() const {
        return table_;
    }

    /// Bilinear extension. Returns nullopt when a pair with nonzero
    /// coefficients on both sides is out-of-carrier.
    PartialElement combine(const Element& x, const Element& y) const {
        Element out;
        for (const auto& [ka, va] : x.comps)
            for (std::size_t i = 0; i < va.size(); ++i) {
                if (va[i] == 0) continue;
                for (const auto& [kb, vb] : y.comps)
                    for (std::size_t j = 0; j < vb.size(); ++j) {
                        if (vb[j] == 0) continue;
                        PartialElement p = get(BasisRef{ka, i}, BasisRef{kb, j});
                        if (!p) return std::nullopt;
                        out.accumulate(*p, va[i] * vb[j]);
                    }
            }
        return out;
    }

private:
    std::map<std::pair<BasisRef, BasisRef>, PartialElement> table_;
};

} // namespace detail

/// A dg algebra presented by structure constants on the canonical basis of
/// its carrier. The weight grading doubles as the torus action, so weight
/// additivity of the product is equivariance.
class DgAlgebraData {
public:
    DgAlgebraData() = default;
    DgAlgebraData(Complex carrier, Element unit)
        : carrier_(std::move(carrier)), unit_(std::move(unit)) {}

    const Complex& carrier() const { return carrier_; }
    const BigradedSpace& space() const { return carrier_.space; }
    const GradedLinearMap& d() const { return carrier_.d; }
    const Element& unit() const { return unit_; }
    const WeightLattice& lattice() const { return carrier_.lattice(); }

    void set_product(const BasisRef& a, const BasisRef& b, PartialElement value) {
        table_.set(a, b, std::move(value));
    }

    PartialElement mult_basis(const BasisRef& a, const BasisRef& b) const {
        return table_.get(a, b);
    }

    PartialElement mult(const Element& x, const Element& y) const {
        return table_.combine(x, y);
    }

    bool is_partial(const BasisRef& a, const BasisRef& b) const {
        return table_.is_partial(a, b);
    }

    const std::map<std::pair<BasisRef, BasisRef>, PartialElement>& product_entries() const {
        return table_.entries();
    }

    /// Graded commutator [x, y] = xy - (-1)^{|x||y|} yx for homogeneous x.
    PartialElement commutator(const Element& x, int xdeg, const Element& y, int ydeg) const {
        PartialElement xy = mult(x, y);
        PartialElement yx = mult(y, x);
        if (!xy || !yx) return std::nullopt;
        bool neg = (xdeg % 2 != 0) && (ydeg % 2 != 0);
        return *xy - (neg ? yx->scaled(-1) : *yx);
    }

private:
    Complex carrier_;
    Element unit_;
    detail::BilinearTable table_;
};

/// Checks unit, associativity, Leibniz, weight/degree additivity and
/// d^2 = 0 on all basis tuples. Violations are reported, not thrown.
inline ValidationReport validate_dg_algebra(const DgAlgebraData& A) {
    ValidationReport rep;
    const BigradedSpace& sp = A.space();
    std::vector<BasisRef> basis = sp.basis();

    rep.checks++;
    if (A.d().degree_shift() != 1 || !A.d().weight_shift().is_zero())
        rep.fail("differential-bidegree", "d");
    rep.checks++;
    if (!compose(A.d(), A.d()).is_zero()) rep.fail("d-squared", "d.d != 0");

    // unit lives in slot (0, 0)
    rep.checks++;
    SlotKey unit_slot{0, sp.lattice().zero()};
    for (const auto& [k, v] : A.unit().comps)
        if (k != unit_slot) rep.fail("unit-slot", "unit has a component at " + k.str());
    rep.checks++;
    if (A.unit().is_zero()) rep.fail("unit-zero", "unit element is zero");

    // bidegree additivity of the product
    for (const auto& [key, val] : A.product_entries()) {
        if (!val) continue;
        rep.checks++;
        SlotKey expect{key.first.slot.degree + key.second.slot.degree,
                       key.first.slot.weight + key.second.slot.weight};
        for (const auto& [k, v] : val->comps)
            if (k != expect)
                rep.fail("product-bidegree",
                         key.first.str() + " * " + key.second.str() + " hits " + k.str());
    }

    // unit laws
    for (const auto& b : basis) {
        Element eb = Element::basis_vector(sp, b);
        rep.checks++;
        PartialElement l = A.mult(A.unit(), eb);
        if (!l)
            rep.fail("unit-law-partial", "1 * " + b.str());
        else if (*l != eb)
            rep.fail("left-unit", b.str());
        rep.checks++;
        PartialElement r = A.mult(eb, A.unit());
        if (!r)
            rep.fail("unit-law-partial", b.str() + " * 1");
        else if (*r != eb)
            rep.fail("right-unit", b.str());
    }

    // associativity
    for (const auto& a : basis)
        for (const auto& b : basis) {
            PartialElement ab = A.mult_basis(a, b);
            for (const auto& c : basis) {
                rep.checks++;
                PartialElement bc = A.mult_basis(b, c);
                if (!ab || !bc) {
                    rep.skipped++;
                    continue;
                }
                Element ec = Element::basis_vector(sp, c);
                Element ea = Element::basis_vector(sp, a);
                PartialElement lhs = A.mult(*ab, ec);
                PartialElement rhs = A.mult(ea, *bc);
                if (!lhs || !rhs) {
                    rep.skipped++;
                    continue;
                }
                if (*lhs != *rhs)
                    rep.fail("associativity", "(" + a.str() + "," + b.str() + "," + c.str() + ")");
            }
        }

    // Leibniz: d(ab) = (da) b + (-1)^{|a|} a (db)
    for (const auto& a : basis)
        for (const auto& b : basis) {
            rep.checks++;
            PartialElement ab = A.mult_basis(a, b);
            if (!ab) {
                rep.skipped++;
                continue;
            }
            Element da = A.d().apply_basis(a);
            Element db = A.d().apply_basis(b);
            PartialElement t1 = A.mult(da, Element::basis_vector(sp, b));
            PartialElement t2 = A.mult(Element::basis_vector(sp, a), db);
            if (!t1 || !t2) {
                rep.skipped++;
                continue;
            }
            Element rhs = *t1 + (a.slot.degree % 2 == 0 ? *t2 : t2->scaled(-1));
            if (A.d().apply(*ab) != rhs)
                rep.fail("leibniz", "(" + a.str() + "," + b.str() + ")");
        }

    return rep;
}

/// A dg Lie algebra presented by bracket structure constants.
class DgLieData {
public:
    DgLieData() = default;
    explicit DgLieData(Complex carrier) : carrier_(std::move(carrier)) {}

    const Complex& carrier() const { return carrier_; }
    const BigradedSpace& space() const { return carrier_.space; }

    void set_bracket(const BasisRef& x, const BasisRef& y, Element value) {
        table_.set(x, y, std::move(value));
    }

    Element bracket(const Element& x, const Element& y) const {
        return *table_.combine(x, y); // bracket tables never store out-of-carrier entries
    }

private:
    Complex carrier_;
    detail::BilinearTable table_;
};

/// Graded antisymmetry (standard sign), graded Jacobi, Leibniz and
/// bidegree additivity on all basis tuples.
inline ValidationReport validate_dg_lie(const DgLieData& g) {
    ValidationReport rep;
    const BigradedSpace& sp = g.space();
    std::vector<BasisRef> basis = sp.basis();

    rep.checks++;
    if (!compose(g.carrier().d, g.carrier().d).is_zero()) rep.fail("d-squared", "d.d != 0");

    auto ev = [&](const BasisRef& b) { return Element::basis_vector(sp, b); };
    auto sgn = [](int p, int q) { return (p % 2 != 0 && q % 2 != 0) ? Rational(-1) : Rational(1); };

    for (const auto& x : basis)
        for (const auto& y : basis) {
            // bidegree additivity
            rep.checks++;
            Element br = g.bracket(ev(x), ev(y));
            SlotKey expect{x.slot.degree + y.slot.degree, x.slot.weight + y.slot.weight};
            for (const auto& [k, v] : br.comps)
                if (k != expect)
                    rep.fail("bracket-bidegree", "[" + x.str() + "," + y.str() + "]");
            // antisymmetry: [x,y] = -(-1)^{|x||y|} [y,x]
            rep.checks++;
            Element yx = g.bracket(ev(y), ev(x));
            if (br != yx.scaled(-sgn(x.slot.degree, y.slot.degree)))
                rep.fail("antisymmetry", "(" + x.str() + "," + y.str() + ")");
            // Leibniz
            rep.checks++;
            const GradedLinearMap& d = g.carrier().d;
            Element lhs = d.apply(br);
            Element rhs = g.bracket(d.apply_basis(x), ev(y)) +
                          (x.slot.degree % 2 == 0
                               ? g.bracket(ev(x), d.apply_basis(y))
                               : g.bracket(ev(x), d.apply_basis(y)).scaled(-1));
            if (lhs != rhs) rep.fail("bracket-leibniz", "(" + x.str() + "," + y.str() + ")");
        }

    // Jacobi: [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    for (const auto& x : basis)
        for (const auto& y : basis)
            for (const auto& z : basis) {
                rep.checks++;
                Element lhs = g.bracket(ev(x), g.bracket(ev(y), ev(z)));
                Element rhs = g.bracket(g.bracket(ev(x), ev(y)), ev(z)) +
                              g.bracket(ev(y), g.bracket(ev(x), ev(z)))
                                  .scaled(sgn(x.slot.degree, y.slot.degree));
                if (lhs != rhs)
                    rep.fail("jacobi", "(" + x.str() + "," + y.str() + "," + z.str() + ")");
            }

    return rep;
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

/// Opposite algebra: a *op b = (-1)^{|a||b|} b a, same carrier.
inline DgAlgebraData opposite_algebra(const DgAlgebraData& A) {
    DgAlgebraData op(A.carrier(), A.unit());
    for (const auto& b : A.space().basis())
        for (const auto& a : A.space().basis()) {
            PartialElement ba = A.mult_basis(b, a);
            bool neg = (a.slot.degree % 2 != 0) && (b.slot.degree % 2 != 0);
            if (!ba)
                op.set_product(a, b, std::nullopt);
            else if (!ba->is_zero())
                op.set_product(a, b, neg ? ba->scaled(-1) : *ba);
        }
    return op;
}

struct TensorAlgebra {
    TensorLayout layout;
    DgAlgebraData algebra;
};

/// A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'.
inline TensorAlgebra tensor_algebra(const DgAlgebraData& A, const DgAlgebraData& B) {
    TensorComplex tc = tensor(A.carrier(), B.carrier());
    Element unit = tc.layout.tensor_elem(A.unit(), B.unit());
    DgAlgebraData out(tc.cx, std::move(unit));
    for (const auto& ta : tc.cx.space.basis()) {
        const auto& [a, b] = tc.layout.unpair(ta);
        for (const auto& tb : tc.cx.space.basis()) {
            const auto& [a2, b2] = tc.layout.unpair(tb);
            PartialElement aa = A.mult_basis(a, a2);
            PartialElement bb = B.mult_basis(b, b2);
            if (!aa || !bb) {
                out.set_product(ta, tb, std::nullopt);
                continue;
            }
            if (aa->is_zero() || bb->is_zero()) continue;
            Element prod = tc.layout.tensor_elem(*aa, *bb);
            bool neg = (b.slot.degree % 2 != 0) && (a2.slot.degree % 2 != 0);
            out.set_product(ta, tb, neg ? prod.scaled(-1) : prod);
        }
    }
    return TensorAlgebra{tc.layout, std::move(out)};
}

/// The one-dimensional algebra k sitting in slot (0, 0).
inline DgAlgebraData scalar_algebra(const WeightLattice& lat) {
    Complex k = unit_complex(lat);
    BasisRef one{SlotKey{0, lat.zero()}, 0};
    DgAlgebraData A(k, Element::basis_vector(k.space, one));
    A.set_product(one, one, Element::basis_vector(k.space, one));
    return A;
}

} // namespace hcdg
