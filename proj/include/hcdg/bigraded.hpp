#pragma once

#include "hcdg/matrix.hpp"
#include "hcdg/weights.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace hcdg {

/// (cohomological degree, torus weight) position of a graded piece.
struct SlotKey {
    int degree = 0;
    Weight weight;

    auto operator<=>(const SlotKey&) const = default;

    SlotKey shifted(int d, const Weight& mu) const { return SlotKey{degree + d, weight + mu}; }
    std::string str() const { return "(" + std::to_string(degree) + "," + weight.str() + ")"; }
};

/// One basis vector of a bigraded space: slot plus index into its basis.
struct BasisRef {
    SlotKey slot;
    std::size_t idx = 0;

    auto operator<=>(const BasisRef&) const = default;
    std::string str() const { return slot.str() + "[" + std::to_string(idx) + "]"; }
};

/// Finite-support (degree x weight)-graded rational vector space with a
/// canonical ordered basis per slot. Zero-dimension slots are never stored.
class BigradedSpace {
public:
    BigradedSpace() = default;
    explicit BigradedSpace(WeightLattice lattice) : lattice_(lattice) {}

    const WeightLattice& lattice() const { return lattice_; }
    const std::map<SlotKey, std::size_t>& slots() const { return slots_; }

    bool operator==(const BigradedSpace&) const = default;

    std::size_t dim(const SlotKey& s) const {
        auto it = slots_.find(s);
        return it == slots_.end() ? 0 : it->second;
    }

    std::size_t total_dim() const {
        std::size_t n = 0;
        for (const auto& [k, d] : slots_) n += d;
        return n;
    }

    bool is_zero() const { return slots_.empty(); }

    void set_slot(const SlotKey& s, std::size_t dim) {
        if (s.weight.rank() != lattice_.rank)
            throw std::invalid_argument("BigradedSpace: weight rank mismatch");
        if (dim == 0)
            slots_.erase(s);
        else
            slots_[s] = dim;
    }

    void add_to_slot(const SlotKey& s, std::size_t extra) {
        if (extra) set_slot(s, dim(s) + extra);
    }

    /// All basis vectors in canonical order (slot order, then index).
    std::vector<BasisRef> basis() const {
        std::vector<BasisRef> out;
        for (const auto& [k, d] : slots_)
            for (std::size_t i = 0; i < d; ++i) out.push_back(BasisRef{k, i});
        return out;
    }

    /// Position of a basis vector in the canonical order.
    std::size_t ordinal(const BasisRef& b) const {
        std::size_t n = 0;
        for (const auto& [k, d] : slots_) {
            if (k == b.slot) {
                if (b.idx >= d) throw std::out_of_range("BigradedSpace: basis index");
                return n + b.idx;
            }
            n += d;
        }
        throw std::out_of_range("BigradedSpace: no such slot " + b.slot.str());
    }

private:
    WeightLattice lattice_;
    std::map<SlotKey, std::size_t> slots_;
};

/// A vector of a bigraded space, stored densely per touched slot.
/// Zero components are trimmed so that equality is map equality.
struct Element {
    std::map<SlotKey, std::vector<Rational>> comps;

    static Element single(const SlotKey& slot, std::vector<Rational> coords) {
        Element e;
        e.comps[slot] = std::move(coords);
        e.trim();
        return e;
    }

    static Element basis_vector(const BigradedSpace& sp, const BasisRef& b) {
        Element e;
        std::vector<Rational> v(sp.dim(b.slot));
        if (b.idx >= v.size()) throw std::out_of_range("Element: basis index");
        v[b.idx] = 1;
        e.comps[b.slot] = std::move(v);
        return e;
    }

    bool is_zero() const { return comps.empty(); }
    bool operator==(const Element&) const = default;

    /// True when every component sits in a single slot (or the element is 0).
    bool homogeneous() const { return comps.size() <= 1; }

    std::optional<SlotKey> sole_slot() const {
        if (comps.size() != 1) return std::nullopt;
        return comps.begin()->first;
    }

    void trim() {
        for (auto it = comps.begin(); it != comps.end();) {
            bool zero = true;
            for (const auto& x : it->second)
                if (x != 0) { zero = false; break; }
            it = zero ? comps.erase(it) : std::next(it);
        }
    }

    Element& accumulate(const Element& o, const Rational& c = Rational(1)) {
        if (c == 0) return *this;
        for (const auto& [k, v] : o.comps) {
            auto it = comps.find(k);
            if (it == comps.end()) {
                std::vector<Rational> w(v.size());
                for (std::size_t i = 0; i < v.size(); ++i) w[i] = c * v[i];
                comps[k] = std::move(w);
            } else {
                if (it->second.size() != v.size())
                    throw std::invalid_argument("Element: slot dimension mismatch");
                for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += c * v[i];
            }
        }
        trim();
        return *this;
    }

    Element operator+(const Element& o) const {
        Element r = *this;
        r.accumulate(o);
        return r;
    }
    Element operator-(const Element& o) const {
        Element r = *this;
        r.accumulate(o, Rational(-1));
        return r;
    }
    Element scaled(const Rational& c) const {
        Element r;
        if (c == 0) return r;
        for (const auto& [k, v] : comps) {
            std::vector<Rational> w(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) w[i] = c * v[i];
            r.comps[k] = std::move(w);
        }
        return r;
    }

    Rational coeff(const BasisRef& b) const {
        auto it = comps.find(b.slot);
        if (it == comps.end()) return 0;
        return it->second.at(b.idx);
    }

    /// Coordinates in the canonical basis of sp (dense, length total_dim).
    std::vector<Rational> dense(const BigradedSpace& sp) const {
        std::vector<Rational> out(sp.total_dim());
        std::size_t off = 0;
        for (const auto& [k, d] : sp.slots()) {
            auto it = comps.find(k);
            if (it != comps.end()) {
                if (it->second.size() != d)
                    throw std::invalid_argument("Element: slot dimension mismatch vs space");
                for (std::size_t i = 0; i < d; ++i) out[off + i] = it->second[i];
            }
            off += d;
        }
        // any component outside sp is an error
        for (const auto& [k, v] : comps)
            if (sp.dim(k) == 0) throw std::invalid_argument("Element: component outside space at " + k.str());
        return out;
    }

    static Element from_dense(const BigradedSpace& sp, const std::vector<Rational>& v) {
        if (v.size() != sp.total_dim()) throw std::invalid_argument("Element: dense size mismatch");
        Element e;
        std::size_t off = 0;
        for (const auto& [k, d] : sp.slots()) {
            std::vector<Rational> w(v.begin() + off, v.begin() + off + d);
            e.comps[k] = std::move(w);
            off += d;
        }
        e.trim();
        return e;
    }
};

/// Degree shift structural error (slot naming included for diagnostics).
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Homogeneous linear map between bigraded spaces: shifts every slot
/// (i, w) -> (i + deg, w + wt) and acts by one rational block per slot.
class GradedLinearMap {
public:
    GradedLinearMap() = default;
    GradedLinearMap(BigradedSpace src, BigradedSpace dst, int deg, Weight wt)
        : src_(std::move(src)), dst_(std::move(dst)), deg_(deg), wt_(std::move(wt)) {
        if (src_.lattice() != dst_.lattice())
            throw StructureError("GradedLinearMap: lattice mismatch");
        if (wt_.rank() != src_.lattice().rank)
            throw StructureError("GradedLinearMap: weight shift rank mismatch");
    }

    static GradedLinearMap zero(const BigradedSpace& src, const BigradedSpace& dst, int deg,
                                const Weight& wt) {
        return GradedLinearMap(src, dst, deg, wt);
    }

    static GradedLinearMap identity(const BigradedSpace& sp) {
        GradedLinearMap f(sp, sp, 0, sp.lattice().zero());
        for (const auto& [k, d] : sp.slots()) f.blocks_[k] = Mat::identity(d);
        return f;
    }

    const BigradedSpace& source() const { return src_; }
    const BigradedSpace& target() const { return dst_; }
    int degree_shift() const { return deg_; }
    const Weight& weight_shift() const { return wt_; }
    const std::map<SlotKey, Mat>& blocks() const { return blocks_; }

    SlotKey image_slot(const SlotKey& s) const { return s.shifted(deg_, wt_); }

    /// Block out of slot s, materialized as zero when absent.
    Mat block(const SlotKey& s) const {
        auto it = blocks_.find(s);
        if (it != blocks_.end()) return it->second;
        return Mat(dst_.dim(image_slot(s)), src_.dim(s));
    }

    void set_block(const SlotKey& s, Mat m) {
        if (src_.dim(s) == 0) throw StructureError("set_block: no source slot " + s.str());
        SlotKey t = image_slot(s);
        if (m.rows() != dst_.dim(t) || m.cols() != src_.dim(s))
            throw StructureError("set_block: block shape mismatch at slot " + s.str());
        if (m.is_zero())
            blocks_.erase(s);
        else
            blocks_[s] = std::move(m);
    }

    void set_entry(const BasisRef& from, const BasisRef& to, const Rational& c) {
        if (image_slot(from.slot) != to.slot)
            throw StructureError("set_entry: slots incompatible with bidegree");
        auto it = blocks_.find(from.slot);
        if (it == blocks_.end()) {
            Mat m(dst_.dim(to.slot), src_.dim(from.slot));
            m(to.idx, from.idx) = c;
            set_block(from.slot, std::move(m));
        } else {
            it->second(to.idx, from.idx) = c;
        }
    }

    bool is_zero() const {
        for (const auto& [k, m] : blocks_)
            if (!m.is_zero()) return false;
        return true;
    }

    void normalize() {
        for (auto it = blocks_.begin(); it != blocks_.end();)
            it = it->second.is_zero() ? blocks_.erase(it) : std::next(it);
    }

    bool operator==(const GradedLinearMap& o) const {
        if (src_ != o.src_ || dst_ != o.dst_ || deg_ != o.deg_ || wt_ != o.wt_) return false;
        GradedLinearMap a = *this, b = o;
        a.normalize();
        b.normalize();
        return a.blocks_ == b.blocks_;
    }

    Element apply(const Element& e) const {
        Element out;
        for (const auto& [k, v] : e.comps) {
            if (src_.dim(k) != v.size())
                throw StructureError("apply: element/slot mismatch at " + k.str());
            auto it = blocks_.find(k);
            if (it == blocks_.end()) continue;
            std::vector<Rational> w = it->second.apply(v);
            Element part;
            part.comps[image_slot(k)] = std::move(w);
            part.trim();
            out.accumulate(part);
        }
        return out;
    }

    Element apply_basis(const BasisRef& b) const {
        return apply(Element::basis_vector(src_, b));
    }

    GradedLinearMap operator+(const GradedLinearMap& o) const {
        if (src_ != o.src_ || dst_ != o.dst_ || deg_ != o.deg_ || wt_ != o.wt_)
            throw StructureError("map sum: incompatible maps");
        GradedLinearMap r = *this;
        for (const auto& [k, m] : o.blocks_) {
            auto it = r.blocks_.find(k);
            if (it == r.blocks_.end())
                r.blocks_[k] = m;
            else
                it->second = it->second + m;
        }
        r.normalize();
        return r;
    }

    GradedLinearMap operator-(const GradedLinearMap& o) const { return *this + o.scaled(-1); }

    GradedLinearMap scaled(const Rational& c) const {
        GradedLinearMap r(src_, dst_, deg_, wt_);
        if (c == 0) return r;
        for (const auto& [k, m] : blocks_) r.blocks_[k] = m.scaled(c);
        return r;
    }

private:
    BigradedSpace src_, dst_;
    int deg_ = 0;
    Weight wt_;
    std::map<SlotKey, Mat> blocks_;
};

/// g after f. Bidegrees add; f's target must equal g's source.
inline GradedLinearMap compose(const GradedLinearMap& g, const GradedLinearMap& f) {
    if (f.target() != g.source())
        throw StructureError("compose: target of inner map does not match source of outer map");
    GradedLinearMap r(f.source(), g.target(), f.degree_shift() + g.degree_shift(),
                      f.weight_shift() + g.weight_shift());
    for (const auto& [s, bf] : f.blocks()) {
        Mat bg = g.block(f.image_slot(s));
        if (bg.rows() == 0) continue;
        Mat prod = bg * bf;
        if (!prod.is_zero()) r.set_block(s, std::move(prod));
    }
    return r;
}

struct Subspace {
    BigradedSpace space;
    GradedLinearMap inclusion; // bidegree (0,0) into the ambient space
};

/// Slotwise null space, with inclusion into the source of f.
inline Subspace kernel(const GradedLinearMap& f) {
    BigradedSpace ker(f.source().lattice());
    std::map<SlotKey, Mat> bases;
    for (const auto& [s, d] : f.source().slots()) {
        Mat basis = kernel_basis(f.block(s));
        if (basis.cols() > 0) {
            ker.set_slot(s, basis.cols());
            bases[s] = std::move(basis);
        }
    }
    GradedLinearMap incl(ker, f.source(), 0, f.source().lattice().zero());
    for (auto& [s, b] : bases) incl.set_block(s, std::move(b));
    return Subspace{std::move(ker), std::move(incl)};
}

/// Slotwise column space, with inclusion into the target of f.
inline Subspace image(const GradedLinearMap& f) {
    BigradedSpace img(f.target().lattice());
    std::map<SlotKey, Mat> bases;
    for (const auto& [s, blk] : f.blocks()) {
        SlotKey t = f.image_slot(s);
        RowSpace rs(blk.rows());
        for (std::size_t j = 0; j < blk.cols(); ++j) {
            std::vector<Rational> col(blk.rows());
            for (std::size_t i = 0; i < blk.rows(); ++i) col[i] = blk(i, j);
            rs.add(std::move(col));
        }
        if (rs.dim() > 0) {
            Mat basis = rs.basis().transposed(); // dim(t) x rank
            img.add_to_slot(t, basis.cols());
            bases[t] = std::move(basis);
        }
    }
    GradedLinearMap incl(img, f.target(), 0, f.target().lattice().zero());
    for (auto& [t, b] : bases) incl.set_block(t, std::move(b)); // t is its own preimage slot here
    return Subspace{std::move(img), std::move(incl)};
}

struct QuotientData {
    BigradedSpace space;
    GradedLinearMap projection; // ambient -> quotient
    GradedLinearMap section;    // quotient -> ambient, projection . section = id
};

/// V / W for a subspace given by a (0,0) injective inclusion. The chosen
/// complement basis is the set of standard basis vectors at non-pivot
/// coordinates of the row-reduced inclusion.
inline QuotientData quotient(const BigradedSpace& V, const GradedLinearMap& incl) {
    if (incl.target() != V) throw StructureError("quotient: inclusion target is not the ambient space");
    if (incl.degree_shift() != 0 || !incl.weight_shift().is_zero())
        throw StructureError("quotient: inclusion must have bidegree (0,0)");
    BigradedSpace Q(V.lattice());
    struct SlotData {
        RowSpace rows;
        std::vector<std::size_t> free_coords;
    };
    std::map<SlotKey, SlotData> data;
    for (const auto& [s, d] : V.slots()) {
        // rows of the subspace inside slot s
        RowSpace rs(d);
        Mat b = incl.block(s);
        std::size_t sub_dim = incl.source().dim(s);
        if (b.cols() != sub_dim) throw StructureError("quotient: bad inclusion block at " + s.str());
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::vector<Rational> col(d);
            for (std::size_t i = 0; i < d; ++i) col[i] = b(i, j);
            if (!rs.add(std::move(col)))
                throw StructureError("quotient: inclusion not injective at slot " + s.str());
        }
        std::vector<bool> pivot(d, false);
        for (auto p : rs.pivot_columns()) pivot[p] = true;
        SlotData sd{std::move(rs), {}};
        for (std::size_t j = 0; j < d; ++j)
            if (!pivot[j]) sd.free_coords.push_back(j);
        if (!sd.free_coords.empty()) Q.set_slot(s, sd.free_coords.size());
        data.emplace(s, std::move(sd));
    }
    GradedLinearMap proj(V, Q, 0, V.lattice().zero());
    GradedLinearMap sect(Q, V, 0, V.lattice().zero());
    for (const auto& [s, sd] : data) {
        std::size_t d = V.dim(s);
        std::size_t q = sd.free_coords.size();
        if (q == 0) continue;
        Mat pm(q, d);
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<Rational> e(d);
            e[j] = 1;
            std::vector<Rational> r = sd.rows.reduce_vector(std::move(e));
            for (std::size_t k = 0; k < q; ++k) pm(k, j) = r[sd.free_coords[k]];
        }
        Mat sm(d, q);
        for (std::size_t k = 0; k < q; ++k) sm(sd.free_coords[k], k) = 1;
        proj.set_block(s, std::move(pm));
        sect.set_block(s, std::move(sm));
    }
    return QuotientData{std::move(Q), std::move(proj), std::move(sect)};
}

/// Unique g with incl . g = f, for f landing inside the given subspace.
inline GradedLinearMap corestrict(const GradedLinearMap& f, const Subspace& sub) {
    if (sub.inclusion.target() != f.target()) throw StructureError("corestrict: ambient mismatch");
    GradedLinearMap g(f.source(), sub.space, f.degree_shift(), f.weight_shift());
    for (const auto& [s, blk] : f.blocks()) {
        SlotKey t = f.image_slot(s);
        Mat inc = sub.inclusion.block(t);
        // solve inc * x = blk column by column
        Mat out(inc.cols(), blk.cols());
        for (std::size_t j = 0; j < blk.cols(); ++j) {
            std::vector<Rational> col(blk.rows());
            for (std::size_t i = 0; i < blk.rows(); ++i) col[i] = blk(i, j);
            auto x = solve(inc, col);
            if (!x) throw StructureError("corestrict: map does not land in subspace at " + t.str());
            for (std::size_t i = 0; i < inc.cols(); ++i) out(i, j) = (*x)[i];
        }
        if (!out.is_zero()) g.set_block(s, std::move(out));
    }
    return g;
}

/// Inverse of a slotwise isomorphism (any bidegree).
inline GradedLinearMap inverse_of_iso(const GradedLinearMap& f) {
    GradedLinearMap inv(f.target(), f.source(), -f.degree_shift(), -f.weight_shift());
    for (const auto& [s, d] : f.source().slots()) {
        SlotKey t = f.image_slot(s);
        Mat b = f.block(s);
        if (b.rows() != b.cols())
            throw StructureError("inverse_of_iso: non-square block at " + s.str());
        std::size_t n = b.rows();
        Mat aug(n, 2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) aug(i, j) = b(i, j);
            aug(i, n + i) = 1;
        }
        if (rref(aug).size() != n)
            throw StructureError("inverse_of_iso: singular block at " + s.str());
        Mat binv(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) binv(i, j) = aug(i, n + j);
        if (n > 0) inv.set_block(t, std::move(binv));
    }
    // surjectivity: every target slot must be hit with matching dimension
    for (const auto& [t, d] : f.target().slots())
        if (f.source().dim(t.shifted(-f.degree_shift(), -f.weight_shift())) != d)
            throw StructureError("inverse_of_iso: target slot not covered: " + t.str());
    return inv;
}

/// True when f is a slotwise bijection.
inline bool is_isomorphism(const GradedLinearMap& f) {
    for (const auto& [s, d] : f.source().slots()) {
        Mat b = f.block(s);
        if (b.rows() != d || rank(b) != d) return false;
    }
    for (const auto& [t, d] : f.target().slots())
        if (f.source().dim(t.shifted(-f.degree_shift(), -f.weight_shift())) != d) return false;
    return true;
}

/// Slot relabelling data: a weight-changing rename of slots (degree kept),
/// merging slots whose images coincide. Not a GradedLinearMap because the
/// weight shift varies per slot; placement records where each old slot
/// landed and at which basis offset.
struct Regrading {
    BigradedSpace out;
    std::map<SlotKey, std::pair<SlotKey, std::size_t>> placement;

    Element push(const Element& e) const {
        Element r;
        for (const auto& [k, v] : e.comps) {
            auto it = placement.find(k);
            if (it == placement.end()) throw StructureError("regrade: element outside domain");
            const auto& [t, off] = it->second;
            auto& w = r.comps[t];
            if (w.empty()) w.resize(out.dim(t));
            for (std::size_t i = 0; i < v.size(); ++i) w[off + i] += v[i];
        }
        r.trim();
        return r;
    }

    BasisRef push_basis(const BasisRef& b) const {
        const auto& [t, off] = placement.at(b.slot);
        return BasisRef{t, off + b.idx};
    }
};

/// Relabel weights of every slot by wmap (degrees unchanged); slots with
/// equal images are concatenated in source slot order.
inline Regrading regrade(const BigradedSpace& in,
                         const std::function<Weight(const SlotKey&)>& wmap,
                         const WeightLattice& out_lattice) {
    Regrading r;
    r.out = BigradedSpace(out_lattice);
    for (const auto& [s, d] : in.slots()) {
        SlotKey t{s.degree, wmap(s)};
        r.placement[s] = {t, r.out.dim(t)};
        r.out.add_to_slot(t, d);
    }
    return r;
}

/// Transports f across regradings of its source and target. The transported
/// map must be homogeneous of weight shift mu_out; slot mismatches throw.
inline GradedLinearMap transport(const GradedLinearMap& f, const Regrading& rsrc,
                                 const Regrading& rdst, const Weight& mu_out) {
    GradedLinearMap g(rsrc.out, rdst.out, f.degree_shift(), mu_out);
    std::map<SlotKey, Mat> acc;
    for (const auto& [s, blk] : f.blocks()) {
        const auto& [ns, soff] = rsrc.placement.at(s);
        const auto& [nt, toff] = rdst.placement.at(f.image_slot(s));
        if (nt != ns.shifted(f.degree_shift(), mu_out))
            throw StructureError("transport: map not homogeneous after regrade at " + s.str());
        auto it = acc.find(ns);
        if (it == acc.end())
            it = acc.emplace(ns, Mat(rdst.out.dim(nt), rsrc.out.dim(ns))).first;
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j) it->second(toff + i, soff + j) = blk(i, j);
    }
    for (auto& [s, m] : acc)
        if (!m.is_zero()) g.set_block(s, std::move(m));
    return g;
}

} // namespace hcdg
