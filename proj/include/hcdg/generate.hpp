#pragma once

#include "hcdg/module.hpp"
#include "hcdg/triple_module.hpp"

#include <random>

namespace hcdg {

/// Bounds for seeded random instances. Identical (profile, seed) inputs
/// reproduce identical instances bit for bit; generation never calls
/// std::uniform_int_distribution (whose output is implementation-defined).
struct InstanceProfile {
    std::size_t rank = 1;      // lattice rank
    int deg_lo = -2;
    int deg_hi = 2;
    std::int64_t wt_bound = 3; // weights drawn from [-wt_bound, wt_bound]
    std::size_t max_dim = 2;   // per-slot dimension bound
    std::size_t max_slots = 3; // number of generating atoms
    std::size_t cap = 2;       // algebra truncation cap
    std::uint64_t seed = 1;

    WeightLattice lattice() const { return WeightLattice{rank}; }
    TorusGroup group() const { return TorusGroup{lattice()}; }

    bool valid() const {
        return deg_lo <= deg_hi && wt_bound >= 0;
    }
};

using Rng = std::mt19937_64;

inline std::uint64_t rand_u64(Rng& rng) { return rng(); }

inline std::int64_t rand_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw StructureError("rand_int: empty range");
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Small rational with numerator in [-3, 3] \ {0} and denominator in {1, 2}.
inline Rational rand_scalar(Rng& rng) {
    std::int64_t num = rand_int(rng, 1, 3) * (rand_int(rng, 0, 1) ? 1 : -1);
    std::int64_t den = rand_int(rng, 1, 2);
    return Rational(num, den);
}

inline Weight rand_weight(Rng& rng, const InstanceProfile& p) {
    Weight w = p.lattice().zero();
    for (auto& x : w.v) x = rand_int(rng, -p.wt_bound, p.wt_bound);
    return w;
}

/// Random invertible (0,0) self-map built from shear operations; applied as
/// conjugation it scrambles matrices without leaving the exact world.
inline GradedLinearMap random_change_of_basis(Rng& rng, const BigradedSpace& sp) {
    GradedLinearMap g = GradedLinearMap::identity(sp);
    for (const auto& [s, dim] : sp.slots()) {
        if (dim < 2) continue;
        Mat m = Mat::identity(dim);
        std::size_t shears = 1 + rng() % (2 * dim);
        for (std::size_t k = 0; k < shears; ++k) {
            std::size_t i = rng() % dim, j = rng() % dim;
            if (i == j) continue;
            Rational c = rand_scalar(rng);
            for (std::size_t col = 0; col < dim; ++col) m(i, col) += c * m(j, col);
        }
        g.set_block(s, std::move(m));
    }
    return g;
}

/// Random finite complex: a direct sum of point atoms and two-term cells,
/// conjugated by a random change of basis so that d has dense-looking
/// blocks while d^2 = 0 stays exact.
inline Complex random_complex(Rng& rng, const InstanceProfile& p) {
    BigradedSpace sp(p.lattice());
    struct Cell {
        SlotKey from;
        std::size_t fi, ti;
    };
    std::vector<Cell> cells;
    std::size_t atoms = 1 + rng() % p.max_slots;
    for (std::size_t a = 0; a < atoms; ++a) {
        int deg = static_cast<int>(rand_int(rng, p.deg_lo, p.deg_hi));
        Weight w = rand_weight(rng, p);
        SlotKey s{deg, w};
        bool cell = deg < p.deg_hi && (rng() % 2 == 0);
        std::size_t copies = 1 + rng() % p.max_dim;
        for (std::size_t c = 0; c < copies; ++c) {
            std::size_t fi = sp.dim(s);
            sp.add_to_slot(s, 1);
            if (cell) {
                SlotKey t{deg + 1, w};
                std::size_t ti = sp.dim(t);
                sp.add_to_slot(t, 1);
                cells.push_back(Cell{s, fi, ti});
            }
        }
    }
    GradedLinearMap d(sp, sp, 1, p.lattice().zero());
    for (const auto& c : cells)
        d.set_entry(BasisRef{c.from, c.fi}, BasisRef{SlotKey{c.from.degree + 1, c.from.weight}, c.ti},
                    rand_scalar(rng));
    GradedLinearMap g = random_change_of_basis(rng, sp);
    GradedLinearMap d_conj = compose(compose(g, d), inverse_of_iso(g));
    return make_complex(sp, std::move(d_conj));
}

/// Random rational combination of a basis of maps (zero if the basis is empty).
inline GradedLinearMap random_combination(Rng& rng, const std::vector<GradedLinearMap>& basis,
                                          const BigradedSpace& src, const BigradedSpace& dst,
                                          int deg, const Weight& wt) {
    GradedLinearMap f(src, dst, deg, wt);
    for (const auto& b : basis) {
        if (rng() % 3 == 0) continue;
        f = f + b.scaled(rand_scalar(rng));
    }
    return f;
}

inline Element random_element(Rng& rng, const BigradedSpace& sp) {
    Element e;
    for (const auto& b : sp.basis())
        if (rng() % 2 == 0) e.accumulate(Element::basis_vector(sp, b), rand_scalar(rng));
    return e;
}

inline Element random_homogeneous_element(Rng& rng, const BigradedSpace& sp) {
    auto slots = sp.slots();
    if (slots.empty()) return Element{};
    std::size_t pick = rng() % slots.size();
    auto it = slots.begin();
    std::advance(it, pick);
    Element e;
    std::vector<Rational> v(it->second);
    v[rng() % v.size()] = rand_scalar(rng);
    e.comps[it->first] = std::move(v);
    return e;
}

// ---------------------------------------------------------------------------
// Pairs and modules
// ---------------------------------------------------------------------------

/// Weak pair whose algebra never truncates (products are all in carrier);
/// these drive the suites that demand exact adjunction dimensions.
inline WeakPair random_total_weak_pair(Rng& rng, const InstanceProfile& p) {
    TorusGroup K = p.group();
    switch (rng() % 4) {
    case 0:
        return WeakPair{K, scalar_algebra(K.lattice)};
    case 1: {
        std::size_t gens = 1 + rng() % 2;
        std::vector<int> degs(gens, 1);
        std::vector<Weight> wts;
        for (std::size_t i = 0; i < gens; ++i) wts.push_back(rand_weight(rng, p));
        return WeakPair{K, exterior_algebra(K.lattice, degs, wts)};
    }
    case 2:
        return WeakPair{K, nilpotent_poly_algebra(K.lattice, rand_weight(rng, p),
                                                  2 + rng() % 2)};
    default: {
        DgAlgebraData a = exterior_algebra(K.lattice, {1}, {rand_weight(rng, p)});
        DgAlgebraData b = nilpotent_poly_algebra(K.lattice, rand_weight(rng, p), 2);
        return WeakPair{K, tensor_algebra(a, b).algebra};
    }
    }
}

/// Pair with total psi-action families; the carrier weights of psi are zero
/// so omega is always defined on total modules.
inline Pair random_total_pair(Rng& rng, const InstanceProfile& p) {
    TorusGroup K = p.group();
    switch (rng() % 3) {
    case 0: {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < K.rank(); ++i) c.push_back(rand_scalar(rng));
        return nilpotent_pair(K, 2 + rng() % 2, c);
    }
    case 1: {
        std::vector<int> degs{1};
        std::vector<Weight> wts{K.lattice.zero()};
        return Pair{WeakPair{K, exterior_algebra(K.lattice, degs, wts)},
                    std::vector<Element>(K.rank(), Element{})};
    }
    default:
        return koszul_line_pair(K, 1 + rng() % 2);
    }
}

/// Free module on a random complex, possibly twisted by a change of basis
/// and cut down to a quotient by a random stable span.
inline WeakModuleData random_weak_module(Rng& rng, const WeakPair& P,
                                         const InstanceProfile& p) {
    InstanceProfile q = p;
    q.max_slots = 1 + rng() % 2;
    Complex V = random_complex(rng, q);
    FreeModule F = free_module(P, V);
    WeakModuleData M = std::move(F.module);
    if (rng() % 2 == 0) {
        std::vector<Element> seeds;
        std::size_t n = 1 + rng() % 2;
        for (std::size_t i = 0; i < n; ++i) seeds.push_back(random_element(rng, M.carrier.space));
        Subspace sub = submodule_closure(M, std::move(seeds));
        if (sub.space.total_dim() < M.carrier.space.total_dim())
            M = quotient_module(M, sub).module;
    }
    return M;
}

/// Conjugates a module's whole structure by a change of basis of its carrier.
inline WeakModuleData conjugate_module(const WeakModuleData& M, const GradedLinearMap& g) {
    GradedLinearMap gi = inverse_of_iso(g);
    WeakModuleData out{M.pair, make_complex(M.carrier.space,
                                            compose(compose(g, M.carrier.d), gi)),
                       {}};
    for (const auto& a : M.algebra().space().basis())
        for (const auto& m : M.carrier.space.basis()) {
            PartialElement img =
                M.act(Element::basis_vector(M.algebra().space(), a), gi.apply_basis(m));
            if (!img)
                out.action.set(a, m, std::nullopt);
            else if (!img->is_zero())
                out.action.set(a, m, g.apply(*img));
        }
    return out;
}

/// Random non-weak module over trivial_pair(K, cap): the canonical weight
/// module structure conjugated by a change of basis.
inline WeakModuleData random_module_over_trivial(Rng& rng, const Pair& P, std::size_t cap,
                                                 const InstanceProfile& p) {
    InstanceProfile q = p;
    q.max_slots = 1 + rng() % 2;
    Complex V = random_complex(rng, q);
    WeakModuleData M = weight_module_over_trivial(P, cap, V);
    return conjugate_module(M, random_change_of_basis(rng, V.space));
}

/// Random weak module over trivial_pair(K, cap) with prescribed commuting
/// operators: powers of a single chain map commute for free.
inline WeakModuleData random_diagonal_module(Rng& rng, const Pair& P, std::size_t cap,
                                             const InstanceProfile& p) {
    InstanceProfile q = p;
    q.max_slots = 1 + rng() % 2;
    Complex V = random_complex(rng, q);
    std::vector<GradedLinearMap> T;
    std::vector<GradedLinearMap> chain = chain_map_space(V, V);
    GradedLinearMap base = random_combination(rng, chain, V.space, V.space, 0,
                                              P.group().lattice.zero());
    for (std::size_t i = 0; i < P.group().rank(); ++i) {
        // scalar multiples of one chain map commute with each other
        T.push_back(base.scaled(rand_scalar(rng)));
    }
    return diagonal_module_over_trivial(P, cap, V, T);
}

/// Random short exact sequence 0 -> S -> M -> M/S -> 0 of weak modules.
struct ShortExactSequence {
    WeakModuleData sub, mid, quot;
    GradedLinearMap incl, proj;
};

inline ShortExactSequence random_ses(Rng& rng, const WeakModuleData& M) {
    std::vector<Element> seeds;
    std::size_t n = 1 + rng() % 2;
    for (std::size_t i = 0; i < n; ++i) seeds.push_back(random_element(rng, M.carrier.space));
    Subspace sub = submodule_closure(M, std::move(seeds));
    SubmoduleResult S = submodule_module(M, sub);
    QuotientModuleResult Q = quotient_module(M, sub);
    return ShortExactSequence{std::move(S.module), M, std::move(Q.module),
                              std::move(S.inclusion), std::move(Q.projection)};
}

} // namespace hcdg
