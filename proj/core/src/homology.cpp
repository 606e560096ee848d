#include "plateau/homology.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace plateau {

CoefficientGroup CoefficientGroup::integers_mod(Int m)
{
    if (m < 2) throw std::invalid_argument("modular coefficients need m >= 2");
    return {Tag::IntegersMod, std::move(m)};
}

std::string CoefficientGroup::name() const
{
    switch (tag) {
    case Tag::Integers: return "Z";
    case Tag::Rationals: return "Q";
    case Tag::IntegersMod: {
        std::ostringstream os;
        os << "Z/" << modulus;
        return os.str();
    }
    }
    return "?";
}

namespace {

Int mod_reduce(const Int& x, const Int& m)
{
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

struct ZData {
    std::size_t nk = 0, nk1 = 0;
    std::size_t z = 0;       // kernel rank of d_k
    IntMat kernel_basis;     // nk x z
    IntMat a;                // z x nk1, kernel coordinates of d_{k+1}
    SmithForm snf_a;
};

ZData z_data(const ChainComplexRep& c, int k)
{
    if (k < 0 || k > c.dim()) throw std::out_of_range("homology degree out of range");
    const IntMat& bk = c.boundary[k];
    IntMat bk1 = (k + 1 <= c.dim()) ? c.boundary[k + 1] : IntMat(c.cells[k], 0);

    ZData out;
    out.nk = c.cells[k];
    out.nk1 = bk1.cols();
    SmithForm snf_k = smith_normal_form(bk);
    out.z = out.nk - snf_k.rank;
    out.kernel_basis = integer_kernel_basis(snf_k);

    IntMat w = snf_k.vinv * bk1; // coordinates of boundaries in the V basis
    for (std::size_t i = 0; i < snf_k.rank; ++i)
        for (std::size_t j = 0; j < out.nk1; ++j)
            if (w(i, j) != 0) throw std::logic_error("chain complex violates dd=0");
    out.a = IntMat(out.z, out.nk1);
    for (std::size_t i = 0; i < out.z; ++i)
        for (std::size_t j = 0; j < out.nk1; ++j) out.a(i, j) = w(snf_k.rank + i, j);
    out.snf_a = smith_normal_form(out.a);
    return out;
}

std::vector<std::pair<Int, int>> factorize(Int m)
{
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

struct CyclicPiece {
    Int order;  // >= 2, divides m
    IntVec gen; // chain vector mod m
};

/// Invariant-factor form of a direct sum of cyclic pieces of exponent
/// dividing m; returns (order, generator) slots with descending orders.
std::vector<CyclicPiece> invariant_factors(const std::vector<CyclicPiece>& pieces, const Int& m,
                                           std::size_t chain_len)
{
    auto primes = factorize(m);
    // per prime: list of (exponent, component generator), descending
    std::vector<std::vector<std::pair<int, IntVec>>> comps(primes.size());
    for (const auto& piece : pieces) {
        for (std::size_t pi = 0; pi < primes.size(); ++pi) {
            const Int& p = primes[pi].first;
            Int rest = piece.order;
            int a = 0;
            while (rest % p == 0) {
                rest /= p;
                ++a;
            }
            if (a == 0) continue;
            Int scale = piece.order;
            Int pa = 1;
            for (int t = 0; t < a; ++t) pa *= p;
            scale /= pa;
            IntVec g(chain_len);
            for (std::size_t i = 0; i < chain_len; ++i) g[i] = mod_reduce(piece.gen[i] * scale, m);
            comps[pi].emplace_back(a, std::move(g));
        }
    }
    std::size_t slots = 0;
    for (auto& list : comps) {
        std::stable_sort(list.begin(), list.end(),
                         [](const auto& x, const auto& y) { return x.first > y.first; });
        slots = std::max(slots, list.size());
    }
    std::vector<CyclicPiece> out;
    for (std::size_t s = 0; s < slots; ++s) {
        CyclicPiece slot;
        slot.order = 1;
        slot.gen.assign(chain_len, Int(0));
        for (std::size_t pi = 0; pi < primes.size(); ++pi) {
            if (s >= comps[pi].size()) continue;
            Int pa = 1;
            for (int t = 0; t < comps[pi][s].first; ++t) pa *= primes[pi].first;
            slot.order *= pa;
            for (std::size_t i = 0; i < chain_len; ++i)
                slot.gen[i] = mod_reduce(slot.gen[i] + comps[pi][s].second[i], m);
        }
        out.push_back(std::move(slot));
    }
    return out;
}

} // namespace

HomologyPresentation homology(const ChainComplexRep& c, int k, const CoefficientGroup& g)
{
    HomologyPresentation pres;
    pres.degree = k;
    pres.coeff = g;
    if (k < 0) throw std::out_of_range("homology: negative degree");
    if (k > c.dim()) {
        // no k-cells: the zero module
        pres.boundary_k_ = IntMat(0, 0);
        pres.boundary_k1_ = IntMat(0, 0);
        pres.generators = IntMat(0, 0);
        if (g.tag != CoefficientGroup::Tag::Rationals)
            pres.coord_snf_ = smith_normal_form(IntMat(0, 0));
        return pres;
    }
    pres.boundary_k_ = c.boundary[k];
    pres.boundary_k1_ = (k + 1 <= c.dim()) ? c.boundary[k + 1] : IntMat(c.cells[k], 0);

    ZData zd = z_data(c, k);
    IntMat gen_chains = zd.kernel_basis * zd.snf_a.uinv; // column i: generator of slot i

    std::vector<std::size_t> torsion_slots, free_slots;
    for (std::size_t i = 0; i < zd.snf_a.rank; ++i)
        if (zd.snf_a.divisors[i] >= 2) torsion_slots.push_back(i);
    for (std::size_t i = zd.snf_a.rank; i < zd.z; ++i) free_slots.push_back(i);

    auto slot_col = [&](std::size_t slot) {
        IntVec v(zd.nk);
        for (std::size_t i = 0; i < zd.nk; ++i) v[i] = gen_chains(i, slot);
        return v;
    };

    switch (g.tag) {
    case CoefficientGroup::Tag::Integers: {
        pres.free_rank = free_slots.size();
        std::vector<IntVec> gens;
        for (std::size_t slot : torsion_slots) {
            pres.torsion.push_back(zd.snf_a.divisors[slot]);
            pres.orders.push_back(zd.snf_a.divisors[slot]);
            gens.push_back(slot_col(slot));
        }
        for (std::size_t slot : free_slots) {
            pres.orders.push_back(0);
            gens.push_back(slot_col(slot));
        }
        pres.generators = IntMat(zd.nk, gens.size());
        for (std::size_t j = 0; j < gens.size(); ++j) pres.generators.set_col(j, gens[j]);
        break;
    }
    case CoefficientGroup::Tag::Rationals: {
        pres.free_rank = free_slots.size();
        pres.generators = IntMat(zd.nk, free_slots.size());
        for (std::size_t j = 0; j < free_slots.size(); ++j) {
            pres.generators.set_col(j, slot_col(free_slots[j]));
            pres.orders.push_back(0);
        }
        break;
    }
    case CoefficientGroup::Tag::IntegersMod: {
        const Int& m = g.modulus;
        std::vector<CyclicPiece> pieces;
        // H_k(Z) tensor Z/m
        for (std::size_t slot : free_slots) {
            CyclicPiece p;
            p.order = m;
            p.gen = slot_col(slot);
            for (auto& x : p.gen) x = mod_reduce(x, m);
            pieces.push_back(std::move(p));
        }
        for (std::size_t slot : torsion_slots) {
            Int go = gcd(zd.snf_a.divisors[slot], m);
            if (go < 2) continue;
            CyclicPiece p;
            p.order = go;
            p.gen = slot_col(slot);
            for (auto& x : p.gen) x = mod_reduce(x, m);
            pieces.push_back(std::move(p));
        }
        // Tor(H_{k-1}(Z), Z/m): torsion divisor f with bounding k-chain c_f
        // contributes the cycle (m/gcd(f,m)) c_f of order gcd(f,m).
        if (k >= 1) {
            ZData zlow = z_data(c, k - 1);
            for (std::size_t j = 0; j < zlow.snf_a.rank; ++j) {
                const Int& f = zlow.snf_a.divisors[j];
                if (f < 2) continue;
                Int go = gcd(f, m);
                if (go < 2) continue;
                Int scale = m / go;
                CyclicPiece p;
                p.order = go;
                p.gen.assign(zd.nk, Int(0));
                for (std::size_t i = 0; i < zd.nk; ++i)
                    p.gen[i] = mod_reduce(zlow.snf_a.v(i, j) * scale, m);
                pieces.push_back(std::move(p));
            }
        }
        auto slots = invariant_factors(pieces, m, zd.nk);
        // descending orders: free (== m) parts first, then torsion; report
        // torsion ascending with the divisibility chain intact
        std::vector<CyclicPiece> torsion_parts, free_parts;
        for (auto& s : slots)
            (s.order == m ? free_parts : torsion_parts).push_back(std::move(s));
        std::reverse(torsion_parts.begin(), torsion_parts.end());
        pres.free_rank = free_parts.size();
        std::vector<IntVec> gens;
        for (auto& t : torsion_parts) {
            pres.torsion.push_back(t.order);
            pres.orders.push_back(t.order);
            gens.push_back(std::move(t.gen));
        }
        for (auto& f : free_parts) {
            pres.orders.push_back(m);
            gens.push_back(std::move(f.gen));
        }
        pres.generators = IntMat(zd.nk, gens.size());
        for (std::size_t j = 0; j < gens.size(); ++j) pres.generators.set_col(j, gens[j]);
        break;
    }
    }

    // Coordinate system: SNF of [G | d_{k+1} (| mI)] for exact solves.
    if (g.tag != CoefficientGroup::Tag::Rationals) {
        IntMat sys = IntMat::hcat(pres.generators, pres.boundary_k1_);
        if (g.tag == CoefficientGroup::Tag::IntegersMod) {
            IntMat mi(zd.nk, zd.nk);
            for (std::size_t i = 0; i < zd.nk; ++i) mi(i, i) = g.modulus;
            sys = IntMat::hcat(sys, mi);
        }
        pres.coord_snf_ = smith_normal_form(sys);
    }
    return pres;
}

HomologyPresentation homology(const CubicalComplex& k_complex, int k, const CoefficientGroup& g)
{
    return homology(chain_complex(k_complex), k, g);
}

HomologyPresentation homology(const SimplicialComplex& k_complex, int k,
                              const CoefficientGroup& g)
{
    return homology(chain_complex(k_complex), k, g);
}

std::string HomologyPresentation::group_string() const
{
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " + ";
        first = false;
    };
    if (free_rank > 0) {
        sep();
        switch (coeff.tag) {
        case CoefficientGroup::Tag::Integers: os << "Z"; break;
        case CoefficientGroup::Tag::Rationals: os << "Q"; break;
        case CoefficientGroup::Tag::IntegersMod: os << "(Z/" << coeff.modulus << ")"; break;
        }
        if (free_rank > 1) os << "^" << free_rank;
    }
    for (const Int& d : torsion) {
        sep();
        os << "Z/" << d;
    }
    if (first) os << "0";
    return os.str();
}

bool HomologyPresentation::is_cycle(const IntVec& chain) const
{
    if (chain.size() != boundary_k_.cols()) throw std::invalid_argument("chain length mismatch");
    IntVec b = boundary_k_.apply(chain);
    for (const Int& x : b) {
        if (coeff.tag == CoefficientGroup::Tag::IntegersMod) {
            if (x % coeff.modulus != 0) return false;
        } else if (x != 0) {
            return false;
        }
    }
    return true;
}

IntVec HomologyPresentation::reduce_coords(const IntVec& coords) const
{
    IntVec out = coords;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (orders[i] != 0) out[i] = mod_reduce(out[i], orders[i]);
    return out;
}

IntVec HomologyPresentation::coordinates(const IntVec& cycle) const
{
    if (!is_cycle(cycle)) throw std::invalid_argument("not a cycle over the coefficient group");
    std::size_t g = generator_count();
    if (coeff.tag == CoefficientGroup::Tag::Rationals) {
        std::size_t rows = boundary_k1_.rows(), bcols = boundary_k1_.cols();
        RatMat sys(rows, g + bcols);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < g; ++j) sys(i, j) = Rat(generators(i, j));
            for (std::size_t j = 0; j < bcols; ++j) sys(i, g + j) = Rat(boundary_k1_(i, j));
        }
        std::vector<Rat> rhs(rows), sol;
        for (std::size_t i = 0; i < rows; ++i) rhs[i] = Rat(cycle[i]);
        if (!rational_solve(sys, rhs, sol))
            throw std::logic_error("cycle not expressible in presentation");
        IntVec out(g);
        for (std::size_t j = 0; j < g; ++j) {
            if (denominator(sol[j]) != 1)
                throw std::logic_error("non-integral class coordinate over Q");
            out[j] = numerator(sol[j]);
        }
        return out;
    }
    auto sol = integer_solve(*coord_snf_, cycle);
    if (!sol) throw std::logic_error("cycle not expressible in presentation");
    IntVec out(g);
    for (std::size_t j = 0; j < g; ++j) out[j] = (*sol)[j];
    return reduce_coords(out);
}

bool HomologyPresentation::class_is_zero(const IntVec& cycle) const
{
    IntVec c = coordinates(cycle);
    return std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; });
}

IntVec InducedHomMap::apply(const IntVec& source_coords) const
{
    return target->reduce_coords(matrix.apply(source_coords));
}

bool InducedHomMap::is_zero_map() const
{
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        IntVec col = matrix.col(j);
        IntVec r = target->reduce_coords(col);
        if (!std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; })) return false;
    }
    return true;
}

InducedHomMap induced_from_chain_map(std::shared_ptr<const HomologyPresentation> source,
                                     std::shared_ptr<const HomologyPresentation> target,
                                     const IntMat& chain_map)
{
    InducedHomMap out;
    out.source = std::move(source);
    out.target = std::move(target);
    std::size_t g = out.source->generator_count();
    out.matrix = IntMat(out.target->generator_count(), g);
    for (std::size_t j = 0; j < g; ++j) {
        IntVec pushed = chain_map.apply(out.source->generators.col(j));
        IntVec coords = out.target->coordinates(pushed);
        out.matrix.set_col(j, coords);
    }
    return out;
}

IntMat inclusion_chain_map(const CubicalComplex& sub, const CubicalComplex& sup, int k)
{
    IntMat m(sup.cell_count(k), sub.cell_count(k));
    const auto& cs = sub.cells(k);
    for (std::size_t j = 0; j < cs.size(); ++j) m(sup.index_of(cs[j]), j) = 1;
    return m;
}

IntMat inclusion_chain_map(const SimplicialComplex& sub, const SimplicialComplex& sup, int k)
{
    IntMat m(sup.cell_count(k), sub.cell_count(k));
    const auto& cs = sub.cells(k);
    for (std::size_t j = 0; j < cs.size(); ++j) m(sup.index_of(cs[j]), j) = 1;
    return m;
}

namespace {

template <typename K>
InducedHomMap induced_map_impl(const K& sub, const K& sup, int k, const CoefficientGroup& g)
{
    if (!sub.is_subcomplex_of(sup))
        throw std::invalid_argument("induced_map: not a subcomplex");
    auto ps = std::make_shared<HomologyPresentation>(homology(sub, k, g));
    auto pt = std::make_shared<HomologyPresentation>(homology(sup, k, g));
    return induced_from_chain_map(ps, pt, inclusion_chain_map(sub, sup, k));
}

} // namespace

InducedHomMap induced_map(const CubicalComplex& sub, const CubicalComplex& sup, int k,
                          const CoefficientGroup& g)
{
    return induced_map_impl(sub, sup, k, g);
}

InducedHomMap induced_map(const SimplicialComplex& sub, const SimplicialComplex& sup, int k,
                          const CoefficientGroup& g)
{
    return induced_map_impl(sub, sup, k, g);
}

InducedHomMap compose(const InducedHomMap& first, const InducedHomMap& then)
{
    if (first.target.get() != then.source.get() &&
        first.target->generator_count() != then.source->generator_count())
        throw std::invalid_argument("compose: presentations do not line up");
    InducedHomMap out;
    out.source = first.source;
    out.target = then.target;
    out.matrix = then.matrix * first.matrix;
    for (std::size_t j = 0; j < out.matrix.cols(); ++j)
        out.matrix.set_col(j, out.target->reduce_coords(out.matrix.col(j)));
    return out;
}

SubgroupSpec subgroup_from_cycles(const HomologyPresentation& pres,
                                  const std::vector<IntVec>& cycles)
{
    SubgroupSpec out;
    for (const IntVec& c : cycles) out.generators.push_back(pres.coordinates(c));
    return out;
}

bool is_zero_on_subgroup(const InducedHomMap& f, const SubgroupSpec& l)
{
    for (const IntVec& gen : l.generators) {
        if (gen.size() != f.source->generator_count())
            throw std::invalid_argument("subgroup generator length mismatch");
        IntVec img = f.apply(gen);
        if (!std::all_of(img.begin(), img.end(), [](const Int& x) { return x == 0; }))
            return false;
    }
    return true;
}

namespace {

// Relation columns o_j e_j for finite-order target slots.
IntMat order_relations(const IntVec& orders)
{
    std::size_t finite = 0;
    for (const Int& o : orders)
        if (o != 0) ++finite;
    IntMat rel(orders.size(), finite);
    std::size_t c = 0;
    for (std::size_t j = 0; j < orders.size(); ++j)
        if (orders[j] != 0) rel(j, c++) = orders[j];
    return rel;
}

std::vector<IntVec> kernel_generators_impl(const IntMat& f, const IntVec& src_orders,
                                           const IntVec& tgt_orders)
{
    IntMat rel = order_relations(tgt_orders);
    for (std::size_t i = 0; i < rel.rows(); ++i)
        for (std::size_t j = 0; j < rel.cols(); ++j) rel(i, j) = -rel(i, j);
    IntMat w = IntMat::hcat(f, rel);
    IntMat basis = integer_kernel_basis(w);
    std::vector<IntVec> out;
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        IntVec c(f.cols());
        for (std::size_t i = 0; i < f.cols(); ++i) c[i] = basis(i, j);
        for (std::size_t i = 0; i < c.size(); ++i)
            if (src_orders[i] != 0) c[i] = mod_reduce(c[i], src_orders[i]);
        if (!std::all_of(c.begin(), c.end(), [](const Int& x) { return x == 0; }))
            out.push_back(std::move(c));
    }
    return out;
}

bool in_image_impl(const IntMat& f, const IntVec& src_orders, const IntVec& tgt_orders,
                   const IntVec& elem, bool rational)
{
    (void)src_orders;
    if (rational) {
        RatMat sys(f.rows(), f.cols());
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j) sys(i, j) = Rat(f(i, j));
        std::vector<Rat> rhs(elem.size()), sol;
        for (std::size_t i = 0; i < elem.size(); ++i) rhs[i] = Rat(elem[i]);
        return rational_solve(sys, rhs, sol);
    }
    IntMat sys = IntMat::hcat(f, order_relations(tgt_orders));
    return integer_solve(sys, elem).has_value();
}

} // namespace

std::vector<IntVec> kernel_subgroup_generators(const InducedHomMap& f)
{
    // over the rationals all orders are zero, so the integer kernel lattice
    // spans the rational kernel and the same computation applies
    return kernel_generators_impl(f.matrix, f.source->orders, f.target->orders);
}

bool is_injective(const InducedHomMap& f) { return kernel_subgroup_generators(f).empty(); }

bool in_image(const InducedHomMap& f, const IntVec& target_coords)
{
    return in_image_impl(f.matrix, f.source->orders, f.target->orders, target_coords,
                         f.source->coeff.tag == CoefficientGroup::Tag::Rationals);
}

bool module_in_image(const IntMat& gens, const IntVec& slot_orders, const IntVec& elem,
                     bool rational)
{
    return in_image_impl(gens, {}, slot_orders, elem, rational);
}

namespace {

template <typename K>
bool mayer_vietoris_impl(const K& a, const K& b, const K& k_complex, int deg,
                         const CoefficientGroup& g)
{
    if (!(a.union_with(b) == k_complex))
        throw std::invalid_argument("mayer_vietoris_check: A union B != K");
    K ab = a.intersection_with(b);

    auto p_ab = std::make_shared<HomologyPresentation>(homology(ab, deg, g));
    auto p_a = std::make_shared<HomologyPresentation>(homology(a, deg, g));
    auto p_b = std::make_shared<HomologyPresentation>(homology(b, deg, g));
    auto p_k = std::make_shared<HomologyPresentation>(homology(k_complex, deg, g));

    InducedHomMap ia = induced_from_chain_map(p_ab, p_a, inclusion_chain_map(ab, a, deg));
    InducedHomMap ib = induced_from_chain_map(p_ab, p_b, inclusion_chain_map(ab, b, deg));
    InducedHomMap ja = induced_from_chain_map(p_a, p_k, inclusion_chain_map(a, k_complex, deg));
    InducedHomMap jb = induced_from_chain_map(p_b, p_k, inclusion_chain_map(b, k_complex, deg));

    std::size_t ga = p_a->generator_count(), gb = p_b->generator_count();
    std::size_t gab = p_ab->generator_count(), gk = p_k->generator_count();

    // middle module A + B
    IntVec mid_orders = p_a->orders;
    mid_orders.insert(mid_orders.end(), p_b->orders.begin(), p_b->orders.end());

    IntMat f(gk, ga + gb); // j_* - j'_*
    for (std::size_t j = 0; j < ga; ++j)
        for (std::size_t i = 0; i < gk; ++i) f(i, j) = ja.matrix(i, j);
    for (std::size_t j = 0; j < gb; ++j)
        for (std::size_t i = 0; i < gk; ++i) f(i, ga + j) = -jb.matrix(i, j);

    IntMat fi(ga + gb, gab); // (i_*, i'_*)
    for (std::size_t j = 0; j < gab; ++j) {
        for (std::size_t i = 0; i < ga; ++i) fi(i, j) = ia.matrix(i, j);
        for (std::size_t i = 0; i < gb; ++i) fi(ga + i, j) = ib.matrix(i, j);
    }

    // image inside kernel: F(Fi e_j) = 0 in K
    IntMat comp = f * fi;
    for (std::size_t j = 0; j < gab; ++j)
        for (std::size_t i = 0; i < gk; ++i) {
            Int v = comp(i, j);
            if (p_k->orders[i] != 0) v = mod_reduce(v, p_k->orders[i]);
            if (v != 0) return false;
        }

    if (g.tag == CoefficientGroup::Tag::Rationals) {
        return rational_rank(fi) + rational_rank(f) == ga + gb;
    }

    // kernel inside image
    for (const IntVec& c : kernel_generators_impl(f, mid_orders, p_k->orders))
        if (!in_image_impl(fi, p_ab->orders, mid_orders, c, false)) return false;
    return true;
}

} // namespace

bool mayer_vietoris_check(const CubicalComplex& a, const CubicalComplex& b,
                          const CubicalComplex& k_complex, int k, const CoefficientGroup& g)
{
    return mayer_vietoris_impl(a, b, k_complex, k, g);
}

bool mayer_vietoris_check(const SimplicialComplex& a, const SimplicialComplex& b,
                          const SimplicialComplex& k_complex, int k, const CoefficientGroup& g)
{
    return mayer_vietoris_impl(a, b, k_complex, k, g);
}

} // namespace plateau
