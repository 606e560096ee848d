#ifndef PLATEAU_HOMOLOGY_HPP
#define PLATEAU_HOMOLOGY_HPP

#include "plateau/complex.hpp"
#include "plateau/numeric.hpp"
#include "plateau/smith.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace plateau {

struct CoefficientGroup {
    enum class Tag { Integers, IntegersMod, Rationals };
    Tag tag = Tag::Integers;
    Int modulus = 0; // >= 2 when IntegersMod

    static CoefficientGroup integers() { return {Tag::Integers, 0}; }
    static CoefficientGroup integers_mod(Int m);
    static CoefficientGroup rationals() { return {Tag::Rationals, 0}; }

    bool operator==(const CoefficientGroup&) const = default;
    std::string name() const;
};

/// Finitely generated homology presentation: free rank, torsion divisors in
/// a divisibility chain, and explicit generating cycles in the chain basis.
/// Torsion generators come first (matching `torsion`), free generators
/// after; `orders[i]` is the annihilator of generator i (0 = infinite
/// order, the modulus for free generators over Z/m).
class HomologyPresentation {
public:
    int degree = 0;
    CoefficientGroup coeff;

    std::size_t free_rank = 0;
    IntVec torsion;
    IntMat generators;
    IntVec orders;

    std::size_t generator_count() const { return orders.size(); }
    std::string group_string() const;

    bool is_cycle(const IntVec& chain) const;
    /// Coordinates of a cycle over the generators, canonicalized modulo
    /// orders. Throws std::invalid_argument if `cycle` is not a cycle.
    IntVec coordinates(const IntVec& cycle) const;
    bool class_is_zero(const IntVec& cycle) const;

    /// Canonicalize a coordinate vector modulo the generator orders.
    IntVec reduce_coords(const IntVec& coords) const;

    const IntMat& boundary_in() const { return boundary_k1_; }
    const IntMat& boundary_out() const { return boundary_k_; }

private:
    IntMat boundary_k_;   // d_k, for cycle tests
    IntMat boundary_k1_;  // d_{k+1}
    std::optional<SmithForm> coord_snf_; // SNF of [G | d_{k+1} (| mI)]
    friend HomologyPresentation homology(const ChainComplexRep&, int, const CoefficientGroup&);
};

HomologyPresentation homology(const ChainComplexRep& c, int k, const CoefficientGroup& g);
HomologyPresentation homology(const CubicalComplex& k_complex, int k, const CoefficientGroup& g);
HomologyPresentation homology(const SimplicialComplex& k_complex, int k,
                              const CoefficientGroup& g);

/// A homomorphism between presented modules expressed by the canonical
/// coordinates of the images of the source generators (columns).
struct InducedHomMap {
    std::shared_ptr<const HomologyPresentation> source, target;
    IntMat matrix;

    IntVec apply(const IntVec& source_coords) const;
    bool is_zero_map() const;
};

/// Builds the induced map of an arbitrary chain map in one degree
/// (rows = target cells, cols = source cells). Verifies that each pushed
/// generator is a cycle whose class is expressible in the target
/// presentation; throws otherwise.
InducedHomMap induced_from_chain_map(std::shared_ptr<const HomologyPresentation> source,
                                     std::shared_ptr<const HomologyPresentation> target,
                                     const IntMat& chain_map);

IntMat inclusion_chain_map(const CubicalComplex& sub, const CubicalComplex& sup, int k);
IntMat inclusion_chain_map(const SimplicialComplex& sub, const SimplicialComplex& sup, int k);

InducedHomMap induced_map(const CubicalComplex& sub, const CubicalComplex& sup, int k,
                          const CoefficientGroup& g);
InducedHomMap induced_map(const SimplicialComplex& sub, const SimplicialComplex& sup, int k,
                          const CoefficientGroup& g);

/// Composition target_map(source_map(.)); presentations must line up.
InducedHomMap compose(const InducedHomMap& first, const InducedHomMap& then);

struct SubgroupSpec {
    std::vector<IntVec> generators; // coordinate vectors over a presentation
};

/// Interprets explicit cycles as a subgroup of the presented homology.
SubgroupSpec subgroup_from_cycles(const HomologyPresentation& pres,
                                  const std::vector<IntVec>& cycles);

bool is_zero_on_subgroup(const InducedHomMap& f, const SubgroupSpec& l);

/// Generators of ker f as a subgroup of the source module (coordinate
/// vectors). Includes nothing for the zero subgroup.
std::vector<IntVec> kernel_subgroup_generators(const InducedHomMap& f);
bool is_injective(const InducedHomMap& f);

/// Membership of a target element (canonical coords) in the image of f.
bool in_image(const InducedHomMap& f, const IntVec& target_coords);

/// Membership of an element in the subgroup generated by the columns of
/// `gens` inside the module whose slots have the given orders (0 meaning
/// infinite order, or a rational vector space when `rational`).
bool module_in_image(const IntMat& gens, const IntVec& slot_orders, const IntVec& elem,
                     bool rational);

/// Exactness of H_k(A cap B) -> H_k(A) + H_k(B) -> H_k(K) at the middle
/// term, for subcomplexes with A union B = K.
bool mayer_vietoris_check(const CubicalComplex& a, const CubicalComplex& b,
                          const CubicalComplex& k_complex, int k, const CoefficientGroup& g);
bool mayer_vietoris_check(const SimplicialComplex& a, const SimplicialComplex& b,
                          const SimplicialComplex& k_complex, int k, const CoefficientGroup& g);

} // namespace plateau

#endif
