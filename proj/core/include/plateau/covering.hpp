#ifndef PLATEAU_COVERING_HPP
#define PLATEAU_COVERING_HPP

#include "plateau/complex.hpp"
#include "plateau/homology.hpp"
#include "plateau/sphere.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace plateau {

using Point = std::vector<double>;

struct Ball {
    Point center;
    double radius = 0;

    bool contains(const Point& p) const;         // open
    bool closure_contains(const Point& p, double tol = 0) const;
    double signed_dist(const Point& p) const;    // |p-c| - r
};

/// One covering region: a finite union of open balls.
struct Region {
    std::vector<Ball> balls;

    bool contains(const Point& p) const;
    bool closure_contains(const Point& p, double tol = 0) const;
    double dist(const Point& p) const; // to the union, 0 inside
};

/// An indexed family of regions with the construction byproducts of the
/// inductive ball refinement: per index subset S, spheres covering the
/// boundary intersection of the regions of S, and nonemptiness witnesses.
struct Covering {
    std::vector<Region> regions;
    std::map<std::vector<int>, std::vector<Sphere>> boundary_certificates;
    std::map<std::vector<int>, Point> witnesses;
    int multiplicity_bound = 0;

    std::size_t size() const { return regions.size(); }
    bool member(std::size_t j, const Point& p) const { return regions[j].contains(p); }
};

/// Function view of a covering; the pulled-back coverings of the projection
/// pipeline implement membership through the projection map.
struct IndexedCover {
    std::size_t count = 0;
    std::function<bool(std::size_t, const Point&)> member;
    std::vector<Point> ambient_probes;
};

IndexedCover as_indexed(const Covering& c);

struct Step1Options {
    double shrink = 0.8;        // geometric radius schedule
    int max_radius_tries = 60;
    double tol = 1e-9;
    int max_subset_size = 4;    // certificate bookkeeping cap
    double seed_radius_cap = 0.5;
};

/// Step-1 refinement: from sample points of the closed set and an open
/// covering `alpha` (balls), builds regions of balls so that every region
/// fits one alpha member, boundary intersections carry sphere certificates,
/// and nonempty region intersections are witnessed inside the set.
/// Throws std::runtime_error when a radius search exhausts its schedule.
Covering build_step1_covering(const std::vector<Point>& f_samples,
                              const std::vector<Ball>& alpha,
                              std::vector<Ball> seed_balls = {},
                              const Step1Options& opt = {});

struct Nerve {
    SimplicialComplex complex; // vertices are covering indices
    std::map<std::vector<int>, Point> witness_points;
};

/// Nerve of the cover restricted to a finite point set: S is a simplex
/// exactly when some point lies in every region of S. Exact over `pts`.
Nerve nerve_over_points(const IndexedCover& cover, const std::vector<Point>& pts, int max_dim);

/// Nerve with a reference predicate: candidate points are the covering's
/// stored witnesses plus the given probes, filtered by the predicate.
Nerve nerve(const Covering& cover, const std::function<bool(const Point&)>& reference,
            const std::vector<Point>& probes, int max_dim);

/// Refinement functoriality: iota maps fine indices to coarse indices with
/// fine_j inside coarse_iota(j); the induced vertex map must send every
/// nerve simplex of the fine cover to a simplex of the coarse nerve.
bool nerve_refinement_functorial(const Nerve& fine, const Nerve& coarse,
                                 const std::vector<int>& iota);

/// Canonical projection of degree-k cubical cycles of gamma into the nerve
/// of the covering restricted to gamma: subdivides gamma until each vertex
/// star fits inside one region, then maps Kuhn simplices through the
/// vertex-to-region assignment. Projected chains are sparse over sorted
/// region-index tuples.
struct NerveProjection {
    CubicalComplex refined_gamma;
    int subdivisions = 0;
    std::vector<int> vertex_region; // per refined vertex, cells(0) order
    std::vector<SimplexChain> projected;
};

NerveProjection project_cycles_to_nerve(const CubicalComplex& gamma,
                                        const std::vector<IntVec>& cycles, int k,
                                        const IndexedCover& cover, int max_subdivisions = 8);

/// Dense coordinates of a sparse simplex chain in a complex's degree-k
/// basis; throws when the chain uses a simplex missing from the complex.
IntVec chain_to_vector(const SimplexChain& chain, const SimplicialComplex& complex, int k);

/// Sample points of every cell of a cubical complex (corner lattice plus
/// barycenter), used as exact witnesses for nerves over complexes.
std::vector<Point> complex_sample_points(const CubicalComplex& k);

struct GeneralCoveringReport {
    bool ok = false;
    std::string failure;                 // empty when ok
    std::vector<int> bad_subset;         // axiom-2 violator when present
    Nerve k_gamma, k_eug, k_ekg;
    bool covers_ek = false;
    bool axiom2 = false;
    bool equal_d_simplexes = false;
    bool j_injective = false;
    bool i_gamma_zero_on_l = false;      // only meaningful when gamma side given
    int gamma_subdivisions = 0;
};

/// Full general-covering verification: the two covering axioms, equal
/// d-simplex sets of K(E u Gamma) and K(E_k u Gamma), injectivity of the
/// inclusion-induced map on H_{d-1}, and vanishing of the projected L.
GeneralCoveringReport verify_general_covering(const IndexedCover& cover,
                                              const std::vector<Point>& e_union_gamma_samples,
                                              const std::vector<Point>& ek_samples,
                                              const CubicalComplex& gamma,
                                              const std::vector<IntVec>& l_cycles, int d,
                                              const CoefficientGroup& g);

} // namespace plateau

#endif
