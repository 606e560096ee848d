#ifndef PLATEAU_SCENE_HPP
#define PLATEAU_SCENE_HPP

#include "plateau/complex.hpp"
#include "plateau/homology.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace plateau {

/// A spanning problem instance: ambient grid, boundary complex, competitor
/// complex, problem dimension d, coefficients, and the subgroup L of
/// H_{d-1}(gamma) given by explicit generating cycles in gamma's
/// (d-1)-cell basis.
struct Scene {
    CubicalComplex grid;
    CubicalComplex gamma;
    CubicalComplex competitor;
    int d = 1;
    CoefficientGroup coeff = CoefficientGroup::integers();
    std::vector<IntVec> l_cycles;

    void validate() const;
    CubicalComplex union_complex() const; // E union gamma
};

/// Cached boundary-side data shared by repeated predicate evaluations on
/// scenes with the same gamma, coefficients and L.
struct SpanningContext {
    std::shared_ptr<const HomologyPresentation> gamma_pres;
    SubgroupSpec l;
};

SpanningContext make_spanning_context(const Scene& scene);

bool is_reifenberg_competitor(const Scene& scene);
bool is_reifenberg_competitor(const SpanningContext& ctx, const Scene& scene);

bool is_nakauchi_competitor(const Scene& scene);

/// Lemma-style monotonicity probe: substitutes the superset F for E and
/// returns the predicate value (which closure says must stay true).
bool superset_closure_check(const Scene& scene, const CubicalComplex& f);

/// Vertex-level cellular self-map of the grid: every vertex of the domain
/// complex gets an image vertex; a cell maps to the box spanned by its
/// vertex images (per-axis span at most 1).
struct CellularMap {
    std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> vertex_images;

    const std::vector<std::int64_t>& image_vertex(const std::vector<std::int64_t>& v) const;
    /// Image cube of a cell; throws when the vertex images do not span a box.
    Cube image_cube(const CubicalComplex& domain, const Cube& c) const;
    static CellularMap identity_on(const CubicalComplex& domain);
};

struct HomotopyCertificate {
    enum class Kind {
        IdentityOnGammaIntersection, // f = id on E cap gamma
        GammaHomotopy,               // stages: contiguous vertex maps through gamma
    };
    Kind kind = Kind::IdentityOnGammaIntersection;
    std::vector<CellularMap> stages; // GammaHomotopy: f_0 = id, ..., f_T = f
};

/// Image scene of a cellular map with a homotopy certificate; throws
/// std::invalid_argument when the certificate fails, std::logic_error when
/// the image unexpectedly stops being a competitor.
Scene pushforward_competitor(const Scene& scene, const CellularMap& f,
                             const HomotopyCertificate& cert);

/// Elementary sliding moves: a free-face collapse removes the pair
/// (cell, free face); a carve removes one maximal cell.
struct DeformationStep {
    enum class Kind { Collapse, Carve };
    Kind kind = Kind::Carve;
    std::vector<Cube> footprint; // Collapse: {tau, sigma}; Carve: {tau}
    std::vector<Cube> window;    // open cells forming the region U
    bool fixed_gamma = true;
};

struct DeformationTrace {
    std::vector<DeformationStep> steps;
};

struct TraceVerdict {
    bool ok = true;
    std::string violation; // e.g. "gamma-escape"
    std::size_t step = 0;
};

TraceVerdict validate_sliding_deformation(const DeformationTrace& trace, const Scene& scene);

/// Applies a validated trace, returning the deformed scene. Throws when the
/// trace does not validate.
Scene apply_trace(const Scene& scene, const DeformationTrace& trace);

/// Trace-based pushforward (collapse-only traces compose to deformation
/// retractions): validates, applies, and re-checks the predicate.
Scene pushforward_competitor(const Scene& scene, const DeformationTrace& trace);

} // namespace plateau

#endif
