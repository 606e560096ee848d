#ifndef PLATEAU_FF_HPP
#define PLATEAU_FF_HPP

#include "plateau/complex.hpp"
#include "plateau/covering.hpp"
#include "plateau/measured_set.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>

namespace plateau {

/// Subcomplex selection around E u Gamma: cells with a point of the closed
/// double ball at distance >= 2*ell from the set. When `beta` is given, the
/// smallness condition d(x, E u Gamma) > 4*ell outside the covering is
/// verified; violations throw with the maximal admissible ell.
CubicalComplex select_far_subcomplex(const CubicalComplex& grid,
                                     const std::vector<Point>& e_union_gamma, double ell,
                                     const Ball& b0, const Covering* beta = nullptr);

/// Largest ell compatible with the smallness condition for the covering.
double max_admissible_ell(const std::vector<Point>& e_union_gamma, const Ball& b0,
                          const Covering& beta, int probes_per_axis = 24);

struct FfOptions {
    double center_margin_factor = 0.01; // epsilon_c = side * factor
    int center_tries = 64;
    double tau_factor = 0.5;            // per-d-cell threshold = factor * side^d
    std::uint64_t seed = 0;
    double tol = 1e-9;
};

struct ProjectionResult {
    std::vector<std::pair<Point, Point>> map_points; // input -> image
    std::vector<Cube> image_cells;
    double measure_in = 0;
    std::map<Cube, double> pushforward_mass_per_cell; // weight mass landing per cell
    std::map<Cube, double> polyline_length_per_cell;  // d = 1 ordered inputs only
    double displacement_max = 0;
    std::map<Cube, Point> centers;   // radial centers actually used
    std::vector<Cube> overfull_cells; // d-cells whose mass stayed above tau
};

/// Iterated radial projection of the sample cloud into the skeleton of L:
/// points leave every open cell of dimension > d, and d-cells whose sample
/// mass is at most tau are emptied into the (d-1)-skeleton.
ProjectionResult ff_project(const MeasuredSet& s, const CubicalComplex& l_sub, int d,
                            const FfOptions& opt = {});

/// Evaluates the projection map on an arbitrary point by replaying the
/// recorded radial centers (identity off the recorded cells).
Point apply_projection(const ProjectionResult& proj, const CubicalComplex& l_sub, int d,
                       const Point& p);

/// Membership predicate for beta_infinity = complement of
/// (E u Gamma) union (all d-fold closed intersections of beta).
struct BetaInfinity {
    std::vector<Region> regions; // owned copy of the covering regions
    int d = 1;
    std::function<bool(const Point&)> in_e_union_gamma;
    double tol = 1e-9;

    bool contains(const Point& p) const;
};

BetaInfinity build_beta_infinity(const Covering& beta, int d,
                                 std::function<bool(const Point&)> in_e_union_gamma);

struct GridTranslation {
    std::vector<Rat> offset;
    double clearance = 0;
    int attempts = 0;
};

/// Random rational offset whose translate of the (d-1)-skeleton clears every
/// obstacle sphere; throws after `max_attempts` failures.
GridTranslation translate_grid(const CubicalComplex& k, int d,
                               const std::vector<Sphere>& obstacles, std::uint64_t seed,
                               int max_attempts = 64, double min_clearance = 1e-7);

struct Step2Options {
    Rat side = Rat(1, 4);
    double tau_factor = 0.5;
    std::uint64_t seed = 0;
    int mc_probes = 512;
    double tol = 1e-9;
};

struct Step2Result {
    CubicalComplex grid;          // translated grid K
    CubicalComplex l_subcomplex;  // selection around E u Gamma
    GridTranslation translation;
    ProjectionResult projection;
    BetaInfinity beta_infinity;
    bool k_large_enough = true;
    std::function<Point(const Point&)> phi;
    IndexedCover gamma_cover;     // pulled back over beta indices + infinity
    std::vector<Point> phi_ek_samples;
    std::string failure;          // set when k_large_enough is false
};

/// Steps 2-3 composition: grid translation, far-subcomplex selection,
/// projection of the stray mass, beta_infinity, and the pulled-back
/// covering gamma_j = phi^{-1}(beta_j) over N + {infinity}.
Step2Result step2_pipeline(const std::vector<Point>& e_union_gamma_samples,
                           const MeasuredSet& ek_stray, const Covering& beta, const Ball& b0,
                           int d, const Step2Options& opt = {});

} // namespace plateau

#endif
