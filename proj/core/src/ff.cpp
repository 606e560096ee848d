#include "plateau/ff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace plateau {

namespace {

double dist(const Point& a, const Point& b)
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double dist_to_points(const Point& p, const std::vector<Point>& pts)
{
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : pts) best = std::min(best, dist(p, q));
    return best;
}

/// The open cell of the grid frame containing p (anchor-resolved by
/// coordinates); fixed axes snap within tol.
std::optional<Cube> open_cell_of(const CubicalComplex& frame, const Point& p, double tol)
{
    int n = frame.ambient_dim();
    double side = to_double(frame.side());
    Cube c;
    c.anchor.resize(n);
    c.axes = 0;
    for (int i = 0; i < n; ++i) {
        double u = (p[i] - to_double(frame.origin()[i])) / side;
        double r = std::round(u);
        if (std::abs(u - r) <= tol / side) {
            c.anchor[i] = static_cast<std::int64_t>(r);
        } else {
            c.anchor[i] = static_cast<std::int64_t>(std::floor(u));
            c.axes |= (1u << i);
        }
    }
    return c;
}

} // namespace

double max_admissible_ell(const std::vector<Point>& e_union_gamma, const Ball& b0,
                          const Covering& beta, int probes_per_axis)
{
    int n = static_cast<int>(b0.center.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(n, 0);
    for (;;) {
        Point x(n);
        for (int i = 0; i < n; ++i) {
            double u = (probes_per_axis == 1) ? 0.5
                                              : static_cast<double>(idx[i]) / (probes_per_axis - 1);
            x[i] = b0.center[i] - 2 * b0.radius + 4 * b0.radius * u;
        }
        if (dist(x, b0.center) <= 2 * b0.radius) {
            bool inside_beta = false;
            for (const Region& r : beta.regions)
                if (r.contains(x)) {
                    inside_beta = true;
                    break;
                }
            if (!inside_beta) best = std::min(best, dist_to_points(x, e_union_gamma));
        }
        int i = 0;
        for (; i < n; ++i) {
            if (++idx[i] < probes_per_axis) break;
            idx[i] = 0;
        }
        if (i == n) break;
    }
    return best / 4.0;
}

CubicalComplex select_far_subcomplex(const CubicalComplex& grid,
                                     const std::vector<Point>& e_union_gamma, double ell,
                                     const Ball& b0, const Covering* beta)
{
    if (ell <= 0) throw std::invalid_argument("select_far_subcomplex: ell must be positive");
    if (grid.diameter_bound() > ell * (1 + 1e-12))
        throw std::invalid_argument("select_far_subcomplex: cell diameter exceeds ell");
    if (beta) {
        double bound = max_admissible_ell(e_union_gamma, b0, *beta);
        if (!(ell < bound)) {
            std::ostringstream os;
            os << "select_far_subcomplex: ell too large for the covering; max admissible ell = "
               << bound;
            throw std::invalid_argument(os.str());
        }
    }

    CubicalComplex out = grid.empty_like();
    std::vector<Cube> picked;
    for (int k = 0; k <= grid.dim(); ++k)
        for (const Cube& c : grid.cells(k)) {
            std::vector<Point> probes = grid.vertex_coords(c);
            probes.push_back(grid.barycenter(c));
            for (const Point& x : probes) {
                if (dist(x, b0.center) > 2 * b0.radius) continue;
                if (dist_to_points(x, e_union_gamma) >= 2 * ell) {
                    picked.push_back(c);
                    break;
                }
            }
        }
    // face closure keeps |L| a complex; closure cells stay at distance
    // >= ell from the set because cell diameters are at most ell
    out.insert_all(picked);
    return out;
}

// ---------------------------------------------------------------------------
// Radial projections

namespace {

struct WorkPoint {
    Point current;
    double weight;
    Point original;
    std::size_t index;
};

Point radial_to_boundary(const CubicalComplex& frame, const Cube& cell, const Point& center,
                         const Point& p, double tol)
{
    int n = frame.ambient_dim();
    auto lo = frame.corner_lo(cell);
    auto hi = frame.corner_hi(cell);
    double t_exit = std::numeric_limits<double>::infinity();
    int hit_axis = -1;
    bool hit_high = false;
    for (int i = 0; i < n; ++i) {
        if (!cell.spans(i)) continue;
        double dir = p[i] - center[i];
        if (std::abs(dir) <= tol) continue;
        double bound = dir > 0 ? to_double(hi[i]) : to_double(lo[i]);
        double t = (bound - center[i]) / dir;
        if (t < t_exit) {
            t_exit = t;
            hit_axis = i;
            hit_high = dir > 0;
        }
    }
    if (hit_axis < 0) throw std::runtime_error("radial projection: point coincides with center");
    Point out(n);
    for (int i = 0; i < n; ++i) out[i] = center[i] + t_exit * (p[i] - center[i]);
    out[hit_axis] = hit_high ? to_double(hi[hit_axis]) : to_double(lo[hit_axis]);
    return out;
}

Point pick_center(const CubicalComplex& frame, const Cube& cell,
                  const std::vector<const WorkPoint*>& occupants, double margin,
                  std::mt19937_64& rng, int tries)
{
    int n = frame.ambient_dim();
    auto lo = frame.corner_lo(cell);
    std::uniform_real_distribution<double> u(0.25, 0.75);
    double side = to_double(frame.side());
    for (int t = 0; t < tries; ++t) {
        Point c(n);
        for (int i = 0; i < n; ++i) {
            c[i] = to_double(lo[i]);
            if (cell.spans(i)) c[i] += side * u(rng);
        }
        double nearest = std::numeric_limits<double>::infinity();
        for (const WorkPoint* w : occupants) nearest = std::min(nearest, dist(c, w->current));
        if (nearest >= margin) return c;
    }
    std::ostringstream os;
    os << "ff_project: center search failed in a cell of dimension " << cell.dim() << " after "
       << tries << " tries";
    throw std::runtime_error(os.str());
}

} // namespace

ProjectionResult ff_project(const MeasuredSet& s, const CubicalComplex& l_sub, int d,
                            const FfOptions& opt)
{
    ProjectionResult res;
    std::mt19937_64 rng(opt.seed);
    double side = to_double(l_sub.side());
    double margin = side * opt.center_margin_factor;

    std::vector<WorkPoint> pts;
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        pts.push_back(WorkPoint{s.samples[i].point, s.samples[i].weight, s.samples[i].point, i});
        res.measure_in += s.samples[i].weight;
    }

    auto occupants_of = [&](const Cube& cell) {
        std::vector<const WorkPoint*> out;
        for (const WorkPoint& w : pts) {
            auto oc = open_cell_of(l_sub, w.current, opt.tol);
            if (oc && *oc == cell) out.push_back(&w);
        }
        return out;
    };

    // descending dimension rounds above d
    for (int k = std::max(l_sub.dim(), d); k > d; --k) {
        for (const Cube& cell : l_sub.cells(k)) {
            auto occ = occupants_of(cell);
            if (occ.empty()) continue;
            Point center = pick_center(l_sub, cell, occ, margin, rng, opt.center_tries);
            res.centers[cell] = center;
            for (WorkPoint& w : pts) {
                auto oc = open_cell_of(l_sub, w.current, opt.tol);
                if (oc && *oc == cell)
                    w.current = radial_to_boundary(l_sub, cell, center, w.current, opt.tol);
            }
        }
    }

    // threshold round in the d-cells
    double tau = opt.tau_factor * std::pow(side, d);
    for (const Cube& cell : l_sub.cells(d)) {
        auto occ = occupants_of(cell);
        if (occ.empty()) continue;
        double mass = 0;
        for (const WorkPoint* w : occ) mass += w->weight;
        if (mass > tau) {
            res.overfull_cells.push_back(cell);
            continue;
        }
        Point center = pick_center(l_sub, cell, occ, margin, rng, opt.center_tries);
        res.centers[cell] = center;
        for (WorkPoint& w : pts) {
            auto oc = open_cell_of(l_sub, w.current, opt.tol);
            if (oc && *oc == cell)
                w.current = radial_to_boundary(l_sub, cell, center, w.current, opt.tol);
        }
    }

    for (const WorkPoint& w : pts) {
        res.map_points.emplace_back(w.original, w.current);
        res.displacement_max = std::max(res.displacement_max, dist(w.original, w.current));
        auto oc = open_cell_of(l_sub, w.current, opt.tol);
        if (oc) {
            res.pushforward_mass_per_cell[*oc] += w.weight;
            if (std::find(res.image_cells.begin(), res.image_cells.end(), *oc) ==
                res.image_cells.end())
                res.image_cells.push_back(*oc);
        }
    }

    if (s.ordered_path && d == 1) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Point& a = pts[i].current;
            const Point& b = pts[i + 1].current;
            Point mid(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) mid[j] = 0.5 * (a[j] + b[j]);
            auto oc = open_cell_of(l_sub, mid, opt.tol);
            if (oc) res.polyline_length_per_cell[*oc] += dist(a, b);
        }
    }
    return res;
}

Point apply_projection(const ProjectionResult& proj, const CubicalComplex& l_sub, int d,
                       const Point& p)
{
    (void)d;
    Point cur = p;
    for (int guard = 0; guard <= l_sub.ambient_dim() + 1; ++guard) {
        auto oc = open_cell_of(l_sub, cur, 1e-9);
        if (!oc || !l_sub.contains(*oc)) return cur;
        auto it = proj.centers.find(*oc);
        if (it == proj.centers.end()) return cur;
        cur = radial_to_boundary(l_sub, *oc, it->second, cur, 1e-9);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// beta_infinity and grid translation

bool BetaInfinity::contains(const Point& p) const
{
    if (in_e_union_gamma && in_e_union_gamma(p)) return false;
    int closures = 0;
    for (const Region& r : regions)
        if (r.closure_contains(p, tol)) ++closures;
    // p belongs to some d-fold closed intersection iff at least d closures
    // contain it
    return closures < d;
}

BetaInfinity build_beta_infinity(const Covering& beta, int d,
                                 std::function<bool(const Point&)> in_e_union_gamma)
{
    BetaInfinity out;
    out.regions = beta.regions;
    out.d = d;
    out.in_e_union_gamma = std::move(in_e_union_gamma);
    return out;
}

namespace {

std::vector<Point> sphere_probe_points(const Sphere& s)
{
    std::vector<Point> out;
    if (s.empty()) return out;
    if (s.k == 0) {
        std::vector<double> up(s.basis.size(), 0.0), dn(s.basis.size(), 0.0);
        if (!s.basis.empty()) {
            up[0] = 1;
            dn[0] = -1;
        }
        out.push_back(s.chart_point(up));
        out.push_back(s.chart_point(dn));
    } else if (s.k == 1) {
        const int m = 128;
        for (int i = 0; i < m; ++i) {
            double t = 2 * M_PI * i / m;
            out.push_back(s.chart_point({std::cos(t), std::sin(t)}));
        }
    } else {
        // spherical Fibonacci points in the chart
        const int m = 256;
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < m; ++i) {
            double z = 1.0 - 2.0 * (i + 0.5) / m;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = golden * i;
            std::vector<double> unit{r * std::cos(th), r * std::sin(th), z};
            unit.resize(s.basis.size(), 0.0);
            out.push_back(s.chart_point(unit));
        }
    }
    return out;
}

double box_distance(const std::vector<double>& lo, const std::vector<double>& hi, const Point& p)
{
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double c = std::clamp(p[i], lo[i], hi[i]);
        s += (p[i] - c) * (p[i] - c);
    }
    return std::sqrt(s);
}

} // namespace

namespace {

/// Distance from a point to the dim-<=k skeleton of the full translated
/// lattice; the truncated grid skeleton is a subset, so this is a
/// conservative clearance.
double lattice_skeleton_distance(const Point& p, double side, const std::vector<double>& origin,
                                 int k)
{
    std::size_t n = p.size();
    std::vector<double> c2(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = (p[i] - origin[i]) / side;
        double frac = t - std::floor(t);
        double c = side * std::min(frac, 1.0 - frac);
        c2[i] = c * c;
    }
    // a k-cell runs free along k axes: drop the k largest penalties
    std::sort(c2.begin(), c2.end(), std::greater<double>());
    double s = 0;
    for (std::size_t i = k; i < n; ++i) s += c2[i];
    return std::sqrt(s);
}

} // namespace

GridTranslation translate_grid(const CubicalComplex& k, int d,
                               const std::vector<Sphere>& obstacles, std::uint64_t seed,
                               int max_attempts, double min_clearance)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> pick(0, (1 << 20) - 1);
    int n = k.ambient_dim();

    std::vector<Point> probes;
    for (const Sphere& s : obstacles)
        for (Point& p : sphere_probe_points(s)) probes.push_back(std::move(p));

    double side = to_double(k.side());
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        std::vector<Rat> offset(n);
        if (!(attempt == 1 && obstacles.empty()))
            for (int i = 0; i < n; ++i) offset[i] = k.side() * Rat(pick(rng), 1 << 20);
        std::vector<double> origin(n);
        for (int i = 0; i < n; ++i) origin[i] = to_double(k.origin()[i] + offset[i]);
        double clearance = std::numeric_limits<double>::infinity();
        for (const Point& p : probes)
            clearance =
                std::min(clearance, lattice_skeleton_distance(p, side, origin, d - 1));
        if (clearance > min_clearance) {
            GridTranslation out;
            out.offset = offset;
            out.clearance = clearance;
            out.attempts = attempt;
            return out;
        }
    }
    throw std::runtime_error("translate_grid: attempts exhausted (degenerate certificates?)");
}

// ---------------------------------------------------------------------------
// Pipeline

Step2Result step2_pipeline(const std::vector<Point>& e_union_gamma_samples,
                           const MeasuredSet& ek_stray, const Covering& beta, const Ball& b0,
                           int d, const Step2Options& opt)
{
    Step2Result out;
    int n = static_cast<int>(b0.center.size());

    auto rationalize = [](double x) {
        return Rat(static_cast<long long>(std::llround(x * (1 << 20))), 1 << 20);
    };
    RatBox box;
    box.lo.resize(n);
    box.hi.resize(n);
    for (int i = 0; i < n; ++i) {
        box.lo[i] = rationalize(b0.center[i] - 2 * b0.radius) - 2 * opt.side;
        box.hi[i] = rationalize(b0.center[i] + 2 * b0.radius) + 2 * opt.side;
    }
    CubicalComplex base =
        CubicalComplex::grid(box, opt.side, std::vector<Rat>(n, Rat(0)));

    std::vector<Sphere> obstacles;
    for (const auto& [key, spheres] : beta.boundary_certificates)
        if (static_cast<int>(key.size()) == d)
            for (const Sphere& s : spheres) obstacles.push_back(s);
    out.translation = translate_grid(base, d, obstacles, opt.seed);
    out.grid = base.translated(out.translation.offset);

    double ell = out.grid.diameter_bound();
    out.l_subcomplex = select_far_subcomplex(out.grid, e_union_gamma_samples, ell, b0, &beta);

    out.projection = ff_project(ek_stray, out.l_subcomplex, d,
                                FfOptions{0.01, 64, opt.tau_factor, opt.seed, opt.tol});
    if (!out.projection.overfull_cells.empty()) {
        out.k_large_enough = false;
        out.failure = "k not large enough: stray mass above the projection threshold";
    }

    // value captures: the result object is returned by value, so the
    // closures may not alias its members
    int dd = d;
    out.phi = [lsub = out.l_subcomplex, proj = out.projection, dd](const Point& p) {
        return apply_projection(proj, lsub, dd, p);
    };

    std::vector<Point> eg = e_union_gamma_samples;
    double tol = opt.tol;
    out.beta_infinity = build_beta_infinity(beta, d, [eg, tol](const Point& p) {
        return dist_to_points(p, eg) <= tol;
    });

    // phi = id on E u Gamma by construction: the far subcomplex misses the set
    for (const Point& p : e_union_gamma_samples) {
        Point q = out.phi(p);
        if (dist(p, q) > opt.tol) {
            out.k_large_enough = false;
            out.failure = "phi moved a point of E union Gamma";
            return out;
        }
    }

    for (const auto& s : ek_stray.samples) out.phi_ek_samples.push_back(out.phi(s.point));

    // the image of E_k must land inside beta_infinity or a beta region
    for (const Point& q : out.phi_ek_samples) {
        bool covered = out.beta_infinity.contains(q);
        for (const Region& r : beta.regions)
            if (r.contains(q)) covered = true;
        if (!covered) {
            out.k_large_enough = false;
            out.failure = "projected stray point escaped the covering";
            return out;
        }
    }

    // pulled-back covering over N + {infinity}
    std::size_t nbeta = beta.size();
    out.gamma_cover.count = nbeta + 1;
    out.gamma_cover.member = [regions = beta.regions, phi = out.phi,
                              binf = out.beta_infinity, nbeta](std::size_t j, const Point& p) {
        Point q = phi(p);
        if (j < nbeta) return regions[j].contains(q);
        return binf.contains(q);
    };
    out.gamma_cover.ambient_probes = as_indexed(beta).ambient_probes;
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int t = 0; t < opt.mc_probes; ++t) {
        Point p(n);
        for (int i = 0; i < n; ++i)
            p[i] = to_double(box.lo[i]) + u01(rng) * (to_double(box.hi[i]) - to_double(box.lo[i]));
        out.gamma_cover.ambient_probes.push_back(p);
    }

    // gamma_j and beta_j agree on E u Gamma; gamma_infinity misses it
    for (const Point& p : e_union_gamma_samples) {
        for (std::size_t j = 0; j < nbeta; ++j)
            if (out.gamma_cover.member(j, p) != beta.regions[j].contains(p)) {
                out.k_large_enough = false;
                out.failure = "pullback disagrees with beta on E union Gamma";
                return out;
            }
        if (out.gamma_cover.member(nbeta, p)) {
            out.k_large_enough = false;
            out.failure = "gamma_infinity meets E union Gamma";
            return out;
        }
    }
    return out;
}

} // namespace plateau
