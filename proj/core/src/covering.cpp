#include "plateau/covering.hpp"

#include <algorithm>
#include <cmath>
#include <set>
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

} // namespace

bool Ball::contains(const Point& p) const { return dist(p, center) < radius; }

bool Ball::closure_contains(const Point& p, double tol) const
{
    return dist(p, center) <= radius + tol;
}

double Ball::signed_dist(const Point& p) const { return dist(p, center) - radius; }

bool Region::contains(const Point& p) const
{
    for (const Ball& b : balls)
        if (b.contains(p)) return true;
    return false;
}

bool Region::closure_contains(const Point& p, double tol) const
{
    for (const Ball& b : balls)
        if (b.closure_contains(p, tol)) return true;
    return false;
}

double Region::dist(const Point& p) const
{
    double best = std::numeric_limits<double>::infinity();
    for (const Ball& b : balls) best = std::min(best, std::max(0.0, b.signed_dist(p)));
    return best;
}

IndexedCover as_indexed(const Covering& c)
{
    IndexedCover out;
    out.count = c.size();
    const Covering* cp = &c; // caller keeps the covering alive
    out.member = [cp](std::size_t j, const Point& p) { return cp->regions[j].contains(p); };
    for (const Region& r : c.regions)
        for (const Ball& b : r.balls) out.ambient_probes.push_back(b.center);
    for (const auto& [s, w] : c.witnesses) out.ambient_probes.push_back(w);
    return out;
}

// ---------------------------------------------------------------------------
// Step 1 construction

namespace {

std::vector<std::vector<int>> subsets_up_to(int count, int max_size)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) >= max_size) return;
        for (int i = start; i < count; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Lower bound on dist(x, intersection of the closed regions of s): the
/// intersection is a union of ball-tuple lenses; a tuple with two disjoint
/// balls is empty, otherwise dist(x, lens) >= max_i dist(x, ball_i).
double intersection_dist_lower_bound(const std::vector<Region>& regions,
                                     const std::vector<int>& s, const Point& x)
{
    double best = std::numeric_limits<double>::infinity();
    std::vector<const Ball*> tuple(s.size());
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == s.size()) {
            double m = 0;
            for (const Ball* b : tuple) m = std::max(m, std::max(0.0, b->signed_dist(x)));
            best = std::min(best, m);
            return;
        }
        for (const Ball& b : regions[s[idx]].balls) {
            bool empty = false;
            for (std::size_t t = 0; t < idx; ++t)
                if (dist(b.center, tuple[t]->center) > b.radius + tuple[t]->radius) empty = true;
            if (empty) continue;
            tuple[idx] = &b;
            self(self, idx + 1);
        }
    };
    rec(rec, 0);
    return best;
}

// radii near which the new boundary sphere would meet a certificate sphere
// non-generically
std::vector<double> bad_radii_against(const Sphere& s, const Point& x)
{
    if (s.empty()) return {};
    if (s.k >= 1) return excluded_radii(s, x);
    // 0-sphere: avoid passing through either point
    std::vector<double> out;
    std::vector<double> unit_pos(s.basis.size(), 0.0), unit_neg(s.basis.size(), 0.0);
    if (!s.basis.empty()) {
        unit_pos[0] = 1.0;
        unit_neg[0] = -1.0;
    }
    out.push_back(dist(s.chart_point(unit_pos), x));
    out.push_back(dist(s.chart_point(unit_neg), x));
    return out;
}

} // namespace

Covering build_step1_covering(const std::vector<Point>& f_samples, const std::vector<Ball>& alpha,
                              std::vector<Ball> seed_balls, const Step1Options& opt)
{
    if (f_samples.empty()) throw std::invalid_argument("step1: no samples");

    // Refinement seed: balls centered at uncovered samples with 2B inside
    // one alpha member.
    if (seed_balls.empty()) {
        std::vector<bool> covered(f_samples.size(), false);
        for (std::size_t i = 0; i < f_samples.size(); ++i) {
            if (covered[i]) continue;
            const Point& x = f_samples[i];
            double best = 0;
            for (const Ball& a : alpha) {
                double room = (a.radius - dist(x, a.center)) / 2;
                best = std::max(best, room);
            }
            if (best <= 0)
                throw std::invalid_argument("step1: alpha does not cover a sample point");
            Ball b{x, std::min(best * 0.99, opt.seed_radius_cap)};
            seed_balls.push_back(b);
            for (std::size_t t = 0; t < f_samples.size(); ++t)
                if (dist(f_samples[t], x) < b.radius) covered[t] = true;
        }
    } else {
        for (const Ball& b : seed_balls) {
            bool fits = false;
            for (const Ball& a : alpha)
                if (dist(b.center, a.center) + 2 * b.radius <= a.radius) fits = true;
            if (!fits) throw std::invalid_argument("step1: seed ball 2B not inside any alpha");
        }
    }

    Covering cov;
    std::vector<Sphere> all_cert_spheres;

    for (std::size_t j = 0; j < seed_balls.size(); ++j) {
        const Ball& bj = seed_balls[j];
        // samples this region must cover
        std::vector<const Point*> targets;
        for (const Point& p : f_samples)
            if (dist(p, bj.center) <= bj.radius + opt.tol) targets.push_back(&p);

        // forbidden closed intersections: subsets of earlier regions whose
        // closure misses all the targets. Only minimal forbidden subsets
        // constrain the radius (avoiding a subset avoids every superset).
        std::vector<std::vector<int>> forbidden;
        if (j > 0) {
            std::vector<std::vector<int>> all;
            for (auto& s : subsets_up_to(static_cast<int>(j), opt.max_subset_size)) {
                bool witnessed = false;
                for (const Point* p : targets) {
                    bool in_all = true;
                    for (int i : s)
                        if (!cov.regions[i].closure_contains(*p, opt.tol)) in_all = false;
                    if (in_all) {
                        witnessed = true;
                        break;
                    }
                }
                if (!witnessed) all.push_back(s);
            }
            for (const auto& s : all) {
                bool has_smaller = false;
                for (const auto& t : all) {
                    if (t.size() >= s.size()) continue;
                    if (std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                        has_smaller = true;
                        break;
                    }
                }
                if (!has_smaller) forbidden.push_back(s);
            }
        }

        Region region;
        for (const Point* px : targets) {
            const Point& x = *px;
            if (region.contains(x)) continue;
            double rho = (2 * bj.radius - dist(x, bj.center)) * 0.999;
            // keep the closed ball away from forbidden closed intersections
            for (const auto& s : forbidden) {
                double away = intersection_dist_lower_bound(cov.regions, s, x);
                if (std::isfinite(away)) rho = std::min(rho, away * 0.9);
            }
            if (rho <= 0) {
                std::ostringstream os;
                os << "step1: radius search failed at region " << j;
                throw std::runtime_error(os.str());
            }
            // shrink until clear of every certificate sphere's bad radii
            int tries = 0;
            for (;;) {
                bool clear = true;
                for (const Sphere& s : all_cert_spheres)
                    for (double bad : bad_radii_against(s, x))
                        if (std::abs(rho - bad) <= opt.tol * (1 + bad)) clear = false;
                if (clear) break;
                rho *= opt.shrink;
                if (++tries > opt.max_radius_tries) {
                    std::ostringstream os;
                    os << "step1: radius schedule exhausted at region " << j;
                    throw std::runtime_error(os.str());
                }
            }
            region.balls.push_back(Ball{x, rho});
        }
        if (region.balls.empty()) {
            // region must still cover F cap closure(B_j); with no targets the
            // region is allowed to be a copy of the seed ball
            region.balls.push_back(Ball{bj.center, bj.radius});
        }

        // certificates involving the new index
        std::map<std::vector<int>, std::vector<Sphere>> fresh;
        std::vector<Sphere> own;
        for (const Ball& b : region.balls) own.push_back(Sphere::full_sphere(b.center, b.radius));
        fresh[{static_cast<int>(j)}] = own;
        for (auto& [s, spheres] : cov.boundary_certificates) {
            if (static_cast<int>(s.size()) + 1 > opt.max_subset_size) continue;
            std::vector<Sphere> reduced;
            for (const Sphere& sigma : spheres) {
                if (sigma.empty()) continue;
                for (const Ball& b : region.balls) {
                    if (sigma.k >= 1) {
                        Sphere r = intersection_reduction(sigma, b.center, b.radius, opt.tol);
                        if (!r.empty()) reduced.push_back(r);
                    }
                    // 0-spheres: the radius schedule kept the boundary away
                }
            }
            std::vector<int> key = s;
            key.push_back(static_cast<int>(j));
            fresh[key] = std::move(reduced);
        }
        for (auto& [key, spheres] : fresh) {
            for (const Sphere& s : spheres) all_cert_spheres.push_back(s);
            cov.boundary_certificates[key] = std::move(spheres);
        }
        cov.regions.push_back(std::move(region));
    }

    // nonemptiness witnesses over the sample set
    int count = static_cast<int>(cov.regions.size());
    for (auto& s : subsets_up_to(count, opt.max_subset_size + 1)) {
        for (const Point& p : f_samples) {
            bool in_all = true;
            for (int i : s)
                if (!cov.regions[i].contains(p)) in_all = false;
            if (in_all) {
                cov.witnesses[s] = p;
                break;
            }
        }
    }

    // bounded multiplicity report
    for (const Point& p : f_samples) {
        int m = 0;
        for (const Region& r : cov.regions)
            if (r.contains(p)) ++m;
        cov.multiplicity_bound = std::max(cov.multiplicity_bound, m);
    }
    return cov;
}

// ---------------------------------------------------------------------------
// Nerves

Nerve nerve_over_points(const IndexedCover& cover, const std::vector<Point>& pts, int max_dim)
{
    Nerve out;
    std::map<std::vector<int>, Point> witness;
    for (const Point& p : pts) {
        std::vector<int> idx;
        for (std::size_t j = 0; j < cover.count; ++j)
            if (cover.member(j, p)) idx.push_back(static_cast<int>(j));
        if (idx.empty()) continue;
        // all subsets of size <= max_dim+1
        std::vector<int> cur;
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if (!cur.empty() && !witness.count(cur)) witness[cur] = p;
            if (static_cast<int>(cur.size()) >= max_dim + 1) return;
            for (std::size_t i = start; i < idx.size(); ++i) {
                cur.push_back(idx[i]);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
    }
    std::vector<SimplicialComplex::Simplex> simplexes;
    for (auto& [s, w] : witness) simplexes.push_back(s);
    out.complex = SimplicialComplex::from_simplexes(simplexes);
    out.witness_points = std::move(witness);
    return out;
}

Nerve nerve(const Covering& cover, const std::function<bool(const Point&)>& reference,
            const std::vector<Point>& probes, int max_dim)
{
    std::vector<Point> candidates;
    for (const auto& [s, w] : cover.witnesses) candidates.push_back(w);
    for (const Point& p : probes) candidates.push_back(p);
    std::vector<Point> filtered;
    for (const Point& p : candidates)
        if (!reference || reference(p)) filtered.push_back(p);
    return nerve_over_points(as_indexed(cover), filtered, max_dim);
}

bool nerve_refinement_functorial(const Nerve& fine, const Nerve& coarse,
                                 const std::vector<int>& iota)
{
    for (int k = 0; k <= fine.complex.dim(); ++k)
        for (const auto& s : fine.complex.cells(k)) {
            std::vector<int> img;
            for (int v : s) img.push_back(iota[v]);
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            if (!coarse.complex.contains(img)) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Nerve projection

std::vector<Point> complex_sample_points(const CubicalComplex& k)
{
    std::vector<Point> out;
    for (int d = 0; d <= k.dim(); ++d)
        for (const Cube& c : k.cells(d)) {
            for (const auto& v : k.vertex_coords(c)) out.push_back(v);
            out.push_back(k.barycenter(c));
        }
    return out;
}

namespace {

// all cells of the complex whose closure contains the vertex v
std::vector<Cube> closed_star(const CubicalComplex& k, const Cube& v)
{
    std::vector<Cube> out;
    for (int d = 0; d <= k.dim(); ++d)
        for (const Cube& c : k.cells(d)) {
            if (c == v) {
                out.push_back(c);
                continue;
            }
            for (const Cube& f : CubicalComplex::all_faces(c))
                if (f == v) {
                    out.push_back(c);
                    break;
                }
        }
    return out;
}

std::optional<int> star_region(const CubicalComplex& gamma, const Cube& v,
                               const IndexedCover& cover)
{
    std::vector<Point> samples;
    for (const Cube& c : closed_star(gamma, v)) {
        for (const auto& p : gamma.vertex_coords(c)) samples.push_back(p);
        samples.push_back(gamma.barycenter(c));
    }
    for (std::size_t j = 0; j < cover.count; ++j) {
        bool all = true;
        for (const Point& p : samples)
            if (!cover.member(j, p)) {
                all = false;
                break;
            }
        if (all) return static_cast<int>(j);
    }
    return std::nullopt;
}

} // namespace

NerveProjection project_cycles_to_nerve(const CubicalComplex& gamma,
                                        const std::vector<IntVec>& cycles, int k,
                                        const IndexedCover& cover, int max_subdivisions)
{
    NerveProjection out;
    out.refined_gamma = gamma;
    std::vector<IntVec> refined = cycles;

    for (int round = 0;; ++round) {
        out.vertex_region.assign(out.refined_gamma.cell_count(0), -1);
        bool all_fit = true;
        for (std::size_t i = 0; i < out.refined_gamma.cell_count(0); ++i) {
            auto r = star_region(out.refined_gamma, out.refined_gamma.cells(0)[i], cover);
            if (!r) {
                all_fit = false;
                break;
            }
            out.vertex_region[i] = *r;
        }
        if (all_fit) break;
        if (round >= max_subdivisions)
            throw std::runtime_error("nerve projection: star refinement did not stabilize");
        CubicalComplex next = out.refined_gamma.subdivided();
        for (auto& c : refined) c = subdivide_cubical_chain(out.refined_gamma, k, c, next);
        out.refined_gamma = next;
        ++out.subdivisions;
    }

    for (const IntVec& cycle : refined) {
        SimplexChain chain;
        const auto& cells = out.refined_gamma.cells(k);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j >= cycle.size() || cycle[j] == 0) continue;
            for (auto& [path, sign] : kuhn_simplices(cells[j])) {
                std::vector<int> tuple;
                bool degenerate = false;
                for (const auto& anchor : path) {
                    int region = out.vertex_region[out.refined_gamma.index_of(Cube{anchor, 0})];
                    tuple.push_back(region);
                }
                // sort with parity; repeated regions collapse the simplex
                int parity = 1;
                for (std::size_t a = 0; a < tuple.size() && !degenerate; ++a)
                    for (std::size_t b = a + 1; b < tuple.size(); ++b) {
                        if (tuple[a] == tuple[b]) {
                            degenerate = true;
                            break;
                        }
                    }
                if (degenerate) continue;
                std::vector<int> sorted = tuple;
                for (std::size_t a = 0; a < sorted.size(); ++a)
                    for (std::size_t b = a + 1; b < sorted.size(); ++b)
                        if (sorted[a] > sorted[b]) {
                            std::swap(sorted[a], sorted[b]);
                            parity = -parity;
                        }
                chain[sorted] += cycle[j] * sign * parity;
            }
        }
        std::erase_if(chain, [](const auto& kv) { return kv.second == 0; });
        out.projected.push_back(std::move(chain));
    }
    return out;
}

IntVec chain_to_vector(const SimplexChain& chain, const SimplicialComplex& complex, int k)
{
    IntVec out(complex.cell_count(k), Int(0));
    for (const auto& [s, c] : chain) {
        if (c == 0) continue;
        if (static_cast<int>(s.size()) != k + 1)
            throw std::invalid_argument("chain_to_vector: degree mismatch");
        out[complex.index_of(s)] = c;
    }
    return out;
}

// ---------------------------------------------------------------------------
// General covering verification

GeneralCoveringReport verify_general_covering(const IndexedCover& cover,
                                              const std::vector<Point>& e_union_gamma_samples,
                                              const std::vector<Point>& ek_samples,
                                              const CubicalComplex& gamma,
                                              const std::vector<IntVec>& l_cycles, int d,
                                              const CoefficientGroup& g)
{
    GeneralCoveringReport rep;

    NerveProjection proj = project_cycles_to_nerve(gamma, l_cycles, d - 1, cover);
    rep.gamma_subdivisions = proj.subdivisions;

    std::vector<Point> gamma_pts = complex_sample_points(proj.refined_gamma);
    std::vector<Point> eug_pts = gamma_pts;
    eug_pts.insert(eug_pts.end(), e_union_gamma_samples.begin(), e_union_gamma_samples.end());
    std::vector<Point> ekg_pts = eug_pts;
    ekg_pts.insert(ekg_pts.end(), ek_samples.begin(), ek_samples.end());

    rep.k_gamma = nerve_over_points(cover, gamma_pts, d);
    rep.k_eug = nerve_over_points(cover, eug_pts, d);
    rep.k_ekg = nerve_over_points(cover, ekg_pts, d);

    // axiom 1: the covering contains E_k union Gamma
    rep.covers_ek = true;
    for (const Point& p : ekg_pts) {
        bool covered = false;
        for (std::size_t j = 0; j < cover.count && !covered; ++j) covered = cover.member(j, p);
        if (!covered) {
            rep.covers_ek = false;
            rep.failure = "uncovered-sample";
            return rep;
        }
    }

    // axiom 2: ambient (d+1)-fold intersections must be witnessed in E u Gamma
    std::vector<Point> ambient = cover.ambient_probes;
    ambient.insert(ambient.end(), ekg_pts.begin(), ekg_pts.end());
    Nerve ambient_nerve = nerve_over_points(cover, ambient, d);
    rep.axiom2 = true;
    for (const auto& s : ambient_nerve.complex.cells(d)) {
        if (!rep.k_eug.complex.contains(s)) {
            rep.axiom2 = false;
            rep.bad_subset = s;
            rep.failure = "ambient-d-simplex-missing-from-E";
            return rep;
        }
    }

    // same d-simplexes
    rep.equal_d_simplexes = rep.k_eug.complex.cells(d) == rep.k_ekg.complex.cells(d);
    if (!rep.equal_d_simplexes) {
        rep.failure = "d-simplex-sets-differ";
        return rep;
    }

    // j_gamma* injective on H_{d-1}
    auto p_eug = std::make_shared<HomologyPresentation>(homology(rep.k_eug.complex, d - 1, g));
    auto p_ekg = std::make_shared<HomologyPresentation>(homology(rep.k_ekg.complex, d - 1, g));
    auto j_map = induced_from_chain_map(
        p_eug, p_ekg, inclusion_chain_map(rep.k_eug.complex, rep.k_ekg.complex, d - 1));
    rep.j_injective = is_injective(j_map);
    if (!rep.j_injective) {
        rep.failure = "j-not-injective";
        return rep;
    }

    // i_gamma* vanishes on the projected subgroup
    rep.i_gamma_zero_on_l = true;
    for (const SimplexChain& chain : proj.projected) {
        IntVec vec = chain_to_vector(chain, rep.k_eug.complex, d - 1);
        if (!p_eug->class_is_zero(vec)) {
            rep.i_gamma_zero_on_l = false;
            rep.failure = "projected-L-class-survives";
            return rep;
        }
    }

    rep.ok = true;
    return rep;
}

} // namespace plateau
