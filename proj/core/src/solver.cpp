#include "plateau/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plateau {

namespace {

struct CellEnergyCache {
    const CubicalComplex* grid;
    const Integrand* ig;
    int d;
    std::map<Cube, double> values;

    double operator()(const Cube& c)
    {
        auto it = values.find(c);
        if (it != values.end()) return it->second;
        CubicalComplex one = grid->empty_like();
        one.insert_with_faces(c);
        MeasuredSet ms = MeasuredSet::from_cells(one, d);
        double v = energy(ms, *ig).total;
        values[c] = v;
        return v;
    }
};

double objective(const Scene& s, MinimizeMode mode, CellEnergyCache& cache)
{
    double total = 0;
    for (const Cube& c : s.competitor.cells(s.d)) {
        if (mode == MinimizeMode::WithoutFreeBoundary && s.gamma.contains(c)) continue;
        total += cache(c);
    }
    return total;
}

struct Move {
    std::vector<Cube> removals; // carved cells, highest dimension first
    std::vector<Cube> additions;
    double delta = 0;
    double primary_energy = 0; // for the largest-energy-cell-first order
    std::string label;
};

std::vector<Cube> shared_face_neighbors(const CubicalComplex& grid, const CubicalComplex& around,
                                        int d)
{
    // grid d-cells sharing a (d-1)-face with `around`
    std::set<Cube> member(around.cells(d).begin(), around.cells(d).end());
    std::set<Cube> out;
    std::set<Cube> wanted_faces(around.cells(d - 1).begin(), around.cells(d - 1).end());
    for (const Cube& c : grid.cells(d)) {
        if (member.count(c)) continue;
        for (auto& [f, sign] : CubicalComplex::boundary_faces(c)) {
            (void)sign;
            if (wanted_faces.count(f)) {
                out.insert(c);
                break;
            }
        }
    }
    return {out.begin(), out.end()};
}

bool cell_lex_less(const Cube& a, const Cube& b)
{
    if (a.anchor != b.anchor) return a.anchor < b.anchor;
    return a.axes < b.axes;
}

} // namespace

MinimizeResult minimize(const MinimizationRun& run, int budget)
{
    if (budget <= 0) throw std::invalid_argument("minimize: budget must be positive");
    Scene scene = run.scene0;
    scene.validate();

    CubicalComplex confine =
        run.confinement.total_cells() > 0 ? run.confinement : scene.grid;
    if (!scene.competitor.is_subcomplex_of(confine))
        throw std::invalid_argument("minimize: scene0 leaves the confinement region");

    SpanningContext ctx = make_spanning_context(scene);
    if (!is_reifenberg_competitor(ctx, scene))
        throw std::invalid_argument("minimize: scene0 is not a competitor");

    CellEnergyCache cache{&scene.grid, &run.energy, scene.d};
    MinimizeResult res;
    res.scene = scene;
    res.energy = objective(scene, run.mode, cache);
    std::mt19937_64 rng(run.seed); // reserved for tie shuffling; order is deterministic

    auto try_move = [&](const Move& mv) -> bool {
        Scene candidate = res.scene;
        // additions are superset steps (always predicate-safe), removals are
        // carve steps validated as a sliding trace
        if (!mv.additions.empty()) {
            CubicalComplex enlarged = candidate.competitor;
            for (const Cube& c : mv.additions) {
                if (!confine.contains(c) || !scene.grid.contains(c)) return false;
                enlarged.insert_with_faces(c);
            }
            if (!enlarged.is_subcomplex_of(confine)) return false;
            candidate.competitor = enlarged;
        }
        if (!mv.removals.empty()) {
            DeformationTrace trace;
            for (const Cube& c : mv.removals) {
                DeformationStep st;
                st.kind = DeformationStep::Kind::Carve;
                st.footprint = {c};
                st.window = {c};
                for (const Cube& f : CubicalComplex::all_faces(c)) st.window.push_back(f);
                st.fixed_gamma = !scene.gamma.contains(c);
                trace.steps.push_back(std::move(st));
            }
            if (!validate_sliding_deformation(trace, candidate).ok) return false;
            candidate = apply_trace(candidate, trace);
        }
        if (run.mode == MinimizeMode::WithoutFreeBoundary) {
            // keep the boundary present so the pair (gamma, E u gamma) is
            // unchanged by bookkeeping moves on gamma cells
        }
        if (!is_reifenberg_competitor(ctx, candidate)) return false;
        double e = objective(candidate, run.mode, cache);
        if (e > res.energy + 1e-12) return false;
        res.scene = std::move(candidate);
        res.energy = e;
        res.trace.push_back(TraceEntry{e, mv.label, res.scene.competitor.cell_count(scene.d)});
        ++res.accepted_moves;
        return true;
    };

    auto masked_energy = [&](const Cube& c) {
        if (run.mode == MinimizeMode::WithoutFreeBoundary && scene.gamma.contains(c)) return 0.0;
        return cache(c);
    };

    while (res.accepted_moves < static_cast<std::size_t>(budget)) {
        const CubicalComplex& e = res.scene.competitor;
        int d = scene.d;

        // improving carves, largest energy first
        std::vector<Move> improving;
        for (const Cube& c : e.cells(d)) {
            double ec = masked_energy(c);
            if (ec <= 1e-12) continue;
            Move mv;
            mv.removals = {c};
            mv.delta = -ec;
            mv.primary_energy = ec;
            mv.label = "carve";
            improving.push_back(std::move(mv));
        }
        // swaps: one out, one in
        std::vector<Cube> frontier = shared_face_neighbors(scene.grid, res.scene.union_complex(), d);
        for (const Cube& out_cell : e.cells(d)) {
            double eo = masked_energy(out_cell);
            for (const Cube& in_cell : frontier) {
                double ei = masked_energy(in_cell);
                if (ei - eo >= -1e-12) continue;
                Move mv;
                mv.removals = {out_cell};
                mv.additions = {in_cell};
                mv.delta = ei - eo;
                mv.primary_energy = eo;
                mv.label = "swap";
                improving.push_back(std::move(mv));
            }
        }
        // two-for-one shortcuts across a shared face
        const auto& dcells = e.cells(d);
        for (std::size_t a = 0; a < dcells.size(); ++a)
            for (std::size_t b = a + 1; b < dcells.size(); ++b) {
                bool adjacent = false;
                for (auto& [fa, s1] : CubicalComplex::boundary_faces(dcells[a])) {
                    (void)s1;
                    for (auto& [fb, s2] : CubicalComplex::boundary_faces(dcells[b])) {
                        (void)s2;
                        if (fa == fb) adjacent = true;
                    }
                }
                if (!adjacent) continue;
                double eab = masked_energy(dcells[a]) + masked_energy(dcells[b]);
                for (const Cube& in_cell : frontier) {
                    double ei = masked_energy(in_cell);
                    if (ei - eab >= -1e-12) continue;
                    Move mv;
                    mv.removals = {dcells[a], dcells[b]};
                    mv.additions = {in_cell};
                    mv.delta = ei - eab;
                    mv.primary_energy = eab;
                    mv.label = "swap2";
                    improving.push_back(std::move(mv));
                }
            }

        std::stable_sort(improving.begin(), improving.end(), [](const Move& x, const Move& y) {
            if (x.primary_energy != y.primary_energy) return x.primary_energy > y.primary_energy;
            if (x.delta != y.delta) return x.delta < y.delta;
            return cell_lex_less(x.removals.front(), y.removals.front());
        });

        bool accepted = false;
        for (const Move& mv : improving)
            if (try_move(mv)) {
                accepted = true;
                break;
            }
        if (accepted) continue;

        // cleanup phase: zero-cost collapses and sub-d carves that shrink
        // the support
        std::vector<Move> cleanup;
        for (int k = d; k >= 1; --k)
            for (const Cube& tau : e.cells(k)) {
                if (scene.gamma.contains(tau)) continue;
                if (k == d && masked_energy(tau) > 1e-12) continue;
                for (auto& [sigma, sign] : CubicalComplex::boundary_faces(tau)) {
                    (void)sign;
                    if (scene.gamma.contains(sigma)) continue;
                    int cofaces = 0;
                    for (const Cube& c2 : e.cells(k))
                        for (auto& [f2, s2] : CubicalComplex::boundary_faces(c2)) {
                            (void)s2;
                            if (f2 == sigma) ++cofaces;
                        }
                    if (cofaces != 1) continue;
                    Move mv;
                    mv.label = "collapse";
                    mv.removals = {tau, sigma};
                    cleanup.push_back(mv);
                    break;
                }
            }
        for (int k = d - 1; k >= 0; --k)
            for (const Cube& tau : e.cells(k)) {
                if (scene.gamma.contains(tau)) continue;
                bool maximal = true;
                for (int kk = k + 1; kk <= e.dim() && maximal; ++kk)
                    for (const Cube& c2 : e.cells(kk)) {
                        for (const Cube& f2 : CubicalComplex::all_faces(c2))
                            if (f2 == tau) {
                                maximal = false;
                                break;
                            }
                        if (!maximal) break;
                    }
                if (!maximal) continue;
                Move mv;
                mv.label = "prune";
                mv.removals = {tau};
                cleanup.push_back(mv);
            }

        for (const Move& mv : cleanup) {
            // collapses need the pair handled atomically
            if (mv.label == "collapse") {
                Scene candidate = res.scene;
                DeformationStep st;
                st.kind = DeformationStep::Kind::Collapse;
                st.footprint = mv.removals;
                st.window = mv.removals;
                for (const Cube& f : CubicalComplex::all_faces(mv.removals.front()))
                    st.window.push_back(f);
                st.fixed_gamma = true;
                DeformationTrace trace{{st}};
                if (!validate_sliding_deformation(trace, candidate).ok) continue;
                candidate = apply_trace(candidate, trace);
                if (!is_reifenberg_competitor(ctx, candidate)) continue;
                double en = objective(candidate, run.mode, cache);
                if (en > res.energy + 1e-12) continue;
                res.scene = std::move(candidate);
                res.energy = en;
                res.trace.push_back(
                    TraceEntry{en, mv.label, res.scene.competitor.cell_count(scene.d)});
                ++res.accepted_moves;
                accepted = true;
                break;
            }
            if (try_move(mv)) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break; // local minimum
    }
    return res;
}

ProbeReport lower_semicontinuity_probe(const std::vector<Scene>& seq,
                                       const CubicalComplex& v_region)
{
    if (seq.empty()) throw std::invalid_argument("probe: empty sequence");
    ProbeReport rep;
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (!seq[i].grid.same_grid(seq[0].grid))
            throw std::invalid_argument("probe: scenes use different grids");
    for (const Scene& s : seq) {
        double side_mass = to_double(s.grid.cell_mass(s.d));
        double m = 0;
        for (const Cube& c : s.competitor.cells(s.d))
            if (!v_region.contains(c)) m += side_mass;
        rep.masses.push_back(m);
    }
    for (std::size_t i = 1; i < rep.masses.size(); ++i)
        if (rep.masses[i] > rep.masses[i - 1] + 1e-12) rep.monotone = false;
    double first = rep.masses.front(), last = rep.masses.back();
    rep.vanishing = last <= 1e-12 || last <= first / 2;
    rep.flagged = !(rep.monotone && rep.vanishing);
    return rep;
}

WeakLimitReport weak_limit_closure_test(const Scene& e_limit,
                                        const std::vector<MeasuredSet>& stray_parts,
                                        const CubicalComplex& confinement,
                                        std::uint64_t seed)
{
    WeakLimitReport rep;
    e_limit.validate();

    // hypotheses: confinement and vanishing stray mass
    bool confined = e_limit.competitor.is_subcomplex_of(confinement);
    std::vector<double> masses;
    for (const MeasuredSet& s : stray_parts) masses.push_back(s.total_mass());
    bool vanishing = true;
    for (std::size_t i = 1; i < masses.size(); ++i)
        if (masses[i] > masses[i - 1] + 1e-12) vanishing = false;
    if (!masses.empty() && masses.back() > 1e-12 && masses.back() > masses.front() / 2)
        vanishing = false;
    rep.hypotheses_ok = confined && vanishing;
    if (!rep.hypotheses_ok) {
        rep.detail = "hypotheses violated";
        rep.direct_predicate = is_reifenberg_competitor(e_limit);
        return rep;
    }

    CubicalComplex eug = e_limit.union_complex();
    std::vector<Point> eg_samples = complex_sample_points(eug);

    // alpha: generous balls around the set, sized so the refinement keeps
    // regions fat enough for the grid-scale smallness condition
    double side = to_double(e_limit.grid.side());
    double alpha_radius = 4 * side;
    std::vector<Ball> alpha;
    for (int k = 0; k <= eug.dim(); ++k)
        for (const Cube& c : eug.cells(k)) alpha.push_back(Ball{eug.barycenter(c), alpha_radius});

    Step1Options s1;
    s1.seed_radius_cap = alpha_radius / 2;
    Covering beta = build_step1_covering(eg_samples, alpha, {}, s1);

    // bounding ball of the limit and every sequence element
    Point centroid(e_limit.grid.ambient_dim(), 0.0);
    for (const Point& p : eg_samples)
        for (std::size_t i = 0; i < centroid.size(); ++i) centroid[i] += p[i];
    for (auto& c : centroid) c /= static_cast<double>(eg_samples.size());
    double radius = side;
    auto reach = [&](const Point& p) {
        double s = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            s += (p[i] - centroid[i]) * (p[i] - centroid[i]);
        return std::sqrt(s);
    };
    for (const Point& p : eg_samples) radius = std::max(radius, reach(p));
    MeasuredSet stray;
    stray.d = e_limit.d;
    if (!stray_parts.empty()) stray = stray_parts.back();
    for (const auto& w : stray.samples) radius = std::max(radius, reach(w.point));
    Ball b0{centroid, radius * 1.05 + side};

    // step 2-3 with a halving side schedule until the smallness condition
    // admits the grid scale
    Step2Options opt;
    opt.side = e_limit.grid.side() / 2;
    opt.seed = seed;
    Step2Result step2;
    bool ran = false;
    for (int tries = 0; tries < 5 && !ran; ++tries) {
        try {
            step2 = step2_pipeline(eg_samples, stray, beta, b0, e_limit.d, opt);
            ran = true;
        } catch (const std::invalid_argument&) {
            opt.side = opt.side / 2;
        }
    }
    if (!ran || !step2.k_large_enough) {
        rep.pipeline_pass = false;
        rep.detail = ran ? step2.failure : "no admissible grid scale";
        rep.direct_predicate = is_reifenberg_competitor(e_limit);
        rep.agree = false;
        return rep;
    }

    std::vector<Point> ek_extra;
    for (const auto& w : stray.samples) ek_extra.push_back(w.point);
    rep.covering_report =
        verify_general_covering(step2.gamma_cover, eg_samples, ek_extra, e_limit.gamma,
                                e_limit.l_cycles, e_limit.d, e_limit.coeff);
    rep.pipeline_pass = rep.covering_report.ok;
    if (!rep.pipeline_pass) rep.detail = rep.covering_report.failure;
    rep.direct_predicate = is_reifenberg_competitor(e_limit);
    rep.agree = rep.pipeline_pass == rep.direct_predicate;
    return rep;
}

RefinementStudy refinement_study(const MinimizationRun& base, int levels, int budget_per_level)
{
    if (levels < 1) throw std::invalid_argument("refinement_study: need at least one level");
    RefinementStudy study;
    MinimizationRun run = base;
    for (int level = 0; level < levels; ++level) {
        MinimizeResult res = minimize(run, budget_per_level);
        study.sides.push_back(run.scene0.grid.side());
        study.minima.push_back(res.energy);
        study.limit_support = res.scene.competitor;
        if (level + 1 == levels) break;
        // halve the grid, transporting the minimizer as the warm start
        Scene next;
        next.grid = run.scene0.grid.subdivided();
        next.gamma = run.scene0.gamma.subdivided();
        next.competitor = res.scene.competitor.subdivided();
        next.d = run.scene0.d;
        next.coeff = run.scene0.coeff;
        for (const IntVec& cyc : run.scene0.l_cycles)
            next.l_cycles.push_back(subdivide_cubical_chain(run.scene0.gamma, next.d - 1, cyc,
                                                            next.gamma));
        CubicalComplex confine = (run.confinement.total_cells() > 0 ? run.confinement
                                                                    : run.scene0.grid)
                                     .subdivided();
        run.scene0 = std::move(next);
        run.confinement = std::move(confine);
    }
    return study;
}

} // namespace plateau
