#include "plateau/scene.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace plateau {

void Scene::validate() const
{
    if (d < 1 || d > grid.ambient_dim())
        throw std::invalid_argument("scene: need 1 <= d <= n");
    if (!gamma.is_subcomplex_of(grid))
        throw std::invalid_argument("scene: gamma is not a subcomplex of the grid");
    if (!competitor.is_subcomplex_of(grid))
        throw std::invalid_argument("scene: competitor is not a subcomplex of the grid");
    auto gp = homology(gamma, d - 1, coeff);
    for (std::size_t i = 0; i < l_cycles.size(); ++i) {
        if (l_cycles[i].size() != gamma.cell_count(d - 1))
            throw std::invalid_argument("scene: L[" + std::to_string(i) +
                                        "] has the wrong chain length");
        if (!gp.is_cycle(l_cycles[i]))
            throw std::invalid_argument("scene: L[" + std::to_string(i) + "] is not a cycle");
    }
}

CubicalComplex Scene::union_complex() const { return competitor.union_with(gamma); }

SpanningContext make_spanning_context(const Scene& scene)
{
    SpanningContext ctx;
    ctx.gamma_pres =
        std::make_shared<HomologyPresentation>(homology(scene.gamma, scene.d - 1, scene.coeff));
    ctx.l = subgroup_from_cycles(*ctx.gamma_pres, scene.l_cycles);
    return ctx;
}

bool is_reifenberg_competitor(const SpanningContext& ctx, const Scene& scene)
{
    CubicalComplex eug = scene.union_complex();
    auto target =
        std::make_shared<HomologyPresentation>(homology(eug, scene.d - 1, scene.coeff));
    auto f = induced_from_chain_map(ctx.gamma_pres, target,
                                    inclusion_chain_map(scene.gamma, eug, scene.d - 1));
    return is_zero_on_subgroup(f, ctx.l);
}

bool is_reifenberg_competitor(const Scene& scene)
{
    return is_reifenberg_competitor(make_spanning_context(scene), scene);
}

bool is_nakauchi_competitor(const Scene& scene)
{
    CubicalComplex eg = scene.competitor.intersection_with(scene.gamma);
    int k = scene.d - 1;

    auto p_eg = std::make_shared<HomologyPresentation>(homology(eg, k, scene.coeff));
    auto p_gamma = std::make_shared<HomologyPresentation>(homology(scene.gamma, k, scene.coeff));
    auto p_e = std::make_shared<HomologyPresentation>(homology(scene.competitor, k, scene.coeff));

    auto i_star = induced_from_chain_map(p_eg, p_gamma, inclusion_chain_map(eg, scene.gamma, k));
    auto i_prime =
        induced_from_chain_map(p_eg, p_e, inclusion_chain_map(eg, scene.competitor, k));

    SubgroupSpec l = subgroup_from_cycles(*p_gamma, scene.l_cycles);

    // (v, 0) must lie in the image of (i_*, i'_*) inside H(Gamma) + H(E).
    std::size_t gg = p_gamma->generator_count(), ge = p_e->generator_count();
    IntMat stacked = IntMat::vcat(i_star.matrix, i_prime.matrix);
    IntVec orders = p_gamma->orders;
    orders.insert(orders.end(), p_e->orders.begin(), p_e->orders.end());

    bool rational = scene.coeff.tag == CoefficientGroup::Tag::Rationals;
    for (const IntVec& v : l.generators) {
        IntVec elem(gg + ge, Int(0));
        for (std::size_t i = 0; i < gg; ++i) elem[i] = v[i];
        if (!module_in_image(stacked, orders, elem, rational)) return false;
    }
    return true;
}

bool superset_closure_check(const Scene& scene, const CubicalComplex& f)
{
    if (!scene.competitor.is_subcomplex_of(f) || !f.is_subcomplex_of(scene.grid))
        throw std::invalid_argument("superset_closure_check: F must satisfy E <= F <= grid");
    Scene enlarged = scene;
    enlarged.competitor = f;
    return is_reifenberg_competitor(enlarged);
}

// ---------------------------------------------------------------------------
// Cellular maps

const std::vector<std::int64_t>&
CellularMap::image_vertex(const std::vector<std::int64_t>& v) const
{
    auto it = vertex_images.find(v);
    if (it == vertex_images.end())
        throw std::invalid_argument("cellular map: vertex without an image");
    return it->second;
}

namespace {

std::vector<Cube> cell_vertices(const Cube& c)
{
    if (c.dim() == 0) return {c};
    std::vector<Cube> verts;
    for (const Cube& f : CubicalComplex::all_faces(c))
        if (f.dim() == 0) verts.push_back(f);
    return verts;
}

} // namespace

Cube CellularMap::image_cube(const CubicalComplex& domain, const Cube& c) const
{
    (void)domain;
    int n = static_cast<int>(c.anchor.size());
    std::vector<std::int64_t> lo, hi;
    bool first = true;
    for (const Cube& v : cell_vertices(c)) {
        const auto& img = image_vertex(v.anchor);
        if (first) {
            lo = hi = img;
            first = false;
        } else {
            for (int i = 0; i < n; ++i) {
                lo[i] = std::min(lo[i], img[i]);
                hi[i] = std::max(hi[i], img[i]);
            }
        }
    }
    Cube out;
    out.anchor = lo;
    out.axes = 0;
    for (int i = 0; i < n; ++i) {
        if (hi[i] - lo[i] > 1)
            throw std::invalid_argument("cellular map: image of a cell is not a cell");
        if (hi[i] - lo[i] == 1) out.axes |= (1u << i);
    }
    return out;
}

CellularMap CellularMap::identity_on(const CubicalComplex& domain)
{
    CellularMap f;
    for (const Cube& v : domain.cells(0)) f.vertex_images[v.anchor] = v.anchor;
    return f;
}

namespace {

CubicalComplex image_complex(const CellularMap& f, const CubicalComplex& domain,
                             const CubicalComplex& grid)
{
    CubicalComplex out = grid.empty_like();
    std::vector<Cube> cells;
    for (int k = 0; k <= domain.dim(); ++k)
        for (const Cube& c : domain.cells(k)) {
            Cube img = f.image_cube(domain, c);
            if (!grid.contains(img))
                throw std::invalid_argument("cellular map: image leaves the grid");
            cells.push_back(img);
        }
    out.insert_all(cells);
    return out;
}

bool vertices_span_cell_of(const CubicalComplex& host, const std::vector<Cube>& verts)
{
    if (verts.empty()) return true;
    int n = host.ambient_dim();
    std::vector<std::int64_t> lo = verts[0].anchor, hi = verts[0].anchor;
    for (const Cube& v : verts)
        for (int i = 0; i < n; ++i) {
            lo[i] = std::min(lo[i], v.anchor[i]);
            hi[i] = std::max(hi[i], v.anchor[i]);
        }
    Cube box;
    box.anchor = lo;
    box.axes = 0;
    for (int i = 0; i < n; ++i) {
        if (hi[i] - lo[i] > 1) return false;
        if (hi[i] - lo[i] == 1) box.axes |= (1u << i);
    }
    return host.contains(box);
}

void validate_certificate(const Scene& scene, const CellularMap& f,
                          const HomotopyCertificate& cert)
{
    if (cert.kind == HomotopyCertificate::Kind::IdentityOnGammaIntersection) {
        CubicalComplex eg = scene.competitor.intersection_with(scene.gamma);
        for (const Cube& v : eg.cells(0))
            if (f.image_vertex(v.anchor) != v.anchor)
                throw std::invalid_argument(
                    "certificate invalid: map is not the identity on E cap gamma");
        return;
    }

    // GammaHomotopy: contiguous chain of cellular maps through gamma,
    // starting at the identity and ending at f restricted to gamma.
    const auto& stages = cert.stages;
    if (stages.empty()) throw std::invalid_argument("certificate invalid: no stages");
    for (const Cube& v : scene.gamma.cells(0)) {
        if (stages.front().image_vertex(v.anchor) != v.anchor)
            throw std::invalid_argument("certificate invalid: first stage is not the identity");
        if (stages.back().image_vertex(v.anchor) != f.image_vertex(v.anchor))
            throw std::invalid_argument("certificate invalid: last stage differs from the map");
    }

    for (std::size_t t = 0; t < stages.size(); ++t) {
        for (int k = 0; k <= scene.gamma.dim(); ++k)
            for (const Cube& c : scene.gamma.cells(k)) {
                Cube img = stages[t].image_cube(scene.gamma, c);
                if (!scene.gamma.contains(img))
                    throw std::invalid_argument("certificate invalid: stage " +
                                                std::to_string(t) +
                                                " moves a gamma cell off gamma");
            }
        if (t + 1 == stages.size()) continue;
        for (int k = 0; k <= scene.gamma.dim(); ++k)
            for (const Cube& c : scene.gamma.cells(k)) {
                std::vector<Cube> images;
                for (const Cube& v : cell_vertices(c)) {
                    images.push_back(Cube{stages[t].image_vertex(v.anchor), 0});
                    images.push_back(Cube{stages[t + 1].image_vertex(v.anchor), 0});
                }
                if (!vertices_span_cell_of(scene.gamma, images))
                    throw std::invalid_argument("certificate invalid: stages " +
                                                std::to_string(t) + "," + std::to_string(t + 1) +
                                                " are not contiguous");
            }
    }
}

} // namespace

Scene pushforward_competitor(const Scene& scene, const CellularMap& f,
                             const HomotopyCertificate& cert)
{
    validate_certificate(scene, f, cert);

    Scene out = scene;
    out.competitor = image_complex(f, scene.competitor, scene.grid);
    if (!is_reifenberg_competitor(out))
        throw std::logic_error("pushforward image failed the spanning predicate");
    return out;
}

// ---------------------------------------------------------------------------
// Sliding deformation traces

namespace {

bool in_window(const std::vector<Cube>& window, const Cube& c)
{
    return std::find(window.begin(), window.end(), c) != window.end();
}

TraceVerdict fail(std::size_t step, std::string why)
{
    return TraceVerdict{false, std::move(why), step};
}

CubicalComplex remove_cells(const CubicalComplex& e, const std::vector<Cube>& victims,
                            bool* closure_ok)
{
    CubicalComplex next = e.empty_like();
    std::vector<Cube> keep;
    for (int k = 0; k <= e.dim(); ++k)
        for (const Cube& c : e.cells(k))
            if (std::find(victims.begin(), victims.end(), c) == victims.end()) keep.push_back(c);
    for (const Cube& c : keep) next.insert_with_faces(c);
    if (closure_ok) *closure_ok = next.total_cells() == keep.size();
    return next;
}

} // namespace

TraceVerdict validate_sliding_deformation(const DeformationTrace& trace, const Scene& scene)
{
    CubicalComplex e = scene.competitor;
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
        const DeformationStep& st = trace.steps[s];
        for (const Cube& c : st.footprint) {
            if (!e.contains(c)) return fail(s, "footprint-not-in-competitor");
            if (!in_window(st.window, c)) return fail(s, "footprint-outside-window");
            for (const Cube& fc : CubicalComplex::all_faces(c))
                if (!in_window(st.window, fc))
                    return fail(s, "footprint-closure-outside-window");
            // a step claiming to keep gamma fixed may not move gamma cells;
            // free-boundary steps (fixed_gamma = false) retract inside the
            // closed gamma cell, which stays on gamma
            if (st.fixed_gamma && scene.gamma.contains(c)) return fail(s, "gamma-escape");
        }
        if (st.kind == DeformationStep::Kind::Collapse) {
            if (st.footprint.size() != 2) return fail(s, "collapse-footprint-size");
            const Cube& tau = st.footprint[0];
            const Cube& sigma = st.footprint[1];
            if (sigma.dim() + 1 != tau.dim()) return fail(s, "not-a-face-pair");
            bool is_face = false;
            for (auto& [fc, sign] : CubicalComplex::boundary_faces(tau)) {
                (void)sign;
                if (fc == sigma) is_face = true;
            }
            if (!is_face) return fail(s, "not-a-face-pair");
            for (const Cube& c : e.cells(sigma.dim() + 1)) {
                if (c == tau) continue;
                for (auto& [fc, sign] : CubicalComplex::boundary_faces(c)) {
                    (void)sign;
                    if (fc == sigma) return fail(s, "not-free-face");
                }
            }
        } else {
            if (st.footprint.size() != 1) return fail(s, "carve-footprint-size");
            const Cube& tau = st.footprint[0];
            for (int k = tau.dim() + 1; k <= e.dim(); ++k)
                for (const Cube& c : e.cells(k))
                    for (const Cube& fc : CubicalComplex::all_faces(c))
                        if (fc == tau) return fail(s, "not-maximal");
        }
        bool closure_ok = true;
        e = remove_cells(e, st.footprint, &closure_ok);
        if (!closure_ok) return fail(s, "face-closure-broken");
    }
    return TraceVerdict{};
}

Scene apply_trace(const Scene& scene, const DeformationTrace& trace)
{
    TraceVerdict v = validate_sliding_deformation(trace, scene);
    if (!v.ok)
        throw std::invalid_argument("invalid deformation trace at step " +
                                    std::to_string(v.step) + ": " + v.violation);
    Scene out = scene;
    CubicalComplex e = scene.competitor;
    for (const DeformationStep& st : trace.steps) e = remove_cells(e, st.footprint, nullptr);
    out.competitor = e;
    return out;
}

Scene pushforward_competitor(const Scene& scene, const DeformationTrace& trace)
{
    Scene out = apply_trace(scene, trace);
    if (!is_reifenberg_competitor(out))
        throw std::logic_error("trace pushforward failed the spanning predicate");
    return out;
}

} // namespace plateau
