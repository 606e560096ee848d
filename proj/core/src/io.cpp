#include "plateau/io.hpp"

#include "plateau/covering.hpp"
#include "plateau/sphere.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plateau {

namespace {

Json cube_to_json(const Cube& c, int n)
{
    Json j;
    j["anchor"] = c.anchor;
    std::vector<int> axes;
    for (int i = 0; i < n; ++i)
        if (c.spans(i)) axes.push_back(i + 1); // axes are 1-based on disk
    j["axes"] = axes;
    return j;
}

Cube cube_from_json(const Json& j)
{
    Cube c;
    c.anchor = j.at("anchor").get<std::vector<std::int64_t>>();
    for (int a : j.at("axes").get<std::vector<int>>()) c.axes |= (1u << (a - 1));
    return c;
}

Json cells_to_json(const CubicalComplex& k)
{
    Json cells = Json::array();
    for (int d = 0; d <= k.dim(); ++d)
        for (const Cube& c : k.cells(d)) cells.push_back(cube_to_json(c, k.ambient_dim()));
    return cells;
}

} // namespace

Json complex_to_json(const CubicalComplex& k)
{
    Json j;
    j["kind"] = "cubical";
    j["n"] = k.ambient_dim();
    j["side"] = rational_to_string(k.side());
    Json origin = Json::array();
    for (const Rat& o : k.origin()) origin.push_back(rational_to_string(o));
    j["origin"] = origin;
    j["cells"] = cells_to_json(k);
    return j;
}

CubicalComplex complex_from_json(const Json& j)
{
    if (j.at("kind").get<std::string>() != "cubical")
        throw std::invalid_argument("complex json: expected kind=cubical");
    int n = j.at("n").get<int>();
    Rat side = parse_rational(j.at("side").get<std::string>());
    std::vector<Rat> origin;
    for (const auto& o : j.at("origin")) origin.push_back(parse_rational(o.get<std::string>()));
    CubicalComplex out(n, side, origin);
    std::vector<Cube> cells;
    for (const auto& cj : j.at("cells")) cells.push_back(cube_from_json(cj));
    out.insert_all(cells);
    return out;
}

Json simplicial_to_json(const SimplicialComplex& k)
{
    Json j;
    j["kind"] = "simplicial";
    Json cells = Json::array();
    for (int d = 0; d <= k.dim(); ++d)
        for (const auto& s : k.cells(d)) cells.push_back(s);
    j["cells"] = cells;
    return j;
}

Integrand SceneFile::integrand() const
{
    return Integrand::from_expressions(i_expr, j_expr, lambda);
}

Json scene_file_to_json(const SceneFile& sf)
{
    const Scene& s = sf.scene;
    Json j;
    j["format"] = 1;
    j["kind"] = "scene";
    j["grid"] = complex_to_json(s.grid);
    j["gamma"] = cells_to_json(s.gamma);
    j["competitor"] = cells_to_json(s.competitor);
    j["d"] = s.d;
    j["coefficients"] = s.coeff.name();
    Json l = Json::array();
    for (const IntVec& cyc : s.l_cycles) {
        Json v = Json::array();
        for (const Int& c : cyc) v.push_back(c.convert_to<long long>());
        l.push_back(v);
    }
    j["L"] = l;
    j["integrand"] = Json{{"i", sf.i_expr}, {"j", sf.j_expr}, {"lambda", sf.lambda}};
    if (!sf.stray_sequence.empty()) {
        Json seq = Json::array();
        for (const MeasuredSet& ms : sf.stray_sequence) {
            Json cloud = Json::array();
            for (const auto& w : ms.samples)
                cloud.push_back(Json{{"point", w.point}, {"weight", w.weight}});
            seq.push_back(cloud);
        }
        j["stray_sequence"] = seq;
    }
    return j;
}

namespace {

CoefficientGroup coefficients_from_string(const std::string& s)
{
    if (s == "Z") return CoefficientGroup::integers();
    if (s == "Q") return CoefficientGroup::rationals();
    if (s.rfind("Z/", 0) == 0) return CoefficientGroup::integers_mod(Int(s.substr(2)));
    throw std::invalid_argument("unknown coefficient group: " + s);
}

} // namespace

SceneFile scene_file_from_json(const Json& j)
{
    if (j.value("format", 0) != 1) throw std::invalid_argument("scene: unsupported format");
    SceneFile sf;
    Scene& s = sf.scene;
    s.grid = complex_from_json(j.at("grid"));
    s.gamma = s.grid.empty_like();
    {
        std::vector<Cube> cells;
        for (const auto& cj : j.at("gamma")) cells.push_back(cube_from_json(cj));
        s.gamma.insert_all(cells);
    }
    s.competitor = s.grid.empty_like();
    {
        std::vector<Cube> cells;
        for (const auto& cj : j.at("competitor")) cells.push_back(cube_from_json(cj));
        s.competitor.insert_all(cells);
    }
    s.d = j.at("d").get<int>();
    s.coeff = coefficients_from_string(j.at("coefficients").get<std::string>());
    std::size_t expected = s.gamma.cell_count(s.d - 1);
    std::size_t index = 0;
    for (const auto& vj : j.at("L")) {
        IntVec cyc;
        for (const auto& c : vj) cyc.push_back(Int(c.get<long long>()));
        if (cyc.size() != expected)
            throw std::invalid_argument("L[" + std::to_string(index) +
                                        "] has the wrong chain length");
        auto pres = homology(s.gamma, s.d - 1, s.coeff);
        if (!pres.is_cycle(cyc))
            throw std::invalid_argument("L[" + std::to_string(index) + "] is not a cycle");
        s.l_cycles.push_back(std::move(cyc));
        ++index;
    }
    if (j.contains("integrand")) {
        sf.i_expr = j["integrand"].value("i", "1");
        sf.j_expr = j["integrand"].value("j", "1");
        sf.lambda = j["integrand"].value("lambda", 1.0);
    }
    if (j.contains("stray_sequence")) {
        for (const auto& cloudj : j["stray_sequence"]) {
            MeasuredSet ms;
            ms.d = s.d;
            for (const auto& wj : cloudj) {
                WeightedSample w;
                w.point = wj.at("point").get<std::vector<double>>();
                w.weight = wj.at("weight").get<double>();
                ms.samples.push_back(std::move(w));
            }
            sf.stray_sequence.push_back(std::move(ms));
        }
    }
    sf.scene.validate();
    return sf;
}

SceneFile parse_scene(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scene file: " + path);
    Json j;
    in >> j;
    return scene_file_from_json(j);
}

Json homology_report(const HomologyPresentation& pres)
{
    Json j;
    j["k"] = pres.degree;
    j["coefficients"] = pres.coeff.name();
    j["group"] = pres.group_string();
    Json gens = Json::array();
    for (std::size_t g = 0; g < pres.generator_count(); ++g) {
        Json v = Json::array();
        IntVec col = pres.generators.col(g);
        for (const Int& c : col) v.push_back(c.convert_to<long long>());
        gens.push_back(v);
    }
    j["generators"] = gens;
    return j;
}

std::string off_mesh(const CubicalComplex& support, int d)
{
    std::ostringstream os;
    os << "OFF\n";
    const auto& verts = support.cells(0);
    std::ostringstream body;
    for (const Cube& v : verts) {
        auto p = support.corner_lo(v);
        for (std::size_t i = 0; i < p.size(); ++i)
            body << (i ? " " : "") << to_double(p[i]);
        for (std::size_t i = p.size(); i < 3; ++i) body << " 0";
        body << "\n";
    }
    std::size_t faces = 0;
    for (const Cube& c : support.cells(d)) {
        auto corners = support.vertex_coords(c);
        std::vector<std::size_t> ids;
        for (const Cube& f :
             (d == 0 ? std::vector<Cube>{c} : CubicalComplex::all_faces(c)))
            if (f.dim() == 0) ids.push_back(support.index_of(f));
        if (d == 0) ids = {support.index_of(c)};
        if (d == 2 && ids.size() == 4) std::swap(ids[2], ids[3]); // quad corner order
        body << ids.size();
        for (std::size_t id : ids) body << " " << id;
        body << "\n";
        ++faces;
    }
    os << verts.size() << " " << faces << " 0\n" << body.str();
    return os.str();
}

std::string csv_trace(const std::vector<TraceEntry>& trace)
{
    std::ostringstream os;
    os << "step,energy,d_cells,move\n";
    os.precision(17);
    for (std::size_t i = 0; i < trace.size(); ++i)
        os << i << "," << trace[i].energy << "," << trace[i].d_cells << "," << trace[i].move
           << "\n";
    return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

namespace {

void write_json(const std::string& path, const Json& j)
{
    write_text_atomic(path, j.dump(2) + "\n");
}

int fail_with(const std::string& out_dir, const std::string& message)
{
    Json err{{"error", message}};
    try {
        std::filesystem::create_directories(out_dir);
        write_json(out_dir + "/error.json", err);
    } catch (...) {
    }
    std::fputs((err.dump() + "\n").c_str(), stderr);
    return 1;
}

int run_check(const ExperimentConfig& cfg)
{
    SceneFile sf = parse_scene(cfg.scene_path);
    const Scene& s = sf.scene;
    Json rep;
    rep["format"] = 1;
    rep["reifenberg"] = is_reifenberg_competitor(s);
    rep["nakauchi"] = is_nakauchi_competitor(s);
    auto gamma_h = homology(s.gamma, s.d - 1, s.coeff);
    auto union_h = homology(s.union_complex(), s.d - 1, s.coeff);
    rep["gamma_homology"] = homology_report(gamma_h);
    rep["union_homology"] = homology_report(union_h);
    rep["mayer_vietoris_exact"] =
        mayer_vietoris_check(s.gamma, s.competitor, s.union_complex(), s.d - 1, s.coeff);
    write_json(cfg.out_dir + "/check.json", rep);
    std::printf("reifenberg=%s nakauchi=%s\n", rep["reifenberg"].get<bool>() ? "true" : "false",
                rep["nakauchi"].get<bool>() ? "true" : "false");
    return 0;
}

int run_minimize(const ExperimentConfig& cfg)
{
    SceneFile sf = parse_scene(cfg.scene_path);
    MinimizationRun run;
    run.scene0 = sf.scene;
    run.mode = cfg.mode == "fixed" ? MinimizeMode::WithoutFreeBoundary
                                   : MinimizeMode::WithFreeBoundary;
    run.energy = sf.integrand();
    run.seed = cfg.seed;
    MinimizeResult res = minimize(run, cfg.budget);
    Json rep;
    rep["format"] = 1;
    rep["final_energy"] = res.energy;
    rep["accepted_moves"] = res.accepted_moves;
    rep["d_cells"] = res.scene.competitor.cell_count(res.scene.d);
    write_json(cfg.out_dir + "/report.json", rep);
    SceneFile out_sf = sf;
    out_sf.scene = res.scene;
    write_json(cfg.out_dir + "/final_scene.json", scene_file_to_json(out_sf));
    write_text_atomic(cfg.out_dir + "/final_mesh.off",
                      off_mesh(res.scene.competitor, res.scene.d));
    write_text_atomic(cfg.out_dir + "/trace.csv", csv_trace(res.trace));
    std::printf("final energy %.17g after %zu moves\n", res.energy, res.accepted_moves);
    return 0;
}

int run_refine(const ExperimentConfig& cfg)
{
    SceneFile sf = parse_scene(cfg.scene_path);
    MinimizationRun run;
    run.scene0 = sf.scene;
    run.mode = cfg.mode == "fixed" ? MinimizeMode::WithoutFreeBoundary
                                   : MinimizeMode::WithFreeBoundary;
    run.energy = sf.integrand();
    run.seed = cfg.seed;
    RefinementStudy study = refinement_study(run, cfg.levels, cfg.budget);
    Json rep;
    rep["format"] = 1;
    Json sides = Json::array(), minima = Json::array();
    for (const Rat& s : study.sides) sides.push_back(rational_to_string(s));
    for (double m : study.minima) minima.push_back(m);
    rep["sides"] = sides;
    rep["minima"] = minima;
    write_json(cfg.out_dir + "/study.json", rep);
    write_text_atomic(cfg.out_dir + "/finest_mesh.off",
                      off_mesh(study.limit_support, sf.scene.d));
    std::printf("levels %zu, finest energy %.17g\n", study.minima.size(), study.minima.back());
    return 0;
}

int run_lemma24(const ExperimentConfig& cfg)
{
    SceneFile sf = parse_scene(cfg.scene_path);
    WeakLimitReport rep =
        weak_limit_closure_test(sf.scene, sf.stray_sequence, sf.scene.grid, cfg.seed);
    Json j;
    j["format"] = 1;
    j["hypotheses_ok"] = rep.hypotheses_ok;
    j["pipeline_pass"] = rep.pipeline_pass;
    j["direct_predicate"] = rep.direct_predicate;
    j["agree"] = rep.agree;
    j["detail"] = rep.detail;
    j["equal_d_simplexes"] = rep.covering_report.equal_d_simplexes;
    j["j_injective"] = rep.covering_report.j_injective;
    j["i_gamma_zero_on_L"] = rep.covering_report.i_gamma_zero_on_l;
    write_json(cfg.out_dir + "/lemma24.json", j);
    std::printf("pipeline=%s direct=%s\n", rep.pipeline_pass ? "pass" : "fail",
                rep.direct_predicate ? "true" : "false");
    return rep.agree ? 0 : 2;
}

int run_energy_audit(const ExperimentConfig& cfg)
{
    SceneFile sf = parse_scene(cfg.scene_path);
    Integrand ig = sf.integrand();
    MeasuredSet ms = MeasuredSet::from_cells(sf.scene.competitor, sf.scene.d);
    EnergyReport er = energy(ms, ig);
    AxiomIReport ax1 = check_axiom_i(ig, {ms});
    Json j;
    j["format"] = 1;
    j["total"] = er.total;
    j["hausdorff_mass"] = er.hausdorff_mass;
    j["axiom_i_ok"] = ax1.ok;
    j["axiom_i_worst_ratio"] = ax1.worst_ratio;
    Json osc = Json::array();
    int n = sf.scene.grid.ambient_dim();
    std::vector<double> center(n, 0.0);
    for (double r : {1.0, 0.5, 0.25, 0.125}) {
        double e = oscillation_epsilon(ig, center, r, sf.scene.d, n, cfg.seed, 2000);
        osc.push_back(Json{{"r", r}, {"epsilon", e}});
    }
    j["oscillation"] = osc;
    write_json(cfg.out_dir + "/energy_audit.json", j);
    std::printf("energy %.17g over mass %.17g, axiom(i) %s\n", er.total, er.hausdorff_mass,
                ax1.ok ? "ok" : "violated");
    return ax1.ok ? 0 : 2;
}

int run_sphere(const ExperimentConfig& cfg)
{
    std::ifstream in(cfg.scene_path);
    if (!in) throw std::invalid_argument("cannot open sphere file: " + cfg.scene_path);
    Json j;
    in >> j;
    Sphere s;
    s.k = j.at("k").get<int>();
    s.center = j.at("center").get<std::vector<double>>();
    s.radius = j.at("radius").get<double>();
    for (const auto& b : j.at("basis")) s.basis.push_back(b.get<std::vector<double>>());
    std::vector<double> x = j.at("x").get<std::vector<double>>();
    Json rep;
    rep["format"] = 1;
    auto bad = excluded_radii(s, x);
    rep["excluded_radii"] = bad;
    if (j.contains("r")) {
        double r = j["r"].get<double>();
        Sphere red = intersection_reduction(s, x, r, cfg.tolerance);
        Json cert;
        cert["k"] = red.k;
        if (!red.empty()) {
            cert["center"] = red.center;
            cert["radius"] = red.radius;
            cert["basis"] = red.basis;
        }
        rep["reduction"] = cert;
    }
    write_json(cfg.out_dir + "/sphere.json", rep);
    std::printf("excluded radius %.17g\n", bad[0]);
    return 0;
}

} // namespace

int run(const ExperimentConfig& cfg)
{
    try {
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.command == "check") return run_check(cfg);
        if (cfg.command == "minimize") return run_minimize(cfg);
        if (cfg.command == "refine") return run_refine(cfg);
        if (cfg.command == "lemma24") return run_lemma24(cfg);
        if (cfg.command == "energy-audit") return run_energy_audit(cfg);
        if (cfg.command == "sphere") return run_sphere(cfg);
        return fail_with(cfg.out_dir, "unknown command: " + cfg.command);
    } catch (const std::exception& e) {
        return fail_with(cfg.out_dir, e.what());
    }
}

} // namespace plateau
