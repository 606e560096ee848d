#include <doctest.h>

#include <plateau/covering.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "scenes.hpp"

using namespace plateau;

namespace {

std::vector<Point> circle_points(double radius, int count, Point center = {0, 0})
{
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i) {
        double t = 2 * M_PI * i / count;
        pts.push_back({center[0] + radius * std::cos(t), center[1] + radius * std::sin(t)});
    }
    return pts;
}

Covering three_arc_cover(double radius)
{
    // three balls at 120 degrees covering a circle with pairwise overlaps
    // and an empty triple intersection on the circle
    Covering c;
    for (int i = 0; i < 3; ++i) {
        double t = 2 * M_PI * i / 3;
        Region r;
        r.balls.push_back(Ball{{radius * std::cos(t), radius * std::sin(t)}, 1.2 * radius});
        c.regions.push_back(r);
    }
    return c;
}

} // namespace

TEST_CASE("nerve of the circle covered by three arcs is the triangle boundary")
{
    Covering cov = three_arc_cover(1.0);
    auto pts = circle_points(1.0, 240);
    Nerve n = nerve_over_points(as_indexed(cov), pts, 2);
    CHECK(n.complex.cell_count(0) == 3);
    CHECK(n.complex.cell_count(1) == 3);
    CHECK(n.complex.cell_count(2) == 0);
    auto h1 = homology(n.complex, 1, CoefficientGroup::integers());
    CHECK(h1.free_rank == 1);
    CHECK(h1.torsion.empty());
}

TEST_CASE("single region nerve is one vertex")
{
    Covering cov;
    Region r;
    r.balls.push_back(Ball{{0, 0}, 2});
    cov.regions.push_back(r);
    Nerve n = nerve_over_points(as_indexed(cov), {{0.1, 0.0}, {0.5, 0.5}}, 2);
    CHECK(n.complex.cell_count(0) == 1);
    CHECK(n.complex.cell_count(1) == 0);
}

TEST_CASE("chain of four balls gives a path-graph nerve")
{
    Covering cov;
    for (int i = 0; i < 4; ++i) {
        Region r;
        r.balls.push_back(Ball{{static_cast<double>(i), 0.0}, 0.6});
        cov.regions.push_back(r);
    }
    std::vector<Point> pts;
    for (int i = 0; i <= 300; ++i) pts.push_back({3.0 * i / 300, 0.0});
    Nerve n = nerve_over_points(as_indexed(cov), pts, 2);
    CHECK(n.complex.cell_count(0) == 4);
    CHECK(n.complex.cell_count(1) == 3);
    CHECK(n.complex.cell_count(2) == 0);
    CHECK(n.complex.contains({0, 1}));
    CHECK(n.complex.contains({1, 2}));
    CHECK(n.complex.contains({2, 3}));
    CHECK_FALSE(n.complex.contains({0, 2}));
}

TEST_CASE("nerve functoriality under refinement")
{
    // fine: four small balls; coarse: two big balls; iota maps 0,1 -> 0 and
    // 2,3 -> 1 with fine_j inside coarse_iota(j)
    Covering fine;
    for (int i = 0; i < 4; ++i) {
        Region r;
        r.balls.push_back(Ball{{0.8 * i, 0.0}, 0.5});
        fine.regions.push_back(r);
    }
    Covering coarse;
    {
        Region a;
        a.balls.push_back(Ball{{0.4, 0.0}, 1.4});
        coarse.regions.push_back(a);
        Region b;
        b.balls.push_back(Ball{{2.0, 0.0}, 1.4});
        coarse.regions.push_back(b);
    }
    std::vector<Point> pts;
    for (int i = 0; i <= 400; ++i) pts.push_back({2.4 * i / 400, 0.0});
    Nerve nf = nerve_over_points(as_indexed(fine), pts, 2);
    Nerve nc = nerve_over_points(as_indexed(coarse), pts, 2);
    CHECK(nerve_refinement_functorial(nf, nc, {0, 0, 1, 1}));
}

TEST_CASE("step1 covering: single point and disjoint pair")
{
    Step1Options opt;
    // one point, one alpha ball
    Covering single = build_step1_covering({{0, 0}}, {Ball{{0, 0}, 1.0}}, {}, opt);
    CHECK(single.size() == 1);
    CHECK(single.regions[0].contains({0, 0}));
    CHECK(single.multiplicity_bound >= 1);

    // two points at distance 1 with small alpha balls: two disjoint regions
    Covering pair = build_step1_covering({{0, 0}, {1, 0}},
                                         {Ball{{0, 0}, 0.3}, Ball{{1, 0}, 0.3}}, {}, opt);
    CHECK(pair.size() == 2);
    CHECK(pair.regions[0].contains({0, 0}) != pair.regions[1].contains({0, 0}));
    // pairwise witness must be absent: the regions are disjoint
    CHECK_FALSE(pair.witnesses.count({0, 1}));
    CHECK(pair.multiplicity_bound == 1);

    CHECK_THROWS(build_step1_covering({{0, 0}, {5, 5}}, {Ball{{0, 0}, 1.0}}, {}, opt));
}

TEST_CASE("step1 covering of circle samples: certificates have declared dimensions")
{
    auto pts = circle_points(1.0, 8);
    std::vector<Ball> alpha;
    for (const Point& p : pts) alpha.push_back(Ball{p, 1.1});
    Covering cov = build_step1_covering(pts, alpha);
    CHECK(cov.size() >= 1);
    for (const Point& p : pts) {
        bool covered = false;
        for (const Region& r : cov.regions)
            if (r.contains(p)) covered = true;
        CHECK(covered);
    }
    int n = 2;
    for (const auto& [s, spheres] : cov.boundary_certificates) {
        int m = static_cast<int>(s.size());
        for (const Sphere& sp : spheres) {
            if (sp.empty()) continue;
            CHECK(sp.k == n - m);
        }
    }
}

TEST_CASE("nerve projection of the ring cycle")
{
    Scene disk = scenes::disk();
    // covering of the ring by overlapping balls along the boundary
    auto ring_pts = complex_sample_points(disk.gamma);
    std::vector<Ball> alpha;
    for (const Point& p : ring_pts) alpha.push_back(Ball{p, 0.9});
    Covering cov = build_step1_covering(ring_pts, alpha);

    auto proj = project_cycles_to_nerve(disk.gamma, disk.l_cycles, 1, as_indexed(cov));
    REQUIRE(proj.projected.size() == 1);

    std::vector<Point> gamma_pts = complex_sample_points(proj.refined_gamma);
    Nerve n = nerve_over_points(as_indexed(cov), gamma_pts, 2);
    IntVec vec = chain_to_vector(proj.projected[0], n.complex, 1);

    auto pres = homology(n.complex, 1, CoefficientGroup::integers());
    // the projected chain is a genuine cycle of the nerve
    CHECK(pres.is_cycle(vec));
    // the ring covering nerve keeps the circle class alive
    CHECK(pres.free_rank >= 1);
    CHECK_FALSE(pres.class_is_zero(vec));
}

TEST_CASE("verify_general_covering on the disk fixture with E_k = E")
{
    Scene disk = scenes::disk();
    CubicalComplex eug = disk.union_complex();
    auto samples = complex_sample_points(eug);
    std::vector<Ball> alpha;
    for (const Point& p : samples) alpha.push_back(Ball{p, 0.8});
    Covering cov = build_step1_covering(samples, alpha);

    auto rep = verify_general_covering(as_indexed(cov), samples, {}, disk.gamma, disk.l_cycles,
                                       disk.d, disk.coeff);
    INFO(rep.failure);
    CHECK(rep.covers_ek);
    CHECK(rep.axiom2);
    CHECK(rep.equal_d_simplexes);
    CHECK(rep.j_injective);
    CHECK(rep.i_gamma_zero_on_l);
    CHECK(rep.ok);
}

TEST_CASE("verify_general_covering rejects a fat region")
{
    // gamma: ring only; a short fat cover creating a triple intersection in
    // the hole where E u Gamma is absent
    Scene s = scenes::disk();
    s.competitor = s.grid.empty_like(); // E empty: E u Gamma is just the ring
    auto ring_pts = complex_sample_points(s.gamma);

    Covering cov;
    for (int i = 0; i < 3; ++i) {
        double t = 2 * M_PI * i / 3;
        Region r;
        // balls big enough to reach the ring and to overlap over the center
        r.balls.push_back(Ball{{0.5 + 0.3 * std::cos(t), 0.5 + 0.3 * std::sin(t)}, 0.75});
        cov.regions.push_back(r);
    }
    auto rep = verify_general_covering(as_indexed(cov), ring_pts, {}, s.gamma, s.l_cycles, s.d,
                                       s.coeff);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failure == "ambient-d-simplex-missing-from-E");
    CHECK(rep.bad_subset.size() == 3);
}
