#include <doctest.h>

#include <plateau/ff.hpp>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "scenes.hpp"

using namespace plateau;

namespace {

CubicalComplex one_square_complex()
{
    CubicalComplex k(2, Rat(1), {Rat(0), Rat(0)});
    k.insert_with_faces(Cube{{0, 0}, 0b11});
    return k;
}

} // namespace

TEST_CASE("select_far_subcomplex around a center point")
{
    RatBox box;
    box.lo = {Rat(-5), Rat(-5)};
    box.hi = {Rat(5), Rat(5)};
    auto grid = CubicalComplex::grid(box, Rat(1), fixtures::zeros(2));
    double ell = grid.diameter_bound(); // sqrt(2)
    Ball b0{{0, 0}, 2.5};
    std::vector<Point> eg{{0.0, 0.0}};
    auto l = select_far_subcomplex(grid, eg, ell, b0);

    // brute-force check: a top cell is picked iff one of its probe points
    // sits in the double ball at distance >= 2 ell
    for (const Cube& c : grid.cells(2)) {
        bool expect = false;
        std::vector<Point> probes = grid.vertex_coords(c);
        probes.push_back(grid.barycenter(c));
        for (const Point& p : probes) {
            double r = std::hypot(p[0], p[1]);
            if (r <= 2 * b0.radius && r >= 2 * ell) expect = true;
        }
        CHECK(l.contains(c) == expect);
    }
    // the guarantee: cells of L never meet E u Gamma
    for (int k = 0; k <= l.dim(); ++k)
        for (const Cube& c : l.cells(k)) {
            auto lo = l.corner_lo(c);
            auto hi = l.corner_hi(c);
            bool meets = true;
            for (int i = 0; i < 2; ++i)
                if (to_double(lo[i]) > 0 || to_double(hi[i]) < 0) meets = false;
            CHECK_FALSE(meets);
        }

    // everything close: L empty
    std::vector<Point> everywhere;
    for (const Cube& v : grid.cells(0)) {
        auto p = grid.corner_lo(v);
        everywhere.push_back({to_double(p[0]), to_double(p[1])});
    }
    auto l2 = select_far_subcomplex(grid, everywhere, ell, b0);
    CHECK(l2.total_cells() == 0);

    CHECK_THROWS(select_far_subcomplex(grid, eg, 0.5, b0)); // diameter > ell
}

TEST_CASE("ff_project pushes a point out of a square, within the cell")
{
    auto l = one_square_complex();
    MeasuredSet s;
    s.d = 1;
    s.samples.push_back(WeightedSample{{0.3, 0.4}, 1.0, std::nullopt});
    auto res = ff_project(s, l, 1, FfOptions{.seed = 7});
    REQUIRE(res.map_points.size() == 1);
    const Point& img = res.map_points[0].second;
    // image on the boundary of the unit square
    bool on_boundary = std::abs(img[0]) < 1e-12 || std::abs(img[0] - 1) < 1e-12 ||
                       std::abs(img[1]) < 1e-12 || std::abs(img[1] - 1) < 1e-12;
    CHECK(on_boundary);
    CHECK(img[0] >= -1e-12);
    CHECK(img[0] <= 1 + 1e-12);
    CHECK(res.displacement_max <= l.diameter_bound());
}

TEST_CASE("ff_project is the identity on the (d-1)-skeleton")
{
    // d = 1: fixed points of the projection are the vertices
    auto l = one_square_complex();
    MeasuredSet s;
    s.d = 1;
    s.samples.push_back(WeightedSample{{0.0, 0.0}, 0.5, std::nullopt});
    s.samples.push_back(WeightedSample{{1.0, 1.0}, 0.5, std::nullopt});
    auto res = ff_project(s, l, 1, FfOptions{.tau_factor = 0.5, .seed = 3});
    for (auto& [in, out] : res.map_points)
        for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == doctest::Approx(in[i]));
    CHECK(res.displacement_max == doctest::Approx(0.0));

    // d = 2: points already on edges stay put
    MeasuredSet s2;
    s2.d = 2;
    s2.samples.push_back(WeightedSample{{0.0, 0.25}, 0.5, std::nullopt});
    s2.samples.push_back(WeightedSample{{0.75, 1.0}, 0.5, std::nullopt});
    auto res2 = ff_project(s2, l, 2, FfOptions{.tau_factor = 0.5, .seed = 3});
    for (auto& [in, out] : res2.map_points)
        for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == doctest::Approx(in[i]));
    CHECK(res2.displacement_max == doctest::Approx(0.0));
}

TEST_CASE("threshold round pushes small masses to the d-1 skeleton")
{
    auto l = one_square_complex();
    MeasuredSet tiny = MeasuredSet::segment({0.2, 0.3}, {0.4, 0.3}, 64); // mass 0.2 < tau
    auto res = ff_project(tiny, l, 1, FfOptions{.tau_factor = 0.5, .seed = 11});
    CHECK(res.overfull_cells.empty());
    for (auto& [in, out] : res.map_points) {
        // images are on the 0-skeleton: both coordinates integral
        CHECK(std::abs(out[0] - std::round(out[0])) < 1e-9);
        CHECK(std::abs(out[1] - std::round(out[1])) < 1e-9);
    }

    MeasuredSet fat = MeasuredSet::segment({0.1, 0.3}, {0.9, 0.3}, 64); // mass 0.8 > tau
    auto res2 = ff_project(fat, l, 1, FfOptions{.tau_factor = 0.5, .seed = 11});
    CHECK(res2.overfull_cells.size() == 1);
}

TEST_CASE("projection measure bound: diametral segments of the unit square")
{
    auto l = one_square_complex();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
        MeasuredSet seg = MeasuredSet::segment(a, b, 400);
        double mass = seg.total_mass();
        if (mass < 1e-3) continue;
        // tau = 0 keeps the extra d-cell round off so the image stays on edges
        auto res = ff_project(seg, l, 1, FfOptions{.tau_factor = 0.0, .seed = trial});
        REQUIRE(res.overfull_cells.size() == 1);
        CHECK(res.displacement_max <= l.diameter_bound() + 1e-9);
        for (auto& [cell, len] : res.polyline_length_per_cell) {
            if (cell.dim() > 1) continue;
            worst = std::max(worst, len / mass);
        }
        // cell preservation: images stay inside the closed square
        for (auto& [in, out] : res.map_points) {
            CHECK(out[0] >= -1e-9);
            CHECK(out[0] <= 1 + 1e-9);
            CHECK(out[1] >= -1e-9);
            CHECK(out[1] <= 1 + 1e-9);
        }
    }
    CHECK(worst > 0);
    CHECK(worst <= 10.0); // empirical C(2) for d = 1
}

TEST_CASE("beta_infinity membership")
{
    // two overlapping balls, d = 1: the complement excludes both closures
    Covering beta;
    {
        Region r1;
        r1.balls.push_back(Ball{{0, 0}, 1.0});
        beta.regions.push_back(r1);
        Region r2;
        r2.balls.push_back(Ball{{1.2, 0}, 1.0});
        beta.regions.push_back(r2);
    }
    auto binf = build_beta_infinity(beta, 1, nullptr);
    CHECK_FALSE(binf.contains({0.0, 0.0}));   // inside the first closure
    CHECK_FALSE(binf.contains({0.6, 0.0}));   // inside both
    CHECK(binf.contains({3.0, 0.0}));         // far outside
    CHECK(binf.contains({-1.0 - 0.2, 0.0}));  // outside both closures

    // with d = 2 only the 2-fold closed intersections are removed
    auto binf2 = build_beta_infinity(beta, 2, nullptr);
    CHECK(binf2.contains({-0.5, 0.0}));       // in one ball only
    CHECK_FALSE(binf2.contains({0.6, 0.0}));  // in the pairwise intersection

    // the disjointness identity: no point of beta_infinity lies in d open
    // regions at once
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 3);
    for (int t = 0; t < 500; ++t) {
        Point p{u(rng), u(rng)};
        if (!binf.contains(p)) continue;
        int open_count = 0;
        for (const Region& r : beta.regions)
            if (r.contains(p)) ++open_count;
        CHECK(open_count < 1);
    }
}

TEST_CASE("translate_grid avoids sphere obstacles")
{
    RatBox box;
    box.lo = {Rat(-2), Rat(-2)};
    box.hi = {Rat(2), Rat(2)};
    auto grid = CubicalComplex::grid(box, Rat(1, 2), fixtures::zeros(2));

    // no obstacles: zero offset accepted
    auto none = translate_grid(grid, 1, {}, 42);
    for (const Rat& o : none.offset) CHECK(o == 0);

    // a circle obstacle in R^2, d = 1: vertices must clear it
    Sphere circle;
    circle.k = 1;
    circle.center = {0.0, 0.0};
    circle.radius = 1.0;
    circle.basis = {{1, 0}, {0, 1}};
    auto moved = translate_grid(grid, 1, {circle}, 42);
    CHECK(moved.clearance > 0);

    // d = 2 in R^3 with several random sphere obstacles
    RatBox box3;
    box3.lo = {Rat(-1), Rat(-1), Rat(-1)};
    box3.hi = {Rat(1), Rat(1), Rat(1)};
    auto grid3 = CubicalComplex::grid(box3, Rat(1, 2), fixtures::zeros(3));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1), ur(0.2, 0.8);
    int ok = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Sphere> obstacles;
        for (int i = 0; i < 10; ++i) {
            Sphere s = Sphere::full_sphere({u(rng), u(rng), u(rng)}, ur(rng));
            obstacles.push_back(s);
        }
        auto t = translate_grid(grid3, 2, obstacles, 1000 + trial, 8);
        if (t.attempts <= 5 && t.clearance > 0) ++ok;
    }
    CHECK(ok == 20);
}

TEST_CASE("step2 pipeline on the disk with a light tentacle")
{
    Scene disk = scenes::disk();
    CubicalComplex eug = disk.union_complex();
    auto eg_samples = complex_sample_points(eug);

    std::vector<Ball> alpha;
    for (const Point& p : eg_samples) alpha.push_back(Ball{p, 0.8});
    Covering beta = build_step1_covering(eg_samples, alpha);

    // a light stray cloud far from the disk
    MeasuredSet stray;
    stray.d = 2;
    for (int i = 0; i < 16; ++i)
        stray.samples.push_back(
            WeightedSample{{2.5 + 0.01 * i, 2.5}, 1e-4, std::nullopt});

    Ball b0{{0.5, 0.5}, 3.5};
    Step2Options opt;
    opt.side = Rat(1, 8);
    opt.seed = 17;
    auto res = step2_pipeline(eg_samples, stray, beta, b0, disk.d, opt);
    INFO(res.failure);
    CHECK(res.k_large_enough);
    CHECK(res.translation.clearance > 0);
    // phi = id on E u Gamma
    for (const Point& p : eg_samples) {
        Point q = res.phi(p);
        CHECK(std::hypot(q[0] - p[0], q[1] - p[1]) < 1e-9);
    }
    // displacement bound
    CHECK(res.projection.displacement_max <= res.grid.diameter_bound() + 1e-9);

    // heavy stray mass trips the threshold
    MeasuredSet heavy;
    heavy.d = 2;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            heavy.samples.push_back(
                WeightedSample{{2.4 + 0.05 * i, 2.4 + 0.05 * j}, 0.01, std::nullopt});
    auto res2 = step2_pipeline(eg_samples, heavy, beta, b0, disk.d, opt);
    CHECK_FALSE(res2.k_large_enough);
}
