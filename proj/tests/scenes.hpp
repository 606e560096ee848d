// Shared scene fixtures and randomized scene generation for the spanning
// and acceptance suites.
#ifndef PLATEAU_TESTS_SCENES_HPP
#define PLATEAU_TESTS_SCENES_HPP

#include <plateau/scene.hpp>

#include <random>

#include "fixtures.hpp"

namespace scenes {

using namespace plateau;

/// Disk scene: gamma is the boundary ring of the 2x2 block on the unit
/// grid of side 1/2, E is the filled block, L = H_1(gamma).
inline Scene disk()
{
    Scene s;
    s.grid = CubicalComplex::grid(fixtures::unit_box(2), Rat(1, 2), fixtures::zeros(2));
    s.gamma = fixtures::block_boundary_ring(2, Rat(1, 2), 2, 2);
    s.competitor = s.grid.empty_like();
    std::vector<Cube> cs;
    for (std::int64_t x = 0; x < 2; ++x)
        for (std::int64_t y = 0; y < 2; ++y) cs.push_back(Cube{{x, y}, 0b11});
    s.competitor.insert_all(cs);
    s.d = 2;
    s.coeff = CoefficientGroup::integers();
    auto h1 = homology(s.gamma, 1, s.coeff);
    s.l_cycles.push_back(h1.generators.col(0));
    return s;
}

/// Two boundary points at distance 1 joined (or not) by a path, d = 1.
inline Scene two_points(const Rat& side, bool with_path)
{
    Scene s;
    RatBox box;
    box.lo = {Rat(0), Rat(-1, 4)};
    box.hi = {Rat(1), Rat(1, 4)};
    // widen the box so the two marked vertices always exist
    box.lo[1] = -side;
    box.hi[1] = side;
    s.grid = CubicalComplex::grid(box, side, fixtures::zeros(2));
    s.gamma = s.grid.empty_like();
    Int steps_int = numerator(Rat(1) / side);
    auto steps = steps_int.convert_to<std::int64_t>();
    Cube p{{0, 0}, 0};
    Cube q{{steps, 0}, 0};
    s.gamma.insert_all({p, q});
    s.competitor = s.grid.empty_like();
    if (with_path) {
        std::vector<Cube> cs;
        for (std::int64_t x = 0; x < steps; ++x) cs.push_back(Cube{{x, 0}, 0b01});
        s.competitor.insert_all(cs);
    }
    s.d = 1;
    s.coeff = CoefficientGroup::integers();
    IntVec cyc(s.gamma.cell_count(0), Int(0));
    cyc[s.gamma.index_of(p)] = 1;
    cyc[s.gamma.index_of(q)] = -1;
    s.l_cycles.push_back(cyc);
    return s;
}

/// Two boundary points joined by a path with one detour bump (side 1/8).
inline Scene two_points_with_bump()
{
    Scene s = two_points(Rat(1, 8), false);
    std::vector<Cube> path;
    for (std::int64_t x = 0; x < 3; ++x) path.push_back(Cube{{x, 0}, 0b01});
    path.push_back(Cube{{3, 0}, 0b10});
    path.push_back(Cube{{3, 1}, 0b01});
    path.push_back(Cube{{4, 0}, 0b10});
    for (std::int64_t x = 4; x < 8; ++x) path.push_back(Cube{{x, 0}, 0b01});
    s.competitor = s.grid.empty_like();
    s.competitor.insert_all(path);
    return s;
}

/// Ring scene: gamma is the boundary of a w x w block of side-1/4 cells,
/// E starts as the filled block plus optional spare cells.
inline Scene ring_scene(std::int64_t w, bool with_extra)
{
    Scene s;
    RatBox box;
    box.lo = {Rat(-1, 4), Rat(-1, 4)};
    box.hi = {Rat(9, 4), Rat(9, 4)};
    s.grid = CubicalComplex::grid(box, Rat(1, 4), fixtures::zeros(2));
    s.gamma = s.grid.empty_like();
    std::vector<Cube> ring;
    for (std::int64_t x = 0; x < w; ++x) {
        ring.push_back(Cube{{x, 0}, 0b01});
        ring.push_back(Cube{{x, w}, 0b01});
    }
    for (std::int64_t y = 0; y < w; ++y) {
        ring.push_back(Cube{{0, y}, 0b10});
        ring.push_back(Cube{{w, y}, 0b10});
    }
    s.gamma.insert_all(ring);
    s.competitor = s.grid.empty_like();
    std::vector<Cube> cells;
    for (std::int64_t x = 0; x < w; ++x)
        for (std::int64_t y = 0; y < w; ++y) cells.push_back(Cube{{x, y}, 0b11});
    if (with_extra) {
        cells.push_back(Cube{{5, 2}, 0b11});
        cells.push_back(Cube{{5, 3}, 0b11});
        cells.push_back(Cube{{6, 3}, 0b11});
    }
    s.competitor.insert_all(cells);
    s.d = 2;
    s.coeff = CoefficientGroup::integers();
    auto h1 = homology(s.gamma, 1, s.coeff);
    s.l_cycles.push_back(h1.generators.col(0));
    return s;
}

/// Diagonal two-point scene; the starting competitor is a monotone staircase.
inline Scene diagonal_scene(const Rat& side)
{
    Scene s;
    RatBox box;
    box.lo = {-side, -side};
    box.hi = {Rat(1) + side, Rat(1) + side};
    s.grid = CubicalComplex::grid(box, side, fixtures::zeros(2));
    Int steps_int = numerator(Rat(1) / side);
    auto steps = steps_int.convert_to<std::int64_t>();
    Cube p{{0, 0}, 0};
    Cube q{{steps, steps}, 0};
    s.gamma = s.grid.empty_like();
    s.gamma.insert_all({p, q});
    s.competitor = s.grid.empty_like();
    std::vector<Cube> path;
    for (std::int64_t x = 0; x < steps; ++x) {
        path.push_back(Cube{{x, x}, 0b01});
        path.push_back(Cube{{x + 1, x}, 0b10});
    }
    s.competitor.insert_all(path);
    s.d = 1;
    s.coeff = CoefficientGroup::integers();
    IntVec cyc(s.gamma.cell_count(0), Int(0));
    cyc[s.gamma.index_of(p)] = 1;
    cyc[s.gamma.index_of(q)] = -1;
    s.l_cycles.push_back(cyc);
    return s;
}

inline CoefficientGroup random_coefficients(std::mt19937_64& rng)
{
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0: return CoefficientGroup::integers();
    case 1: return CoefficientGroup::rationals();
    case 2: return CoefficientGroup::integers_mod(2);
    case 3: return CoefficientGroup::integers_mod(3);
    default: return CoefficientGroup::integers_mod(4);
    }
}

/// Random scene on a grid of at most 6x6 squares with d in {1, 2}.
inline Scene random_scene(std::mt19937_64& rng)
{
    Scene s;
    std::uniform_int_distribution<int> cells(3, 6);
    int w = cells(rng);
    RatBox box;
    box.lo = {Rat(0), Rat(0)};
    box.hi = {Rat(w), Rat(w)};
    s.grid = CubicalComplex::grid(box, Rat(1), fixtures::zeros(2));
    s.coeff = random_coefficients(rng);
    s.d = std::uniform_int_distribution<int>(1, 2)(rng);

    if (s.d == 1) {
        // gamma: two distinct vertices; L = [p] - [q]
        std::uniform_int_distribution<std::int64_t> coord(0, w);
        Cube p{{coord(rng), coord(rng)}, 0};
        Cube q = p;
        while (q == p) q = Cube{{coord(rng), coord(rng)}, 0};
        s.gamma = s.grid.empty_like();
        s.gamma.insert_all({p, q});
        IntVec cyc(2, Int(0));
        cyc[s.gamma.index_of(p)] = 1;
        cyc[s.gamma.index_of(q)] = -1;
        s.l_cycles.push_back(cyc);
        // competitor: random subset of edges
        s.competitor = s.grid.empty_like();
        std::vector<Cube> cs;
        std::uniform_real_distribution<double> u(0, 1);
        double density = u(rng) * 0.7 + 0.2;
        for (const Cube& e : s.grid.cells(1))
            if (u(rng) < density) cs.push_back(e);
        s.competitor.insert_all(cs);
    } else {
        // gamma: boundary ring of a random sub-block; L = H_1(gamma)
        std::uniform_int_distribution<std::int64_t> pos(0, w - 2);
        std::int64_t x0 = pos(rng), y0 = pos(rng);
        std::uniform_int_distribution<std::int64_t> ext(2, w);
        std::int64_t x1 = std::min<std::int64_t>(w, x0 + ext(rng));
        std::int64_t y1 = std::min<std::int64_t>(w, y0 + ext(rng));
        s.gamma = s.grid.empty_like();
        std::vector<Cube> ring;
        for (std::int64_t x = x0; x < x1; ++x) {
            ring.push_back(Cube{{x, y0}, 0b01});
            ring.push_back(Cube{{x, y1}, 0b01});
        }
        for (std::int64_t y = y0; y < y1; ++y) {
            ring.push_back(Cube{{x0, y}, 0b10});
            ring.push_back(Cube{{x1, y}, 0b10});
        }
        s.gamma.insert_all(ring);
        auto h1 = homology(s.gamma, 1, s.coeff);
        if (h1.generator_count() > 0) s.l_cycles.push_back(h1.generators.col(0));
        // competitor: random 2-cells, biased to cover the enclosed block
        s.competitor = s.grid.empty_like();
        std::vector<Cube> cs;
        std::uniform_real_distribution<double> u(0, 1);
        bool fill_block = u(rng) < 0.6;
        for (const Cube& c : s.grid.cells(2)) {
            bool inside = c.anchor[0] >= x0 && c.anchor[0] < x1 && c.anchor[1] >= y0 &&
                          c.anchor[1] < y1;
            double pr = inside && fill_block ? 0.95 : 0.25;
            if (u(rng) < pr) cs.push_back(c);
        }
        s.competitor.insert_all(cs);
    }
    return s;
}

} // namespace scenes

#endif
