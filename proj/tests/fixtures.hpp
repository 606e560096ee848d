#ifndef PLATEAU_TESTS_FIXTURES_HPP
#define PLATEAU_TESTS_FIXTURES_HPP

#include <plateau/complex.hpp>

namespace fixtures {

using plateau::Cube;
using plateau::CubicalComplex;
using plateau::Rat;
using plateau::RatBox;
using plateau::SimplicialComplex;

inline SimplicialComplex triangle_boundary()
{
    return SimplicialComplex::from_simplexes({{0, 1}, {1, 2}, {0, 2}});
}

inline SimplicialComplex filled_triangle()
{
    return SimplicialComplex::from_simplexes({{0, 1, 2}});
}

/// Minimal 6-vertex triangulation of the projective plane: 15 edges,
/// 10 triangles, every edge on exactly two triangles.
inline SimplicialComplex projective_plane()
{
    return SimplicialComplex::from_simplexes({{1, 2, 3},
                                              {1, 3, 4},
                                              {1, 4, 5},
                                              {1, 5, 6},
                                              {1, 2, 6},
                                              {2, 3, 5},
                                              {3, 4, 6},
                                              {2, 4, 5},
                                              {3, 5, 6},
                                              {2, 4, 6}});
}

inline RatBox unit_box(int n)
{
    RatBox b;
    b.lo.assign(n, Rat(0));
    b.hi.assign(n, Rat(1));
    return b;
}

inline std::vector<Rat> zeros(int n) { return std::vector<Rat>(n, Rat(0)); }

inline CubicalComplex unit_grid_2d(const Rat& side)
{
    return CubicalComplex::grid(unit_box(2), side, zeros(2));
}

/// Square annulus: ring of eight 2-cells of a 3x3 block (center removed).
inline CubicalComplex square_annulus()
{
    CubicalComplex out(2, Rat(1, 3), zeros(2));
    std::vector<Cube> cs;
    for (std::int64_t x = 0; x < 3; ++x)
        for (std::int64_t y = 0; y < 3; ++y) {
            if (x == 1 && y == 1) continue;
            cs.push_back(Cube{{x, y}, 0b11});
        }
    out.insert_all(cs);
    return out;
}

/// The filled 3x3 block on the same grid.
inline CubicalComplex filled_block_3x3()
{
    CubicalComplex out(2, Rat(1, 3), zeros(2));
    std::vector<Cube> cs;
    for (std::int64_t x = 0; x < 3; ++x)
        for (std::int64_t y = 0; y < 3; ++y) cs.push_back(Cube{{x, y}, 0b11});
    out.insert_all(cs);
    return out;
}

/// Boundary ring (1-complex) of an axis-aligned block of 2-cells
/// [0,w] x [0,h] in anchor units on the given grid frame.
inline CubicalComplex block_boundary_ring(int n, const Rat& side, std::int64_t w, std::int64_t h)
{
    CubicalComplex out(n, side, zeros(n));
    std::vector<Cube> cs;
    for (std::int64_t x = 0; x < w; ++x) {
        cs.push_back(Cube{{x, 0}, 0b01});
        cs.push_back(Cube{{x, h}, 0b01});
    }
    for (std::int64_t y = 0; y < h; ++y) {
        cs.push_back(Cube{{0, y}, 0b10});
        cs.push_back(Cube{{w, y}, 0b10});
    }
    out.insert_all(cs);
    return out;
}

} // namespace fixtures

#endif
